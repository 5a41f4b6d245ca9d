//! Backtracking search for natural transformations under constraints.
//!
//! Every hom-set enumeration, lifting problem and section search in the crate
//! is an instance of this engine. Elements of the source are visited in
//! object order (lowest level first) and then by index; assigning an element
//! propagates along every arrow into its level, so naturality is enforced as
//! soon as both ends of a square are known.

use std::ops::ControlFlow;

use crate::error::{Error, Result};
use crate::presheaf::{NatMap, Presheaf};

pub const DEFAULT_MAX_NODES: u64 = 1_000_000;
const UNSET: usize = usize::MAX;

#[derive(Clone)]
pub struct MapSearch {
    src: Presheaf,
    dst: Presheaf,
    fixed: Vec<(usize, usize, usize)>,
    candidates: Vec<Vec<Option<Vec<usize>>>>,
    injective: bool,
    guided: bool,
    max_nodes: u64,
    context: String,
}

impl MapSearch {
    pub fn new(src: &Presheaf, dst: &Presheaf) -> Result<Self> {
        src.check_same_base(dst)?;
        Ok(MapSearch {
            src: src.clone(),
            dst: dst.clone(),
            fixed: Vec::new(),
            candidates: src.sizes().iter().map(|&s| vec![None; s]).collect(),
            injective: false,
            guided: false,
            max_nodes: DEFAULT_MAX_NODES,
            context: "searching natural maps".into(),
        })
    }

    /// Forces `x ↦ v` at level `c`.
    pub fn fix(&mut self, c: usize, x: usize, v: usize) -> &mut Self {
        self.fixed.push((c, x, v));
        self
    }

    /// Fixes every component of `along ∘ m = top`-style constraints:
    /// `x' = along(x)` must go to `top(x)`.
    pub fn fix_along(&mut self, along: &NatMap, top: &NatMap) -> &mut Self {
        for c in 0..along.src().sizes().len() {
            for x in 0..along.src().size(c) {
                self.fixed.push((c, along.apply(c, x), top.apply(c, x)));
            }
        }
        self
    }

    /// Restricts the image of `x` at level `c` to `allowed`.
    pub fn restrict(&mut self, c: usize, x: usize, mut allowed: Vec<usize>) -> &mut Self {
        allowed.sort_unstable();
        allowed.dedup();
        self.candidates[c][x] = Some(allowed);
        self
    }

    /// Requires the composite with `proj: dst -> base` to equal `over: src -> base`.
    pub fn over(&mut self, proj: &NatMap, over: &NatMap) -> &mut Self {
        let fibers = fibers(proj);
        for c in 0..self.src.sizes().len() {
            for x in 0..self.src.size(c) {
                let b = over.apply(c, x);
                self.candidates[c][x] = Some(fibers[c][b].clone());
            }
        }
        self
    }

    pub fn injective(&mut self, yes: bool) -> &mut Self {
        self.injective = yes;
        self
    }

    /// Branches next on the unassigned element with the fewest consistent
    /// values, backtracking as soon as some element has none. Costlier per
    /// node; for extension problems whose free elements hang off fixed ones.
    pub fn guided(&mut self, yes: bool) -> &mut Self {
        self.guided = yes;
        self
    }

    pub fn max_nodes(&mut self, n: u64) -> &mut Self {
        self.max_nodes = n;
        self
    }

    pub fn context(&mut self, what: impl Into<String>) -> &mut Self {
        self.context = what.into();
        self
    }

    /// Runs the search, handing each complete assignment to `visit`.
    /// Returns the number of branch nodes explored.
    pub fn run(&self, mut visit: impl FnMut(&[Vec<usize>]) -> ControlFlow<()>) -> Result<u64> {
        let mut st = State {
            s: self,
            assign: self.src.sizes().iter().map(|&n| vec![UNSET; n]).collect(),
            used: if self.injective {
                self.dst.sizes().iter().map(|&n| vec![false; n]).collect()
            } else {
                Vec::new()
            },
            trail: Vec::new(),
            nodes: 0,
        };
        if self.injective && (0..self.src.sizes().len()).any(|c| self.src.size(c) > self.dst.size(c)) {
            return Ok(0);
        }
        for &(c, x, v) in &self.fixed {
            match st.assign[c][x] {
                UNSET => {
                    if !st.try_assign(c, x, v) {
                        return Ok(0);
                    }
                }
                w if w != v => return Ok(0),
                _ => {}
            }
        }
        let order: Vec<(usize, usize)> = (0..self.src.sizes().len())
            .flat_map(|c| (0..self.src.size(c)).map(move |x| (c, x)))
            .collect();
        let _ = st.go(&order, 0, &mut visit)?;
        Ok(st.nodes)
    }

    pub fn first(&self) -> Result<Option<NatMap>> {
        let mut found = None;
        self.run(|a| {
            found = Some(a.to_vec());
            ControlFlow::Break(())
        })?;
        Ok(found.map(|c| NatMap::raw(self.src.clone(), self.dst.clone(), c)))
    }

    pub fn all(&self) -> Result<Vec<NatMap>> {
        let mut out = Vec::new();
        self.run(|a| {
            out.push(NatMap::raw(self.src.clone(), self.dst.clone(), a.to_vec()));
            ControlFlow::Continue(())
        })?;
        Ok(out)
    }

    pub fn count(&self) -> Result<usize> {
        let mut n = 0;
        self.run(|_| {
            n += 1;
            ControlFlow::Continue(())
        })?;
        Ok(n)
    }
}

struct State<'a> {
    s: &'a MapSearch,
    assign: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
    trail: Vec<(usize, usize)>,
    nodes: u64,
}

impl State<'_> {
    fn allowed(&self, c: usize, x: usize, v: usize) -> bool {
        match &self.s.candidates[c][x] {
            None => true,
            Some(list) => list.binary_search(&v).is_ok(),
        }
    }

    fn try_assign(&mut self, c: usize, x: usize, v: usize) -> bool {
        let base = self.s.src.base();
        for &f in base.arrows_into(c) {
            let d = base.dom(f);
            let y = self.s.src.act(f, x);
            let w = self.s.dst.act(f, v);
            let cur = self.assign[d][y];
            if cur == UNSET {
                if !self.allowed(d, y, w) {
                    return false;
                }
                if self.s.injective {
                    if self.used[d][w] {
                        return false;
                    }
                    self.used[d][w] = true;
                }
                self.assign[d][y] = w;
                self.trail.push((d, y));
            } else if cur != w {
                return false;
            }
        }
        true
    }

    fn options(&self, c: usize, x: usize) -> Vec<usize> {
        match &self.s.candidates[c][x] {
            Some(list) => list.clone(),
            None => (0..self.s.dst.size(c)).collect(),
        }
    }

    /// The unassigned element with the fewest consistent values, with those
    /// values; `None` if some element has no consistent value.
    fn narrowest(&mut self, rest: &[(usize, usize)]) -> Option<(usize, usize, Vec<usize>)> {
        let mut best: Option<(usize, usize, Vec<usize>)> = None;
        for &(c, x) in rest {
            if self.assign[c][x] != UNSET {
                continue;
            }
            let mut ok = Vec::new();
            for v in self.options(c, x) {
                let mark = self.trail.len();
                if self.try_assign(c, x, v) {
                    ok.push(v);
                }
                self.undo(mark);
            }
            if ok.is_empty() {
                return None;
            }
            if best.as_ref().map_or(true, |b| ok.len() < b.2.len()) {
                let single = ok.len() == 1;
                best = Some((c, x, ok));
                if single {
                    break;
                }
            }
        }
        best
    }

    fn undo(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let (d, y) = self.trail.pop().unwrap();
            if self.s.injective {
                self.used[d][self.assign[d][y]] = false;
            }
            self.assign[d][y] = UNSET;
        }
    }

    fn go(
        &mut self,
        order: &[(usize, usize)],
        mut pos: usize,
        visit: &mut impl FnMut(&[Vec<usize>]) -> ControlFlow<()>,
    ) -> Result<ControlFlow<()>> {
        while pos < order.len() && self.assign[order[pos].0][order[pos].1] != UNSET {
            pos += 1;
        }
        if pos == order.len() {
            return Ok(visit(&self.assign));
        }
        let (c, x, options) = if self.s.guided {
            match self.narrowest(&order[pos..]) {
                Some(best) => best,
                None => return Ok(ControlFlow::Continue(())),
            }
        } else {
            let (c, x) = order[pos];
            (c, x, self.options(c, x))
        };
        for v in options {
            self.nodes += 1;
            if self.nodes > self.s.max_nodes {
                return Err(Error::Bounds {
                    budget: self.s.max_nodes,
                    context: self.s.context.clone(),
                });
            }
            let mark = self.trail.len();
            if self.try_assign(c, x, v) {
                if let ControlFlow::Break(()) = self.go(order, if self.s.guided { pos } else { pos + 1 }, visit)? {
                    self.undo(mark);
                    return Ok(ControlFlow::Break(()));
                }
            }
            self.undo(mark);
        }
        Ok(ControlFlow::Continue(()))
    }
}

/// `fibers[c][b]` lists the elements of `proj.src()` at `c` lying over `b`.
pub fn fibers(proj: &NatMap) -> Vec<Vec<Vec<usize>>> {
    proj.components()
        .iter()
        .enumerate()
        .map(|(c, comp)| {
            let mut out = vec![Vec::new(); proj.dst().size(c)];
            for (x, &b) in comp.iter().enumerate() {
                out[b].push(x);
            }
            out
        })
        .collect()
}

/// All natural maps `x -> y`, in search order, without duplicates.
pub fn hom_enumerate(x: &Presheaf, y: &Presheaf) -> Result<Vec<NatMap>> {
    MapSearch::new(x, y)?.context("enumerating a hom-set").all()
}

/// Natural maps `x -> y` over a common base: `py ∘ m = px`.
pub fn hom_over(px: &NatMap, py: &NatMap) -> Result<Vec<NatMap>> {
    let mut s = MapSearch::new(px.src(), py.src())?;
    s.over(py, px).context("enumerating maps over a base");
    s.all()
}

/// Some isomorphism `px.src() -> py.src()` over the common base, if any.
pub fn find_iso_over(px: &NatMap, py: &NatMap, max_nodes: u64) -> Result<Option<NatMap>> {
    if px.src().sizes() != py.src().sizes() {
        return Ok(None);
    }
    let mut s = MapSearch::new(px.src(), py.src())?;
    s.over(py, px).injective(true).max_nodes(max_nodes).context("searching an isomorphism over a base");
    s.first()
}

/// Some isomorphism `x -> y`, if any.
pub fn find_iso(x: &Presheaf, y: &Presheaf, max_nodes: u64) -> Result<Option<NatMap>> {
    if x.sizes() != y.sizes() {
        return Ok(None);
    }
    let mut s = MapSearch::new(x, y)?;
    s.injective(true).max_nodes(max_nodes).context("searching an isomorphism");
    s.first()
}
