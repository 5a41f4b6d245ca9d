//! Truncated simplicial presheaves: presheaves on `C × Δ≤N`, tensors,
//! horns and boundaries, the interval cotensor and the lifting solver.

use std::collections::HashSet;
use std::fmt;
use std::ops::ControlFlow;
use std::sync::Arc;

use crate::category::{FiniteCategory, MorId, ObjId};
use crate::error::{Error, Result};
use crate::lcc::{local_exp, pair_index, pullback_along, LocalExp, Slice};
use crate::limits::{pullback, Limit};
use crate::presheaf::{NatMap, Presheaf};
use crate::search::{fibers, MapSearch, DEFAULT_MAX_NODES};

/// Truncation dimension and the margin below it that homotopical answers are trusted to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationConfig {
    pub dim: usize,
    pub margin: usize,
}

impl TruncationConfig {
    pub fn new(dim: usize) -> Self {
        TruncationConfig { dim, margin: 2 }
    }

    pub fn with_margin(mut self, margin: usize) -> Self {
        self.margin = margin;
        self
    }

    pub fn reliable_dim(&self) -> usize {
        self.dim.saturating_sub(self.margin)
    }
}

/// The indexing category `C × Δ≤N`. Object `(c, [k])` has id `k·|C| + c`.
#[derive(Clone, Debug)]
pub struct SimplicialSite {
    base: Arc<FiniteCategory>,
    delta: Arc<FiniteCategory>,
    site: Arc<FiniteCategory>,
    sset: Arc<FiniteCategory>,
    maps: Vec<Vec<usize>>,
    config: TruncationConfig,
    max_nodes: u64,
}

fn delta_maps(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    for a in 0..=n {
        for b in 0..=n {
            out.extend(crate::category::monotone_maps(a, b));
        }
    }
    out
}

fn is_terminal(c: &FiniteCategory) -> bool {
    c.num_objects() == 1 && c.num_morphisms() == 1
}

impl SimplicialSite {
    pub fn new(base: Arc<FiniteCategory>, config: TruncationConfig) -> Self {
        let delta = Arc::new(FiniteCategory::delta(config.dim));
        let site = Arc::new(FiniteCategory::product(&base, &delta));
        let sset = if is_terminal(&base) {
            site.clone()
        } else {
            Arc::new(FiniteCategory::product(&FiniteCategory::terminal(), &delta))
        };
        SimplicialSite {
            base,
            delta,
            site,
            sset,
            maps: delta_maps(config.dim),
            config,
            max_nodes: DEFAULT_MAX_NODES,
        }
    }

    /// Truncated simplicial sets (`C` terminal).
    pub fn sets(config: TruncationConfig) -> Self {
        Self::new(Arc::new(FiniteCategory::terminal()), config)
    }

    pub fn with_max_nodes(mut self, n: u64) -> Self {
        self.max_nodes = n;
        self
    }

    pub fn config(&self) -> TruncationConfig {
        self.config
    }

    pub fn dim(&self) -> usize {
        self.config.dim
    }

    pub fn reliable_dim(&self) -> usize {
        self.config.reliable_dim()
    }

    pub fn max_nodes(&self) -> u64 {
        self.max_nodes
    }

    pub fn base(&self) -> &Arc<FiniteCategory> {
        &self.base
    }

    pub fn delta(&self) -> &Arc<FiniteCategory> {
        &self.delta
    }

    pub fn site(&self) -> &Arc<FiniteCategory> {
        &self.site
    }

    /// `Δ≤N` as the site over the terminal category; simplicial sets live here.
    pub fn sset(&self) -> &Arc<FiniteCategory> {
        &self.sset
    }

    /// The site of simplicial sets with the same truncation.
    pub fn sset_site(&self) -> SimplicialSite {
        SimplicialSite {
            base: Arc::new(FiniteCategory::terminal()),
            delta: self.delta.clone(),
            site: self.sset.clone(),
            sset: self.sset.clone(),
            maps: self.maps.clone(),
            config: self.config,
            max_nodes: self.max_nodes,
        }
    }

    pub fn obj(&self, c: ObjId, k: usize) -> ObjId {
        k * self.base.num_objects() + c
    }

    pub fn split_obj(&self, o: ObjId) -> (ObjId, usize) {
        (o % self.base.num_objects(), o / self.base.num_objects())
    }

    pub fn mor(&self, f: MorId, g: MorId) -> MorId {
        g * self.base.num_morphisms() + f
    }

    pub fn split_mor(&self, a: MorId) -> (MorId, MorId) {
        (a % self.base.num_morphisms(), a / self.base.num_morphisms())
    }

    /// Values of the monotone map underlying a `Δ` morphism.
    pub fn theta(&self, g: MorId) -> &[usize] {
        &self.maps[g]
    }

    /// The `Δ` morphism `[m] -> [k]` with the given values.
    pub fn delta_mor(&self, values: &[usize], k: usize) -> Option<MorId> {
        let m = values.len().checked_sub(1)?;
        self.delta.hom(m, k).iter().copied().find(|&g| self.maps[g] == values)
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n > self.dim() {
            return Err(Error::OutOfRange(format!("dimension {n} exceeds truncation {}", self.dim())));
        }
        Ok(())
    }

    /// `Δⁿ ⊗ Y_c`, the representable at `(c, [n])`.
    pub fn representable(&self, c: ObjId, n: usize) -> Result<Presheaf> {
        self.check_dim(n)?;
        self.base.check_object(c)?;
        Presheaf::yoneda(self.site.clone(), self.obj(c, n))
    }

    fn sub_representable(&self, c: ObjId, n: usize, keep: impl Fn(&[usize]) -> bool) -> Result<(Presheaf, NatMap)> {
        let y = self.representable(c, n)?;
        let o = self.obj(c, n);
        let mask: Vec<Vec<usize>> = (0..self.site.num_objects()).map(|d| self.site.hom(d, o).to_vec()).collect();
        let keep: Vec<Vec<bool>> = mask
            .iter()
            .map(|row| row.iter().map(|&a| keep(self.theta(self.split_mor(a).1))).collect())
            .collect();
        Ok(y.restrict_to(&keep))
    }

    /// `∂Δⁿ ⊗ Y_c ↪ Δⁿ ⊗ Y_c`.
    pub fn boundary(&self, c: ObjId, n: usize) -> Result<(Presheaf, NatMap)> {
        self.sub_representable(c, n, |t| !covers(t, n, None))
    }

    /// `Λⁿ_k ⊗ Y_c ↪ Δⁿ ⊗ Y_c`.
    pub fn horn(&self, c: ObjId, n: usize, k: usize) -> Result<(Presheaf, NatMap)> {
        if n == 0 || k > n {
            return Err(Error::OutOfRange(format!("no horn Λ^{n}_{k}")));
        }
        self.sub_representable(c, n, |t| !covers(t, n, Some(k)))
    }

    /// Elements of `X` at `(c, [k])` that are not degenerate.
    pub fn nondegenerate(&self, x: &Presheaf, c: ObjId, k: usize) -> Vec<usize> {
        let o = self.obj(c, k);
        let mut degenerate = vec![false; x.size(o)];
        if k > 0 {
            let id_c = self.base.identity(c);
            for &g in self.delta.hom(k, k - 1) {
                let a = self.mor(id_c, g);
                for y in 0..x.size(self.obj(c, k - 1)) {
                    degenerate[x.act(a, y)] = true;
                }
            }
        }
        (0..x.size(o)).filter(|&e| !degenerate[e]).collect()
    }

    fn check_sset(&self, k: &Presheaf) -> Result<()> {
        if crate::presheaf::same_category(k.base_arc(), &self.sset) {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }

    fn check_site(&self, x: &Presheaf) -> Result<()> {
        if crate::presheaf::same_category(x.base_arc(), &self.site) {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }

    /// `(K ⊗ X)(c, [n]) = K_n × X(c, [n])`; the pair `(k, x)` has index `k·|X(c,[n])| + x`.
    pub fn tensor(&self, k: &Presheaf, x: &Presheaf) -> Result<Presheaf> {
        self.check_sset(k)?;
        self.check_site(x)?;
        let sizes = (0..self.site.num_objects())
            .map(|o| k.size(self.split_obj(o).1) * x.size(o))
            .collect();
        let action = (0..self.site.num_morphisms())
            .map(|a| {
                let (src, dst) = (self.site.dom(a), self.site.cod(a));
                let g = self.split_mor(a).1;
                let (nx, nx2) = (x.size(dst), x.size(src));
                (0..k.size(self.split_obj(dst).1) * nx)
                    .map(|p| k.act(g, p / nx) * nx2 + x.act(a, p % nx))
                    .collect()
            })
            .collect();
        Ok(Presheaf::raw(self.site.clone(), sizes, action))
    }

    /// `u ⊗ w` for maps `u: K -> K'` of simplicial sets and `w: X -> X'`.
    pub fn tensor_map(&self, u: &NatMap, w: &NatMap) -> Result<NatMap> {
        let src = self.tensor(u.src(), w.src())?;
        let dst = self.tensor(u.dst(), w.dst())?;
        let comps = (0..self.site.num_objects())
            .map(|o| {
                let k = self.split_obj(o).1;
                let (nx, ny) = (w.src().size(o), w.dst().size(o));
                (0..src.size(o)).map(|p| u.apply(k, p / nx) * ny + w.apply(o, p % nx)).collect()
            })
            .collect();
        Ok(NatMap::raw(src, dst, comps))
    }

    /// The projection `K ⊗ X -> X`.
    pub fn tensor_proj(&self, k: &Presheaf, x: &Presheaf) -> Result<NatMap> {
        let t = self.tensor(k, x)?;
        let comps = (0..self.site.num_objects())
            .map(|o| (0..t.size(o)).map(|p| p % x.size(o)).collect())
            .collect();
        Ok(NatMap::raw(t, x.clone(), comps))
    }

    /// A presheaf on `C` viewed as simplicially constant.
    pub fn constant(&self, p: &Presheaf) -> Result<Presheaf> {
        if !crate::presheaf::same_category(p.base_arc(), &self.base) {
            return Err(Error::BaseMismatch);
        }
        let sizes = (0..self.site.num_objects()).map(|o| p.size(self.split_obj(o).0)).collect();
        let action = (0..self.site.num_morphisms())
            .map(|a| p.action_table(self.split_mor(a).0).to_vec())
            .collect();
        Ok(Presheaf::raw(self.site.clone(), sizes, action))
    }

    /// The simplicial set `X_c = X(c, -)`.
    pub fn at_object(&self, x: &Presheaf, c: ObjId) -> Presheaf {
        let id = self.base.identity(c);
        let sizes = (0..=self.dim()).map(|k| x.size(self.obj(c, k))).collect();
        let action = (0..self.delta.num_morphisms())
            .map(|g| x.action_table(self.mor(id, g)).to_vec())
            .collect();
        Presheaf::raw(self.sset.clone(), sizes, action)
    }

    pub fn at_object_map(&self, f: &NatMap, c: ObjId) -> NatMap {
        let comps = (0..=self.dim()).map(|k| f.component(self.obj(c, k)).to_vec()).collect();
        NatMap::raw(self.at_object(f.src(), c), self.at_object(f.dst(), c), comps)
    }

    /// `Δⁿ` as a simplicial set.
    pub fn simplex(&self, n: usize) -> Result<Presheaf> {
        self.check_dim(n)?;
        Presheaf::yoneda(self.sset.clone(), n)
    }

    /// `Δ¹ ⊗ B` over `B`.
    pub fn interval_over(&self, b: &Presheaf) -> Result<Slice> {
        let i = self.simplex(1)?;
        Ok(Slice::new(self.tensor_proj(&i, b)?))
    }

    /// The vertex `t` of `Δ¹` degenerated to level `k`, as an element of `Δ¹_k`.
    fn interval_vertex(&self, t: usize, k: usize) -> usize {
        let g = self.delta_mor(&vec![t; k + 1], 1).expect("constant map exists");
        Presheaf::yoneda_element(&self.delta, g)
    }

    /// The cotensor `P_B E = (E ↠ B)^{Δ¹}` in the slice over `B`.
    pub fn cotensor_interval(&self, e: &Slice) -> Result<PathObject> {
        self.check_site(e.total())?;
        let b = e.base();
        let exp = local_exp(&self.interval_over(b)?, e)?;
        let ends = pullback(e.proj(), e.proj())?;
        let ev_at = |t: usize| -> NatMap {
            let comps = (0..self.site.num_objects())
                .map(|o| {
                    let k = self.split_obj(o).1;
                    let v = self.interval_vertex(t, k);
                    (0..exp.fun.total().size(o))
                        .map(|s| {
                            let (bb, _) = exp.fun.element(o, s);
                            let w = v * b.size(o) + bb;
                            let p = exp.fun.eval(o, s, self.site.identity(o), w).expect("section is total");
                            exp.pair.1.apply(o, p)
                        })
                        .collect()
                })
                .collect();
            NatMap::raw(exp.fun.total().clone(), e.total().clone(), comps)
        };
        let ev0 = ev_at(0);
        let ev1 = ev_at(1);
        let ev = ends.factor(&[ev0.clone(), ev1.clone()])?;
        // constant paths: transpose of the diagonal (e, (t, b)) ↦ (e, e)
        let ge1 = pullback_along(e.proj(), &exp.e1)?;
        let ge2 = pullback_along(e.proj(), e)?;
        let idx2 = pair_index(&ge2.0, &ge2.1);
        let diag_comps = (0..self.site.num_objects())
            .map(|o| {
                (0..ge1.0.total().size(o))
                    .map(|j| {
                        let x = ge1.0.proj().apply(o, j);
                        idx2[o][&(x, x)]
                    })
                    .collect()
            })
            .collect();
        let diag = NatMap::raw(ge1.0.total().clone(), ge2.0.total().clone(), diag_comps);
        let unit = exp.transpose(e.proj(), &ge1, &ge2, &diag)?;
        Ok(PathObject {
            path: exp.fun.slice.clone(),
            exp,
            ends,
            ev0,
            ev1,
            ev,
            unit,
        })
    }

    /// Finds a diagonal filler, or proves none exists.
    pub fn solve_lift(&self, p: &LiftingProblem) -> Result<Option<NatMap>> {
        let mut search = MapSearch::new(p.left.dst(), p.right.src())?;
        search
            .fix_along(&p.left, &p.top)
            .over(&p.right, &p.bottom)
            .max_nodes(self.max_nodes)
            .context("solving a lifting problem");
        let lift = search.first()?;
        if let Some(l) = &lift {
            debug_assert!(l.after_unchecked(&p.left).components() == p.top.components());
            debug_assert!(p.right.after_unchecked(l).components() == p.bottom.components());
        }
        Ok(lift)
    }

    /// `Λⁿ_k ⊗ Y_c ↪ Δⁿ ⊗ Y_c` for `n` in `lo..=hi` (clamped to `1..=N`).
    pub fn horn_generators(&self, lo: usize, hi: usize) -> Result<Vec<Generator>> {
        let mut out = Vec::new();
        for n in lo.max(1)..=hi.min(self.dim()) {
            for c in 0..self.base.num_objects() {
                for k in 0..=n {
                    let (_, incl) = self.horn(c, n, k)?;
                    out.push(Generator { c, n, k: Some(k), target: self.obj(c, n), incl });
                }
            }
        }
        Ok(out)
    }

    /// `∂Δⁿ ⊗ Y_c ↪ Δⁿ ⊗ Y_c` for `n` in `lo..=hi` (clamped to `N`).
    pub fn boundary_generators(&self, lo: usize, hi: usize) -> Result<Vec<Generator>> {
        let mut out = Vec::new();
        for n in lo..=hi.min(self.dim()) {
            for c in 0..self.base.num_objects() {
                let (_, incl) = self.boundary(c, n)?;
                out.push(Generator { c, n, k: None, target: self.obj(c, n), incl });
            }
        }
        Ok(out)
    }

    /// First base element `b` over which some square from `g` to `f` has no filler.
    pub fn rlp_failure(&self, g: &Generator, f: &NatMap) -> Result<Option<usize>> {
        let dom = g.incl.src();
        let (e, b) = (f.src(), f.dst());
        let o = g.target;
        let site = f.src().base();
        let arrows: Vec<Vec<MorId>> = (0..site.num_objects())
            .map(|d| {
                let hom = site.hom(d, o);
                (0..dom.size(d)).map(|x| hom[g.incl.apply(d, x)]).collect()
            })
            .collect();
        let fib = fibers(f);
        for bb in 0..b.size(o) {
            let restrict = |e_el: usize| -> Vec<Vec<usize>> {
                arrows.iter().map(|row| row.iter().map(|&a| e.act(a, e_el)).collect()).collect()
            };
            let fillable: HashSet<Vec<Vec<usize>>> = fib[o][bb].iter().map(|&x| restrict(x)).collect();
            let bottom = NatMap::raw(
                dom.clone(),
                b.clone(),
                arrows.iter().map(|row| row.iter().map(|&a| b.act(a, bb)).collect()).collect(),
            );
            let mut search = MapSearch::new(dom, e)?;
            search.over(f, &bottom).max_nodes(self.max_nodes).context(format!("lifting against {g}"));
            let mut failed = false;
            search.run(|top| {
                if fillable.contains(top) {
                    ControlFlow::Continue(())
                } else {
                    failed = true;
                    ControlFlow::Break(())
                }
            })?;
            if failed {
                return Ok(Some(bb));
            }
        }
        Ok(None)
    }

    fn first_failure(&self, gens: &[Generator], f: &NatMap) -> Result<Option<LiftFailure>> {
        self.check_site(f.src())?;
        for g in gens {
            if let Some(b) = self.rlp_failure(g, f)? {
                return Ok(Some(LiftFailure { c: g.c, n: g.n, k: g.k, b }));
            }
        }
        Ok(None)
    }

    pub fn fibration_failure(&self, f: &NatMap, lo: usize, hi: usize) -> Result<Option<LiftFailure>> {
        self.first_failure(&self.horn_generators(lo, hi)?, f)
    }

    pub fn is_fibration(&self, f: &NatMap, lo: usize, hi: usize) -> Result<bool> {
        Ok(self.fibration_failure(f, lo, hi)?.is_none())
    }

    pub fn acyclic_failure(&self, f: &NatMap, lo: usize, hi: usize) -> Result<Option<LiftFailure>> {
        self.first_failure(&self.boundary_generators(lo, hi)?, f)
    }

    pub fn is_acyclic_fibration(&self, f: &NatMap, lo: usize, hi: usize) -> Result<bool> {
        Ok(self.acyclic_failure(f, lo, hi)?.is_none())
    }

    /// Fibration test over the full truncation.
    pub fn is_fibration_full(&self, f: &NatMap) -> Result<bool> {
        self.is_fibration(f, 1, self.dim())
    }
}

/// Whether the image of `t` together with `extra` is all of `[n]`.
fn covers(t: &[usize], n: usize, extra: Option<usize>) -> bool {
    let mut hit = vec![false; n + 1];
    for &v in t {
        hit[v] = true;
    }
    if let Some(k) = extra {
        hit[k] = true;
    }
    hit.iter().all(|&h| h)
}

/// A generating inclusion into the representable at `(c, [n])`.
#[derive(Clone, Debug)]
pub struct Generator {
    pub c: ObjId,
    pub n: usize,
    pub k: Option<usize>,
    pub target: ObjId,
    pub incl: NatMap,
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            Some(k) => write!(f, "Λ^{}_{} ⊗ Y_{}", self.n, k, self.c),
            None => write!(f, "∂Δ^{} ⊗ Y_{}", self.n, self.c),
        }
    }
}

/// A square with no filler: the generator and the offending base simplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiftFailure {
    pub c: ObjId,
    pub n: usize,
    pub k: Option<usize>,
    pub b: usize,
}

impl fmt::Display for LiftFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.k {
            Some(k) => write!(f, "horn Λ^{}_{} at object {} over element {}", self.n, k, self.c, self.b),
            None => write!(f, "boundary ∂Δ^{} at object {} over element {}", self.n, self.c, self.b),
        }
    }
}

/// A commutative square `f ∘ top = bottom ∘ left`.
#[derive(Clone, Debug)]
pub struct LiftingProblem {
    pub left: NatMap,
    pub right: NatMap,
    pub top: NatMap,
    pub bottom: NatMap,
}

impl LiftingProblem {
    pub fn new(left: NatMap, right: NatMap, top: NatMap, bottom: NatMap) -> Result<Self> {
        let ok = left.src() == top.src()
            && left.dst() == bottom.src()
            && right.src() == top.dst()
            && right.dst() == bottom.dst()
            && right.after_unchecked(&top).components() == bottom.after_unchecked(&left).components();
        if !ok {
            return Err(Error::Invalid("lifting square does not commute".into()));
        }
        Ok(LiftingProblem { left, right, top, bottom })
    }
}

/// `P_B E` with its endpoint evaluations and constant paths.
#[derive(Clone, Debug)]
pub struct PathObject {
    pub path: Slice,
    pub exp: LocalExp,
    /// `E ×_B E`
    pub ends: Limit,
    pub ev0: NatMap,
    pub ev1: NatMap,
    pub ev: NatMap,
    pub unit: NatMap,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::coproduct;
    use crate::search::{find_iso, find_iso_over};

    fn sset(n: usize) -> SimplicialSite {
        SimplicialSite::sets(TruncationConfig::new(n))
    }

    fn count_by_level(s: &SimplicialSite, x: &Presheaf) -> Vec<usize> {
        (0..=s.dim()).map(|k| s.nondegenerate(x, 0, k).len()).collect()
    }

    #[test]
    fn standard_objects() {
        let s = sset(2);
        assert_eq!(s.simplex(0).unwrap().sizes(), &[1, 1, 1]);
        let (h, _) = s.horn(0, 1, 0).unwrap();
        assert_eq!(count_by_level(&s, &h), vec![1, 0, 0]);
        let (d, _) = s.boundary(0, 2).unwrap();
        assert_eq!(count_by_level(&s, &d), vec![3, 3, 0]);
        assert!(s.horn(0, 3, 0).is_err());
        assert!(s.horn(0, 1, 2).is_err());
    }

    #[test]
    fn tensor_counts() {
        let s = sset(1);
        let d1 = s.simplex(1).unwrap();
        let t = s.tensor(&d1, &d1).unwrap();
        assert_eq!(t.size(1), 9);
        assert!(t.is_functorial());
        let d0 = s.simplex(0).unwrap();
        assert!(find_iso(&s.tensor(&d0, &d1).unwrap(), &d1, 1000).unwrap().is_some());
    }

    #[test]
    fn lifting_examples() {
        let s = sset(1);
        let d0 = s.simplex(0).unwrap();
        let (h, incl) = s.horn(0, 1, 0).unwrap();
        // against Δ⁰ ⊔ Δ⁰ -> Δ⁰ the edge lifts (to a degenerate edge)
        let two = coproduct(s.sset().clone(), &[d0.clone(), d0.clone()]).unwrap();
        let f = NatMap::to_terminal(&two.apex);
        let top = two.injections[0].after(&NatMap::to_terminal(&h)).unwrap();
        let p = LiftingProblem::new(incl.clone(), f.clone(), top, NatMap::to_terminal(incl.dst())).unwrap();
        assert!(s.solve_lift(&p).unwrap().is_some());
        // against the vertex Δ⁰ -> Δ¹ with the identity below there is no edge to lift to
        let d1 = s.simplex(1).unwrap();
        let v0 = incl.after(&NatMap::identity(&h)).unwrap().with_ends(h.clone(), d1.clone());
        let p2 = LiftingProblem::new(incl.clone(), v0, NatMap::identity(&h), NatMap::identity(&d1)).unwrap();
        assert!(s.solve_lift(&p2).unwrap().is_none());
    }

    #[test]
    fn fibration_examples() {
        let s = sset(2);
        let d0 = s.simplex(0).unwrap();
        let two = coproduct(s.sset().clone(), &[d0.clone(), d0.clone()]).unwrap();
        assert!(s.is_fibration(&NatMap::to_terminal(&two.apex), 1, 2).unwrap());
        assert!(!s.is_acyclic_fibration(&NatMap::to_terminal(&two.apex), 0, 2).unwrap());
        let (_, incl) = s.horn(0, 2, 1).unwrap();
        assert!(!s.is_fibration(&incl, 1, 2).unwrap());
        let d1 = s.simplex(1).unwrap();
        assert!(s.is_acyclic_fibration(&NatMap::to_terminal(&d1), 0, s.reliable_dim()).unwrap());
        assert!(!s.is_acyclic_fibration(&NatMap::to_terminal(&d1), 0, 1).unwrap());
    }

    #[test]
    fn path_object_of_points() {
        let s = sset(1);
        let d0 = s.simplex(0).unwrap();
        let two = coproduct(s.sset().clone(), &[d0.clone(), d0.clone()]).unwrap();
        let e = Slice::new(NatMap::to_terminal(&two.apex));
        let p = s.cotensor_interval(&e).unwrap();
        assert!(find_iso(p.path.total(), &two.apex, 1000).unwrap().is_some());
        assert!(p.ev.is_mono());
        assert!(p.ev0.after(&p.unit).unwrap() == NatMap::identity(&two.apex));
        let idb = Slice::new(NatMap::identity(&d0));
        let pb = s.cotensor_interval(&idb).unwrap();
        assert!(find_iso_over(pb.path.proj(), idb.proj(), 1000).unwrap().is_some());
    }
}
