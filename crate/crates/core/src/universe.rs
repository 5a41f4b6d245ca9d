//! The micro-universe of well-ordered κ-small fibrations: canonical codes
//! over representables, classifying maps, relative classification along
//! monomorphisms and the equivalence-extension construction.

use std::collections::HashMap;

use crate::category::{MorId, ObjId};
use crate::equiv::is_weq;
use crate::error::{Error, Result};
use crate::lcc::{pair_index, pi, pi_map, pi_unit, pullback_along, Slice};
use crate::limits::{pullback, Limit};
use crate::presheaf::{NatMap, Presheaf};
use crate::search::{fibers, find_iso_over};
use crate::simplicial::SimplicialSite;

#[derive(Clone, Debug)]
pub struct UniverseConfig {
    /// Fibers must have fewer than `kappa` elements.
    pub kappa: usize,
    /// Horn range `(lo, hi)` a code must lift against.
    pub fib_range: (usize, usize),
    /// Require `kappa` to exceed the number of arrows of the site.
    pub enforce_kappa_bound: bool,
    /// Cap on the number of search nodes per representable during enumeration.
    pub max_nodes: u64,
}

impl UniverseConfig {
    pub fn new(kappa: usize, site: &SimplicialSite) -> Self {
        UniverseConfig {
            kappa,
            fib_range: (1, site.dim()),
            enforce_kappa_bound: false,
            max_nodes: 100_000_000,
        }
    }
}

/// `|f⁻¹(b)| < κ` for every element `b` of the codomain.
pub fn smallness_check(f: &NatMap, kappa: usize) -> bool {
    smallness_violation(f, kappa).is_none()
}

pub fn smallness_violation(f: &NatMap, kappa: usize) -> Option<Error> {
    let fib = fibers(f);
    for (c, lvl) in fib.iter().enumerate() {
        for (b, fiber) in lvl.iter().enumerate() {
            if fiber.len() >= kappa {
                return Some(Error::Smallness { object: c, element: b, size: fiber.len(), kappa });
            }
        }
    }
    None
}

/// The elements of `y(o)`: arrows `α: d -> o`, grouped by `d` in hom order.
#[derive(Clone, Debug)]
struct Shape {
    alphas: Vec<MorId>,
    index: HashMap<MorId, usize>,
    /// `level_alphas[d]` = indices of the alphas with domain `d`
    level_alphas: Vec<Vec<usize>>,
}

impl Shape {
    fn new(site: &SimplicialSite, o: ObjId) -> Self {
        let cat = site.site();
        let mut alphas = Vec::new();
        let mut level_alphas = Vec::new();
        for d in 0..cat.num_objects() {
            let mut lvl = Vec::new();
            for &a in cat.hom(d, o) {
                lvl.push(alphas.len());
                alphas.push(a);
            }
            level_alphas.push(lvl);
        }
        let index = alphas.iter().enumerate().map(|(k, &a)| (a, k)).collect();
        Shape { alphas, index, level_alphas }
    }
}

/// A canonical code: a fibration over `y(o)` whose elements at level `d` are
/// the pairs `(α, i)` with `i < fibers[α]`, listed by `α` then `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Code {
    pub o: ObjId,
    pub fibers: Vec<usize>,
    pub total: Presheaf,
    pub proj: NatMap,
    offsets: Vec<usize>,
}

impl Code {
    fn build(site: &SimplicialSite, shape: &Shape, o: ObjId, fibers: Vec<usize>, action: impl Fn(MorId, usize, usize) -> usize) -> Self {
        let cat = site.site().clone();
        let mut offsets = vec![0; shape.alphas.len()];
        let mut sizes = vec![0; cat.num_objects()];
        for (d, lvl) in shape.level_alphas.iter().enumerate() {
            for &k in lvl {
                offsets[k] = sizes[d];
                sizes[d] += fibers[k];
            }
        }
        let mut actions = Vec::with_capacity(cat.num_morphisms());
        for beta in 0..cat.num_morphisms() {
            let d = cat.cod(beta);
            let mut row = Vec::with_capacity(sizes[d]);
            for &k in &shape.level_alphas[d] {
                let ab = shape.index[&cat.compose(shape.alphas[k], beta)];
                for i in 0..fibers[k] {
                    row.push(offsets[ab] + action(beta, k, i));
                }
            }
            actions.push(row);
        }
        let total = Presheaf::raw(cat.clone(), sizes.clone(), actions);
        let y = Presheaf::yoneda(cat.clone(), o).expect("object exists");
        let comps = shape
            .level_alphas
            .iter()
            .map(|lvl| {
                lvl.iter()
                    .enumerate()
                    .flat_map(|(pos, &k)| std::iter::repeat(pos).take(fibers[k]))
                    .collect()
            })
            .collect();
        let proj = NatMap::raw(total, y, comps);
        Code { o, fibers, total: proj.src().clone(), proj, offsets }
    }

    fn key(&self) -> Vec<usize> {
        let mut k = self.fibers.clone();
        for row in self.total.actions() {
            k.push(usize::MAX);
            k.extend_from_slice(row);
        }
        k
    }

    /// Position within its fiber of the element `x` lying over `alpha_index`.
    fn local(&self, alpha_index: usize, x: usize) -> usize {
        x - self.offsets[alpha_index]
    }

    /// The element `(alphas[k], i)` of the total space.
    pub fn element(&self, k: usize, i: usize) -> usize {
        self.offsets[k] + i
    }

    pub fn key_of(&self) -> Vec<usize> {
        self.key()
    }

    pub fn as_slice(&self) -> Slice {
        Slice::new(self.proj.clone())
    }
}

/// A fibration together with a total order on each fiber: `order[c][b]`
/// lists the fiber over `b ∈ B(c)` from least to greatest.
#[derive(Clone, Debug)]
pub struct WellOrderedFibration {
    pub slice: Slice,
    pub order: Vec<Vec<Vec<usize>>>,
}

impl WellOrderedFibration {
    /// Fibers ordered by element id.
    pub fn by_id(slice: Slice) -> Self {
        let order = fibers(slice.proj());
        WellOrderedFibration { slice, order }
    }

    pub fn new(slice: Slice, order: Vec<Vec<Vec<usize>>>) -> Result<Self> {
        let fib = fibers(slice.proj());
        for (c, lvl) in fib.iter().enumerate() {
            for (b, f) in lvl.iter().enumerate() {
                let mut got = order.get(c).and_then(|l| l.get(b)).cloned().unwrap_or_default();
                got.sort_unstable();
                if &got != f {
                    return Err(Error::Invalid(format!("order at level {c} over {b} is not a total order of the fiber")));
                }
            }
        }
        Ok(WellOrderedFibration { slice, order })
    }

    fn ranks(&self) -> Vec<Vec<usize>> {
        let t = self.slice.total();
        let mut r: Vec<Vec<usize>> = t.sizes().iter().map(|&n| vec![0; n]).collect();
        for (c, lvl) in self.order.iter().enumerate() {
            for f in lvl {
                for (i, &e) in f.iter().enumerate() {
                    r[c][e] = i;
                }
            }
        }
        r
    }
}

/// `χ: B -> U` with the canonical pullback `χ*Ũ` and the iso `P ≅ χ*Ũ`.
#[derive(Clone, Debug)]
pub struct Classification {
    pub chi: NatMap,
    pub pullback: Limit,
    pub iso: NatMap,
}

#[derive(Clone, Debug)]
pub struct Universe {
    site: SimplicialSite,
    config: UniverseConfig,
    shapes: Vec<Shape>,
    codes: Vec<Vec<Code>>,
    index: Vec<HashMap<Vec<usize>, usize>>,
    u: Presheaf,
    ut: Presheaf,
    p: NatMap,
    ut_offset: Vec<Vec<usize>>,
}

impl Universe {
    /// Enumerates every code over every representable.
    pub fn build(site: &SimplicialSite, config: UniverseConfig) -> Result<Self> {
        if config.enforce_kappa_bound && config.kappa <= site.site().num_morphisms() {
            return Err(Error::Precondition(format!(
                "κ = {} does not exceed the {} arrows of the site",
                config.kappa,
                site.site().num_morphisms()
            )));
        }
        let cat = site.site().clone();
        let n = cat.num_objects();
        let shapes: Vec<Shape> = (0..n).map(|o| Shape::new(site, o)).collect();
        let mut codes = Vec::with_capacity(n);
        let mut index = Vec::with_capacity(n);
        for o in 0..n {
            let found = enumerate_codes(site, &shapes[o], o, &config)?;
            index.push(found.iter().enumerate().map(|(k, c)| (c.key(), k)).collect::<HashMap<_, _>>());
            codes.push(found);
        }
        let mut univ = Universe {
            site: site.clone(),
            config,
            shapes,
            codes,
            index,
            u: Presheaf::initial(cat.clone()),
            ut: Presheaf::initial(cat.clone()),
            p: NatMap::from_initial(&Presheaf::initial(cat.clone())),
            ut_offset: Vec::new(),
        };
        univ.assemble()?;
        Ok(univ)
    }

    fn assemble(&mut self) -> Result<()> {
        let cat = self.site.site().clone();
        let sizes: Vec<usize> = self.codes.iter().map(Vec::len).collect();
        let mut u_act = Vec::with_capacity(cat.num_morphisms());
        let mut ut_offset = Vec::with_capacity(cat.num_objects());
        let mut ut_sizes = Vec::with_capacity(cat.num_objects());
        for o in 0..cat.num_objects() {
            let idk = self.shapes[o].index[&cat.identity(o)];
            let mut offs = Vec::with_capacity(sizes[o]);
            let mut total = 0;
            for c in &self.codes[o] {
                offs.push(total);
                total += c.fibers[idk];
            }
            ut_offset.push(offs);
            ut_sizes.push(total);
        }
        let mut ut_act = Vec::with_capacity(cat.num_morphisms());
        for beta in 0..cat.num_morphisms() {
            let (src, dst) = (cat.dom(beta), cat.cod(beta));
            let idk = self.shapes[dst].index[&cat.identity(dst)];
            let bk = self.shapes[dst].index[&beta];
            let mut urow = Vec::with_capacity(sizes[dst]);
            let mut trow = Vec::with_capacity(ut_sizes[dst]);
            for c in &self.codes[dst] {
                let r = self.restrict(c, beta);
                let k = *self.index[src].get(&r.key()).ok_or_else(|| {
                    Error::Invalid("restriction of a code is not a code; fibration range is not pullback-stable here".into())
                })?;
                urow.push(k);
                for i in 0..c.fibers[idk] {
                    let x = c.total.act(beta, c.offsets[idk] + i);
                    trow.push(ut_offset[src][k] + c.local(bk, x));
                }
            }
            u_act.push(urow);
            ut_act.push(trow);
        }
        let u = Presheaf::raw(cat.clone(), sizes, u_act);
        let ut = Presheaf::raw(cat.clone(), ut_sizes, ut_act);
        let comps = (0..cat.num_objects())
            .map(|o| {
                let mut row = Vec::with_capacity(ut.size(o));
                for (k, &off) in ut_offset[o].iter().enumerate() {
                    let next = ut_offset[o].get(k + 1).copied().unwrap_or(ut.size(o));
                    row.extend(std::iter::repeat(k).take(next - off));
                }
                row
            })
            .collect();
        self.p = NatMap::raw(ut.clone(), u.clone(), comps);
        self.u = u;
        self.ut = ut;
        self.ut_offset = ut_offset;
        Ok(())
    }

    /// The order-inherited pullback of a code along `β: o' -> o`.
    pub fn restrict(&self, c: &Code, beta: MorId) -> Code {
        let cat = self.site.site();
        let src = cat.dom(beta);
        let shape = &self.shapes[c.o];
        let new_shape = &self.shapes[src];
        let fibers = new_shape
            .alphas
            .iter()
            .map(|&g| c.fibers[shape.index[&cat.compose(beta, g)]])
            .collect();
        Code::build(&self.site, new_shape, src, fibers, |delta, k, i| {
            let bg = shape.index[&cat.compose(beta, new_shape.alphas[k])];
            let bgd = shape.index[&cat.compose(beta, cat.compose(new_shape.alphas[k], delta))];
            c.local(bgd, c.total.act(delta, c.offsets[bg] + i))
        })
    }

    /// Whether a code over `Δⁿ` is isomorphic over `Δⁿ` to `Δⁿ × F`, `F` its
    /// fiber over vertex 0. Always true when the base category is not terminal.
    pub fn is_product_code(&self, c: &Code) -> Result<bool> {
        let s = &self.site;
        if s.base().num_objects() != 1 || s.base().num_morphisms() != 1 {
            return Ok(true);
        }
        let n = c.o;
        let v0 = s.delta_mor(&[0], n).expect("vertex 0 exists");
        let f = self.restrict(c, v0);
        let fiber = f.total.clone();
        let prod = s.tensor_proj(&fiber, c.proj.dst())?;
        Ok(find_iso_over(&c.proj, &prod, s.max_nodes())?.is_some())
    }

    /// `mask[o][k]`: code `k` over `o` is a product.
    pub fn product_mask(&self) -> Result<Vec<Vec<bool>>> {
        self.codes.iter().map(|cs| cs.iter().map(|c| self.is_product_code(c)).collect()).collect()
    }

    /// The arrows into `o`, in the order codes list their fibers.
    pub fn alphas(&self, o: ObjId) -> &[MorId] {
        &self.shapes[o].alphas
    }

    pub fn alpha_index(&self, o: ObjId, a: MorId) -> usize {
        self.shapes[o].index[&a]
    }

    /// The same code with the fiber over each `alphas[k]` permuted by `perms[k]`
    /// (old position `i` goes to `perms[k][i]`).
    pub fn relabel(&self, c: &Code, perms: &[Vec<usize>]) -> Code {
        let cat = self.site.site();
        let shape = &self.shapes[c.o];
        let mut inv: Vec<Vec<usize>> = perms.iter().map(|p| vec![0; p.len()]).collect();
        for (k, p) in perms.iter().enumerate() {
            for (i, &j) in p.iter().enumerate() {
                inv[k][j] = i;
            }
        }
        Code::build(&self.site, shape, c.o, c.fibers.clone(), |beta, k, i| {
            let kb = shape.index[&cat.compose(shape.alphas[k], beta)];
            let x = c.total.act(beta, c.offsets[k] + inv[k][i]);
            perms[kb][c.local(kb, x)]
        })
    }

    pub fn site(&self) -> &SimplicialSite {
        &self.site
    }

    pub fn config(&self) -> &UniverseConfig {
        &self.config
    }

    pub fn kappa(&self) -> usize {
        self.config.kappa
    }

    pub fn u(&self) -> &Presheaf {
        &self.u
    }

    pub fn ut(&self) -> &Presheaf {
        &self.ut
    }

    pub fn p(&self) -> &NatMap {
        &self.p
    }

    pub fn codes(&self, o: ObjId) -> &[Code] {
        &self.codes[o]
    }

    pub fn code(&self, o: ObjId, k: usize) -> &Code {
        &self.codes[o][k]
    }

    pub fn lookup(&self, c: &Code) -> Option<usize> {
        self.index[c.o].get(&c.key()).copied()
    }

    /// The element of `Ũ(o)` at position `i` of the fiber over code `k`.
    pub fn ut_element(&self, o: ObjId, k: usize, i: usize) -> usize {
        self.ut_offset[o][k] + i
    }

    /// Position of `x ∈ Ũ(o)` within its fiber.
    pub fn ut_rank(&self, o: ObjId, x: usize) -> usize {
        x - self.ut_offset[o][self.p.apply(o, x)]
    }

    /// The code of the pullback of `P` along `b: y(o) -> B`.
    pub fn code_of(&self, wp: &WellOrderedFibration, ranks: &[Vec<usize>], o: ObjId, b: usize) -> Code {
        let cat = self.site.site();
        let shape = &self.shapes[o];
        let bp = wp.slice.base();
        let fibers: Vec<usize> = shape
            .alphas
            .iter()
            .map(|&a| wp.order[cat.dom(a)][bp.act(a, b)].len())
            .collect();
        Code::build(&self.site, shape, o, fibers, |delta, k, i| {
            let a = shape.alphas[k];
            let e = wp.order[cat.dom(a)][bp.act(a, b)][i];
            ranks[cat.dom(delta)][wp.slice.total().act(delta, e)]
        })
    }

    /// `χ: B -> U` sending `b` to the code of `P` pulled back along `b`.
    pub fn classify(&self, wp: &WellOrderedFibration) -> Result<Classification> {
        if let Some(err) = smallness_violation(wp.slice.proj(), self.kappa()) {
            return Err(err);
        }
        let bp = wp.slice.base();
        let cat = self.site.site();
        if !crate::presheaf::same_category(bp.base_arc(), cat) {
            return Err(Error::BaseMismatch);
        }
        let ranks = wp.ranks();
        let comps = (0..cat.num_objects())
            .map(|o| {
                (0..bp.size(o))
                    .map(|b| {
                        let c = self.code_of(wp, &ranks, o, b);
                        self.lookup(&c).ok_or_else(|| {
                            Error::Precondition(format!("restriction over element {b} at object {o} is not a fibration"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let chi = NatMap::raw(bp.clone(), self.u.clone(), comps);
        let pb = pullback(&chi, &self.p)?;
        let t = wp.slice.total();
        let iso_comps = (0..cat.num_objects())
            .map(|o| {
                (0..t.size(o))
                    .map(|e| {
                        let b = wp.slice.proj().apply(o, e);
                        let x = self.ut_element(o, chi.apply(o, b), ranks[o][e]);
                        pb.element(o, &[b, x]).expect("classified element lies in the pullback")
                    })
                    .collect()
            })
            .collect();
        let iso = NatMap::raw(t.clone(), pb.apex.clone(), iso_comps);
        if !iso.is_natural() || !iso.is_iso() {
            return Err(Error::Invalid("classifying comparison is not an isomorphism".into()));
        }
        Ok(Classification { chi, pullback: pb, iso })
    }

    /// Relative classification along a mono `i: A ↪ B`: given `f: A -> U`,
    /// `Q` over `B` and an iso `i*Q ≅ f*Ũ` between the canonical pullbacks,
    /// returns `g: B -> U` with `g ∘ i = f` and `g*Ũ ≅ Q`.
    pub fn extend_classifier(&self, i: &NatMap, f: &NatMap, q: &Slice, iso: &NatMap) -> Result<Classification> {
        if !i.is_mono() {
            return Err(Error::Precondition("the inclusion is not a monomorphism".into()));
        }
        q.check_base(i.dst())?;
        if f.src() != i.src() || f.dst() != &self.u {
            return Err(Error::Invalid("f must be a map from the domain of i into U".into()));
        }
        let iq = pullback(i, q.proj())?;
        let fu = pullback(f, &self.p)?;
        if iso.src() != &iq.apex || iso.dst() != &fu.apex || !iso.is_iso() {
            return Err(Error::Invalid("the comparison must be an iso i*Q ≅ f*Ũ".into()));
        }
        let cat = self.site.site();
        let bp = q.base();
        let mut preimage: Vec<Vec<Option<usize>>> = bp.sizes().iter().map(|&n| vec![None; n]).collect();
        for (c, row) in preimage.iter_mut().enumerate() {
            for a in 0..i.src().size(c) {
                row[i.apply(c, a)] = Some(a);
            }
        }
        let mut order = fibers(q.proj());
        for c in 0..cat.num_objects() {
            for (b, fiber) in order[c].iter_mut().enumerate() {
                if let Some(a) = preimage[c][b] {
                    let rank = |x: &usize| {
                        let k = iq.element(c, &[a, *x]).expect("pair lies in i*Q");
                        let y = fu.legs[1].apply(c, iso.apply(c, k));
                        self.ut_rank(c, y)
                    };
                    fiber.sort_by_key(rank);
                }
            }
        }
        let wq = WellOrderedFibration::new(q.clone(), order)?;
        let cl = self.classify(&wq)?;
        if cl.chi.after_unchecked(i).components() != f.components() {
            return Err(Error::Invalid("extension does not restrict to f; the iso is not over A".into()));
        }
        Ok(cl)
    }
}

/// Enumerates the canonical codes over `y(o)` that are κ-small fibrations.
fn enumerate_codes(site: &SimplicialSite, shape: &Shape, o: ObjId, config: &UniverseConfig) -> Result<Vec<Code>> {
    let cat = site.site();
    // K-morphisms: (β, α) for non-identity β into dom α; table n_α -> n_{αβ}
    let mut kmors: Vec<(MorId, usize, usize)> = Vec::new();
    let mut kindex: HashMap<(MorId, usize), usize> = HashMap::new();
    for (k, &a) in shape.alphas.iter().enumerate() {
        for &beta in cat.arrows_into(cat.dom(a)) {
            if cat.is_identity(beta) {
                continue;
            }
            kindex.insert((beta, k), kmors.len());
            kmors.push((beta, k, shape.index[&cat.compose(a, beta)]));
        }
    }
    // constraints T_{m2} ∘ T_{m1} = T_{m3}, m3 = None meaning identity
    let mut constraints: Vec<(usize, usize, Option<usize>)> = Vec::new();
    for (m1, &(beta, k, kb)) in kmors.iter().enumerate() {
        for &beta2 in cat.arrows_into(cat.dom(beta)) {
            if cat.is_identity(beta2) {
                continue;
            }
            let m2 = kindex[&(beta2, kb)];
            let comp = cat.compose(beta, beta2);
            let m3 = if cat.is_identity(comp) { None } else { Some(kindex[&(comp, k)]) };
            constraints.push((m1, m2, m3));
        }
    }
    let mut by_mor: Vec<Vec<usize>> = vec![Vec::new(); kmors.len()];
    for (ci, &(m1, m2, m3)) in constraints.iter().enumerate() {
        by_mor[m1].push(ci);
        by_mor[m2].push(ci);
        if let Some(m3) = m3 {
            by_mor[m3].push(ci);
        }
    }
    let mut out = Vec::new();
    let mut nodes: u64 = 0;
    let nalpha = shape.alphas.len();
    let mut sizes = vec![0usize; nalpha];
    loop {
        let mut en = Enum {
            kmors: &kmors,
            constraints: &constraints,
            by_mor: &by_mor,
            sizes: &sizes,
            tables: kmors.iter().map(|&(_, k, _)| vec![usize::MAX; sizes[k]]).collect(),
            nodes: &mut nodes,
            max_nodes: config.max_nodes,
        };
        let mut found_tables = Vec::new();
        en.go(0, 0, &mut found_tables)?;
        for tables in found_tables {
            let code = Code::build(site, shape, o, sizes.clone(), |beta, k, i| {
                if cat.is_identity(beta) {
                    i
                } else {
                    tables[kindex[&(beta, k)]][i]
                }
            });
            let (lo, hi) = config.fib_range;
            if site.is_fibration(&code.proj, lo, hi)? {
                out.push(code);
            }
        }
        // next size vector
        let mut pos = 0;
        loop {
            if pos == nalpha {
                return Ok(out);
            }
            sizes[pos] += 1;
            if sizes[pos] < config.kappa {
                break;
            }
            sizes[pos] = 0;
            pos += 1;
        }
    }
}

struct Enum<'a> {
    kmors: &'a [(MorId, usize, usize)],
    constraints: &'a [(usize, usize, Option<usize>)],
    by_mor: &'a [Vec<usize>],
    sizes: &'a [usize],
    tables: Vec<Vec<usize>>,
    nodes: &'a mut u64,
    max_nodes: u64,
}

const UNSET: usize = usize::MAX;

impl Enum<'_> {
    fn go(&mut self, m: usize, x: usize, out: &mut Vec<Vec<Vec<usize>>>) -> Result<()> {
        if m == self.kmors.len() {
            out.push(self.tables.clone());
            return Ok(());
        }
        let (_, k, kb) = self.kmors[m];
        if x == self.sizes[k] {
            return self.go(m + 1, 0, out);
        }
        for v in 0..self.sizes[kb] {
            *self.nodes += 1;
            if *self.nodes > self.max_nodes {
                return Err(Error::Bounds { budget: self.max_nodes, context: "enumerating universe codes".into() });
            }
            self.tables[m][x] = v;
            if self.consistent(m) {
                self.go(m, x + 1, out)?;
            }
        }
        self.tables[m][x] = UNSET;
        Ok(())
    }

    fn consistent(&self, m: usize) -> bool {
        for &ci in &self.by_mor[m] {
            let (m1, m2, m3) = self.constraints[ci];
            let (_, k1, _) = self.kmors[m1];
            for x in 0..self.sizes[k1] {
                let y = self.tables[m1][x];
                if y == UNSET {
                    continue;
                }
                let z = self.tables[m2][y];
                if z == UNSET {
                    continue;
                }
                let w = match m3 {
                    Some(m3) => self.tables[m3][x],
                    None => x,
                };
                if w != UNSET && w != z {
                    return false;
                }
            }
        }
        true
    }
}

/// `D₁ = D₂ ×_{Π_i i*D₂} Π_i E₁` with `v: D₁ -> D₂` and the iso `E₁ ≅ i*D₁`.
#[derive(Clone, Debug)]
pub struct EquivalenceExtension {
    pub d1: Slice,
    pub v: NatMap,
    /// `E₁ -> i*D₁`, an iso over `A`.
    pub iso: NatMap,
    /// `i*D₁` as a slice over `A` with its map to `D₁`.
    pub restricted: (Slice, NatMap),
}

/// Extends a weak equivalence `w: E₁ -> i*D₂` over `A` along `i: A ↪ B`.
pub fn equivalence_extension(
    site: &SimplicialSite,
    i: &NatMap,
    d2: &Slice,
    e1: &Slice,
    w: &NatMap,
    config: &UniverseConfig,
) -> Result<EquivalenceExtension> {
    if !i.is_mono() {
        return Err(Error::Precondition("the inclusion is not a monomorphism".into()));
    }
    if config.enforce_kappa_bound && config.kappa <= site.site().num_morphisms() {
        return Err(Error::Precondition("κ does not exceed the arrows of the site".into()));
    }
    for (what, s) in [("D₂", d2), ("E₁", e1)] {
        if let Some(err) = smallness_violation(s.proj(), config.kappa) {
            return Err(Error::Precondition(format!("{what} is not κ-small: {err}")));
        }
    }
    let fd = pullback_along(i, d2)?;
    if w.src() != e1.total() || w.dst() != fd.0.total() {
        return Err(Error::Precondition("w must map E₁ into the canonical pullback i*D₂".into()));
    }
    if !is_weq(site, w, e1, &fd.0)? {
        return Err(Error::Precondition("w is not a weak equivalence".into()));
    }
    let pi_e2 = pi(i, &fd.0)?;
    let eta = pi_unit(d2, &fd, &pi_e2)?;
    let pi_e1 = pi(i, e1)?;
    let piw = pi_map(&pi_e1, &pi_e2, w)?;
    let d1_pb = pullback(&eta, &piw)?;
    let v = d1_pb.legs[0].clone();
    let d1 = Slice::new(d2.proj().after_unchecked(&v));
    let restricted = pullback_along(i, &d1)?;
    let ridx = pair_index(&restricted.0, &restricted.1);
    let cat = site.site();
    let t = e1.total();
    let comps = (0..cat.num_objects())
        .map(|c| {
            (0..t.size(c))
                .map(|e| {
                    let a = e1.proj().apply(c, e);
                    let d2e = fd.1.apply(c, w.apply(c, e));
                    let tab = pi_e1.table_from(c, i.apply(c, a), |alpha, _| t.act(alpha, e));
                    let s = pi_e1.lookup(c, i.apply(c, a), &tab).ok_or_else(|| Error::Invalid("unit section missing".into()))?;
                    let x = d1_pb.element(c, &[d2e, s]).ok_or_else(|| Error::Invalid("pair not in D₁".into()))?;
                    Ok(ridx[c][&(a, x)])
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let iso = NatMap::raw(t.clone(), restricted.0.total().clone(), comps);
    if !iso.is_natural() || !iso.is_iso() {
        return Err(Error::Invalid("E₁ -> i*D₁ is not an isomorphism".into()));
    }
    Ok(EquivalenceExtension { d1, v, iso, restricted })
}

impl EquivalenceExtension {
    /// `i*v ∘ iso`, which must equal `w`.
    pub fn restricted_v(&self, i: &NatMap, d2: &Slice) -> Result<NatMap> {
        let fd = pullback_along(i, d2)?;
        let idx = pair_index(&fd.0, &fd.1);
        let src = self.restricted.0.total();
        let comps = (0..src.sizes().len())
            .map(|c| {
                (0..src.size(c))
                    .map(|k| {
                        let a = self.restricted.0.proj().apply(c, k);
                        let y = self.v.apply(c, self.restricted.1.apply(c, k));
                        idx[c][&(a, y)]
                    })
                    .collect()
            })
            .collect();
        let iv = NatMap::raw(src.clone(), fd.0.total().clone(), comps);
        Ok(iv.after_unchecked(&self.iso))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::TruncationConfig;

    #[test]
    fn codes_over_a_point() {
        let s = SimplicialSite::sets(TruncationConfig::new(0));
        let u = Universe::build(&s, UniverseConfig::new(2, &s)).unwrap();
        assert_eq!(u.u().sizes(), &[2]);
        let single = u.codes(0).iter().position(|c| c.fibers == vec![1]).unwrap();
        assert_eq!(u.p().component(0).iter().filter(|&&k| k == single).count(), 1);
    }

    #[test]
    fn smallness_is_strict() {
        let s = SimplicialSite::sets(TruncationConfig::new(0));
        let e = Presheaf::constant(s.sset().clone(), 3);
        let f = NatMap::to_terminal(&e);
        assert!(!smallness_check(&f, 3));
        assert!(smallness_check(&f, 4));
        assert!(smallness_check(&NatMap::identity(&e), 2));
    }

    #[test]
    fn universe_is_functorial_and_classifies_itself() {
        let s = SimplicialSite::sets(TruncationConfig::new(1));
        let u = Universe::build(&s, UniverseConfig::new(3, &s)).unwrap();
        assert!(u.u().is_functorial());
        assert!(u.ut().is_functorial());
        assert!(u.p().is_natural());
        assert!(s.is_fibration(u.p(), 1, 1).unwrap());
        let wp = WellOrderedFibration {
            slice: Slice::new(u.p().clone()),
            order: (0..2)
                .map(|o| (0..u.u().size(o)).map(|k| fibers(u.p())[o][k].clone()).collect())
                .collect(),
        };
        let cl = u.classify(&wp).unwrap();
        assert_eq!(cl.chi, NatMap::identity(u.u()));
    }

    fn two_sheeted(s: &SimplicialSite, b: &Presheaf) -> Slice {
        crate::fixtures::product_fibration(s, b, &crate::fixtures::points(s, 2)).unwrap()
    }

    #[test]
    fn classify_over_boundary() {
        let s = SimplicialSite::sets(TruncationConfig::new(1));
        let u = Universe::build(&s, UniverseConfig::new(3, &s)).unwrap();
        let (bd, _) = s.boundary(0, 1).unwrap();
        let e = two_sheeted(&s, &bd);
        let cl = u.classify(&WellOrderedFibration::by_id(e.clone())).unwrap();
        assert!(cl.iso.is_iso());
        // classifying map is natural, so its pullback is a presheaf over bd
        assert!(cl.chi.is_natural());
    }

    #[test]
    fn extension_along_horn() {
        let s = SimplicialSite::sets(TruncationConfig::new(1));
        let u = Universe::build(&s, UniverseConfig::new(3, &s)).unwrap();
        let (_, i) = s.horn(0, 1, 0).unwrap();
        let q = two_sheeted(&s, i.dst());
        // classify i*Q with the reversed order, then extend
        let iq = pullback_along(&i, &q).unwrap().0;
        let mut order = fibers(iq.proj());
        for lvl in order.iter_mut() {
            for f in lvl.iter_mut() {
                f.reverse();
            }
        }
        let cl = u.classify(&WellOrderedFibration::new(iq.clone(), order).unwrap()).unwrap();
        let ext = u.extend_classifier(&i, &cl.chi, &q, &cl.iso).unwrap();
        assert_eq!(ext.chi.after(&i).unwrap(), cl.chi);
        assert!(ext.iso.is_iso());
    }

    #[test]
    fn extension_from_empty_is_classification() {
        let s = SimplicialSite::sets(TruncationConfig::new(1));
        let u = Universe::build(&s, UniverseConfig::new(3, &s)).unwrap();
        let d1 = s.simplex(1).unwrap();
        let q = two_sheeted(&s, &d1);
        let i = NatMap::from_initial(&d1);
        let f = NatMap::from_initial(u.u());
        let iq = pullback(&i, q.proj()).unwrap();
        let fu = pullback(&f, u.p()).unwrap();
        let iso = NatMap::new(iq.apex.clone(), fu.apex.clone(), vec![vec![]; 2]).unwrap();
        let ext = u.extend_classifier(&i, &f, &q, &iso).unwrap();
        let direct = u.classify(&WellOrderedFibration::by_id(q)).unwrap();
        assert_eq!(ext.chi, direct.chi);
    }

    #[test]
    fn equivalence_extension_along_horn() {
        let s = SimplicialSite::sets(TruncationConfig::new(1).with_margin(0));
        let cfg = UniverseConfig::new(3, &s);
        let (_, i) = s.horn(0, 1, 0).unwrap();
        let d2 = two_sheeted(&s, i.dst());
        let e2 = pullback_along(&i, &d2).unwrap().0;
        let w = NatMap::identity(e2.total());
        let out = equivalence_extension(&s, &i, &d2, &e2, &w, &cfg).unwrap();
        assert!(out.v.is_iso());
        assert_eq!(out.restricted_v(&i, &d2).unwrap(), w);
        // i = identity: D₁ ≅ E₁
        let id = NatMap::identity(i.dst());
        let e2b = pullback_along(&id, &d2).unwrap().0;
        let wb = NatMap::identity(e2b.total());
        let out = equivalence_extension(&s, &id, &d2, &e2b, &wb, &cfg).unwrap();
        assert!(out.iso.is_iso());
        assert!(out.v.is_iso());
    }
}
