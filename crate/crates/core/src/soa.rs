//! A bounded run of the small-object-argument construction of a universe:
//! stages `Ũ_α -> U_α` grown by attaching cells along generating monos.

use std::collections::HashSet;
use std::sync::Arc;

use crate::category::{FiniteCategory, ObjId};
use crate::error::{Error, Result};
use crate::limits::{colimit, coproduct, is_pullback_square, pullback, pushout, Diagram};
use crate::presheaf::{NatMap, Presheaf};
use crate::lcc::Slice;
use crate::search::{fibers, find_iso_over, MapSearch};
use crate::simplicial::SimplicialSite;
use crate::universe::{smallness_check, Classification, Code, Universe, WellOrderedFibration};

/// One stage `p_α: Ũ_α -> U_α`.
#[derive(Clone, Debug)]
pub struct Stage {
    pub u: Presheaf,
    pub ut: Presheaf,
    pub p: NatMap,
}

/// An attached cell: generator index, attaching map and the canonical code.
#[derive(Clone, Debug)]
pub struct Triple {
    pub generator: usize,
    pub f: NatMap,
    pub code: Code,
}

/// A generating mono `A ↪ y(o)`.
#[derive(Clone, Debug)]
pub struct CellGenerator {
    pub incl: NatMap,
    pub target: ObjId,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StageInvariants {
    /// `Ũ_α -> U_α` is a κ-small fibration.
    pub small_fibration: bool,
    /// `U_{α-1} -> U_α` is monic.
    pub mono: bool,
    /// the square over `U_{α-1} -> U_α` is a pullback.
    pub pullback: bool,
}

impl StageInvariants {
    pub fn holds(&self) -> bool {
        self.small_fibration && self.mono && self.pullback
    }
}

#[derive(Clone, Debug)]
pub struct SoaState {
    universe: Arc<Universe>,
    generators: Vec<CellGenerator>,
    pub stages: Vec<Stage>,
    /// `u_incl[α]: U_α -> U_{α+1}` and likewise for `Ũ`.
    pub u_incl: Vec<NatMap>,
    pub ut_incl: Vec<NatMap>,
    pub ledger: Vec<Vec<Triple>>,
    /// `cells[α][t]: cod(i_t) -> U_{α+1}` for each attached triple.
    pub cells: Vec<Vec<NatMap>>,
    pub invariants: Vec<StageInvariants>,
    pub max_triples: usize,
}

/// `∂Δⁿ ↪ Δⁿ` at each object for `n ≤ N`.
pub fn boundary_cells(site: &SimplicialSite) -> Result<Vec<CellGenerator>> {
    Ok(site
        .boundary_generators(0, site.dim())?
        .into_iter()
        .map(|g| CellGenerator { incl: g.incl, target: g.target })
        .collect())
}

fn all_perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in all_perms(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

impl SoaState {
    /// `Ũ₀ = U₀ = ∅`.
    pub fn init(universe: Arc<Universe>, generators: Vec<CellGenerator>) -> Self {
        let site = universe.site().site().clone();
        let empty = Presheaf::initial(site);
        SoaState {
            universe,
            generators,
            stages: vec![Stage { u: empty.clone(), ut: empty.clone(), p: NatMap::identity(&empty) }],
            u_incl: Vec::new(),
            ut_incl: Vec::new(),
            ledger: Vec::new(),
            cells: Vec::new(),
            invariants: Vec::new(),
            max_triples: 5_000,
        }
    }

    pub fn with_max_triples(mut self, n: usize) -> Self {
        self.max_triples = n;
        self
    }

    pub fn current(&self) -> &Stage {
        self.stages.last().expect("at least the initial stage")
    }

    pub fn generators(&self) -> &[CellGenerator] {
        &self.generators
    }

    /// All triples `(i, f, p)` for the current stage, `p` a canonical code
    /// with `i*p = f*Ũ_α` in the fiber order inherited from `Ũ_α`.
    pub fn triples(&self) -> Result<Vec<Triple>> {
        let st = self.current();
        let univ = &self.universe;
        let cat = univ.site().site().clone();
        let fib = fibers(&st.p);
        let mut rank: Vec<Vec<usize>> = st.ut.sizes().iter().map(|&n| vec![0; n]).collect();
        for (c, lvl) in fib.iter().enumerate() {
            for f in lvl {
                for (i, &x) in f.iter().enumerate() {
                    rank[c][x] = i;
                }
            }
        }
        let mut out = Vec::new();
        for (gi, g) in self.generators.iter().enumerate() {
            let a = g.incl.src();
            let o = g.target;
            let alphas = univ.alphas(o);
            // alpha index of each element of A
            let a_alpha: Vec<Vec<usize>> = (0..cat.num_objects())
                .map(|d| (0..a.size(d)).map(|x| univ.alpha_index(o, cat.hom(d, o)[g.incl.apply(d, x)])).collect())
                .collect();
            let mut in_a = vec![false; alphas.len()];
            for row in &a_alpha {
                for &k in row {
                    in_a[k] = true;
                }
            }
            let free: Vec<usize> = (0..alphas.len()).filter(|&k| !in_a[k]).collect();
            let mut search = MapSearch::new(a, &st.u)?;
            search.max_nodes(univ.site().max_nodes()).context("enumerating attaching maps");
            for f in search.all()? {
                let mut seen = HashSet::new();
                for code in univ.codes(o) {
                    if !restricts_to(code, &cat, &a_alpha, &f, &fib, &rank, &st.ut, univ, o) {
                        continue;
                    }
                    let canon = canonical(univ, code, &free);
                    if seen.insert(canon.key_of()) {
                        out.push(Triple { generator: gi, f: f.clone(), code: canon });
                        if out.len() > self.max_triples {
                            return Err(Error::Bounds {
                                budget: self.max_triples as u64,
                                context: format!("more than {} attaching triples", self.max_triples),
                            });
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Attaches every triple of the current stage by the two pushouts.
    pub fn step(&self) -> Result<SoaState> {
        let triples = self.triples()?;
        let st = self.current();
        let base = self.universe.site().site().clone();
        let a_parts: Vec<Presheaf> = triples.iter().map(|t| self.generators[t.generator].incl.src().clone()).collect();
        let y_parts: Vec<Presheaf> = triples.iter().map(|t| t.code.proj.dst().clone()).collect();
        let ca = coproduct(base.clone(), &a_parts)?;
        let cy = coproduct(base.clone(), &y_parts)?;
        let big_i = ca.factor(
            &cy.apex,
            &triples
                .iter()
                .enumerate()
                .map(|(k, t)| cy.injections[k].after_unchecked(&self.generators[t.generator].incl.with_ends(a_parts[k].clone(), y_parts[k].clone())))
                .collect::<Vec<_>>(),
        )?;
        let big_f = ca.factor(&st.u, &triples.iter().map(|t| t.f.clone()).collect::<Vec<_>>())?;
        let upo = pushout(&big_f, &big_i)?;
        let u_next = upo.apex.clone();
        // Ũ side
        let pbs = triples.iter().map(|t| pullback(&t.f, &st.p)).collect::<Result<Vec<_>>>()?;
        let cc = coproduct(base.clone(), &pbs.iter().map(|p| p.apex.clone()).collect::<Vec<_>>())?;
        let ce = coproduct(base.clone(), &triples.iter().map(|t| t.code.total.clone()).collect::<Vec<_>>())?;
        let fib = fibers(&st.p);
        let j_maps: Vec<NatMap> = triples
            .iter()
            .zip(&pbs)
            .enumerate()
            .map(|(k, (t, pb))| {
                let g = &self.generators[t.generator];
                let o = g.target;
                let comps = (0..base.num_objects())
                    .map(|d| {
                        (0..pb.apex.size(d))
                            .map(|z| {
                                let x = pb.legs[0].apply(d, z);
                                let ut = pb.legs[1].apply(d, z);
                                let alpha = base.hom(d, o)[g.incl.apply(d, x)];
                                let kk = self.universe.alpha_index(o, alpha);
                                let r = fib[d][st.p.apply(d, ut)].iter().position(|&w| w == ut).expect("in its fiber");
                                t.code.element(kk, r)
                            })
                            .collect()
                    })
                    .collect();
                ce.injections[k].after_unchecked(&NatMap::raw(pb.apex.clone(), t.code.total.clone(), comps))
            })
            .collect();
        let big_j = cc.factor(&ce.apex, &j_maps)?;
        let big_ft = cc.factor(&st.ut, &pbs.iter().map(|p| p.legs[1].clone()).collect::<Vec<_>>())?;
        let tpo = pushout(&big_ft, &big_j)?;
        let leg_a = upo.injections[1].after_unchecked(&st.p);
        let leg_b = upo.injections[2].after_unchecked(&ce.factor(
            &cy.apex,
            &triples
                .iter()
                .enumerate()
                .map(|(k, t)| cy.injections[k].after_unchecked(&t.code.proj))
                .collect::<Vec<_>>(),
        )?);
        let p_next = tpo.factor(&u_next, &[leg_a.after_unchecked(&big_ft), leg_a, leg_b])?;
        let mut next = self.clone();
        next.stages.push(Stage { u: u_next, ut: tpo.apex.clone(), p: p_next });
        next.u_incl.push(upo.injections[1].clone());
        next.ut_incl.push(tpo.injections[1].clone());
        next.cells.push((0..triples.len()).map(|k| upo.injections[2].after_unchecked(&cy.injections[k])).collect());
        next.ledger.push(triples);
        let inv = next.check_last()?;
        next.invariants.push(inv);
        Ok(next)
    }

    /// The (2′) lift for a generator and a map `f` into a built stage `U_α`:
    /// the cell attached for `(i, f, Q)`, as a map into `U_{α+1}`, with
    /// `g ∘ i = u_incl ∘ f` and `g*Ũ_{α+1} ≅ Q` both checked.
    pub fn cell_lift(&self, alpha: usize, generator: usize, f: &NatMap, q: &Slice) -> Result<Option<NatMap>> {
        let (Some(triples), Some(cells)) = (self.ledger.get(alpha), self.cells.get(alpha)) else {
            return Err(Error::OutOfRange(format!("stage {alpha} has no successor yet")));
        };
        let max = self.universe.site().max_nodes();
        let g = &self.generators[generator];
        let next = &self.stages[alpha + 1];
        for (t, cell) in triples.iter().zip(cells) {
            if t.generator != generator || t.f.components() != f.components() {
                continue;
            }
            if find_iso_over(&t.code.proj, q.proj(), max)?.is_none() {
                continue;
            }
            let restricts = cell.after_unchecked(&g.incl).components() == self.u_incl[alpha].after_unchecked(f).components();
            let pb = pullback(cell, &next.p)?;
            if restricts && find_iso_over(&pb.legs[0], q.proj(), max)?.is_some() {
                return Ok(Some(cell.clone()));
            }
        }
        Ok(None)
    }

    fn check_last(&self) -> Result<StageInvariants> {
        let k = self.stages.len() - 1;
        let (prev, cur) = (&self.stages[k - 1], &self.stages[k]);
        check_pair(
            self.universe.site(),
            self.universe.kappa(),
            prev,
            cur,
            &self.u_incl[k - 1],
            &self.ut_incl[k - 1],
            self.universe.config().fib_range,
        )
    }

    /// The colimit of the whole chain, with the invariants of each stage
    /// inclusion into it.
    pub fn colimit_stage(&self) -> Result<(Stage, Vec<StageInvariants>)> {
        let base = self.universe.site().site().clone();
        let n = self.stages.len();
        let shape = Arc::new(FiniteCategory::chain(n));
        let compose_chain = |incl: &[NatMap], objs: &[Presheaf]| -> Vec<NatMap> {
            (0..shape.num_morphisms())
                .map(|m| {
                    let (a, b) = (shape.dom(m), shape.cod(m));
                    let mut f = NatMap::identity(&objs[a]);
                    for step in incl.iter().take(b).skip(a) {
                        f = step.after_unchecked(&f);
                    }
                    f
                })
                .collect()
        };
        let us: Vec<Presheaf> = self.stages.iter().map(|s| s.u.clone()).collect();
        let uts: Vec<Presheaf> = self.stages.iter().map(|s| s.ut.clone()).collect();
        let du = Diagram::new(base.clone(), shape.clone(), us.clone(), compose_chain(&self.u_incl, &us))?;
        let dt = Diagram::new(base.clone(), shape.clone(), uts.clone(), compose_chain(&self.ut_incl, &uts))?;
        let cu = colimit(&du);
        let ct = colimit(&dt);
        let legs: Vec<NatMap> = (0..n).map(|k| cu.injections[k].after_unchecked(&self.stages[k].p)).collect();
        let p = ct.factor(&cu.apex, &legs)?;
        let stage = Stage { u: cu.apex.clone(), ut: ct.apex.clone(), p };
        let mut inv = Vec::with_capacity(n);
        for k in 0..n {
            inv.push(check_pair(
                self.universe.site(),
                self.universe.kappa(),
                &self.stages[k],
                &stage,
                &cu.injections[k],
                &ct.injections[k],
                self.universe.config().fib_range,
            )?);
        }
        Ok((stage, inv))
    }
}

fn check_pair(
    site: &SimplicialSite,
    kappa: usize,
    prev: &Stage,
    cur: &Stage,
    u_incl: &NatMap,
    ut_incl: &NatMap,
    (lo, hi): (usize, usize),
) -> Result<StageInvariants> {
    Ok(StageInvariants {
        small_fibration: smallness_check(&cur.p, kappa) && site.is_fibration(&cur.p, lo, hi)?,
        mono: u_incl.is_mono(),
        pullback: is_pullback_square(ut_incl, &prev.p, &cur.p, u_incl)?,
    })
}

#[allow(clippy::too_many_arguments)]
fn restricts_to(
    code: &Code,
    cat: &FiniteCategory,
    a_alpha: &[Vec<usize>],
    f: &NatMap,
    fib: &[Vec<Vec<usize>>],
    rank: &[Vec<usize>],
    ut: &Presheaf,
    univ: &Universe,
    o: ObjId,
) -> bool {
    let a = f.src();
    for d in 0..cat.num_objects() {
        for x in 0..a.size(d) {
            let k = a_alpha[d][x];
            let fiber = &fib[d][f.apply(d, x)];
            if code.fibers[k] != fiber.len() {
                return false;
            }
        }
    }
    for d in 0..cat.num_objects() {
        for x in 0..a.size(d) {
            let k = a_alpha[d][x];
            let fiber = &fib[d][f.apply(d, x)];
            for &beta in cat.arrows_into(d) {
                let d2 = cat.dom(beta);
                let kb = univ.alpha_index(o, cat.compose(univ.alphas(o)[k], beta));
                for (i, &u) in fiber.iter().enumerate() {
                    let mine = code.total.act(beta, code.element(k, i)) - code.element(kb, 0);
                    if mine != rank[d2][ut.act(beta, u)] {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// The least code (by key) obtained by permuting fibers over the `free` arrows.
fn canonical(univ: &Universe, code: &Code, free: &[usize]) -> Code {
    let ident: Vec<Vec<usize>> = code.fibers.iter().map(|&n| (0..n).collect()).collect();
    let mut best = code.clone();
    let mut best_key = code.key_of();
    let choices: Vec<Vec<Vec<usize>>> = free.iter().map(|&k| all_perms(code.fibers[k])).collect();
    let mut idx = vec![0usize; free.len()];
    loop {
        let mut perms = ident.clone();
        for (slot, &k) in free.iter().enumerate() {
            perms[k] = choices[slot][idx[slot]].clone();
        }
        let c = univ.relabel(code, &perms);
        let key = c.key_of();
        if key < best_key {
            best_key = key;
            best = c;
        }
        let mut pos = 0;
        loop {
            if pos == free.len() {
                return best;
            }
            idx[pos] += 1;
            if idx[pos] < choices[pos].len() {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
    }
}

/// A source of (2′) lifts for a class of monos.
pub trait ExtensionWitness {
    /// Given `f: A -> U`, `Q` over `B` and `iso: i*Q ≅ f*Ũ`, a map `g: B -> U`
    /// with `g ∘ i = f` together with `Q ≅ g*Ũ`.
    fn extend(&self, i: &NatMap, f: &NatMap, q: &Slice, iso: &NatMap) -> Result<Classification>;
}

impl ExtensionWitness for Universe {
    fn extend(&self, i: &NatMap, f: &NatMap, q: &Slice, iso: &NatMap) -> Result<Classification> {
        self.extend_classifier(i, f, q, iso)
    }
}

/// One instance of the closure properties of monos with lifts.
#[derive(Clone, Debug)]
pub enum SaturationCase {
    /// `j: C ↪ C ⊔_A B`, the pushout of the generator `i` along `h: A -> C`.
    /// `f` starts at `C`, `q` lives over the pushout.
    Pushout { i: NatMap, h: NatMap, f: NatMap, q: Slice, iso: NatMap },
    /// `i2 ∘ i1`, extended one mono at a time.
    Composite { i1: NatMap, i2: NatMap, f: NatMap, q: Slice, iso: NatMap },
    /// `j` a retract of the generator `i` via `s_a, r_a` on domains and
    /// `s_b, r_b` on codomains.
    Retract { i: NatMap, j: NatMap, s_a: NatMap, r_a: NatMap, s_b: NatMap, r_b: NatMap, f: NatMap, q: Slice, iso: NatMap },
}

impl SaturationCase {
    fn kind(&self) -> &'static str {
        match self {
            SaturationCase::Pushout { .. } => "pushout",
            SaturationCase::Composite { .. } => "composite",
            SaturationCase::Retract { .. } => "retract",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SaturationOutcome {
    pub kind: &'static str,
    /// the lift restricts to the given map on the nose
    pub restricts: bool,
    /// the lift classifies `Q`, with `Q -> Ũ` a pullback square over it
    pub classifies: bool,
    pub detail: String,
}

impl SaturationOutcome {
    pub fn passed(&self) -> bool {
        self.restricts && self.classifies
    }
}

#[derive(Clone, Debug, Default)]
pub struct SaturationReport {
    pub outcomes: Vec<SaturationOutcome>,
}

impl SaturationReport {
    pub fn passed(&self) -> bool {
        !self.outcomes.is_empty() && self.outcomes.iter().all(SaturationOutcome::passed)
    }
}

/// Given `k ∘ i = j ∘ h`, `Q` over the codomain of `j` and `iso: j*Q ≅ f*Ũ`,
/// the induced iso `i*(k*Q) ≅ (f ∘ h)*Ũ`. Returns `k*Q` as a slice too.
fn transport(univ: &Universe, i: &NatMap, h: &NatMap, k: &NatMap, j: &NatMap, f: &NatMap, q: &Slice, iso: &NatMap) -> Result<(Slice, NatMap)> {
    let kq = pullback(k, q.proj())?;
    let kq_slice = Slice::new(kq.legs[0].clone());
    let ikq = pullback(i, kq_slice.proj())?;
    let jq = pullback(j, q.proj())?;
    let fu = pullback(f, univ.p())?;
    let fh = f.after_unchecked(h);
    let fhu = pullback(&fh, univ.p())?;
    let cat = univ.site().site();
    let comps = (0..cat.num_objects())
        .map(|c| {
            (0..ikq.apex.size(c))
                .map(|z| {
                    let a = ikq.legs[0].apply(c, z);
                    let y = ikq.legs[1].apply(c, z);
                    let x = kq.legs[1].apply(c, y);
                    let w = jq.element(c, &[h.apply(c, a), x]).ok_or(Error::Invalid("the square does not commute".into()))?;
                    let u = fu.legs[1].apply(c, iso.apply(c, w));
                    fhu.element(c, &[a, u]).ok_or(Error::Invalid("transported element leaves (f h)*Ũ".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((kq_slice, NatMap::raw(ikq.apex.clone(), fhu.apex.clone(), comps)))
}

fn judge(univ: &Universe, kind: &'static str, g: &NatMap, j: &NatMap, f: &NatMap, q: &Slice) -> Result<SaturationOutcome> {
    let restricts = g.after_unchecked(j).components() == f.components();
    let gu = pullback(g, univ.p())?;
    let iso = find_iso_over(q.proj(), &gu.legs[0], univ.site().max_nodes())?;
    let classifies = match iso {
        Some(iso) => is_pullback_square(&gu.legs[1].after_unchecked(&iso), q.proj(), univ.p(), g)?,
        None => false,
    };
    Ok(SaturationOutcome {
        kind,
        restricts,
        classifies,
        detail: format!("g∘j = f: {restricts}; Q ≅ g*Ũ as a pullback: {classifies}"),
    })
}

fn run_case(univ: &Universe, witness: &dyn ExtensionWitness, case: &SaturationCase) -> Result<SaturationOutcome> {
    match case {
        SaturationCase::Pushout { i, h, f, q, iso } => {
            // j: C -> D and k: B -> D
            let po = pushout(h, i)?;
            let (j, k) = (&po.injections[1], &po.injections[2]);
            q.check_base(&po.apex)?;
            let (kq, iso_a) = transport(univ, i, h, k, j, f, q, iso)?;
            let lift = witness.extend(i, &f.after_unchecked(h), &kq, &iso_a)?;
            let g = po.factor(univ.u(), &[f.after_unchecked(h), f.clone(), lift.chi.clone()])?;
            judge(univ, case.kind(), &g, j, f, q)
        }
        SaturationCase::Composite { i1, i2, f, q, iso } => {
            let j = i2.after_unchecked(i1);
            let id = NatMap::identity(i1.src());
            let (q1, iso1) = transport(univ, i1, &id, i2, &j, f, q, iso)?;
            let g1 = witness.extend(i1, f, &q1, &iso1)?;
            let g2 = witness.extend(i2, &g1.chi, q, &g1.iso)?;
            judge(univ, case.kind(), &g2.chi, &j, f, q)
        }
        SaturationCase::Retract { i, j, s_a, r_a, s_b, r_b, f, q, iso } => {
            let square = |x: &NatMap, y: &NatMap| x.components() == y.components();
            if !square(&i.after_unchecked(s_a), &s_b.after_unchecked(j))
                || !square(&j.after_unchecked(r_a), &r_b.after_unchecked(i))
                || !square(&r_a.after_unchecked(s_a), &NatMap::identity(j.src()))
                || !square(&r_b.after_unchecked(s_b), &NatMap::identity(j.dst()))
            {
                return Err(Error::Invalid("the retract data does not commute".into()));
            }
            let (rq, iso_r) = transport(univ, i, r_a, r_b, j, f, q, iso)?;
            let lift = witness.extend(i, &f.after_unchecked(r_a), &rq, &iso_r)?;
            let g = lift.chi.after_unchecked(s_b);
            judge(univ, case.kind(), &g, j, f, q)
        }
    }
}

/// Runs each closure construction, reporting failures as outcomes.
pub fn saturation_check(univ: &Universe, witness: &dyn ExtensionWitness, cases: &[SaturationCase]) -> SaturationReport {
    let outcomes = cases
        .iter()
        .map(|c| {
            run_case(univ, witness, c).unwrap_or_else(|e| SaturationOutcome {
                kind: c.kind(),
                restricts: false,
                classifies: false,
                detail: e.to_string(),
            })
        })
        .collect();
    SaturationReport { outcomes }
}

/// Data `(f, iso)` for a lifting problem along `j`: the classifying map of
/// `j*Q` with fibers ordered by id.
pub fn problem_data(univ: &Universe, j: &NatMap, q: &Slice) -> Result<(NatMap, NatMap)> {
    let jq = pullback(j, q.proj())?;
    let cl = univ.classify(&WellOrderedFibration::by_id(Slice::new(jq.legs[0].clone())))?;
    Ok((cl.chi, cl.iso))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::TruncationConfig;
    use crate::universe::UniverseConfig;

    #[test]
    fn first_step_attaches_one_cell_per_code_over_a_point() {
        let s = SimplicialSite::sets(TruncationConfig::new(0));
        let u = Arc::new(Universe::build(&s, UniverseConfig::new(2, &s)).unwrap());
        let st = SoaState::init(u, boundary_cells(&s).unwrap());
        let st1 = st.step().unwrap();
        assert_eq!(st1.current().u.sizes(), &[2]);
        assert!(st1.invariants[0].holds());
        let st2 = st1.step().unwrap();
        assert!(st2.invariants[1].holds());
        let (_, inv) = st2.colimit_stage().unwrap();
        assert!(inv.iter().all(StageInvariants::holds));
        // the point of U₁ carrying the singleton fiber
        let t = st2.ledger[1].iter().position(|t| t.code.total.size(0) == 1).unwrap();
        let tr = &st2.ledger[1][t];
        let q = tr.code.as_slice();
        let g = st2.cell_lift(1, tr.generator, &tr.f, &q).unwrap().unwrap();
        assert_eq!(g.components(), st2.cells[1][t].components());
    }

    fn maps(src: &Presheaf, dst: &Presheaf) -> Vec<NatMap> {
        MapSearch::new(src, dst).unwrap().all().unwrap()
    }

    fn pick(src: &Presheaf, dst: &Presheaf, keep: impl Fn(&NatMap) -> bool) -> NatMap {
        maps(src, dst).into_iter().find(|m| keep(m)).unwrap()
    }

    #[test]
    fn saturation_cases_at_dimension_one() {
        let s = SimplicialSite::sets(TruncationConfig::new(1));
        let u = Universe::build(&s, UniverseConfig::new(3, &s)).unwrap();
        let pt = s.representable(0, 0).unwrap();
        let d1 = s.representable(0, 1).unwrap();
        let (bd, i) = s.boundary(0, 1).unwrap();
        let two = crate::fixtures::points(&s, 2);
        let mut cases = Vec::new();

        // collapse the boundary of Δ¹ to a point: a circle
        let h = NatMap::to_terminal(&bd).with_ends(bd.clone(), pt.clone());
        let po = pushout(&h, &i).unwrap();
        let circle = po.apex.clone();
        for fiber in [two.clone(), crate::fixtures::points(&s, 1)] {
            let q = crate::fixtures::product_fibration(&s, &circle, &fiber).unwrap();
            let (f, iso) = problem_data(&u, &po.injections[1], &q).unwrap();
            cases.push(SaturationCase::Pushout { i: i.clone(), h: h.clone(), f, q, iso });
        }

        // vertex 0 into the boundary, then into Δ¹
        let v0 = pick(&pt, &d1, |m| m.apply(0, 0) == 0);
        let i1 = pick(&pt, &bd, |m| i.after_unchecked(m).components() == v0.components());
        let q = crate::fixtures::product_fibration(&s, &d1, &two).unwrap();
        let (f, iso) = problem_data(&u, &v0, &q).unwrap();
        cases.push(SaturationCase::Composite { i1: i1.clone(), i2: i.clone(), f, q: q.clone(), iso });

        // the identity of a point is a retract of the boundary inclusion
        let j = NatMap::identity(&pt);
        let q0 = crate::fixtures::product_fibration(&s, &pt, &two).unwrap();
        let (f, iso) = problem_data(&u, &j, &q0).unwrap();
        cases.push(SaturationCase::Retract {
            i: i.clone(),
            j,
            s_a: i1,
            r_a: NatMap::to_terminal(&bd).with_ends(bd.clone(), pt.clone()),
            s_b: v0,
            r_b: NatMap::to_terminal(&d1).with_ends(d1.clone(), pt.clone()),
            f,
            q: q0,
            iso,
        });

        let report = saturation_check(&u, &u, &cases);
        for o in &report.outcomes {
            assert!(o.passed(), "{}: {}", o.kind, o.detail);
        }
        assert_eq!(report.outcomes.len(), 4);

        // swapping the retraction data breaks the retract square
        if let SaturationCase::Retract { s_b, .. } = &mut cases[3] {
            *s_b = pick(&pt, &d1, |m| m.apply(0, 0) == 1);
        }
        let bad = saturation_check(&u, &u, &cases[3..]);
        assert!(!bad.passed());
    }

    #[test]
    fn permutations() {
        assert_eq!(all_perms(3).len(), 6);
        assert_eq!(all_perms(0), vec![Vec::<usize>::new()]);
    }
}
