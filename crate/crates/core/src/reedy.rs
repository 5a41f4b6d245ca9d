//! Reedy structures on a finite base `C`, latching and matching objects of
//! presheaves on `C × Δ≤N`, and the Reedy (co)fibration predicates.

use std::sync::Arc;

use rand::Rng;

use crate::category::{FiniteCategory, MorId, ObjId};
use crate::error::{Error, Result};
use crate::limits::{colimit, limit, pullback, pushout, Colimit, Diagram, Limit};
use crate::presheaf::{NatMap, Presheaf};
use crate::random;
use crate::simplicial::SimplicialSite;

/// A degree function with direct (`plus`) and inverse (`minus`) arrows.
#[derive(Clone, Debug)]
pub struct ReedyStructure {
    category: Arc<FiniteCategory>,
    degree: Vec<usize>,
    plus: Vec<bool>,
    minus: Vec<bool>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReedyReport {
    pub violations: Vec<String>,
    /// `C⁻` holds only identities.
    pub direct: bool,
    /// `C⁺` holds only identities.
    pub inverse: bool,
}

impl ReedyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn is_monic(cat: &FiniteCategory, f: MorId) -> bool {
    let d = cat.dom(f);
    (0..cat.num_objects()).all(|e| {
        let h = cat.hom(e, d);
        h.iter().enumerate().all(|(i, &g1)| h[i + 1..].iter().all(|&g2| cat.compose(f, g1) != cat.compose(f, g2)))
    })
}

fn is_epic(cat: &FiniteCategory, f: MorId) -> bool {
    let c = cat.cod(f);
    (0..cat.num_objects()).all(|e| {
        let h = cat.hom(c, e);
        h.iter().enumerate().all(|(i, &g1)| h[i + 1..].iter().all(|&g2| cat.compose(g1, f) != cat.compose(g2, f)))
    })
}

impl ReedyStructure {
    pub fn new(category: Arc<FiniteCategory>, degree: Vec<usize>, plus: Vec<bool>, minus: Vec<bool>) -> Result<Self> {
        if degree.len() != category.num_objects() || plus.len() != category.num_morphisms() || minus.len() != category.num_morphisms() {
            return Err(Error::Invalid("degree, plus and minus must cover every object and arrow".into()));
        }
        Ok(ReedyStructure { category, degree, plus, minus })
    }

    /// `Δ≤n` with monos raising and epis lowering the degree `[k] ↦ k`.
    pub fn delta(category: Arc<FiniteCategory>) -> Self {
        let degree = (0..category.num_objects()).collect();
        let plus = (0..category.num_morphisms()).map(|f| is_monic(&category, f)).collect();
        let minus = (0..category.num_morphisms()).map(|f| is_epic(&category, f)).collect();
        ReedyStructure { category, degree, plus, minus }
    }

    /// Every arrow in `C⁺`.
    pub fn direct(category: Arc<FiniteCategory>, degree: Vec<usize>) -> Result<Self> {
        let m = category.num_morphisms();
        let minus = (0..m).map(|f| category.is_identity(f)).collect();
        Self::new(category, degree, vec![true; m], minus)
    }

    /// Every arrow in `C⁻`.
    pub fn inverse(category: Arc<FiniteCategory>, degree: Vec<usize>) -> Result<Self> {
        let m = category.num_morphisms();
        let plus = (0..m).map(|f| category.is_identity(f)).collect();
        Self::new(category, degree, plus, vec![true; m])
    }

    pub fn category(&self) -> &Arc<FiniteCategory> {
        &self.category
    }

    pub fn degree(&self, c: ObjId) -> usize {
        self.degree[c]
    }

    pub fn is_plus(&self, f: MorId) -> bool {
        self.plus[f]
    }

    pub fn is_minus(&self, f: MorId) -> bool {
        self.minus[f]
    }

    /// All factorizations `α = α⁺ ∘ α⁻`.
    pub fn factorizations(&self, a: MorId) -> Vec<(MorId, MorId)> {
        let cat = &self.category;
        let (d, c) = (cat.dom(a), cat.cod(a));
        let mut out = Vec::new();
        for e in 0..cat.num_objects() {
            for &m in cat.hom(d, e) {
                if !self.minus[m] {
                    continue;
                }
                for &p in cat.hom(e, c) {
                    if self.plus[p] && cat.compose(p, m) == a {
                        out.push((p, m));
                    }
                }
            }
        }
        out
    }

    /// The unique `(α⁺, α⁻)`, if there is exactly one.
    pub fn factor(&self, a: MorId) -> Option<(MorId, MorId)> {
        let f = self.factorizations(a);
        (f.len() == 1).then(|| f[0])
    }

    pub fn validate(&self) -> ReedyReport {
        let cat = &self.category;
        let mut v = Vec::new();
        for c in 0..cat.num_objects() {
            let id = cat.identity(c);
            if !self.plus[id] || !self.minus[id] {
                v.push(format!("identity of {} is missing from C⁺ or C⁻", cat.object_name(c)));
            }
        }
        for (set, name) in [(&self.plus, "C⁺"), (&self.minus, "C⁻")] {
            for f in 0..cat.num_morphisms() {
                if !set[f] {
                    continue;
                }
                for g in 0..cat.num_morphisms() {
                    if set[g] && cat.dom(g) == cat.cod(f) && !set[cat.compose(g, f)] {
                        v.push(format!("{name} is not closed under {} ∘ {}", cat.morphism(g).name, cat.morphism(f).name));
                    }
                }
            }
        }
        for f in 0..cat.num_morphisms() {
            if cat.is_identity(f) {
                continue;
            }
            let (d, c) = (self.degree[cat.dom(f)], self.degree[cat.cod(f)]);
            if self.plus[f] && d >= c {
                v.push(format!("{} is in C⁺ but does not raise degree", cat.morphism(f).name));
            }
            if self.minus[f] && c >= d {
                v.push(format!("{} is in C⁻ but does not lower degree", cat.morphism(f).name));
            }
            let n = self.factorizations(f).len();
            if n != 1 {
                v.push(format!("{} has {n} factorizations", cat.morphism(f).name));
            }
        }
        let nonid = |set: &[bool]| (0..cat.num_morphisms()).any(|f| set[f] && !cat.is_identity(f));
        ReedyReport {
            violations: v,
            direct: !nonid(&self.minus),
            inverse: !nonid(&self.plus),
        }
    }

    fn check_site(&self, site: &SimplicialSite) -> Result<()> {
        if Arc::ptr_eq(site.base(), &self.category) || **site.base() == *self.category {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }

    /// Opposite of `∂(c ↓ C⁻)` (`minus`) or of `∂(C⁺ ↓ c)` (`plus`): objects
    /// `(d, α)` and one arrow `(d', α') -> (d, α)` for each `β: d -> d'` in the
    /// relevant class with `β ∘ α = α'` (resp. `α' ∘ β = α`).
    fn boundary_shape(&self, c: ObjId, latching: bool) -> (FiniteCategory, Vec<(ObjId, MorId)>, Vec<MorId>) {
        let cat = &self.category;
        let mut objs = Vec::new();
        for d in 0..cat.num_objects() {
            let arrows = if latching { cat.hom(c, d) } else { cat.hom(d, c) };
            for &a in arrows {
                let keep = if latching { self.minus[a] } else { self.plus[a] };
                if keep && !cat.is_identity(a) {
                    objs.push((d, a));
                }
            }
        }
        let mut arrows = Vec::new();
        for (j, &(d, a)) in objs.iter().enumerate() {
            for (j2, &(d2, a2)) in objs.iter().enumerate() {
                for &b in cat.hom(d, d2) {
                    let ok = if latching {
                        self.minus[b] && cat.compose(b, a) == a2
                    } else {
                        self.plus[b] && cat.compose(a2, b) == a
                    };
                    if ok {
                        arrows.push((b, j2, j));
                    }
                }
            }
        }
        let names = objs.iter().map(|&(_, a)| cat.morphism(a).name.clone()).collect();
        let betas = arrows.iter().map(|&(b, _, _)| b).collect();
        let shape = FiniteCategory::from_concrete(
            names,
            arrows,
            |j| cat.identity(objs[j].0),
            |g, f| cat.compose(*f, *g),
            |b| cat.morphism(*b).name.clone(),
        )
        .expect("slice arrows compose");
        (shape, objs, betas)
    }

    /// The latching (or matching) diagram of a presheaf given only by its
    /// values `at(d)` and restrictions `restr(β): X_{cod β} -> X_{dom β}` on
    /// the objects the diagram touches.
    pub(crate) fn boundary_diagram_with(
        &self,
        sset: &Arc<FiniteCategory>,
        c: ObjId,
        latching: bool,
        at: &dyn Fn(ObjId) -> Presheaf,
        restr: &dyn Fn(MorId) -> NatMap,
    ) -> Result<(Diagram, Vec<(ObjId, MorId)>)> {
        // shape arrows keep the order they were listed in
        let (shape, objs, betas) = self.boundary_shape(c, latching);
        let objects: Vec<Presheaf> = objs.iter().map(|&(d, _)| at(d)).collect();
        let arrows = betas.iter().map(|&b| restr(b)).collect();
        let d = Diagram::new(sset.clone(), Arc::new(shape), objects, arrows)?;
        Ok((d, objs))
    }

    fn boundary_diagram(&self, site: &SimplicialSite, x: &Presheaf, c: ObjId, latching: bool) -> (Diagram, Vec<(ObjId, MorId)>) {
        self.boundary_diagram_with(site.sset(), c, latching, &|d| site.at_object(x, d), &|b| restrict(site, x, b))
            .expect("restrictions are functorial")
    }

    /// `L_c X` with the comparison `L_c X -> X_c`.
    pub fn latching(&self, site: &SimplicialSite, x: &Presheaf, c: ObjId) -> Result<Latching> {
        self.check_site(site)?;
        let (d, objs) = self.boundary_diagram(site, x, c, true);
        let colim = colimit(&d);
        let xc = site.at_object(x, c);
        let legs: Vec<NatMap> = objs.iter().map(|&(_, a)| restrict(site, x, a)).collect();
        let map = colim.factor(&xc, &legs)?;
        Ok(Latching { object: colim.apex.clone(), map, colimit: colim, index: objs })
    }

    /// `M_c X` with the comparison `X_c -> M_c X`.
    pub fn matching(&self, site: &SimplicialSite, x: &Presheaf, c: ObjId) -> Result<Matching> {
        self.check_site(site)?;
        let (d, objs) = self.boundary_diagram(site, x, c, false);
        let lim = limit(&d);
        let xc = site.at_object(x, c);
        let legs: Vec<NatMap> = objs.iter().map(|&(_, a)| restrict(site, x, a)).collect();
        let map = lim.factor_from(&xc, &legs)?;
        Ok(Matching { object: lim.apex.clone(), map, limit: lim, index: objs })
    }

    /// `L_c f: L_c A -> L_c B`.
    pub fn latching_map(&self, site: &SimplicialSite, f: &NatMap, la: &Latching, lb: &Latching) -> Result<NatMap> {
        let legs: Vec<NatMap> = la
            .index
            .iter()
            .enumerate()
            .map(|(j, &(d, _))| lb.colimit.injections[j].after_unchecked(&site.at_object_map(f, d)))
            .collect();
        la.colimit.factor(&lb.object, &legs)
    }

    /// `M_c f: M_c A -> M_c B`.
    pub fn matching_map(&self, site: &SimplicialSite, f: &NatMap, ma: &Matching, mb: &Matching) -> Result<NatMap> {
        let legs: Vec<NatMap> = ma
            .index
            .iter()
            .enumerate()
            .map(|(j, &(d, _))| site.at_object_map(f, d).after_unchecked(&ma.limit.legs[j]))
            .collect();
        mb.limit.factor_from(&ma.object, &legs)
    }

    /// `A_c -> B_c ×_{M_c B} M_c A`.
    pub fn fibration_comparison(&self, site: &SimplicialSite, f: &NatMap, c: ObjId) -> Result<NatMap> {
        let ma = self.matching(site, f.src(), c)?;
        let mb = self.matching(site, f.dst(), c)?;
        let mf = self.matching_map(site, f, &ma, &mb)?;
        let pb = pullback(&mb.map, &mf)?;
        pb.factor_from(&site.at_object(f.src(), c), &[site.at_object_map(f, c), ma.map.clone()])
    }

    /// `A_c ⊔_{L_c A} L_c B -> B_c`.
    pub fn cofibration_comparison(&self, site: &SimplicialSite, f: &NatMap, c: ObjId) -> Result<NatMap> {
        let la = self.latching(site, f.src(), c)?;
        let lb = self.latching(site, f.dst(), c)?;
        let lf = self.latching_map(site, f, &la, &lb)?;
        let po = pushout(&la.map, &lf)?;
        let fc = site.at_object_map(f, c);
        po.factor(&site.at_object(f.dst(), c), &[fc.after_unchecked(&la.map), fc, lb.map.clone()])
    }

    /// The first `c` whose comparison is not a fibration in degrees `lo..=hi`.
    pub fn fibration_failure(&self, site: &SimplicialSite, f: &NatMap, lo: usize, hi: usize) -> Result<Option<ObjId>> {
        let sets = site.sset_site();
        for c in self.by_degree() {
            let cmp = self.fibration_comparison(site, f, c)?;
            if !sets.is_fibration(&cmp, lo, hi)? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    pub fn is_reedy_fibration(&self, site: &SimplicialSite, f: &NatMap, lo: usize, hi: usize) -> Result<bool> {
        Ok(self.fibration_failure(site, f, lo, hi)?.is_none())
    }

    /// The first `c` whose comparison is not monic.
    pub fn cofibration_failure(&self, site: &SimplicialSite, f: &NatMap) -> Result<Option<ObjId>> {
        for c in self.by_degree() {
            if !self.cofibration_comparison(site, f, c)?.is_mono() {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }

    pub fn is_reedy_cofibration(&self, site: &SimplicialSite, f: &NatMap) -> Result<bool> {
        Ok(self.cofibration_failure(site, f)?.is_none())
    }

    /// Objects by ascending degree, ties by id.
    pub fn by_degree(&self) -> Vec<ObjId> {
        let mut v: Vec<ObjId> = (0..self.category.num_objects()).collect();
        v.sort_by_key(|&c| (self.degree[c], c));
        v
    }

    /// `∂Y_c ↪ Y_c`: the arrows into `c` whose `C⁺` part is not an identity.
    pub fn boundary(&self, c: ObjId) -> Result<(Presheaf, NatMap)> {
        let cat = &self.category;
        let y = Presheaf::yoneda(cat.clone(), c)?;
        let keep = (0..cat.num_objects())
            .map(|d| {
                cat.hom(d, c)
                    .iter()
                    .map(|&a| self.factor(a).map(|(p, _)| !cat.is_identity(p)).unwrap_or(false))
                    .collect()
            })
            .collect::<Vec<Vec<bool>>>();
        Ok(y.restrict_to(&keep))
    }

    /// `(Λⁿ_k ⊗ Y_c) ∪ (Δⁿ ⊗ ∂Y_c) -> Δⁿ ⊗ Y_c` for each `c` and `lo ≤ n ≤ hi`.
    pub fn generating_acyclic_cofibrations(&self, site: &SimplicialSite, lo: usize, hi: usize) -> Result<Vec<ReedyGenerator>> {
        self.check_site(site)?;
        let sets = site.sset_site();
        let mut out = Vec::new();
        for c in self.by_degree() {
            let (by, by_incl) = self.boundary(c)?;
            let y = by_incl.dst().clone();
            let (cy, cby) = (site.constant(&y)?, site.constant(&by)?);
            let comps = (0..site.site().num_objects()).map(|o| by_incl.component(site.split_obj(o).0).to_vec()).collect();
            let cincl = NatMap::new(cby.clone(), cy.clone(), comps)?;
            for n in lo.max(1)..=hi.min(site.dim()) {
                let dn = sets.simplex(n)?;
                for k in 0..=n {
                    let (_, horn) = sets.horn(0, n, k)?;
                    let top = site.tensor_map(&horn, &NatMap::identity(&cy))?; // Λ⊗Y -> Δ⊗Y
                    let left = site.tensor_map(&NatMap::identity(horn.src()), &cincl)?; // Λ⊗∂Y -> Λ⊗Y
                    let right = site.tensor_map(&NatMap::identity(&dn), &cincl)?; // Δ⊗∂Y -> Δ⊗Y
                    let corner = site.tensor_map(&horn, &NatMap::identity(&cby))?; // Λ⊗∂Y -> Δ⊗∂Y
                    let po = pushout(&left, &corner)?;
                    let map = po.factor(top.dst(), &[top.after_unchecked(&left), top.clone(), right])?;
                    out.push(ReedyGenerator { c, n, k, map });
                }
            }
        }
        Ok(out)
    }

    /// Necessary conditions for elegance: split `C⁻` arrows and monic
    /// latching maps on `samples` random presheaves.
    pub fn elegance_evidence(&self, site: &SimplicialSite, samples: usize, seed: u64) -> Result<EleganceReport> {
        self.check_site(site)?;
        let cat = &self.category;
        let non_split = (0..cat.num_morphisms()).find(|&f| {
            self.minus[f] && !cat.hom(cat.cod(f), cat.dom(f)).iter().any(|&s| cat.is_identity(cat.compose(f, s)))
        });
        let mut rng = random::rng(seed);
        let mut non_mono = None;
        'outer: for k in 0..samples {
            let gens = rng.gen_range(1..=3);
            let x = random::presheaf(&mut rng, site.site(), gens, 2);
            for c in self.by_degree() {
                if !self.latching(site, &x, c)?.map.is_mono() {
                    non_mono = Some((k, c));
                    break 'outer;
                }
            }
        }
        Ok(EleganceReport {
            non_split: non_split.map(|f| cat.morphism(f).name.clone()),
            non_mono_latching: non_mono,
            samples,
        })
    }
}

/// `X_{d'} -> X_d` for `β: d -> d'`.
pub fn restrict(site: &SimplicialSite, x: &Presheaf, b: MorId) -> NatMap {
    let cat = site.base();
    let (d, d2) = (cat.dom(b), cat.cod(b));
    let comps = (0..=site.dim())
        .map(|k| {
            let a = site.mor(b, site.delta().identity(k));
            x.action_table(a).to_vec()
        })
        .collect();
    NatMap::raw(site.at_object(x, d2), site.at_object(x, d), comps)
}

#[derive(Clone, Debug)]
pub struct Latching {
    pub object: Presheaf,
    pub map: NatMap,
    pub colimit: Colimit,
    /// the objects `(d, α: c -> d)` of the indexing category
    pub index: Vec<(ObjId, MorId)>,
}

#[derive(Clone, Debug)]
pub struct Matching {
    pub object: Presheaf,
    pub map: NatMap,
    pub limit: Limit,
    /// the objects `(d, α: d -> c)` of the indexing category
    pub index: Vec<(ObjId, MorId)>,
}

#[derive(Clone, Debug)]
pub struct ReedyGenerator {
    pub c: ObjId,
    pub n: usize,
    pub k: usize,
    pub map: NatMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EleganceReport {
    /// a `C⁻` arrow with no section
    pub non_split: Option<String>,
    /// `(sample, c)` with a non-monic latching map
    pub non_mono_latching: Option<(usize, ObjId)>,
    pub samples: usize,
}

impl EleganceReport {
    pub fn passed(&self) -> bool {
        self.non_split.is_none() && self.non_mono_latching.is_none()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::TruncationConfig;

    fn delta_site(n: usize, dim: usize) -> (ReedyStructure, SimplicialSite) {
        let cat = Arc::new(FiniteCategory::delta(n));
        let site = SimplicialSite::new(cat.clone(), TruncationConfig::new(dim));
        (ReedyStructure::delta(cat), site)
    }

    #[test]
    fn delta_and_arrow_validate() {
        let (r, _) = delta_site(2, 0);
        let rep = r.validate();
        assert!(rep.passed(), "{:?}", rep.violations);
        assert!(!rep.direct && !rep.inverse);
        let arrow = Arc::new(FiniteCategory::arrow());
        let rep = ReedyStructure::direct(arrow, vec![0, 1]).unwrap().validate();
        assert!(rep.passed() && rep.direct);
    }

    #[test]
    fn double_factorization_is_named() {
        // on Δ≤1 put every arrow in both classes
        let cat = Arc::new(FiniteCategory::delta(1));
        let m = cat.num_morphisms();
        let r = ReedyStructure::new(cat.clone(), vec![0, 1], vec![true; m], vec![true; m]).unwrap();
        let rep = r.validate();
        assert!(rep.violations.iter().any(|v| v.contains("factorizations")));
    }

    #[test]
    fn latching_and_matching_counts() {
        let (r, s) = delta_site(2, 0);
        let y1 = s.constant(&Presheaf::yoneda(r.category().clone(), 1).unwrap()).unwrap();
        let l = r.latching(&s, &y1, 1).unwrap();
        // degenerate 1-simplices of Δ¹: the two constant maps
        assert_eq!(l.object.sizes(), &[2]);
        assert!(l.map.is_mono());
        let x = s.constant(&crate::random::presheaf(&mut crate::random::rng(1), r.category(), 3, 1)).unwrap();
        let m1 = r.matching(&s, &x, 1).unwrap();
        let x0 = s.at_object(&x, 0).size(0);
        assert_eq!(m1.object.size(0), x0 * x0);
        // triangles with matching vertices, brute force
        let m2 = r.matching(&s, &x, 2).unwrap();
        let cat = r.category();
        let vert = |v: usize| cat.hom(0, 1).iter().copied().find(|&f| cat.morphism(f).name == format!("<{v}>")).unwrap();
        let n1 = x.size(1);
        let mut count = 0;
        for a in 0..n1 {
            for b in 0..n1 {
                for c in 0..n1 {
                    let (src, tgt) = (|e| x.act(vert(0), e), |e| x.act(vert(1), e));
                    // edges 01, 02, 12
                    if src(a) == src(b) && tgt(a) == src(c) && tgt(b) == tgt(c) {
                        count += 1;
                    }
                }
            }
        }
        assert_eq!(m2.object.size(0), count);
    }

    #[test]
    fn generator_count_on_delta_one() {
        let (r, s) = delta_site(1, 1);
        let g = r.generating_acyclic_cofibrations(&s, 1, 1).unwrap();
        assert_eq!(g.len(), 4);
        for gen in &g {
            assert!(gen.map.is_mono());
            assert_eq!(gen.map.dst(), &s.representable(gen.c, gen.n).unwrap());
        }
    }

    #[test]
    fn elegance_on_delta_and_a_non_split_epi() {
        let (r, s) = delta_site(2, 0);
        let rep = r.elegance_evidence(&s, 5, 3).unwrap();
        assert!(rep.passed(), "{rep:?}");
        // 0 -> 1 <- 2 with 0 -> 1 declared inverse: no section exists
        let cat = Arc::new(FiniteCategory::from_graph(&["a", "b"], &[(0, 1, "e")]).unwrap());
        let m = cat.num_morphisms();
        let r = ReedyStructure::new(cat.clone(), vec![1, 0], (0..m).map(|f| cat.is_identity(f)).collect(), vec![true; m]).unwrap();
        assert!(r.validate().passed());
        let s = SimplicialSite::new(cat, TruncationConfig::new(0));
        let rep = r.elegance_evidence(&s, 1, 0).unwrap();
        assert_eq!(rep.non_split.as_deref(), Some("e"));
    }
}
