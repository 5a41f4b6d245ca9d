//! Path objects, mapping path fibrations, contractibility and equivalence
//! objects in slices, the weak-equivalence predicate and lifts into `Eq`.

use crate::error::{Error, Result};
use crate::lcc::{local_exp, pair_index, pi, pullback_along, sigma, DependentProduct, LocalExp, Slice};
use crate::limits::{pullback, Limit};
use crate::presheaf::{NatMap, Presheaf};
use crate::search::{find_iso_over, MapSearch};
use crate::simplicial::{LiftingProblem, PathObject, SimplicialSite};

/// Horn range used for fibration preconditions: `1..=max(1, reliable_dim)`.
pub fn precondition_range(site: &SimplicialSite) -> (usize, usize) {
    (1, site.reliable_dim().max(1))
}

/// Boundary range for acyclic-fibration conclusions: `0..=reliable_dim`.
pub fn conclusion_range(site: &SimplicialSite) -> (usize, usize) {
    (0, site.reliable_dim())
}

pub fn require_fibration(site: &SimplicialSite, f: &NatMap, what: &str) -> Result<()> {
    let (lo, hi) = precondition_range(site);
    match site.fibration_failure(f, lo, hi)? {
        None => Ok(()),
        Some(w) => Err(Error::Precondition(format!("{what} is not a fibration: {w}"))),
    }
}

/// `E -> P_B E -> E ×_B E`.
pub fn path_object(site: &SimplicialSite, e: &Slice) -> Result<PathObject> {
    site.cotensor_interval(e)
}

/// `E₁ --r--> P_B f --p--> E₂` with the retraction `q`.
#[derive(Clone, Debug)]
pub struct PathFactorization {
    /// `P_B f = E₁ ×_{E₂} P_B E₂` along `f` and the start point.
    pub square: Limit,
    pub path: PathObject,
    pub r: NatMap,
    pub p: NatMap,
    pub q: NatMap,
    /// `P_B f` over `B` via `E₁`.
    pub over_base: Slice,
}

impl PathFactorization {
    pub fn total(&self) -> &Presheaf {
        &self.square.apex
    }
}

fn check_over(f: &NatMap, e1: &Slice, e2: &Slice) -> Result<()> {
    if f.src() != e1.total() || f.dst() != e2.total() || e1.base() != e2.base() {
        return Err(Error::SliceMismatch);
    }
    if e2.proj().after_unchecked(f).components() != e1.proj().components() {
        return Err(Error::Invalid("map is not over the base".into()));
    }
    Ok(())
}

pub fn mapping_path(site: &SimplicialSite, f: &NatMap, e1: &Slice, e2: &Slice) -> Result<PathFactorization> {
    check_over(f, e1, e2)?;
    let path = site.cotensor_interval(e2)?;
    let square = pullback(f, &path.ev0)?;
    let q = square.legs[0].clone();
    let p = path.ev1.after_unchecked(&square.legs[1]);
    let r = square.factor(&[NatMap::identity(e1.total()), path.unit.after_unchecked(f)])?;
    let over_base = Slice::new(e1.proj().after_unchecked(&q));
    Ok(PathFactorization { square, path, r, p, q, over_base })
}

/// `iscontr_B(E) = Σ_p Π_{π₂}(P_B E)`, with the intermediate dependent product.
#[derive(Clone, Debug)]
pub struct IsContr {
    pub slice: Slice,
    pub centers: DependentProduct,
    pub path: PathObject,
}

pub fn iscontr(site: &SimplicialSite, e: &Slice) -> Result<IsContr> {
    require_fibration(site, e.proj(), "the projection")?;
    iscontr_unchecked(site, e)
}

pub fn iscontr_unchecked(site: &SimplicialSite, e: &Slice) -> Result<IsContr> {
    let path = site.cotensor_interval(e)?;
    let centers = pi(&path.ends.legs[1], &Slice::new(path.ev.clone()))?;
    let slice = sigma(e.proj(), &centers.slice)?;
    Ok(IsContr { slice, centers, path })
}

/// `isequiv_B(f) = Π_{p₂} iscontr_{E₂}(P_B f)`.
#[derive(Clone, Debug)]
pub struct IsEquiv {
    pub slice: DependentProduct,
    pub factorization: PathFactorization,
    pub fibers: IsContr,
}

pub fn isequiv(site: &SimplicialSite, f: &NatMap, e1: &Slice, e2: &Slice) -> Result<IsEquiv> {
    require_fibration(site, e1.proj(), "the domain projection")?;
    require_fibration(site, e2.proj(), "the codomain projection")?;
    isequiv_unchecked(site, f, e1, e2)
}

pub fn isequiv_unchecked(site: &SimplicialSite, f: &NatMap, e1: &Slice, e2: &Slice) -> Result<IsEquiv> {
    let factorization = mapping_path(site, f, e1, e2)?;
    let fibers = iscontr_unchecked(site, &Slice::new(factorization.p.clone()))?;
    let slice = pi(e2.proj(), &fibers.slice)?;
    Ok(IsEquiv { slice, factorization, fibers })
}

/// A section of the slice, if one exists.
pub fn section(site: &SimplicialSite, s: &Slice) -> Result<Option<NatMap>> {
    let mut search = MapSearch::new(s.base(), s.total())?;
    search
        .over(s.proj(), &NatMap::identity(s.base()))
        .max_nodes(site.max_nodes())
        .context("searching for a section");
    search.first()
}

pub fn has_section(site: &SimplicialSite, s: &Slice) -> Result<bool> {
    Ok(section(site, s)?.is_some())
}

/// `f` is a weak equivalence iff `p: P_B f -> E₂` is an acyclic fibration.
pub fn is_weq(site: &SimplicialSite, f: &NatMap, e1: &Slice, e2: &Slice) -> Result<bool> {
    let m = mapping_path(site, f, e1, e2)?;
    let (lo, hi) = conclusion_range(site);
    site.is_acyclic_fibration(&m.p, lo, hi)
}

/// `Eq_B(E₁, E₂) = Σ_{Fun} isequiv_{Fun}(h)`.
#[derive(Clone, Debug)]
pub struct EqObject {
    pub slice: Slice,
    pub exp: LocalExp,
    pub isequiv: IsEquiv,
    /// `Eq -> Fun`
    pub to_fun: NatMap,
}

pub fn eq_object(site: &SimplicialSite, e1: &Slice, e2: &Slice) -> Result<EqObject> {
    require_fibration(site, e1.proj(), "the first projection")?;
    require_fibration(site, e2.proj(), "the second projection")?;
    let exp = local_exp(e1, e2)?;
    let ie = isequiv_unchecked(site, &exp.h, &exp.fun_e1, &exp.fun_e2)?;
    let to_fun = ie.slice.slice.proj().clone();
    let slice = sigma(exp.fun.slice.proj(), &ie.slice.slice)?;
    Ok(EqObject { slice, exp, isequiv: ie, to_fun })
}

impl EqObject {
    /// The function `g*E₁ -> g*E₂` named by a lift `k: A -> Eq` of `g`.
    pub fn transpose_of(&self, k: &NatMap, ge1: &(Slice, NatMap), ge2: &(Slice, NatMap)) -> Result<NatMap> {
        self.exp.untranspose(&self.to_fun.after(k)?, ge1, ge2)
    }
}

/// The map `B -> Fun_B(D₁, D₂)` naming `v: D₁ -> D₂` over `B`.
pub fn name_of(exp: &LocalExp, v: &NatMap) -> Result<NatMap> {
    let base = exp.e1.base().clone();
    let id = NatMap::identity(&base);
    let ge1 = pullback_along(&id, &exp.e1)?;
    let ge2 = pullback_along(&id, &exp.e2)?;
    let idx2 = pair_index(&ge2.0, &ge2.1);
    let nobj = base.sizes().len();
    let comps = (0..nobj)
        .map(|c| {
            (0..ge1.0.total().size(c))
                .map(|j| idx2[c][&(ge1.0.proj().apply(c, j), v.apply(c, ge1.1.apply(c, j)))])
                .collect()
        })
        .collect();
    let phi = NatMap::raw(ge1.0.total().clone(), ge2.0.total().clone(), comps);
    exp.transpose(&id, &ge1, &ge2, &phi)
}

/// Extends a lift `A -> Eq_B(D₁, D₂)` along `i: A ↪ B` to one classifying `v`.
pub fn eqlift(site: &SimplicialSite, i: &NatMap, v: &NatMap, eq: &EqObject, partial: &NatMap) -> Result<NatMap> {
    let (d1, d2) = (&eq.exp.e1, &eq.exp.e2);
    check_over(v, d1, d2)?;
    if !i.is_mono() {
        return Err(Error::Precondition("the inclusion is not a monomorphism".into()));
    }
    if i.dst() != d1.base() || partial.src() != i.src() || partial.dst() != eq.slice.total() {
        return Err(Error::SliceMismatch);
    }
    if !is_weq(site, v, d1, d2)? {
        return Err(Error::NoLift("the map is not a weak equivalence".into()));
    }
    let k = name_of(&eq.exp, v)?;
    if eq.to_fun.after(partial)?.components() != k.after(i)?.components() {
        return Err(Error::Precondition("partial lift does not classify the restriction".into()));
    }
    // k* isequiv ↠ B
    let pb = pullback(&k, &eq.to_fun)?;
    let right = pb.legs[0].clone();
    let top = pb.factor(&[i.clone(), partial.clone()])?;
    let problem = LiftingProblem::new(i.clone(), right, top, NatMap::identity(i.dst()))?;
    match site.solve_lift(&problem)? {
        Some(l) => Ok(pb.legs[1].after_unchecked(&l)),
        None => Err(Error::NoLift("no extension of the partial lift".into())),
    }
}

/// The comparison iso `g* iscontr_B(E) ≅ iscontr_A(g* E)` over `A`, if one exists.
pub fn iscontr_stability(site: &SimplicialSite, g: &NatMap, e: &Slice) -> Result<Option<NatMap>> {
    let lhs = pullback_along(g, &iscontr_unchecked(site, e)?.slice)?.0;
    let ge = pullback_along(g, e)?.0;
    let rhs = iscontr_unchecked(site, &ge)?.slice;
    find_iso_over(lhs.proj(), rhs.proj(), site.max_nodes())
}

/// The iso `g* Eq_B(E₁, E₂) ≅ Eq_A(g*E₁, g*E₂)` over `A`, if one exists.
pub fn eq_stability(site: &SimplicialSite, g: &NatMap, e1: &Slice, e2: &Slice) -> Result<Option<NatMap>> {
    let lhs = pullback_along(g, &eq_object(site, e1, e2)?.slice)?.0;
    let a1 = pullback_along(g, e1)?.0;
    let a2 = pullback_along(g, e2)?.0;
    let rhs = eq_object(site, &a1, &a2)?.slice;
    find_iso_over(lhs.proj(), rhs.proj(), site.max_nodes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::limits::coproduct;
    use crate::simplicial::TruncationConfig;

    fn points(s: &SimplicialSite, n: usize) -> Presheaf {
        let d0 = s.simplex(0).unwrap();
        coproduct(s.sset().clone(), &vec![d0; n]).unwrap().apex
    }

    #[test]
    fn contractibility_of_points() {
        let s = SimplicialSite::sets(TruncationConfig::new(1));
        let pt = points(&s, 1);
        let c = iscontr(&s, &Slice::new(NatMap::identity(&pt))).unwrap();
        assert!(has_section(&s, &c.slice).unwrap());
        let two = points(&s, 2);
        let c2 = iscontr(&s, &Slice::new(NatMap::to_terminal(&two))).unwrap();
        assert!(!has_section(&s, &c2.slice).unwrap());
    }

    #[test]
    fn interval_is_contractible() {
        let s = SimplicialSite::sets(TruncationConfig::new(2));
        let d1 = s.simplex(1).unwrap();
        let c = iscontr_unchecked(&s, &Slice::new(NatMap::to_terminal(&d1))).unwrap();
        assert!(has_section(&s, &c.slice).unwrap());
    }

    #[test]
    fn mapping_path_identities() {
        let s = SimplicialSite::sets(TruncationConfig::new(1));
        let two = points(&s, 2);
        let pt = Presheaf::terminal(s.sset().clone());
        let e1 = Slice::new(NatMap::to_terminal(&pt));
        let e2 = Slice::new(NatMap::to_terminal(&two));
        let f = NatMap::new(pt.clone(), two.clone(), vec![vec![0]; 2]).unwrap();
        let m = mapping_path(&s, &f, &e1, &e2).unwrap();
        assert_eq!(m.total().sizes(), &[1, 1]);
        assert_eq!(m.q.after(&m.r).unwrap(), NatMap::identity(&pt));
        assert_eq!(m.p.after(&m.r).unwrap(), f);
        assert!(!is_weq(&s, &f, &e1, &e2).unwrap());
        let ie = isequiv(&s, &f, &e1, &e2).unwrap();
        assert!(!has_section(&s, &ie.slice.slice).unwrap());
        let idf = NatMap::identity(&two);
        assert!(is_weq(&s, &idf, &e2, &e2).unwrap());
        let ie = isequiv(&s, &idf, &e2, &e2).unwrap();
        assert!(has_section(&s, &ie.slice.slice).unwrap());
    }

    #[test]
    fn eq_of_two_points_has_two_sections() {
        let s = SimplicialSite::sets(TruncationConfig::new(1));
        let two = points(&s, 2);
        let e = Slice::new(NatMap::to_terminal(&two));
        let eq = eq_object(&s, &e, &e).unwrap();
        let secs = MapSearch::new(e.base(), eq.slice.total())
            .unwrap()
            .over(eq.slice.proj(), &NatMap::identity(e.base()))
            .count()
            .unwrap();
        assert_eq!(secs, 2);
    }

    #[test]
    fn eqlift_of_swap_from_empty() {
        let s = SimplicialSite::sets(TruncationConfig::new(1));
        let two = points(&s, 2);
        let e = Slice::new(NatMap::to_terminal(&two));
        let eq = eq_object(&s, &e, &e).unwrap();
        let swap = NatMap::new(two.clone(), two.clone(), vec![vec![1, 0]; 2]).unwrap();
        let empty = Presheaf::initial(s.sset().clone());
        let i = NatMap::from_initial(e.base());
        let partial = NatMap::from_initial(eq.slice.total());
        assert_eq!(*partial.src(), empty);
        let lift = eqlift(&s, &i, &swap, &eq, &partial).unwrap();
        let id = NatMap::identity(e.base());
        let ge = pullback_along(&id, &e).unwrap();
        let t = eq.transpose_of(&lift, &ge, &ge).unwrap();
        let back = ge.1.after(&t).unwrap();
        assert_eq!(back, swap.after(&ge.1).unwrap());
    }
}
