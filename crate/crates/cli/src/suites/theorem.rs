//! Extending weak equivalences along monos, and extending lifts into `Eq`.

use rand::seq::SliceRandom;
use rand::Rng;

use elegant_core::equiv::{eq_object, eqlift, is_weq, name_of, precondition_range};
use elegant_core::lcc::{pullback_along, Slice};
use elegant_core::limits::pullback;
use elegant_core::presheaf::{NatMap, Presheaf};
use elegant_core::search::{find_iso_over, MapSearch};
use elegant_core::simplicial::{SimplicialSite, TruncationConfig};
use elegant_core::universe::{equivalence_extension, smallness_check, UniverseConfig};
use elegant_core::{fixtures, random, Result};

use super::instance_rng;
use crate::report::{ensure, Caps, SuiteReport};

pub const DEFAULT_INSTANCES: usize = 30;
/// `E2` has four edges, so non-invertible equivalences need κ = 5 at N = 1.
pub const DEFAULT_KAPPA: usize = 5;

pub fn site(caps: &Caps) -> SimplicialSite {
    let cfg = TruncationConfig::new(caps.trunc_dim.unwrap_or(1)).with_margin(caps.reliable_margin.unwrap_or(0));
    let s = SimplicialSite::sets(cfg);
    match caps.max_nodes {
        Some(n) => s.with_max_nodes(n),
        None => s,
    }
}

/// A weak equivalence between small Kan fibers, by construction.
#[derive(Clone, Debug)]
pub struct FiberWeq {
    pub name: String,
    pub map: NatMap,
}

/// Automorphisms of discrete sets and of `BZ/2`, and every map among the
/// contractible fibers `Δ⁰` and `E2` (the codiscrete set on two points).
pub fn fiber_weqs(s: &SimplicialSite) -> Result<Vec<FiberWeq>> {
    let mut out = Vec::new();
    let mut push_all = |name: &str, src: &Presheaf, dst: &Presheaf, isos_only: bool| -> Result<()> {
        for (k, m) in MapSearch::new(src, dst)?.all()?.into_iter().enumerate() {
            if !isos_only || m.is_iso() {
                out.push(FiberWeq { name: format!("{name}#{k}"), map: m });
            }
        }
        Ok(())
    };
    let (pt, e2) = (fixtures::points(s, 1), fixtures::codiscrete(s, 2));
    push_all("pt", &pt, &pt, true)?;
    push_all("2pt", &fixtures::points(s, 2), &fixtures::points(s, 2), true)?;
    push_all("3pt", &fixtures::points(s, 3), &fixtures::points(s, 3), true)?;
    push_all("BZ2", &fixtures::cyclic_nerve(s, 2), &fixtures::cyclic_nerve(s, 2), true)?;
    push_all("collapse", &e2, &pt, false)?;
    push_all("vertex", &pt, &e2, false)?;
    push_all("E2", &e2, &e2, false)?;
    Ok(out)
}

pub fn bases(s: &SimplicialSite) -> Result<Vec<(&'static str, Presheaf)>> {
    Ok(vec![
        ("point", s.simplex(0)?),
        ("simplex1", s.simplex(1)?),
        ("boundary1", s.boundary(0, 1)?.0),
        ("horn1", s.horn(0, 1, 0)?.0),
    ])
}

/// `i*(B × u): i*(B × F₁) -> i*(B × F₂)` over `A`, landing in the canonical pullback.
pub fn restricted_product_map(s: &SimplicialSite, i: &NatMap, u: &NatMap) -> Result<(Slice, Slice, NatMap)> {
    let b = i.dst();
    let d2 = fixtures::product_fibration(s, b, u.dst())?;
    let big = fixtures::product_fibration(s, b, u.src())?;
    let (e1, e1_to) = pullback_along(i, &big)?;
    let bu = fixtures::product_map(s, b, u)?;
    let pb = pullback(i, d2.proj())?;
    let w = pb.factor_from(e1.total(), &[e1.proj().clone(), bu.after(&e1_to)?])?;
    Ok((d2, e1, w))
}

pub fn run_extension(seed: u64, caps: &Caps) -> SuiteReport {
    let mut report = SuiteReport::new("equivalence-extension", seed, caps);
    let s = site(caps);
    let config = UniverseConfig::new(caps.kappa.unwrap_or(DEFAULT_KAPPA), &s);
    let weqs = fiber_weqs(&s).expect("fiber maps");
    let bases = bases(&s).expect("standard bases");
    let (lo, hi) = precondition_range(&s);
    for id in 0..caps.instances.unwrap_or(DEFAULT_INSTANCES) {
        let mut rng = instance_rng(seed, id);
        let (bname, b) = bases.choose(&mut rng).expect("nonempty").clone();
        let seeds = rng.gen_range(0..=2);
        let (_, i) = random::subobject(&mut rng, &b, seeds);
        let u = weqs.choose(&mut rng).expect("nonempty").clone();
        let shape = format!("{bname}/A{:?}/{}", i.src().sizes(), u.name);
        report.record(&shape, || {
            let (d2, e1, w) = restricted_product_map(&s, &i, &u.map)?;
            let out = equivalence_extension(&s, &i, &d2, &e1, &w, &config)?;
            if out.restricted_v(&i, &d2)? != w {
                return Ok(Some("i*v ∘ iso differs from w".into()));
            }
            if !smallness_check(out.d1.proj(), config.kappa) {
                return Ok(Some("D₁ is not κ-small".into()));
            }
            if !is_weq(&s, &out.v, &out.d1, &d2)? {
                return Ok(Some("v is not a weak equivalence".into()));
            }
            if !s.is_fibration(out.d1.proj(), lo, hi)? {
                return Ok(Some("D₁ is not a fibration".into()));
            }
            // degenerate cases against direct computation
            if i.is_iso() && find_iso_over(out.d1.proj(), &i.after(e1.proj())?, s.max_nodes())?.is_none() {
                return Ok(Some("along an iso, D₁ is not E₁".into()));
            }
            if i.src().is_empty() && !out.v.is_iso() {
                return Ok(Some("from the empty base, v is not an iso".into()));
            }
            Ok(None)
        });
    }
    report
}

pub fn run_eqlift(seed: u64, caps: &Caps) -> SuiteReport {
    let mut report = SuiteReport::new("eqlift", seed, caps);
    let s = site(caps);
    // Eq over Δ¹ with BZ/2 fibers exceeds desk-scale memory at N = 1
    let weqs: Vec<FiberWeq> = fiber_weqs(&s).expect("fiber maps").into_iter().filter(|w| !w.name.starts_with("BZ2")).collect();
    for id in 0..caps.instances.unwrap_or(DEFAULT_INSTANCES) {
        let mut rng = instance_rng(seed, id);
        let from_horn = id % 2 == 1;
        let (b, i) = if from_horn {
            let (_, i) = s.horn(0, 1, rng.gen_range(0..2)).expect("horn");
            (i.dst().clone(), i)
        } else {
            let b = match rng.gen_range(0..3) {
                0 => s.simplex(0),
                1 => s.simplex(1),
                _ => s.boundary(0, 1).map(|x| x.0),
            }
            .expect("small base");
            (b.clone(), NatMap::from_initial(&b))
        };
        let u = weqs.choose(&mut rng).expect("nonempty").clone();
        let kind = format!("{}/B{:?}/{}", if from_horn { "horn" } else { "empty" }, b.sizes(), u.name);
        report.record(&kind, || {
            let d1 = fixtures::product_fibration(&s, &b, u.map.src())?;
            let d2 = fixtures::product_fibration(&s, &b, u.map.dst())?;
            let v = fixtures::product_map(&s, &b, &u.map)?;
            let eq = eq_object(&s, &d1, &d2)?;
            let k = name_of(&eq.exp, &v)?;
            let candidates = MapSearch::new(i.src(), eq.slice.total())?.over(&eq.to_fun, &k.after(&i)?).all()?;
            let Some(partial) = candidates.choose(&mut rng) else {
                return Ok(Some("no partial lift classifies i*v".into()));
            };
            let lift = eqlift(&s, &i, &v, &eq, partial)?;
            if lift.after(&i)? != *partial {
                return Ok(Some("lift does not extend the partial lift".into()));
            }
            if eq.slice.proj().after(&lift)? != NatMap::identity(&b) {
                return Ok(Some("lift is not a section over B".into()));
            }
            let id = NatMap::identity(&b);
            let (g1, g2) = (pullback_along(&id, &d1)?, pullback_along(&id, &d2)?);
            let t = eq.transpose_of(&lift, &g1, &g2)?;
            Ok(ensure(g2.1.after(&t)? == v.after(&g1.1)?, || "transpose of the lift differs from v".into()))
        });
    }
    report
}
