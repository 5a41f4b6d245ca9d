//! Acyclic fibrations versus sections of `iscontr`, weak equivalences versus
//! sections of `isequiv`, and stability of both constructions under pullback.

use rand::seq::SliceRandom;
use rand::Rng;

use elegant_core::equiv::{
    conclusion_range, eq_stability, has_section, is_weq, iscontr, iscontr_stability, isequiv,
};
use elegant_core::lcc::Slice;
use elegant_core::presheaf::{NatMap, Presheaf};
use elegant_core::search::MapSearch;
use elegant_core::simplicial::{SimplicialSite, TruncationConfig};
use elegant_core::{fixtures, Result};

use super::instance_rng;
use crate::report::{Caps, SuiteReport};

pub const DEFAULT_INSTANCES: usize = 50;

pub fn site(caps: &Caps) -> SimplicialSite {
    let cfg = TruncationConfig::new(caps.trunc_dim.unwrap_or(2)).with_margin(caps.reliable_margin.unwrap_or(0));
    let s = SimplicialSite::sets(cfg);
    match caps.max_nodes {
        Some(n) => s.with_max_nodes(n),
        None => s,
    }
}

/// Small bases: `Δ⁰`, `∂Δ¹`, `Λ¹₀` and `Δ¹`.
pub fn bases(s: &SimplicialSite) -> Result<Vec<(&'static str, Presheaf)>> {
    Ok(vec![
        ("point", s.simplex(0)?),
        ("boundary1", s.boundary(0, 1)?.0),
        ("horn1", s.horn(0, 1, 0)?.0),
        ("simplex1", s.simplex(1)?),
    ])
}

pub type Fiber = (&'static str, Presheaf, bool);

/// Kan fibers with their contractibility.
pub fn fibers(s: &SimplicialSite) -> Vec<Fiber> {
    vec![
        ("pt", fixtures::points(s, 1), true),
        ("2pt", fixtures::points(s, 2), false),
        ("E2", fixtures::codiscrete(s, 2), true),
        ("BZ2", fixtures::cyclic_nerve(s, 2), false),
        ("empty", fixtures::points(s, 0), false),
    ]
}

/// `⊔ B × Fᵢ -> B` with its name and whether its fibers are contractible.
fn random_fibration(rng: &mut impl Rng, s: &SimplicialSite, b: &Presheaf, fs: &[Fiber], max_parts: usize) -> Result<(String, Slice, bool)> {
    let parts = rng.gen_range(1..=max_parts);
    let mut names = Vec::new();
    let mut slices = Vec::new();
    let mut inhabited = Vec::new();
    for _ in 0..parts {
        let (name, f, c) = fs.choose(rng).expect("nonempty");
        names.push(*name);
        if !f.is_empty() {
            inhabited.push(*c);
        }
        slices.push(fixtures::product_fibration(s, b, f)?);
    }
    // a sum is contractible iff exactly one summand is inhabited and that one is
    let expect = inhabited == [true];
    Ok((names.join("+"), fixtures::sum_over(s, &slices)?, expect))
}

pub fn run_sections(seed: u64, caps: &Caps) -> SuiteReport {
    let mut report = SuiteReport::new("acyclic-sections", seed, caps);
    let s = site(caps);
    let (lo, hi) = conclusion_range(&s);
    let bases = bases(&s).expect("standard bases");
    let pairs = fiber_maps(&s).expect("maps between fibers");
    for id in 0..caps.instances.unwrap_or(DEFAULT_INSTANCES) {
        let mut rng = instance_rng(seed, id);
        let (bname, b) = bases.choose(&mut rng).expect("nonempty").clone();
        let (fname, e, expect) = random_fibration(&mut rng, &s, &b, &fibers(&s), 2).expect("product fibrations");
        report.record(&format!("contractible/{bname}/{fname}"), || {
            let acyclic = s.is_acyclic_fibration(e.proj(), lo, hi)?;
            if acyclic != expect {
                return Ok(Some(format!("acyclic fibration {acyclic} but the fibers say {expect}")));
            }
            let c = iscontr(&s, &e)?;
            let sect = has_section(&s, &c.slice)?;
            if acyclic != sect {
                return Ok(Some(format!("acyclic fibration {acyclic} but section {sect}")));
            }
            if sect && !s.is_acyclic_fibration(c.slice.proj(), lo, hi)? {
                return Ok(Some("iscontr has a section but its projection is not an acyclic fibration".into()));
            }
            Ok(None)
        });
    }
    for id in 0..caps.instances.unwrap_or(DEFAULT_INSTANCES) {
        let mut rng = instance_rng(seed ^ 0x5eed, id);
        let (bname, b) = bases.choose(&mut rng).expect("nonempty").clone();
        let (n1, f1, n2, f2, maps) = pairs.choose(&mut rng).expect("nonempty").clone();
        let u = maps.choose(&mut rng).expect("pairs with maps only");
        report.record(&format!("equivalence/{bname}/{n1}->{n2}"), || {
            let f = fixtures::product_map(&s, &b, u)?;
            let e1 = fixtures::product_fibration(&s, &b, &f1)?;
            let e2 = fixtures::product_fibration(&s, &b, &f2)?;
            let weq = is_weq(&s, &f, &e1, &e2)?;
            let ie = isequiv(&s, &f, &e1, &e2)?;
            let sect = has_section(&s, &ie.slice.slice)?;
            if weq != sect {
                return Ok(Some(format!("weak equivalence {weq} but section {sect}")));
            }
            if sect && !s.is_acyclic_fibration(ie.slice.slice.proj(), lo, hi)? {
                return Ok(Some("isequiv has a section but its projection is not an acyclic fibration".into()));
            }
            Ok(None)
        });
    }
    report
}

type FiberMaps = (&'static str, Presheaf, &'static str, Presheaf, Vec<NatMap>);

/// Ordered pairs of fibers with at least one map between them.
fn fiber_maps(s: &SimplicialSite) -> Result<Vec<FiberMaps>> {
    let fs = fibers(s);
    let mut out = Vec::new();
    for (n1, f1, _) in &fs {
        for (n2, f2, _) in &fs {
            let maps = MapSearch::new(f1, f2)?.max_nodes(s.max_nodes()).all()?;
            if !maps.is_empty() {
                out.push((*n1, f1.clone(), *n2, f2.clone(), maps));
            }
        }
    }
    Ok(out)
}

/// Maps between the small bases used for pulling back.
fn base_maps(s: &SimplicialSite) -> Result<Vec<(String, NatMap)>> {
    let bs = bases(s)?;
    let mut out = Vec::new();
    for (an, a) in &bs {
        for (bn, b) in &bs {
            for (k, g) in MapSearch::new(a, b)?.all()?.into_iter().enumerate() {
                out.push((format!("{an}->{bn}#{k}"), g));
            }
        }
    }
    Ok(out)
}

pub fn run_stability(seed: u64, caps: &Caps) -> SuiteReport {
    let mut report = SuiteReport::new("stability", seed, caps);
    let s = site(caps);
    let maps = base_maps(&s).expect("maps between small bases");
    let fs = fibers(&s);
    // Eq over Δ¹ is past desk scale at N = 2, and at N = 1 for sums and BZ/2
    let eq_site = site(&Caps { trunc_dim: Some(caps.trunc_dim.unwrap_or(2).min(1)), ..caps.clone() });
    let eq_maps = base_maps(&eq_site).expect("maps between small bases");
    let eq_fs: Vec<Fiber> = fibers(&eq_site).into_iter().filter(|f| f.0 != "BZ2").collect();
    for id in 0..caps.instances.unwrap_or(DEFAULT_INSTANCES) {
        let mut rng = instance_rng(seed, id);
        let (gname, g) = maps.choose(&mut rng).expect("nonempty").clone();
        let (n0, e0, _) = random_fibration(&mut rng, &s, g.dst(), &fs, 2).expect("product fibrations");
        let (hname, h) = eq_maps.choose(&mut rng).expect("nonempty").clone();
        let (n1, e1, _) = random_fibration(&mut rng, &eq_site, h.dst(), &eq_fs, 1).expect("product fibrations");
        let (n2, e2, _) = random_fibration(&mut rng, &eq_site, h.dst(), &eq_fs, 1).expect("product fibrations");
        report.record(&format!("iscontr/{gname}/{n0}"), || {
            Ok(iscontr_stability(&s, &g, &e0)?.is_none().then(|| "no iso g*iscontr(E) ≅ iscontr(g*E)".to_string()))
        });
        report.record(&format!("eq/{hname}/{n1},{n2}"), || {
            Ok(eq_stability(&eq_site, &h, &e1, &e2)?.is_none().then(|| "no iso g*Eq(E₁,E₂) ≅ Eq(g*E₁,g*E₂)".to_string()))
        });
    }
    report
}
