//! Reedy structures on `Δ≤2` and direct fixtures: matching and latching
//! objects against brute-force oracles, monic latching maps of Reedy
//! cofibrations, elegance evidence, and cofibrations versus monos.

use std::collections::{BTreeSet, HashSet};
use std::sync::Arc;

use rand::Rng;

use elegant_core::category::{FiniteCategory, MorId, ObjId};
use elegant_core::presheaf::{NatMap, Presheaf};
use elegant_core::reedy::ReedyStructure;
use elegant_core::simplicial::{SimplicialSite, TruncationConfig};
use elegant_core::{random, Result};

use super::instance_rng;
use crate::report::{ensure, Caps, SuiteReport};

pub const DEFAULT_INSTANCES: usize = 100;
const MATCHING_SAMPLES: usize = 20;
const ELEGANCE_SAMPLES: usize = 20;

/// `Δ≤2`, and the direct categories `0 -> 1`, `0 -> 1 -> 2` and `a -> t <- b`.
pub fn fixtures() -> Vec<(&'static str, ReedyStructure)> {
    let delta = Arc::new(FiniteCategory::delta(2));
    let span = Arc::new(FiniteCategory::poset(&["a", "b", "t"], |x, y| x == y || y == 2));
    vec![
        ("delta2", ReedyStructure::delta(delta)),
        ("arrow", ReedyStructure::direct(Arc::new(FiniteCategory::arrow()), vec![0, 1]).expect("degrees cover objects")),
        ("chain3", ReedyStructure::direct(Arc::new(FiniteCategory::chain(3)), vec![0, 1, 2]).expect("degrees cover objects")),
        ("span", ReedyStructure::direct(span, vec![0, 0, 1]).expect("degrees cover objects")),
    ]
}

/// `a -> b` declared inverse although it has no section.
pub fn non_split_epi() -> ReedyStructure {
    let cat = Arc::new(FiniteCategory::from_graph(&["a", "b"], &[(0, 1, "e")]).expect("one edge"));
    let m = cat.num_morphisms();
    let plus = (0..m).map(|f| cat.is_identity(f)).collect();
    ReedyStructure::new(cat, vec![1, 0], plus, vec![true; m]).expect("sizes match")
}

fn site_for(r: &ReedyStructure, caps: &Caps) -> SimplicialSite {
    SimplicialSite::new(r.category().clone(), TruncationConfig::new(caps.trunc_dim.unwrap_or(1)))
}

/// `X(α)` at simplicial level `k`.
fn act(s: &SimplicialSite, x: &Presheaf, a: MorId, k: usize, e: usize) -> usize {
    x.act(s.mor(a, s.delta().identity(k)), e)
}

/// Compatible families `(x_α ∈ X_d)` over the non-identity `C⁺` arrows into `c`,
/// by enumerating the full product. Families are keyed by arrow id.
fn matching_oracle(r: &ReedyStructure, s: &SimplicialSite, x: &Presheaf, c: ObjId, k: usize) -> BTreeSet<Vec<(MorId, usize)>> {
    let cat = r.category();
    let arrows: Vec<(ObjId, MorId)> = (0..cat.num_objects())
        .flat_map(|d| cat.hom(d, c).iter().map(move |&a| (d, a)))
        .filter(|&(_, a)| r.is_plus(a) && !cat.is_identity(a))
        .collect();
    let sizes: Vec<usize> = arrows.iter().map(|&(d, _)| x.size(s.obj(d, k))).collect();
    let mut out = BTreeSet::new();
    let mut fam = vec![0; arrows.len()];
    if sizes.contains(&0) {
        return out;
    }
    loop {
        let ok = arrows.iter().enumerate().all(|(j, &(d, a))| {
            arrows.iter().enumerate().all(|(j2, &(d2, a2))| {
                cat.hom(d, d2).iter().all(|&b| !(r.is_plus(b) && cat.compose(a2, b) == a) || fam[j] == act(s, x, b, k, fam[j2]))
            })
        });
        if ok {
            let mut keyed: Vec<(MorId, usize)> = arrows.iter().map(|&(_, a)| a).zip(fam.iter().copied()).collect();
            keyed.sort_unstable();
            out.insert(keyed);
        }
        let mut j = 0;
        while j < fam.len() {
            fam[j] += 1;
            if fam[j] < sizes[j] {
                break;
            }
            fam[j] = 0;
            j += 1;
        }
        if j == fam.len() {
            return out;
        }
    }
}

/// Elements of `X_c` in the image of some non-identity `C⁻` arrow out of `c`.
fn degenerate(r: &ReedyStructure, s: &SimplicialSite, x: &Presheaf, c: ObjId, k: usize) -> BTreeSet<usize> {
    let cat = r.category();
    let mut out = BTreeSet::new();
    for d in 0..cat.num_objects() {
        for &a in cat.hom(c, d) {
            if r.is_minus(a) && !cat.is_identity(a) {
                out.extend((0..x.size(s.obj(d, k))).map(|e| act(s, x, a, k, e)));
            }
        }
    }
    out
}

fn check_boundary_objects(r: &ReedyStructure, s: &SimplicialSite, x: &Presheaf) -> Result<Option<String>> {
    let cat = r.category();
    for c in 0..cat.num_objects() {
        let m = r.matching(s, x, c)?;
        let l = r.latching(s, x, c)?;
        for k in 0..=s.dim() {
            let oracle = matching_oracle(r, s, x, c, k);
            let families: BTreeSet<Vec<(MorId, usize)>> = (0..m.object.size(k))
                .map(|z| {
                    let mut keyed: Vec<(MorId, usize)> = m.index.iter().zip(&m.limit.legs).map(|(&(_, a), leg)| (a, leg.apply(k, z))).collect();
                    keyed.sort_unstable();
                    keyed
                })
                .collect();
            if families.len() != m.object.size(k) || families != oracle {
                return Ok(Some(format!("M_{} at level {k}: {} elements, oracle {}", cat.object_name(c), m.object.size(k), oracle.len())));
            }
            let via_map: BTreeSet<Vec<usize>> = (0..x.size(s.obj(c, k)))
                .map(|e| m.index.iter().map(|&(_, a)| act(s, x, a, k, e)).collect())
                .collect();
            let image: BTreeSet<Vec<usize>> = (0..x.size(s.obj(c, k)))
                .map(|e| m.limit.legs.iter().map(|leg| leg.apply(k, m.map.apply(k, e))).collect())
                .collect();
            if via_map != image {
                return Ok(Some(format!("matching map at {} is not the family of restrictions", cat.object_name(c))));
            }
            let deg = degenerate(r, s, x, c, k);
            let limage: BTreeSet<usize> = (0..l.object.size(k)).map(|z| l.map.apply(k, z)).collect();
            if limage != deg || l.object.size(k) != deg.len() {
                return Ok(Some(format!("L_{} at level {k}: {} elements, {} degenerate", cat.object_name(c), l.object.size(k), deg.len())));
            }
        }
    }
    Ok(None)
}

/// `M_{[1]}X -> X₀ × X₀` by the two vertex legs is a bijection.
fn matching_at_one(r: &ReedyStructure, s: &SimplicialSite, x: &Presheaf) -> Result<Option<String>> {
    let m = r.matching(s, x, 1)?;
    let legs: Vec<&NatMap> = m.index.iter().zip(&m.limit.legs).filter(|((d, _), _)| *d == 0).map(|(_, l)| l).collect();
    if legs.len() != 2 {
        return Ok(Some(format!("{} vertex legs", legs.len())));
    }
    for k in 0..=s.dim() {
        let x0 = x.size(s.obj(0, k));
        let pairs: HashSet<(usize, usize)> = (0..m.object.size(k)).map(|z| (legs[0].apply(k, z), legs[1].apply(k, z))).collect();
        if m.object.size(k) != x0 * x0 || pairs.len() != x0 * x0 {
            return Ok(Some(format!("level {k}: |M| = {}, |X₀|² = {}", m.object.size(k), x0 * x0)));
        }
    }
    Ok(None)
}

pub fn run(seed: u64, caps: &Caps) -> SuiteReport {
    let mut report = SuiteReport::new("reedy", seed, caps);
    let n = caps.instances.unwrap_or(DEFAULT_INSTANCES);
    let fx = fixtures();
    for (name, r) in &fx {
        report.record(&format!("validate/{name}"), || {
            let rep = r.validate();
            Ok(ensure(rep.passed(), || rep.violations.join("; ")))
        });
    }
    let (_, delta) = &fx[0];
    let ds = site_for(delta, caps);
    for id in 0..MATCHING_SAMPLES {
        let mut rng = instance_rng(seed, id);
        let x = random::presheaf(&mut rng, ds.site(), 3, 2);
        report.record("matching-1", || matching_at_one(delta, &ds, &x));
    }
    for (f, (name, r)) in fx.iter().enumerate() {
        let s = site_for(r, caps);
        for id in 0..MATCHING_SAMPLES {
            let mut rng = instance_rng(seed ^ 0x0b0e, f * MATCHING_SAMPLES + id);
            let x = random::presheaf(&mut rng, s.site(), 3, 2);
            report.record(&format!("oracle/{name}"), || check_boundary_objects(r, &s, &x));
        }
    }
    let cat = delta.category().clone();
    for id in 0..n {
        let mut rng = instance_rng(seed ^ 0x1a7c, id);
        let f = random::mono(&mut rng, ds.site(), 3);
        report.record("latching-mono", || {
            if !delta.is_reedy_cofibration(&ds, &f)? {
                return Ok(Some("generated mono is not a Reedy cofibration".into()));
            }
            for c in 0..cat.num_objects() {
                let (la, lb) = (delta.latching(&ds, f.src(), c)?, delta.latching(&ds, f.dst(), c)?);
                if !delta.latching_map(&ds, &f, &la, &lb)?.is_mono() {
                    return Ok(Some(format!("L_{} f is not monic", cat.object_name(c))));
                }
            }
            Ok(None)
        });
    }
    let mut seen = [false; 2];
    for id in 0..n {
        let mut rng = instance_rng(seed ^ 0xc0f1, id);
        let f = if rng.gen_bool(0.5) {
            Some(random::mono(&mut rng, ds.site(), 3))
        } else {
            let x = random::presheaf(&mut rng, ds.site(), 3, 1);
            let y = random::presheaf(&mut rng, ds.site(), 2, 2);
            random::map(&mut rng, &x, &y, 32).ok().flatten()
        };
        let Some(f) = f else { continue };
        report.record("cofibration-mono", || {
            let (cof, mono) = (delta.is_reedy_cofibration(&ds, &f)?, f.is_mono());
            seen[usize::from(mono)] = true;
            Ok((cof != mono).then(|| format!("Reedy cofibration {cof} but mono {mono}")))
        });
    }
    report.record("cofibration-mono/coverage", || Ok(ensure(seen[0] && seen[1], || "corpus lacks monos or non-monos".into())));
    for (name, r) in &fx {
        let s = site_for(r, caps);
        report.record(&format!("elegance/{name}"), || {
            let rep = r.elegance_evidence(&s, ELEGANCE_SAMPLES, seed)?;
            Ok(ensure(rep.passed(), || format!("{rep:?}")))
        });
    }
    report.record("elegance/non-split-epi", || {
        let r = non_split_epi();
        let s = site_for(&r, caps);
        let rep = r.elegance_evidence(&s, ELEGANCE_SAMPLES, seed)?;
        Ok(ensure(rep.non_split.is_some(), || "evidence missed the non-split epi".into()))
    });
    report
}
