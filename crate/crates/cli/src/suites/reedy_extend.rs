//! Extending Reedy fibrations along levelwise horn attachments over direct
//! fixtures and `Δ≤1`, with the independent certificate run on the result
//! and on corrupted copies of it.

use std::sync::Arc;

use elegant_core::category::FiniteCategory;
use elegant_core::lcc::Slice;
use elegant_core::limits::coproduct;
use elegant_core::presheaf::{NatMap, Presheaf};
use elegant_core::reedy::ReedyStructure;
use elegant_core::reedy_extend::{extend_reedy_fibration, verify_extension};
use elegant_core::simplicial::{SimplicialSite, TruncationConfig};
use elegant_core::universe::{Universe, UniverseConfig};
use elegant_core::{fixtures, Error, Result};

use crate::report::{Caps, SuiteReport};

pub const DEFAULT_KAPPA: usize = 4;

#[derive(Clone, Copy, Debug)]
enum Along {
    /// the Reedy generating acyclic cofibration at `(c, n = 1, k)`
    Generator { c: usize, k: usize },
    /// `Λ¹ₖ ⊗ y(c) ↪ Δ¹ ⊗ y(c)`
    Horn { c: usize, k: usize },
}

/// Discrete fibers only: at `N = 1` the horn-filling certificate for a fiber
/// with a non-degenerate loop would need 2-dimensional horns.
#[derive(Clone, Copy, Debug)]
enum Fiber {
    Points(usize),
}

struct Instance {
    base: &'static str,
    along: Along,
    fiber: Fiber,
}

const INSTANCES: [Instance; 10] = [
    Instance { base: "arrow", along: Along::Generator { c: 0, k: 0 }, fiber: Fiber::Points(2) },
    Instance { base: "arrow", along: Along::Generator { c: 1, k: 1 }, fiber: Fiber::Points(1) },
    Instance { base: "arrow", along: Along::Horn { c: 1, k: 0 }, fiber: Fiber::Points(3) },
    Instance { base: "chain3", along: Along::Generator { c: 2, k: 0 }, fiber: Fiber::Points(2) },
    Instance { base: "chain3", along: Along::Horn { c: 2, k: 1 }, fiber: Fiber::Points(3) },
    Instance { base: "span", along: Along::Generator { c: 2, k: 1 }, fiber: Fiber::Points(3) },
    Instance { base: "span", along: Along::Horn { c: 2, k: 0 }, fiber: Fiber::Points(2) },
    Instance { base: "delta1", along: Along::Generator { c: 1, k: 0 }, fiber: Fiber::Points(2) },
    Instance { base: "delta1", along: Along::Generator { c: 0, k: 1 }, fiber: Fiber::Points(3) },
    Instance { base: "delta1", along: Along::Horn { c: 1, k: 1 }, fiber: Fiber::Points(2) },
];

fn structure(name: &str) -> ReedyStructure {
    match name {
        "arrow" => ReedyStructure::direct(Arc::new(FiniteCategory::arrow()), vec![0, 1]),
        "chain3" => ReedyStructure::direct(Arc::new(FiniteCategory::chain(3)), vec![0, 1, 2]),
        "span" => ReedyStructure::direct(Arc::new(FiniteCategory::poset(&["a", "b", "t"], |x, y| x == y || y == 2)), vec![0, 0, 1]),
        _ => Ok(ReedyStructure::delta(Arc::new(FiniteCategory::delta(1)))),
    }
    .expect("degrees cover objects")
}

fn along(r: &ReedyStructure, s: &SimplicialSite, a: Along) -> Result<NatMap> {
    match a {
        Along::Generator { c, k } => r
            .generating_acyclic_cofibrations(s, 1, 1)?
            .into_iter()
            .find(|g| g.c == c && g.k == k)
            .map(|g| g.map)
            .ok_or_else(|| Error::Invalid(format!("no generator at ({c}, 1, {k})"))),
        Along::Horn { c, k } => {
            let (_, horn) = s.sset_site().horn(0, 1, k)?;
            let y = s.constant(&Presheaf::yoneda(r.category().clone(), c)?)?;
            s.tensor_map(&horn, &NatMap::identity(&y))
        }
    }
}

fn fiber(s: &SimplicialSite, f: Fiber) -> Presheaf {
    let Fiber::Points(n) = f;
    fixtures::points(s, n)
}

/// `top` with one value moved to another element of `Q`.
fn shifted(top: &NatMap) -> Option<NatMap> {
    let o = (0..top.src().sizes().len()).find(|&o| top.src().size(o) > 0 && top.dst().size(o) > 1)?;
    let mut comps = top.components().to_vec();
    comps[o][0] = (comps[o][0] + 1) % top.dst().size(o);
    Some(NatMap::raw(top.src().clone(), top.dst().clone(), comps))
}

/// `Q ⊔ B -> B`, with `top` into the first summand.
fn padded(q: &Slice, top: &NatMap) -> Result<(Slice, NatMap)> {
    let b = q.base().clone();
    let sum = coproduct(b.base_arc().clone(), &[q.total().clone(), b.clone()])?;
    let proj = sum.factor(&b, &[q.proj().clone(), NatMap::identity(&b)])?;
    Ok((Slice::new(proj), sum.injections[0].after(top)?))
}

pub fn run(seed: u64, caps: &Caps) -> SuiteReport {
    let mut report = SuiteReport::new("reedy-extend", seed, caps);
    let n = caps.trunc_dim.unwrap_or(1);
    let kappa = caps.kappa.unwrap_or(DEFAULT_KAPPA);
    let sets = SimplicialSite::sets(TruncationConfig::new(n));
    let mut config = UniverseConfig::new(kappa, &sets);
    if let Some(m) = caps.max_nodes {
        config.max_nodes = m;
    }
    let univ = match Universe::build(&sets, config) {
        Ok(u) => u,
        Err(e) => {
            report.record("build", || Err(e));
            return report;
        }
    };
    let range = univ.config().fib_range;
    for (id, inst) in INSTANCES.iter().enumerate().take(caps.instances.unwrap_or(INSTANCES.len())) {
        let r = structure(inst.base);
        let s = SimplicialSite::new(r.category().clone(), TruncationConfig::new(n));
        let name = format!("{id}/{}/{:?}/{:?}", inst.base, inst.along, inst.fiber);
        let mut built = None;
        report.record(&format!("extend/{name}"), || {
            let i = along(&r, &s, inst.along)?;
            let p = fixtures::product_fibration(&s, i.src(), &fiber(&s, inst.fiber))?;
            let ext = extend_reedy_fibration(&r, true, &s, &i, &p, &univ)?;
            if let Some(step) = ext.steps.iter().find(|st| !st.holds()) {
                return Ok(Some(format!("step at object {}: {step:?}", step.c)));
            }
            let cert = verify_extension(&r, &s, &i, &p, &ext.q, &ext.top, kappa, range)?;
            let ok = cert.passed();
            built = Some((i, p, ext));
            Ok((!ok).then(|| format!("{cert:?}")))
        });
        let Some((i, p, ext)) = built else { continue };
        report.record(&format!("mutation/shift/{name}"), || {
            let Some(bad) = shifted(&ext.top) else {
                return Ok(Some("nothing to shift".into()));
            };
            let cert = verify_extension(&r, &s, &i, &p, &ext.q, &bad, kappa, range)?;
            Ok(cert.passed().then(|| "certificate accepts a shifted top map".into()))
        });
        report.record(&format!("mutation/pad/{name}"), || {
            let (q2, top2) = padded(&ext.q, &ext.top)?;
            let cert = verify_extension(&r, &s, &i, &p, &q2, &top2, kappa, range)?;
            Ok(cert.passed().then(|| "certificate accepts an extra summand".into()))
        });
    }
    report
}
