//! A bounded small-object-argument run: stage invariants after every step
//! and at the colimit, cell lifts for the attached triples, and closure of
//! the lifting property under pushouts, composites and retracts.

use std::sync::Arc;

use elegant_core::fixtures;
use elegant_core::limits::{pullback, pushout};
use elegant_core::presheaf::{NatMap, Presheaf};
use elegant_core::search::{find_iso_over, MapSearch};
use elegant_core::simplicial::SimplicialSite;
use elegant_core::soa::{boundary_cells, problem_data, saturation_check, SaturationCase, SoaState, StageInvariants};
use elegant_core::universe::Universe;
use elegant_core::Result;

use super::universe::universe;
use crate::report::{ensure, Caps, SuiteReport};

pub const DEFAULT_STAGES: usize = 2;

fn describe(inv: &StageInvariants) -> String {
    format!("small fibration {}, mono {}, pullback {}", inv.small_fibration, inv.mono, inv.pullback)
}

pub fn run(seed: u64, caps: &Caps) -> SuiteReport {
    let mut report = SuiteReport::new("soa-invariants", seed, caps);
    let univ = match universe(caps) {
        Ok(u) => u,
        Err(e) => {
            report.record("build", || Err(e));
            return report;
        }
    };
    let s = univ.site().clone();
    let mut state = match boundary_cells(&s) {
        Ok(g) => SoaState::init(univ.clone(), g),
        Err(e) => {
            report.record("generators", || Err(e));
            return report;
        }
    };
    report.record("init", || Ok(ensure(state.current().u.is_empty() && state.current().ut.is_empty(), || "stage 0 is not empty".into())));
    for alpha in 1..=caps.max_stages.unwrap_or(DEFAULT_STAGES) {
        let mut next = None;
        report.record(&format!("step/{alpha}"), || {
            let st = state.step()?;
            let inv = st.invariants[alpha - 1].clone();
            next = Some(st);
            Ok(ensure(inv.holds(), || describe(&inv)))
        });
        let Some(st) = next else { break };
        state = st;
        report.record(&format!("cell-lift/{alpha}"), || cell_lifts(&state, alpha - 1, univ.config().max_nodes));
    }
    report.record("colimit", || {
        let (stage, inv) = state.colimit_stage()?;
        if let Some((k, bad)) = inv.iter().enumerate().find(|(_, i)| !i.holds()) {
            return Ok(Some(format!("stage {k} into the colimit: {}", describe(bad))));
        }
        Ok(ensure(stage.u.sizes() == state.current().u.sizes(), || "colimit of the chain differs from its last stage".into()))
    });
    match saturation_cases(&s, &univ) {
        Ok(cases) => {
            let sat = saturation_check(&univ, univ.as_ref(), &cases);
            for (k, o) in sat.outcomes.iter().enumerate() {
                report.record(&format!("saturation/{}/{k}", o.kind), || Ok(ensure(o.passed(), || o.detail.clone())));
            }
        }
        Err(e) => report.record("saturation", || Err(e)),
    }
    report
}

/// Every triple attached at stage `alpha` has a lift `g` into the next stage
/// with `g ∘ i = f` and `g*Ũ ≅ Q`. Triples with isomorphic codes may share it.
fn cell_lifts(state: &SoaState, alpha: usize, max: u64) -> Result<Option<String>> {
    let next = &state.stages[alpha + 1];
    for (t, tr) in state.ledger[alpha].iter().enumerate() {
        let q = tr.code.as_slice();
        let Some(g) = state.cell_lift(alpha, tr.generator, &tr.f, &q)? else {
            return Ok(Some(format!("triple {t}: no lift")));
        };
        let i = &state.generators()[tr.generator].incl;
        if g.after(i)? != state.u_incl[alpha].after(&tr.f)? {
            return Ok(Some(format!("triple {t}: lift does not extend the attaching map")));
        }
        if find_iso_over(&pullback(&g, &next.p)?.legs[0], q.proj(), max)?.is_none() {
            return Ok(Some(format!("triple {t}: lift does not classify the code")));
        }
    }
    Ok(None)
}

fn pick(src: &Presheaf, dst: &Presheaf, keep: impl Fn(&NatMap) -> bool) -> Result<NatMap> {
    MapSearch::new(src, dst)?
        .all()?
        .into_iter()
        .find(keep)
        .ok_or_else(|| elegant_core::Error::Invalid("no map with the requested shape".into()))
}

/// Pushouts of `∂Δ¹ ↪ Δ¹` along collapses, composites through the boundary
/// and the point as a retract of the boundary inclusion, each with several
/// fibers over the target.
pub fn saturation_cases(s: &SimplicialSite, univ: &Arc<Universe>) -> Result<Vec<SaturationCase>> {
    let pt = s.simplex(0)?;
    let d1 = s.simplex(1)?;
    let (bd, i) = s.boundary(0, 1)?;
    let fibers = [fixtures::points(s, 0), fixtures::points(s, 1), fixtures::points(s, 2)];
    let mut cases = Vec::new();

    let h = NatMap::to_terminal(&bd).with_ends(bd.clone(), pt.clone());
    let po = pushout(&h, &i)?;
    let sq = fixtures::sum_over(s, &[fixtures::product_fibration(s, &po.apex, &fibers[1])?, fixtures::product_fibration(s, &po.apex, &fibers[1])?])?;
    for q in fibers.iter().map(|f| fixtures::product_fibration(s, &po.apex, f)).chain([Ok(sq)]) {
        let q = q?;
        let (f, iso) = problem_data(univ, &po.injections[1], &q)?;
        cases.push(SaturationCase::Pushout { i: i.clone(), h: h.clone(), f, q, iso });
    }

    for v in 0..2 {
        let vert = pick(&pt, &d1, |m| m.apply(0, 0) == v)?;
        let i1 = pick(&pt, &bd, |m| i.after(m).map(|x| x.components() == vert.components()).unwrap_or(false))?;
        for fib in &fibers {
            let q = fixtures::product_fibration(s, &d1, fib)?;
            let (f, iso) = problem_data(univ, &vert, &q)?;
            cases.push(SaturationCase::Composite { i1: i1.clone(), i2: i.clone(), f, q, iso });
        }
        let j = NatMap::identity(&pt);
        let q0 = fixtures::product_fibration(s, &pt, &fibers[2])?;
        let (f, iso) = problem_data(univ, &j, &q0)?;
        cases.push(SaturationCase::Retract {
            i: i.clone(),
            j,
            s_a: i1,
            r_a: NatMap::to_terminal(&bd).with_ends(bd.clone(), pt.clone()),
            s_b: vert,
            r_b: NatMap::to_terminal(&d1).with_ends(d1.clone(), pt.clone()),
            f,
            q: q0,
            iso,
        });
    }
    Ok(cases)
}
