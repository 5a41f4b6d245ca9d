//! Extensivity and adhesivity as biconditionals on random squares and
//! cubes. Each instance is either canonical (both sides hold) or perturbed
//! (both sides should fail); the two sides are always computed independently.

use std::sync::Arc;

use rand::Rng;

use elegant_core::limits::{coproduct, is_pullback_square, is_pushout_square, pullback, pushout};
use elegant_core::presheaf::{NatMap, Presheaf};
use elegant_core::simplicial::{SimplicialSite, TruncationConfig};
use elegant_core::{random, Result};

use super::instance_rng;
use super::topos::bases;
use crate::report::{Caps, SuiteReport};

pub const DEFAULT_INSTANCES: usize = 100;

/// Which side of a biconditional an instance landed on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Sides {
    pub left: bool,
    pub right: bool,
}

pub fn run(seed: u64, caps: &Caps) -> SuiteReport {
    let mut report = SuiteReport::new("exactness", seed, caps);
    let top = caps.trunc_dim.unwrap_or(1).min(2);
    let n = caps.instances.unwrap_or(DEFAULT_INSTANCES);
    let mut seen = [[false; 2]; 2];
    for id in 0..2 * n {
        let mut rng = instance_rng(seed, id);
        let (name, base) = bases()[(id / 2) % 3].clone();
        let dim = rng.gen_range(0..=top);
        let site = SimplicialSite::new(Arc::new(base), TruncationConfig::new(dim));
        let perturb = rng.gen_range(0..3);
        let law = if id % 2 == 0 { "extensive" } else { "adhesive" };
        report.record(&format!("{law}/{name}/N{dim}/p{perturb}"), || {
            let s = if id % 2 == 0 {
                extensive(&mut rng, &site, perturb)?
            } else {
                adhesive(&mut rng, &site, perturb)?
            };
            seen[id % 2][usize::from(s.left)] = true;
            Ok((s.left != s.right).then(|| format!("pullback side {} but colimit side {}", s.left, s.right)))
        });
    }
    for (k, law) in ["extensive", "adhesive"].iter().enumerate() {
        report.record(&format!("{law}/coverage"), || {
            Ok((!(seen[k][0] && seen[k][1])).then(|| "instances did not exercise both truth values".to_string()))
        });
    }
    report
}

fn pointed(rng: &mut impl Rng, site: &SimplicialSite) -> Presheaf {
    let x = random::presheaf(rng, site.site(), 1, 1);
    coproduct(site.site().clone(), &[x, Presheaf::terminal(site.site().clone())]).expect("same base").apex
}

fn fold(x: &Presheaf, to: &NatMap) -> Result<(Presheaf, NatMap, NatMap)> {
    let two = coproduct(x.base_arc().clone(), &[x.clone(), x.clone()])?;
    let id = NatMap::identity(x);
    let folded = two.factor(x, &[id.clone(), id])?;
    Ok((two.apex, folded.clone(), to.after(&folded)?))
}

/// `X_A -> X <- X_B` over `A -> A ⊔ B <- B`: both squares are pullbacks iff
/// the top row is a coproduct.
pub fn extensive(rng: &mut impl Rng, site: &SimplicialSite, perturb: usize) -> Result<Sides> {
    let a = pointed(rng, site);
    let b = random::presheaf(rng, site.site(), 1, 1);
    let sum = coproduct(site.site().clone(), &[a.clone(), b.clone()])?;
    let (inl, inr) = (&sum.injections[0], &sum.injections[1]);
    let x = random::presheaf(rng, site.site(), 2, 1);
    let f = random::map(rng, &x, &sum.apex, 64)?.expect("A has a point");
    let pa = pullback(inl, &f)?;
    let pb = pullback(inr, &f)?;
    let (mut xa, mut xa_a, mut xa_x) = (pa.apex.clone(), pa.legs[0].clone(), pa.legs[1].clone());
    match perturb {
        1 if !xa.is_empty() => {
            let (two, folded, to_x) = fold(&xa, &xa_x)?;
            xa_a = xa_a.after(&folded)?;
            xa_x = to_x;
            xa = two;
        }
        2 => {
            let seeds = rng.gen_range(0..2);
            let (sub, incl) = random::subobject(rng, &xa, seeds);
            xa_a = xa_a.after(&incl)?;
            xa_x = xa_x.after(&incl)?;
            xa = sub;
        }
        _ => {}
    }
    let left = is_pullback_square(&xa_x, &xa_a, &f, inl)? && is_pullback_square(&pb.legs[1], &pb.legs[0], &f, inr)?;
    let row = coproduct(site.site().clone(), &[xa, pb.apex.clone()])?;
    let right = row.factor(&x, &[xa_x, pb.legs[1].clone()])?.is_iso();
    Ok(Sides { left, right })
}

/// A cube over a pushout along a mono `C ↪ A`, with back faces pullbacks:
/// the front faces are pullbacks iff the top face is a pushout. The
/// perturbed cubes enlarge `D'` by a summand that nothing maps onto.
pub fn adhesive(rng: &mut impl Rng, site: &SimplicialSite, perturb: usize) -> Result<Sides> {
    let a = random::presheaf(rng, site.site(), 2, 1);
    let seeds = rng.gen_range(0..3);
    let (c, m) = random::subobject(rng, &a, seeds);
    let b = pointed(rng, site);
    let g = random::map(rng, &c, &b, 64)?.expect("B has a point");
    let po = pushout(&m, &g)?;
    let (c_d, a_d, b_d) = (&po.injections[0], &po.injections[1], &po.injections[2]);
    let d = &po.apex;
    let dp = random::presheaf(rng, site.site(), 2, 1);
    let h = random::map(rng, &dp, d, 64)?.expect("D has a point");
    let pa = pullback(&h, a_d)?;
    let pb = pullback(&h, b_d)?;
    let pc = pullback(&h, c_d)?;
    let ca = pa.factor_from(&pc.apex, &[pc.legs[0].clone(), m.after(&pc.legs[1])?])?;
    let cb = pb.factor_from(&pc.apex, &[pc.legs[0].clone(), g.after(&pc.legs[1])?])?;
    let (mut h_full, mut ad, mut bd) = (h.clone(), pa.legs[0].clone(), pb.legs[0].clone());
    if perturb > 0 {
        let extra = random::presheaf(rng, site.site(), 1, 0);
        if let Some(e) = random::map(rng, &extra, d, 64)? {
            let bigger = coproduct(site.site().clone(), &[dp.clone(), extra.clone()])?;
            h_full = bigger.factor(d, &[h.clone(), e])?;
            ad = bigger.injections[0].after(&ad)?;
            bd = bigger.injections[0].after(&bd)?;
        }
    }
    let back = is_pullback_square(&ca, &pc.legs[1], &pa.legs[1], &m)? && is_pullback_square(&cb, &pc.legs[1], &pb.legs[1], &g)?;
    if !back {
        return Err(elegant_core::Error::Invalid("back faces of the cube are not pullbacks".into()));
    }
    let left = is_pullback_square(&ad, &pa.legs[1], &h_full, a_d)? && is_pullback_square(&bd, &pb.legs[1], &h_full, b_d)?;
    let right = is_pushout_square(&ca, &cb, &ad, &bd)?;
    Ok(Sides { left, right })
}
