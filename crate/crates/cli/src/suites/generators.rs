//! The seeded generators: fibrations and monos hold by construction, and
//! equal seeds give equal instances.

use std::sync::Arc;

use rand::seq::SliceRandom;

use elegant_core::category::FiniteCategory;
use elegant_core::random;
use elegant_core::simplicial::{SimplicialSite, TruncationConfig};

use super::instance_rng;
use crate::report::{ensure, Caps, SuiteReport};

pub const DEFAULT_INSTANCES: usize = 100;

pub fn run(seed: u64, caps: &Caps) -> SuiteReport {
    let mut report = SuiteReport::new("generators", seed, caps);
    let n = caps.instances.unwrap_or(DEFAULT_INSTANCES);
    let s = SimplicialSite::sets(TruncationConfig::new(caps.trunc_dim.unwrap_or(1)));
    let bases = super::lemmas::bases(&s).expect("standard bases");
    for id in 0..n {
        let mut rng = instance_rng(seed, id);
        let (bname, b) = bases.choose(&mut rng).expect("nonempty").clone();
        report.record(&format!("fibration/{bname}"), || {
            let e = random::fibration(&mut rng, &s, &b, 2)?;
            Ok(ensure(s.is_fibration(e.proj(), 1, s.dim())?, || "generated fibration fails the horn lifts".into()))
        });
    }
    let bases: Vec<(&str, Arc<FiniteCategory>)> = vec![
        ("delta2", Arc::new(FiniteCategory::delta(2))),
        ("arrow", Arc::new(FiniteCategory::arrow())),
        ("chain3", Arc::new(FiniteCategory::chain(3))),
    ];
    for id in 0..n {
        let mut rng = instance_rng(seed ^ 0x6d0e, id);
        let (cname, c) = bases.choose(&mut rng).expect("nonempty").clone();
        report.record(&format!("mono/{cname}"), || {
            let m = random::mono(&mut rng, &c, 3);
            Ok(ensure(m.is_natural() && m.is_mono(), || "generated mono is not a natural mono".into()))
        });
    }
    report.record("determinism", || {
        let b = s.simplex(1)?;
        let once = random::fibration(&mut instance_rng(seed, 0), &s, &b, 2)?;
        let again = random::fibration(&mut instance_rng(seed, 0), &s, &b, 2)?;
        Ok(ensure(once.proj() == again.proj(), || "equal seeds gave different fibrations".into()))
    });
    report
}
