//! Property suites behind `props run` and the acceptance target.

use std::collections::HashSet;
use std::hash::Hash;

use rand_chacha::ChaCha8Rng;

use elegant_core::random;

use crate::report::{Caps, SuiteReport};

pub mod exactness;
pub mod generators;
pub mod lemmas;
pub mod reedy;
pub mod reedy_extend;
pub mod soa;
pub mod theorem;
pub mod topos;
pub mod universe;

pub const SUITES: &[&str] = &["topos-laws", "exactness", "acyclic-sections", "stability", "equivalence-extension", "eqlift", "universe-classify", "soa-invariants", "reedy", "reedy-extend", "generators"];

/// Runs a named suite; `None` for an unknown name.
pub fn run_suite(name: &str, seed: u64, caps: &Caps) -> Option<SuiteReport> {
    let mut report = match name {
        "topos-laws" => topos::run(seed, caps),
        "exactness" => exactness::run(seed, caps),
        "acyclic-sections" => lemmas::run_sections(seed, caps),
        "stability" => lemmas::run_stability(seed, caps),
        "equivalence-extension" => theorem::run_extension(seed, caps),
        "eqlift" => theorem::run_eqlift(seed, caps),
        "universe-classify" => universe::run(seed, caps),
        "soa-invariants" => soa::run(seed, caps),
        "reedy" => reedy::run(seed, caps),
        "reedy-extend" => reedy_extend::run(seed, caps),
        "generators" => generators::run(seed, caps),
        _ => return None,
    };
    report.sort();
    Some(report)
}

/// Independent stream per instance.
pub fn instance_rng(seed: u64, id: usize) -> ChaCha8Rng {
    random::rng(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (id as u64).wrapping_mul(0xD1B5_4A32_D192_ED03))
}

pub fn distinct<T: Hash + Eq>(items: &[T]) -> bool {
    let mut seen = HashSet::with_capacity(items.len());
    items.iter().all(|x| seen.insert(x))
}
