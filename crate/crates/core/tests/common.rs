#![allow(dead_code)]

use std::sync::Arc;

use elegant_core::category::FiniteCategory;
use elegant_core::presheaf::{NatMap, Presheaf};
use elegant_core::random;

pub fn bases() -> Vec<Arc<FiniteCategory>> {
    vec![
        Arc::new(FiniteCategory::terminal()),
        Arc::new(FiniteCategory::arrow()),
        Arc::new(FiniteCategory::delta(1)),
        Arc::new(FiniteCategory::poset(&["a", "b", "t"], |x, y| x == y || y == 2)),
    ]
}

pub fn presheaf(seed: u64, base: &Arc<FiniteCategory>) -> Presheaf {
    random::presheaf(&mut random::rng(seed), base, 3, 2)
}

/// Every natural map `x -> y`, by running through all levelwise functions.
pub fn brute_force_hom(x: &Presheaf, y: &Presheaf) -> Vec<Vec<Vec<usize>>> {
    let n = x.sizes().len();
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|c| (0..x.size(c)).map(move |e| (c, e))).collect();
    if slots.iter().any(|&(c, _)| y.size(c) == 0) {
        return Vec::new();
    }
    let mut vals = vec![0; slots.len()];
    let mut out = Vec::new();
    loop {
        let mut comps: Vec<Vec<usize>> = (0..n).map(|c| vec![0; x.size(c)]).collect();
        for (&(c, e), &v) in slots.iter().zip(&vals) {
            comps[c][e] = v;
        }
        if NatMap::raw(x.clone(), y.clone(), comps.clone()).is_natural() {
            out.push(comps);
        }
        let mut j = 0;
        while j < vals.len() {
            vals[j] += 1;
            if vals[j] < y.size(slots[j].0) {
                break;
            }
            vals[j] = 0;
            j += 1;
        }
        if j == vals.len() {
            return out;
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
