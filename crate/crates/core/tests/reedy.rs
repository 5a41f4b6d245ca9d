use std::sync::Arc;

use proptest::prelude::*;

use elegant_core::category::FiniteCategory;
use elegant_core::random;
use elegant_core::reedy::ReedyStructure;
use elegant_core::simplicial::{SimplicialSite, TruncationConfig};

fn delta() -> (ReedyStructure, SimplicialSite) {
    let c = Arc::new(FiniteCategory::delta(2));
    (ReedyStructure::delta(c.clone()), SimplicialSite::new(c, TruncationConfig::new(1)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn monos_are_reedy_cofibrations(seed in any::<u64>()) {
        let (r, s) = delta();
        let f = random::mono(&mut random::rng(seed), s.site(), 3);
        prop_assert!(r.is_reedy_cofibration(&s, &f).unwrap());
    }

    #[test]
    fn latching_at_degree_zero_is_empty(seed in any::<u64>()) {
        let (r, s) = delta();
        let x = random::presheaf(&mut random::rng(seed), s.site(), 3, 2);
        let l = r.latching(&s, &x, 0).unwrap();
        prop_assert!(l.object.is_empty());
        let m = r.matching(&s, &x, 0).unwrap();
        prop_assert!(m.object.sizes().iter().all(|&n| n == 1));
    }
}

#[test]
fn degree_structures_validate() {
    let (r, _) = delta();
    assert!(r.validate().passed());
    let chain = Arc::new(FiniteCategory::chain(3));
    assert!(ReedyStructure::direct(chain.clone(), vec![0, 1, 2]).unwrap().validate().passed());
    // degrees must rise along non-identity direct arrows
    assert!(!ReedyStructure::direct(chain, vec![2, 1, 0]).unwrap().validate().passed());
}
