mod common;

use proptest::prelude::*;

use elegant_core::fixtures;
use elegant_core::simplicial::{SimplicialSite, TruncationConfig};

use common::binomial;

fn sets(n: usize) -> SimplicialSite {
    SimplicialSite::sets(TruncationConfig::new(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn simplices_count_monotone_maps(n in 0usize..4, dim in 0usize..4) {
        prop_assume!(n <= dim);
        let s = sets(dim);
        let d = s.simplex(n).unwrap();
        for k in 0..=dim {
            prop_assert_eq!(d.size(k), binomial(n + k + 1, k + 1));
        }
    }

    #[test]
    fn boundaries_drop_the_top_cell(n in 1usize..4, dim in 1usize..4) {
        prop_assume!(n <= dim);
        let s = sets(dim);
        let (bd, i) = s.boundary(0, n).unwrap();
        prop_assert!(i.is_mono());
        for k in 0..=dim {
            // maps [k] -> [n] that miss some vertex
            let surjective = if k >= n { binomial(k, n) } else { 0 };
            prop_assert_eq!(bd.size(k), binomial(n + k + 1, k + 1) - surjective);
        }
    }

    #[test]
    fn products_with_kan_fibers_are_fibrations(fiber in 0usize..3, base in 0usize..3) {
        let s = sets(2);
        let b = s.simplex(base).unwrap();
        let f = match fiber {
            0 => fixtures::points(&s, 2),
            1 => fixtures::codiscrete(&s, 2),
            _ => fixtures::cyclic_nerve(&s, 2),
        };
        let e = fixtures::product_fibration(&s, &b, &f).unwrap();
        prop_assert!(s.is_fibration(e.proj(), 1, 2).unwrap());
        prop_assert_eq!(s.is_acyclic_fibration(e.proj(), 0, 2).unwrap(), fiber == 1);
    }
}

#[test]
fn horn_inclusions_are_not_fibrations() {
    let s = sets(2);
    for k in 0..3 {
        let (_, h) = s.horn(0, 2, k).unwrap();
        assert!(!s.is_fibration(&h, 1, 2).unwrap());
    }
}

#[test]
fn nondegenerate_simplices_of_the_two_simplex() {
    let s = sets(2);
    let d = s.simplex(2).unwrap();
    let nd: Vec<usize> = (0..3).map(|k| s.nondegenerate(&d, 0, k).len()).collect();
    assert_eq!(nd, vec![3, 3, 1]);
}
