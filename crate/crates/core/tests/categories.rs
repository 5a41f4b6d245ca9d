use proptest::prelude::*;

use elegant_core::category::{monotone_maps, FiniteCategory};

fn divisibility(n: usize) -> FiniteCategory {
    let names: Vec<String> = (1..=n).map(|k| k.to_string()).collect();
    let refs: Vec<&str> = names.iter().map(String::as_str).collect();
    FiniteCategory::poset(&refs, |x, y| (y + 1) % (x + 1) == 0)
}

proptest! {
    #[test]
    fn generated_categories_satisfy_the_laws(n in 1usize..6, m in 0usize..3) {
        for c in [FiniteCategory::chain(n), FiniteCategory::discrete(n), divisibility(n), FiniteCategory::delta(m)] {
            prop_assert!(c.validate().passed());
            prop_assert!(c.opposite().validate().passed());
            // the double opposite has the same arrows and composites up to names
            let oo = c.opposite().opposite();
            let m = c.num_morphisms();
            prop_assert_eq!(oo.num_morphisms(), m);
            prop_assert!((0..m).all(|f| oo.dom(f) == c.dom(f) && oo.cod(f) == c.cod(f)));
            prop_assert!((0..m).all(|g| (0..m).all(|f| oo.try_compose(g, f) == c.try_compose(g, f))));
        }
    }

    #[test]
    fn products_multiply_hom_sets(n in 1usize..4, m in 0usize..2) {
        let (a, b) = (FiniteCategory::chain(n), FiniteCategory::delta(m));
        let p = FiniteCategory::product(&a, &b);
        prop_assert!(p.validate().passed());
        prop_assert_eq!(p.num_objects(), a.num_objects() * b.num_objects());
        prop_assert_eq!(p.num_morphisms(), a.num_morphisms() * b.num_morphisms());
    }

    #[test]
    fn monotone_maps_are_counted_by_binomials(a in 0usize..4, b in 0usize..4) {
        // maps [a] -> [b] are multisets of size a + 1 from b + 1 values
        let expect = (0..=a).fold(1usize, |acc, i| acc * (b + 1 + i) / (i + 1));
        prop_assert_eq!(monotone_maps(a, b).len(), expect);
    }
}

#[test]
fn delta_hom_sets() {
    let d = FiniteCategory::delta(2);
    let sizes: Vec<usize> = (0..3).flat_map(|a| (0..3).map(move |b| (a, b))).map(|(a, b)| d.hom(a, b).len()).collect();
    assert_eq!(sizes, vec![1, 2, 3, 1, 3, 6, 1, 4, 10]);
}
