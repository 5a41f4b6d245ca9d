mod common;

use proptest::prelude::*;

use elegant_core::limits::{coproduct, equalizer, product, pullback};
use elegant_core::presheaf::{NatMap, Presheaf};
use elegant_core::random;
use elegant_core::search::MapSearch;

use common::{bases, brute_force_hom, presheaf};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn products_and_coproducts_count_elements(seed in any::<u64>(), b in 0usize..4) {
        let base = &bases()[b];
        let (x, y) = (presheaf(seed, base), presheaf(seed ^ 1, base));
        let p = product(base.clone(), &[x.clone(), y.clone()]).unwrap();
        let s = coproduct(base.clone(), &[x.clone(), y.clone()]).unwrap();
        for c in 0..base.num_objects() {
            prop_assert_eq!(p.apex.size(c), x.size(c) * y.size(c));
            prop_assert_eq!(s.apex.size(c), x.size(c) + y.size(c));
        }
        prop_assert!(s.injections.iter().all(NatMap::is_mono));
    }

    #[test]
    fn search_agrees_with_brute_force(seed in any::<u64>(), b in 0usize..3) {
        let base = &bases()[b];
        let (x, y) = (presheaf(seed, base), presheaf(seed ^ 2, base));
        prop_assume!(x.total_size() <= 6 && y.total_size() <= 6);
        let mut found: Vec<Vec<Vec<usize>>> = MapSearch::new(&x, &y).unwrap().all().unwrap().iter().map(|m| m.components().to_vec()).collect();
        let mut oracle = brute_force_hom(&x, &y);
        found.sort();
        oracle.sort();
        prop_assert_eq!(found, oracle);
    }

    #[test]
    fn guided_search_finds_the_same_maps(seed in any::<u64>(), b in 0usize..4) {
        let base = &bases()[b];
        let (x, y) = (presheaf(seed, base), presheaf(seed ^ 3, base));
        let mut plain: Vec<NatMap> = MapSearch::new(&x, &y).unwrap().all().unwrap();
        let mut guided: Vec<NatMap> = MapSearch::new(&x, &y).unwrap().guided(true).all().unwrap();
        plain.sort_by(|a, b| a.components().cmp(b.components()));
        guided.sort_by(|a, b| a.components().cmp(b.components()));
        prop_assert_eq!(plain, guided);
    }

    #[test]
    fn yoneda_counts(seed in any::<u64>(), b in 0usize..4) {
        let base = &bases()[b];
        let x = presheaf(seed, base);
        for c in 0..base.num_objects() {
            let y = Presheaf::yoneda(base.clone(), c).unwrap();
            prop_assert_eq!(MapSearch::new(&y, &x).unwrap().count().unwrap(), x.size(c));
        }
    }

    #[test]
    fn pullback_legs_commute_and_factor(seed in any::<u64>(), b in 0usize..4) {
        let base = &bases()[b];
        let mut rng = random::rng(seed);
        let z = presheaf(seed, base);
        let (x, y) = (presheaf(seed ^ 4, base), presheaf(seed ^ 5, base));
        let (Some(f), Some(g)) = (random::map(&mut rng, &x, &z, 64).unwrap(), random::map(&mut rng, &y, &z, 64).unwrap()) else {
            return Ok(());
        };
        let pb = pullback(&f, &g).unwrap();
        prop_assert_eq!(f.after(&pb.legs[0]).unwrap(), g.after(&pb.legs[1]).unwrap());
        // elements are exactly the pairs that agree in Z
        for c in 0..base.num_objects() {
            let pairs = (0..x.size(c)).flat_map(|a| (0..y.size(c)).map(move |b| (a, b))).filter(|&(a, b)| f.apply(c, a) == g.apply(c, b)).count();
            prop_assert_eq!(pb.apex.size(c), pairs);
        }
    }

    #[test]
    fn equalizers_are_monic(seed in any::<u64>(), b in 0usize..4) {
        let base = &bases()[b];
        let mut rng = random::rng(seed);
        let (x, y) = (presheaf(seed, base), presheaf(seed ^ 6, base));
        let (Some(f), Some(g)) = (random::map(&mut rng, &x, &y, 64).unwrap(), random::map(&mut rng, &x, &y, 64).unwrap()) else {
            return Ok(());
        };
        let (e, m) = equalizer(&f, &g).unwrap();
        prop_assert!(m.is_mono());
        prop_assert_eq!(f.after(&m).unwrap(), g.after(&m).unwrap());
        for c in 0..base.num_objects() {
            prop_assert_eq!(e.size(c), (0..x.size(c)).filter(|&a| f.apply(c, a) == g.apply(c, a)).count());
        }
    }
}
