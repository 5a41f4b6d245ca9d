//! Seeded generators for presheaves, maps, monos and fibrations.

use std::ops::ControlFlow;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::category::FiniteCategory;
use crate::error::Result;
use crate::fixtures;
use crate::lcc::Slice;
use crate::limits::{coequalizer, coproduct};
use crate::presheaf::{NatMap, Presheaf};
use crate::search::MapSearch;
use crate::simplicial::SimplicialSite;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A quotient of a coproduct of up to `gens` representables by up to
/// `relations` random identifications.
pub fn presheaf(rng: &mut impl Rng, base: &Arc<FiniteCategory>, gens: usize, relations: usize) -> Presheaf {
    let n = base.num_objects();
    let count = rng.gen_range(0..=gens);
    let parts: Vec<Presheaf> = (0..count)
        .map(|_| Presheaf::yoneda(base.clone(), rng.gen_range(0..n)).expect("object in range"))
        .collect();
    let mut x = coproduct(base.clone(), &parts).expect("same base").apex;
    for _ in 0..rng.gen_range(0..=relations) {
        let c = rng.gen_range(0..n);
        if x.size(c) < 2 {
            continue;
        }
        let (a, b) = (rng.gen_range(0..x.size(c)), rng.gen_range(0..x.size(c)));
        let f = x.element_map(c, a).expect("element in range");
        let g = x.element_map(c, b).expect("element in range");
        x = coequalizer(&f, &g).expect("parallel pair").apex;
    }
    x
}

/// A random sub-presheaf generated by a few elements, with its inclusion.
pub fn subobject(rng: &mut impl Rng, x: &Presheaf, seeds: usize) -> (Presheaf, NatMap) {
    let n = x.sizes().len();
    let picks: Vec<(usize, usize)> = (0..seeds)
        .filter_map(|_| {
            let c = rng.gen_range(0..n);
            (x.size(c) > 0).then(|| (c, rng.gen_range(0..x.size(c))))
        })
        .collect();
    x.generated(&picks)
}

/// A uniformly chosen natural map `x -> y` among the first `cap` found
/// (or fewer, if the search budget runs out after at least one).
pub fn map(rng: &mut impl Rng, x: &Presheaf, y: &Presheaf, cap: usize) -> Result<Option<NatMap>> {
    let mut found = Vec::new();
    let run = MapSearch::new(x, y)?.run(|comps| {
        found.push(comps.to_vec());
        if found.len() >= cap {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    match run {
        Err(e) if e.is_bounds() && !found.is_empty() => {}
        r => {
            r?;
        }
    }
    Ok(found.choose(rng).map(|c| NatMap::new(x.clone(), y.clone(), c.clone()).expect("search yields natural maps")))
}

/// A mono: a random presheaf with a random sub-presheaf.
pub fn mono(rng: &mut impl Rng, base: &Arc<FiniteCategory>, gens: usize) -> NatMap {
    let x = presheaf(rng, base, gens, gens);
    let seeds = rng.gen_range(0..=gens);
    subobject(rng, &x, seeds).1
}

/// Kan simplicial sets used as fibers.
pub fn fiber(rng: &mut impl Rng, site: &SimplicialSite) -> Presheaf {
    match rng.gen_range(0..4) {
        0 => fixtures::points(site, 1),
        1 => fixtures::points(site, 2),
        2 => fixtures::codiscrete(site, 2),
        _ => fixtures::cyclic_nerve(site, 2),
    }
}

/// `⊔ᵢ B × Fᵢ -> B` with random Kan fibers `Fᵢ`.
pub fn fibration(rng: &mut impl Rng, site: &SimplicialSite, b: &Presheaf, parts: usize) -> Result<Slice> {
    let slices = (0..parts.max(1))
        .map(|_| {
            let f = fiber(rng, site);
            fixtures::product_fibration(site, b, &f)
        })
        .collect::<Result<Vec<_>>>()?;
    fixtures::sum_over(site, &slices)
}

/// A weak equivalence over `b` between product fibrations: `B × u` for a
/// homotopy equivalence `u` between Kan fibers.
pub fn weq(rng: &mut impl Rng, site: &SimplicialSite, b: &Presheaf) -> Result<(NatMap, Slice, Slice)> {
    let (src, dst) = match rng.gen_range(0..3) {
        0 => (fixtures::codiscrete(site, 2), fixtures::points(site, 1)),
        1 => (fixtures::codiscrete(site, 3), fixtures::codiscrete(site, 2)),
        _ => (fixtures::points(site, 2), fixtures::points(site, 2)),
    };
    let maps = MapSearch::new(&src, &dst)?.all()?;
    let u = if src == dst {
        // an automorphism of a discrete set
        maps.into_iter().filter(NatMap::is_iso).collect::<Vec<_>>().choose(rng).cloned().expect("identity exists")
    } else {
        maps.choose(rng).cloned().expect("codiscrete targets receive maps")
    };
    let map = fixtures::product_map(site, b, &u)?;
    let e1 = fixtures::product_fibration(site, b, &src)?;
    let e2 = fixtures::product_fibration(site, b, &dst)?;
    Ok((map, e1, e2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::TruncationConfig;

    #[test]
    fn seeded_generation_is_reproducible() {
        let base = Arc::new(FiniteCategory::delta(2));
        let a = presheaf(&mut rng(7), &base, 3, 3);
        let b = presheaf(&mut rng(7), &base, 3, 3);
        assert_eq!(a, b);
        assert!(a.is_functorial());
        let m = mono(&mut rng(8), &base, 3);
        assert!(m.is_mono() && m.is_natural());
    }

    #[test]
    fn generated_fibrations_and_weqs() {
        let s = SimplicialSite::sets(TruncationConfig::new(2));
        let b = s.boundary(0, 1).unwrap().0;
        let mut r = rng(3);
        let e = fibration(&mut r, &s, &b, 2).unwrap();
        assert!(s.is_fibration(e.proj(), 1, 2).unwrap());
        let (w, e1, e2) = weq(&mut r, &s, &b).unwrap();
        assert!(w.is_natural());
        assert_eq!(w.src(), e1.total());
        assert_eq!(w.dst(), e2.total());
    }
}
