//! The fixture corpus shipped under `fixtures/`, regenerated from code.

use std::sync::Arc;

use elegant_core::category::FiniteCategory;
use elegant_core::presheaf::{NatMap, Presheaf};
use elegant_core::reedy::ReedyStructure;
use elegant_core::simplicial::{SimplicialSite, TruncationConfig};
use elegant_core::universe::{Universe, UniverseConfig};
use elegant_core::{fixtures, random, Result};

use crate::format::{Document, Located, Site, UniverseSnapshot};
use crate::suites::reedy::{fixtures as reedy_fixtures, non_split_epi};
use crate::suites::theorem::restricted_product_map;

fn sets(n: usize) -> SimplicialSite {
    SimplicialSite::sets(TruncationConfig::new(n))
}

fn psh(s: &SimplicialSite, p: Presheaf) -> Document {
    Document::Presheaf(Located { site: Site::of(s), value: p })
}

fn map(s: &SimplicialSite, f: NatMap) -> Document {
    Document::NatMap(Located { site: Site::of(s), value: f })
}

/// Named documents, one per fixture file.
pub fn corpus() -> Result<Vec<(String, Document)>> {
    let mut out: Vec<(String, Document)> = Vec::new();
    let span = FiniteCategory::poset(&["a", "b", "t"], |x, y| x == y || y == 2);
    for (name, c) in [
        ("terminal", FiniteCategory::terminal()),
        ("arrow", FiniteCategory::arrow()),
        ("chain3", FiniteCategory::chain(3)),
        ("span", span),
        ("delta1", FiniteCategory::delta(1)),
        ("delta2", FiniteCategory::delta(2)),
    ] {
        out.push((format!("category-{name}"), Document::Category(c)));
    }

    let s1 = sets(1);
    let s2 = sets(2);
    out.push(("sset1-simplex1".into(), psh(&s1, s1.simplex(1)?)));
    out.push(("sset1-boundary1".into(), psh(&s1, s1.boundary(0, 1)?.0)));
    out.push(("sset1-horn1-0".into(), psh(&s1, s1.horn(0, 1, 0)?.0)));
    out.push(("sset1-2pt".into(), psh(&s1, fixtures::points(&s1, 2))));
    out.push(("sset2-simplex2".into(), psh(&s2, s2.simplex(2)?)));
    out.push(("sset2-horn2-1".into(), psh(&s2, s2.horn(0, 2, 1)?.0)));
    out.push(("sset2-bz2".into(), psh(&s2, fixtures::cyclic_nerve(&s2, 2))));
    out.push(("sset2-e2".into(), psh(&s2, fixtures::codiscrete(&s2, 2))));
    let arrow = Arc::new(FiniteCategory::arrow());
    out.push((
        "psh-arrow-yoneda1".into(),
        Document::Presheaf(Located { site: Site::new(arrow.clone(), None), value: Presheaf::yoneda(arrow.clone(), 1)? }),
    ));
    let sa = SimplicialSite::new(arrow, TruncationConfig::new(1));
    out.push(("arrow1-y1".into(), psh(&sa, sa.constant(&Presheaf::yoneda(sa.base().clone(), 1)?)?)));

    out.push(("map1-boundary-incl".into(), map(&s1, s1.boundary(0, 1)?.1)));
    out.push(("map1-horn-incl".into(), map(&s1, s1.horn(0, 1, 0)?.1)));
    let d1 = s1.simplex(1)?;
    out.push(("map1-simplex1-x-2pt".into(), map(&s1, fixtures::product_fibration(&s1, &d1, &fixtures::points(&s1, 2))?.proj().clone())));
    out.push(("map1-simplex1-to-pt".into(), map(&s1, NatMap::to_terminal(&d1).with_ends(d1.clone(), s1.simplex(0)?))));
    out.push(("map2-horn2-1-incl".into(), map(&s2, s2.horn(0, 2, 1)?.1)));
    out.push(("map1-empty-incl".into(), map(&s1, NatMap::from_initial(&d1))));
    let two = fixtures::points(&s1, 2);
    let swap = NatMap::new(two.clone(), two.clone(), two.sizes().iter().map(|&n| (0..n).rev().collect()).collect())?;
    out.push(("map1-swap-over-simplex1".into(), map(&s1, fixtures::product_map(&s1, &d1, &swap)?)));
    let (_, e1, w) = restricted_product_map(&s1, &s1.boundary(0, 1)?.1, &swap)?;
    out.push(("map1-restricted-2pt".into(), map(&s1, e1.proj().clone())));
    out.push(("map1-restricted-swap".into(), map(&s1, w)));

    let d2 = Arc::new(FiniteCategory::delta(2));
    let sd = SimplicialSite::new(d2, TruncationConfig::new(1));
    let x = (0..).map(|seed| random::presheaf(&mut random::rng(seed), sd.site(), 3, 2)).find(|x| x.sizes().iter().sum::<usize>() > 6).expect("some seed");
    out.push(("delta2-1-random".into(), psh(&sd, x)));
    let ar = ReedyStructure::direct(sa.base().clone(), vec![0, 1])?;
    let gen = ar.generating_acyclic_cofibrations(&sa, 1, 1)?.into_iter().find(|g| g.c == 0 && g.k == 0).expect("generator at (0, 1, 0)");
    let p = fixtures::product_fibration(&sa, gen.map.src(), &fixtures::points(&sa, 2))?;
    out.push(("arrow1-generator-0-0".into(), map(&sa, gen.map)));
    out.push(("arrow1-fibration-2pt".into(), map(&sa, p.proj().clone())));

    for (name, r) in reedy_fixtures() {
        out.push((format!("reedy-{name}"), Document::Reedy(r)));
    }
    out.push(("reedy-non-split-epi".into(), Document::Reedy(non_split_epi())));

    let u = Universe::build(&s1, UniverseConfig::new(3, &s1))?;
    out.push(("universe-k3-n1".into(), Document::Universe(UniverseSnapshot::of(&u))));
    Ok(out)
}
