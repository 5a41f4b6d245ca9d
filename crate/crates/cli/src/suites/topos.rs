//! Yoneda counts, limit and colimit universal properties, and the
//! Σ ⊣ f* ⊣ Π bijections, on random presheaves over `C × Δ≤N`.

use std::sync::Arc;

use rand::Rng;

use elegant_core::lcc::{pi_counit, pi_with_budget, pullback_along, sigma, Slice};
use elegant_core::limits::{coproduct, limit, limit_via_product_equalizer, pullback, pushout, Diagram};
use elegant_core::presheaf::{NatMap, Presheaf};
use elegant_core::search::MapSearch;
use elegant_core::simplicial::{SimplicialSite, TruncationConfig};
use elegant_core::{random, FiniteCategory, Result};

use super::{distinct, instance_rng};
use crate::report::{ensure, Caps, SuiteReport};

pub const DEFAULT_INSTANCES: usize = 200;

pub fn bases() -> [(&'static str, FiniteCategory); 3] {
    [("terminal", FiniteCategory::terminal()), ("arrow", FiniteCategory::arrow()), ("delta1", FiniteCategory::delta(1))]
}

pub fn run(seed: u64, caps: &Caps) -> SuiteReport {
    let mut report = SuiteReport::new("topos-laws", seed, caps);
    let budget = caps.max_nodes.unwrap_or(20_000_000);
    let top = caps.trunc_dim.unwrap_or(2).min(2);
    for id in 0..caps.instances.unwrap_or(DEFAULT_INSTANCES) {
        let mut rng = instance_rng(seed, id);
        let (name, base) = bases()[id % 3].clone();
        let n = rng.gen_range(0..=top);
        let site = SimplicialSite::new(Arc::new(base), TruncationConfig::new(n));
        let tag = |law: &str| format!("{law}/{name}/N{n}");
        let x = random::presheaf(&mut rng, site.site(), 2, 2);
        report.record(&tag("yoneda"), || yoneda(&x, budget));
        report.record(&tag("limit"), || limit_law(&mut rng, &site, budget));
        report.record(&tag("colimit"), || colimit_law(&mut rng, &site, budget));
        report.record(&tag("sigma-pullback"), || sigma_adjunction(&mut rng, &site, budget));
        report.record(&tag("pullback-pi"), || pi_adjunction(&mut rng, &site, budget));
    }
    report
}

fn homs(x: &Presheaf, y: &Presheaf, budget: u64) -> Result<Vec<NatMap>> {
    MapSearch::new(x, y)?.max_nodes(budget).all()
}

fn homs_over(px: &NatMap, py: &NatMap, budget: u64) -> Result<Vec<NatMap>> {
    MapSearch::new(px.src(), py.src())?.over(py, px).max_nodes(budget).all()
}

/// `X ⊔ 1`, which receives a map from everything.
fn pointed(rng: &mut impl Rng, site: &SimplicialSite, gens: usize) -> Presheaf {
    let x = random::presheaf(rng, site.site(), gens, gens);
    let one = Presheaf::terminal(site.site().clone());
    coproduct(site.site().clone(), &[x, one]).expect("same base").apex
}

fn some_map(rng: &mut impl Rng, x: &Presheaf, y: &Presheaf) -> Result<NatMap> {
    Ok(random::map(rng, x, y, 64)?.expect("target has a point"))
}

/// A random object over `b`: a presheaf with a random map to `b`, or `b` itself.
fn over(rng: &mut impl Rng, site: &SimplicialSite, b: &Presheaf) -> Result<Slice> {
    let t = random::presheaf(rng, site.site(), 1, 1);
    Ok(match random::map(rng, &t, b, 64)? {
        Some(m) => Slice::new(m),
        None => Slice::new(NatMap::identity(b)),
    })
}

/// `Hom(y(o), X) ≅ X(o)` by evaluation at the identity, inverse to `element_map`.
pub fn yoneda(x: &Presheaf, budget: u64) -> Result<Option<String>> {
    let cat = x.base_arc().clone();
    for o in 0..cat.num_objects() {
        let y = Presheaf::yoneda(cat.clone(), o)?;
        let id = Presheaf::yoneda_element(&cat, cat.identity(o));
        let maps = homs(&y, x, budget)?;
        let values: Vec<usize> = maps.iter().map(|m| m.apply(o, id)).collect();
        if maps.len() != x.size(o) || !distinct(&values) {
            return Ok(Some(format!("|Hom(y{o}, X)| = {} but |X({o})| = {}", maps.len(), x.size(o))));
        }
        for e in 0..x.size(o) {
            if x.element_map(o, e)?.apply(o, id) != e {
                return Ok(Some(format!("element map of {e} at {o} does not evaluate back")));
            }
        }
    }
    Ok(None)
}

/// Pullback of a random cospan: cones from a test object biject with maps
/// into the apex, and the product-equalizer route agrees.
pub fn limit_law(rng: &mut impl Rng, site: &SimplicialSite, budget: u64) -> Result<Option<String>> {
    let x = random::presheaf(rng, site.site(), 2, 1);
    let y = random::presheaf(rng, site.site(), 2, 1);
    let z = pointed(rng, site, 1);
    let f = some_map(rng, &x, &z)?;
    let g = some_map(rng, &y, &z)?;
    let d = Diagram::from_edges(site.site().clone(), vec![x.clone(), y.clone(), z], vec![(0, 2, f.clone()), (1, 2, g.clone())])?;
    let lim = limit(&d);
    let (apex, legs) = limit_via_product_equalizer(&d)?;
    let cmp = lim.factor_from(&apex, &legs)?;
    if !cmp.is_iso() {
        return Ok(Some("product-equalizer limit is not isomorphic to the direct one".into()));
    }
    let pb = pullback(&f, &g)?;
    if pb.apex.sizes() != lim.apex.sizes() {
        return Ok(Some("pullback and general limit differ in size".into()));
    }
    let t = random::presheaf(rng, site.site(), 1, 1);
    let to_x = homs(&t, &x, budget)?;
    let to_y = homs(&t, &y, budget)?;
    let mut cones = 0;
    for a in &to_x {
        let fa = f.after(a)?;
        for b in &to_y {
            if fa.components() != g.after(b)?.components() {
                continue;
            }
            cones += 1;
            let h = pb.factor_from(&t, &[a.clone(), b.clone()])?;
            if pb.legs[0].after(&h)? != *a || pb.legs[1].after(&h)? != *b {
                return Ok(Some("factored map does not restore the cone".into()));
            }
        }
    }
    let into = homs(&t, &pb.apex, budget)?;
    let mut images = Vec::with_capacity(into.len());
    for h in &into {
        images.push([pb.legs[0].after(h)?.components(), pb.legs[1].after(h)?.components()].concat());
    }
    Ok(ensure(into.len() == cones && distinct(&images), || {
        format!("|Hom(T, P)| = {} but there are {cones} cones", into.len())
    }))
}

/// Pushout of a random span: maps out of the apex biject with cocones.
pub fn colimit_law(rng: &mut impl Rng, site: &SimplicialSite, budget: u64) -> Result<Option<String>> {
    let w = random::presheaf(rng, site.site(), 1, 1);
    let x = pointed(rng, site, 1);
    let y = pointed(rng, site, 1);
    let f = some_map(rng, &w, &x)?;
    let g = some_map(rng, &w, &y)?;
    let po = pushout(&f, &g)?;
    if po.injections[1].after(&f)? != po.injections[2].after(&g)? {
        return Ok(Some("pushout square does not commute".into()));
    }
    let t = pointed(rng, site, 1);
    let from_x = homs(&x, &t, budget)?;
    let from_y = homs(&y, &t, budget)?;
    let mut cocones = 0;
    for a in &from_x {
        let af = a.after(&f)?;
        for b in &from_y {
            if af.components() != b.after(&g)?.components() {
                continue;
            }
            cocones += 1;
            let h = po.factor(&t, &[af.clone(), a.clone(), b.clone()])?;
            if !h.is_natural() || h.after(&po.injections[1])? != *a || h.after(&po.injections[2])? != *b {
                return Ok(Some("factored map does not restore the cocone".into()));
            }
        }
    }
    let out = homs(&po.apex, &t, budget)?;
    let mut images = Vec::with_capacity(out.len());
    for h in &out {
        images.push([h.after(&po.injections[1])?.components(), h.after(&po.injections[2])?.components()].concat());
    }
    Ok(ensure(out.len() == cocones && distinct(&images), || {
        format!("|Hom(Q, T)| = {} but there are {cocones} cocones", out.len())
    }))
}

/// `Hom_B(Σ_f D, E) ≅ Hom_A(D, f*E)` by factoring through the pullback.
pub fn sigma_adjunction(rng: &mut impl Rng, site: &SimplicialSite, budget: u64) -> Result<Option<String>> {
    let a = random::presheaf(rng, site.site(), 1, 1);
    let b = pointed(rng, site, 1);
    let f = some_map(rng, &a, &b)?;
    let d = over(rng, site, &a)?;
    let e = over(rng, site, &b)?;
    let sd = sigma(&f, &d)?;
    let lhs = homs_over(sd.proj(), e.proj(), budget)?;
    let pb = pullback(&f, e.proj())?;
    let (fe, _) = pullback_along(&f, &e)?;
    let rhs = homs_over(d.proj(), fe.proj(), budget)?;
    let mut images = Vec::with_capacity(lhs.len());
    for g in &lhs {
        let t = pb.factor_from(d.total(), &[d.proj().clone(), g.clone()])?;
        if pb.legs[1].after(&t)? != *g {
            return Ok(Some("transpose does not recover the map".into()));
        }
        images.push(t.components().to_vec());
    }
    Ok(ensure(lhs.len() == rhs.len() && distinct(&images), || {
        format!("|Hom(Σ D, E)| = {} but |Hom(D, f*E)| = {}", lhs.len(), rhs.len())
    }))
}

/// `Hom_A(f*E, D) ≅ Hom_B(E, Π_f D)` via the counit.
pub fn pi_adjunction(rng: &mut impl Rng, site: &SimplicialSite, budget: u64) -> Result<Option<String>> {
    let a = random::presheaf(rng, site.site(), 1, 1);
    let b = pointed(rng, site, 1);
    let f = some_map(rng, &a, &b)?;
    let d = over(rng, site, &a)?;
    let e = over(rng, site, &b)?;
    let dp = pi_with_budget(&f, &d, budget)?;
    let (fe, fe_to_e) = pullback_along(&f, &e)?;
    let lhs = homs_over(fe.proj(), d.proj(), budget)?;
    let rhs = homs_over(e.proj(), dp.slice.proj(), budget)?;
    let pb = pullback(&f, dp.slice.proj())?;
    let (_, counit) = pi_counit(&dp)?;
    let mut images = Vec::with_capacity(rhs.len());
    for k in &rhs {
        let fk = pb.factor_from(fe.total(), &[fe.proj().clone(), k.after(&fe_to_e)?])?;
        let t = counit.after(&fk)?;
        if d.proj().after(&t)? != *fe.proj() {
            return Ok(Some("transpose is not over the base".into()));
        }
        images.push(t.components().to_vec());
    }
    Ok(ensure(lhs.len() == rhs.len() && distinct(&images), || {
        format!("|Hom(f*E, D)| = {} but |Hom(E, Π D)| = {}", lhs.len(), rhs.len())
    }))
}
