//! Strict classification: every small fibration in an enumerated family is
//! classified, and classifiers extend strictly along every mono into the base.

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;

use elegant_core::lcc::{pullback_along, Slice};
use elegant_core::limits::is_pullback_square;
use elegant_core::presheaf::{NatMap, Presheaf};
use elegant_core::search::fibers;
use elegant_core::simplicial::{SimplicialSite, TruncationConfig};
use elegant_core::universe::{Classification, Universe, UniverseConfig, WellOrderedFibration};
use elegant_core::{fixtures, Result};

use super::instance_rng;
use crate::report::{ensure, Caps, SuiteReport};

pub const DEFAULT_KAPPA: usize = 3;

pub fn universe(caps: &Caps) -> Result<Arc<Universe>> {
    let s = SimplicialSite::sets(TruncationConfig::new(caps.trunc_dim.unwrap_or(1)));
    let mut config = UniverseConfig::new(caps.kappa.unwrap_or(DEFAULT_KAPPA), &s);
    if let Some(n) = caps.max_nodes {
        config.max_nodes = n;
    }
    Ok(Arc::new(Universe::build(&s, config)?))
}

pub fn bases(s: &SimplicialSite) -> Result<Vec<(&'static str, Presheaf)>> {
    Ok(vec![
        ("point", s.simplex(0)?),
        ("simplex1", s.simplex(1)?),
        ("boundary1", s.boundary(0, 1)?.0),
        ("horn1", s.horn(0, 1, 0)?.0),
    ])
}

/// Every sub-presheaf of `b` with its inclusion, each once.
pub fn subobjects(b: &Presheaf) -> Vec<NatMap> {
    let elems: Vec<(usize, usize)> = (0..b.sizes().len()).flat_map(|c| (0..b.size(c)).map(move |x| (c, x))).collect();
    let mut seen = HashSet::new();
    let mut out = Vec::new();
    for mask in 0u32..(1 << elems.len()) {
        let seeds: Vec<(usize, usize)> = elems.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e).collect();
        let (_, incl) = b.generated(&seeds);
        let mut image: Vec<Vec<usize>> = incl.components().to_vec();
        image.iter_mut().for_each(|l| l.sort_unstable());
        if seen.insert(image) {
            out.push(incl);
        }
    }
    out
}

/// `χ` is natural, `P ≅ χ*Ũ` over `B`, and the square `P -> Ũ` over `χ` is a pullback.
pub fn check_classification(univ: &Universe, q: &Slice, cl: &Classification) -> Option<String> {
    if !cl.chi.is_natural() {
        return Some("classifying map is not natural".into());
    }
    if !cl.iso.is_natural() || !cl.iso.is_iso() {
        return Some("comparison with the pullback is not an iso".into());
    }
    if cl.pullback.legs[0].after(&cl.iso).ok().as_ref() != Some(q.proj()) {
        return Some("comparison is not over the base".into());
    }
    let square = cl.pullback.legs[1].after(&cl.iso).and_then(|top| is_pullback_square(&top, q.proj(), univ.p(), &cl.chi));
    match square {
        Ok(true) => None,
        Ok(false) => Some("classifying square is not a pullback".into()),
        Err(e) => Some(e.to_string()),
    }
}

/// Fibers ordered by a seeded shuffle.
fn shuffled(slice: Slice, rng: &mut impl rand::Rng) -> Result<WellOrderedFibration> {
    let mut order = fibers(slice.proj());
    for lvl in order.iter_mut() {
        for f in lvl.iter_mut() {
            f.shuffle(rng);
        }
    }
    WellOrderedFibration::new(slice, order)
}

/// The given iso `i*Q ≅ f*Ũ` and the extended one `Q ≅ g*Ũ` name the same
/// element of `Ũ` for every element of `i*Q`.
fn restricts(iq: &(Slice, NatMap), given: &Classification, ext: &Classification) -> bool {
    let t = iq.0.total();
    (0..t.sizes().len()).all(|c| {
        (0..t.size(c)).all(|k| {
            let old = given.pullback.legs[1].apply(c, given.iso.apply(c, k));
            let new = ext.pullback.legs[1].apply(c, ext.iso.apply(c, iq.1.apply(c, k)));
            old == new
        })
    })
}

pub fn run(seed: u64, caps: &Caps) -> SuiteReport {
    let mut report = SuiteReport::new("universe-classify", seed, caps);
    let univ = match universe(caps) {
        Ok(u) => u,
        Err(e) => {
            report.record("build", || Err(e));
            return report;
        }
    };
    let s = univ.site().clone();
    let kappa = univ.kappa();
    let mut rng = instance_rng(seed, 0);
    for (bname, b) in bases(&s).expect("standard bases") {
        let family = match fixtures::small_fibrations(&s, &b, kappa) {
            Ok(f) => f,
            Err(e) => {
                report.record(&format!("family/{bname}"), || Err(e));
                continue;
            }
        };
        let monos = subobjects(&b);
        for (k, q) in family.iter().enumerate() {
            report.record(&format!("classify/{bname}/{k}"), || {
                if !s.is_fibration(q.proj(), 1, s.dim())? {
                    return Ok(Some("family member is not a fibration".into()));
                }
                let cl = univ.classify(&shuffled(q.clone(), &mut rng)?)?;
                Ok(check_classification(&univ, q, &cl))
            });
            for (m, i) in monos.iter().enumerate() {
                report.record(&format!("extend/{bname}/{k}/A{m}"), || {
                    let iq = pullback_along(i, q)?;
                    let given = univ.classify(&shuffled(iq.0.clone(), &mut rng)?)?;
                    let ext = univ.extend_classifier(i, &given.chi, q, &given.iso)?;
                    if ext.chi.after(i)? != given.chi {
                        return Ok(Some("g ∘ i differs from f".into()));
                    }
                    if let Some(why) = check_classification(&univ, q, &ext) {
                        return Ok(Some(why));
                    }
                    Ok(ensure(restricts(&iq, &given, &ext), || "extended iso does not restrict to the given one".into()))
                });
            }
        }
        // representables: every code is hit by some ordered family member
        let dim = match bname {
            "point" => 0,
            "simplex1" => 1,
            _ => continue,
        };
        report.record(&format!("surjective/{bname}"), || surjective(&univ, &b, dim, &family));
    }
    report
}

/// Classifying every family member under every fiber order reaches every
/// code over the representable `b`.
fn surjective(univ: &Universe, b: &Presheaf, dim: usize, family: &[Slice]) -> Result<Option<String>> {
    let s = univ.site();
    let o = s.obj(0, dim);
    let generic = s.nondegenerate(b, 0, dim)[0];
    let mut hit = HashSet::new();
    for q in family {
        for order in all_orders(&fibers(q.proj())) {
            let cl = univ.classify(&WellOrderedFibration::new(q.clone(), order)?)?;
            hit.insert(cl.chi.apply(o, generic));
        }
    }
    Ok(ensure(hit.len() == univ.u().size(o), || format!("{} of {} codes reached", hit.len(), univ.u().size(o))))
}

fn all_orders(fib: &[Vec<Vec<usize>>]) -> Vec<Vec<Vec<Vec<usize>>>> {
    let mut out = vec![fib.to_vec()];
    for c in 0..fib.len() {
        for b in 0..fib[c].len() {
            out = out
                .into_iter()
                .flat_map(|ord| {
                    permutations(&fib[c][b]).into_iter().map(move |p| {
                        let mut o = ord.clone();
                        o[c][b] = p;
                        o
                    })
                })
                .collect();
        }
    }
    out
}

fn permutations(xs: &[usize]) -> Vec<Vec<usize>> {
    if xs.len() <= 1 {
        return vec![xs.to_vec()];
    }
    let mut out = Vec::new();
    for k in 0..xs.len() {
        let mut rest = xs.to_vec();
        let x = rest.remove(k);
        for mut p in permutations(&rest) {
            p.insert(0, x);
            out.push(p);
        }
    }
    out
}
