//! Named simplicial sets and maps used as test beds: codiscrete sets,
//! nerves of cyclic groups, discrete sets and product fibrations.

use crate::error::{Error, Result};
use crate::lcc::Slice;
use crate::limits::{coproduct, pullback};
use crate::presheaf::{NatMap, Presheaf};
use crate::simplicial::SimplicialSite;

/// A simplicial set whose `k`-simplices are the words of length `len(k)` over
/// `n` letters, with the action given by `restrict(θ, word)`.
fn words(site: &SimplicialSite, n: usize, len: impl Fn(usize) -> usize, restrict: impl Fn(&[usize], &[usize]) -> Vec<usize>) -> Presheaf {
    let dim = site.dim();
    let sizes: Vec<usize> = (0..=dim).map(|k| n.pow(len(k) as u32)).collect();
    let decode = |mut x: usize, l: usize| -> Vec<usize> {
        let mut w = vec![0; l];
        for slot in w.iter_mut().rev() {
            *slot = x % n;
            x /= n;
        }
        w
    };
    let encode = |w: &[usize]| w.iter().fold(0, |acc, &d| acc * n + d);
    let delta = site.delta();
    let action = (0..delta.num_morphisms())
        .map(|g| {
            let k = delta.cod(g);
            let theta = site.theta(g);
            (0..sizes[k]).map(|x| encode(&restrict(theta, &decode(x, len(k))))).collect()
        })
        .collect();
    Presheaf::new(site.sset().clone(), sizes, action).expect("word action is functorial")
}

/// The codiscrete simplicial set on `n` points: `k`-simplices are all `(k+1)`-tuples.
pub fn codiscrete(site: &SimplicialSite, n: usize) -> Presheaf {
    words(site, n, |k| k + 1, |theta, w| theta.iter().map(|&i| w[i]).collect())
}

/// The nerve of the cyclic group `ℤ/n`.
pub fn cyclic_nerve(site: &SimplicialSite, n: usize) -> Presheaf {
    words(site, n, |k| k, |theta, g| {
        let mut prefix = vec![0];
        for &x in g {
            prefix.push((prefix.last().unwrap() + x) % n);
        }
        theta.windows(2).map(|w| (prefix[w[1]] + n - prefix[w[0]]) % n).collect()
    })
}

/// `n` disjoint points.
pub fn points(site: &SimplicialSite, n: usize) -> Presheaf {
    Presheaf::constant(site.sset().clone(), n)
}

/// A simplicial set viewed over `C × Δ` as constant in the `C` direction.
pub fn spread(site: &SimplicialSite, k: &Presheaf) -> Result<Presheaf> {
    site.tensor(k, &Presheaf::terminal(site.site().clone()))
}

/// The product fibration `B × F -> B`, with `F` a simplicial set.
pub fn product_fibration(site: &SimplicialSite, b: &Presheaf, fiber: &Presheaf) -> Result<Slice> {
    Ok(Slice::new(site.tensor_proj(fiber, b)?))
}

/// `B × u : B × F -> B × F'` over `B`.
pub fn product_map(site: &SimplicialSite, b: &Presheaf, u: &NatMap) -> Result<NatMap> {
    site.tensor_map(u, &NatMap::identity(b))
}

/// Fiberwise coproduct of fibrations over a common base.
pub fn sum_over(site: &SimplicialSite, parts: &[Slice]) -> Result<Slice> {
    let b = parts[0].base().clone();
    let c = coproduct(site.site().clone(), &parts.iter().map(|p| p.total().clone()).collect::<Vec<_>>())?;
    let proj = c.factor(&b, &parts.iter().map(|p| p.proj().clone()).collect::<Vec<_>>())?;
    Ok(Slice::new(proj))
}

/// Restriction of a fibration along `g`, as a plain slice.
pub fn restrict(g: &NatMap, e: &Slice) -> Result<Slice> {
    let pb = pullback(g, e.proj())?;
    Ok(Slice::new(pb.legs[0].clone()))
}

/// All tuples `t` with `t[k] < radix[k]`, in lexicographic order.
fn tuples(radix: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &r in radix {
        out = out.into_iter().flat_map(|t| (0..r).map(move |x| [t.as_slice(), &[x]].concat())).collect();
    }
    out
}

/// Every way to choose `len ≤ max` items from `0..n` with repetition, as
/// sorted lists.
fn multisets(n: usize, max: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..max {
        let mut next = Vec::new();
        for m in &frontier {
            let from = m.last().copied().unwrap_or(0);
            for x in from..n {
                let mut m2: Vec<usize> = m.clone();
                m2.push(x);
                next.push(m2);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// All fibrations over a 1-truncated simplicial set `b` with fibers of size
/// `< kappa`, one per choice of fiber data (not deduplicated up to iso).
///
/// A fiber over a vertex is a set of points; over an edge `σ: b₀ -> b₁` it
/// is a multiset of edges between the fibers that reaches every point at
/// both ends (the horn condition). Over a degenerate edge the degenerate
/// edges are forced and further loops and edges may be added.
pub fn small_fibrations(site: &SimplicialSite, b: &Presheaf, kappa: usize) -> Result<Vec<Slice>> {
    if site.base().num_objects() != 1 || site.dim() != 1 {
        return Err(Error::Precondition("small fibrations are enumerated over 1-truncated simplicial sets only".into()));
    }
    let sset = site.sset();
    let s0 = site.delta_mor(&[0, 0], 0).expect("degeneracy");
    let face = |j: usize| site.delta_mor(&[j], 1).expect("face");
    let (nv, ne) = (b.size(0), b.size(1));
    let ends: Vec<(usize, usize)> = (0..ne).map(|e| (b.act(face(0), e), b.act(face(1), e))).collect();
    let degenerate_of: Vec<Option<usize>> = (0..ne).map(|e| (0..nv).find(|&v| b.act(s0, v) == e)).collect();
    let mut out = Vec::new();
    for counts in tuples(&vec![kappa; nv]) {
        // per base edge: the admissible multisets of (source, target) pairs
        let options: Vec<Vec<Vec<(usize, usize)>>> = (0..ne)
            .map(|e| {
                let (b0, b1) = ends[e];
                let (n0, n1) = (counts[b0], counts[b1]);
                let room = kappa - 1 - degenerate_of[e].map_or(0, |v| counts[v]);
                multisets(n0 * n1, room)
                    .into_iter()
                    .map(|m| m.into_iter().map(|k| (k / n1.max(1), k % n1.max(1))).collect::<Vec<_>>())
                    .filter(|pairs: &Vec<(usize, usize)>| {
                        degenerate_of[e].is_some()
                            || ((0..n0).all(|x| pairs.iter().any(|p| p.0 == x)) && (0..n1).all(|y| pairs.iter().any(|p| p.1 == y)))
                    })
                    .collect()
            })
            .collect();
        if options.iter().any(Vec::is_empty) {
            continue;
        }
        for choice in tuples(&options.iter().map(Vec::len).collect::<Vec<_>>()) {
            let extra: Vec<&[(usize, usize)]> = choice.iter().enumerate().map(|(e, &k)| options[e][k].as_slice()).collect();
            out.push(assemble_fibration(site, sset, b, &counts, &ends, &degenerate_of, &extra)?);
        }
    }
    Ok(out)
}

fn assemble_fibration(
    site: &SimplicialSite,
    sset: &std::sync::Arc<crate::FiniteCategory>,
    b: &Presheaf,
    counts: &[usize],
    ends: &[(usize, usize)],
    degenerate_of: &[Option<usize>],
    extra: &[&[(usize, usize)]],
) -> Result<Slice> {
    let offset: Vec<usize> = counts.iter().scan(0, |acc, &n| {
        let o = *acc;
        *acc += n;
        Some(o)
    }).collect();
    let nverts: usize = counts.iter().sum();
    let vert_base: Vec<usize> = (0..counts.len()).flat_map(|v| std::iter::repeat(v).take(counts[v])).collect();
    // edges as (source, target, base edge); degenerate edges of vertices first
    let mut edges: Vec<(usize, usize, usize)> = Vec::new();
    let mut degen = vec![0; nverts];
    for (e, &(b0, b1)) in ends.iter().enumerate() {
        if let Some(v) = degenerate_of[e] {
            for k in 0..counts[v] {
                degen[offset[v] + k] = edges.len();
                edges.push((offset[v] + k, offset[v] + k, e));
            }
        }
        for &(x, y) in extra[e] {
            edges.push((offset[b0] + x, offset[b1] + y, e));
        }
    }
    let delta = site.delta();
    let action = (0..delta.num_morphisms())
        .map(|g| {
            let (m, k, theta) = (delta.dom(g), delta.cod(g), site.theta(g));
            match (k, m) {
                (0, 0) => (0..nverts).collect(),
                (0, _) => degen.clone(),
                (_, 0) => edges.iter().map(|&(s, t, _)| if theta[0] == 0 { s } else { t }).collect(),
                _ if theta[0] == theta[1] => edges.iter().map(|&(s, t, _)| degen[if theta[0] == 0 { s } else { t }]).collect(),
                _ => (0..edges.len()).collect(),
            }
        })
        .collect();
    let e = Presheaf::new(sset.clone(), vec![nverts, edges.len()], action)?;
    let proj = NatMap::new(e, b.clone(), vec![vert_base, edges.iter().map(|x| x.2).collect()])?;
    Ok(Slice::new(proj))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::TruncationConfig;

    #[test]
    fn sizes_and_kan_conditions() {
        let s = SimplicialSite::sets(TruncationConfig::new(2));
        let e2 = codiscrete(&s, 2);
        assert_eq!(e2.sizes(), &[2, 4, 8]);
        let bz = cyclic_nerve(&s, 2);
        assert_eq!(bz.sizes(), &[1, 2, 4]);
        for x in [&e2, &bz] {
            assert!(s.is_fibration(&NatMap::to_terminal(x), 1, 2).unwrap());
        }
        assert!(s.is_acyclic_fibration(&NatMap::to_terminal(&e2), 0, 2).unwrap());
        assert!(!s.is_acyclic_fibration(&NatMap::to_terminal(&bz), 0, 2).unwrap());
        assert!(s.is_acyclic_fibration(&NatMap::to_terminal(&bz), 0, 1).unwrap());
    }

    #[test]
    fn small_fibrations_over_a_point() {
        let s = SimplicialSite::sets(TruncationConfig::new(1));
        let pt = s.simplex(0).unwrap();
        // empty; a point with or without a loop; two points
        let fam = small_fibrations(&s, &pt, 3).unwrap();
        let shapes: Vec<_> = fam.iter().map(|e| e.total().sizes().to_vec()).collect();
        assert_eq!(shapes, vec![vec![0, 0], vec![1, 1], vec![1, 2], vec![2, 2]]);
        let d1 = s.simplex(1).unwrap();
        for e in small_fibrations(&s, &d1, 3).unwrap() {
            assert!(e.proj().is_natural());
            assert!(s.is_fibration(e.proj(), 1, 1).unwrap());
        }
    }
}
