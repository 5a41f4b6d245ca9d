//! Finite limits and colimits of presheaves, computed levelwise.
//!
//! Limits are sets of compatible families; colimits are quotients of the
//! disjoint union by the zig-zag relation, computed with union-find where the
//! representative of a class is its least element in coproduct order.

use std::collections::HashMap;
use std::sync::Arc;

use crate::category::{FiniteCategory, ObjId};
use crate::error::{Error, Result};
use crate::presheaf::{same_category, NatMap, Presheaf};

/// A functor from a finite shape category into presheaves over a fixed base.
#[derive(Clone, Debug)]
pub struct Diagram {
    base: Arc<FiniteCategory>,
    shape: Arc<FiniteCategory>,
    objects: Vec<Presheaf>,
    arrows: Vec<NatMap>,
}

impl Diagram {
    /// `arrows[u]` is the image of shape morphism `u`. Functoriality is checked.
    pub fn new(
        base: Arc<FiniteCategory>,
        shape: Arc<FiniteCategory>,
        objects: Vec<Presheaf>,
        arrows: Vec<NatMap>,
    ) -> Result<Self> {
        let d = Self::new_unchecked(base, shape, objects, arrows)?;
        if !d.is_functorial() {
            return Err(Error::Invalid("diagram assignment is not functorial".into()));
        }
        Ok(d)
    }

    pub(crate) fn new_unchecked(
        base: Arc<FiniteCategory>,
        shape: Arc<FiniteCategory>,
        objects: Vec<Presheaf>,
        arrows: Vec<NatMap>,
    ) -> Result<Self> {
        if objects.len() != shape.num_objects() || arrows.len() != shape.num_morphisms() {
            return Err(Error::Invalid("diagram does not cover its shape".into()));
        }
        for p in &objects {
            if !same_category(p.base_arc(), &base) {
                return Err(Error::BaseMismatch);
            }
        }
        for (u, f) in arrows.iter().enumerate() {
            if f.src() != &objects[shape.dom(u)] || f.dst() != &objects[shape.cod(u)] {
                return Err(Error::Invalid(format!(
                    "arrow {} does not connect its endpoints",
                    shape.morphism(u).name
                )));
            }
        }
        Ok(Diagram {
            base,
            shape,
            objects,
            arrows,
        })
    }

    /// Diagram on the free shape generated by `edges`, which must not compose.
    pub fn from_edges(base: Arc<FiniteCategory>, objects: Vec<Presheaf>, edges: Vec<(usize, usize, NatMap)>) -> Result<Self> {
        let names: Vec<String> = (0..objects.len()).map(|k| k.to_string()).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        let enames: Vec<String> = (0..edges.len()).map(|k| format!("e{k}")).collect();
        let spec: Vec<(usize, usize, &str)> = edges
            .iter()
            .zip(&enames)
            .map(|((s, t, _), n)| (*s, *t, n.as_str()))
            .collect();
        let shape = Arc::new(FiniteCategory::from_graph(&refs, &spec)?);
        let mut arrows: Vec<NatMap> = objects.iter().map(NatMap::identity).collect();
        arrows.extend(edges.into_iter().map(|(_, _, f)| f));
        Self::new_unchecked(base, shape, objects, arrows)
    }

    pub fn empty(base: Arc<FiniteCategory>) -> Self {
        Diagram {
            base,
            shape: Arc::new(FiniteCategory::discrete(0)),
            objects: Vec::new(),
            arrows: Vec::new(),
        }
    }

    pub fn base(&self) -> &Arc<FiniteCategory> {
        &self.base
    }

    pub fn shape(&self) -> &FiniteCategory {
        &self.shape
    }

    pub fn objects(&self) -> &[Presheaf] {
        &self.objects
    }

    pub fn arrows(&self) -> &[NatMap] {
        &self.arrows
    }

    pub fn is_functorial(&self) -> bool {
        let s = &self.shape;
        s.identities().iter().all(|&id| {
            self.arrows[id].components().iter().all(|c| c.iter().enumerate().all(|(x, &y)| x == y))
        }) && (0..s.num_morphisms()).all(|u| {
            (0..s.num_morphisms()).all(|v| match s.try_compose(v, u) {
                None => true,
                Some(w) => self.arrows[v].after_unchecked(&self.arrows[u]).components() == self.arrows[w].components(),
            })
        })
    }
}

/// A limit cone with a tuple index for factoring other cones through it.
#[derive(Clone, Debug)]
pub struct Limit {
    pub apex: Presheaf,
    pub legs: Vec<NatMap>,
    index: Vec<HashMap<Vec<usize>, usize>>,
}

impl Limit {
    /// The unique map from a cone with the given legs (one per diagram object).
    pub fn factor(&self, legs: &[NatMap]) -> Result<NatMap> {
        let src = legs
            .first()
            .map(|l| l.src().clone())
            .ok_or_else(|| Error::Invalid("use factor_from for the empty diagram".into()))?;
        self.factor_from(&src, legs)
    }

    pub fn factor_from(&self, src: &Presheaf, legs: &[NatMap]) -> Result<NatMap> {
        let comps = (0..src.sizes().len())
            .map(|c| {
                (0..src.size(c))
                    .map(|x| {
                        let t: Vec<usize> = legs.iter().map(|l| l.apply(c, x)).collect();
                        self.index[c]
                            .get(&t)
                            .copied()
                            .ok_or_else(|| Error::Invalid("legs do not form a cone".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NatMap::raw(src.clone(), self.apex.clone(), comps))
    }

    /// Element of the apex at `c` with the given coordinates.
    pub fn element(&self, c: ObjId, coords: &[usize]) -> Option<usize> {
        self.index[c].get(coords).copied()
    }
}

/// Compatible families, enumerated in lexicographic order of coordinates.
pub fn limit(d: &Diagram) -> Limit {
    let base = &d.base;
    let n = d.objects.len();
    let s = &d.shape;
    // constraints checked when the later endpoint is chosen
    let mut checks: Vec<Vec<(usize, usize, bool)>> = vec![Vec::new(); n];
    for u in 0..s.num_morphisms() {
        if s.is_identity(u) {
            continue;
        }
        let (j, k) = (s.dom(u), s.cod(u));
        let later = j.max(k);
        checks[later].push((u, if later == j { k } else { j }, later == j));
    }
    let mut tuples: Vec<Vec<Vec<usize>>> = Vec::with_capacity(base.num_objects());
    for c in 0..base.num_objects() {
        let mut out = Vec::new();
        let mut cur = vec![0usize; n];
        fn rec(
            pos: usize,
            c: ObjId,
            d: &Diagram,
            checks: &[Vec<(usize, usize, bool)>],
            cur: &mut Vec<usize>,
            out: &mut Vec<Vec<usize>>,
        ) {
            if pos == cur.len() {
                out.push(cur.clone());
                return;
            }
            'v: for v in 0..d.objects[pos].size(c) {
                cur[pos] = v;
                for &(u, other, pos_is_dom) in &checks[pos] {
                    let ok = if pos_is_dom {
                        d.arrows[u].apply(c, v) == cur[other]
                    } else {
                        d.arrows[u].apply(c, cur[other]) == v
                    };
                    if !ok {
                        continue 'v;
                    }
                }
                rec(pos + 1, c, d, checks, cur, out);
            }
        }
        rec(0, c, d, &checks, &mut cur, &mut out);
        tuples.push(out);
    }
    assemble_limit(base.clone(), &d.objects, tuples)
}

fn assemble_limit(base: Arc<FiniteCategory>, objects: &[Presheaf], tuples: Vec<Vec<Vec<usize>>>) -> Limit {
    let index: Vec<HashMap<Vec<usize>, usize>> = tuples
        .iter()
        .map(|lvl| lvl.iter().enumerate().map(|(k, t)| (t.clone(), k)).collect())
        .collect();
    let sizes = tuples.iter().map(Vec::len).collect();
    let action = (0..base.num_morphisms())
        .map(|f| {
            let (c, d) = (base.dom(f), base.cod(f));
            tuples[d]
                .iter()
                .map(|t| {
                    let r: Vec<usize> = t.iter().zip(objects).map(|(&x, p)| p.act(f, x)).collect();
                    index[c][&r]
                })
                .collect()
        })
        .collect();
    let apex = Presheaf::raw(base, sizes, action);
    let legs = objects
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let comps = tuples.iter().map(|lvl| lvl.iter().map(|t| t[j]).collect()).collect();
            NatMap::raw(apex.clone(), p.clone(), comps)
        })
        .collect();
    Limit { apex, legs, index }
}

/// Cartesian product of a list of presheaves.
pub fn product(base: Arc<FiniteCategory>, factors: &[Presheaf]) -> Result<Limit> {
    let d = Diagram::new_unchecked(
        base,
        Arc::new(FiniteCategory::discrete(factors.len())),
        factors.to_vec(),
        factors.iter().map(NatMap::identity).collect(),
    )?;
    Ok(limit(&d))
}

/// Equalizer of a parallel pair, as a sub-presheaf of the common domain.
pub fn equalizer(f: &NatMap, g: &NatMap) -> Result<(Presheaf, NatMap)> {
    if f.src() != g.src() || f.dst() != g.dst() {
        return Err(Error::Invalid("equalizer of a non-parallel pair".into()));
    }
    let keep: Vec<Vec<bool>> = f
        .components()
        .iter()
        .zip(g.components())
        .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x == y).collect())
        .collect();
    Ok(f.src().restrict_to(&keep))
}

/// The limit computed from the two primitives: the equalizer of the pair
/// `∏_j D_j ⇉ ∏_u D_{cod u}`. Used as an independent cross-check of [`limit`].
pub fn limit_via_product_equalizer(d: &Diagram) -> Result<(Presheaf, Vec<NatMap>)> {
    let prod = product(d.base.clone(), &d.objects)?;
    let s = &d.shape;
    let targets: Vec<Presheaf> = (0..s.num_morphisms()).map(|u| d.objects[s.cod(u)].clone()).collect();
    let tprod = product(d.base.clone(), &targets)?;
    let first: Vec<NatMap> = (0..s.num_morphisms()).map(|u| prod.legs[s.cod(u)].clone()).collect();
    let second: Vec<NatMap> = (0..s.num_morphisms())
        .map(|u| d.arrows[u].after_unchecked(&prod.legs[s.dom(u)]))
        .collect();
    let a = tprod.factor_from(&prod.apex, &first)?;
    let b = tprod.factor_from(&prod.apex, &second)?;
    let (eq, incl) = equalizer(&a, &b)?;
    let legs = prod.legs.iter().map(|l| l.after_unchecked(&incl)).collect();
    Ok((eq, legs))
}

/// A binary pullback `A ×_C B` of `f: A -> C` and `g: B -> C`; elements are
/// the pairs `(a, b)` with `f(a) = g(b)`, in lexicographic order.
pub fn pullback(f: &NatMap, g: &NatMap) -> Result<Limit> {
    if f.dst() != g.dst() {
        return Err(Error::Invalid("pullback of maps with different codomains".into()));
    }
    let base = f.src().base_arc().clone();
    let tuples = (0..base.num_objects())
        .map(|c| {
            let mut by_image: Vec<Vec<usize>> = vec![Vec::new(); f.dst().size(c)];
            for b in 0..g.src().size(c) {
                by_image[g.apply(c, b)].push(b);
            }
            let mut out = Vec::new();
            for a in 0..f.src().size(c) {
                for &b in &by_image[f.apply(c, a)] {
                    out.push(vec![a, b]);
                }
            }
            out
        })
        .collect();
    Ok(assemble_limit(base, &[f.src().clone(), g.src().clone()], tuples))
}

/// A colimit cocone with the class map for factoring.
#[derive(Clone, Debug)]
pub struct Colimit {
    pub apex: Presheaf,
    pub injections: Vec<NatMap>,
}

impl Colimit {
    /// The unique map out of the colimit to a cocone with the given legs.
    pub fn factor(&self, target: &Presheaf, legs: &[NatMap]) -> Result<NatMap> {
        let mut comps: Vec<Vec<Option<usize>>> = self.apex.sizes().iter().map(|&s| vec![None; s]).collect();
        for (inj, leg) in self.injections.iter().zip(legs) {
            for c in 0..comps.len() {
                for x in 0..inj.src().size(c) {
                    let k = inj.apply(c, x);
                    let v = leg.apply(c, x);
                    match comps[c][k] {
                        None => comps[c][k] = Some(v),
                        Some(w) if w != v => return Err(Error::Invalid("legs do not form a cocone".into())),
                        _ => {}
                    }
                }
            }
        }
        let comps = comps
            .into_iter()
            .map(|lvl| lvl.into_iter().map(|v| v.expect("colimit classes are jointly covered")).collect())
            .collect();
        Ok(NatMap::raw(self.apex.clone(), target.clone(), comps))
    }
}

/// Minimal disjoint-set forest whose root is always the least member.
struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut y = x;
        while self.parent[y] != r {
            let next = self.parent[y];
            self.parent[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra < rb {
            self.parent[rb] = ra;
        } else if rb < ra {
            self.parent[ra] = rb;
        }
    }
}

pub fn colimit(d: &Diagram) -> Colimit {
    let base = &d.base;
    let s = &d.shape;
    let n = d.objects.len();
    let mut offsets: Vec<Vec<usize>> = Vec::new(); // [c][j]
    let mut class: Vec<Vec<usize>> = Vec::new(); // [c][flat] -> class id
    let mut reps: Vec<Vec<(usize, usize)>> = Vec::new(); // [c][class] -> (j, x)
    for c in 0..base.num_objects() {
        let mut off = Vec::with_capacity(n);
        let mut total = 0;
        for p in &d.objects {
            off.push(total);
            total += p.size(c);
        }
        let mut ds = DisjointSet::new(total);
        for u in 0..s.num_morphisms() {
            if s.is_identity(u) {
                continue;
            }
            let (j, k) = (s.dom(u), s.cod(u));
            for x in 0..d.objects[j].size(c) {
                ds.union(off[j] + x, off[k] + d.arrows[u].apply(c, x));
            }
        }
        let mut cls = vec![usize::MAX; total];
        let mut rep = Vec::new();
        let mut j = 0;
        for flat in 0..total {
            while j + 1 < n && off[j + 1] <= flat {
                j += 1;
            }
            let r = ds.find(flat);
            if r == flat {
                cls[flat] = rep.len();
                rep.push((j, flat - off[j]));
            } else {
                cls[flat] = cls[r];
            }
        }
        offsets.push(off);
        class.push(cls);
        reps.push(rep);
    }
    let sizes = reps.iter().map(Vec::len).collect();
    let action = (0..base.num_morphisms())
        .map(|f| {
            let (c, e) = (base.dom(f), base.cod(f));
            reps[e]
                .iter()
                .map(|&(j, x)| class[c][offsets[c][j] + d.objects[j].act(f, x)])
                .collect()
        })
        .collect();
    let apex = Presheaf::raw(base.clone(), sizes, action);
    let injections = d
        .objects
        .iter()
        .enumerate()
        .map(|(j, p)| {
            let comps = (0..base.num_objects())
                .map(|c| (0..p.size(c)).map(|x| class[c][offsets[c][j] + x]).collect())
                .collect();
            NatMap::raw(p.clone(), apex.clone(), comps)
        })
        .collect();
    Colimit { apex, injections }
}

pub fn coproduct(base: Arc<FiniteCategory>, summands: &[Presheaf]) -> Result<Colimit> {
    let d = Diagram::new_unchecked(
        base,
        Arc::new(FiniteCategory::discrete(summands.len())),
        summands.to_vec(),
        summands.iter().map(NatMap::identity).collect(),
    )?;
    Ok(colimit(&d))
}

/// Pushout of the span `A <- C -> B`; injections are `[C, A, B]`.
pub fn pushout(f: &NatMap, g: &NatMap) -> Result<Colimit> {
    if f.src() != g.src() {
        return Err(Error::Invalid("pushout of maps with different domains".into()));
    }
    let base = f.src().base_arc().clone();
    let d = Diagram::from_edges(
        base,
        vec![f.src().clone(), f.dst().clone(), g.dst().clone()],
        vec![(0, 1, f.clone()), (0, 2, g.clone())],
    )?;
    Ok(colimit(&d))
}

/// Coequalizer of a parallel pair; injections are `[A, B]` for `f, g: A -> B`.
pub fn coequalizer(f: &NatMap, g: &NatMap) -> Result<Colimit> {
    if f.src() != g.src() || f.dst() != g.dst() {
        return Err(Error::Invalid("coequalizer of a non-parallel pair".into()));
    }
    let base = f.src().base_arc().clone();
    let d = Diagram::from_edges(
        base,
        vec![f.src().clone(), f.dst().clone()],
        vec![(0, 1, f.clone()), (0, 1, g.clone())],
    )?;
    Ok(colimit(&d))
}

/// Whether the commutative square `top: X -> Y, left: X -> A, right: Y -> B,
/// bottom: A -> B` is a pullback (the comparison into `A ×_B Y` is iso).
pub fn is_pullback_square(top: &NatMap, left: &NatMap, right: &NatMap, bottom: &NatMap) -> Result<bool> {
    if right.after_unchecked(top).components() != bottom.after_unchecked(left).components() {
        return Ok(false);
    }
    let pb = pullback(bottom, right)?;
    let cmp = pb.factor(&[left.clone(), top.clone()])?;
    Ok(cmp.is_iso())
}

/// Whether the commutative square `f: C -> A, g: C -> B, i: A -> P, j: B -> P`
/// is a pushout.
pub fn is_pushout_square(f: &NatMap, g: &NatMap, i: &NatMap, j: &NatMap) -> Result<bool> {
    if i.after_unchecked(f).components() != j.after_unchecked(g).components() {
        return Ok(false);
    }
    let po = pushout(f, g)?;
    let leg0 = i.after_unchecked(f);
    let cmp = po.factor(i.dst(), &[leg0, i.clone(), j.clone()])?;
    Ok(cmp.is_iso())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::hom_enumerate;

    fn terminal_base() -> Arc<FiniteCategory> {
        Arc::new(FiniteCategory::terminal())
    }

    #[test]
    fn empty_limit_and_colimit() {
        let b = Arc::new(FiniteCategory::delta(1));
        let d = Diagram::empty(b);
        assert_eq!(limit(&d).apex.sizes(), &[1, 1]);
        assert_eq!(colimit(&d).apex.sizes(), &[0, 0]);
    }

    #[test]
    fn product_of_two_and_three() {
        let b = terminal_base();
        let p = product(b.clone(), &[Presheaf::constant(b.clone(), 2), Presheaf::constant(b, 3)]).unwrap();
        assert_eq!(p.apex.sizes(), &[6]);
    }

    #[test]
    fn coproduct_of_vertices() {
        let b = Arc::new(FiniteCategory::delta(1));
        let y0 = Presheaf::yoneda(b.clone(), 0).unwrap();
        let c = coproduct(b, &[y0.clone(), y0]).unwrap();
        assert_eq!(c.apex.size(0), 2);
    }

    #[test]
    fn equalizer_route_agrees_with_families() {
        let b = Arc::new(FiniteCategory::delta(1));
        let y1 = Presheaf::yoneda(b.clone(), 1).unwrap();
        let t = NatMap::to_terminal(&y1);
        let d = Diagram::from_edges(
            b,
            vec![y1.clone(), t.dst().clone(), y1.clone()],
            vec![(0, 1, t.clone()), (2, 1, t)],
        )
        .unwrap();
        let l = limit(&d);
        let (eq, _) = limit_via_product_equalizer(&d).unwrap();
        assert_eq!(l.apex, eq);
    }

    #[test]
    fn homs_from_initial_and_to_terminal() {
        let b = Arc::new(FiniteCategory::delta(1));
        let y1 = Presheaf::yoneda(b.clone(), 1).unwrap();
        assert_eq!(hom_enumerate(&y1, &Presheaf::terminal(b.clone())).unwrap().len(), 1);
        assert_eq!(hom_enumerate(&Presheaf::initial(b), &y1).unwrap().len(), 1);
    }
}
