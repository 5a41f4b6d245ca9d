//! Slices and the locally cartesian closed structure: `Σ_f ⊣ f* ⊣ Π_f`,
//! local exponentials and the Beck–Chevalley comparison.

use std::collections::HashMap;
use std::sync::Arc;

use crate::category::ObjId;
use crate::error::{Error, Result};
use crate::limits::{pullback, Limit};
use crate::presheaf::{NatMap, Presheaf};
use crate::search::{MapSearch, DEFAULT_MAX_NODES};

/// An object of the slice over `base`: a map `total -> base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slice {
    proj: NatMap,
}

impl Slice {
    pub fn new(proj: NatMap) -> Self {
        Slice { proj }
    }

    pub fn total(&self) -> &Presheaf {
        self.proj.src()
    }

    pub fn base(&self) -> &Presheaf {
        self.proj.dst()
    }

    pub fn proj(&self) -> &NatMap {
        &self.proj
    }

    /// The terminal object of the slice, `id: B -> B`.
    pub fn unit(base: &Presheaf) -> Self {
        Slice::new(NatMap::identity(base))
    }

    pub fn check_base(&self, base: &Presheaf) -> Result<()> {
        if self.base() == base {
            Ok(())
        } else {
            Err(Error::SliceMismatch)
        }
    }
}

/// The canonical pullback `f*E` with its map back to `E`.
pub fn pullback_along(f: &NatMap, e: &Slice) -> Result<(Slice, NatMap)> {
    e.check_base(f.dst())?;
    let pb = pullback(f, e.proj())?;
    let mut legs = pb.legs.into_iter();
    let to_a = legs.next().unwrap();
    let to_e = legs.next().unwrap();
    Ok((Slice::new(to_a), to_e))
}

/// `Σ_f E`: the same total, projected along `f`.
pub fn sigma(f: &NatMap, e: &Slice) -> Result<Slice> {
    e.check_base(f.src())?;
    Ok(Slice::new(f.after_unchecked(e.proj())))
}

/// Shared data for representables and Yoneda bookkeeping over one base.
struct Reps {
    yoneda: Vec<Presheaf>,
    /// position of morphism `φ: d' -> d` inside `Hom(d', d)`
    pos: Vec<usize>,
}

impl Reps {
    fn new(base: &Arc<crate::FiniteCategory>) -> Result<Self> {
        let mut pos = vec![0; base.num_morphisms()];
        for d in 0..base.num_objects() {
            for d2 in 0..base.num_objects() {
                for (k, &phi) in base.hom(d2, d).iter().enumerate() {
                    pos[phi] = k;
                }
            }
        }
        let yoneda = (0..base.num_objects())
            .map(|d| Presheaf::yoneda(base.clone(), d))
            .collect::<Result<_>>()?;
        Ok(Reps { yoneda, pos })
    }

    /// The Yoneda map `y(d) -> X` picking `x ∈ X(d)`.
    fn element_map(&self, x_psh: &Presheaf, d: ObjId, x: usize) -> NatMap {
        let base = x_psh.base();
        let comps = (0..base.num_objects())
            .map(|d2| base.hom(d2, d).iter().map(|&a| x_psh.act(a, x)).collect())
            .collect();
        NatMap::raw(self.yoneda[d].clone(), x_psh.clone(), comps)
    }
}

/// Section table of a dependent product element: `table[c][k]` is the value
/// at the `k`-th element `(α, a)` of the local pullback at level `c`.
pub type SectionTable = Arc<Vec<Vec<usize>>>;

/// `Π_f E` together with the data needed to evaluate its elements.
///
/// An element at level `d` over `b ∈ B(d)` is a natural section assigning to
/// every `α: d' -> d` and `a ∈ A(d')` with `f(a) = b·α` an element of `E(d')`
/// over `a`. It is stored as the component table of the corresponding map
/// `f*(y d) -> E` over `A`, so equal sections get equal ids.
#[derive(Clone, Debug)]
pub struct DependentProduct {
    pub slice: Slice,
    f: NatMap,
    e: Slice,
    elements: Vec<Vec<(usize, SectionTable)>>,
    index: Vec<HashMap<(usize, SectionTable), usize>>,
    /// `local[d][b]` is `f*(y d)` pulled back along `b`; tuple coordinates `(α-position, a)`.
    local: Vec<Vec<Limit>>,
    pos: Vec<usize>,
}

impl DependentProduct {
    pub fn total(&self) -> &Presheaf {
        self.slice.total()
    }

    pub fn f(&self) -> &NatMap {
        &self.f
    }

    pub fn fibration(&self) -> &Slice {
        &self.e
    }

    /// The base point `b` and the section table of element `k` at level `d`.
    pub fn element(&self, d: ObjId, k: usize) -> (usize, &SectionTable) {
        let (b, t) = &self.elements[d][k];
        (*b, t)
    }

    pub fn lookup(&self, d: ObjId, b: usize, table: &SectionTable) -> Option<usize> {
        self.index[d].get(&(b, table.clone())).copied()
    }

    /// `s(α, a)` for element `k` at level `d`, where `α: d' -> d` and
    /// `f(a) = b·α`.
    pub fn eval(&self, d: ObjId, k: usize, alpha: usize, a: usize) -> Option<usize> {
        let (b, table) = &self.elements[d][k];
        let c = self.f.src().base().dom(alpha);
        let idx = self.local[d][*b].element(c, &[self.pos[alpha], a])?;
        Some(table[c][idx])
    }

    /// Builds the section table at `d` over `b` from a value function on `(α, a)`.
    pub fn table_from(&self, d: ObjId, b: usize, mut value: impl FnMut(usize, usize) -> usize) -> SectionTable {
        let base = self.f.src().base();
        let lim = &self.local[d][b];
        let table = (0..base.num_objects())
            .map(|c| {
                (0..lim.apex.size(c))
                    .map(|k| {
                        let alpha = lim.legs[0].apply(c, k);
                        let a = lim.legs[1].apply(c, k);
                        value(base.hom(c, d)[alpha], a)
                    })
                    .collect()
            })
            .collect();
        Arc::new(table)
    }
}

/// `Π_f E` for `f: A -> B` and `E` over `A`.
pub fn pi(f: &NatMap, e: &Slice) -> Result<DependentProduct> {
    pi_with_budget(f, e, DEFAULT_MAX_NODES)
}

pub fn pi_with_budget(f: &NatMap, e: &Slice, max_nodes: u64) -> Result<DependentProduct> {
    e.check_base(f.src())?;
    let bp = f.dst();
    let base_arc = bp.base_arc().clone();
    let base = &*base_arc;
    let reps = Reps::new(&base_arc)?;
    let n = base.num_objects();
    let mut elements: Vec<Vec<(usize, SectionTable)>> = vec![Vec::new(); n];
    let mut index: Vec<HashMap<(usize, SectionTable), usize>> = vec![HashMap::new(); n];
    let mut local: Vec<Vec<Limit>> = Vec::with_capacity(n);
    for d in 0..n {
        let mut per_b = Vec::with_capacity(bp.size(d));
        for b in 0..bp.size(d) {
            let bmap = reps.element_map(bp, d, b);
            let lim = pullback(&bmap, f)?;
            let mut search = MapSearch::new(&lim.apex, e.total())?;
            search
                .over(e.proj(), &lim.legs[1])
                .max_nodes(max_nodes)
                .context("enumerating sections of a dependent product");
            let mut found = Vec::new();
            search.run(|a| {
                found.push(Arc::new(a.to_vec()));
                std::ops::ControlFlow::Continue(())
            })?;
            for t in found {
                index[d].insert((b, t.clone()), elements[d].len());
                elements[d].push((b, t));
            }
            per_b.push(lim);
        }
        local.push(per_b);
    }
    let mut dp = DependentProduct {
        slice: Slice::new(NatMap::identity(bp)),
        f: f.clone(),
        e: e.clone(),
        elements,
        index,
        local,
        pos: reps.pos,
    };
    let sizes: Vec<usize> = dp.elements.iter().map(Vec::len).collect();
    let mut action = Vec::with_capacity(base.num_morphisms());
    for beta in 0..base.num_morphisms() {
        let (d2, d) = (base.dom(beta), base.cod(beta));
        let row = (0..sizes[d])
            .map(|k| {
                let b2 = bp.act(beta, dp.elements[d][k].0);
                let t = dp.table_from(d2, b2, |gamma, a| {
                    dp.eval(d, k, base.compose(beta, gamma), a).expect("restricted section is defined")
                });
                dp.lookup(d2, b2, &t).expect("restriction of a section is a section")
            })
            .collect();
        action.push(row);
    }
    let total = Presheaf::raw(base_arc.clone(), sizes, action);
    let proj_comps = dp.elements.iter().map(|lvl| lvl.iter().map(|(b, _)| *b).collect()).collect();
    dp.slice = Slice::new(NatMap::raw(total, bp.clone(), proj_comps));
    Ok(dp)
}

/// `Π_f(w)` for a map `w: E -> E'` over `A`.
pub fn pi_map(src: &DependentProduct, dst: &DependentProduct, w: &NatMap) -> Result<NatMap> {
    let base = src.total().base();
    let comps = (0..base.num_objects())
        .map(|d| {
            (0..src.total().size(d))
                .map(|k| {
                    let (b, t) = src.element(d, k);
                    let mapped: Vec<Vec<usize>> = t
                        .iter()
                        .enumerate()
                        .map(|(c, lvl)| lvl.iter().map(|&x| w.apply(c, x)).collect())
                        .collect();
                    dst.lookup(d, b, &Arc::new(mapped))
                        .ok_or_else(|| Error::Invalid("map is not over the common base".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NatMap::raw(src.total().clone(), dst.total().clone(), comps))
}

/// The unit `D -> Π_f f*D` for `D` over `B`; `fd` must be `pullback_along(f, D)`
/// and `pi_fd` its dependent product along `f`.
pub fn pi_unit(d_slice: &Slice, fd: &(Slice, NatMap), pi_fd: &DependentProduct) -> Result<NatMap> {
    let base = d_slice.total().base();
    let (fd_slice, _) = fd;
    let pb_index = pair_index(fd_slice, &fd.1);
    let comps = (0..base.num_objects())
        .map(|d| {
            (0..d_slice.total().size(d))
                .map(|x| {
                    let b = d_slice.proj().apply(d, x);
                    let t = pi_fd.table_from(d, b, |alpha, a| {
                        let c = base.dom(alpha);
                        pb_index[c][&(a, d_slice.total().act(alpha, x))]
                    });
                    pi_fd
                        .lookup(d, b, &t)
                        .ok_or_else(|| Error::Invalid("unit section not found".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(NatMap::raw(d_slice.total().clone(), pi_fd.total().clone(), comps))
}

/// `pair_index[c][(a, e)]` = the element of the canonical pullback `f*E` at `c`.
pub(crate) fn pair_index(pb: &Slice, to_e: &NatMap) -> Vec<HashMap<(usize, usize), usize>> {
    (0..pb.total().sizes().len())
        .map(|c| {
            (0..pb.total().size(c))
                .map(|k| ((pb.proj().apply(c, k), to_e.apply(c, k)), k))
                .collect()
        })
        .collect()
}

/// The counit `f*Π_f E -> E`, `(a, s) ↦ s(id, a)`.
pub fn pi_counit(dp: &DependentProduct) -> Result<(Slice, NatMap)> {
    let (pb, to_pi) = pullback_along(dp.f(), &dp.slice)?;
    let base = pb.total().base();
    let comps = (0..base.num_objects())
        .map(|c| {
            (0..pb.total().size(c))
                .map(|k| {
                    let a = pb.proj().apply(c, k);
                    let s = to_pi.apply(c, k);
                    dp.eval(c, s, base.identity(c), a).expect("section is total")
                })
                .collect()
        })
        .collect();
    let counit = NatMap::raw(pb.total().clone(), dp.fibration().total().clone(), comps);
    Ok((pb, counit))
}

/// The local exponential `Fun_B(E1, E2)` with its evaluation and the
/// universal family of functions `h`.
#[derive(Clone, Debug)]
pub struct LocalExp {
    pub fun: DependentProduct,
    pub e1: Slice,
    pub e2: Slice,
    /// `p1* E2` over `E1`, the fibration whose sections are the functions.
    pub pair: (Slice, NatMap),
    /// `Fun ×_B E1` as a slice over `Fun`.
    pub fun_e1: Slice,
    pub fun_e1_to_e1: NatMap,
    /// `Fun ×_B E2` as a slice over `Fun`.
    pub fun_e2: Slice,
    pub fun_e2_to_e2: NatMap,
    /// `Fun ×_B E1 -> E2`.
    pub eval: NatMap,
    /// `h: Fun ×_B E1 -> Fun ×_B E2` over `Fun`.
    pub h: NatMap,
}

pub fn local_exp(e1: &Slice, e2: &Slice) -> Result<LocalExp> {
    if e1.base() != e2.base() {
        return Err(Error::SliceMismatch);
    }
    let pair = pullback_along(e1.proj(), e2)?;
    let fun = pi(e1.proj(), &pair.0)?;
    let (fun_e1, fun_e1_to_e1) = pullback_along(fun.slice.proj(), e1)?;
    let (fun_e2, fun_e2_to_e2) = pullback_along(fun.slice.proj(), e2)?;
    let base = e1.total().base();
    let eval_comps: Vec<Vec<usize>> = (0..base.num_objects())
        .map(|c| {
            (0..fun_e1.total().size(c))
                .map(|k| {
                    let s = fun_e1.proj().apply(c, k);
                    let x = fun_e1_to_e1.apply(c, k);
                    let p = fun.eval(c, s, base.identity(c), x).expect("section is total");
                    pair.1.apply(c, p)
                })
                .collect()
        })
        .collect();
    let eval = NatMap::raw(fun_e1.total().clone(), e2.total().clone(), eval_comps);
    let idx2 = pair_index(&fun_e2, &fun_e2_to_e2);
    let h_comps = (0..base.num_objects())
        .map(|c| {
            (0..fun_e1.total().size(c))
                .map(|k| idx2[c][&(fun_e1.proj().apply(c, k), eval.apply(c, k))])
                .collect()
        })
        .collect();
    let h = NatMap::raw(fun_e1.total().clone(), fun_e2.total().clone(), h_comps);
    Ok(LocalExp {
        fun,
        e1: e1.clone(),
        e2: e2.clone(),
        pair,
        fun_e1,
        fun_e1_to_e1,
        fun_e2,
        fun_e2_to_e2,
        eval,
        h,
    })
}

impl LocalExp {
    /// The lift `X -> Fun` of `g: X -> B` classifying `φ: g*E1 -> g*E2` over `X`.
    /// `ge1`, `ge2` are `pullback_along(g, E1/E2)`.
    pub fn transpose(&self, g: &NatMap, ge1: &(Slice, NatMap), ge2: &(Slice, NatMap), phi: &NatMap) -> Result<NatMap> {
        let base = g.src().base();
        let idx1 = pair_index(&ge1.0, &ge1.1);
        let pidx = pair_index(&self.pair.0, &self.pair.1);
        let comps = (0..base.num_objects())
            .map(|d| {
                (0..g.src().size(d))
                    .map(|x| {
                        let b = g.apply(d, x);
                        let t = self.fun.table_from(d, b, |alpha, e| {
                            let c = base.dom(alpha);
                            let xa = g.src().act(alpha, x);
                            let img = ge2.1.apply(c, phi.apply(c, idx1[c][&(xa, e)]));
                            pidx[c][&(e, img)]
                        });
                        self.fun
                            .lookup(d, b, &t)
                            .ok_or_else(|| Error::Invalid("transpose is not a section".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NatMap::raw(g.src().clone(), self.fun.total().clone(), comps))
    }

    /// The map `g*E1 -> g*E2` over `X` classified by a lift `k: X -> Fun`.
    pub fn untranspose(&self, k: &NatMap, ge1: &(Slice, NatMap), ge2: &(Slice, NatMap)) -> Result<NatMap> {
        let base = k.src().base();
        let idx2 = pair_index(&ge2.0, &ge2.1);
        let comps = (0..base.num_objects())
            .map(|c| {
                (0..ge1.0.total().size(c))
                    .map(|j| {
                        let x = ge1.0.proj().apply(c, j);
                        let e = ge1.1.apply(c, j);
                        let s = k.apply(c, x);
                        let p = self
                            .fun
                            .eval(c, s, base.identity(c), e)
                            .ok_or_else(|| Error::Invalid("lift is not over g".into()))?;
                        let img = self.pair.1.apply(c, p);
                        idx2[c]
                            .get(&(x, img))
                            .copied()
                            .ok_or_else(|| Error::Invalid("lift is not over g".into()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NatMap::raw(ge1.0.total().clone(), ge2.0.total().clone(), comps))
    }
}

/// The canonical comparison `g*(Π_f E) -> Π_{g*f}(g'*E)` for `g: B' -> B`,
/// where `g': B' ×_B A -> A`. Returned with both sides.
pub struct BeckChevalley {
    pub lhs: Slice,
    pub rhs: DependentProduct,
    pub comparison: NatMap,
}

pub fn beck_chevalley(g: &NatMap, f: &NatMap, e: &Slice) -> Result<BeckChevalley> {
    let pif = pi(f, e)?;
    let (lhs, lhs_to_pi) = pullback_along(g, &pif.slice)?;
    // A' = B' ×_B A with f' : A' -> B' and g' : A' -> A
    let pb = pullback(g, f)?;
    let f_prime = pb.legs[0].clone();
    let g_prime = pb.legs[1].clone();
    let (e_prime, e_prime_to_e) = pullback_along(&g_prime, e)?;
    let rhs = pi(&f_prime, &e_prime)?;
    let eidx = pair_index(&e_prime, &e_prime_to_e);
    let base = g.src().base();
    let comps = (0..base.num_objects())
        .map(|d| {
            (0..lhs.total().size(d))
                .map(|k| {
                    let bprime = lhs.proj().apply(d, k);
                    let s = lhs_to_pi.apply(d, k);
                    let t = rhs.table_from(d, bprime, |alpha, a_prime| {
                        let c = base.dom(alpha);
                        let a = g_prime.apply(c, a_prime);
                        let val = pif.eval(d, s, alpha, a).expect("compatible section");
                        eidx[c][&(a_prime, val)]
                    });
                    rhs.lookup(d, bprime, &t)
                        .ok_or_else(|| Error::Invalid("comparison lands outside the dependent product".into()))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let comparison = NatMap::raw(lhs.total().clone(), rhs.total().clone(), comps);
    Ok(BeckChevalley { lhs, rhs, comparison })
}

/// True iff the canonical Beck–Chevalley comparison is an isomorphism.
pub fn beck_chevalley_check(g: &NatMap, f: &NatMap, e: &Slice) -> Result<bool> {
    let bc = beck_chevalley(g, f, e)?;
    Ok(bc.comparison.is_natural()
        && bc.rhs.slice.proj().after_unchecked(&bc.comparison).components() == bc.lhs.proj().components()
        && bc.comparison.is_iso())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::search::{find_iso_over, hom_over};
    use crate::FiniteCategory;

    fn set_base() -> Arc<FiniteCategory> {
        Arc::new(FiniteCategory::terminal())
    }

    /// Over the terminal category, a map given by the fiber sizes over each base point.
    fn fibered(base: &Arc<FiniteCategory>, fibers: &[usize]) -> Slice {
        let total: usize = fibers.iter().sum();
        let e = Presheaf::constant(base.clone(), total);
        let b = Presheaf::constant(base.clone(), fibers.len());
        let comp: Vec<usize> = fibers.iter().enumerate().flat_map(|(i, &n)| std::iter::repeat(i).take(n)).collect();
        Slice::new(NatMap::new(e, b, vec![comp]).unwrap())
    }

    fn point_map(base: &Arc<FiniteCategory>, to: &Presheaf, target: usize, n: usize) -> NatMap {
        let src = Presheaf::constant(base.clone(), n);
        NatMap::new(src, to.clone(), vec![vec![target; n]]).unwrap()
    }

    #[test]
    fn pullback_counts_pairs() {
        let b = set_base();
        let e = fibered(&b, &[2, 3]);
        let f = point_map(&b, e.base(), 1, 1);
        let (fe, _) = pullback_along(&f, &e).unwrap();
        assert_eq!(fe.total().sizes(), &[3]);
    }

    #[test]
    fn pullback_along_identity_and_initial() {
        let b = set_base();
        let e = fibered(&b, &[2, 3]);
        let (fe, to_e) = pullback_along(&NatMap::identity(e.base()), &e).unwrap();
        assert!(to_e.is_iso());
        assert_eq!(fe.total().sizes(), e.total().sizes());
        let (ie, _) = pullback_along(&NatMap::from_initial(e.base()), &e).unwrap();
        assert!(ie.total().is_empty());
    }

    #[test]
    fn pi_is_product_of_fibers() {
        let b = set_base();
        let e = fibered(&b, &[2, 3]);
        let f = NatMap::to_terminal(e.base());
        let p = pi(&f, &e).unwrap();
        assert_eq!(p.total().sizes(), &[6]);
    }

    #[test]
    fn pi_along_identity_is_iso() {
        let b = Arc::new(FiniteCategory::delta(1));
        let y1 = Presheaf::yoneda(b.clone(), 1).unwrap();
        let e = Slice::new(NatMap::to_terminal(&y1));
        let id = NatMap::identity(e.base());
        let p = pi(&id, &e).unwrap();
        assert!(find_iso_over(p.slice.proj(), e.proj(), 10_000).unwrap().is_some());
    }

    #[test]
    fn exp_of_sets_is_function_set() {
        let b = set_base();
        let e1 = fibered(&b, &[2]);
        let e2 = fibered(&b, &[3]);
        let ex = local_exp(&e1, &e2).unwrap();
        assert_eq!(ex.fun.total().sizes(), &[9]);
        // by the unit object: Fun_B(B, E) ≅ E
        let unit = Slice::unit(e2.base());
        let ex2 = local_exp(&unit, &e2).unwrap();
        assert!(find_iso_over(ex2.fun.slice.proj(), e2.proj(), 10_000).unwrap().is_some());
    }

    #[test]
    fn counit_is_iso_for_mono() {
        let b = Arc::new(FiniteCategory::delta(1));
        let y1 = Presheaf::yoneda(b.clone(), 1).unwrap();
        let (v0, incl) = y1.generated(&[(0, 0)]);
        let e = Slice::new(NatMap::identity(&v0));
        let dp = pi(&incl, &e).unwrap();
        let (_, counit) = pi_counit(&dp).unwrap();
        assert!(counit.is_iso());
        let _ = hom_over(dp.slice.proj(), dp.slice.proj()).unwrap();
    }

    fn two_copies(b: &Arc<FiniteCategory>, x: &Presheaf) -> Slice {
        let two = crate::limits::coproduct(b.clone(), &[x.clone(), x.clone()]).unwrap();
        Slice::new(two.factor(x, &[NatMap::identity(x), NatMap::identity(x)]).unwrap())
    }

    #[test]
    fn adjunction_counts_agree() {
        let b = Arc::new(FiniteCategory::delta(1));
        let y1 = Presheaf::yoneda(b.clone(), 1).unwrap();
        let f = NatMap::to_terminal(&y1);
        let e = two_copies(&b, &y1);
        let dp = pi(&f, &e).unwrap();
        for n in [1usize, 2] {
            let d = Slice::new(NatMap::to_terminal(&Presheaf::constant(b.clone(), n)));
            let (fd, _) = pullback_along(&f, &d).unwrap();
            let lhs = hom_over(fd.proj(), e.proj()).unwrap().len();
            let rhs = hom_over(d.proj(), dp.slice.proj()).unwrap().len();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn beck_chevalley_on_delta1() {
        let b = Arc::new(FiniteCategory::delta(1));
        let y0 = Presheaf::yoneda(b.clone(), 0).unwrap();
        let y1 = Presheaf::yoneda(b.clone(), 1).unwrap();
        let pts = crate::limits::coproduct(b.clone(), &[y0.clone(), y0.clone()]).unwrap();
        let to_y1 = crate::search::hom_enumerate(&y0, &y1).unwrap();
        let ends = pts.factor(&y1, &[to_y1[0].clone(), to_y1[1].clone()]).unwrap();
        let e = two_copies(&b, &y1);
        assert!(beck_chevalley_check(&ends, &NatMap::identity(&y1), &e).unwrap());
        let f = NatMap::to_terminal(&y1);
        let gt = NatMap::to_terminal(ends.src());
        assert!(beck_chevalley_check(&gt, &f, &e).unwrap());
    }
}
