//! Finite-set-valued presheaves and natural transformations between them.

use std::fmt;
use std::sync::Arc;

use crate::category::{FiniteCategory, MorId, ObjId};
use crate::error::{Error, Result};

struct PresheafData {
    base: Arc<FiniteCategory>,
    sizes: Vec<usize>,
    /// `action[f]` maps `level(cod f)` to `level(dom f)`.
    action: Vec<Vec<usize>>,
}

/// A contravariant functor `C^op -> FinSet`. Elements of level `c` are the
/// indices `0..size(c)`. Cloning is cheap (shared storage).
#[derive(Clone)]
pub struct Presheaf(Arc<PresheafData>);

impl fmt::Debug for Presheaf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Presheaf").field("sizes", &self.0.sizes).finish()
    }
}

impl PartialEq for Presheaf {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (same_category(&self.0.base, &other.0.base)
                && self.0.sizes == other.0.sizes
                && self.0.action == other.0.action)
    }
}

impl Eq for Presheaf {}

pub(crate) fn same_category(a: &Arc<FiniteCategory>, b: &Arc<FiniteCategory>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Presheaf {
    /// Builds a presheaf and checks ranges and functoriality.
    pub fn new(base: Arc<FiniteCategory>, sizes: Vec<usize>, action: Vec<Vec<usize>>) -> Result<Self> {
        let p = Self::from_parts(base, sizes, action)?;
        if let Some(msg) = p.functoriality_violation() {
            return Err(Error::Invalid(msg));
        }
        Ok(p)
    }

    /// Builds a presheaf checking only table shapes.
    pub fn from_parts(base: Arc<FiniteCategory>, sizes: Vec<usize>, action: Vec<Vec<usize>>) -> Result<Self> {
        if sizes.len() != base.num_objects() {
            return Err(Error::Invalid(format!(
                "level count {} differs from object count {}",
                sizes.len(),
                base.num_objects()
            )));
        }
        if action.len() != base.num_morphisms() {
            return Err(Error::Invalid(format!(
                "action table count {} differs from morphism count {}",
                action.len(),
                base.num_morphisms()
            )));
        }
        for (f, table) in action.iter().enumerate() {
            let m = base.morphism(f);
            if table.len() != sizes[m.cod] {
                return Err(Error::Invalid(format!("action[{f}] ({}) has wrong length", m.name)));
            }
            if table.iter().any(|&y| y >= sizes[m.dom]) {
                return Err(Error::Invalid(format!("action[{f}] ({}) leaves its level", m.name)));
            }
        }
        Ok(Self::raw(base, sizes, action))
    }

    pub(crate) fn raw(base: Arc<FiniteCategory>, sizes: Vec<usize>, action: Vec<Vec<usize>>) -> Self {
        Presheaf(Arc::new(PresheafData { base, sizes, action }))
    }

    fn functoriality_violation(&self) -> Option<String> {
        let c = self.base();
        for (o, &id) in c.identities().iter().enumerate() {
            if self.0.action[id].iter().enumerate().any(|(x, &y)| x != y) {
                return Some(format!("identity of {} does not act trivially", c.object_name(o)));
            }
        }
        for f in 0..c.num_morphisms() {
            for g in 0..c.num_morphisms() {
                if let Some(h) = c.try_compose(g, f) {
                    for x in 0..self.size(c.cod(g)) {
                        if self.act(h, x) != self.act(f, self.act(g, x)) {
                            return Some(format!(
                                "action of {} ∘ {} is not the composite action",
                                c.morphism(g).name,
                                c.morphism(f).name
                            ));
                        }
                    }
                }
            }
        }
        None
    }

    pub fn is_functorial(&self) -> bool {
        self.functoriality_violation().is_none()
    }

    pub fn base(&self) -> &FiniteCategory {
        &self.0.base
    }

    pub fn base_arc(&self) -> &Arc<FiniteCategory> {
        &self.0.base
    }

    pub fn same_base(&self, other: &Presheaf) -> bool {
        same_category(&self.0.base, &other.0.base)
    }

    pub fn check_same_base(&self, other: &Presheaf) -> Result<()> {
        if self.same_base(other) {
            Ok(())
        } else {
            Err(Error::BaseMismatch)
        }
    }

    pub fn size(&self, c: ObjId) -> usize {
        self.0.sizes[c]
    }

    pub fn sizes(&self) -> &[usize] {
        &self.0.sizes
    }

    pub fn total_size(&self) -> usize {
        self.0.sizes.iter().sum()
    }

    /// `x · f` for `f: c -> d` and `x` in level `d`.
    #[inline]
    pub fn act(&self, f: MorId, x: usize) -> usize {
        self.0.action[f][x]
    }

    pub fn action_table(&self, f: MorId) -> &[usize] {
        &self.0.action[f]
    }

    pub fn actions(&self) -> &[Vec<usize>] {
        &self.0.action
    }

    pub fn is_empty(&self) -> bool {
        self.0.sizes.iter().all(|&s| s == 0)
    }

    pub fn initial(base: Arc<FiniteCategory>) -> Self {
        Self::constant(base, 0)
    }

    pub fn terminal(base: Arc<FiniteCategory>) -> Self {
        Self::constant(base, 1)
    }

    /// The constant presheaf on an `n`-element set.
    pub fn constant(base: Arc<FiniteCategory>, n: usize) -> Self {
        let sizes = vec![n; base.num_objects()];
        let action = vec![(0..n).collect(); base.num_morphisms()];
        Self::raw(base, sizes, action)
    }

    /// Level `d` of the representable at `c` is `Hom(d, c)`, listed in the
    /// order of [`FiniteCategory::hom`]; the action is precomposition.
    pub fn yoneda(base: Arc<FiniteCategory>, c: ObjId) -> Result<Self> {
        base.check_object(c)?;
        let n = base.num_objects();
        let mut position = vec![usize::MAX; base.num_morphisms()];
        for d in 0..n {
            for (k, &f) in base.hom(d, c).iter().enumerate() {
                position[f] = k;
            }
        }
        let sizes: Vec<usize> = (0..n).map(|d| base.hom(d, c).len()).collect();
        let action = (0..base.num_morphisms())
            .map(|a| {
                let d = base.cod(a);
                base.hom(d, c)
                    .iter()
                    .map(|&phi| position[base.compose(phi, a)])
                    .collect()
            })
            .collect();
        Ok(Self::raw(base, sizes, action))
    }

    /// Index of the morphism `phi: d -> c` as an element of `yoneda(c)` at level `d`.
    pub fn yoneda_element(base: &FiniteCategory, phi: MorId) -> usize {
        let (d, c) = (base.dom(phi), base.cod(phi));
        base.hom(d, c).iter().position(|&g| g == phi).expect("phi is in its hom-set")
    }

    /// The map `y(c) -> self` picking out `e ∈ self(c)`.
    pub fn element_map(&self, c: ObjId, e: usize) -> Result<NatMap> {
        let base = self.base_arc().clone();
        let y = Presheaf::yoneda(base.clone(), c)?;
        if e >= self.size(c) {
            return Err(Error::OutOfRange(format!("element {e} at object {c}")));
        }
        let comps = (0..base.num_objects())
            .map(|d| base.hom(d, c).iter().map(|&phi| self.act(phi, e)).collect())
            .collect();
        Ok(NatMap::raw(y, self.clone(), comps))
    }

    /// The smallest sub-presheaf containing the given `(level, element)` seeds,
    /// with its inclusion.
    pub fn generated(&self, seeds: &[(ObjId, usize)]) -> (Presheaf, NatMap) {
        let c = self.base();
        let mut keep: Vec<Vec<bool>> = self.0.sizes.iter().map(|&s| vec![false; s]).collect();
        for &(d, x) in seeds {
            for &f in c.arrows_into(d) {
                keep[c.dom(f)][self.act(f, x)] = true;
            }
        }
        self.restrict_to(&keep)
    }

    /// Sub-presheaf on the marked elements, which must be closed under the action.
    pub fn restrict_to(&self, keep: &[Vec<bool>]) -> (Presheaf, NatMap) {
        let c = self.base();
        let mut index: Vec<Vec<usize>> = Vec::with_capacity(keep.len());
        let mut comps: Vec<Vec<usize>> = Vec::with_capacity(keep.len());
        for level in keep {
            let mut idx = vec![usize::MAX; level.len()];
            let mut comp = Vec::new();
            for (x, &k) in level.iter().enumerate() {
                if k {
                    idx[x] = comp.len();
                    comp.push(x);
                }
            }
            index.push(idx);
            comps.push(comp);
        }
        let sizes: Vec<usize> = comps.iter().map(Vec::len).collect();
        let action = (0..c.num_morphisms())
            .map(|f| {
                let (d, e) = (c.dom(f), c.cod(f));
                comps[e]
                    .iter()
                    .map(|&x| {
                        let y = index[d][self.act(f, x)];
                        assert!(y != usize::MAX, "marked elements are not closed under the action");
                        y
                    })
                    .collect()
            })
            .collect();
        let sub = Self::raw(self.0.base.clone(), sizes, action);
        let incl = NatMap::raw(sub.clone(), self.clone(), comps);
        (sub, incl)
    }

    pub fn is_subobject_closed(&self, keep: &[Vec<bool>]) -> bool {
        let c = self.base();
        (0..c.num_morphisms()).all(|f| {
            (0..self.size(c.cod(f))).all(|x| !keep[c.cod(f)][x] || keep[c.dom(f)][self.act(f, x)])
        })
    }

    /// A copy with the elements of every level renumbered by `perm[c][old] = new`.
    pub fn relabel(&self, perm: &[Vec<usize>]) -> (Presheaf, NatMap) {
        let c = self.base();
        let mut inv: Vec<Vec<usize>> = perm.iter().map(|p| vec![0; p.len()]).collect();
        for (o, p) in perm.iter().enumerate() {
            for (old, &new) in p.iter().enumerate() {
                inv[o][new] = old;
            }
        }
        let action = (0..c.num_morphisms())
            .map(|f| {
                let (d, e) = (c.dom(f), c.cod(f));
                inv[e].iter().map(|&old| perm[d][self.act(f, old)]).collect()
            })
            .collect();
        let q = Self::raw(self.0.base.clone(), self.0.sizes.clone(), action);
        let iso = NatMap::raw(self.clone(), q.clone(), perm.to_vec());
        (q, iso)
    }
}

/// A natural transformation between presheaves over the same base.
#[derive(Clone, PartialEq, Eq)]
pub struct NatMap {
    src: Presheaf,
    dst: Presheaf,
    comps: Arc<Vec<Vec<usize>>>,
}

impl fmt::Debug for NatMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NatMap").field("components", &self.comps).finish()
    }
}

impl NatMap {
    pub fn new(src: Presheaf, dst: Presheaf, comps: Vec<Vec<usize>>) -> Result<Self> {
        src.check_same_base(&dst)?;
        let c = src.base();
        if comps.len() != c.num_objects() {
            return Err(Error::Invalid("component count differs from object count".into()));
        }
        for (o, comp) in comps.iter().enumerate() {
            if comp.len() != src.size(o) || comp.iter().any(|&y| y >= dst.size(o)) {
                return Err(Error::Invalid(format!("component at {} has wrong shape", c.object_name(o))));
            }
        }
        let m = Self::raw(src, dst, comps);
        if let Some(f) = m.naturality_violation() {
            return Err(Error::Invalid(format!(
                "not natural at {}",
                m.src.base().morphism(f).name
            )));
        }
        Ok(m)
    }

    /// Components taken as given, without the naturality check.
    pub fn raw(src: Presheaf, dst: Presheaf, comps: Vec<Vec<usize>>) -> Self {
        NatMap {
            src,
            dst,
            comps: Arc::new(comps),
        }
    }

    fn naturality_violation(&self) -> Option<MorId> {
        let c = self.src.base();
        (0..c.num_morphisms()).find(|&f| {
            let (d, e) = (c.dom(f), c.cod(f));
            (0..self.src.size(e)).any(|x| {
                self.dst.act(f, self.comps[e][x]) != self.comps[d][self.src.act(f, x)]
            })
        })
    }

    pub fn is_natural(&self) -> bool {
        self.naturality_violation().is_none()
    }

    pub fn src(&self) -> &Presheaf {
        &self.src
    }

    pub fn dst(&self) -> &Presheaf {
        &self.dst
    }

    #[inline]
    pub fn apply(&self, c: ObjId, x: usize) -> usize {
        self.comps[c][x]
    }

    pub fn component(&self, c: ObjId) -> &[usize] {
        &self.comps[c]
    }

    pub fn components(&self) -> &[Vec<usize>] {
        &self.comps
    }

    pub fn identity(p: &Presheaf) -> Self {
        let comps = p.sizes().iter().map(|&s| (0..s).collect()).collect();
        Self::raw(p.clone(), p.clone(), comps)
    }

    /// `self ∘ f`: first `f`, then `self`.
    pub fn after(&self, f: &NatMap) -> Result<Self> {
        if f.dst != self.src {
            return Err(Error::Invalid("composite of non-composable natural maps".into()));
        }
        Ok(self.after_unchecked(f))
    }

    pub(crate) fn after_unchecked(&self, f: &NatMap) -> Self {
        let comps = f
            .comps
            .iter()
            .enumerate()
            .map(|(c, comp)| comp.iter().map(|&x| self.comps[c][x]).collect())
            .collect();
        Self::raw(f.src.clone(), self.dst.clone(), comps)
    }

    /// The unique map into the terminal presheaf over the same base.
    pub fn to_terminal(p: &Presheaf) -> Self {
        let t = Presheaf::terminal(p.base_arc().clone());
        let comps = p.sizes().iter().map(|&s| vec![0; s]).collect();
        Self::raw(p.clone(), t, comps)
    }

    /// The unique map out of the initial presheaf.
    pub fn from_initial(p: &Presheaf) -> Self {
        let i = Presheaf::initial(p.base_arc().clone());
        let comps = vec![Vec::new(); p.sizes().len()];
        Self::raw(i, p.clone(), comps)
    }

    /// Levelwise injective.
    pub fn is_mono(&self) -> bool {
        self.comps.iter().enumerate().all(|(c, comp)| {
            let mut seen = vec![false; self.dst.size(c)];
            comp.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
        })
    }

    /// Levelwise surjective.
    pub fn is_epi(&self) -> bool {
        self.comps.iter().enumerate().all(|(c, comp)| {
            let mut seen = vec![false; self.dst.size(c)];
            comp.iter().for_each(|&y| seen[y] = true);
            seen.into_iter().all(|b| b)
        })
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_iso() {
            return None;
        }
        let comps = self
            .comps
            .iter()
            .enumerate()
            .map(|(c, comp)| {
                let mut inv = vec![0; self.dst.size(c)];
                for (x, &y) in comp.iter().enumerate() {
                    inv[y] = x;
                }
                inv
            })
            .collect();
        Some(Self::raw(self.dst.clone(), self.src.clone(), comps))
    }

    /// The image of the map as a sub-presheaf of the codomain, with the
    /// factorisation `src -> image` and the inclusion `image -> dst`.
    pub fn image(&self) -> (NatMap, NatMap) {
        let mut keep: Vec<Vec<bool>> = self.dst.sizes().iter().map(|&s| vec![false; s]).collect();
        for (c, comp) in self.comps.iter().enumerate() {
            for &y in comp {
                keep[c][y] = true;
            }
        }
        let (img, incl) = self.dst.restrict_to(&keep);
        let mut back: Vec<Vec<usize>> = self.dst.sizes().iter().map(|&s| vec![0; s]).collect();
        for (c, comp) in incl.components().iter().enumerate() {
            for (k, &y) in comp.iter().enumerate() {
                back[c][y] = k;
            }
        }
        let onto = self
            .comps
            .iter()
            .enumerate()
            .map(|(c, comp)| comp.iter().map(|&y| back[c][y]).collect())
            .collect();
        (Self::raw(self.src.clone(), img, onto), incl)
    }

    /// Same components with a replaced (equal) codomain or domain handle.
    pub fn with_ends(&self, src: Presheaf, dst: Presheaf) -> Self {
        Self::raw(src, dst, (*self.comps).clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn delta(n: usize) -> Arc<FiniteCategory> {
        Arc::new(FiniteCategory::delta(n))
    }

    #[test]
    fn yoneda_on_terminal_is_singleton() {
        let t = Arc::new(FiniteCategory::terminal());
        let y = Presheaf::yoneda(t, 0).unwrap();
        assert_eq!(y.sizes(), &[1]);
    }

    #[test]
    fn yoneda_counts_on_delta_two() {
        // monotone maps [m] -> [1]: m + 2 of them
        let y = Presheaf::yoneda(delta(2), 1).unwrap();
        assert_eq!(y.sizes(), &[2, 3, 4]);
        assert!(y.is_functorial());
    }

    #[test]
    fn yoneda_on_arrow_category() {
        let a = Arc::new(FiniteCategory::arrow());
        let y = Presheaf::yoneda(a, 1).unwrap();
        assert_eq!(y.sizes(), &[1, 1]);
    }

    #[test]
    fn unknown_object_rejected() {
        assert_eq!(Presheaf::yoneda(delta(1), 5).unwrap_err(), Error::UnknownObject(5));
    }

    #[test]
    fn mono_iso_basics() {
        let y = Presheaf::yoneda(delta(1), 1).unwrap();
        let id = NatMap::identity(&y);
        assert!(id.is_mono() && id.is_iso());
        let bang = NatMap::to_terminal(&y);
        assert!(!bang.is_mono());
        assert!(bang.is_epi());
        assert!(NatMap::from_initial(&y).is_mono());
    }

    #[test]
    fn non_functorial_table_rejected() {
        let d = delta(1);
        let y = Presheaf::yoneda(d.clone(), 1).unwrap();
        let mut action = y.actions().to_vec();
        let id0 = d.identity(0);
        action[id0] = vec![1, 0];
        assert!(Presheaf::new(d, y.sizes().to_vec(), action).is_err());
    }
}
