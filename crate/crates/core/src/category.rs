//! Finite categories given by explicit composition tables.

use std::collections::HashMap;
use std::hash::Hash;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type ObjId = usize;
pub type MorId = usize;

const NONE: u32 = u32::MAX;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Morphism {
    pub name: String,
    pub dom: ObjId,
    pub cod: ObjId,
}

/// A category with finitely many objects and arrows.
///
/// Composition is stored densely: `table[g * m + f]` holds `g ∘ f` when
/// `cod(f) == dom(g)`. Hom-sets are indexed for fast enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    objects: Vec<String>,
    morphisms: Vec<Morphism>,
    identities: Vec<MorId>,
    table: Vec<u32>,
    hom: Vec<Vec<Vec<MorId>>>,
    into: Vec<Vec<MorId>>,
}

/// Outcome of [`FiniteCategory::validate`]: every violated law, by name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CategoryReport {
    pub violations: Vec<String>,
}

impl CategoryReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

impl FiniteCategory {
    /// Builds a category from raw tables. The table is indexed `(g, f) -> g∘f`;
    /// entries for non-composable pairs are ignored. Nothing is checked
    /// beyond index ranges; run [`validate`](Self::validate) for the laws.
    pub fn from_table(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<MorId>,
        compose: &HashMap<(MorId, MorId), MorId>,
    ) -> Result<Self> {
        let n = objects.len();
        let m = morphisms.len();
        for (k, mor) in morphisms.iter().enumerate() {
            if mor.dom >= n || mor.cod >= n {
                return Err(Error::Invalid(format!(
                    "morphisms[{k}] ({}) has dangling dom/cod",
                    mor.name
                )));
            }
        }
        if identities.len() != n {
            return Err(Error::Invalid("identities must list one arrow per object".into()));
        }
        for (c, &id) in identities.iter().enumerate() {
            if id >= m {
                return Err(Error::Invalid(format!("identities[{c}] is not a morphism")));
            }
        }
        let mut table = vec![NONE; m * m];
        for (&(g, f), &h) in compose {
            if g >= m || f >= m || h >= m {
                return Err(Error::Invalid(format!("composition entry ({g},{f})->{h} out of range")));
            }
            if morphisms[f].cod == morphisms[g].dom {
                table[g * m + f] = h as u32;
            }
        }
        Ok(Self::assemble(objects, morphisms, identities, table))
    }

    fn assemble(
        objects: Vec<String>,
        morphisms: Vec<Morphism>,
        identities: Vec<MorId>,
        table: Vec<u32>,
    ) -> Self {
        let n = objects.len();
        let mut hom = vec![vec![Vec::new(); n]; n];
        let mut into = vec![Vec::new(); n];
        for (k, mor) in morphisms.iter().enumerate() {
            hom[mor.dom][mor.cod].push(k);
            into[mor.cod].push(k);
        }
        FiniteCategory {
            objects,
            morphisms,
            identities,
            table,
            hom,
            into,
        }
    }

    /// Builds a category whose arrows are concrete values closed under `compose`.
    /// `compose(g, f)` must return `g ∘ f`.
    pub fn from_concrete<M, F, N>(
        objects: Vec<String>,
        arrows: Vec<(M, ObjId, ObjId)>,
        identity: impl Fn(ObjId) -> M,
        compose: F,
        name: N,
    ) -> Result<Self>
    where
        M: Eq + Hash + Clone,
        F: Fn(&M, &M) -> M,
        N: Fn(&M) -> String,
    {
        let index: HashMap<(M, ObjId, ObjId), MorId> = arrows
            .iter()
            .enumerate()
            .map(|(k, a)| (a.clone(), k))
            .collect();
        let morphisms: Vec<Morphism> = arrows
            .iter()
            .map(|(a, d, c)| Morphism {
                name: name(a),
                dom: *d,
                cod: *c,
            })
            .collect();
        let identities = (0..objects.len())
            .map(|c| {
                index
                    .get(&(identity(c), c, c))
                    .copied()
                    .ok_or_else(|| Error::Invalid(format!("identity of object {c} missing")))
            })
            .collect::<Result<Vec<_>>>()?;
        let m = arrows.len();
        let mut table = vec![NONE; m * m];
        for (fi, (f, fd, fc)) in arrows.iter().enumerate() {
            for (gi, (g, gd, gc)) in arrows.iter().enumerate() {
                if fc != gd {
                    continue;
                }
                let h = compose(g, f);
                let hi = index.get(&(h, *fd, *gc)).ok_or_else(|| {
                    Error::Invalid(format!("composite of {} and {} is not listed", name(g), name(f)))
                })?;
                table[gi * m + fi] = *hi as u32;
            }
        }
        Ok(Self::assemble(objects, morphisms, identities, table))
    }

    /// The category with one object and one arrow.
    pub fn terminal() -> Self {
        Self::poset(&["*"], |_, _| true)
    }

    /// `0 -> 1`.
    pub fn arrow() -> Self {
        Self::poset(&["0", "1"], |a, b| a <= b)
    }

    /// Discrete category on `n` objects.
    pub fn discrete(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|k| k.to_string()).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Self::poset(&refs, |a, b| a == b)
    }

    /// The finite total order `0 < 1 < … < n-1`.
    pub fn chain(n: usize) -> Self {
        let names: Vec<String> = (0..n).map(|k| k.to_string()).collect();
        let refs: Vec<&str> = names.iter().map(String::as_str).collect();
        Self::poset(&refs, |a, b| a <= b)
    }

    /// The preorder on `names` given by `leq`, which must be reflexive and transitive.
    pub fn poset(names: &[&str], leq: impl Fn(usize, usize) -> bool) -> Self {
        let n = names.len();
        let mut arrows = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if leq(a, b) {
                    arrows.push(((a, b), a, b));
                }
            }
        }
        Self::from_concrete(
            names.iter().map(|s| s.to_string()).collect(),
            arrows,
            |c| (c, c),
            |g, f| (f.0, g.1),
            |&(a, b)| {
                if a == b {
                    format!("id_{}", names[a])
                } else {
                    format!("{}<={}", names[a], names[b])
                }
            },
        )
        .expect("preorder composition is closed")
    }

    /// Free category on a graph whose non-identity arrows never compose
    /// (every arrow goes from a "source" object to a "target" object).
    pub fn from_graph(names: &[&str], edges: &[(ObjId, ObjId, &str)]) -> Result<Self> {
        let n = names.len();
        for (k, &(s, _, _)) in edges.iter().enumerate() {
            if edges.iter().any(|&(_, t2, _)| t2 == s) {
                return Err(Error::Invalid(format!("edge {k} is composable with another edge")));
            }
        }
        let mut morphisms: Vec<Morphism> = (0..n)
            .map(|c| Morphism {
                name: format!("id_{}", names[c]),
                dom: c,
                cod: c,
            })
            .collect();
        morphisms.extend(edges.iter().map(|&(s, t, nm)| Morphism {
            name: nm.to_string(),
            dom: s,
            cod: t,
        }));
        let identities: Vec<MorId> = (0..n).collect();
        let mut compose = HashMap::new();
        for (k, mor) in morphisms.iter().enumerate() {
            compose.insert((identities[mor.cod], k), k);
            compose.insert((k, identities[mor.dom]), k);
        }
        Self::from_table(
            names.iter().map(|s| s.to_string()).collect(),
            morphisms,
            identities,
            &compose,
        )
    }

    /// The truncated simplex category: objects `[0]..[n]`, arrows the monotone maps.
    pub fn delta(n: usize) -> Self {
        let objects = (0..=n).map(|k| format!("[{k}]")).collect();
        let mut arrows = Vec::new();
        for a in 0..=n {
            for b in 0..=n {
                for m in monotone_maps(a, b) {
                    arrows.push((m, a, b));
                }
            }
        }
        Self::from_concrete(
            objects,
            arrows,
            |c| (0..=c).collect::<Vec<usize>>(),
            |g, f| f.iter().map(|&x| g[x]).collect(),
            |m| {
                let body: Vec<String> = m.iter().map(|x| x.to_string()).collect();
                format!("<{}>", body.join(""))
            },
        )
        .expect("monotone maps compose")
    }

    pub fn num_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn num_morphisms(&self) -> usize {
        self.morphisms.len()
    }

    pub fn object_name(&self, c: ObjId) -> &str {
        &self.objects[c]
    }

    pub fn object_names(&self) -> &[String] {
        &self.objects
    }

    pub fn object_by_name(&self, name: &str) -> Option<ObjId> {
        self.objects.iter().position(|o| o == name)
    }

    pub fn morphism(&self, f: MorId) -> &Morphism {
        &self.morphisms[f]
    }

    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn dom(&self, f: MorId) -> ObjId {
        self.morphisms[f].dom
    }

    pub fn cod(&self, f: MorId) -> ObjId {
        self.morphisms[f].cod
    }

    pub fn identity(&self, c: ObjId) -> MorId {
        self.identities[c]
    }

    pub fn identities(&self) -> &[MorId] {
        &self.identities
    }

    pub fn is_identity(&self, f: MorId) -> bool {
        self.identities[self.dom(f)] == f
    }

    /// `g ∘ f`, or `None` when the pair is not composable.
    pub fn try_compose(&self, g: MorId, f: MorId) -> Option<MorId> {
        if self.cod(f) != self.dom(g) {
            return None;
        }
        match self.table[g * self.morphisms.len() + f] {
            NONE => None,
            h => Some(h as usize),
        }
    }

    /// `g ∘ f`. Panics on a non-composable pair.
    pub fn compose(&self, g: MorId, f: MorId) -> MorId {
        self.try_compose(g, f)
            .unwrap_or_else(|| panic!("{} ∘ {} is not composable", self.morphisms[g].name, self.morphisms[f].name))
    }

    pub fn hom(&self, a: ObjId, b: ObjId) -> &[MorId] {
        &self.hom[a][b]
    }

    /// All arrows with codomain `c`.
    pub fn arrows_into(&self, c: ObjId) -> &[MorId] {
        &self.into[c]
    }

    pub fn check_object(&self, c: ObjId) -> Result<()> {
        if c < self.objects.len() {
            Ok(())
        } else {
            Err(Error::UnknownObject(c))
        }
    }

    /// Checks composability bookkeeping, identity laws and associativity by
    /// exhaustive enumeration.
    pub fn validate(&self) -> CategoryReport {
        let mut report = CategoryReport::default();
        let m = self.morphisms.len();
        for f in 0..m {
            for g in 0..m {
                if self.cod(f) != self.dom(g) {
                    continue;
                }
                match self.try_compose(g, f) {
                    None => report.violations.push(format!(
                        "composite {} ∘ {} undefined",
                        self.morphisms[g].name, self.morphisms[f].name
                    )),
                    Some(h) => {
                        if self.dom(h) != self.dom(f) || self.cod(h) != self.cod(g) {
                            report.violations.push(format!(
                                "composite {} ∘ {} has wrong dom/cod",
                                self.morphisms[g].name, self.morphisms[f].name
                            ));
                        }
                    }
                }
            }
        }
        for (c, &id) in self.identities.iter().enumerate() {
            if self.dom(id) != c || self.cod(id) != c {
                report.violations.push(format!("identity of {} is not an endomorphism", self.objects[c]));
            }
        }
        if !report.violations.is_empty() {
            return report;
        }
        for f in 0..m {
            let left = self.compose(self.identity(self.cod(f)), f);
            let right = self.compose(f, self.identity(self.dom(f)));
            if left != f || right != f {
                report
                    .violations
                    .push(format!("identity law fails for {}", self.morphisms[f].name));
            }
        }
        for f in 0..m {
            for &g in &self.hom_from(self.cod(f)) {
                let gf = self.compose(g, f);
                for &h in &self.hom_from(self.cod(g)) {
                    if self.compose(h, gf) != self.compose(self.compose(h, g), f) {
                        report.violations.push(format!(
                            "associativity fails for ({}, {}, {})",
                            self.morphisms[h].name, self.morphisms[g].name, self.morphisms[f].name
                        ));
                    }
                }
            }
        }
        report
    }

    fn hom_from(&self, a: ObjId) -> Vec<MorId> {
        self.hom[a].iter().flatten().copied().collect()
    }

    /// The opposite category. Arrow ids and object ids are preserved.
    pub fn opposite(&self) -> Self {
        let morphisms = self
            .morphisms
            .iter()
            .map(|f| Morphism {
                name: format!("{}^op", f.name),
                dom: f.cod,
                cod: f.dom,
            })
            .collect();
        let m = self.morphisms.len();
        let mut table = vec![NONE; m * m];
        for f in 0..m {
            for g in 0..m {
                if let Some(h) = self.try_compose(g, f) {
                    // (g∘f)^op = f^op ∘ g^op
                    table[f * m + g] = h as u32;
                }
            }
        }
        Self::assemble(self.objects.clone(), morphisms, self.identities.clone(), table)
    }

    /// Product category. Object `(a, b)` has id `b * |A| + a`, so objects of
    /// the second factor are the major index; arrow `(f, g)` has id
    /// `g * |mor A| + f`.
    pub fn product(a: &Self, b: &Self) -> Self {
        let na = a.num_objects();
        let ma = a.num_morphisms();
        let mut objects = Vec::new();
        for ob in 0..b.num_objects() {
            for oa in 0..na {
                objects.push(format!("({},{})", a.objects[oa], b.objects[ob]));
            }
        }
        let mut morphisms = Vec::new();
        for g in 0..b.num_morphisms() {
            for f in 0..ma {
                morphisms.push(Morphism {
                    name: format!("({},{})", a.morphisms[f].name, b.morphisms[g].name),
                    dom: b.dom(g) * na + a.dom(f),
                    cod: b.cod(g) * na + a.cod(f),
                });
            }
        }
        let identities = (0..objects.len())
            .map(|o| b.identity(o / na) * ma + a.identity(o % na))
            .collect();
        let m = morphisms.len();
        let mut table = vec![NONE; m * m];
        for p in 0..m {
            let (f1, g1) = (p % ma, p / ma);
            for q in 0..m {
                let (f2, g2) = (q % ma, q / ma);
                if let (Some(f), Some(g)) = (a.try_compose(f2, f1), b.try_compose(g2, g1)) {
                    table[q * m + p] = (g * ma + f) as u32;
                }
            }
        }
        Self::assemble(objects, morphisms, identities, table)
    }
}

/// Monotone maps `[a] -> [b]` as value vectors, in lexicographic order.
pub fn monotone_maps(a: usize, b: usize) -> Vec<Vec<usize>> {
    fn go(pos: usize, a: usize, b: usize, lo: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos > a {
            out.push(cur.clone());
            return;
        }
        for v in lo..=b {
            cur.push(v);
            go(pos + 1, a, b, v, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, a, b, 0, &mut Vec::new(), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn terminal_passes() {
        let c = FiniteCategory::terminal();
        assert_eq!(c.num_morphisms(), 1);
        assert!(c.validate().passed());
    }

    #[test]
    fn broken_identity_is_named() {
        let objects = vec!["a".to_string(), "b".to_string()];
        let morphisms = vec![
            Morphism { name: "id_a".into(), dom: 0, cod: 0 },
            Morphism { name: "id_b".into(), dom: 1, cod: 1 },
            Morphism { name: "f".into(), dom: 0, cod: 1 },
            Morphism { name: "g".into(), dom: 0, cod: 1 },
        ];
        let mut compose = HashMap::new();
        compose.insert((0, 0), 0);
        compose.insert((1, 1), 1);
        compose.insert((1, 2), 3); // id_b ∘ f = g: wrong
        compose.insert((2, 0), 2);
        compose.insert((1, 3), 3);
        compose.insert((3, 0), 3);
        let c = FiniteCategory::from_table(objects, morphisms, vec![0, 1], &compose).unwrap();
        let report = c.validate();
        assert!(!report.passed());
        assert!(report.violations.iter().any(|v| v.contains("identity law fails for f")));
    }

    #[test]
    fn dangling_dom_rejected() {
        let objects = vec!["a".to_string()];
        let morphisms = vec![Morphism { name: "f".into(), dom: 0, cod: 3 }];
        let err = FiniteCategory::from_table(objects, morphisms, vec![0], &HashMap::new()).unwrap_err();
        assert!(matches!(err, Error::Invalid(ref s) if s.contains("morphisms[0]")));
    }

    #[test]
    fn delta_two_matches_monotone_oracle() {
        let d = FiniteCategory::delta(2);
        assert!(d.validate().passed());
        // |Hom([m],[n])| = C(m+n+1, m+1)
        for a in 0..=2 {
            for b in 0..=2 {
                assert_eq!(d.hom(a, b).len(), binom(a + b + 1, a + 1));
            }
        }
        assert_eq!(d.num_morphisms(), 31);
    }

    #[test]
    fn products_and_opposites_are_categories() {
        let p = FiniteCategory::product(&FiniteCategory::arrow(), &FiniteCategory::delta(1));
        assert!(p.validate().passed());
        assert_eq!(p.num_objects(), 4);
        assert_eq!(p.num_morphisms(), 3 * 7);
        assert!(FiniteCategory::delta(2).opposite().validate().passed());
    }
}
