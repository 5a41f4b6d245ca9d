//! Versioned JSON documents for categories, presheaves, natural maps, Reedy
//! structures and universe snapshots.
//!
//! Every file is an envelope `{schema_version, kind, sha256, body}`. The hash
//! is SHA-256 over the compact serialization of `body`; it may be omitted in
//! hand-written input and is always written on output. Printing is canonical,
//! so `print(parse(x)) == x` for any printed `x`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use elegant_core::category::{FiniteCategory, Morphism};
use elegant_core::presheaf::{NatMap, Presheaf};
use elegant_core::reedy::ReedyStructure;
use elegant_core::simplicial::{SimplicialSite, TruncationConfig};
use elegant_core::universe::Universe;

pub const SCHEMA_VERSION: u32 = 1;

/// A schema violation at a JSON path such as `body.morphisms[3].dom`.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{path}: {message}")]
pub struct FormatError {
    pub path: String,
    pub message: String,
}

fn err<T>(path: impl Into<String>, message: impl Into<String>) -> Result<T, FormatError> {
    Err(FormatError { path: path.into(), message: message.into() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Category,
    Presheaf,
    Natmap,
    Reedy,
    Universe,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = serde_json::to_value(self).expect("unit variant");
        write!(f, "{}", s.as_str().expect("string"))
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Envelope<T> {
    schema_version: u32,
    kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sha256: Option<String>,
    body: T,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CategoryBody {
    pub objects: Vec<String>,
    pub morphisms: Vec<Morphism>,
    pub identities: Vec<usize>,
    /// `[g, f, g∘f]` for composable pairs of non-identity arrows.
    pub compose: Vec<[usize; 3]>,
}

/// The indexing category: `base`, or `base × Δ≤N` when `trunc_dim` is set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SiteBody {
    pub base: CategoryBody,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trunc_dim: Option<usize>,
}

/// Element counts per object and, per arrow `f: c -> d`, the table `X(d) -> X(c)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tables {
    pub sizes: Vec<usize>,
    pub action: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PresheafBody {
    pub site: SiteBody,
    #[serde(flatten)]
    pub tables: Tables,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NatMapBody {
    pub site: SiteBody,
    pub src: Tables,
    pub dst: Tables,
    pub components: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReedyBody {
    pub category: CategoryBody,
    pub degree: Vec<usize>,
    /// Arrow ids of the direct part.
    pub plus: Vec<usize>,
    /// Arrow ids of the inverse part.
    pub minus: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UniverseBody {
    pub kappa: usize,
    pub trunc_dim: usize,
    pub fib_range: (usize, usize),
    pub u: Tables,
    pub ut: Tables,
    pub p: Vec<Vec<usize>>,
}

/// A presheaf together with the simplicial site it lives over, if any.
#[derive(Clone, Debug)]
pub struct Located<T> {
    pub site: Site,
    pub value: T,
}

#[derive(Clone, Debug)]
pub struct Site {
    pub base: Arc<FiniteCategory>,
    pub simplicial: Option<SimplicialSite>,
}

impl Site {
    pub fn new(base: Arc<FiniteCategory>, trunc_dim: Option<usize>) -> Self {
        let simplicial = trunc_dim.map(|n| SimplicialSite::new(base.clone(), TruncationConfig::new(n)));
        Site { base, simplicial }
    }

    pub fn of(s: &SimplicialSite) -> Self {
        Site { base: s.base().clone(), simplicial: Some(s.clone()) }
    }

    /// The category presheaves are indexed by.
    pub fn indexing(&self) -> Arc<FiniteCategory> {
        match &self.simplicial {
            Some(s) => s.site().clone(),
            None => self.base.clone(),
        }
    }

    pub fn trunc_dim(&self) -> Option<usize> {
        self.simplicial.as_ref().map(|s| s.dim())
    }

    fn body(&self) -> SiteBody {
        SiteBody { base: category_body(&self.base), trunc_dim: self.trunc_dim() }
    }
}

/// The fibration `p: Ũ -> U` of a built universe, as plain presheaves.
#[derive(Clone, Debug)]
pub struct UniverseSnapshot {
    pub kappa: usize,
    pub fib_range: (usize, usize),
    pub site: SimplicialSite,
    pub p: NatMap,
}

impl UniverseSnapshot {
    pub fn of(u: &Universe) -> Self {
        UniverseSnapshot { kappa: u.kappa(), fib_range: u.config().fib_range, site: u.site().clone(), p: u.p().clone() }
    }
}

/// Any loaded document.
#[derive(Clone, Debug)]
pub enum Document {
    Category(FiniteCategory),
    Presheaf(Located<Presheaf>),
    NatMap(Located<NatMap>),
    Reedy(ReedyStructure),
    Universe(UniverseSnapshot),
}

impl Document {
    pub fn kind(&self) -> Kind {
        match self {
            Document::Category(_) => Kind::Category,
            Document::Presheaf(_) => Kind::Presheaf,
            Document::NatMap(_) => Kind::Natmap,
            Document::Reedy(_) => Kind::Reedy,
            Document::Universe(_) => Kind::Universe,
        }
    }
}

fn canonical<T: Serialize>(body: &T) -> String {
    serde_json::to_string(body).expect("plain data serializes")
}

pub fn content_hash<T: Serialize>(body: &T) -> String {
    hex::encode(Sha256::digest(canonical(body).as_bytes()))
}

fn wrap<T: Serialize>(kind: Kind, body: T) -> String {
    let sha256 = Some(content_hash(&body));
    let mut s = canonical(&Envelope { schema_version: SCHEMA_VERSION, kind, sha256, body });
    s.push('\n');
    s
}

fn decode<T: DeserializeOwned>(text: &str) -> Result<T, FormatError> {
    let mut de = serde_json::Deserializer::from_str(text);
    match serde_path_to_error::deserialize(&mut de) {
        Ok(v) => Ok(v),
        Err(e) => {
            let path = e.path().to_string();
            let inner = e.into_inner();
            err(if path == "." { "$".to_string() } else { path }, inner.to_string())
        }
    }
}

/// Reads the envelope and checks version, kind and hash.
fn unwrap<T: DeserializeOwned + Serialize>(text: &str, want: Kind) -> Result<T, FormatError> {
    let found = peek_kind(text)?;
    if found != want {
        return err("kind", format!("expected {want}, found {found}"));
    }
    let env: Envelope<T> = decode(text)?;
    check_envelope(&env, want)?;
    Ok(env.body)
}

fn check_envelope<T: Serialize>(env: &Envelope<T>, want: Kind) -> Result<(), FormatError> {
    if env.schema_version != SCHEMA_VERSION {
        return err("schema_version", format!("unsupported version {}, expected {SCHEMA_VERSION}", env.schema_version));
    }
    if env.kind != want {
        return err("kind", format!("expected {want}, found {}", env.kind));
    }
    if let Some(h) = &env.sha256 {
        let actual = content_hash(&env.body);
        if *h != actual {
            return err("sha256", format!("content hash mismatch, body hashes to {actual}"));
        }
    }
    Ok(())
}

/// The `kind` field of a document, without decoding the body.
pub fn peek_kind(text: &str) -> Result<Kind, FormatError> {
    #[derive(Deserialize)]
    struct Head {
        kind: Kind,
    }
    let h: Head = decode(text)?;
    Ok(h.kind)
}

pub fn parse(text: &str) -> Result<Document, FormatError> {
    Ok(match peek_kind(text)? {
        Kind::Category => Document::Category(parse_category(text)?),
        Kind::Presheaf => Document::Presheaf(parse_presheaf(text)?),
        Kind::Natmap => Document::NatMap(parse_natmap(text)?),
        Kind::Reedy => Document::Reedy(parse_reedy(text)?),
        Kind::Universe => Document::Universe(parse_universe(text)?),
    })
}

pub fn print(doc: &Document) -> String {
    match doc {
        Document::Category(c) => print_category(c),
        Document::Presheaf(p) => print_presheaf(&p.site, &p.value),
        Document::NatMap(f) => print_natmap(&f.site, &f.value),
        Document::Reedy(r) => print_reedy(r),
        Document::Universe(u) => print_universe(u),
    }
}

// categories

pub fn category_body(c: &FiniteCategory) -> CategoryBody {
    let m = c.num_morphisms();
    let mut compose = Vec::new();
    for g in 0..m {
        for f in 0..m {
            if c.is_identity(g) || c.is_identity(f) {
                continue;
            }
            if let Some(h) = c.try_compose(g, f) {
                compose.push([g, f, h]);
            }
        }
    }
    CategoryBody {
        objects: c.object_names().to_vec(),
        morphisms: c.morphisms().to_vec(),
        identities: c.identities().to_vec(),
        compose,
    }
}

/// Builds the category after the range and typing checks, without the laws.
fn build_category(b: &CategoryBody, path: &str) -> Result<FiniteCategory, FormatError> {
    let n = b.objects.len();
    let m = b.morphisms.len();
    for (k, mor) in b.morphisms.iter().enumerate() {
        if mor.dom >= n {
            return err(format!("{path}.morphisms[{k}].dom"), format!("object {} does not exist ({n} objects)", mor.dom));
        }
        if mor.cod >= n {
            return err(format!("{path}.morphisms[{k}].cod"), format!("object {} does not exist ({n} objects)", mor.cod));
        }
    }
    if b.identities.len() != n {
        return err(format!("{path}.identities"), format!("{} entries for {n} objects", b.identities.len()));
    }
    for (c, &id) in b.identities.iter().enumerate() {
        if id >= m || b.morphisms[id].dom != c || b.morphisms[id].cod != c {
            return err(format!("{path}.identities[{c}]"), format!("arrow {id} is not an endo-arrow of object {c}"));
        }
    }
    let is_id = |f: usize| b.identities.contains(&f);
    let mut table = HashMap::new();
    for (k, &[g, f, h]) in b.compose.iter().enumerate() {
        let at = format!("{path}.compose[{k}]");
        if g >= m || f >= m || h >= m {
            return err(at, format!("arrow out of range ({m} arrows)"));
        }
        let (mg, mf, mh) = (&b.morphisms[g], &b.morphisms[f], &b.morphisms[h]);
        if mf.cod != mg.dom {
            return err(at, format!("{} and {} are not composable", mg.name, mf.name));
        }
        if mh.dom != mf.dom || mh.cod != mg.cod {
            return err(at, format!("{} has the wrong type for {} ∘ {}", mh.name, mg.name, mf.name));
        }
        if table.insert((g, f), h).is_some() {
            return err(at, "composite listed twice");
        }
    }
    for f in 0..m {
        table.entry((b.identities[b.morphisms[f].cod], f)).or_insert(f);
        table.entry((f, b.identities[b.morphisms[f].dom])).or_insert(f);
    }
    for g in (0..m).filter(|&g| !is_id(g)) {
        for f in (0..m).filter(|&f| !is_id(f)) {
            if b.morphisms[f].cod == b.morphisms[g].dom && !table.contains_key(&(g, f)) {
                return err(format!("{path}.compose"), format!("missing {} ∘ {}", b.morphisms[g].name, b.morphisms[f].name));
            }
        }
    }
    FiniteCategory::from_table(b.objects.clone(), b.morphisms.clone(), b.identities.clone(), &table)
        .or_else(|e| err(path, e.to_string()))
}

fn load_category(b: &CategoryBody, path: &str) -> Result<FiniteCategory, FormatError> {
    let c = build_category(b, path)?;
    let rep = c.validate();
    if !rep.passed() {
        return err(path, format!("category laws fail: {}", rep.violations.join("; ")));
    }
    Ok(c)
}

pub fn parse_category(text: &str) -> Result<FiniteCategory, FormatError> {
    load_category(&unwrap(text, Kind::Category)?, "body")
}

/// Parses a category checking shapes only, so that the laws can be reported.
pub fn parse_category_unchecked(text: &str) -> Result<FiniteCategory, FormatError> {
    build_category(&unwrap(text, Kind::Category)?, "body")
}

pub fn print_category(c: &FiniteCategory) -> String {
    wrap(Kind::Category, category_body(c))
}

// presheaves and maps

fn tables(p: &Presheaf) -> Tables {
    Tables { sizes: p.sizes().to_vec(), action: p.actions().to_vec() }
}

fn load_site(b: &SiteBody, path: &str) -> Result<Site, FormatError> {
    Ok(Site::new(Arc::new(load_category(&b.base, &format!("{path}.base"))?), b.trunc_dim))
}

fn load_tables(cat: &Arc<FiniteCategory>, t: &Tables, path: &str) -> Result<Presheaf, FormatError> {
    let n = cat.num_objects();
    if t.sizes.len() != n {
        return err(format!("{path}.sizes"), format!("{} entries for {n} objects", t.sizes.len()));
    }
    if t.action.len() != cat.num_morphisms() {
        return err(format!("{path}.action"), format!("{} tables for {} arrows", t.action.len(), cat.num_morphisms()));
    }
    for (f, row) in t.action.iter().enumerate() {
        let (dom, cod) = (cat.dom(f), cat.cod(f));
        if row.len() != t.sizes[cod] {
            return err(format!("{path}.action[{f}]"), format!("{} entries, codomain has {} elements", row.len(), t.sizes[cod]));
        }
        if let Some(k) = row.iter().position(|&x| x >= t.sizes[dom]) {
            return err(format!("{path}.action[{f}][{k}]"), format!("{} is not an element of a level with {}", row[k], t.sizes[dom]));
        }
    }
    Presheaf::new(cat.clone(), t.sizes.clone(), t.action.clone()).or_else(|e| err(format!("{path}.action"), e.to_string()))
}

fn load_components(src: &Presheaf, dst: &Presheaf, comps: &[Vec<usize>], path: &str) -> Result<NatMap, FormatError> {
    if comps.len() != src.sizes().len() {
        return err(path, format!("{} components for {} objects", comps.len(), src.sizes().len()));
    }
    for (o, row) in comps.iter().enumerate() {
        if row.len() != src.size(o) {
            return err(format!("{path}[{o}]"), format!("{} entries, source has {} elements", row.len(), src.size(o)));
        }
        if let Some(k) = row.iter().position(|&x| x >= dst.size(o)) {
            return err(format!("{path}[{o}][{k}]"), format!("{} is not an element of a level with {}", row[k], dst.size(o)));
        }
    }
    NatMap::new(src.clone(), dst.clone(), comps.to_vec()).or_else(|e| err(path, e.to_string()))
}

pub fn parse_presheaf(text: &str) -> Result<Located<Presheaf>, FormatError> {
    let b: PresheafBody = unwrap(text, Kind::Presheaf)?;
    let site = load_site(&b.site, "body.site")?;
    let value = load_tables(&site.indexing(), &b.tables, "body")?;
    Ok(Located { site, value })
}

pub fn print_presheaf(site: &Site, p: &Presheaf) -> String {
    wrap(Kind::Presheaf, PresheafBody { site: site.body(), tables: tables(p) })
}

pub fn parse_natmap(text: &str) -> Result<Located<NatMap>, FormatError> {
    let b: NatMapBody = unwrap(text, Kind::Natmap)?;
    let site = load_site(&b.site, "body.site")?;
    let cat = site.indexing();
    let src = load_tables(&cat, &b.src, "body.src")?;
    let dst = load_tables(&cat, &b.dst, "body.dst")?;
    let value = load_components(&src, &dst, &b.components, "body.components")?;
    Ok(Located { site, value })
}

pub fn print_natmap(site: &Site, f: &NatMap) -> String {
    wrap(Kind::Natmap, NatMapBody { site: site.body(), src: tables(f.src()), dst: tables(f.dst()), components: f.components().to_vec() })
}

// Reedy structures

fn reedy_body(r: &ReedyStructure) -> ReedyBody {
    let cat = r.category();
    ReedyBody {
        category: category_body(cat),
        degree: (0..cat.num_objects()).map(|c| r.degree(c)).collect(),
        plus: (0..cat.num_morphisms()).filter(|&f| r.is_plus(f)).collect(),
        minus: (0..cat.num_morphisms()).filter(|&f| r.is_minus(f)).collect(),
    }
}

/// Parses a Reedy structure checking shapes only; the Reedy axioms are left
/// to [`ReedyStructure::validate`].
pub fn parse_reedy_unchecked(text: &str) -> Result<ReedyStructure, FormatError> {
    let b: ReedyBody = unwrap(text, Kind::Reedy)?;
    let cat = Arc::new(load_category(&b.category, "body.category")?);
    let m = cat.num_morphisms();
    let mask = |ids: &[usize], field: &str| -> Result<Vec<bool>, FormatError> {
        let mut v = vec![false; m];
        for (k, &f) in ids.iter().enumerate() {
            if f >= m {
                return err(format!("body.{field}[{k}]"), format!("arrow {f} does not exist ({m} arrows)"));
            }
            v[f] = true;
        }
        Ok(v)
    };
    let (plus, minus) = (mask(&b.plus, "plus")?, mask(&b.minus, "minus")?);
    if b.degree.len() != cat.num_objects() {
        return err("body.degree", format!("{} entries for {} objects", b.degree.len(), cat.num_objects()));
    }
    ReedyStructure::new(cat, b.degree, plus, minus).or_else(|e| err("body", e.to_string()))
}

pub fn parse_reedy(text: &str) -> Result<ReedyStructure, FormatError> {
    let r = parse_reedy_unchecked(text)?;
    let rep = r.validate();
    if !rep.passed() {
        return err("body", format!("Reedy axioms fail: {}", rep.violations.join("; ")));
    }
    Ok(r)
}

pub fn print_reedy(r: &ReedyStructure) -> String {
    wrap(Kind::Reedy, reedy_body(r))
}

// universe snapshots

pub fn parse_universe(text: &str) -> Result<UniverseSnapshot, FormatError> {
    let b: UniverseBody = unwrap(text, Kind::Universe)?;
    let site = SimplicialSite::sets(TruncationConfig::new(b.trunc_dim));
    let u = load_tables(site.site(), &b.u, "body.u")?;
    let ut = load_tables(site.site(), &b.ut, "body.ut")?;
    let p = load_components(&ut, &u, &b.p, "body.p")?;
    if let Some(o) = (0..u.sizes().len()).find(|&o| (0..u.size(o)).any(|x| p.components()[o].iter().filter(|&&y| y == x).count() >= b.kappa)) {
        return err(format!("body.p[{o}]"), format!("a fiber has at least κ = {} elements", b.kappa));
    }
    Ok(UniverseSnapshot { kappa: b.kappa, fib_range: b.fib_range, site, p })
}

pub fn print_universe(u: &UniverseSnapshot) -> String {
    wrap(
        Kind::Universe,
        UniverseBody {
            kappa: u.kappa,
            trunc_dim: u.site.dim(),
            fib_range: u.fib_range,
            u: tables(u.p.dst()),
            ut: tables(u.p.src()),
            p: u.p.components().to_vec(),
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn category_round_trip() {
        for c in [FiniteCategory::terminal(), FiniteCategory::arrow(), FiniteCategory::delta(2)] {
            let text = print_category(&c);
            let back = parse_category(&text).unwrap();
            assert_eq!(back, c);
            assert_eq!(print_category(&back), text);
        }
    }

    #[test]
    fn dangling_dom_names_the_field() {
        let mut b = category_body(&FiniteCategory::chain(3));
        b.morphisms[3].dom = 7;
        let text = canonical(&Envelope { schema_version: 1, kind: Kind::Category, sha256: None, body: b });
        let e = parse_category(&text).unwrap_err();
        assert_eq!(e.path, "body.morphisms[3].dom");
    }

    #[test]
    fn type_errors_carry_paths() {
        let text = r#"{"schema_version":1,"kind":"category","body":{"objects":["a"],"morphisms":[{"name":"1","dom":"x","cod":0}],"identities":[0],"compose":[]}}"#;
        let e = parse_category(text).unwrap_err();
        assert_eq!(e.path, "body.morphisms[0].dom");
    }

    #[test]
    fn tampered_hash_is_rejected() {
        let text = print_category(&FiniteCategory::arrow()).replace("\"1\"", "\"one\"");
        assert_eq!(parse_category(&text).unwrap_err().path, "sha256");
    }

    #[test]
    fn missing_hash_is_accepted() {
        let body = category_body(&FiniteCategory::arrow());
        let text = canonical(&Envelope { schema_version: 1, kind: Kind::Category, sha256: None, body });
        assert_eq!(parse_category(&text).unwrap(), FiniteCategory::arrow());
    }

    #[test]
    fn wrong_kind() {
        let text = print_category(&FiniteCategory::arrow());
        assert_eq!(parse_presheaf(&text).unwrap_err().path, "kind");
    }

    #[test]
    fn natmap_round_trip_over_a_site() {
        let s = SimplicialSite::sets(TruncationConfig::new(1));
        let (_, i) = s.boundary(0, 1).unwrap();
        let site = Site::of(&s);
        let text = print_natmap(&site, &i);
        let back = parse_natmap(&text).unwrap();
        assert_eq!(back.value, i);
        assert_eq!(print_natmap(&back.site, &back.value), text);
    }

    #[test]
    fn non_natural_components_are_rejected() {
        let s = SimplicialSite::sets(TruncationConfig::new(1));
        let (_, i) = s.boundary(0, 1).unwrap();
        let mut b = NatMapBody { site: Site::of(&s).body(), src: tables(i.src()), dst: tables(i.dst()), components: i.components().to_vec() };
        b.components[0].swap(0, 1);
        b.components[1] = vec![0, 0, 0];
        let text = canonical(&Envelope { schema_version: 1, kind: Kind::Natmap, sha256: None, body: b });
        let e = parse_natmap(&text).unwrap_err();
        assert!(e.path.starts_with("body.components"), "{e}");
    }
}
