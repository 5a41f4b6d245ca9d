//! The `elegant` command tree and its execution.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use elegant_core::category::FiniteCategory;
use elegant_core::equiv::{
    conclusion_range, eq_object, eqlift, has_section, is_weq, iscontr, isequiv, mapping_path, name_of, path_object,
    precondition_range,
};
use elegant_core::fixtures;
use elegant_core::lcc::{local_exp, pi, sigma, Slice};
use elegant_core::limits::{coequalizer, coproduct, equalizer, pullback, pushout, product};
use elegant_core::presheaf::{NatMap, Presheaf};
use elegant_core::reedy::ReedyStructure;
use elegant_core::reedy_extend::{extend_reedy_fibration, verify_extension};
use elegant_core::search::MapSearch;
use elegant_core::simplicial::{LiftingProblem, SimplicialSite, TruncationConfig};
use elegant_core::soa::{boundary_cells, problem_data, saturation_check, SoaState};
use elegant_core::universe::{equivalence_extension, Universe, UniverseConfig, WellOrderedFibration};
use elegant_core::Error;

use crate::format::{self, FormatError, Located, Site, UniverseSnapshot};
use crate::report::{Caps, Status, EXIT_BOUNDS, EXIT_FAIL, EXIT_INVALID, EXIT_PASS};
use crate::suites::{self, SUITES};

pub const DEFAULT_KAPPA: usize = 3;
pub const DEFAULT_REEDY_KAPPA: usize = 4;
pub const DEFAULT_TRUNC_DIM: usize = 1;
pub const DEFAULT_STAGES: usize = 2;

#[derive(Parser, Debug)]
#[command(name = "elegant", version, about = "Finite presheaf toposes, truncated simplicial presheaves and their universes")]
pub struct Cli {
    #[command(flatten)]
    pub opts: Opts,
    #[command(subcommand)]
    pub cmd: Command,
}

#[derive(Args, Clone, Debug, Default)]
pub struct Opts {
    /// Seed for generated instances.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Smallness bound on fibers.
    #[arg(long, global = true)]
    pub kappa: Option<usize>,
    /// Simplicial truncation dimension `N` for constructed sites.
    #[arg(long, global = true)]
    pub trunc_dim: Option<usize>,
    /// Dimensions below `N` excluded from conclusions.
    #[arg(long, global = true)]
    pub reliable_margin: Option<usize>,
    /// Node budget for searches.
    #[arg(long, global = true)]
    pub max_nodes: Option<u64>,
    /// Stages of the small-object argument.
    #[arg(long, global = true)]
    pub max_stages: Option<usize>,
    /// Instances per suite.
    #[arg(long, global = true)]
    pub instances: Option<usize>,
    /// Machine-readable report.
    #[arg(long, global = true)]
    pub json_out: Option<PathBuf>,
    /// File for the resulting document.
    #[arg(long, short = 'o', global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Finite categories.
    #[command(subcommand)]
    Cat(CatCmd),
    /// Presheaves on a finite category.
    #[command(subcommand)]
    Psh(PshCmd),
    /// Truncated simplicial presheaves.
    #[command(subcommand)]
    Sset(SsetCmd),
    /// Reedy structures.
    #[command(subcommand)]
    Reedy(ReedyCmd),
    /// Path objects, contractibility and equivalences.
    #[command(subcommand)]
    Equiv(EquivCmd),
    /// The universe of small fibrations.
    #[command(subcommand)]
    Univ(UnivCmd),
    /// Extending Reedy fibrations along acyclic cofibrations.
    #[command(subcommand, name = "extend-reedy")]
    ExtendReedy(ExtendReedyCmd),
    /// Property suites.
    #[command(subcommand)]
    Props(PropsCmd),
}

#[derive(Subcommand, Debug)]
pub enum CatCmd {
    /// Check the category laws.
    Validate { file: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum LimitShape {
    Product,
    Pullback,
    Equalizer,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ColimitShape {
    Coproduct,
    Pushout,
    Coequalizer,
}

#[derive(Subcommand, Debug)]
pub enum PshCmd {
    /// Product of presheaves, pullback of a cospan or equalizer of a pair.
    Limit {
        #[arg(long, value_enum, default_value = "product")]
        shape: LimitShape,
        files: Vec<PathBuf>,
    },
    /// Coproduct of presheaves, pushout of a span or coequalizer of a pair.
    Colimit {
        #[arg(long, value_enum, default_value = "coproduct")]
        shape: ColimitShape,
        files: Vec<PathBuf>,
    },
    /// Count the natural maps `X -> Y`.
    Hom { x: PathBuf, y: PathBuf },
    /// `Π_f E` for `f: A -> B` and a slice `E -> A`.
    Pi { f: PathBuf, e: PathBuf },
    /// `Σ_f E` for `f: A -> B` and a slice `E -> A`.
    Sigma { f: PathBuf, e: PathBuf },
    /// The exponential `Y^X`.
    Exp { x: PathBuf, y: PathBuf },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ObjectKind {
    Simplex,
    Boundary,
    Horn,
    Points,
    Codiscrete,
    Cyclic,
}

#[derive(Subcommand, Debug)]
pub enum SsetCmd {
    /// A standard simplicial set at `--trunc-dim`.
    Object {
        #[arg(value_enum)]
        kind: ObjectKind,
        n: usize,
        /// Missing face of a horn.
        k: Option<usize>,
    },
    /// `K ⊗ X` for a simplicial set `K`.
    Tensor { k: PathBuf, x: PathBuf },
    /// The path object `E^{Δ¹}` of a slice.
    Cotensor { e: PathBuf },
    /// Solve a lifting square `right ∘ top = bottom ∘ left`.
    Lift { left: PathBuf, right: PathBuf, top: PathBuf, bottom: PathBuf },
    /// Horn lifting through the precondition range.
    Fib { f: PathBuf },
    /// Boundary lifting through the conclusion range.
    AcyclicFib { f: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum ReedyCmd {
    /// Check the Reedy axioms.
    Validate { r: PathBuf },
    /// The latching object `L_c X`.
    Latching { r: PathBuf, x: PathBuf, object: String },
    /// The matching object `M_c X`.
    Matching { r: PathBuf, x: PathBuf, object: String },
    /// Reedy fibration test.
    Fib { r: PathBuf, f: PathBuf },
    /// Reedy cofibration test.
    Cofib { r: PathBuf, f: PathBuf },
    /// The generating acyclic cofibrations at `--trunc-dim`.
    Generators { r: PathBuf },
    /// Split inverse arrows and monic latching maps on sampled presheaves.
    Elegance {
        r: PathBuf,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(Subcommand, Debug)]
pub enum EquivCmd {
    /// The path object of a slice.
    Path { e: PathBuf },
    /// The mapping path factorization of `f: E₁ -> E₂` over the base.
    Mpath { f: PathBuf, e1: PathBuf, e2: PathBuf },
    /// `iscontr_B(E)` and whether it has a section.
    Iscontr { e: PathBuf },
    /// `isequiv_B(f)` and whether it has a section.
    Isequiv { f: PathBuf, e1: PathBuf, e2: PathBuf },
    /// `Eq_B(E₁, E₂)`.
    Eq { e1: PathBuf, e2: PathBuf },
    /// Weak equivalence test for `f: E₁ -> E₂` over the base.
    Weq { f: PathBuf, e1: PathBuf, e2: PathBuf },
    /// Extend a partial lift into `Eq_B(D₁, D₂)` along `i: A ↪ B`.
    Eqlift {
        i: PathBuf,
        v: PathBuf,
        d1: PathBuf,
        d2: PathBuf,
        /// Partial lift `A -> Eq`; searched for when omitted.
        #[arg(long)]
        partial: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum UnivCmd {
    /// Enumerate the universe at `--kappa` and `--trunc-dim`.
    Build,
    /// Classify a small fibration, fibers ordered by element id.
    Classify { p: PathBuf },
    /// Extend a classifying map along `i: A ↪ B` to one for `Q ↠ B`.
    Extend {
        i: PathBuf,
        q: PathBuf,
        /// Classifying map `A -> U`; computed when omitted.
        #[arg(long, requires = "iso")]
        f: Option<PathBuf>,
        /// `i*Q ≅ f*Ũ` over `A`.
        #[arg(long, requires = "f")]
        iso: Option<PathBuf>,
    },
    /// Extend a weak equivalence `w: E₁ -> i*D₂` along `i`.
    EquivExtend { i: PathBuf, d2: PathBuf, e1: PathBuf, w: PathBuf },
    /// Stage 0 of the small-object argument.
    SoaInit,
    /// Run `--max-stages` steps of the small-object argument.
    SoaStep,
    /// Closure of the extension property under pushouts, composites and retracts.
    Saturation,
}

#[derive(Subcommand, Debug)]
pub enum ExtendReedyCmd {
    /// Build `Q ↠ B` with `i*Q ≅ P`.
    Run {
        r: PathBuf,
        i: PathBuf,
        p: PathBuf,
        /// File for the map `P -> Q`.
        #[arg(long)]
        top_out: Option<PathBuf>,
    },
    /// Certify a candidate `top: P -> Q` over `i`.
    Verify { r: PathBuf, i: PathBuf, p: PathBuf, q: PathBuf, top: PathBuf },
}

#[derive(Subcommand, Debug)]
pub enum PropsCmd {
    /// Run a named suite.
    Run { suite: String },
    /// List the suites.
    List,
}

/// Why a command stopped short of a result.
#[derive(Debug)]
pub enum Failure {
    Invalid(String),
    Bounds(String),
    Refuted(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Invalid(_) => EXIT_INVALID,
            Failure::Bounds(_) => EXIT_BOUNDS,
            Failure::Refuted(_) => EXIT_FAIL,
        }
    }

    fn status(&self) -> &'static str {
        match self {
            Failure::Invalid(_) => "invalid",
            Failure::Bounds(_) => "bounds",
            Failure::Refuted(_) => "fail",
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Invalid(m) | Failure::Bounds(m) | Failure::Refuted(m) => m,
        }
    }
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Bounds { .. } => Failure::Bounds(e.to_string()),
            Error::NoLift(_) => Failure::Refuted(e.to_string()),
            _ => Failure::Invalid(e.to_string()),
        }
    }
}

type Res<T> = std::result::Result<T, Failure>;

/// A finished command: verdict, human lines, machine summary and an optional document.
pub struct Output {
    pub status: Status,
    pub lines: Vec<String>,
    pub summary: Value,
    pub document: Option<String>,
}

impl Output {
    fn pass(lines: Vec<String>, summary: Value) -> Self {
        Output { status: Status::Pass, lines, summary, document: None }
    }

    fn verdict(ok: bool, lines: Vec<String>, summary: Value) -> Self {
        Output { status: if ok { Status::Pass } else { Status::Fail }, lines, summary, document: None }
    }

    fn with(mut self, doc: String) -> Self {
        self.document = Some(doc);
        self
    }

    fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => EXIT_PASS,
            Status::Fail => EXIT_FAIL,
            Status::Bounds => EXIT_BOUNDS,
        }
    }
}

fn read(path: &Path) -> Res<String> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn located<T>(what: &str, path: &Path, f: fn(&str) -> Result<Located<T>, FormatError>) -> Res<Located<T>> {
    f(&read(path)?).map_err(|e| Failure::Invalid(format!("{} ({what}): {e}", path.display())))
}

fn presheaf(path: &Path) -> Res<Located<Presheaf>> {
    located("presheaf", path, format::parse_presheaf)
}

fn natmap(path: &Path) -> Res<Located<NatMap>> {
    located("natmap", path, format::parse_natmap)
}

fn reedy(path: &Path) -> Res<ReedyStructure> {
    format::parse_reedy(&read(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn slice(path: &Path) -> Res<(Site, Slice)> {
    let f = natmap(path)?;
    Ok((f.site, Slice::new(f.value)))
}

fn sizes(p: &Presheaf) -> Value {
    json!(p.sizes())
}

struct Ctx<'a> {
    opts: &'a Opts,
}

impl Ctx<'_> {
    fn trunc_dim(&self) -> usize {
        self.opts.trunc_dim.unwrap_or(DEFAULT_TRUNC_DIM)
    }

    fn configure(&self, base: Arc<FiniteCategory>, n: usize) -> SimplicialSite {
        let mut cfg = TruncationConfig::new(n);
        if let Some(m) = self.opts.reliable_margin {
            cfg = cfg.with_margin(m);
        }
        let s = SimplicialSite::new(base, cfg);
        match self.opts.max_nodes {
            Some(m) => s.with_max_nodes(m),
            None => s,
        }
    }

    /// The simplicial site of a loaded document, with the caps applied.
    fn simplicial(&self, site: &Site) -> Res<SimplicialSite> {
        let n = site.trunc_dim().ok_or_else(|| Failure::Invalid("document has no trunc_dim".into()))?;
        Ok(self.configure(site.base.clone(), n))
    }

    fn sets(&self, n: usize) -> SimplicialSite {
        self.configure(Arc::new(FiniteCategory::terminal()), n)
    }

    fn universe(&self, n: usize, default_kappa: usize) -> Res<Universe> {
        let s = self.sets(n);
        let mut config = UniverseConfig::new(self.opts.kappa.unwrap_or(default_kappa), &s);
        if let Some(m) = self.opts.max_nodes {
            config.max_nodes = m;
        }
        Ok(Universe::build(&s, config)?)
    }

    fn max_nodes(&self) -> u64 {
        self.opts.max_nodes.unwrap_or(elegant_core::search::DEFAULT_MAX_NODES)
    }
}

fn object(cat: &FiniteCategory, name: &str) -> Res<usize> {
    cat.object_by_name(name)
        .or_else(|| name.parse().ok().filter(|&c: &usize| c < cat.num_objects()))
        .ok_or_else(|| Failure::Invalid(format!("no object {name:?}")))
}

fn same_site(a: &Site, b: &Site) -> Res<()> {
    if a.base == b.base && a.trunc_dim() == b.trunc_dim() {
        Ok(())
    } else {
        Err(Failure::Invalid("documents live over different sites".into()))
    }
}

fn expect<T>(value: Option<T>, what: &str) -> Res<T> {
    value.ok_or_else(|| Failure::Invalid(what.into()))
}

fn run_cat(cmd: &CatCmd) -> Res<Output> {
    let CatCmd::Validate { file } = cmd;
    let c = format::parse_category_unchecked(&read(file)?)?;
    let rep = c.validate();
    let mut lines = vec![format!("{} objects, {} arrows", c.num_objects(), c.num_morphisms())];
    lines.extend(rep.violations.iter().map(|v| format!("violation: {v}")));
    Ok(Output::verdict(rep.passed(), lines, json!({"objects": c.num_objects(), "morphisms": c.num_morphisms(), "violations": rep.violations})))
}

fn presheaf_out(site: &Site, p: &Presheaf, what: &str) -> Output {
    Output::pass(vec![format!("{what}: sizes {:?}", p.sizes())], json!({"sizes": sizes(p)})).with(format::print_presheaf(site, p))
}

fn slice_out(site: &Site, e: &Slice, what: &str) -> Output {
    Output::pass(
        vec![format!("{what}: total {:?} over {:?}", e.total().sizes(), e.base().sizes())],
        json!({"total": sizes(e.total()), "base": sizes(e.base())}),
    )
    .with(format::print_natmap(site, e.proj()))
}

fn two<T: Clone>(items: &[T], what: &str) -> Res<(T, T)> {
    match items {
        [a, b] => Ok((a.clone(), b.clone())),
        _ => Err(Failure::Invalid(format!("{what} takes exactly two maps"))),
    }
}

fn run_psh(ctx: &Ctx, cmd: &PshCmd) -> Res<Output> {
    match cmd {
        PshCmd::Limit { shape, files } => {
            let (site, apex) = match shape {
                LimitShape::Product => {
                    let ps = files.iter().map(|f| presheaf(f)).collect::<Res<Vec<_>>>()?;
                    let first = expect(ps.first(), "product needs at least one presheaf")?;
                    ps.iter().try_for_each(|p| same_site(&first.site, &p.site))?;
                    let values: Vec<Presheaf> = ps.iter().map(|p| p.value.clone()).collect();
                    (first.site.clone(), product(first.site.indexing(), &values)?.apex)
                }
                LimitShape::Pullback | LimitShape::Equalizer => {
                    let ms = files.iter().map(|f| natmap(f)).collect::<Res<Vec<_>>>()?;
                    let (f, g) = two(&ms, "this shape")?;
                    same_site(&f.site, &g.site)?;
                    let apex = match shape {
                        LimitShape::Pullback => pullback(&f.value, &g.value)?.apex,
                        _ => equalizer(&f.value, &g.value)?.0,
                    };
                    (f.site, apex)
                }
            };
            Ok(presheaf_out(&site, &apex, "limit"))
        }
        PshCmd::Colimit { shape, files } => {
            let (site, apex) = match shape {
                ColimitShape::Coproduct => {
                    let ps = files.iter().map(|f| presheaf(f)).collect::<Res<Vec<_>>>()?;
                    let first = expect(ps.first(), "coproduct needs at least one presheaf")?;
                    ps.iter().try_for_each(|p| same_site(&first.site, &p.site))?;
                    let values: Vec<Presheaf> = ps.iter().map(|p| p.value.clone()).collect();
                    (first.site.clone(), coproduct(first.site.indexing(), &values)?.apex)
                }
                ColimitShape::Pushout | ColimitShape::Coequalizer => {
                    let ms = files.iter().map(|f| natmap(f)).collect::<Res<Vec<_>>>()?;
                    let (f, g) = two(&ms, "this shape")?;
                    same_site(&f.site, &g.site)?;
                    let apex = match shape {
                        ColimitShape::Pushout => pushout(&f.value, &g.value)?.apex,
                        _ => coequalizer(&f.value, &g.value)?.apex,
                    };
                    (f.site, apex)
                }
            };
            Ok(presheaf_out(&site, &apex, "colimit"))
        }
        PshCmd::Hom { x, y } => {
            let (x, y) = (presheaf(x)?, presheaf(y)?);
            same_site(&x.site, &y.site)?;
            let n = MapSearch::new(&x.value, &y.value)?.max_nodes(ctx.max_nodes()).all()?.len();
            Ok(Output::pass(vec![format!("{n} natural maps")], json!({"maps": n})))
        }
        PshCmd::Pi { f, e } => {
            let f = natmap(f)?;
            let (site, e) = slice(e)?;
            same_site(&f.site, &site)?;
            let dp = pi(&f.value, &e)?;
            Ok(slice_out(&site, &dp.slice, "dependent product"))
        }
        PshCmd::Sigma { f, e } => {
            let f = natmap(f)?;
            let (site, e) = slice(e)?;
            same_site(&f.site, &site)?;
            Ok(slice_out(&site, &sigma(&f.value, &e)?, "dependent sum"))
        }
        PshCmd::Exp { x, y } => {
            let (x, y) = (presheaf(x)?, presheaf(y)?);
            same_site(&x.site, &y.site)?;
            let one = Presheaf::terminal(x.site.indexing());
            let over = |p: &Presheaf| Slice::new(NatMap::to_terminal(p).with_ends(p.clone(), one.clone()));
            let exp = local_exp(&over(&x.value), &over(&y.value))?;
            Ok(presheaf_out(&x.site, exp.fun.total(), "exponential"))
        }
    }
}

fn run_sset(ctx: &Ctx, cmd: &SsetCmd) -> Res<Output> {
    match cmd {
        SsetCmd::Object { kind, n, k } => {
            let s = ctx.sets(ctx.opts.trunc_dim.unwrap_or(2));
            let p = match kind {
                ObjectKind::Simplex => s.simplex(*n)?,
                ObjectKind::Boundary => s.boundary(0, *n)?.0,
                ObjectKind::Horn => s.horn(0, *n, expect(*k, "a horn needs k")?)?.0,
                ObjectKind::Points => fixtures::points(&s, *n),
                ObjectKind::Codiscrete => fixtures::codiscrete(&s, *n),
                ObjectKind::Cyclic => fixtures::cyclic_nerve(&s, *n),
            };
            let nd: Vec<usize> = (0..=s.dim()).map(|j| s.nondegenerate(&p, 0, j).len()).collect();
            let mut out = presheaf_out(&Site::of(&s), &p, "object");
            out.lines.push(format!("non-degenerate simplices {nd:?}"));
            out.summary["nondegenerate"] = json!(nd);
            Ok(out)
        }
        SsetCmd::Tensor { k, x } => {
            let (k, x) = (presheaf(k)?, presheaf(x)?);
            let s = ctx.simplicial(&x.site)?;
            Ok(presheaf_out(&x.site, &s.tensor(&k.value, &x.value)?, "tensor"))
        }
        SsetCmd::Cotensor { e } => {
            let (site, e) = slice(e)?;
            let s = ctx.simplicial(&site)?;
            Ok(slice_out(&site, &s.cotensor_interval(&e)?.path, "path object"))
        }
        SsetCmd::Lift { left, right, top, bottom } => {
            let [l, r, t, b] = [left, right, top, bottom].map(|p| natmap(p));
            let (l, r, t, b) = (l?, r?, t?, b?);
            let s = ctx.simplicial(&l.site)?;
            let problem = LiftingProblem::new(l.value, r.value, t.value, b.value)?;
            match s.solve_lift(&problem)? {
                Some(lift) => Ok(Output::pass(vec!["lift found".into()], json!({"lift": true})).with(format::print_natmap(&l.site, &lift))),
                None => Ok(Output::verdict(false, vec!["no lift".into()], json!({"lift": false}))),
            }
        }
        SsetCmd::Fib { f } | SsetCmd::AcyclicFib { f } => {
            let f = natmap(f)?;
            let s = ctx.simplicial(&f.site)?;
            let acyclic = matches!(cmd, SsetCmd::AcyclicFib { .. });
            let (lo, hi) = if acyclic { conclusion_range(&s) } else { precondition_range(&s) };
            let failure = if acyclic { s.acyclic_failure(&f.value, lo, hi)? } else { s.fibration_failure(&f.value, lo, hi)? };
            let what = if acyclic { "acyclic fibration" } else { "fibration" };
            let mut lines = vec![format!("{what} through dimensions {lo}..={hi}: {}", failure.is_none())];
            if let Some(x) = &failure {
                lines.push(format!("no lift at object {}, dimension {}, horn {:?}, element {}", x.c, x.n, x.k, x.b));
            }
            let detail = failure.as_ref().map(|x| json!({"object": x.c, "n": x.n, "k": x.k, "element": x.b}));
            Ok(Output::verdict(failure.is_none(), lines, json!({"range": [lo, hi], "failure": detail})))
        }
    }
}

fn reedy_site(ctx: &Ctx, r: &ReedyStructure, x: &Site) -> Res<SimplicialSite> {
    if x.base.as_ref() != r.category().as_ref() {
        return Err(Failure::Invalid("presheaf base differs from the Reedy category".into()));
    }
    ctx.simplicial(x)
}

fn run_reedy(ctx: &Ctx, cmd: &ReedyCmd) -> Res<Output> {
    match cmd {
        ReedyCmd::Validate { r } => {
            let r = format::parse_reedy_unchecked(&read(r)?)?;
            let rep = r.validate();
            let mut lines = vec![format!("direct {}, inverse {}", rep.direct, rep.inverse)];
            lines.extend(rep.violations.iter().map(|v| format!("violation: {v}")));
            Ok(Output::verdict(rep.passed(), lines, json!({"direct": rep.direct, "inverse": rep.inverse, "violations": rep.violations})))
        }
        ReedyCmd::Latching { r, x, object: name } | ReedyCmd::Matching { r, x, object: name } => {
            let (r, x) = (reedy(r)?, presheaf(x)?);
            let s = reedy_site(ctx, &r, &x.site)?;
            let c = object(r.category(), name)?;
            let (obj, what) = match cmd {
                ReedyCmd::Latching { .. } => (r.latching(&s, &x.value, c)?.object, "latching object"),
                _ => (r.matching(&s, &x.value, c)?.object, "matching object"),
            };
            let sets = Site::of(&s.sset_site());
            Ok(presheaf_out(&sets, &obj, what))
        }
        ReedyCmd::Fib { r, f } => {
            let (r, f) = (reedy(r)?, natmap(f)?);
            let s = reedy_site(ctx, &r, &f.site)?;
            let (lo, hi) = precondition_range(&s);
            let bad = r.fibration_failure(&s, &f.value, lo, hi)?;
            let lines = vec![match bad {
                None => "Reedy fibration".to_string(),
                Some(c) => format!("relative matching map at {} is not a fibration", r.category().object_name(c)),
            }];
            Ok(Output::verdict(bad.is_none(), lines, json!({"failing_object": bad})))
        }
        ReedyCmd::Cofib { r, f } => {
            let (r, f) = (reedy(r)?, natmap(f)?);
            let s = reedy_site(ctx, &r, &f.site)?;
            let bad = r.cofibration_failure(&s, &f.value)?;
            let lines = vec![match bad {
                None => "Reedy cofibration".to_string(),
                Some(c) => format!("relative latching map at {} is not monic", r.category().object_name(c)),
            }];
            Ok(Output::verdict(bad.is_none(), lines, json!({"failing_object": bad})))
        }
        ReedyCmd::Generators { r } => {
            let r = reedy(r)?;
            let s = ctx.configure(r.category().clone(), ctx.trunc_dim());
            let gens = r.generating_acyclic_cofibrations(&s, 1, s.dim())?;
            let rows: Vec<Value> = gens
                .iter()
                .map(|g| json!({"object": g.c, "n": g.n, "k": g.k, "src": sizes(g.map.src()), "dst": sizes(g.map.dst())}))
                .collect();
            let lines = gens.iter().map(|g| format!("({}, {}, {}): {:?} -> {:?}", r.category().object_name(g.c), g.n, g.k, g.map.src().sizes(), g.map.dst().sizes())).collect();
            Ok(Output::pass(lines, json!({"generators": rows})))
        }
        ReedyCmd::Elegance { r, samples } => {
            let r = format::parse_reedy_unchecked(&read(r)?)?;
            let s = ctx.configure(r.category().clone(), ctx.trunc_dim());
            let rep = r.elegance_evidence(&s, *samples, ctx.opts.seed)?;
            let mut lines = vec![format!("{} samples", rep.samples)];
            if let Some(a) = &rep.non_split {
                lines.push(format!("inverse arrow without a section: {a}"));
            }
            if let Some((k, c)) = rep.non_mono_latching {
                lines.push(format!("sample {k}: latching map at {} is not monic", r.category().object_name(c)));
            }
            Ok(Output::verdict(rep.passed(), lines, json!({"samples": rep.samples, "non_split": rep.non_split, "non_mono_latching": rep.non_mono_latching})))
        }
    }
}

fn over_same_base(sites: &[&Site]) -> Res<()> {
    sites.windows(2).try_for_each(|w| same_site(w[0], w[1]))
}

fn run_equiv(ctx: &Ctx, cmd: &EquivCmd) -> Res<Output> {
    match cmd {
        EquivCmd::Path { e } => {
            let (site, e) = slice(e)?;
            let s = ctx.simplicial(&site)?;
            Ok(slice_out(&site, &path_object(&s, &e)?.path, "path object"))
        }
        EquivCmd::Mpath { f, e1, e2 } => {
            let (f, (s1, e1), (s2, e2)) = (natmap(f)?, slice(e1)?, slice(e2)?);
            over_same_base(&[&f.site, &s1, &s2])?;
            let s = ctx.simplicial(&s1)?;
            let pf = mapping_path(&s, &f.value, &e1, &e2)?;
            let p = Slice::new(pf.p.clone());
            let mut out = slice_out(&s1, &p, "mapping path fibration");
            out.lines.push(format!("P_B f sizes {:?}", pf.total().sizes()));
            Ok(out)
        }
        EquivCmd::Iscontr { e } => {
            let (site, e) = slice(e)?;
            let s = ctx.simplicial(&site)?;
            let c = iscontr(&s, &e)?;
            let sect = has_section(&s, &c.slice)?;
            let mut out = slice_out(&site, &c.slice, "iscontr");
            out.lines.push(format!("section: {sect}"));
            out.summary["section"] = json!(sect);
            Ok(out)
        }
        EquivCmd::Isequiv { f, e1, e2 } => {
            let (f, (s1, e1), (s2, e2)) = (natmap(f)?, slice(e1)?, slice(e2)?);
            over_same_base(&[&f.site, &s1, &s2])?;
            let s = ctx.simplicial(&s1)?;
            let ie = isequiv(&s, &f.value, &e1, &e2)?;
            let sect = has_section(&s, &ie.slice.slice)?;
            let mut out = slice_out(&s1, &ie.slice.slice, "isequiv");
            out.lines.push(format!("section: {sect}"));
            out.summary["section"] = json!(sect);
            Ok(out)
        }
        EquivCmd::Eq { e1, e2 } => {
            let ((s1, e1), (s2, e2)) = (slice(e1)?, slice(e2)?);
            same_site(&s1, &s2)?;
            let s = ctx.simplicial(&s1)?;
            Ok(slice_out(&s1, &eq_object(&s, &e1, &e2)?.slice, "Eq"))
        }
        EquivCmd::Weq { f, e1, e2 } => {
            let (f, (s1, e1), (s2, e2)) = (natmap(f)?, slice(e1)?, slice(e2)?);
            over_same_base(&[&f.site, &s1, &s2])?;
            let s = ctx.simplicial(&s1)?;
            let w = is_weq(&s, &f.value, &e1, &e2)?;
            Ok(Output::verdict(w, vec![format!("weak equivalence: {w}")], json!({"weq": w})))
        }
        EquivCmd::Eqlift { i, v, d1, d2, partial } => {
            let (i, v, (s1, d1), (s2, d2)) = (natmap(i)?, natmap(v)?, slice(d1)?, slice(d2)?);
            over_same_base(&[&i.site, &v.site, &s1, &s2])?;
            let s = ctx.simplicial(&s1)?;
            let eq = eq_object(&s, &d1, &d2)?;
            let partial = match partial {
                Some(p) => natmap(p)?.value,
                None => {
                    let k = name_of(&eq.exp, &v.value)?;
                    let found = MapSearch::new(i.value.src(), eq.slice.total())?.over(&eq.to_fun, &k.after(&i.value)?).max_nodes(ctx.max_nodes()).first()?;
                    found.ok_or_else(|| Failure::Refuted("no partial lift classifies the restriction of v".into()))?
                }
            };
            let lift = eqlift(&s, &i.value, &v.value, &eq, &partial)?;
            Ok(Output::pass(vec![format!("lift into Eq with sizes {:?}", eq.slice.total().sizes())], json!({"eq": sizes(eq.slice.total())})).with(format::print_natmap(&s1, &lift)))
        }
    }
}

fn snapshot_out(u: &UniverseSnapshot, lines: Vec<String>, summary: Value) -> Output {
    Output::pass(lines, summary).with(format::print_universe(u))
}

fn run_univ(ctx: &Ctx, cmd: &UnivCmd) -> Res<Output> {
    match cmd {
        UnivCmd::Build => {
            let u = ctx.universe(ctx.trunc_dim(), DEFAULT_KAPPA)?;
            let lines = vec![format!("κ = {}, N = {}: codes per level {:?}, total space {:?}", u.kappa(), u.site().dim(), u.u().sizes(), u.ut().sizes())];
            let summary = json!({"kappa": u.kappa(), "trunc_dim": u.site().dim(), "codes": sizes(u.u()), "total": sizes(u.ut())});
            Ok(snapshot_out(&UniverseSnapshot::of(&u), lines, summary))
        }
        UnivCmd::Classify { p } => {
            let (site, e) = slice(p)?;
            let s = ctx.simplicial(&site)?;
            let u = ctx.universe(s.dim(), DEFAULT_KAPPA)?;
            let c = u.classify(&WellOrderedFibration::by_id(e))?;
            let usite = Site::of(u.site());
            Ok(Output::pass(vec![format!("classifying map into U with codes {:?}", c.chi.components())], json!({"chi": c.chi.components()})).with(format::print_natmap(&usite, &c.chi)))
        }
        UnivCmd::Extend { i, q, f, iso } => {
            let (i, (sq, q)) = (natmap(i)?, slice(q)?);
            same_site(&i.site, &sq)?;
            let s = ctx.simplicial(&sq)?;
            let u = ctx.universe(s.dim(), DEFAULT_KAPPA)?;
            let (f, iso) = match (f, iso) {
                (Some(f), Some(iso)) => (natmap(f)?.value, natmap(iso)?.value),
                _ => problem_data(&u, &i.value, &q)?,
            };
            let c = u.extend_classifier(&i.value, &f, &q, &iso)?;
            let restricts = c.chi.after(&i.value)? == f;
            let lines = vec![format!("extension restricts to f: {restricts}")];
            Ok(Output::verdict(restricts, lines, json!({"restricts": restricts, "chi": c.chi.components()})).with(format::print_natmap(&Site::of(u.site()), &c.chi)))
        }
        UnivCmd::EquivExtend { i, d2, e1, w } => {
            let (i, (s2, d2), (s1, e1), w) = (natmap(i)?, slice(d2)?, slice(e1)?, natmap(w)?);
            over_same_base(&[&i.site, &s2, &s1, &w.site])?;
            let s = ctx.simplicial(&s2)?;
            let mut config = UniverseConfig::new(ctx.opts.kappa.unwrap_or(DEFAULT_KAPPA), &s);
            if let Some(m) = ctx.opts.max_nodes {
                config.max_nodes = m;
            }
            let ext = equivalence_extension(&s, &i.value, &d2, &e1, &w.value, &config)?;
            let weq = is_weq(&s, &ext.v, &ext.d1, &d2)?;
            let restricts = ext.restricted_v(&i.value, &d2)? == w.value;
            let lines = vec![format!("D₁ sizes {:?}, v weak equivalence {weq}, i*v = w {restricts}", ext.d1.total().sizes())];
            let summary = json!({"d1": sizes(ext.d1.total()), "weq": weq, "restricts": restricts});
            Ok(Output::verdict(weq && restricts, lines, summary).with(format::print_natmap(&s2, ext.d1.proj())))
        }
        UnivCmd::SoaInit => {
            let u = Arc::new(ctx.universe(ctx.trunc_dim(), DEFAULT_KAPPA)?);
            let state = SoaState::init(u.clone(), boundary_cells(u.site())?);
            let gens: Vec<Value> = state.generators().iter().map(|g| json!({"target": g.target, "src": sizes(g.incl.src())})).collect();
            let lines = vec![format!("{} generating cells, stage 0 empty: {}", gens.len(), state.current().u.is_empty())];
            Ok(Output::pass(lines, json!({"generators": gens, "stage0": sizes(&state.current().u)})))
        }
        UnivCmd::SoaStep => {
            let u = Arc::new(ctx.universe(ctx.trunc_dim(), DEFAULT_KAPPA)?);
            let mut state = SoaState::init(u.clone(), boundary_cells(u.site())?);
            let mut lines = Vec::new();
            let mut rows = Vec::new();
            for alpha in 1..=ctx.opts.max_stages.unwrap_or(DEFAULT_STAGES) {
                state = state.step()?;
                let inv = &state.invariants[alpha - 1];
                lines.push(format!(
                    "stage {alpha}: U {:?}, small fibration {}, mono {}, pullback {}",
                    state.current().u.sizes(),
                    inv.small_fibration,
                    inv.mono,
                    inv.pullback
                ));
                rows.push(json!({"stage": alpha, "u": sizes(&state.current().u), "small_fibration": inv.small_fibration, "mono": inv.mono, "pullback": inv.pullback}));
            }
            let (_, colim) = state.colimit_stage()?;
            let ok = state.invariants.iter().chain(&colim).all(|i| i.holds());
            lines.push(format!("colimit: invariants hold {}", colim.iter().all(|i| i.holds())));
            let last = UniverseSnapshot { kappa: u.kappa(), fib_range: u.config().fib_range, site: u.site().clone(), p: state.current().p.clone() };
            Ok(Output::verdict(ok, lines, json!({"stages": rows})).with(format::print_universe(&last)))
        }
        UnivCmd::Saturation => {
            let u = Arc::new(ctx.universe(ctx.trunc_dim(), DEFAULT_KAPPA)?);
            let cases = suites::soa::saturation_cases(u.site(), &u)?;
            let rep = saturation_check(&u, u.as_ref(), &cases);
            let lines = rep.outcomes.iter().enumerate().map(|(k, o)| format!("{k} {}: restricts {}, classifies {} {}", o.kind, o.restricts, o.classifies, o.detail)).collect();
            let rows: Vec<Value> = rep.outcomes.iter().map(|o| json!({"kind": o.kind, "restricts": o.restricts, "classifies": o.classifies})).collect();
            Ok(Output::verdict(rep.passed(), lines, json!({"cases": rows})))
        }
    }
}

fn run_extend_reedy(ctx: &Ctx, cmd: &ExtendReedyCmd) -> Res<Output> {
    match cmd {
        ExtendReedyCmd::Run { r, i, p, top_out } => {
            let (r, i, (sp, p)) = (reedy(r)?, natmap(i)?, slice(p)?);
            same_site(&i.site, &sp)?;
            let s = reedy_site(ctx, &r, &sp)?;
            let u = ctx.universe(s.dim(), DEFAULT_REEDY_KAPPA)?;
            let ext = extend_reedy_fibration(&r, true, &s, &i.value, &p, &u)?;
            let ok = ext.steps.iter().all(|st| st.holds());
            let mut lines = vec![format!("Q sizes {:?}", ext.q.total().sizes())];
            lines.extend(ext.steps.iter().filter(|st| !st.holds()).map(|st| format!("step at {}: {st:?}", r.category().object_name(st.c))));
            if let Some(path) = top_out {
                write(path, &format::print_natmap(&sp, &ext.top))?;
            }
            let steps: Vec<Value> = ext.steps.iter().map(|st| json!({"object": st.c, "holds": st.holds()})).collect();
            Ok(Output::verdict(ok, lines, json!({"q": sizes(ext.q.total()), "steps": steps})).with(format::print_natmap(&sp, ext.q.proj())))
        }
        ExtendReedyCmd::Verify { r, i, p, q, top } => {
            let (r, i, (sp, p), (sq, q), top) = (reedy(r)?, natmap(i)?, slice(p)?, slice(q)?, natmap(top)?);
            over_same_base(&[&i.site, &sp, &sq, &top.site])?;
            let s = reedy_site(ctx, &r, &sp)?;
            let kappa = ctx.opts.kappa.unwrap_or(DEFAULT_REEDY_KAPPA);
            let cert = verify_extension(&r, &s, &i.value, &p, &q, &top.value, kappa, (1, s.dim()))?;
            let lines = vec![
                format!("small {}, Reedy fibration {}, pullback {}", cert.small, cert.reedy_fibration, cert.pullback),
                format!("failing objects {:?}", cert.failing_objects()),
            ];
            let summary = json!({"small": cert.small, "reedy_fibration": cert.reedy_fibration, "pullback": cert.pullback, "failing_objects": cert.failing_objects()});
            Ok(Output::verdict(cert.passed(), lines, summary))
        }
    }
}

fn write(path: &Path, text: &str) -> Res<()> {
    fs::write(path, text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn caps(opts: &Opts) -> Caps {
    Caps {
        kappa: opts.kappa,
        trunc_dim: opts.trunc_dim,
        reliable_margin: opts.reliable_margin,
        max_nodes: opts.max_nodes,
        max_stages: opts.max_stages,
        instances: opts.instances,
    }
}

fn command_name(cmd: &Command) -> String {
    let s = format!("{cmd:?}");
    let mut words = s.split(|c: char| !c.is_alphanumeric()).filter(|w| !w.is_empty());
    let outer = words.next().unwrap_or_default();
    let inner = words.next().unwrap_or_default();
    format!("{} {}", kebab(outer), kebab(inner))
}

fn kebab(s: &str) -> String {
    let mut out = String::new();
    for (k, ch) in s.chars().enumerate() {
        if ch.is_uppercase() && k > 0 {
            out.push('-');
        }
        out.extend(ch.to_lowercase());
    }
    out
}

#[derive(Serialize)]
struct CommandReport<'a> {
    command: &'a str,
    seed: u64,
    caps: Caps,
    status: &'a str,
    exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    error: Option<&'a str>,
    summary: Value,
}

/// Writes to stdout, ignoring a closed pipe.
fn emit(text: &str) {
    let _ = std::io::stdout().write_all(text.as_bytes());
}

macro_rules! say {
    ($($arg:tt)*) => {
        emit(&format!("{}\n", format_args!($($arg)*)))
    };
}

/// Runs a parsed command line, printing to stdout and writing any files.
/// Returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let opts = &cli.opts;
    if let Command::Props(p) = &cli.cmd {
        return run_props(opts, p);
    }
    let ctx = Ctx { opts };
    let result = match &cli.cmd {
        Command::Cat(c) => run_cat(c),
        Command::Psh(c) => run_psh(&ctx, c),
        Command::Sset(c) => run_sset(&ctx, c),
        Command::Reedy(c) => run_reedy(&ctx, c),
        Command::Equiv(c) => run_equiv(&ctx, c),
        Command::Univ(c) => run_univ(&ctx, c),
        Command::ExtendReedy(c) => run_extend_reedy(&ctx, c),
        Command::Props(_) => unreachable!("handled above"),
    };
    let name = command_name(&cli.cmd);
    let (code, status, error, summary) = match &result {
        Ok(out) => {
            for l in &out.lines {
                say!("{l}");
            }
            let st = serde_json::to_value(out.status).expect("unit variant");
            (out.exit_code(), st.as_str().unwrap_or_default().to_string(), None, out.summary.clone())
        }
        Err(f) => {
            say!("{}: {}", f.status(), f.message());
            (f.exit_code(), f.status().to_string(), Some(f.message()), Value::Null)
        }
    };
    say!("{name}: {status}");
    if let Ok(Output { document: Some(doc), .. }) = &result {
        match &opts.out {
            Some(path) => {
                if let Err(f) = write(path, doc) {
                    eprintln!("{}", f.message());
                    return EXIT_INVALID;
                }
            }
            None => emit(doc),
        }
    }
    if let Some(path) = &opts.json_out {
        let rep = CommandReport { command: &name, seed: opts.seed, caps: caps(opts), status: &status, exit_code: code, error, summary };
        let text = serde_json::to_string_pretty(&rep).expect("plain data") + "\n";
        if let Err(f) = write(path, &text) {
            eprintln!("{}", f.message());
            return EXIT_INVALID;
        }
    }
    code
}

fn run_props(opts: &Opts, cmd: &PropsCmd) -> i32 {
    match cmd {
        PropsCmd::List => {
            for s in SUITES {
                say!("{s}");
            }
            EXIT_PASS
        }
        PropsCmd::Run { suite } => {
            let Some(report) = suites::run_suite(suite, opts.seed, &caps(opts)) else {
                say!("invalid: unknown suite {suite:?}; known suites: {}", SUITES.join(", "));
                return EXIT_INVALID;
            };
            emit(&report.to_string());
            if let Some(path) = &opts.json_out {
                let text = serde_json::to_string_pretty(&report).expect("plain data") + "\n";
                if let Err(f) = write(path, &text) {
                    eprintln!("{}", f.message());
                    return EXIT_INVALID;
                }
            }
            report.exit_code()
        }
    }
}

