//! The `hypercone` command line.
//!
//! Every subcommand prints one report carrying `"schema": 1`, an `anchor`
//! naming the family it belongs to and a `verdict`. The process exits with 0
//! when the verdict is `pass`, 1 when a counterexample was verified and 2 on
//! malformed input or usage errors.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chrono::{iterate_shrink, BasicOpenSpec, ChronInstance};
use crate::cone::{
    catalog_cone_query, lattice_law_suite, CatalogCone, ConeVec, DiscreteCone, LawSuiteConfig,
};
use crate::error::{Error, Result};
use crate::extreal::{parse_rational, rational_serde, ExtNonneg, Rational};
use crate::geometry::{bm_audit, minkowski_sum, ConvexPolygon};
use crate::homext::{
    extend_all, hahn_banach, rk_join_meet, BoundPair, DualVector, Polyhedral, SubwedgeSpec,
};
use crate::hypernorm::{bidual_audit, dual_attain, lp_norm, normalize, shifted_norm_audit, LpTag};
use crate::lorentz::{classify_directed, tri_dual, tri_norm, Detection, RaySequence, TriangleNorm};
use crate::matrix::{matrix_dual_attain, SymMatrix};
use crate::mcp::finite::characterize;
use crate::mcp::{
    check_mcp, pr_project_finite, pr_project_weighted, CatalogFunctional, DualFunctional,
    InfinitePart, MaskTables, McpBudget, McpReport, WeightedFunctionalSpec,
};
use crate::poset::completion::{
    compare_completions_branch, directed_completion_branch, CompletionOptions,
};
use crate::poset::finite::FinitePosetJson;
use crate::poset::{
    compare_completions, dm_completion, fixtures, BranchPoset, FinitePoset, WindowConfig,
};
use crate::suite::{run_suite, CRITERIA};

#[derive(Parser, Debug)]
#[command(
    name = "hypercone",
    version,
    about = "Completions, cones and hyperbolic norms with exact arithmetic"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Random chains, cases or samples to try, where a command samples.
    #[arg(long, global = true)]
    pub budget: Option<usize>,
    /// Numeric tolerance for floating-point comparisons.
    #[arg(long, global = true)]
    pub tol: Option<f64>,
    #[arg(long, global = true, default_value_t = 7)]
    pub seed: u64,
    /// Rescale weights to sum to one.
    #[arg(long, global = true)]
    pub normalize: bool,
    /// Write the report here instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Human,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Directed completion of a branch presentation.
    Complete {
        /// Presentation file, or the name of a built-in fixture.
        #[arg(long, conflicts_with = "fixture")]
        poset: Option<String>,
        #[arg(long)]
        fixture: Option<String>,
        #[arg(long, default_value_t = 4)]
        core: u64,
        #[arg(long, default_value_t = 4)]
        margin: u64,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        /// Add a least element when there is none.
        #[arg(long)]
        enhanced: bool,
        /// Also build the cut completion and the maps between the two.
        #[arg(long)]
        compare: bool,
    },
    /// Dedekind-MacNeille completion of a finite poset.
    Dm {
        #[arg(long)]
        poset: String,
    },
    /// Look for an increasing sequence whose supremum the map fails to respect.
    CheckMcp {
        /// Catalog cone id `a` to `f`.
        #[arg(long, requires = "lam", requires = "eta", conflicts_with = "map")]
        catalog: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        lam: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        eta: Option<String>,
        /// Map description (inline JSON or a file).
        #[arg(long)]
        map: Option<String>,
    },
    /// Greatest supremum-respecting map below the input.
    Project {
        #[arg(long)]
        spec: String,
    },
    /// Randomised lattice and cone laws on `[0, inf]^n`.
    ConeSuite {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        cases: usize,
    },
    /// Join and meet of two pairings at a vector.
    Rk {
        #[arg(long)]
        l1: String,
        #[arg(long)]
        l2: String,
        #[arg(long)]
        v: String,
        /// Weights shared by both pairings; uniform probability weights when absent.
        #[arg(long)]
        mu: Option<String>,
    },
    /// Extend a map given on a subwedge to the whole cone.
    Extend {
        #[arg(long)]
        spec: String,
    },
    /// Extend a linear map below a polyhedral sublinear function.
    HahnBanach {
        #[arg(long)]
        p: String,
        #[arg(long)]
        t: String,
    },
    /// Norm of a nonnegative vector.
    Norm {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        f: String,
    },
    /// Dual attainment and bidual check for a vector.
    NormDual {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        f: String,
    },
    /// Matrix attaining the trace duality for a positive definite matrix.
    MatrixDual {
        #[arg(long, allow_hyphen_values = true)]
        p: String,
        #[arg(long)]
        a: String,
    },
    /// Norms on the time-space triangle and the Minkowski completion.
    Lorentz {
        #[command(subcommand)]
        command: LorentzCommand,
    },
    /// Shrink a basic open set of the chronological topology repeatedly.
    BaireShrink {
        #[arg(long)]
        spec: String,
        #[arg(long, default_value_t = 10)]
        iters: usize,
    },
    /// Minkowski sum of two convex polygons and the area inequality.
    Bm {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Run the acceptance criteria.
    Suite {
        #[arg(long, conflicts_with = "only")]
        all: bool,
        /// Comma-separated criterion ids.
        #[arg(long, value_delimiter = ',')]
        only: Vec<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum LorentzCommand {
    /// Dual norm at a point of the triangle.
    Dual {
        /// Exponent of the norm, at least 1, or `inf`.
        #[arg(long)]
        p: String,
        /// The point `s,y` with `0 <= y <= s`.
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long, default_value_t = 256)]
        grid: usize,
    },
    /// Classify the limit of an increasing sequence in the Minkowski completion.
    Classify {
        #[arg(long)]
        ray: String,
    },
}

/// What a subcommand produced: its family anchor, whether it passed and the payload.
#[derive(Debug, Clone)]
pub struct Report {
    pub anchor: &'static str,
    pub passed: bool,
    pub result: Value,
}

impl Report {
    fn new(anchor: &'static str, passed: bool, result: impl Serialize) -> Result<Self> {
        let result = serde_json::to_value(result).map_err(|e| Error::Input(e.to_string()))?;
        Ok(Report {
            anchor,
            passed,
            result,
        })
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed {
            0
        } else {
            1
        }
    }

    pub fn to_json(&self, command: &str) -> Value {
        json!({
            "schema": 1,
            "anchor": self.anchor,
            "command": command,
            "verdict": if self.passed { "pass" } else { "counterexample" },
            "result": self.result,
        })
    }
}

/// Parse `args` (program name first), run the command and return the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    configure_threads();
    let name = cli.command.name();
    match execute(&cli)
        .and_then(|report| emit(&cli.global, &report.to_json(name)).map(|_| report.exit_code()))
    {
        Ok(code) => code,
        Err(e) => {
            eprintln!("hypercone {name}: {e}");
            2
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("HYPERCONE_THREADS")
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
    {
        // A second call in the same process fails harmlessly.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Complete { .. } => "complete",
            Command::Dm { .. } => "dm",
            Command::CheckMcp { .. } => "check-mcp",
            Command::Project { .. } => "project",
            Command::ConeSuite { .. } => "cone-suite",
            Command::Rk { .. } => "rk",
            Command::Extend { .. } => "extend",
            Command::HahnBanach { .. } => "hahn-banach",
            Command::Norm { .. } => "norm",
            Command::NormDual { .. } => "norm-dual",
            Command::MatrixDual { .. } => "matrix-dual",
            Command::Lorentz {
                command: LorentzCommand::Dual { .. },
            } => "lorentz dual",
            Command::Lorentz {
                command: LorentzCommand::Classify { .. },
            } => "lorentz classify",
            Command::BaireShrink { .. } => "baire-shrink",
            Command::Bm { .. } => "bm",
            Command::Suite { .. } => "suite",
        }
    }
}

/// Run a parsed command without printing anything.
pub fn execute(cli: &Cli) -> Result<Report> {
    let g = &cli.global;
    match &cli.command {
        Command::Complete {
            poset,
            fixture,
            core,
            margin,
            depth,
            enhanced,
            compare,
        } => {
            let poset = match (poset, fixture) {
                (Some(src), _) => read_json::<BranchPoset>(src)?,
                (None, Some(name)) => fixture_by_name(name)?,
                (None, None) => return Err(Error::Input("give --poset or --fixture".into())),
            };
            let window = WindowConfig {
                core: *core,
                margin: *margin,
                depth: *depth,
                ..WindowConfig::default()
            };
            if *compare {
                let cmp = compare_completions_branch(&poset, &window)?;
                Report::new("poset.completion", true, cmp)
            } else {
                let done = directed_completion_branch(
                    &poset,
                    &CompletionOptions {
                        window,
                        enhanced: *enhanced,
                    },
                )?;
                Report::new("poset.completion", true, done)
            }
        }
        Command::Dm { poset } => {
            let p = FinitePoset::from_json(&read_json::<FinitePosetJson>(poset)?)?;
            let dm = dm_completion(&p);
            let cuts: Vec<Vec<usize>> = dm.cuts.iter().map(|c| c.iter().collect()).collect();
            let comparison = compare_completions(&p).ok().map(|c| {
                json!({
                    "ideals": c.ideals.iter().map(|i| i.iter().collect::<Vec<_>>()).collect::<Vec<_>>(),
                    "s": c.s,
                    "t": c.t,
                    "ts_is_identity": c.ts_is_identity,
                    "t_injective": c.t_injective,
                    "non_injectivity_witness": c.non_injectivity_witness,
                })
            });
            let result = json!({
                "elements": p.len(),
                "cuts": cuts,
                "embedding": dm.embedding,
                "is_complete_lattice": dm.lattice.is_complete_lattice(),
                "comparison": comparison,
            });
            Report::new("poset.dm", true, result)
        }
        Command::CheckMcp {
            catalog,
            lam,
            eta,
            map,
        } => {
            let budget = mcp_budget(g);
            match (catalog, map) {
                (Some(id), _) => check_catalog(
                    id,
                    lam.as_deref().unwrap_or("0"),
                    eta.as_deref().unwrap_or("0"),
                    &budget,
                ),
                (None, Some(src)) => {
                    let spec: MapSpec = read_json(src)?;
                    check_map_spec(spec, g, &budget)
                }
                (None, None) => Err(Error::Input("give --catalog or --map".into())),
            }
        }
        Command::Project { spec } => match read_json::<ProjectSpec>(spec)? {
            ProjectSpec::Weighted { mu, w, support } => {
                let cone = build_cone(mu, w.len(), g.normalize)?;
                let spec = WeightedFunctionalSpec::new(cone, w, support)?;
                let proj = pr_project_weighted(&spec, &mcp_budget(g))?;
                let ok = proj.mcp.passed() && proj.below_on_grid && proj.maximal;
                Report::new("mcp.projection", ok, proj)
            }
            ProjectSpec::Finite { src, dst, t } => {
                let src = FinitePoset::from_json(&src)?;
                let dst = FinitePoset::from_json(&dst)?;
                let pr = pr_project_finite(&src, &dst, &t)?;
                Report::new("mcp.projection", pr.agrees(), pr)
            }
        },
        Command::ConeSuite { n, cases } => {
            let cases = g.budget.unwrap_or(*cases);
            let report = lattice_law_suite(&LawSuiteConfig {
                n: *n,
                cases,
                seed: g.seed,
            });
            Report::new("cone.lattice-laws", report.passed(), report)
        }
        Command::Rk { l1, l2, v, mu } => {
            let f1: ConeVec = read_json(l1)?;
            let f2: ConeVec = read_json(l2)?;
            let v: ConeVec = read_json(v)?;
            let mu = mu.as_deref().map(read_json::<Vec<ExtNonneg>>).transpose()?;
            let cone = build_cone(mu, v.len(), g.normalize)?;
            let res = rk_join_meet(
                &DualVector::new(cone.clone(), f1)?,
                &DualVector::new(cone, f2)?,
                &v,
            )?;
            Report::new("homext.riesz-kantorovich", true, res)
        }
        Command::Extend { spec } => {
            let spec: ExtendSpec = read_json(spec)?;
            let n = spec.dim()?;
            let cone = build_cone(spec.mu, n, g.normalize)?;
            let order = spec.order.unwrap_or_else(|| (0..n).collect());
            let bounds = spec.bounds.unwrap_or_else(BoundPair::trivial);
            let sub = SubwedgeSpec {
                generators: spec.generators.generators,
            };
            let ext = extend_all(&cone, &sub, &bounds, &order)?;
            let ok = ext.extends && ext.within_bounds;
            Report::new("homext.extension", ok, ext)
        }
        Command::HahnBanach { p, t } => {
            let p: Polyhedral = read_json(p)?;
            let p = Polyhedral::new(p.forms)?;
            let t: LinearData = read_json(t)?;
            let hb = hahn_banach(&p, &t.basis, &t.values)?;
            let ok = hb.linear && hb.extends && hb.dominated && hb.grid_ok;
            Report::new("homext.hahn-banach", ok, hb)
        }
        Command::Norm { p, f } => {
            let tag: LpTag = p.parse()?;
            let (cone, f) = read_weighted(f, g.normalize)?;
            let value = lp_norm(&cone, &f, &tag)?;
            Report::new(
                "hypernorm.norm",
                true,
                json!({ "p": tag, "mu": weights_json(&cone), "f": f, "value": value.value, "exact": value.exact }),
            )
        }
        Command::NormDual { p, f } => {
            let tag: LpTag = p.parse()?;
            let (cone, f) = read_weighted(f, g.normalize)?;
            let attain = dual_attain(&cone, &f, &tag)?;
            let bidual = bidual_audit(&cone, &f, &tag)?;
            let tol = g.tol.unwrap_or(1e-9);
            let ok = !(attain.gap.abs() > tol);
            Report::new(
                "hypernorm.duality",
                ok,
                json!({ "p": tag, "mu": weights_json(&cone), "attain": attain, "bidual": bidual, "tol": tol }),
            )
        }
        Command::MatrixDual { p, a } => {
            let tag: LpTag = p.parse()?;
            let a: SymMatrix = read_json(a)?;
            let dual = matrix_dual_attain(&a, &tag)?;
            let tol = g.tol.unwrap_or(1e-9);
            let ok = !(dual.gap.abs() > tol);
            Report::new(
                "matrix.trace-duality",
                ok,
                json!({ "dual": dual, "tol": tol }),
            )
        }
        Command::Lorentz {
            command: LorentzCommand::Dual { p, point, grid },
        } => lorentz_dual(p, point, *grid, g),
        Command::Lorentz {
            command: LorentzCommand::Classify { ray },
        } => {
            let seq: RaySequence = read_json(ray)?;
            let det = Detection {
                tol: g.tol.unwrap_or(Detection::default().tol),
                ..Detection::default()
            };
            let class = classify_directed(&seq, &det)?;
            Report::new("lorentz.classifier", true, class)
        }
        Command::BaireShrink { spec, iters } => {
            let spec: ShrinkSpec = read_json(spec)?;
            let dim = spec.open.dim;
            let cone = build_cone(spec.weights, dim, g.normalize)?;
            let tag = match &spec.p {
                Some(p) => p.parse()?,
                None => LpTag::int(1),
            };
            let open = BasicOpenSpec::new(dim, spec.open.lower, spec.open.upper)?;
            let chain = iterate_shrink(&ChronInstance::new(cone, tag), &open, *iters)?;
            Report::new("chrono.baire-shrink", chain.certified(), chain)
        }
        Command::Bm { a, b } => {
            let a: ConvexPolygon = read_json(a)?;
            let b: ConvexPolygon = read_json(b)?;
            let sum = minkowski_sum(&a, &b);
            let verdict = bm_audit(&a, &b);
            Report::new(
                "geometry.brunn-minkowski",
                verdict.holds,
                json!({ "sum": sum, "audit": verdict }),
            )
        }
        Command::Suite { all, only } => {
            let ids: Vec<usize> = if *all || only.is_empty() {
                (1..=CRITERIA).collect()
            } else {
                only.clone()
            };
            let report = run_suite(&ids, g.seed)?;
            Report::new("suite", report.passed, report)
        }
    }
}

fn mcp_budget(g: &GlobalOpts) -> McpBudget {
    McpBudget {
        chains: g.budget.unwrap_or(McpBudget::default().chains),
        seed: g.seed,
        ..McpBudget::default()
    }
}

fn fixture_by_name(name: &str) -> Result<BranchPoset> {
    let name = name.replace('_', "-");
    if let Some(d) = name.strip_prefix("tower-") {
        let d = d
            .parse()
            .map_err(|_| Error::Input(format!("bad tower depth {d:?}")))?;
        return Ok(fixtures::tower(d));
    }
    Ok(match name.as_str() {
        "double-arrow" => fixtures::double_arrow(),
        "split-square" => fixtures::split_square(),
        "linked-fibres" => fixtures::linked_fibres(),
        "four-copies" => fixtures::four_copies(),
        "glued-chains" => fixtures::glued_chains(),
        "naturals" => fixtures::naturals(false),
        "naturals-capped" => fixtures::naturals(true),
        "two-chains-one-top" => fixtures::two_chains_one_top(),
        "chain-with-rival-cap" => fixtures::chain_with_rival_cap(),
        other => return Err(Error::Input(format!("unknown fixture {other:?}"))),
    })
}

/// Inline JSON when the argument parses as JSON, otherwise a file to read.
fn read_value(src: &str) -> Result<Value> {
    let trimmed = src.trim_start();
    let text = if trimmed.starts_with(['{', '[', '"'])
        || serde_json::from_str::<Value>(src).is_ok() && !Path::new(src).exists()
    {
        src.to_string()
    } else {
        fs::read_to_string(src).map_err(|e| Error::Input(format!("cannot read {src}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Error::Input(format!("{src}: {e}")))
}

fn read_json<T: DeserializeOwned>(src: &str) -> Result<T> {
    serde_json::from_value(read_value(src)?).map_err(|e| Error::Input(format!("{src}: {e}")))
}

/// Weights given explicitly, or uniform probability weights.
fn build_cone(mu: Option<Vec<ExtNonneg>>, n: usize, rescale: bool) -> Result<DiscreteCone> {
    let cone = match mu {
        Some(mu) => {
            if mu.len() != n {
                return Err(Error::Dimension {
                    expected: n,
                    found: mu.len(),
                });
            }
            let finite = mu
                .iter()
                .map(|m| {
                    m.finite()
                        .cloned()
                        .ok_or_else(|| Error::Input("weights must be finite".into()))
                })
                .collect::<Result<Vec<Rational>>>()?;
            DiscreteCone::new(finite)?
        }
        None => normalize(&DiscreteCone::uniform(n.max(1))),
    };
    Ok(if rescale { normalize(&cone) } else { cone })
}

fn weights_json(cone: &DiscreteCone) -> Vec<String> {
    cone.weights().iter().map(ToString::to_string).collect()
}

/// A vector given as a bare array or as `{"mu": [...], "v": [...]}`.
#[derive(Deserialize)]
#[serde(untagged)]
enum VecInput {
    Plain(ConeVec),
    Weighted {
        mu: Vec<ExtNonneg>,
        #[serde(alias = "f")]
        v: ConeVec,
    },
}

fn read_weighted(src: &str, rescale: bool) -> Result<(DiscreteCone, ConeVec)> {
    let (mu, v) = match read_json::<VecInput>(src)? {
        VecInput::Plain(v) => (None, v),
        VecInput::Weighted { mu, v } => (Some(mu), v),
    };
    if v.is_empty() {
        return Err(Error::Input("empty vector".into()));
    }
    let cone = build_cone(mu, v.len(), rescale)?;
    Ok((cone, v))
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum MapSpec {
    /// `g -> sum_i mu_i f_i g_i`.
    Dual {
        mu: Option<Vec<ExtNonneg>>,
        f: ConeVec,
    },
    InfinitePart {
        n: usize,
    },
    ShiftedNorm {
        mu: Option<Vec<ExtNonneg>>,
        shift: ConeVec,
        p: String,
    },
    Catalog {
        cone: String,
        lambda: ExtNonneg,
        eta: ExtNonneg,
    },
    /// A map between finite posets, given by the image of each element.
    Finite {
        src: FinitePosetJson,
        dst: FinitePosetJson,
        t: Vec<usize>,
    },
}

#[derive(Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
enum ProjectSpec {
    Weighted {
        mu: Option<Vec<ExtNonneg>>,
        w: ConeVec,
        support: Vec<bool>,
    },
    Finite {
        src: FinitePosetJson,
        dst: FinitePosetJson,
        t: Vec<usize>,
    },
}

#[derive(Deserialize)]
struct ExtendSpec {
    mu: Option<Vec<ExtNonneg>>,
    #[serde(default)]
    dim: Option<usize>,
    #[serde(flatten)]
    generators: SubwedgeSpec,
    bounds: Option<BoundPair>,
    order: Option<Vec<usize>>,
}

impl ExtendSpec {
    fn dim(&self) -> Result<usize> {
        self.dim
            .or_else(|| self.mu.as_ref().map(Vec::len))
            .or_else(|| self.generators.generators.first().map(|g| g.g.len()))
            .ok_or_else(|| {
                Error::Input("cannot tell the dimension: give dim, mu or a generator".into())
            })
    }
}

#[derive(Deserialize)]
struct LinearData {
    #[serde(with = "rational_serde::matrix")]
    basis: Vec<Vec<Rational>>,
    #[serde(with = "rational_serde::vec")]
    values: Vec<Rational>,
}

#[derive(Deserialize)]
struct ShrinkSpec {
    #[serde(alias = "mu")]
    weights: Option<Vec<ExtNonneg>>,
    p: Option<String>,
    #[serde(flatten)]
    open: BasicOpenSpec,
}

fn check_catalog(id: &str, lam: &str, eta: &str, budget: &McpBudget) -> Result<Report> {
    let lambda: ExtNonneg = lam.parse()?;
    let eta: ExtNonneg = eta.parse()?;
    let answer = catalog_cone_query(id, &lambda, &eta)?;
    let has_mcp = answer.has_mcp.ok_or_else(|| {
        Error::Input(format!(
            "({lambda}, {eta}) does not define a functional on cone {id}"
        ))
    })?;
    let cone: CatalogCone = id.parse()?;
    let sampled = if cone.is_extended() {
        Some(check_mcp(
            &CatalogFunctional::new(cone, lambda, eta)?,
            budget,
        )?)
    } else {
        None
    };
    if let Some(r) = &sampled {
        // A sampled counterexample on a pair classified as continuous would be a bug.
        if has_mcp && !r.passed() {
            return Err(Error::Input(format!(
                "sampling found a counterexample the classifier missed: {:?}",
                r.counterexample()
            )));
        }
    }
    Report::new(
        "cone.catalog",
        has_mcp,
        json!({ "answer": answer, "sampled": sampled }),
    )
}

fn mcp_report(r: McpReport) -> Result<Report> {
    Report::new("mcp.check", r.passed(), r)
}

fn check_map_spec(spec: MapSpec, g: &GlobalOpts, budget: &McpBudget) -> Result<Report> {
    match spec {
        MapSpec::Dual { mu, f } => {
            let cone = build_cone(mu, f.len(), g.normalize)?;
            mcp_report(check_mcp(&DualFunctional::new(cone, f)?, budget)?)
        }
        MapSpec::InfinitePart { n } => {
            if n == 0 {
                return Err(Error::Input("n must be positive".into()));
            }
            mcp_report(check_mcp(&InfinitePart::new(n), budget)?)
        }
        MapSpec::ShiftedNorm { mu, shift, p } => {
            let cone = build_cone(mu, shift.len(), g.normalize)?;
            mcp_report(shifted_norm_audit(&cone, &shift, p.parse()?, budget)?)
        }
        MapSpec::Catalog { cone, lambda, eta } => {
            let c: CatalogCone = cone.parse()?;
            mcp_report(check_mcp(&CatalogFunctional::new(c, lambda, eta)?, budget)?)
        }
        MapSpec::Finite { src, dst, t } => {
            let src = FinitePoset::from_json(&src)?;
            let dst = FinitePoset::from_json(&dst)?;
            if t.len() != src.len() {
                return Err(Error::Dimension {
                    expected: src.len(),
                    found: t.len(),
                });
            }
            if let Some(&y) = t.iter().find(|&&y| y >= dst.len()) {
                return Err(Error::Input(format!(
                    "image {y} outside a target of size {}",
                    dst.len()
                )));
            }
            let ch = characterize(&MaskTables::new(&src)?, &MaskTables::new(&dst)?, &t);
            Report::new("mcp.check", ch.sup_preserving, ch)
        }
    }
}

fn lorentz_dual(p: &str, point: &str, grid: usize, g: &GlobalOpts) -> Result<Report> {
    let p = if p.trim() == "inf" {
        f64::INFINITY
    } else {
        parse_rational(p)?.to_f64_checked()?
    };
    let norm = TriangleNorm::lp(p)?;
    let coords: Vec<f64> = point
        .split(',')
        .map(|s| parse_rational(s.trim()).and_then(|r| r.to_f64_checked()))
        .collect::<Result<_>>()?;
    let [s, y] = coords[..] else {
        return Err(Error::Input(format!(
            "expected two coordinates s,y, got {point:?}"
        )));
    };
    let dual = tri_dual(&norm, s, y, grid)?;
    let conjugate = norm.conjugate().map(|c| tri_norm(&c, s, y)).transpose()?;
    let tol = g.tol.unwrap_or(1e-6);
    let gap = conjugate.map(|c| (c - dual).abs());
    let ok = gap.is_none_or(|d| d <= tol * (1.0 + dual.abs()));
    Report::new(
        "lorentz.duality",
        ok,
        json!({ "p": p, "point": [s, y], "dual": dual, "conjugate_norm": conjugate, "gap": gap, "tol": tol }),
    )
}

trait ToF64 {
    fn to_f64_checked(&self) -> Result<f64>;
}

impl ToF64 for Rational {
    fn to_f64_checked(&self) -> Result<f64> {
        use num::ToPrimitive;
        self.to_f64()
            .ok_or_else(|| Error::Input(format!("{self} is out of range")))
    }
}

fn emit(g: &GlobalOpts, report: &Value) -> Result<()> {
    let text = match g.format {
        Format::Json => serde_json::to_string_pretty(report).expect("values serialise") + "\n",
        Format::Csv => to_csv(report)?,
        Format::Human => to_human(report),
    };
    match &g.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Error::Input(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| Error::Input(e.to_string()))
        }
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    let key = |k: &str| {
        if prefix.is_empty() {
            k.to_string()
        } else {
            format!("{prefix}.{k}")
        }
    };
    match v {
        Value::Object(map)
            if map.len() == 2 && map.contains_key("num") && map.contains_key("den") =>
        {
            let fraction = match (&map["num"], &map["den"]) {
                (num, den) if den == 1 => num.to_string(),
                (num, den) => format!("{num}/{den}"),
            };
            rows.push((prefix.to_string(), fraction))
        }
        Value::Object(map) => map.iter().for_each(|(k, x)| flatten(&key(k), x, rows)),
        Value::Array(items) if items.iter().any(|x| x.is_object() || x.is_array()) => items
            .iter()
            .enumerate()
            .for_each(|(i, x)| flatten(&key(&i.to_string()), x, rows)),
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

fn to_csv(report: &Value) -> Result<String> {
    let mut rows = Vec::new();
    flatten("", report, &mut rows);
    let mut w = csv::Writer::from_writer(Vec::new());
    let err = |e: csv::Error| Error::Input(e.to_string());
    w.write_record(["key", "value"]).map_err(err)?;
    for (k, v) in rows {
        w.write_record([k, v]).map_err(err)?;
    }
    String::from_utf8(w.into_inner().map_err(|e| Error::Input(e.to_string()))?)
        .map_err(|e| Error::Input(e.to_string()))
}

fn to_human(report: &Value) -> String {
    let mut out = String::new();
    if let Some(criteria) = report.pointer("/result/criteria").and_then(Value::as_array) {
        for c in criteria {
            let mark = if c["passed"].as_bool() == Some(true) {
                "PASS"
            } else {
                "FAIL"
            };
            out += &format!(
                "[{mark}] {:>2} {}: {}\n",
                c["id"],
                c["name"].as_str().unwrap_or(""),
                c["detail"].as_str().unwrap_or("")
            );
        }
    } else {
        let mut rows = Vec::new();
        flatten("", &report["result"], &mut rows);
        for (k, v) in rows {
            out += &format!("{k}: {v}\n");
        }
    }
    out += &format!(
        "{} ({})\n",
        report["verdict"].as_str().unwrap_or(""),
        report["anchor"].as_str().unwrap_or("")
    );
    out
}
