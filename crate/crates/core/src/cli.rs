//! Command-line surface: model parsing, the five commands, and report emission.
//!
//! Reports are JSON objects with sorted keys. Exact values are `"p/q"` strings and
//! floating-point fields carry an `_approx` suffix.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::acceptance::{self, Check, Mutation, Num};
use crate::error::{Error, Result};
use crate::exactgeom::{fmt_rational, parse_rational, rat, to_f64, Halfspace, RVector, Rational};
use crate::filtration::{
    fujita_gap, liu_bound_check, logdisc_of, phi, phi_derivative_s0, profile_from_model, theta, theta_integral,
    volume_from_profile, Piece, ProfileShape, VolumeProfile,
};
use crate::quotient::{
    binary_dihedral_12, binary_tetrahedral, check_free_in_codim1, cyclic_group, invariant_dimension_series,
    pair_identity_check, quaternion_group, quotient_min_nvol, quotient_volume, FiniteGroupAction, GroupElement,
};
use crate::reeb::{minimize_nvol, multi_start, MinimizeOptions, MinimizeResult};
use crate::singularities::{
    akm_singularity, canonical_weights, cone_invariants, pow, toric_log_fano, PolarizedConeData, SingularityModel,
    ToricConeSingularity, WeightedHomogeneousHypersurface,
};
use crate::valuation::{evaluate, oracle_volume_estimate, MonomialValuation, ValuationReport};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 2;
pub const EXIT_ERROR: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "hvol", version, about = "Normalized volumes of valuations on cone singularities")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Log discrepancy, volume and normalized volume of one valuation.
    Compute(ComputeArgs),
    /// Minimize the normalized volume over monomial valuations or Reeb vectors.
    Minimize(MinimizeArgs),
    /// Invariant dimension series and minimal normalized volume of C^2/G.
    Quotient(QuotientArgs),
    /// Volume profile, Theta, Phi and the Fujita gap for a pair of valuations.
    Filtration(FiltrationArgs),
    /// Run the acceptance suite.
    Selftest(SelftestArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Include wall-clock timing (makes the report nondeterministic).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args, Debug)]
pub struct ComputeArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Comma-separated weights, integers, `p/q` or decimals.
    #[arg(long)]
    pub valuation: Option<String>,
    /// Cross-check the volume against n! #lattice points / p^n at this level.
    #[arg(long)]
    pub oracle_depth: Option<u64>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct MinimizeArgs {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub init: Option<String>,
    #[arg(long, default_value_t = 1e-8)]
    pub tol: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    /// Number of seeded random starts to add (agreement is checked at 1e-6).
    #[arg(long, default_value_t = 0)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct QuotientArgs {
    /// `{"type":"cyclic","r":7,"a":3}`, `{"type":"elements","eigs":[[p1,q1,p2,q2],...]}`
    /// or `{"type":"named","name":"Q8"|"BD12"|"BT24"}`; a path to such a file also works.
    #[arg(long)]
    pub group: String,
    /// Length of the dimension series.
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Args, Debug)]
pub struct FiltrationArgs {
    #[arg(long, required_unless_present = "profile")]
    pub model: Option<PathBuf>,
    /// Reference valuation; defaults to (1,...,1) on C^n and the canonical weights on A_(k-1)^n.
    #[arg(long)]
    pub v0: Option<String>,
    #[arg(long, required_unless_present = "profile")]
    pub v1: Option<String>,
    /// Import a profile instead: JSON `{n, degH, c1, c2, pieces}` or CSV `t,vol_r` samples.
    #[arg(long, conflicts_with_all = ["model", "v0", "v1"])]
    pub profile: Option<PathBuf>,
    /// Dimension for CSV profiles.
    #[arg(long)]
    pub n: Option<usize>,
    /// `A(v0)` for imported profiles; enables `lambda = auto` and the gap.
    #[arg(long)]
    pub r: Option<String>,
    /// `A(v1)` for imported profiles.
    #[arg(long)]
    pub logdisc_v1: Option<String>,
    /// `auto` for lambda* = A(v0)/A(v1), or a positive number.
    #[arg(long, default_value = "auto")]
    pub lambda: String,
    /// Rows of the CSV table.
    #[arg(long, default_value_t = 400)]
    pub samples: usize,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum MutationArg {
    ProjectiveVolume,
}

#[derive(Args, Debug)]
pub struct SelftestArgs {
    /// Run only criteria whose name, suite or number matches.
    #[arg(long)]
    pub filter: Option<String>,
    /// Inject a known bug to confirm the suite catches it.
    #[arg(long, value_enum)]
    pub mutation: Option<MutationArg>,
    #[command(flatten)]
    pub out: OutputArgs,
}

/// Model descriptor, `{"schema": 1, "type": ..., ...}`.
#[derive(Deserialize, Debug, Clone)]
pub struct ModelFile {
    pub schema: u32,
    #[serde(flatten)]
    pub model: ModelSpec,
}

#[derive(Deserialize, Debug, Clone)]
#[serde(untagged)]
pub enum RationalSpec {
    Int(i64),
    Text(String),
}

impl RationalSpec {
    fn value(&self) -> Result<Rational> {
        match self {
            RationalSpec::Int(i) => Ok(rat(*i)),
            RationalSpec::Text(s) => parse_rational(s),
        }
    }
}

#[derive(Deserialize, Debug, Clone)]
pub struct FacetSpec {
    pub normal: Vec<i64>,
    pub offset: RationalSpec,
}

#[derive(Deserialize, Debug, Clone)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ModelSpec {
    ToricCone { rays: Vec<Vec<i64>> },
    Hypersurface { n: usize, monomials: Vec<Vec<u32>> },
    Akm { n: usize, k: u32 },
    PolarizedCone { n: usize, r: RationalSpec, #[serde(rename = "degH")] deg_h: RationalSpec },
    ToricLogFano { facets: Vec<FacetSpec>, r: RationalSpec },
}

pub enum Model {
    Singularity { model: SingularityModel, default_v0: Option<RVector> },
    Polarized(PolarizedConeData),
    LogFano { facets: Vec<Halfspace>, r: Rational },
}

pub fn parse_model(text: &str) -> Result<Model> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    if file.schema != 1 {
        return Err(Error::Schema(format!("unsupported schema version {}", file.schema)));
    }
    match file.model {
        ModelSpec::ToricCone { rays } => {
            let rays: Vec<&[i64]> = rays.iter().map(Vec::as_slice).collect();
            let t = ToricConeSingularity::from_int_rays(&rays)?;
            let default_v0 = (t.sigma == ToricConeSingularity::affine_space(t.n).sigma).then(|| RVector(vec![rat(1); t.n]));
            Ok(Model::Singularity { model: SingularityModel::Toric(t), default_v0 })
        }
        ModelSpec::Hypersurface { n, monomials } => {
            if monomials.iter().any(|m| m.len() != n + 1) {
                return Err(Error::Schema(format!("hypersurface of dimension {n} needs exponent vectors of length {}", n + 1)));
            }
            let h = WeightedHomogeneousHypersurface::new(monomials, "hypersurface")?;
            Ok(Model::Singularity { model: SingularityModel::Hypersurface(h), default_v0: None })
        }
        ModelSpec::Akm { n, k } => {
            let h = akm_singularity(n, k)?;
            let v0 = canonical_weights(n, k)?.weights;
            Ok(Model::Singularity { model: SingularityModel::Hypersurface(h), default_v0: Some(v0) })
        }
        ModelSpec::PolarizedCone { n, r, deg_h } => Ok(Model::Polarized(PolarizedConeData::new(n, r.value()?, deg_h.value()?)?)),
        ModelSpec::ToricLogFano { facets, r } => {
            let facets = facets
                .iter()
                .map(|f| Ok(Halfspace::new(RVector::from_ints(&f.normal), f.offset.value()?)))
                .collect::<Result<Vec<_>>>()?;
            Ok(Model::LogFano { facets, r: r.value()? })
        }
    }
}

fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn singularity(model: Model) -> Result<(SingularityModel, Option<RVector>)> {
    match model {
        Model::Singularity { model, default_v0 } => Ok((model, default_v0)),
        _ => Err(Error::Schema("this command needs a toric_cone, hypersurface or akm model".into())),
    }
}

pub fn parse_weights(s: &str) -> Result<RVector> {
    let parts = s
        .split(',')
        .map(|t| {
            let t = t.trim();
            match parse_rational(t) {
                Ok(q) => Ok(q),
                Err(_) => {
                    let x: f64 = t.parse().map_err(|_| Error::Schema(format!("cannot parse weight {t:?}")))?;
                    crate::exactgeom::rational::from_f64(x)
                }
            }
        })
        .collect::<Result<Vec<_>>>()?;
    if parts.is_empty() {
        return Err(Error::Schema("empty weight list".into()));
    }
    Ok(RVector(parts))
}

fn q(x: &Rational) -> Value {
    Value::String(fmt_rational(x))
}

fn qv(v: &RVector) -> Value {
    Value::Array(v.iter().map(q).collect())
}

fn num(n: &Num) -> Value {
    match n {
        Num::Exact(x) => q(x),
        Num::Approx(x) => json!(x),
    }
}

fn check_json(c: &Check) -> Value {
    json!({"name": c.name, "pass": c.pass, "lhs": num(&c.lhs), "rhs": num(&c.rhs), "tolerance": c.tolerance})
}

/// A report plus an optional CSV table.
pub struct Report {
    pub command: &'static str,
    pub inputs: Value,
    pub results: Value,
    pub checks: Vec<Check>,
    pub table: Option<(Vec<String>, Vec<Vec<String>>)>,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn to_json(&self, seconds: Option<f64>) -> Value {
        let mut m = BTreeMap::new();
        m.insert("command", json!(self.command));
        m.insert("inputs", self.inputs.clone());
        m.insert("results", self.results.clone());
        m.insert("checks", Value::Array(self.checks.iter().map(check_json).collect()));
        m.insert("pass", json!(self.pass()));
        if let Some(s) = seconds {
            m.insert("timing", json!({"seconds_approx": s}));
        }
        json!(m)
    }

    pub fn to_csv(&self) -> String {
        let (header, rows) = match &self.table {
            Some(t) => t.clone(),
            None => (
                ["name", "pass", "lhs", "rhs", "tolerance"].map(String::from).to_vec(),
                self.checks
                    .iter()
                    .map(|c| vec![c.name.replace(',', ";"), c.pass.to_string(), c.lhs.to_string(), c.rhs.to_string(), c.tolerance.to_string()])
                    .collect(),
            ),
        };
        let mut out = header.join(",");
        out.push('\n');
        for r in rows {
            out.push_str(&r.join(","));
            out.push('\n');
        }
        out
    }
}

fn valuation_json(r: &ValuationReport) -> Value {
    json!({
        "logdisc": r.logdisc.to_string(),
        "logdisc_approx": r.logdisc.to_f64(),
        "volume": q(&r.volume),
        "volume_approx": to_f64(&r.volume),
        "nvol": r.nvol.to_string(),
        "nvol_approx": r.nvol.to_f64(),
        "nonpositive_logdisc": r.nonpositive_logdisc,
    })
}

fn model_label(m: &SingularityModel) -> String {
    match m {
        SingularityModel::Toric(t) => format!("toric cone, {} rays", t.sigma.rays.len()),
        SingularityModel::Hypersurface(h) => h.label.clone(),
    }
}

pub fn compute(args: &ComputeArgs) -> Result<Report> {
    let model = parse_model(&read_file(&args.model)?)?;
    let mut inputs = json!({"model": args.model.display().to_string()});
    match model {
        Model::Polarized(c) => {
            let inv = cone_invariants(&c)?;
            let results = json!({
                "n": c.n, "r": q(&c.r), "degH": q(&c.deg_h),
                "beta": q(&inv.beta), "antilog_power": q(&inv.antilog_power),
                "fujita_bound": q(&inv.fujita_bound), "nvol_ord_v": q(&inv.nvol_ord_v),
            });
            let checks = vec![Check::exact("(n/(n+1))^n (-K-D)^n = r^n H^(n-1)", inv.fujita_bound, inv.nvol_ord_v)];
            Ok(Report { command: "compute", inputs, results, checks, table: None })
        }
        Model::LogFano { facets, r } => {
            let rep = toric_log_fano(&facets, &r)?;
            let results = json!({
                "n": rep.n, "p_star": qv(&rep.p_star), "gammas": rep.gammas.iter().map(q).collect::<Vec<_>>(),
                "lifted_centroid": qv(&rep.frak_p_star), "s": q(&rep.s),
                "beta_i": rep.beta_i.iter().map(q).collect::<Vec<_>>(), "beta_n": q(&rep.beta_n),
            });
            let checks = vec![
                Check::holds("lifted centroid = n/(n+1)(p*,1)", rep.centroid_identity),
                Check::exact("beta_n = r/n", rep.beta_n.clone(), &r / rat(rep.n as i64)),
                Check::holds("beta_i = gamma_i", rep.beta_gamma_identity),
            ];
            Ok(Report { command: "compute", inputs, results, checks, table: None })
        }
        Model::Singularity { model, default_v0 } => {
            let w = match (&args.valuation, default_v0) {
                (Some(s), _) => parse_weights(s)?,
                (None, Some(v)) => v,
                (None, None) => return Err(Error::Schema("--valuation is required for this model".into())),
            };
            inputs["valuation"] = qv(&w);
            let a = match &model {
                SingularityModel::Toric(_) => MonomialValuation { weights: w },
                SingularityModel::Hypersurface(_) => MonomialValuation::new(w)?,
            };
            let rep = evaluate(&model, &a)?;
            let mut results = valuation_json(&rep);
            results["model"] = json!(model_label(&model));
            results["n"] = json!(model.dim());
            let mut checks = Vec::new();
            if let Some(p) = args.oracle_depth {
                inputs["oracle_depth"] = json!(p);
                let est = oracle_volume_estimate(&model, &a, &rat(p as i64), 500_000_000)?;
                let closed = to_f64(&rep.volume);
                results["oracle_volume_approx"] = json!(est);
                checks.push(Check::at_most("relative lattice-oracle error", (est - closed).abs() / closed, 0.05, 0.0));
            }
            let table = Some((
                ["logdisc", "volume", "nvol", "nvol_approx"].map(String::from).to_vec(),
                vec![vec![rep.logdisc.to_string(), fmt_rational(&rep.volume), rep.nvol.to_string(), rep.nvol.to_f64().to_string()]],
            ));
            Ok(Report { command: "compute", inputs, results, checks, table })
        }
    }
}

fn minimize_json(r: &MinimizeResult) -> Value {
    json!({
        "argmin": qv(&r.argmin),
        "argmin_approx": r.argmin.to_f64(),
        "min_nvol": q(&r.min_nvol_exact),
        "min_nvol_approx": r.min_nvol,
        "iterations": r.iterations,
        "grad_norm_approx": r.grad_norm,
        "converged": r.converged,
        "kink": r.kink,
        "snapped": r.snapped,
    })
}

pub fn minimize(args: &MinimizeArgs) -> Result<Report> {
    let (model, _) = singularity(parse_model(&read_file(&args.model)?)?)?;
    let opts = MinimizeOptions { tol: args.tol, max_iter: args.max_iter };
    let init = match &args.init {
        Some(s) => parse_weights(s)?,
        None => match &model {
            SingularityModel::Toric(t) => t.sigma.rays.iter().fold(RVector::zeros(t.n), |acc, u| &acc + u),
            SingularityModel::Hypersurface(h) => RVector(vec![rat(1); h.nvars]),
        },
    };
    let res = minimize_nvol(&model, &init, &opts)?;
    let mut results = minimize_json(&res);
    results["model"] = json!(model_label(&model));
    let mut checks = vec![Check::holds("converged", res.converged)];
    if args.starts > 0 {
        let ms = multi_start(&model, args.starts, args.seed, &opts, 1e-6)?;
        let first = res.argmin.to_f64();
        let spread = ms
            .runs
            .iter()
            .flat_map(|r| r.argmin.to_f64().into_iter().zip(first.clone()).map(|(a, b)| (a - b).abs()))
            .fold(ms.spread, f64::max);
        results["multi_start"] = json!({"runs": ms.runs.iter().map(minimize_json).collect::<Vec<_>>(), "spread_approx": spread});
        checks.push(Check::at_most("multi-start argmin spread", spread, 0.0, 1e-6));
    }
    let inputs = json!({
        "model": args.model.display().to_string(), "init": qv(&init), "tol": args.tol,
        "max_iter": args.max_iter, "starts": args.starts, "seed": args.seed,
    });
    let header: Vec<String> = (0..init.dim()).map(|i| format!("x{}", i + 1)).chain(["nvol".to_string()]).collect();
    let rows = res.trajectory.iter().map(|(x, f)| x.iter().chain([f]).map(|v| v.to_string()).collect()).collect();
    Ok(Report { command: "minimize", inputs, results, checks, table: Some((header, rows)) })
}

#[derive(Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
enum GroupSpec {
    Cyclic { r: u32, a: i64 },
    Elements { eigs: Vec<[i64; 4]> },
    Named { name: String },
}

pub fn parse_group(text: &str) -> Result<FiniteGroupAction> {
    let spec: GroupSpec = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    match spec {
        GroupSpec::Cyclic { r, a } => cyclic_group(r, a),
        GroupSpec::Elements { eigs } => {
            if eigs.iter().any(|e| e[1] <= 0 || e[3] <= 0) {
                return Err(Error::Schema("eigenvalue denominators must be positive".into()));
            }
            let els = eigs.iter().map(|e| GroupElement::from_fracs(e[0], e[1], e[2], e[3])).collect();
            FiniteGroupAction::new(els, "custom")
        }
        GroupSpec::Named { name } => match name.as_str() {
            "Q8" => Ok(quaternion_group()),
            "BD12" => Ok(binary_dihedral_12()),
            "BT24" => Ok(binary_tetrahedral()),
            other => Err(Error::Schema(format!("unknown group {other:?}"))),
        },
    }
}

pub fn quotient(args: &QuotientArgs) -> Result<Report> {
    let text = if Path::new(&args.group).is_file() { read_file(Path::new(&args.group))? } else { args.group.clone() };
    let g = parse_group(&text)?;
    if !check_free_in_codim1(&g) {
        return Err(Error::PreconditionViolated(format!("{} contains a pseudo-reflection", g.label)));
    }
    let m = args.samples.max(1);
    let series = invariant_dimension_series(&g, m)?;
    let vol = quotient_volume(&g, m)?;
    let nv = quotient_min_nvol(&g)?;
    let order = g.order();
    let mut pair_ok = true;
    let mut k = order;
    while k <= 60 {
        pair_ok &= pair_identity_check(&g, k)?;
        k += order;
    }
    let checks = vec![
        Check::holds("d_m + d_(m+1) = ((m+1)^2 + |G| - 1)/|G| for |G| | m <= 60", pair_ok),
        Check::at_most("|d_M/(M^2/2) - 1/|G||", (vol.estimate - to_f64(&vol.exact)).abs(), 2.0 / m as f64, 0.0),
    ];
    let results = json!({
        "group": g.label, "order": order,
        "min_nvol": q(&nv.min_nvol), "logdisc": q(&nv.logdisc), "volume": q(&nv.volume),
        "volume_estimate_approx": vol.estimate,
        "dims": series.dims,
    });
    let rows = series.dims.iter().enumerate().map(|(i, d)| vec![i.to_string(), d.to_string()]).collect();
    Ok(Report {
        command: "quotient",
        inputs: json!({"group": serde_json::from_str::<Value>(&text).unwrap_or(Value::Null), "samples": m}),
        results,
        checks,
        table: Some((vec!["m".into(), "dim".into()], rows)),
    })
}

fn profile_json(p: &VolumeProfile) -> Value {
    let pieces = match &p.shape {
        ProfileShape::Pieces(ps) => ps
            .iter()
            .map(|pc| json!({"lo": q(&pc.lo), "hi": q(&pc.hi), "coeffs": pc.coeffs.iter().map(q).collect::<Vec<_>>()}))
            .collect(),
        ProfileShape::Table(_) => Vec::new(),
    };
    json!({"n": p.n, "degH": q(&p.deg_h), "c1": q(&p.c1), "c2": q(&p.c2), "pieces": pieces, "vol_v1_approx": p.vol_v1})
}

#[derive(Deserialize)]
struct PieceFile {
    lo: String,
    hi: String,
    coeffs: Vec<String>,
}

#[derive(Deserialize)]
struct ProfileFile {
    n: usize,
    #[serde(rename = "degH")]
    deg_h: String,
    c1: String,
    c2: String,
    pieces: Vec<PieceFile>,
}

/// Reads a profile written by `filtration` (the `results.profile` object) or a `t,vol_r` CSV.
pub fn parse_profile(text: &str, n: Option<usize>) -> Result<VolumeProfile> {
    let mut p = if text.trim_start().starts_with('{') {
        let f: ProfileFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
        let pieces = f
            .pieces
            .iter()
            .map(|pc| {
                Ok(Piece {
                    lo: parse_rational(&pc.lo)?,
                    hi: parse_rational(&pc.hi)?,
                    coeffs: pc.coeffs.iter().map(|c| parse_rational(c)).collect::<Result<_>>()?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let (c1, c2) = (parse_rational(&f.c1)?, parse_rational(&f.c2)?);
        VolumeProfile { n: f.n, deg_h: parse_rational(&f.deg_h)?, c1, c2, shape: ProfileShape::Pieces(pieces), vol_v1: 0.0 }
    } else {
        let n = n.ok_or_else(|| Error::Schema("--n is required for CSV profiles".into()))?;
        let mut rows = Vec::new();
        for line in text.lines().skip(1).filter(|l| !l.trim().is_empty()) {
            let cols: Vec<&str> = line.split(',').collect();
            let parse = |i: usize| -> Result<f64> {
                cols.get(i).and_then(|c| c.trim().parse().ok()).ok_or_else(|| Error::Schema(format!("bad CSV row {line:?}")))
            };
            rows.push((parse(0)?, parse(1)?));
        }
        if rows.len() < 2 || rows.windows(2).any(|w| w[1].0 <= w[0].0) {
            return Err(Error::Schema("CSV profile needs at least two rows with increasing t".into()));
        }
        // keep [c1, c2]: the last row of the initial plateau through the first zero
        let top = rows[0].1;
        let start = rows.iter().rposition(|r| r.1 >= top).unwrap_or(0);
        let end = rows.iter().position(|r| r.1 <= 0.0).unwrap_or(rows.len() - 1).max(start + 1).min(rows.len() - 1);
        let rows: Vec<(f64, f64)> = rows[start..=end].to_vec();
        if rows[0].0 <= 0.0 {
            return Err(Error::Schema("CSV profile must start its decrease at positive t".into()));
        }
        let from = crate::exactgeom::rational::from_f64;
        let (c1, c2) = (from(rows[0].0)?, from(rows[rows.len() - 1].0)?);
        VolumeProfile { n, deg_h: from(rows[0].1)?, c1, c2, shape: ProfileShape::Table(rows), vol_v1: 0.0 }
    };
    if p.n == 0 {
        return Err(Error::Schema("profile dimension must be positive".into()));
    }
    p.validate()?;
    p.vol_v1 = volume_from_profile(&p)?;
    Ok(p)
}

/// A profile with the log discrepancies needed for `lambda*` and the gap, when known.
struct FiltrationInput {
    profile: VolumeProfile,
    /// `vol(v1)` computed independently of the profile.
    vol_v1: Option<f64>,
    r: Option<Rational>,
    a1: Option<Rational>,
    inputs: Value,
}

fn filtration_input(args: &FiltrationArgs) -> Result<FiltrationInput> {
    if let Some(path) = &args.profile {
        let profile = parse_profile(&read_file(path)?, args.n)?;
        let r = args.r.as_deref().map(parse_rational).transpose()?;
        let a1 = args.logdisc_v1.as_deref().map(parse_rational).transpose()?;
        let inputs = json!({"profile": path.display().to_string(), "r": r.as_ref().map(q), "logdisc_v1": a1.as_ref().map(q)});
        return Ok(FiltrationInput { profile, vol_v1: None, r, a1, inputs });
    }
    let path = args.model.as_ref().ok_or_else(|| Error::Schema("--model or --profile is required".into()))?;
    let (model, default_v0) = singularity(parse_model(&read_file(path)?)?)?;
    let w0 = match (&args.v0, default_v0) {
        (Some(s), _) => parse_weights(s)?,
        (None, Some(v)) => v,
        (None, None) => return Err(Error::Schema("--v0 is required for this model".into())),
    };
    let v0 = MonomialValuation { weights: w0 };
    let v1 = MonomialValuation { weights: parse_weights(args.v1.as_deref().unwrap_or_default())? };
    if let SingularityModel::Hypersurface(_) = model {
        if !v0.weights.all_positive() || !v1.weights.all_positive() {
            return Err(Error::DomainError("hypersurface weights must be positive".into()));
        }
    }
    let profile = profile_from_model(&model, &v0, &v1)?;
    let inputs = json!({"model": path.display().to_string(), "v0": qv(&v0.weights), "v1": qv(&v1.weights)});
    Ok(FiltrationInput {
        profile,
        vol_v1: Some(to_f64(&evaluate(&model, &v1)?.volume)),
        r: Some(logdisc_of(&model, &v0)?),
        a1: Some(logdisc_of(&model, &v1)?),
        inputs,
    })
}

pub fn filtration(args: &FiltrationArgs) -> Result<Report> {
    let FiltrationInput { profile: p, vol_v1, r, a1, mut inputs } = filtration_input(args)?;
    let lambda_star = match (&r, &a1) {
        (Some(r), Some(a)) => Some(to_f64(&(r / a))),
        _ => None,
    };
    let lambda = if args.lambda == "auto" {
        lambda_star.ok_or_else(|| Error::Schema("lambda = auto needs --r and --logdisc-v1 for imported profiles".into()))?
    } else {
        args.lambda.parse::<f64>().map_err(|_| Error::Schema(format!("bad --lambda {:?}", args.lambda)))?
    };
    if !(lambda > 0.0) {
        return Err(Error::DomainError("lambda must be positive".into()));
    }
    let n = p.n;
    let nf = n as f64;
    let h = to_f64(&p.deg_h);
    let from_profile = volume_from_profile(&p)?;
    let vol_v1_ref = vol_v1.unwrap_or(from_profile);
    let d = phi_derivative_s0(&p, lambda)?;
    let c1 = to_f64(&p.c1);
    let c2 = to_f64(&p.c2);
    let theta_c1 = theta(&p, c1)?;
    let grid = (0..=20).map(|i| phi(&p, lambda, i as f64 / 20.0)).collect::<Result<Vec<_>>>()?;
    let convexity = grid.windows(3).map(|w| 0.5 * (w[0] + w[2]) - w[1]).fold(f64::INFINITY, f64::min);
    let xs: Vec<f64> = (1..=40).map(|i| c2 * i as f64 / 40.0).collect();
    let mut checks = vec![
        Check { name: "Phi(lambda,0) = H".into(), pass: grid[0] == h, lhs: Num::Approx(grid[0]), rhs: Num::Exact(p.deg_h.clone()), tolerance: 0.0 },
        Check::close("Phi(lambda,1) = lambda^-n vol(v1)", grid[20], vol_v1_ref / lambda.powi(n as i32), 1e-8),
        Check::at_least("midpoint convexity of Phi(lambda,.)", convexity, 0.0, 1e-9),
        Check::at_most("derivative forms agree", d.max_rel_spread(), 0.0, 1e-7),
        Check::close("Theta(c1) = H - c1^n vol(v1)", theta_c1, h - c1.powi(n as i32) * vol_v1_ref, 1e-8),
        Check::close(
            "int vol_r = (n+1)/n int Theta + c1/n Theta(c1)",
            p.vol_r_integral()?,
            (nf + 1.0) / nf * theta_integral(&p)? + c1 / nf * theta_c1,
            1e-8,
        ),
        Check::holds("Liu bound", liu_bound_check(&p, &xs)?),
    ];
    if let Some(v) = vol_v1 {
        checks.insert(4, Check::close("vol(v1) from profile", from_profile, v, 1e-6));
    }
    let mut results = json!({
        "profile": profile_json(&p),
        "lambda_approx": lambda,
        "vol_v1_approx": vol_v1_ref,
        "phi_s_grid_approx": grid,
        "derivative_s0_approx": {"formA": d.form_a, "formB1": d.form_b1, "formB": d.form_b, "formC": d.form_c},
    });
    if let (Some(r), Some(a1), Some(ls)) = (&r, &a1, lambda_star) {
        let delta = r * Rational::new((n as i64 + 1).into(), (n as i64).into());
        let gap = fujita_gap(&p, to_f64(a1), &delta, &p.deg_h)?;
        let d_star = phi_derivative_s0(&p, ls)?;
        checks.push(Check::close("Phi_s(lambda*,0) = n H gap / A", d_star.form_a, nf * h / to_f64(a1) * gap, 1e-7));
        results["lambda_star_approx"] = json!(ls);
        results["logdisc_v0"] = q(r);
        results["logdisc_v1"] = q(a1);
        results["fujita_gap_approx"] = json!(gap);
        results["nvol_lower_bound"] = q(&(pow(r, n) * &p.deg_h));
    }
    let samples = args.samples.max(2);
    let t_max = c2 * 1.25;
    let rows = (0..samples)
        .map(|i| {
            let t = t_max * i as f64 / (samples - 1) as f64;
            Ok(vec![t.to_string(), p.vol_r(t).to_string(), theta(&p, t)?.to_string()])
        })
        .collect::<Result<Vec<_>>>()?;
    inputs["lambda"] = json!(args.lambda);
    inputs["samples"] = json!(samples);
    Ok(Report { command: "filtration", inputs, results, checks, table: Some((vec!["t".into(), "vol_r".into(), "theta".into()], rows)) })
}

pub fn selftest(args: &SelftestArgs) -> Result<Report> {
    let mutation = match args.mutation {
        Some(MutationArg::ProjectiveVolume) => Mutation::ProjectiveVolume,
        None => Mutation::None,
    };
    let reports = acceptance::run(args.filter.as_deref(), mutation);
    if reports.is_empty() {
        return Err(Error::Schema(format!("no criterion matches {:?}", args.filter)));
    }
    let mut checks = Vec::new();
    let mut criteria = Vec::new();
    for r in &reports {
        let mut cs: Vec<Check> = r.checks.clone();
        if let Some(e) = &r.error {
            cs.push(Check { name: format!("error: {e}"), pass: false, lhs: Num::Exact(rat(0)), rhs: Num::Exact(rat(1)), tolerance: 0.0 });
        }
        // runtime is machine-dependent; keep it out of the deterministic report unless asked
        let shown: Vec<&Check> = cs.iter().filter(|c| args.out.timing || c.name != "runtime_seconds").collect();
        criteria.push(json!({
            "id": r.id, "name": r.name, "suite": r.suite, "pass": r.pass(), "checks": shown.len(),
            "failures": shown.iter().filter(|c| !c.pass).map(|c| check_json(c)).collect::<Vec<_>>(),
        }));
        for c in cs {
            checks.push(Check { name: format!("{} {}: {}", r.id, r.name, c.name), ..c });
        }
    }
    let rows = reports
        .iter()
        .map(|r| vec![r.id.to_string(), r.name.to_string(), r.suite.to_string(), r.pass().to_string(), r.checks.len().to_string()])
        .collect();
    Ok(Report {
        command: "selftest",
        inputs: json!({"filter": args.filter, "mutation": args.mutation.map(|_| "projective-volume")}),
        results: json!({"criteria": criteria}),
        checks,
        table: Some((["id", "name", "suite", "pass", "checks"].map(String::from).to_vec(), rows)),
    })
}

fn dispatch(cli: &Cli) -> (Result<Report>, &OutputArgs) {
    match &cli.command {
        Command::Compute(a) => (compute(a), &a.out),
        Command::Minimize(a) => (minimize(a), &a.out),
        Command::Quotient(a) => (quotient(a), &a.out),
        Command::Filtration(a) => (filtration(a), &a.out),
        Command::Selftest(a) => (selftest(a), &a.out),
    }
}

fn emit(text: &str, out: &OutputArgs) -> Result<()> {
    match &out.output {
        Some(path) => std::fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let start = std::time::Instant::now();
    let (report, out) = dispatch(cli);
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            let err = json!({"error": {"code": e.code(), "message": e.to_string()}});
            eprintln!("{}", serde_json::to_string_pretty(&err).expect("serializable"));
            return EXIT_ERROR;
        }
    };
    let seconds = out.timing.then(|| start.elapsed().as_secs_f64());
    let text = match out.format {
        Format::Json => serde_json::to_string_pretty(&report.to_json(seconds)).expect("serializable") + "\n",
        Format::Csv => report.to_csv(),
    };
    if let Err(e) = emit(&text, out) {
        eprintln!("{}", json!({"error": {"code": e.code(), "message": e.to_string()}}));
        return EXIT_ERROR;
    }
    if report.pass() {
        EXIT_PASS
    } else {
        EXIT_CHECK_FAILED
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_schema() {
        assert!(matches!(parse_model(r#"{"type":"akm","n":3,"k":2}"#), Err(Error::Schema(_))));
        assert!(matches!(parse_model(r#"{"schema":2,"type":"akm","n":3,"k":2}"#), Err(Error::Schema(_))));
        assert!(matches!(parse_model(r#"{"schema":1,"type":"blob"}"#), Err(Error::Schema(_))));
        let m = parse_model(r#"{"schema":1,"type":"polarized_cone","n":3,"r":"3/2","degH":2}"#).unwrap();
        assert!(matches!(m, Model::Polarized(c) if c.r == Rational::new(3.into(), 2.into())));
        let bad = parse_model(r#"{"schema":1,"type":"hypersurface","n":2,"monomials":[[2,0],[0,2]]}"#);
        assert!(matches!(bad, Err(Error::Schema(_))));
    }

    #[test]
    fn weights_accept_mixed_notation() {
        let w = parse_weights("1, 3/2, 0.5").unwrap();
        assert_eq!(w, RVector(vec![rat(1), Rational::new(3.into(), 2.into()), Rational::new(1.into(), 2.into())]));
        assert!(parse_weights("1,x").is_err());
    }

    #[test]
    fn group_specs() {
        assert_eq!(parse_group(r#"{"type":"cyclic","r":7,"a":3}"#).unwrap().order(), 7);
        assert_eq!(parse_group(r#"{"type":"named","name":"BT24"}"#).unwrap().order(), 24);
        let g = parse_group(r#"{"type":"elements","eigs":[[0,1,0,1],[1,2,1,2]]}"#).unwrap();
        assert_eq!(g.order(), 2);
        assert!(parse_group(r#"{"type":"elements","eigs":[[1,2,1,2]]}"#).is_err());
    }
}
