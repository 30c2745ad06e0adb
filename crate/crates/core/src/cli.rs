//! JSON-driven command-line front end.
//!
//! Every subcommand reads one problem-spec document, runs a solver and
//! writes `report.json` (plus CSV traces where there is an iteration to
//! trace) into the output directory. Exit codes depend only on the
//! report's `status` and `hypotheses_hold` fields:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | converged / pass / certified with hypotheses holding |
//! | 1 | usage error or malformed spec |
//! | 2 | ran, but a sufficient hypothesis failed or the iteration budget ran out |
//! | 3 | diverged, no certificate, empty fixed-point set, or a failed check |

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::applications::{
    solve_inclusion, solve_mvi, suggest_step, ConvexSet, DiffIncProblem, MviProblem, TimeVaryingMap,
};
use crate::cone_order::ConeSpec;
use crate::contraction::{certify, check_uniqueness_condition, default_l_grid, ComparatorFn, ContractionCertificate};
use crate::error::Error;
use crate::metric_space::{check_metric_axioms, MetricKind, MetricSpec, Point};
use crate::setmap::MultiMap;
use crate::solvers::{
    lambda_iterate, picard_selection, stability_experiment, ConvergenceReport, SampleBox, SolverConfig, Status,
};

/// Environment variable overriding `--out`.
pub const OUT_ENV: &str = "CONEFIX_OUT";

#[derive(Debug, Parser)]
#[command(name = "conefix", version, about = "Fixed-point iteration for set-valued weak contractions in cone metric spaces")]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct Common {
    /// Problem-spec JSON file.
    pub spec: PathBuf,
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long = "max-iter")]
    pub max_iter: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Output directory (overridden by CONEFIX_OUT).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scheme {
    Picard,
    Lambda,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the cone-metric axioms on a point sample.
    Axioms(Common),
    /// Fit a weak-contraction certificate (and optionally check uniqueness).
    Certify(Common),
    /// Run a fixed-point iteration from `x0`.
    Solve {
        #[arg(long, value_enum, default_value_t = Scheme::Picard)]
        scheme: Scheme,
        #[command(flatten)]
        common: Common,
    },
    /// Hausdorff distance between fixed-point sets of a perturbed family and its limit.
    Stability(Common),
    /// Differential inclusion by Picard sweeps over Euler trajectories.
    Diffinc(Common),
    /// Multivalued variational inequality by projected iteration.
    Mvi(Common),
}

impl Command {
    pub fn common(&self) -> &Common {
        match self {
            Command::Axioms(c)
            | Command::Certify(c)
            | Command::Stability(c)
            | Command::Diffinc(c)
            | Command::Mvi(c)
            | Command::Solve { common: c, .. } => c,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Axioms(_) => "axioms",
            Command::Certify(_) => "certify",
            Command::Solve { .. } => "solve",
            Command::Stability(_) => "stability",
            Command::Diffinc(_) => "diffinc",
            Command::Mvi(_) => "mvi",
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{location}: {message}")]
    Spec { location: String, message: String },
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Run(#[from] Error),
}

fn field_err(field: &str, message: impl std::fmt::Display) -> CliError {
    CliError::Spec { location: format!("field `{field}`"), message: message.to_string() }
}

fn missing(field: &str) -> CliError {
    field_err(field, "required for this command")
}

/// Where a list of points comes from.
#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PointSource {
    Explicit(Vec<Point>),
    /// `count` points uniform in `[lo, hi]^n`, drawn from the solver seed.
    Random { count: usize, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum PairSource {
    Explicit(Vec<(Point, Point)>),
    Random { count: usize, lo: f64, hi: f64 },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GivenCertificate {
    pub delta: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(default)]
    pub kappa: Option<f64>,
}

/// One problem document. Blocks irrelevant to a command are ignored by it;
/// unknown keys are rejected.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSpec {
    #[serde(default)]
    pub description: Option<String>,
    #[serde(default)]
    pub cone: Option<ConeSpec>,
    #[serde(default)]
    pub metric: Option<MetricKind>,
    #[serde(default)]
    pub map: Option<MultiMap>,
    #[serde(default)]
    pub limit: Option<MultiMap>,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub x0: Option<Point>,
    #[serde(default)]
    pub points: Option<PointSource>,
    #[serde(default)]
    pub pairs: Option<PairSource>,
    #[serde(default)]
    pub l_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub comparator: Option<ComparatorFn>,
    #[serde(default)]
    pub certificate: Option<GivenCertificate>,
    #[serde(default)]
    pub seeds: Option<PointSource>,
    #[serde(default)]
    pub n_list: Option<Vec<u64>>,
    #[serde(default)]
    pub sample_box: Option<SampleBox>,
    #[serde(default)]
    pub rhs: Option<TimeVaryingMap>,
    #[serde(default)]
    pub horizon: Option<f64>,
    #[serde(default)]
    pub grid_size: Option<usize>,
    #[serde(default)]
    pub weight_lambda: Option<f64>,
    #[serde(default)]
    pub operator: Option<MultiMap>,
    #[serde(default)]
    pub constraint: Option<ConvexSet>,
    #[serde(default)]
    pub mu: Option<f64>,
    #[serde(default)]
    pub step_lambda: Option<f64>,
}

/// Parses a spec document, reporting the offending field path and position.
pub fn parse_spec(text: &str, origin: &str) -> Result<ProblemSpec, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Spec {
            location: format!("{origin}:{}:{}: field `{path}`", inner.line(), inner.column()),
            message: inner.to_string(),
        }
    })
}

pub fn load_spec(path: &Path) -> Result<ProblemSpec, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    parse_spec(&text, &path.display().to_string())
}

/// Flag values that win over the spec file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
    pub seed: Option<u64>,
}

impl From<&Common> for Overrides {
    fn from(c: &Common) -> Self {
        Self { tol: c.tol, max_iter: c.max_iter, seed: c.seed }
    }
}

/// What a command produced: the JSON report and any CSV artifacts, by file name.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub report: Value,
    pub files: Vec<(String, String)>,
    pub exit_code: i32,
}

/// Exit code as a function of the report's status alone.
pub fn exit_code_for(report: &Value) -> i32 {
    match report.get("status").and_then(Value::as_str).unwrap_or("") {
        "converged" | "pass" | "certified" => 0,
        "hypothesis_failed" | "max_iter_exceeded" => 2,
        _ => 3,
    }
}

fn status_str(s: Status) -> &'static str {
    match s {
        Status::Converged => "converged",
        Status::MaxIterExceeded => "max_iter_exceeded",
        Status::Diverged => "diverged",
    }
}

/// Seventeen significant digits.
fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

/// CSV trace with header `iter,residual_norm,bound`.
pub fn trace_csv(report: &ConvergenceReport) -> String {
    let mut out = String::from("iter,residual_norm,bound\n");
    for (n, r) in report.residual_norms.iter().enumerate() {
        let bound = report
            .bound_sequence
            .as_ref()
            .and_then(|b| b.get(n))
            .map(|v| fmt_f(*v))
            .unwrap_or_default();
        let _ = writeln!(out, "{n},{},{bound}", fmt_f(*r));
    }
    out
}

fn coords(p: &Option<Point>) -> Value {
    p.as_ref().map(|p| json!(p.coords())).unwrap_or(Value::Null)
}

fn summary(command: &str, r: &ConvergenceReport) -> Value {
    json!({
        "command": command,
        "status": status_str(r.status),
        "fixed_point": coords(&r.fixed_point),
        "sigma": r.sigma,
        "iterations": r.iterations(),
        "final_residual": r.final_residual(),
        "hypotheses_hold": r.hypotheses_hold(),
        "hypothesis_condition": r.hypothesis.as_ref().map(|h| h.condition.clone()),
    })
}

struct Ctx<'a> {
    spec: &'a ProblemSpec,
    cfg: SolverConfig,
}

impl<'a> Ctx<'a> {
    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.cfg.seed)
    }

    fn map(&self, field: &str) -> Result<&'a MultiMap, CliError> {
        let map = match field {
            "operator" => self.spec.operator.as_ref(),
            _ => self.spec.map.as_ref(),
        }
        .ok_or_else(|| missing(field))?;
        map.validate().map_err(|e| field_err(&format!("{field}.params"), e))?;
        Ok(map)
    }

    fn metric(&self, n: usize) -> Result<MetricSpec, CliError> {
        let kind = self.spec.metric.clone().ok_or_else(|| missing("metric"))?;
        let cone = match (&self.spec.cone, &kind) {
            (Some(c), _) => c.clone(),
            (None, MetricKind::Scalar { .. }) => ConeSpec::euclidean(1),
            (None, MetricKind::Componentwise) => ConeSpec::euclidean(n),
        };
        let metric = MetricSpec::new(kind, cone).map_err(|e| field_err("cone.dimension", e))?;
        if let Some(m) = metric.ambient_dim() {
            if m != n {
                return Err(field_err(
                    "cone.dimension",
                    format!("metric is pinned to dimension {m} but the problem lives in R^{n}"),
                ));
            }
        }
        Ok(metric)
    }

    fn x0(&self, n: usize) -> Result<Point, CliError> {
        let x0 = self.spec.x0.clone().ok_or_else(|| missing("x0"))?;
        if x0.dim() != n {
            return Err(field_err("x0", format!("expected {n} coordinates, got {}", x0.dim())));
        }
        Ok(x0)
    }

    fn random_point(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Point {
        Point::from_raw((0..n).map(|_| rng.random_range(lo..hi)).collect())
    }

    fn check_box(field: &str, count: usize, lo: f64, hi: f64) -> Result<(), CliError> {
        if count == 0 || !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(field_err(field, "random source needs count ≥ 1 and finite lo < hi"));
        }
        Ok(())
    }

    fn points(&self, field: &str, src: Option<&PointSource>, n: Option<usize>) -> Result<Vec<Point>, CliError> {
        match src.ok_or_else(|| missing(field))? {
            PointSource::Explicit(pts) => {
                let want = n.or_else(|| pts.first().map(Point::dim));
                if pts.is_empty() {
                    return Err(field_err(field, "point list is empty"));
                }
                if let Some(i) = pts.iter().position(|p| Some(p.dim()) != want) {
                    return Err(field_err(&format!("{field}.explicit[{i}]"), "inconsistent dimension"));
                }
                Ok(pts.clone())
            }
            PointSource::Random { count, lo, hi } => {
                Self::check_box(field, *count, *lo, *hi)?;
                let n = n.ok_or_else(|| field_err(field, "random points need a dimension from another block"))?;
                let mut rng = self.rng();
                Ok((0..*count).map(|_| Self::random_point(&mut rng, n, *lo, *hi)).collect())
            }
        }
    }

    fn pairs(&self, n: usize) -> Result<Vec<(Point, Point)>, CliError> {
        match self.spec.pairs.as_ref().ok_or_else(|| missing("pairs"))? {
            PairSource::Explicit(ps) => {
                if ps.is_empty() {
                    return Err(field_err("pairs", "pair list is empty"));
                }
                if let Some(i) = ps.iter().position(|(x, y)| x.dim() != n || y.dim() != n) {
                    return Err(field_err(&format!("pairs.explicit[{i}]"), format!("expected points in R^{n}")));
                }
                Ok(ps.clone())
            }
            PairSource::Random { count, lo, hi } => {
                Self::check_box("pairs", *count, *lo, *hi)?;
                let mut rng = self.rng();
                Ok((0..*count)
                    .map(|_| {
                        let x = Self::random_point(&mut rng, n, *lo, *hi);
                        let y = Self::random_point(&mut rng, n, *lo, *hi);
                        (x, y)
                    })
                    .collect())
            }
        }
    }

    fn given_certificate(&self, default_kappa: f64) -> Result<Option<ContractionCertificate>, CliError> {
        self.spec
            .certificate
            .as_ref()
            .map(|c| {
                ContractionCertificate::given(c.delta, c.l, c.kappa.unwrap_or(default_kappa))
                    .map_err(|e| field_err("certificate", e))
            })
            .transpose()
    }

    fn positive(&self, field: &str, v: Option<f64>, default: Option<f64>) -> Result<f64, CliError> {
        let v = v.or(default).ok_or_else(|| missing(field))?;
        if !(v > 0.0 && v.is_finite()) {
            return Err(field_err(field, format!("must be positive, got {v}")));
        }
        Ok(v)
    }
}

fn axioms(ctx: &Ctx) -> Result<Outcome, CliError> {
    let n_hint = ctx.spec.map.as_ref().map(MultiMap::dim).or_else(|| ctx.spec.cone.as_ref().map(ConeSpec::dimension));
    let points = ctx.points("points", ctx.spec.points.as_ref(), n_hint)?;
    let metric = ctx.metric(points[0].dim())?;
    let r = check_metric_axioms(&metric, &points).map_err(|e| field_err("points", e))?;
    let report = json!({
        "command": "axioms",
        "status": if r.all_pass() { "pass" } else { "fail" },
        "axioms": r,
    });
    Ok(finish(report, vec![]))
}

fn certify_cmd(ctx: &Ctx) -> Result<Outcome, CliError> {
    let map = ctx.map("map")?;
    let n = map.dim();
    let metric = ctx.metric(n)?;
    let pairs = ctx.pairs(n)?;
    let grid = ctx.spec.l_grid.clone().unwrap_or_else(default_l_grid);
    let uniqueness = match &ctx.spec.comparator {
        Some(phi) => {
            let distinct: Vec<_> = pairs.iter().filter(|(x, y)| x != y).cloned().collect();
            let u = check_uniqueness_condition(map, &metric, phi, &distinct)?;
            json!({"comparator": phi, "holds": u.holds, "violating_pair": u.violating_pair})
        }
        None => Value::Null,
    };
    let report = match certify(map, &metric, &pairs, &grid) {
        Ok(cert) => json!({
            "command": "certify",
            "status": "certified",
            "delta": cert.delta,
            "L": cert.l,
            "kappa": cert.kappa,
            "hypotheses_hold": cert.hypotheses_hold,
            "worst_pair": cert.worst_pair,
            "pairs_used": cert.evidence.len(),
            "note": "sampled certificate: constants are lower bounds valid on the sampled pairs only",
            "uniqueness": uniqueness,
        }),
        Err(Error::NoCertificate { best_delta, best_l, worst_pair }) => {
            eprintln!(
                "no certificate: best delta={best_delta} at L={best_l}; worst pair x={:?} y={:?}",
                worst_pair.0, worst_pair.1
            );
            json!({
                "command": "certify",
                "status": "no_certificate",
                "delta": best_delta,
                "L": best_l,
                "kappa": metric.cone().kappa(),
                "hypotheses_hold": false,
                "worst_pair": [worst_pair.0, worst_pair.1],
                "uniqueness": uniqueness,
            })
        }
        Err(e) => return Err(field_err("pairs", e)),
    };
    Ok(finish(report, vec![]))
}

fn solve_cmd(ctx: &Ctx, scheme: Scheme) -> Result<Outcome, CliError> {
    let map = ctx.map("map")?;
    let n = map.dim();
    let metric = ctx.metric(n)?;
    let x0 = ctx.x0(n)?;
    let (r, cert) = match scheme {
        Scheme::Picard => (picard_selection(map, &metric, &x0, &ctx.cfg)?, ctx.given_certificate(metric.cone().kappa())?),
        Scheme::Lambda => {
            let cert = match ctx.given_certificate(metric.cone().kappa())? {
                Some(c) => c,
                None if ctx.spec.pairs.is_some() => {
                    let grid = ctx.spec.l_grid.clone().unwrap_or_else(default_l_grid);
                    match certify(map, &metric, &ctx.pairs(n)?, &grid) {
                        Ok(c) => c,
                        Err(e @ Error::NoCertificate { .. }) => {
                            eprintln!("{e}");
                            let report = json!({"command": "solve", "scheme": "lambda", "status": "no_certificate"});
                            return Ok(finish(report, vec![]));
                        }
                        Err(e) => return Err(field_err("pairs", e)),
                    }
                }
                None => return Err(field_err("certificate", "lambda scheme needs `certificate` or `pairs`")),
            };
            if !(ctx.cfg.lambda > 0.0) {
                return Err(field_err("solver.lambda", "must be positive"));
            }
            (lambda_iterate(map, &metric, &x0, &cert, &ctx.cfg)?, Some(cert))
        }
    };
    let mut report = summary("solve", &r);
    report["scheme"] = json!(match scheme {
        Scheme::Picard => "picard",
        Scheme::Lambda => "lambda",
    });
    if let Some(c) = cert {
        report["certificate"] = json!({"delta": c.delta, "L": c.l, "kappa": c.kappa, "hypotheses_hold": c.hypotheses_hold});
        if scheme == Scheme::Picard {
            report["hypotheses_hold"] = json!(c.hypotheses_hold);
        }
    }
    Ok(finish(report, vec![("trace.csv".into(), trace_csv(&r))]))
}

fn stability_cmd(ctx: &Ctx) -> Result<Outcome, CliError> {
    let family = ctx.map("map")?;
    if !matches!(family, MultiMap::PerturbedFamily { .. }) {
        return Err(field_err("map.kind", "stability needs a perturbed_family map"));
    }
    let limit = match &ctx.spec.limit {
        Some(l) => {
            l.validate().map_err(|e| field_err("limit.params", e))?;
            l.clone()
        }
        None => family.family_limit()?,
    };
    let n = family.dim();
    let metric = ctx.metric(n)?;
    let seeds = ctx.points("seeds", ctx.spec.seeds.as_ref(), Some(n))?;
    let n_list = ctx.spec.n_list.clone().ok_or_else(|| missing("n_list"))?;
    let sample_box = match &ctx.spec.sample_box {
        Some(b) => b.clone(),
        None => SampleBox::around(&seeds, 64)?,
    };
    let table = match stability_experiment(family, &limit, &metric, &n_list, &seeds, &sample_box, &ctx.cfg) {
        Ok(t) => t,
        Err(Error::EmptyFixedPointSet) => {
            return Ok(finish(json!({"command": "stability", "status": "empty_fixed_point_set"}), vec![]));
        }
        Err(e) => return Err(field_err("n_list", e)),
    };
    let mut csv = String::from("n,sup_perturbation,hausdorff\n");
    for row in &table.rows {
        let _ = writeln!(csv, "{},{},{}", row.n, fmt_f(row.sup_perturbation), fmt_f(row.hausdorff));
    }
    let report = json!({
        "command": "stability",
        "status": if table.non_increasing { "pass" } else { "fail" },
        "rows": table.rows,
        "non_increasing": table.non_increasing,
    });
    Ok(finish(report, vec![("stability.csv".into(), csv)]))
}

fn diffinc_cmd(ctx: &Ctx) -> Result<Outcome, CliError> {
    let rhs = ctx.spec.rhs.clone().ok_or_else(|| missing("rhs"))?;
    rhs.validate().map_err(|e| field_err("rhs", e))?;
    let n = rhs.dim();
    let prob = DiffIncProblem {
        x0: ctx.x0(n)?,
        horizon: ctx.positive("horizon", ctx.spec.horizon, None)?,
        grid_size: ctx.spec.grid_size.ok_or_else(|| missing("grid_size"))?,
        weight_lambda: ctx.positive("weight_lambda", ctx.spec.weight_lambda, Some(1.0))?,
        rhs,
    };
    prob.validate().map_err(|e| field_err("grid_size", e))?;
    let sol = solve_inclusion(&prob, &ctx.cfg)?;
    let t = &sol.trajectory;
    let mut header = vec!["t".to_string()];
    header.extend((1..=n).map(|i| format!("x_{i}")));
    header.extend((1..=n).map(|i| format!("v_{i}")));
    let mut csv = header.join(",") + "\n";
    for (i, time) in t.times.iter().enumerate() {
        let mut cells = vec![fmt_f(*time)];
        cells.extend(t.states[i].coords().iter().map(|v| fmt_f(*v)));
        match t.velocities.get(i) {
            Some(v) => cells.extend(v.coords().iter().map(|c| fmt_f(*c))),
            None => cells.extend(std::iter::repeat_n(String::new(), n)),
        }
        csv.push_str(&cells.join(","));
        csv.push('\n');
    }
    let mut report = summary("diffinc", &sol.report);
    report["sweeps"] = json!(sol.report.iterates.len());
    report["final_state"] = json!(t.states.last().map(|p| p.coords().to_vec()));
    report["feasibility_gap"] = json!(sol.feasibility_gap);
    report["weight_lambda"] = json!(prob.weight_lambda);
    Ok(finish(report, vec![("trace.csv".into(), trace_csv(&sol.report)), ("trajectory.csv".into(), csv)]))
}

fn mvi_cmd(ctx: &Ctx) -> Result<Outcome, CliError> {
    let operator = ctx.map("operator")?.clone();
    let n = operator.dim();
    let constraint = ctx.spec.constraint.clone().ok_or_else(|| missing("constraint"))?;
    constraint.validate().map_err(|e| field_err("constraint", e))?;
    if constraint.dim() != n {
        return Err(field_err("constraint", format!("expected dimension {n}")));
    }
    let kappa = ctx.spec.cone.as_ref().map(ConeSpec::kappa).unwrap_or(1.0);
    let cert = ctx.given_certificate(kappa)?.ok_or_else(|| missing("certificate"))?;
    let mu = ctx.positive("mu", ctx.spec.mu, None)?;
    let mut prob = MviProblem { operator, constraint, mu, step_lambda: 1.0, cert };
    let suggestion = suggest_step(&prob)?;
    prob.step_lambda = match ctx.spec.step_lambda {
        Some(_) => ctx.positive("step_lambda", ctx.spec.step_lambda, None)?,
        None => suggestion.step,
    };
    let x0 = ctx.x0(n)?;
    let r = solve_mvi(&prob, &x0, &ctx.cfg)?;
    let mut report = summary("mvi", &r.report);
    report["sigma_mvi"] = json!(r.sigma_mvi);
    report["step_lambda"] = json!(r.step_lambda);
    report["mu"] = json!(r.mu);
    report["kkt_ok"] = json!(r.kkt_ok);
    report["solution_f"] = coords(&r.solution_f);
    report["monotonicity_violations"] = json!(r.monotonicity_violations);
    report["strict_condition_mu_gt_kappa_delta_plus_l"] = json!(mu > prob.cert.kappa * (prob.cert.delta + prob.cert.l));
    report["step_suggestion"] = json!(suggestion);
    Ok(finish(report, vec![("trace.csv".into(), trace_csv(&r.report))]))
}

/// A run that succeeded without its sufficient hypotheses is reported as
/// `hypothesis_failed`; the underlying outcome moves to `solver_status`.
fn finish(mut report: Value, files: Vec<(String, String)>) -> Outcome {
    let succeeded = matches!(report["status"].as_str(), Some("converged" | "pass" | "certified"));
    if succeeded && report["hypotheses_hold"] == json!(false) {
        report["solver_status"] = report["status"].take();
        report["status"] = json!("hypothesis_failed");
    }
    let exit_code = exit_code_for(&report);
    report["exit_code"] = json!(exit_code);
    Outcome { report, files, exit_code }
}

/// Runs one command on a parsed spec without touching the filesystem.
pub fn execute(command: &Command, spec: &ProblemSpec, overrides: &Overrides) -> Result<Outcome, CliError> {
    let mut cfg = spec.solver.clone();
    if let Some(t) = overrides.tol {
        cfg.tol = t;
    }
    if let Some(m) = overrides.max_iter {
        cfg.max_iter = m;
    }
    if let Some(s) = overrides.seed {
        cfg.seed = s;
    }
    cfg.validate().map_err(|e| field_err("solver", e))?;
    let ctx = Ctx { spec, cfg };
    match command {
        Command::Axioms(_) => axioms(&ctx),
        Command::Certify(_) => certify_cmd(&ctx),
        Command::Solve { scheme, .. } => solve_cmd(&ctx, *scheme),
        Command::Stability(_) => stability_cmd(&ctx),
        Command::Diffinc(_) => diffinc_cmd(&ctx),
        Command::Mvi(_) => mvi_cmd(&ctx),
    }
}

fn out_dir(common: &Common) -> PathBuf {
    std::env::var_os(OUT_ENV)
        .map(PathBuf::from)
        .or_else(|| common.out.clone())
        .unwrap_or_else(|| PathBuf::from("out"))
}

fn write_outcome(dir: &Path, outcome: &Outcome) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Io(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    for (name, body) in &outcome.files {
        fs::write(dir.join(name), body).map_err(io)?;
    }
    let json = serde_json::to_string_pretty(&outcome.report).expect("report serializes");
    fs::write(dir.join("report.json"), json + "\n").map_err(io)?;
    Ok(())
}

/// Full CLI invocation: load, execute, write artifacts. Returns the exit code.
pub fn run(args: &Args) -> i32 {
    let common = args.command.common();
    let result = load_spec(&common.spec)
        .and_then(|spec| execute(&args.command, &spec, &Overrides::from(common)))
        .and_then(|outcome| {
            write_outcome(&out_dir(common), &outcome)?;
            Ok(outcome)
        });
    match result {
        Ok(outcome) => {
            println!(
                "{}: status={} exit={}",
                args.command.name(),
                outcome.report["status"].as_str().unwrap_or("?"),
                outcome.exit_code
            );
            outcome.exit_code
        }
        Err(e) => {
            eprintln!("error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code_for(&json!({"status": "converged"})), 0);
        assert_eq!(exit_code_for(&json!({"status": "certified"})), 0);
        assert_eq!(exit_code_for(&json!({"status": "hypothesis_failed"})), 2);
        assert_eq!(exit_code_for(&json!({"status": "max_iter_exceeded"})), 2);
        assert_eq!(exit_code_for(&json!({"status": "diverged"})), 3);
        assert_eq!(exit_code_for(&json!({"status": "no_certificate"})), 3);
        assert_eq!(exit_code_for(&json!({"status": "fail"})), 3);
    }

    #[test]
    fn parse_errors_name_the_field() {
        let err = parse_spec(r#"{"solver": {"tol": "small"}}"#, "s.json").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("solver.tol"), "{msg}");
        assert!(msg.starts_with("s.json:1:"), "{msg}");

        let err = parse_spec("{\n  \"mapp\": {}\n}", "s.json").unwrap_err().to_string();
        assert!(err.contains("unknown field `mapp`"), "{err}");
    }

    #[test]
    fn trace_format() {
        let r = ConvergenceReport {
            iterates: vec![Point::zeros(1), Point::zeros(1)],
            residual_norms: vec![0.5, 0.25],
            sigma: None,
            bound_sequence: Some(vec![1.0, 0.1]),
            status: Status::Converged,
            fixed_point: None,
            hypothesis: None,
        };
        assert_eq!(
            trace_csv(&r),
            "iter,residual_norm,bound\n0,5.0000000000000000e-1,1.0000000000000000e0\n1,2.5000000000000000e-1,1.0000000000000001e-1\n"
        );
    }
}
