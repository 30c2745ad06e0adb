//! Selection-based fixed-point iterations for set-valued maps.
//!
//! * [`picard_selection`]: `x_{n+1}` is the point of `T(x_n)` nearest to `x_n`.
//! * [`lambda_iterate`]: `x_{n+1} = (x_n + λ f(x_n)) / (1 + λ)` with
//!   `f(x_n)` the same nearest-point selection; `λ = 1` is the
//!   Krasnoselskii averaging step.
//!
//! Both record the fixed-point residual `‖d(x_n, f(x_n))‖` per iterate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cone_order::ConeVector;
use crate::contraction::ContractionCertificate;
use crate::error::{check_dim, Error, Result};
use crate::metric_space::{MetricSpec, Point};
use crate::setmap::{hausdorff, select, FiniteSet, MultiMap};

/// Residual norms above this are treated as divergence.
pub const DIVERGENCE_GUARD: f64 = 1e12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverConfig {
    pub max_iter: usize,
    /// Residual-norm stopping threshold.
    pub tol: f64,
    /// Magnitude of the selection slack `ε_n = slack_scale · 1`.
    pub slack_scale: f64,
    /// Averaging weight of the λ-scheme.
    pub lambda: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { max_iter: 1000, tol: 1e-10, slack_scale: 0.0, lambda: 1.0, seed: 0 }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::invalid("max_iter must be ≥ 1"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::invalid("tol must be positive"));
        }
        if !(self.slack_scale >= 0.0 && self.slack_scale.is_finite()) {
            return Err(Error::invalid("slack_scale must be ≥ 0"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Converged,
    MaxIterExceeded,
    Diverged,
}

/// Which sufficient condition the run was checked against, and whether it held.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisCheck {
    pub condition: String,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub iterates: Vec<Point>,
    pub residual_norms: Vec<f64>,
    pub sigma: Option<f64>,
    pub bound_sequence: Option<Vec<f64>>,
    pub status: Status,
    pub fixed_point: Option<Point>,
    pub hypothesis: Option<HypothesisCheck>,
}

impl ConvergenceReport {
    pub fn iterations(&self) -> usize {
        self.iterates.len().saturating_sub(1)
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.residual_norms.last().copied()
    }

    pub fn hypotheses_hold(&self) -> Option<bool> {
        self.hypothesis.as_ref().map(|h| h.holds)
    }
}

/// `‖d(x, s(x))‖` with `s(x)` the nearest point of `T(x)`; zero iff `x ∈ T(x)`.
pub fn residual(x: &Point, map: &MultiMap, metric: &MetricSpec) -> Result<f64> {
    let image = map.evaluate(x)?;
    let y = select(x, &image, metric, &ConeVector::zeros(metric.cone().dimension()))?;
    metric.distance_norm(x, &y)
}

fn diverging(r: f64) -> bool {
    !r.is_finite() || r > DIVERGENCE_GUARD
}

fn check_start(map: &MultiMap, x0: &Point, cfg: &SolverConfig) -> Result<()> {
    cfg.validate()?;
    check_dim(map.dim(), x0.dim())
}

pub fn picard_selection(
    map: &MultiMap,
    metric: &MetricSpec,
    x0: &Point,
    cfg: &SolverConfig,
) -> Result<ConvergenceReport> {
    check_start(map, x0, cfg)?;
    let m = metric.cone().dimension();
    let mut iterates = Vec::new();
    let mut residuals = Vec::new();
    let mut x = x0.clone();
    let mut n = 0usize;
    let status = loop {
        let image = map.evaluate(&x)?;
        let slack = ConeVector::ones(m).scale(cfg.slack_scale * 0.5_f64.powi(n.min(1100) as i32));
        let next = select(&x, &image, metric, &slack)?;
        let r = metric.distance_norm(&x, &next)?;
        iterates.push(x);
        residuals.push(r);
        if diverging(r) {
            break Status::Diverged;
        }
        if r <= cfg.tol {
            break Status::Converged;
        }
        if n >= cfg.max_iter {
            break Status::MaxIterExceeded;
        }
        x = next;
        n += 1;
    };
    let fixed_point = (status == Status::Converged).then(|| iterates.last().cloned()).flatten();
    Ok(ConvergenceReport {
        iterates,
        residual_norms: residuals,
        sigma: None,
        bound_sequence: None,
        status,
        fixed_point,
        hypothesis: None,
    })
}

/// Rate `σ = κ(δ + L + λ)/(1 + λ)` of the λ-scheme.
pub fn lambda_sigma(cert: &ContractionCertificate, lambda: f64) -> f64 {
    cert.kappa * (cert.delta + cert.l + lambda) / (1.0 + lambda)
}

/// Runs the λ-scheme. The run proceeds even when `σ ≥ 1`; the report's
/// hypothesis entry records whether the sufficient condition held.
pub fn lambda_iterate(
    map: &MultiMap,
    metric: &MetricSpec,
    x0: &Point,
    cert: &ContractionCertificate,
    cfg: &SolverConfig,
) -> Result<ConvergenceReport> {
    check_start(map, x0, cfg)?;
    let lambda = cfg.lambda;
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(format!("lambda must be positive, got {lambda}")));
    }
    let zero = ConeVector::zeros(metric.cone().dimension());
    let keep = 1.0 / (1.0 + lambda);
    let take = lambda / (1.0 + lambda);

    let mut iterates = Vec::new();
    let mut residuals = Vec::new();
    let mut first_step = None;
    let mut x = x0.clone();
    let mut n = 0usize;
    let status = loop {
        let image = map.evaluate(&x)?;
        let y = select(&x, &image, metric, &zero)?;
        let r = metric.distance_norm(&x, &y)?;
        let next = Point::from_raw(
            x.coords().iter().zip(y.coords()).map(|(a, b)| keep * a + take * b).collect(),
        );
        if first_step.is_none() {
            first_step = Some(metric.distance_norm(&x, &next)?);
        }
        iterates.push(x);
        residuals.push(r);
        if diverging(r) {
            break Status::Diverged;
        }
        if r <= cfg.tol {
            break Status::Converged;
        }
        if n >= cfg.max_iter {
            break Status::MaxIterExceeded;
        }
        x = next;
        n += 1;
    };

    let sigma = lambda_sigma(cert, lambda);
    let bound_sequence = (sigma < 1.0).then(|| {
        let d01 = first_step.unwrap_or(0.0);
        (0..iterates.len())
            .map(|k| cert.kappa * sigma.powi(k as i32) / (1.0 - sigma) * d01)
            .collect()
    });
    let fixed_point = (status == Status::Converged).then(|| iterates.last().cloned()).flatten();
    Ok(ConvergenceReport {
        iterates,
        residual_norms: residuals,
        sigma: Some(sigma),
        bound_sequence,
        status,
        fixed_point,
        hypothesis: Some(HypothesisCheck {
            condition: "delta*kappa < 1, L*kappa < 1 - delta*kappa, sigma = kappa*(delta+L+lambda)/(1+lambda) < 1"
                .into(),
            holds: cert.hypotheses_hold && sigma < 1.0,
        }),
    })
}

/// Picard runs from every seed, reported in seed order.
pub fn multistart(
    map: &MultiMap,
    metric: &MetricSpec,
    seeds: &[Point],
    cfg: &SolverConfig,
) -> Result<Vec<ConvergenceReport>> {
    if seeds.is_empty() {
        return Err(Error::invalid("multistart needs at least one seed"));
    }
    seeds.iter().map(|s| picard_selection(map, metric, s, cfg)).collect()
}

/// Converged Picard limits from all seeds, merged within `10·tol`.
pub fn fixed_point_set(
    map: &MultiMap,
    metric: &MetricSpec,
    seeds: &[Point],
    cfg: &SolverConfig,
) -> Result<FiniteSet> {
    let found: Vec<Point> = multistart(map, metric, seeds, cfg)?
        .into_iter()
        .filter_map(|r| r.fixed_point)
        .collect();
    if found.is_empty() {
        return Err(Error::EmptyFixedPointSet);
    }
    FiniteSet::with_tolerance(found, 10.0 * cfg.tol)
}

/// Axis-aligned box sampled to estimate `sup_y ‖H(T_n y, T y)‖`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SampleBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
    #[serde(default = "default_samples")]
    pub samples: usize,
}

fn default_samples() -> usize {
    64
}

impl SampleBox {
    /// Smallest box containing the given points.
    pub fn around(points: &[Point], samples: usize) -> Result<Self> {
        let first = points.first().ok_or_else(|| Error::invalid("no points to bound"))?;
        let mut lo = first.coords().to_vec();
        let mut hi = lo.clone();
        for p in points {
            check_dim(lo.len(), p.dim())?;
            for (i, c) in p.coords().iter().enumerate() {
                lo[i] = lo[i].min(*c);
                hi[i] = hi[i].max(*c);
            }
        }
        Ok(Self { lo, hi, samples })
    }

    pub fn sample(&self, seed: u64) -> Result<Vec<Point>> {
        check_dim(self.lo.len(), self.hi.len())?;
        if self.lo.iter().zip(&self.hi).any(|(l, h)| !(l <= h) || !l.is_finite() || !h.is_finite()) {
            return Err(Error::invalid("sample box needs finite lo ≤ hi"));
        }
        if self.samples == 0 {
            return Err(Error::invalid("sample box needs at least one sample"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..self.samples)
            .map(|_| {
                Point::new(
                    self.lo
                        .iter()
                        .zip(&self.hi)
                        .map(|(l, h)| if l < h { rng.random_range(*l..*h) } else { *l })
                        .collect(),
                )
            })
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityRow {
    pub n: u64,
    /// Sampled `sup_y ‖H(T_n y, T y)‖` over the box.
    pub sup_perturbation: f64,
    /// `H(Fix(T_n), Fix(T))` in the Euclidean metric.
    pub hausdorff: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityTable {
    pub rows: Vec<StabilityRow>,
    /// Hausdorff column non-increasing in `n` up to `10·tol`.
    pub non_increasing: bool,
}

pub fn stability_experiment(
    family: &MultiMap,
    limit: &MultiMap,
    metric: &MetricSpec,
    n_list: &[u64],
    seeds: &[Point],
    sample_box: &SampleBox,
    cfg: &SolverConfig,
) -> Result<StabilityTable> {
    if !matches!(family, MultiMap::PerturbedFamily { .. }) {
        return Err(Error::invalid("stability family must be a perturbed_family"));
    }
    check_dim(family.dim(), limit.dim())?;
    if n_list.is_empty() || n_list.contains(&0) {
        return Err(Error::invalid("n_list must be nonempty with entries ≥ 1"));
    }
    let probes = sample_box.sample(cfg.seed)?;
    let euclid = MetricSpec::scalar_euclidean();
    let fix_limit = fixed_point_set(limit, metric, seeds, cfg)?;

    let mut rows = Vec::with_capacity(n_list.len());
    for &n in n_list {
        let member = family.with_index(n)?;
        let mut sup = 0.0_f64;
        for y in &probes {
            let h = hausdorff(&member.evaluate(y)?, &limit.evaluate(y)?, metric)?;
            sup = sup.max(metric.cone().norm(&h)?);
        }
        let fix_n = fixed_point_set(&member, metric, seeds, cfg)?;
        let h = hausdorff(&fix_n, &fix_limit, &euclid)?.coords()[0];
        rows.push(StabilityRow { n, sup_perturbation: sup, hausdorff: h });
    }
    let non_increasing = rows.windows(2).all(|w| w[1].hausdorff <= w[0].hausdorff + 10.0 * cfg.tol);
    Ok(StabilityTable { rows, non_increasing })
}
