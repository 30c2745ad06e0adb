//! Application solvers: differential inclusions `ẋ ∈ F(t, x)` by Picard
//! iteration over Euler trajectories, and multivalued variational
//! inequalities by the projected iteration `x ← proj_K(x − λ f)`.

use serde::{Deserialize, Serialize};

use crate::cone_order::ConeVector;
use crate::contraction::ContractionCertificate;
use crate::error::{check_dim, Error, Result};
use crate::metric_space::{MetricSpec, Point};
use crate::setmap::{select, FiniteSet, MultiMap};
use crate::solvers::{ConvergenceReport, HypothesisCheck, SampleBox, SolverConfig, Status, DIVERGENCE_GUARD};

/// `F(t, x) = T(x) + t·b_rate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeVaryingMap {
    pub map: MultiMap,
    #[serde(default)]
    pub b_rate: Option<Vec<f64>>,
}

impl TimeVaryingMap {
    pub fn autonomous(map: MultiMap) -> Self {
        Self { map, b_rate: None }
    }

    pub fn validate(&self) -> Result<()> {
        self.map.validate()?;
        if let Some(rate) = &self.b_rate {
            check_dim(self.map.dim(), rate.len())?;
            if rate.iter().any(|v| !v.is_finite()) {
                return Err(Error::invalid("b_rate must be finite"));
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.map.dim()
    }

    pub fn evaluate(&self, t: f64, x: &Point) -> Result<FiniteSet> {
        let base = self.map.evaluate(x)?;
        match &self.b_rate {
            None => Ok(base),
            Some(rate) => FiniteSet::new(
                base.iter()
                    .map(|p| {
                        Point::from_raw(p.coords().iter().zip(rate).map(|(v, r)| v + t * r).collect())
                    })
                    .collect(),
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiffIncProblem {
    pub rhs: TimeVaryingMap,
    pub x0: Point,
    pub horizon: f64,
    pub grid_size: usize,
    /// Exponential weight of the sweep metric `max_i e^{−w t_i}‖y(t_i) − z(t_i)‖`.
    pub weight_lambda: f64,
}

impl DiffIncProblem {
    pub fn validate(&self) -> Result<()> {
        self.rhs.validate()?;
        check_dim(self.rhs.dim(), self.x0.dim())?;
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::invalid("horizon must be positive"));
        }
        if self.grid_size < 2 {
            return Err(Error::invalid("grid_size must be at least 2"));
        }
        if !(self.weight_lambda > 0.0 && self.weight_lambda.is_finite()) {
            return Err(Error::invalid("weight_lambda must be positive"));
        }
        Ok(())
    }
}

/// Uniform-grid trajectory with `states[i+1] = states[i] + velocities[i]·Δt`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Point>,
    pub velocities: Vec<Point>,
}

impl Trajectory {
    pub fn step(&self) -> f64 {
        self.times[1] - self.times[0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InclusionSolution {
    pub trajectory: Trajectory,
    /// One entry per Picard sweep: the end state and the weighted distance to the previous sweep.
    pub report: ConvergenceReport,
    /// `max_i dist(velocities[i], F(t_i, states[i]))`. Zero when the sweep
    /// has reached its fixed point exactly.
    pub feasibility_gap: f64,
}

fn euler(x0: &Point, velocities: &[Point], dt: f64) -> Vec<Point> {
    let mut states = Vec::with_capacity(velocities.len() + 1);
    states.push(x0.clone());
    for v in velocities {
        let prev = states.last().expect("nonempty");
        let next = prev.coords().iter().zip(v.coords()).map(|(s, vi)| s + vi * dt).collect();
        states.push(Point::from_raw(next));
    }
    states
}

pub fn solve_inclusion(prob: &DiffIncProblem, cfg: &SolverConfig) -> Result<InclusionSolution> {
    prob.validate()?;
    cfg.validate()?;
    let n_steps = prob.grid_size;
    let dim = prob.x0.dim();
    let dt = prob.horizon / n_steps as f64;
    let times: Vec<f64> = (0..=n_steps).map(|i| i as f64 * prob.horizon / n_steps as f64).collect();
    let weights: Vec<f64> = times.iter().map(|t| (-prob.weight_lambda * t).exp()).collect();
    let euclid = MetricSpec::scalar_euclidean();
    let zero_slack = ConeVector::zeros(1);

    let mut states = vec![prob.x0.clone(); n_steps + 1];
    let mut velocities = vec![Point::zeros(dim); n_steps];
    let mut iterates = Vec::new();
    let mut residuals = Vec::new();
    let status = loop {
        let mut next_v = Vec::with_capacity(n_steps);
        for i in 0..n_steps {
            let image = prob.rhs.evaluate(times[i], &states[i])?;
            next_v.push(select(&velocities[i], &image, &euclid, &zero_slack)?);
        }
        let next_states = euler(&prob.x0, &next_v, dt);
        let r = next_states
            .iter()
            .zip(&states)
            .zip(&weights)
            .map(|((a, b), w)| w * a.euclidean_distance(b))
            .fold(0.0_f64, |acc, v| if v.is_nan() { f64::NAN } else { acc.max(v) });
        states = next_states;
        velocities = next_v;
        iterates.push(states[n_steps].clone());
        residuals.push(r);
        if !r.is_finite() || r > DIVERGENCE_GUARD || !states.iter().all(Point::is_finite) {
            break Status::Diverged;
        }
        if r <= cfg.tol {
            break Status::Converged;
        }
        if iterates.len() >= cfg.max_iter {
            break Status::MaxIterExceeded;
        }
    };

    let mut gap = 0.0_f64;
    if status != Status::Diverged {
        for i in 0..n_steps {
            let image = prob.rhs.evaluate(times[i], &states[i])?;
            let d = image.iter().map(|z| z.euclidean_distance(&velocities[i])).fold(f64::INFINITY, f64::min);
            gap = gap.max(d);
        }
    }

    let fixed_point = (status == Status::Converged).then(|| states[n_steps].clone());
    Ok(InclusionSolution {
        trajectory: Trajectory { times, states, velocities },
        report: ConvergenceReport {
            iterates,
            residual_norms: residuals,
            sigma: None,
            bound_sequence: None,
            status,
            fixed_point,
            hypothesis: None,
        },
        feasibility_gap: gap,
    })
}

/// Closed convex sets with closed-form Euclidean projections.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConvexSet {
    Box { lo: Vec<f64>, hi: Vec<f64> },
    Ball { center: Vec<f64>, radius: f64 },
    /// `{x : ⟨normal, x⟩ ≤ offset}`.
    Halfspace { normal: Vec<f64>, offset: f64 },
}

impl ConvexSet {
    pub fn validate(&self) -> Result<()> {
        let finite = |v: &[f64]| v.iter().all(|c| c.is_finite());
        match self {
            ConvexSet::Box { lo, hi } => {
                check_dim(lo.len(), hi.len())?;
                if lo.is_empty() || !finite(lo) || !finite(hi) || lo.iter().zip(hi).any(|(l, h)| l > h) {
                    return Err(Error::invalid("box needs finite bounds with lo ≤ hi"));
                }
            }
            ConvexSet::Ball { center, radius } => {
                if center.is_empty() || !finite(center) || !(radius.is_finite() && *radius >= 0.0) {
                    return Err(Error::invalid("ball needs a finite center and radius ≥ 0"));
                }
            }
            ConvexSet::Halfspace { normal, offset } => {
                if normal.is_empty() || !finite(normal) || !offset.is_finite() || normal.iter().all(|c| *c == 0.0) {
                    return Err(Error::invalid("halfspace needs a finite nonzero normal"));
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            ConvexSet::Box { lo, .. } => lo.len(),
            ConvexSet::Ball { center, .. } => center.len(),
            ConvexSet::Halfspace { normal, .. } => normal.len(),
        }
    }
}

/// Euclidean projection onto `set`.
pub fn project(set: &ConvexSet, x: &Point) -> Result<Point> {
    check_dim(set.dim(), x.dim())?;
    let x = x.coords();
    let out = match set {
        ConvexSet::Box { lo, hi } => x.iter().zip(lo).zip(hi).map(|((v, l), h)| v.max(*l).min(*h)).collect(),
        ConvexSet::Ball { center, radius } => {
            let dist = x.iter().zip(center).map(|(v, c)| (v - c) * (v - c)).sum::<f64>().sqrt();
            if dist <= *radius {
                x.to_vec()
            } else {
                let s = radius / dist;
                x.iter().zip(center).map(|(v, c)| c + s * (v - c)).collect()
            }
        }
        ConvexSet::Halfspace { normal, offset } => {
            let dot: f64 = x.iter().zip(normal).map(|(v, a)| v * a).sum();
            if dot <= *offset {
                x.to_vec()
            } else {
                let nn: f64 = normal.iter().map(|a| a * a).sum();
                let t = (dot - offset) / nn;
                x.iter().zip(normal).map(|(v, a)| v - t * a).collect()
            }
        }
    };
    Ok(Point::from_raw(out))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MviProblem {
    pub operator: MultiMap,
    pub constraint: ConvexSet,
    /// Strong-monotonicity modulus, supplied by the user.
    pub mu: f64,
    pub step_lambda: f64,
    pub cert: ContractionCertificate,
}

impl MviProblem {
    pub fn validate(&self) -> Result<()> {
        self.operator.validate()?;
        self.constraint.validate()?;
        check_dim(self.operator.dim(), self.constraint.dim())?;
        if !(self.mu > 0.0 && self.mu.is_finite()) {
            return Err(Error::invalid("mu must be positive"));
        }
        if !(self.step_lambda > 0.0 && self.step_lambda.is_finite()) {
            return Err(Error::invalid("step_lambda must be positive"));
        }
        Ok(())
    }

    fn modulus(&self) -> f64 {
        self.cert.delta + self.cert.l
    }
}

/// `σ(λ)² = 1 − 2λμ + λ²(δ+L)²`, clamped at zero.
pub fn mvi_sigma_squared(mu: f64, delta_plus_l: f64, step: f64) -> f64 {
    (1.0 - 2.0 * step * mu + step * step * delta_plus_l * delta_plus_l).max(0.0)
}

pub fn mvi_sigma(mu: f64, delta_plus_l: f64, step: f64) -> f64 {
    mvi_sigma_squared(mu, delta_plus_l, step).sqrt()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MviReport {
    #[serde(flatten)]
    pub report: ConvergenceReport,
    pub sigma_mvi: f64,
    pub step_lambda: f64,
    pub mu: f64,
    /// Componentwise KKT sign conditions at the solution; box constraints only.
    pub kkt_ok: Option<bool>,
    /// Operator selection used at the returned point.
    pub solution_f: Option<Point>,
    /// Sampled pairs violating `⟨f_x − f_y, x − y⟩ ≥ μ‖x − y‖²`.
    pub monotonicity_violations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn box_kkt(lo: &[f64], hi: &[f64], x: &[f64], f: &[f64], tol: f64) -> bool {
    x.iter().zip(f).zip(lo.iter().zip(hi)).all(|((xi, fi), (l, h))| {
        let at_lo = xi - l <= tol;
        let at_hi = h - xi <= tol;
        match (at_lo, at_hi) {
            (true, true) => true,
            (true, false) => *fi >= -tol,
            (false, true) => *fi <= tol,
            (false, false) => fi.abs() <= tol,
        }
    })
}

fn count_monotonicity_violations(prob: &MviProblem, probes: &[Point]) -> Result<usize> {
    let mut bad = 0;
    for (x, y) in probes.iter().zip(probes.iter().skip(1)) {
        let diff: Vec<f64> = x.coords().iter().zip(y.coords()).map(|(a, b)| a - b).collect();
        let gap = dot(&diff, &diff);
        let fx = prob.operator.evaluate(x)?;
        let fy = prob.operator.evaluate(y)?;
        let violated = fx.iter().any(|a| {
            fy.iter().any(|b| {
                let df: Vec<f64> = a.coords().iter().zip(b.coords()).map(|(u, v)| u - v).collect();
                dot(&df, &diff) < prob.mu * gap * (1.0 - 1e-12)
            })
        });
        if violated {
            bad += 1;
        }
    }
    Ok(bad)
}

pub fn solve_mvi(prob: &MviProblem, x0: &Point, cfg: &SolverConfig) -> Result<MviReport> {
    prob.validate()?;
    cfg.validate()?;
    check_dim(prob.operator.dim(), x0.dim())?;
    let step = prob.step_lambda;
    let euclid = MetricSpec::scalar_euclidean();
    let zero_slack = ConeVector::zeros(1);

    let mut iterates = Vec::new();
    let mut residuals = Vec::new();
    let mut f_prev = Point::zeros(x0.dim());
    let mut x = x0.clone();
    let status = loop {
        let image = prob.operator.evaluate(&x)?;
        let f = select(&f_prev, &image, &euclid, &zero_slack)?;
        let shifted = Point::from_raw(x.coords().iter().zip(f.coords()).map(|(a, b)| a - step * b).collect());
        let next = project(&prob.constraint, &shifted)?;
        let r = x.euclidean_distance(&next);
        iterates.push(x);
        residuals.push(r);
        f_prev = f;
        if !r.is_finite() || r > DIVERGENCE_GUARD {
            break Status::Diverged;
        }
        if r <= cfg.tol {
            break Status::Converged;
        }
        if iterates.len() > cfg.max_iter {
            break Status::MaxIterExceeded;
        }
        x = next;
    };

    let sigma = mvi_sigma(prob.mu, prob.modulus(), step);
    let fixed_point = (status == Status::Converged).then(|| iterates.last().cloned()).flatten();
    let kkt_ok = match (&prob.constraint, &fixed_point) {
        (ConvexSet::Box { lo, hi }, Some(xs)) => {
            let tol = 10.0 * cfg.tol * (1.0 / step).max(1.0);
            Some(box_kkt(lo, hi, xs.coords(), f_prev.coords(), tol))
        }
        _ => None,
    };

    let mut probe_box = SampleBox::around(&iterates, 32)?;
    for (l, h) in probe_box.lo.iter_mut().zip(probe_box.hi.iter_mut()) {
        *l -= 1.0;
        *h += 1.0;
    }
    let violations = if status == Status::Diverged {
        0
    } else {
        count_monotonicity_violations(prob, &probe_box.sample(cfg.seed)?)?
    };

    Ok(MviReport {
        report: ConvergenceReport {
            iterates,
            residual_norms: residuals,
            sigma: Some(sigma),
            bound_sequence: None,
            status,
            fixed_point: fixed_point.clone(),
            hypothesis: Some(HypothesisCheck {
                condition: "sigma_mvi = sqrt(1 - 2*lambda*mu + lambda^2*(delta+L)^2) < 1".into(),
                holds: sigma < 1.0,
            }),
        },
        sigma_mvi: sigma,
        step_lambda: step,
        mu: prob.mu,
        kkt_ok,
        solution_f: fixed_point.map(|_| f_prev),
        monotonicity_violations: violations,
    })
}

/// Checks `‖x_n − x*‖ ≤ slack·C·σⁿ` with `C = ‖x_0 − x*‖`. Returns the
/// first index where it fails, if any.
pub fn rate_envelope_violation(iterates: &[Point], x_star: &Point, sigma: f64, slack: f64) -> Option<usize> {
    let c = iterates.first()?.euclidean_distance(x_star);
    iterates
        .iter()
        .enumerate()
        .position(|(n, x)| x.euclidean_distance(x_star) > slack * c * sigma.powi(n as i32))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StepSuggestion {
    pub step: f64,
    pub sigma: f64,
    /// The unconstrained minimizer made `σ²` negative and the step was pulled back.
    pub clamped: bool,
    /// The suggested step does not give `σ < 1`.
    pub warning: bool,
}

/// Step minimizing `σ²(λ) = 1 − 2λμ + λ²(δ+L)²`.
///
/// With `s = δ + L`, the minimizer is `μ/s²`. When `μ > s` the minimum is
/// negative; the step is then pulled back to the smaller root
/// `(μ − sqrt(μ² − s²))/s²`, where `σ = 0`. For `s = 0` the step is `1/μ`
/// and `σ²` clamps to zero.
pub fn suggest_step(prob: &MviProblem) -> Result<StepSuggestion> {
    let mu = prob.mu;
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(Error::invalid("mu must be positive"));
    }
    let s = prob.modulus();
    let (step, clamped) = if s <= 0.0 {
        (1.0 / mu, true)
    } else if mu > s {
        ((mu - (mu * mu - s * s).sqrt()) / (s * s), true)
    } else {
        (mu / (s * s), false)
    };
    let sigma = mvi_sigma(mu, s, step);
    Ok(StepSuggestion { step, sigma, clamped, warning: sigma >= 1.0 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setmap::Matrix;

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    fn decay() -> TimeVaryingMap {
        TimeVaryingMap::autonomous(MultiMap::affine_single(Matrix::scaled_identity(1, -1.0), vec![0.0]).unwrap())
    }

    fn decay_problem(n: usize) -> DiffIncProblem {
        DiffIncProblem { rhs: decay(), x0: pt(&[1.0]), horizon: 1.0, grid_size: n, weight_lambda: 1.0 }
    }

    #[test]
    fn exponential_decay() {
        let sol = solve_inclusion(&decay_problem(1000), &SolverConfig::default()).unwrap();
        assert_eq!(sol.report.status, Status::Converged);
        let last = sol.trajectory.states.last().unwrap().coords()[0];
        assert!((last - (-1.0f64).exp()).abs() < 2e-3);
        assert!(sol.report.iterates.len() < 50);
        assert!(sol.feasibility_gap < 1e-9);
    }

    #[test]
    fn euler_identity_is_exact() {
        let sol = solve_inclusion(&decay_problem(200), &SolverConfig::default()).unwrap();
        let t = &sol.trajectory;
        let dt = 1.0 / 200.0;
        assert_eq!(t.states.len(), 201);
        assert_eq!(t.velocities.len(), 200);
        assert_eq!(t.states[0], pt(&[1.0]));
        for i in 0..200 {
            assert_eq!(t.states[i + 1].coords()[0], t.states[i].coords()[0] + t.velocities[i].coords()[0] * dt);
        }
    }

    #[test]
    fn ball_inclusion_stays_at_rest() {
        let rhs = TimeVaryingMap::autonomous(
            MultiMap::ball_map(Matrix::scaled_identity(1, 0.0), vec![0.0], 1.0).unwrap(),
        );
        let prob = DiffIncProblem { rhs, x0: pt(&[0.0]), horizon: 1.0, grid_size: 50, weight_lambda: 1.0 };
        let sol = solve_inclusion(&prob, &SolverConfig::default()).unwrap();
        assert_eq!(sol.report.status, Status::Converged);
        assert!(sol.trajectory.states.iter().all(|s| s.coords()[0] == 0.0));
        assert_eq!(sol.feasibility_gap, 0.0);
    }

    #[test]
    fn time_varying_forcing() {
        // ẋ = t, x(0) = 0: Euler gives Σ t_i Δt = (N−1)/(2N) at t = 1.
        let rhs = TimeVaryingMap {
            map: MultiMap::affine_single(Matrix::scaled_identity(1, 0.0), vec![0.0]).unwrap(),
            b_rate: Some(vec![1.0]),
        };
        let prob = DiffIncProblem { rhs, x0: pt(&[0.0]), horizon: 1.0, grid_size: 100, weight_lambda: 1.0 };
        let sol = solve_inclusion(&prob, &SolverConfig::default()).unwrap();
        let last = sol.trajectory.states.last().unwrap().coords()[0];
        assert!((last - 99.0 / 200.0).abs() < 1e-12);
    }

    #[test]
    fn inclusion_guards() {
        let mut p = decay_problem(10);
        p.horizon = 0.0;
        assert!(solve_inclusion(&p, &SolverConfig::default()).is_err());
        let mut p = decay_problem(1);
        p.grid_size = 1;
        assert!(solve_inclusion(&p, &SolverConfig::default()).is_err());
    }

    #[test]
    fn projections() {
        let b = ConvexSet::Box { lo: vec![0.0, 0.0], hi: vec![1.0, 1.0] };
        assert_eq!(project(&b, &pt(&[2.0, 0.5])).unwrap(), pt(&[1.0, 0.5]));
        let ball = ConvexSet::Ball { center: vec![0.0, 0.0], radius: 1.0 };
        let p = project(&ball, &pt(&[3.0, 4.0])).unwrap();
        assert!((p.coords()[0] - 0.6).abs() < 1e-15 && (p.coords()[1] - 0.8).abs() < 1e-15);
        let inside = pt(&[0.2, 0.3]);
        assert_eq!(project(&b, &inside).unwrap(), inside);
        assert_eq!(project(&ball, &inside).unwrap(), inside);
        let h = ConvexSet::Halfspace { normal: vec![1.0, 1.0], offset: 1.0 };
        assert_eq!(project(&h, &pt(&[1.0, 1.0])).unwrap(), pt(&[0.5, 0.5]));
        assert_eq!(project(&h, &inside).unwrap(), inside);
    }

    #[test]
    fn convex_set_validation() {
        assert!(ConvexSet::Box { lo: vec![1.0], hi: vec![0.0] }.validate().is_err());
        assert!(ConvexSet::Ball { center: vec![0.0], radius: -1.0 }.validate().is_err());
        assert!(ConvexSet::Halfspace { normal: vec![0.0, 0.0], offset: 1.0 }.validate().is_err());
    }

    fn box_problem(mu: f64, delta: f64, l: f64, step: f64) -> MviProblem {
        MviProblem {
            operator: MultiMap::affine_single(Matrix::identity(2), vec![-2.0, -0.5]).unwrap(),
            constraint: ConvexSet::Box { lo: vec![0.0, 0.0], hi: vec![1.0, 1.0] },
            mu,
            step_lambda: step,
            cert: ContractionCertificate::given(delta, l, 1.0).unwrap(),
        }
    }

    #[test]
    fn mvi_sigma_value() {
        assert!((mvi_sigma(1.0, 0.4, 0.5) - 0.2).abs() < 1e-15);
    }

    #[test]
    fn mvi_box_solution() {
        let r = solve_mvi(&box_problem(1.0, 0.3, 0.1, 0.5), &pt(&[0.0, 0.0]), &SolverConfig::default()).unwrap();
        assert_eq!(r.report.status, Status::Converged);
        let x = r.report.fixed_point.clone().unwrap();
        assert!(x.euclidean_distance(&pt(&[1.0, 0.5])) < 1e-8);
        assert_eq!(r.kkt_ok, Some(true));
        assert_eq!(r.monotonicity_violations, 0);
    }

    #[test]
    fn mvi_lower_boundary() {
        let prob = MviProblem {
            operator: MultiMap::affine_single(Matrix::identity(1), vec![0.0]).unwrap(),
            constraint: ConvexSet::Box { lo: vec![1.0], hi: vec![2.0] },
            mu: 1.0,
            step_lambda: 0.5,
            cert: ContractionCertificate::given(0.5, 0.0, 1.0).unwrap(),
        };
        let r = solve_mvi(&prob, &pt(&[1.7]), &SolverConfig::default()).unwrap();
        let x = r.report.fixed_point.clone().unwrap();
        assert!((x.coords()[0] - 1.0).abs() < 1e-10);
        assert_eq!(r.kkt_ok, Some(true));
    }

    #[test]
    fn mvi_flags_overstated_modulus() {
        // F(x) = x − c is only 1-strongly monotone.
        let r = solve_mvi(&box_problem(2.0, 0.3, 0.1, 0.5), &pt(&[0.0, 0.0]), &SolverConfig::default()).unwrap();
        assert!(r.monotonicity_violations > 0);
    }

    #[test]
    fn steps() {
        let s = suggest_step(&box_problem(0.2, 0.3, 0.1, 1.0)).unwrap();
        assert!((s.step - 1.25).abs() < 1e-12);
        assert!((s.sigma - 0.75f64.sqrt()).abs() < 1e-12);
        assert!(!s.clamped && !s.warning);

        let s = suggest_step(&box_problem(1.0, 0.3, 0.1, 1.0)).unwrap();
        assert!(s.clamped);
        assert_eq!(s.sigma, 0.0);
        // σ²(step) = 0 at the pulled-back root.
        assert!((1.0 - 2.0 * s.step + s.step * s.step * 0.16).abs() < 1e-12);
        assert!(s.step < 6.25);

        let mut p = box_problem(2.0, 0.3, 0.0, 1.0);
        p.cert.delta = 0.0;
        let s = suggest_step(&p).unwrap();
        assert_eq!(s.step, 0.5);
        assert_eq!(s.sigma, 0.0);

        let mut p = box_problem(1.0, 0.3, 0.1, 1.0);
        p.mu = 0.0;
        assert!(suggest_step(&p).is_err());
    }

    #[test]
    fn envelope_helper() {
        let its: Vec<Point> = (0..5).map(|n| pt(&[0.5f64.powi(n)])).collect();
        assert_eq!(rate_envelope_violation(&its, &pt(&[0.0]), 0.5, 1.1), None);
        assert_eq!(rate_envelope_violation(&its, &pt(&[0.0]), 0.2, 1.1), Some(1));
    }
}
