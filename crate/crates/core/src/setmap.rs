//! Finite point sets, the set-valued map catalog, the Hausdorff cone metric
//! and nearest-point selection.
//!
//! On the orthant the infimum defining the Hausdorff cone metric is taken
//! coordinate by coordinate; for finite sets it is attained, so
//!
//! ```text
//! h(A, B)_i = max_{a ∈ A} min_{b ∈ B} d(a, b)_i
//! H(A, B)   = h(A, B) ∨ h(B, A)
//! ```

use serde::{Deserialize, Serialize};

use crate::cone_order::ConeVector;
use crate::error::{check_dim, Error, Result};
use crate::metric_space::{MetricSpec, Point};

/// Points closer than this (Euclidean) are merged when building a set.
pub const DEDUP_TOL: f64 = 1e-12;

/// Dense row-major matrix, serialized as a list of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<f64>>", into = "Vec<Vec<f64>>")]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let r = rows.len();
        if r == 0 || rows[0].is_empty() {
            return Err(Error::invalid("matrix must be nonempty"));
        }
        let c = rows[0].len();
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::invalid("matrix rows must have equal length"));
        }
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("matrix entries must be finite"));
        }
        Ok(Self { rows: r, cols: c, data })
    }

    pub fn identity(n: usize) -> Self {
        Self::scaled_identity(n, 1.0)
    }

    pub fn scaled_identity(n: usize, alpha: f64) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = alpha;
        }
        Self { rows: n, cols: n, data }
    }

    pub fn diagonal(d: &[f64]) -> Self {
        let n = d.len();
        let mut m = Self::scaled_identity(n, 0.0);
        for (i, v) in d.iter().enumerate() {
            m.data[i * n + i] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        self.data
            .chunks(self.cols)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

impl TryFrom<Vec<Vec<f64>>> for Matrix {
    type Error = Error;

    fn try_from(rows: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_rows(rows)
    }
}

impl From<Matrix> for Vec<Vec<f64>> {
    fn from(m: Matrix) -> Self {
        m.data.chunks(m.cols).map(|r| r.to_vec()).collect()
    }
}

/// A nonempty, deduplicated list of points in insertion order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FiniteSet {
    points: Vec<Point>,
}

impl FiniteSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        Self::with_tolerance(points, DEDUP_TOL)
    }

    /// Builds a set, dropping any point within `tol` of an earlier one.
    pub fn with_tolerance(points: Vec<Point>, tol: f64) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::invalid("finite set must be nonempty"));
        };
        let n = first.dim();
        let mut kept: Vec<Point> = Vec::with_capacity(points.len());
        for p in points {
            check_dim(n, p.dim())?;
            if !kept.iter().any(|q| q.euclidean_distance(&p) <= tol) {
                kept.push(p);
            }
        }
        Ok(Self { points: kept })
    }

    pub fn singleton(p: Point) -> Self {
        Self { points: vec![p] }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn contains(&self, p: &Point, tol: f64) -> bool {
        self.points.iter().any(|q| q.euclidean_distance(p) <= tol)
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Point> {
        self.points.iter()
    }
}

impl<'a> IntoIterator for &'a FiniteSet {
    type Item = &'a Point;
    type IntoIter = std::slice::Iter<'a, Point>;

    fn into_iter(self) -> Self::IntoIter {
        self.points.iter()
    }
}

/// Builtin set-valued maps `T: R^n → finite subsets of R^n`.
///
/// Serialized as `{"kind": ..., "params": {...}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "params", rename_all = "snake_case", deny_unknown_fields)]
pub enum MultiMap {
    /// `T(x) = {Ax + b}`.
    AffineSingle { a: Matrix, b: Vec<f64> },
    /// `T(x) = {A₁x + b₁, A₂x + b₂}`.
    TwoBranch { a1: Matrix, b1: Vec<f64>, a2: Matrix, b2: Vec<f64> },
    /// `T(x) = {Ax + b} ∪ {Ax + b ± r·e_i}`, a ball of radius `r`
    /// discretized to its center and the `2n` axis points.
    BallMap { a: Matrix, b: Vec<f64>, radius: f64 },
    /// Member `n` of the family `T_n(x) = {Ax + b + c/n}`.
    PerturbedFamily { a: Matrix, b: Vec<f64>, c: Vec<f64>, n: u64 },
}

fn check_affine(a: &Matrix, b: &[f64], what: &str) -> Result<usize> {
    if a.rows() != a.cols() {
        return Err(Error::invalid(format!("{what}: matrix must be square")));
    }
    if b.len() != a.rows() {
        return Err(Error::invalid(format!(
            "{what}: offset has length {}, expected {}",
            b.len(),
            a.rows()
        )));
    }
    if b.iter().any(|v| !v.is_finite()) {
        return Err(Error::invalid(format!("{what}: offset must be finite")));
    }
    Ok(a.rows())
}

fn affine(a: &Matrix, b: &[f64], x: &[f64]) -> Vec<f64> {
    a.apply(x).into_iter().zip(b).map(|(ax, bi)| ax + bi).collect()
}

impl MultiMap {
    pub fn affine_single(a: Matrix, b: Vec<f64>) -> Result<Self> {
        let m = MultiMap::AffineSingle { a, b };
        m.validate()?;
        Ok(m)
    }

    pub fn two_branch(a1: Matrix, b1: Vec<f64>, a2: Matrix, b2: Vec<f64>) -> Result<Self> {
        let m = MultiMap::TwoBranch { a1, b1, a2, b2 };
        m.validate()?;
        Ok(m)
    }

    pub fn ball_map(a: Matrix, b: Vec<f64>, radius: f64) -> Result<Self> {
        let m = MultiMap::BallMap { a, b, radius };
        m.validate()?;
        Ok(m)
    }

    pub fn perturbed_family(a: Matrix, b: Vec<f64>, c: Vec<f64>, n: u64) -> Result<Self> {
        let m = MultiMap::PerturbedFamily { a, b, c, n };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            MultiMap::AffineSingle { a, b } => check_affine(a, b, "affine_single").map(|_| ()),
            MultiMap::TwoBranch { a1, b1, a2, b2 } => {
                let n1 = check_affine(a1, b1, "two_branch branch 1")?;
                let n2 = check_affine(a2, b2, "two_branch branch 2")?;
                check_dim(n1, n2)
            }
            MultiMap::BallMap { a, b, radius } => {
                check_affine(a, b, "ball_map")?;
                if !(radius.is_finite() && *radius >= 0.0) {
                    return Err(Error::invalid("ball_map: radius must be finite and ≥ 0"));
                }
                Ok(())
            }
            MultiMap::PerturbedFamily { a, b, c, n } => {
                let dim = check_affine(a, b, "perturbed_family")?;
                check_dim(dim, c.len())?;
                if c.iter().any(|v| !v.is_finite()) {
                    return Err(Error::invalid("perturbed_family: c must be finite"));
                }
                if *n == 0 {
                    return Err(Error::invalid("perturbed_family: index n must be ≥ 1"));
                }
                Ok(())
            }
        }
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        match self {
            MultiMap::AffineSingle { a, .. }
            | MultiMap::BallMap { a, .. }
            | MultiMap::PerturbedFamily { a, .. } => a.rows(),
            MultiMap::TwoBranch { a1, .. } => a1.rows(),
        }
    }

    /// For a perturbed family, the member with index `n`.
    pub fn with_index(&self, n: u64) -> Result<Self> {
        match self {
            MultiMap::PerturbedFamily { a, b, c, .. } => {
                Self::perturbed_family(a.clone(), b.clone(), c.clone(), n)
            }
            _ => Err(Error::invalid("with_index applies to perturbed_family only")),
        }
    }

    /// For a perturbed family, the pointwise limit `x ↦ {Ax + b}`.
    pub fn family_limit(&self) -> Result<Self> {
        match self {
            MultiMap::PerturbedFamily { a, b, .. } => Self::affine_single(a.clone(), b.clone()),
            _ => Err(Error::invalid("family_limit applies to perturbed_family only")),
        }
    }

    pub fn evaluate(&self, x: &Point) -> Result<FiniteSet> {
        check_dim(self.dim(), x.dim())?;
        let x = x.coords();
        let raw: Vec<Vec<f64>> = match self {
            MultiMap::AffineSingle { a, b } => vec![affine(a, b, x)],
            MultiMap::TwoBranch { a1, b1, a2, b2 } => vec![affine(a1, b1, x), affine(a2, b2, x)],
            MultiMap::BallMap { a, b, radius } => {
                let center = affine(a, b, x);
                let mut pts = Vec::with_capacity(2 * center.len() + 1);
                pts.push(center.clone());
                for i in 0..center.len() {
                    for sign in [1.0, -1.0] {
                        let mut p = center.clone();
                        p[i] += sign * radius;
                        pts.push(p);
                    }
                }
                pts
            }
            MultiMap::PerturbedFamily { a, b, c, n } => {
                let inv = 1.0 / *n as f64;
                vec![affine(a, b, x).into_iter().zip(c).map(|(v, ci)| v + ci * inv).collect()]
            }
        };
        // Non-finite images are passed through so solvers can flag divergence.
        FiniteSet::new(raw.into_iter().map(Point::from_raw).collect())
    }
}

/// Coordinatewise `min_{b ∈ B} d(a, b)`.
pub fn point_to_set(a: &Point, set: &FiniteSet, metric: &MetricSpec) -> Result<ConeVector> {
    let m = metric.cone().dimension();
    let mut best = vec![f64::INFINITY; m];
    for b in set {
        let d = metric.distance(a, b)?;
        for (acc, v) in best.iter_mut().zip(d.coords()) {
            *acc = acc.min(*v);
        }
    }
    Ok(ConeVector::from_raw(best))
}

/// Least `r ⪰ 0` such that every point of `A` is within `r` of some point of `B`.
pub fn directed_distance(a: &FiniteSet, b: &FiniteSet, metric: &MetricSpec) -> Result<ConeVector> {
    check_dim(a.dim(), b.dim())?;
    let m = metric.cone().dimension();
    let mut worst = vec![0.0_f64; m];
    for p in a {
        let near = point_to_set(p, b, metric)?;
        for (acc, v) in worst.iter_mut().zip(near.coords()) {
            *acc = acc.max(*v);
        }
    }
    Ok(ConeVector::from_raw(worst))
}

pub fn hausdorff(a: &FiniteSet, b: &FiniteSet, metric: &MetricSpec) -> Result<ConeVector> {
    directed_distance(a, b, metric)?.sup(&directed_distance(b, a, metric)?)
}

/// Index of the point of `target` nearest to `y` in the norm of the cone
/// distance. Ties go to the lowest index.
pub fn select_index(y: &Point, target: &FiniteSet, metric: &MetricSpec) -> Result<usize> {
    let mut best = (0, f64::INFINITY);
    for (i, z) in target.iter().enumerate() {
        let d = metric.distance_norm(y, z)?;
        if d < best.1 {
            best = (i, d);
        }
    }
    Ok(best.0)
}

/// Nearest-point selection from `target`.
///
/// With a scalar metric and finite sets, the nearest point already satisfies
/// `d(y, z) ⪯ H(Tx, Ty) + ε` with `ε = 0`. With a vector-valued metric the
/// coordinatewise infimum need not be attained by one point, and no single
/// selection is guaranteed to meet that bound. `slack` is validated and
/// otherwise does not change the choice.
pub fn select(y: &Point, target: &FiniteSet, metric: &MetricSpec, slack: &ConeVector) -> Result<Point> {
    if target.is_empty() {
        return Err(Error::invalid("selection target is empty"));
    }
    if !metric.cone().contains(slack)? {
        return Err(Error::invalid("selection slack must lie in the cone"));
    }
    let i = select_index(y, target, metric)?;
    Ok(target.points()[i].clone())
}
