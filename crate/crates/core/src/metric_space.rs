//! Cone metrics `d: X × X → P` on points of `R^n`.

use serde::{Deserialize, Serialize};

use crate::cone_order::{ConeSpec, ConeVector, NormKind};
use crate::error::{check_dim, Error, Result};

/// Per-coordinate slack used when checking the metric axioms.
pub const AXIOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Point(Vec<f64>);

impl Point {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("point must have at least one coordinate"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("point coordinates must be finite"));
        }
        Ok(Self(coords))
    }

    pub fn zeros(n: usize) -> Self {
        Self(vec![0.0; n.max(1)])
    }

    pub(crate) fn from_raw(coords: Vec<f64>) -> Self {
        Self(coords)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    /// Plain Euclidean distance in the ambient space, independent of any cone metric.
    pub fn euclidean_distance(&self, other: &Point) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

impl TryFrom<Vec<f64>> for Point {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Self::new(coords)
    }
}

impl From<Point> for Vec<f64> {
    fn from(p: Point) -> Self {
        p.0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricKind {
    /// `d(x,y) = ‖x − y‖`, valued in `R_+` (cone dimension 1).
    Scalar {
        #[serde(default = "euclidean")]
        norm: NormKind,
    },
    /// `d(x,y)_i = |x_i − y_i|`, valued in `R^n_+`.
    Componentwise,
}

fn euclidean() -> NormKind {
    NormKind::Euclidean
}

/// Anything that behaves like a cone metric. The builtin [`MetricSpec`] is
/// the only production implementor; the trait exists so the axiom checker
/// can be exercised against deliberately broken metrics.
pub trait ConeMetric {
    fn cone(&self) -> &ConeSpec;
    fn distance(&self, x: &Point, y: &Point) -> Result<ConeVector>;
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricSpec {
    kind: MetricKind,
    cone: ConeSpec,
}

impl MetricSpec {
    pub fn new(kind: MetricKind, cone: ConeSpec) -> Result<Self> {
        match &kind {
            MetricKind::Scalar { .. } if cone.dimension() != 1 => Err(Error::invalid(format!(
                "scalar metric needs a 1-dimensional cone, got {}",
                cone.dimension()
            ))),
            MetricKind::Scalar { norm: NormKind::Weighted(w) } if w.is_empty() => {
                Err(Error::invalid("scalar metric weights must be nonempty"))
            }
            _ => Ok(Self { kind, cone }),
        }
    }

    /// Classical Euclidean metric, valued in `R_+`.
    pub fn scalar_euclidean() -> Self {
        Self::new(MetricKind::Scalar { norm: NormKind::Euclidean }, ConeSpec::euclidean(1))
            .expect("valid builtin")
    }

    pub fn componentwise(n: usize) -> Self {
        Self::new(MetricKind::Componentwise, ConeSpec::euclidean(n)).expect("valid builtin")
    }

    pub fn kind(&self) -> &MetricKind {
        &self.kind
    }

    pub fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    /// Ambient dimension the metric is pinned to, if any.
    pub fn ambient_dim(&self) -> Option<usize> {
        match &self.kind {
            MetricKind::Componentwise => Some(self.cone.dimension()),
            MetricKind::Scalar { norm: NormKind::Weighted(w) } => Some(w.len()),
            MetricKind::Scalar { .. } => None,
        }
    }

    pub fn distance(&self, x: &Point, y: &Point) -> Result<ConeVector> {
        check_dim(x.dim(), y.dim())?;
        if let Some(n) = self.ambient_dim() {
            check_dim(n, x.dim())?;
        }
        Ok(self.distance_unchecked(x.coords(), y.coords()))
    }

    /// Norm of the cone distance, `‖d(x,y)‖`.
    pub fn distance_norm(&self, x: &Point, y: &Point) -> Result<f64> {
        let d = self.distance(x, y)?;
        Ok(self.cone.norm_kind().eval(d.coords()))
    }

    pub(crate) fn distance_unchecked(&self, x: &[f64], y: &[f64]) -> ConeVector {
        match &self.kind {
            MetricKind::Scalar { norm } => {
                let diff: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).collect();
                ConeVector::from_raw(vec![norm.eval(&diff)])
            }
            MetricKind::Componentwise => {
                ConeVector::from_raw(x.iter().zip(y).map(|(a, b)| (a - b).abs()).collect())
            }
        }
    }
}

impl ConeMetric for MetricSpec {
    fn cone(&self) -> &ConeSpec {
        &self.cone
    }

    fn distance(&self, x: &Point, y: &Point) -> Result<ConeVector> {
        MetricSpec::distance(self, x, y)
    }
}

/// Outcome of [`check_metric_axioms`]. Witnesses are indices into the
/// checked point list; the first violation of each kind is kept.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct AxiomReport {
    pub points: usize,
    pub pairs_checked: usize,
    pub triples_checked: usize,
    pub cone_violations: usize,
    pub identity_violations: usize,
    pub symmetry_violations: usize,
    pub triangle_violations: usize,
    pub first_cone_violation: Option<(usize, usize)>,
    pub first_identity_violation: Option<(usize, usize)>,
    pub first_symmetry_violation: Option<(usize, usize)>,
    pub first_triangle_violation: Option<(usize, usize, usize)>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.cone_violations == 0
            && self.identity_violations == 0
            && self.symmetry_violations == 0
            && self.triangle_violations == 0
    }
}

fn note<T>(count: &mut usize, first: &mut Option<T>, witness: T) {
    *count += 1;
    if first.is_none() {
        *first = Some(witness);
    }
}

/// Checks cone membership, identity of indiscernibles, symmetry and the cone
/// triangle inequality over every pair and triple drawn from `points`.
pub fn check_metric_axioms<M: ConeMetric + ?Sized>(
    metric: &M,
    points: &[Point],
) -> Result<AxiomReport> {
    if points.len() < 3 {
        return Err(Error::invalid("axiom check needs at least 3 points"));
    }
    let p = points.len();
    let m = metric.cone().dimension();

    // Row-major table of d(x_i, x_j), m coordinates each.
    let mut table = vec![0.0; p * p * m];
    for i in 0..p {
        for j in 0..p {
            let d = metric.distance(&points[i], &points[j])?;
            check_dim(m, d.dim())?;
            table[(i * p + j) * m..(i * p + j + 1) * m].copy_from_slice(d.coords());
        }
    }
    let at = |i: usize, j: usize| &table[(i * p + j) * m..(i * p + j + 1) * m];

    let mut report = AxiomReport { points: p, ..Default::default() };

    for i in 0..p {
        for j in 0..p {
            report.pairs_checked += 1;
            let d = at(i, j);
            if d.iter().any(|&c| c < -AXIOM_TOL) {
                note(&mut report.cone_violations, &mut report.first_cone_violation, (i, j));
            }
            let zero = d.iter().all(|&c| c.abs() <= AXIOM_TOL);
            let same = points[i] == points[j];
            if zero != same {
                note(&mut report.identity_violations, &mut report.first_identity_violation, (i, j));
            }
            if j > i && at(j, i).iter().zip(d).any(|(a, b)| (a - b).abs() > AXIOM_TOL) {
                note(&mut report.symmetry_violations, &mut report.first_symmetry_violation, (i, j));
            }
        }
    }

    // Column copy, so the inner loop over j reads both d(i, j) and d(j, k) contiguously.
    let mut columns = vec![0.0; p * p * m];
    for j in 0..p {
        for k in 0..p {
            columns[(k * p + j) * m..(k * p + j + 1) * m].copy_from_slice(at(j, k));
        }
    }

    for i in 0..p {
        let row = &table[i * p * m..(i + 1) * p * m];
        for k in 0..p {
            if k == i {
                continue;
            }
            let dik = at(i, k);
            let col = &columns[k * p * m..(k + 1) * p * m];
            let mut bad = 0usize;
            for (dij, djk) in row.chunks_exact(m).zip(col.chunks_exact(m)) {
                let mut ok = true;
                for c in 0..m {
                    ok &= dik[c] <= dij[c] + djk[c] + AXIOM_TOL;
                }
                bad += usize::from(!ok);
            }
            // The fast pass includes j = i and j = k; a hit there only triggers
            // the exact scan, which skips them.
            report.triples_checked += p - 2;
            if bad > 0 {
                for (j, (dij, djk)) in row.chunks_exact(m).zip(col.chunks_exact(m)).enumerate() {
                    if j == i || j == k {
                        continue;
                    }
                    if !(0..m).all(|c| dik[c] <= dij[c] + djk[c] + AXIOM_TOL) {
                        note(
                            &mut report.triangle_violations,
                            &mut report.first_triangle_violation,
                            (i, j, k),
                        );
                    }
                }
            }
        }
    }

    Ok(report)
}
