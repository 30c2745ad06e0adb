//! Finite-dimensional ordered vector spaces `(R^m, P)` with `P` the
//! nonnegative orthant.
//!
//! The order is `a ⪯ b` iff `b - a ∈ P`, decided coordinate by coordinate.
//! The normality coefficient `κ` bounds `‖a‖ ≤ κ‖b‖` whenever `0 ⪯ a ⪯ b`.

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};

/// Default margin for the strict order `a ≺ b`.
pub const STRICT_TOL: f64 = 1e-12;

/// An element of the ambient ordered space `E = R^m`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ConeVector(Vec<f64>);

impl ConeVector {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::invalid("cone vector must have at least one coordinate"));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::invalid("cone vector coordinates must be finite"));
        }
        Ok(Self(coords))
    }

    pub fn zeros(m: usize) -> Self {
        Self(vec![0.0; m.max(1)])
    }

    /// The vector `(1, …, 1)`, an interior point of the orthant.
    pub fn ones(m: usize) -> Self {
        Self(vec![1.0; m.max(1)])
    }

    /// Builds a vector without the finiteness check. Callers guarantee the
    /// coordinates come from finite arithmetic or check later.
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

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|c| c.is_finite())
    }

    pub fn add(&self, other: &ConeVector) -> Result<ConeVector> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect()))
    }

    pub fn sub(&self, other: &ConeVector) -> Result<ConeVector> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a - b).collect()))
    }

    pub fn scale(&self, alpha: f64) -> ConeVector {
        Self(self.0.iter().map(|c| alpha * c).collect())
    }

    /// Coordinatewise maximum, the lattice supremum in the orthant order.
    pub fn sup(&self, other: &ConeVector) -> Result<ConeVector> {
        check_dim(self.dim(), other.dim())?;
        Ok(Self(self.0.iter().zip(&other.0).map(|(a, b)| a.max(*b)).collect()))
    }
}

impl TryFrom<Vec<f64>> for ConeVector {
    type Error = Error;

    fn try_from(coords: Vec<f64>) -> Result<Self> {
        Self::new(coords)
    }
}

impl From<ConeVector> for Vec<f64> {
    fn from(v: ConeVector) -> Self {
        v.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeKind {
    #[default]
    Orthant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum NormKind {
    Euclidean,
    Sup,
    /// `‖v‖ = sqrt(Σ (w_i v_i)²)` with positive weights.
    Weighted(Vec<f64>),
}

impl NormKind {
    pub fn validate(&self, m: usize) -> Result<()> {
        if let NormKind::Weighted(w) = self {
            check_dim(m, w.len())?;
            if w.iter().any(|&wi| !(wi.is_finite() && wi > 0.0)) {
                return Err(Error::invalid("norm weights must be positive and finite"));
            }
        }
        Ok(())
    }

    /// Evaluates the norm on raw coordinates. Dimensions are the caller's
    /// responsibility.
    pub fn eval(&self, v: &[f64]) -> f64 {
        match self {
            NormKind::Euclidean => v.iter().map(|c| c * c).sum::<f64>().sqrt(),
            NormKind::Sup => v.iter().fold(0.0, |acc: f64, c| acc.max(c.abs())),
            NormKind::Weighted(w) => v
                .iter()
                .zip(w)
                .map(|(c, wi)| (wi * c) * (wi * c))
                .sum::<f64>()
                .sqrt(),
        }
    }

    /// Normality coefficient of this norm on the orthant.
    pub fn normality_coefficient(&self) -> f64 {
        match self {
            NormKind::Euclidean | NormKind::Sup => 1.0,
            NormKind::Weighted(w) => {
                let max = w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let min = w.iter().cloned().fold(f64::INFINITY, f64::min);
                max / min
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConeSpecRepr {
    dimension: usize,
    #[serde(default)]
    kind: ConeKind,
    #[serde(default = "default_norm")]
    norm: NormKind,
    #[serde(default)]
    kappa: Option<f64>,
}

fn default_norm() -> NormKind {
    NormKind::Euclidean
}

/// The ordered space `(E, P)` together with its norm and normality coefficient.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ConeSpecRepr")]
pub struct ConeSpec {
    dimension: usize,
    kind: ConeKind,
    norm: NormKind,
    kappa: f64,
}

impl TryFrom<ConeSpecRepr> for ConeSpec {
    type Error = Error;

    fn try_from(repr: ConeSpecRepr) -> Result<Self> {
        let spec = ConeSpec::new(repr.dimension, repr.norm)?;
        if let Some(k) = repr.kappa {
            if (k - spec.kappa).abs() > 1e-12 * spec.kappa {
                return Err(Error::invalid(format!(
                    "kappa {k} inconsistent with norm (expected {})",
                    spec.kappa
                )));
            }
        }
        Ok(ConeSpec { kind: repr.kind, ..spec })
    }
}

impl ConeSpec {
    pub fn new(dimension: usize, norm: NormKind) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::invalid("cone dimension must be at least 1"));
        }
        norm.validate(dimension)?;
        let kappa = norm.normality_coefficient();
        Ok(Self { dimension, kind: ConeKind::Orthant, norm, kappa })
    }

    pub fn euclidean(dimension: usize) -> Self {
        Self::new(dimension, NormKind::Euclidean).expect("positive dimension")
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn kind(&self) -> ConeKind {
        self.kind
    }

    pub fn norm_kind(&self) -> &NormKind {
        &self.norm
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn contains(&self, v: &ConeVector) -> Result<bool> {
        check_dim(self.dimension, v.dim())?;
        Ok(v.coords().iter().all(|&c| c >= 0.0))
    }

    /// `a ⪯ b`.
    pub fn leq(&self, a: &ConeVector, b: &ConeVector) -> Result<bool> {
        check_dim(self.dimension, a.dim())?;
        check_dim(self.dimension, b.dim())?;
        Ok(a.coords().iter().zip(b.coords()).all(|(x, y)| y - x >= 0.0))
    }

    /// `a ⪯ b` with `tol` of slack on every coordinate.
    pub fn leq_tol(&self, a: &ConeVector, b: &ConeVector, tol: f64) -> Result<bool> {
        check_dim(self.dimension, a.dim())?;
        check_dim(self.dimension, b.dim())?;
        Ok(a.coords().iter().zip(b.coords()).all(|(x, y)| x - y <= tol))
    }

    /// `a ≺ b`: every coordinate of `b - a` exceeds `strict_tol`.
    pub fn strictly_less(&self, a: &ConeVector, b: &ConeVector, strict_tol: f64) -> Result<bool> {
        check_dim(self.dimension, a.dim())?;
        check_dim(self.dimension, b.dim())?;
        Ok(a.coords().iter().zip(b.coords()).all(|(x, y)| y - x > strict_tol))
    }

    pub fn norm(&self, v: &ConeVector) -> Result<f64> {
        check_dim(self.dimension, v.dim())?;
        Ok(self.norm.eval(v.coords()))
    }

    /// Lower estimate of `κ` as `max ‖a‖/‖b‖` over sample pairs `0 ⪯ a ⪯ b`.
    pub fn estimate_normality(&self, samples: &[(ConeVector, ConeVector)]) -> Result<f64> {
        if samples.is_empty() {
            return Err(Error::invalid("normality estimate needs at least one sample"));
        }
        let zero = ConeVector::zeros(self.dimension);
        let mut best = 0.0_f64;
        for (i, (a, b)) in samples.iter().enumerate() {
            if !self.leq(&zero, a)? || !self.leq(a, b)? {
                return Err(Error::invalid(format!("sample {i} violates 0 ⪯ a ⪯ b")));
            }
            let nb = self.norm(b)?;
            if nb == 0.0 {
                return Err(Error::invalid(format!("sample {i} has b = 0")));
            }
            best = best.max(self.norm(a)? / nb);
        }
        Ok(best)
    }
}
