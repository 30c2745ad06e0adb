//! Sampled certificates for the weak-contraction inequality
//!
//! ```text
//! H(Tx, Ty) ⪯ δ·d(x, y) + L·inf_{z ∈ Ty} d(x, z)
//! ```
//!
//! and the comparator condition for uniqueness of the fixed point.
//!
//! Constants are fitted from sample pairs, so a certificate is a lower bound
//! on the true `(δ, L)`: it says the inequality holds on the pairs checked,
//! not on the whole space.

use serde::{Deserialize, Serialize};

use crate::cone_order::{ConeVector, STRICT_TOL};
use crate::error::{Error, Result};
use crate::metric_space::{MetricSpec, Point};
use crate::setmap::{hausdorff, point_to_set, MultiMap};

/// Coordinates of `d(x,y)` at or below this are excluded from the δ ratio.
pub const FIT_TOL: f64 = 1e-10;

pub fn default_l_grid() -> Vec<f64> {
    (0..10).map(|i| i as f64 / 10.0).collect()
}

/// One sample pair with the quantities entering the inequality.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evidence {
    pub x: Point,
    pub y: Point,
    pub hausdorff: ConeVector,
    pub distance: ConeVector,
    pub infdist: ConeVector,
    /// `δ·d + L·infdist − H`; nonnegative up to `FIT_TOL` when the pair is covered.
    pub slack: ConeVector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContractionCertificate {
    pub delta: f64,
    #[serde(rename = "L")]
    pub l: f64,
    pub kappa: f64,
    pub hypotheses_hold: bool,
    #[serde(default)]
    pub evidence: Vec<Evidence>,
    #[serde(default)]
    pub worst_pair: Option<(Point, Point)>,
}

/// `δκ < 1` and `Lκ < 1 − δκ`.
pub fn hypotheses_hold(delta: f64, l: f64, kappa: f64) -> bool {
    delta * kappa < 1.0 && l * kappa < 1.0 - delta * kappa
}

impl ContractionCertificate {
    /// A certificate from user-supplied constants, with no sampled evidence.
    pub fn given(delta: f64, l: f64, kappa: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::invalid(format!("delta must lie in (0,1), got {delta}")));
        }
        if !(l >= 0.0 && l.is_finite()) {
            return Err(Error::invalid(format!("L must be finite and ≥ 0, got {l}")));
        }
        if !(kappa >= 1.0 && kappa.is_finite()) {
            return Err(Error::invalid(format!("kappa must be ≥ 1, got {kappa}")));
        }
        Ok(Self {
            delta,
            l,
            kappa,
            hypotheses_hold: hypotheses_hold(delta, l, kappa),
            evidence: Vec::new(),
            worst_pair: None,
        })
    }

    /// Re-checks every evidence pair against the stored `(δ, L)`.
    pub fn recheck(&self) -> bool {
        self.hypotheses_hold == hypotheses_hold(self.delta, self.l, self.kappa)
            && self.evidence.iter().all(|e| {
                e.hausdorff
                    .coords()
                    .iter()
                    .zip(e.distance.coords())
                    .zip(e.infdist.coords())
                    .all(|((h, d), inf)| *h <= self.delta * d + self.l * inf + FIT_TOL)
            })
    }
}

struct PairData {
    x: Point,
    y: Point,
    h: ConeVector,
    d: ConeVector,
    inf: ConeVector,
}

fn pair_data(map: &MultiMap, metric: &MetricSpec, pairs: &[(Point, Point)]) -> Result<Vec<PairData>> {
    if pairs.is_empty() {
        return Err(Error::invalid("certification needs at least one sample pair"));
    }
    let mut out = Vec::with_capacity(pairs.len());
    for (x, y) in pairs {
        if x == y {
            continue;
        }
        let tx = map.evaluate(x)?;
        let ty = map.evaluate(y)?;
        out.push(PairData {
            x: x.clone(),
            y: y.clone(),
            h: hausdorff(&tx, &ty, metric)?,
            d: metric.distance(x, y)?,
            inf: point_to_set(x, &ty, metric)?,
        });
    }
    if out.is_empty() {
        return Err(Error::invalid("every sample pair has x = y"));
    }
    Ok(out)
}

/// Minimal δ for a fixed L over the sampled pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaFit {
    /// `+∞` when a coordinate with `d_i ≤ FIT_TOL` cannot be covered by the L term;
    /// `-∞` when no coordinate entered the ratio.
    pub delta: f64,
    /// Index (into the non-degenerate pairs) of the pair attaining `delta`.
    pub worst: Option<usize>,
}

fn fit_on(data: &[PairData], l: f64) -> DeltaFit {
    let mut fit = DeltaFit { delta: f64::NEG_INFINITY, worst: None };
    for (k, p) in data.iter().enumerate() {
        for ((h, d), inf) in p.h.coords().iter().zip(p.d.coords()).zip(p.inf.coords()) {
            let ratio = if *d > FIT_TOL {
                (h - l * inf) / d
            } else if *h <= l * inf + FIT_TOL {
                continue;
            } else {
                f64::INFINITY
            };
            if ratio > fit.delta {
                fit = DeltaFit { delta: ratio, worst: Some(k) };
            }
        }
    }
    fit
}

/// `δ(L) = max over pairs and coordinates of (H_i − L·inf_i) / d_i`.
pub fn fit_delta(map: &MultiMap, metric: &MetricSpec, pairs: &[(Point, Point)], l: f64) -> Result<DeltaFit> {
    Ok(fit_on(&pair_data(map, metric, pairs)?, l))
}

/// Fits `(δ, L)` over `l_grid` and returns the admissible entry (δ ∈ (0,1))
/// with the smallest `(δ + L)κ`.
///
/// When no entry is admissible the error carries the smallest δ seen (ties
/// go to the larger L, whose worst pair is the one no L can fix).
pub fn certify(
    map: &MultiMap,
    metric: &MetricSpec,
    pairs: &[(Point, Point)],
    l_grid: &[f64],
) -> Result<ContractionCertificate> {
    if l_grid.is_empty() {
        return Err(Error::invalid("L grid must be nonempty"));
    }
    if l_grid.iter().any(|l| !(l.is_finite() && *l >= 0.0)) {
        return Err(Error::invalid("L grid entries must be finite and ≥ 0"));
    }
    let data = pair_data(map, metric, pairs)?;
    let kappa = metric.cone().kappa();

    let mut best: Option<(f64, f64, Option<usize>)> = None;
    let mut fallback: Option<(f64, f64, Option<usize>)> = None;
    for &l in l_grid {
        let fit = fit_on(&data, l);
        // δ ≤ 0 means the sample is covered by the L term alone; floor it.
        let delta = fit.delta.max(FIT_TOL);
        let score = (delta + l) * kappa;
        if delta < 1.0 {
            if best.is_none_or(|(d, bl, _)| score < (d + bl) * kappa) {
                best = Some((delta, l, fit.worst));
            }
        } else if fallback.is_none_or(|(d, bl, _)| delta < d || (delta == d && l > bl)) {
            fallback = Some((delta, l, fit.worst));
        }
    }

    let pair_of = |w: Option<usize>| w.map(|k| (data[k].x.clone(), data[k].y.clone()));

    let Some((delta, l, worst)) = best else {
        let (d, bl, w) = fallback.expect("grid nonempty");
        let (x, y) = pair_of(w).unwrap_or_else(|| (data[0].x.clone(), data[0].y.clone()));
        return Err(Error::NoCertificate {
            best_delta: d,
            best_l: bl,
            worst_pair: (x.into_coords(), y.into_coords()),
        });
    };

    let evidence = data
        .iter()
        .map(|p| {
            let slack = p
                .d
                .coords()
                .iter()
                .zip(p.inf.coords())
                .zip(p.h.coords())
                .map(|((d, inf), h)| delta * d + l * inf - h)
                .collect();
            Evidence {
                x: p.x.clone(),
                y: p.y.clone(),
                hausdorff: p.h.clone(),
                distance: p.d.clone(),
                infdist: p.inf.clone(),
                slack: ConeVector::from_raw(slack),
            }
        })
        .collect();

    Ok(ContractionCertificate {
        delta,
        l,
        kappa,
        hypotheses_hold: hypotheses_hold(delta, l, kappa),
        evidence,
        worst_pair: pair_of(worst),
    })
}

/// Comparator `φ: P → P` for the uniqueness condition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ComparatorFn {
    /// `φ(p) = c·p`, `c ∈ (0,1)`.
    Linear { c: f64 },
}

impl ComparatorFn {
    pub fn linear(c: f64) -> Result<Self> {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::invalid(format!("linear comparator needs c in (0,1), got {c}")));
        }
        Ok(ComparatorFn::Linear { c })
    }

    pub fn apply(&self, p: &ConeVector) -> ConeVector {
        match self {
            ComparatorFn::Linear { c } => p.scale(*c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniquenessCheck {
    /// No violation found on the provided pairs. This is not a proof over all `x ≠ y`.
    pub holds: bool,
    pub violating_pair: Option<(Point, Point)>,
}

/// Checks `H(Tx, Ty) ≺ d(x,y) − φ(d(x,y))` on every pair, in the strict
/// order with margin `STRICT_TOL`.
pub fn check_uniqueness_condition(
    map: &MultiMap,
    metric: &MetricSpec,
    phi: &ComparatorFn,
    pairs: &[(Point, Point)],
) -> Result<UniquenessCheck> {
    let cone = metric.cone();
    for (x, y) in pairs {
        if x == y {
            return Err(Error::invalid("uniqueness check needs pairs with x ≠ y"));
        }
        let h = hausdorff(&map.evaluate(x)?, &map.evaluate(y)?, metric)?;
        let d = metric.distance(x, y)?;
        let rhs = d.sub(&phi.apply(&d))?;
        if !cone.strictly_less(&h, &rhs, STRICT_TOL)? {
            return Ok(UniquenessCheck { holds: false, violating_pair: Some((x.clone(), y.clone())) });
        }
    }
    Ok(UniquenessCheck { holds: true, violating_pair: None })
}
