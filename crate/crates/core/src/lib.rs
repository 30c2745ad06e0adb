//! Fixed-point iteration for set-valued weak contractions on cone metric
//! spaces over finite-dimensional orthant cones.
//!
//! The building blocks are layered bottom-up:
//!
//! * [`cone_order`]: the ordered space `(R^m, P)`, its norm and normality coefficient.
//! * [`metric_space`]: cone metrics on `R^n` and an axiom checker.
//! * [`setmap`]: finite point sets, the set-valued map catalog, the Hausdorff
//!   cone metric and nearest-point selection.
//! * [`contraction`]: sampled `(δ, L)` certificates and the uniqueness comparator check.
//! * [`solvers`]: Picard and λ-averaged selection iterations, multistart
//!   fixed-point sets and the stability experiment.
//! * [`applications`]: differential inclusions and multivalued variational inequalities.
//! * [`cli`]: the JSON-driven command-line front end.

pub mod applications;
pub mod cli;
pub mod cone_order;
pub mod contraction;
pub mod error;
pub mod metric_space;
pub mod setmap;
pub mod solvers;

pub use cone_order::{ConeSpec, ConeVector, NormKind};
pub use contraction::{certify, check_uniqueness_condition, ComparatorFn, ContractionCertificate};
pub use error::{Error, Result};
pub use metric_space::{check_metric_axioms, MetricKind, MetricSpec, Point};
pub use setmap::{directed_distance, hausdorff, select, FiniteSet, Matrix, MultiMap};
pub use solvers::{
    fixed_point_set, lambda_iterate, picard_selection, residual, stability_experiment, ConvergenceReport,
    SolverConfig, Status,
};
