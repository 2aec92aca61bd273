//! Numerical workbench for the invariant Riemannian geometry of homogeneous
//! spaces described by Lie algebra structure constants.
//!
//! A space is a Lie algebra `g` with a reductive splitting `g = k (+) p` and a
//! background inner product making the chosen basis of `p` orthonormal.  On top
//! of that the crate computes
//!
//! * the moment map and the Ricci tensor of every invariant metric, by moving
//!   the Lie bracket instead of differentiating metric coefficients,
//! * the first variation of Ricci (equivalently the Lichnerowicz Laplacian on
//!   invariant tensors), Casimir operators and derivation directions,
//! * a classification of metrics by the kernel of the Ricci derivative and the
//!   sign of scalar curvature (local invertibility certificates),
//! * a damped Newton solver for the prescribed Ricci problem `ric(g) = c T`,
//!   together with a closed form for bi-invariant block families,
//! * a catalog of built-in spaces with closed-form curvature references.
//!
//! ```
//! use ricci_core::{catalog, classify, ricci, solve_prp, Certificate, SolveOptions};
//!
//! let entry = catalog::load("berger").unwrap();
//! let geom = &entry.geometry;
//! let truth = entry.metric_from_params(&[1.0, 0.7]).unwrap();
//! let report = classify(geom, &truth);
//! assert_eq!(report.certificate, Certificate::Certified);
//!
//! // recover the metric from its own Ricci tensor
//! let target = ricci(geom, &truth).ric_bar;
//! let start = entry.metric_from_params(&[1.0, 0.65]).unwrap();
//! let sol = solve_prp(geom, &target, &start, truth.det_rel, &SolveOptions::default()).unwrap();
//! assert!((sol.c - 1.0).abs() < 1e-8);
//! ```

pub mod catalog;
pub mod curvature;
pub mod invariant;
pub mod invertibility;
pub mod linalg;
pub mod rng;
pub mod solver;
pub mod space;
pub mod tol;
pub mod variation;
pub mod verify;

pub use curvature::{moment_map, ricci, ricci_tilde, scalar_curvature, CurvatureRecord};
pub use invariant::{InvariantSymBasis, MetricPoint};
pub use invertibility::{classify, signature_of, Certificate, ClassificationReport};
pub use solver::{dz_closed_form, solve_prp, DzBlocks, PrpSolution, SolveOptions};
pub use space::{Geometry, KillingData, SpaceSpec, ValidationReport};
pub use tol::Tolerances;
