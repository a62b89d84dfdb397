//! Multicriteria (Pareto) steepest descent on Riemannian manifolds.
//!
//! The method iterates three steps from a start point p^0:
//!
//! 1. **Direction.** Solve the tangent-space subproblem
//!    `min_v max_i <grad f_i(p), v> + |v|^2 / 2`; its minimizer is minus the
//!    minimum-norm point of the convex hull of the objective gradients under
//!    the metric at p ([`direction`]).
//! 2. **Criticality.** Stop when `|v(p)|` is below the residual tolerance; a
//!    vanishing direction is exactly Pareto criticality.
//! 3. **Step.** Backtrack t = 1, 1/2, 1/4, ... until the componentwise
//!    Armijo inequality `F(exp_p(t v)) <= F(p) + beta t gradF(p)v` holds,
//!    then move along the exact geodesic ([`linesearch`], [`solver`]).
//!
//! Supported geometries ([`geometry`]): flat R^n, the positive octant under
//! the log-barrier metric, the unit hypercube under its barrier metric (both
//! isometric to flat space, so the full convergence theory applies), and the
//! SPD cone with the affine-invariant metric (nonpositive curvature:
//! criticality of accumulation points still holds, full convergence is not
//! claimed).
//!
//! The [`harness`] module adds benchmark problems, trajectory diagnostics
//! that re-check the theory numerically (monotone decrease, Fejér
//! inequality, step-energy summability, weak-Pareto sampling), trace/report
//! files and the `mcsd` CLI.
//!
//! Everything numeric is generic over the scalar type via [`scalar::Real`]
//! (`f32` or `f64`); the `*64` aliases below pin the common case.

pub mod direction;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod linesearch;
pub mod problem;
pub mod sampling;
pub mod scalar;
pub mod solver;

pub use error::{Error, Result};
pub use geometry::{ManifoldDescriptor, ManifoldKind};
pub use scalar::Real;

/// Concrete f64 aliases for the core value types.
pub type Point64 = geometry::Point<f64>;
pub type Tangent64 = geometry::Tangent<f64>;
pub type ObjectiveVector64 = problem::ObjectiveVector<f64>;
pub type Problem64 = problem::MulticriteriaProblem<f64>;
pub type DirectionResult64 = direction::DirectionResult<f64>;
pub type StepResult64 = linesearch::StepResult<f64>;
pub type SolverConfig64 = solver::SolverConfig<f64>;
pub type SolveReport64 = solver::SolveReport<f64>;

/// Concrete f32 aliases.
pub type Point32 = geometry::Point<f32>;
pub type Tangent32 = geometry::Tangent<f32>;
pub type ObjectiveVector32 = problem::ObjectiveVector<f32>;
pub type Problem32 = problem::MulticriteriaProblem<f32>;
