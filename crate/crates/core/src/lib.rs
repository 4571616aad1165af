//! Numerical toolkit for log-concave functions under Orlicz weights.
//!
//! `convex_core` holds grids, closed-form and sampled convex potentials, the
//! Legendre transform and Asplund sums. `orlicz_moments` classifies weights
//! and integrates `f omega`. `curvature_measures` builds the Euclidean,
//! spherical and body curvature measures. `variation` checks the first
//! variation of the moment, and `minkowski_solver` solves the even discrete
//! Minkowski problem.

pub mod convex_core;
pub mod curvature_measures;
pub mod error;
pub mod minkowski_solver;
mod numeric;
pub mod orlicz_moments;
pub mod variation;

pub use convex_core::{
    asplund_sum, legendre_transform, scalar_mult, superlevel_set, ClosedFormPrototype, ConvexBody, Grid,
    LogConcaveFunction, Point, Potential, Provenance, SampledConvexFunction,
};
pub use curvature_measures::{Ambient, Atom, DiscreteMeasure, MeasureComparison};
pub use error::{Error, Result};
pub use minkowski_solver::{solve, verify_solution, SolveOptions, SolveReport, TargetMeasure};
pub use orlicz_moments::{
    classify_weight, moment, MomentValue, Verdict, WeightClassification, WeightFunction, WeightKind,
};
pub use variation::{variation_check, VariationOptions, VariationReport};
