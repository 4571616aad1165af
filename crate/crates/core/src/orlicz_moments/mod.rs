//! Weights, their admissibility classification and the Orlicz moments.

pub mod classify;
pub mod moments;
pub mod quadrature;
pub mod weight;

pub use classify::{classify_weight, Verdict, WeightClassification};
pub use moments::{
    b_t, dual_entropy_moment, dual_orlicz_volume, f_growth_classification, f_omega, f_omega_numeric, gradient_moment,
    moment, moment_on, omega_bar, MomentValue,
};
pub use weight::{sphere_area, FGrowth, WeightFunction, WeightKind};
