//! Grid and closed-form convex potentials, the Legendre transform, Asplund
//! calculus and polytope primitives.

pub mod asplund;
pub mod body;
pub mod geometry;
pub mod grid;
pub mod legendre;
pub mod logconcave;
pub mod membership;
pub mod prototype;
pub mod sampled;

/// Point of the plane; 1D data uses the first coordinate and keeps the second at zero.
pub type Point = [f64; 2];

pub use asplund::{asplund_sum, asplund_sum_on, scalar_mult, scalar_mult_on};
pub use body::{uniform_directions, wulff_shape, ConvexBody, Facet};
pub use grid::Grid;
pub use legendre::{auto_dual_grid, biconjugate, legendre_transform, PiecewiseLinear};
pub use logconcave::{superlevel_set, LogConcaveFunction, Potential};
pub use membership::{check_membership_lcn, MembershipReport};
pub use prototype::ClosedFormPrototype;
pub use sampled::{Provenance, SampledConvexFunction};
