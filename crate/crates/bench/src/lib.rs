//! Shared inputs for the benchmarks.

use orlicz_core::curvature_measures::{Ambient, Atom, DiscreteMeasure};
use orlicz_core::{ClosedFormPrototype, ConvexBody, Grid, LogConcaveFunction, SampledConvexFunction, TargetMeasure};

pub fn gaussian(dim: usize) -> LogConcaveFunction {
    ClosedFormPrototype::Gaussian { dim }.into()
}

pub fn cone(dim: usize) -> LogConcaveFunction {
    ClosedFormPrototype::exponential_cone(dim, 1.0).unwrap().into()
}

pub fn unit_interval() -> LogConcaveFunction {
    ClosedFormPrototype::Indicator {
        body: ConvexBody::interval(-1.0, 1.0).unwrap(),
    }
    .into()
}

pub fn unit_square() -> LogConcaveFunction {
    ClosedFormPrototype::Indicator {
        body: ConvexBody::cube(2, 1.0).unwrap(),
    }
    .into()
}

/// The Gaussian potential sampled on a grid of `m` nodes per axis and radius 8.
pub fn sampled_gaussian(dim: usize, m: usize) -> SampledConvexFunction {
    gaussian(dim).sample(&Grid::new(dim, 8.0, m).unwrap()).unwrap()
}

/// `delta_{-1} + delta_1`.
pub fn two_atoms() -> TargetMeasure {
    target(1, &[([-1.0, 0.0], 1.0), ([1.0, 0.0], 1.0)])
}

/// Unit masses at `+-e_1` and `+-e_2`.
pub fn four_atoms() -> TargetMeasure {
    target(
        2,
        &[
            ([1.0, 0.0], 1.0),
            ([-1.0, 0.0], 1.0),
            ([0.0, 1.0], 1.0),
            ([0.0, -1.0], 1.0),
        ],
    )
}

fn target(dim: usize, atoms: &[([f64; 2], f64)]) -> TargetMeasure {
    let atoms = atoms.iter().map(|&(location, mass)| Atom { location, mass }).collect();
    TargetMeasure::new(DiscreteMeasure::new(Ambient::Euclidean(dim), atoms).unwrap()).unwrap()
}
