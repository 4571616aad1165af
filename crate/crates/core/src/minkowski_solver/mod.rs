//! Even discrete dual Orlicz Minkowski problem: finite-dimensional ascent on
//! the offsets of a max-affine conjugate potential.

pub mod cells;
pub mod solve;
pub mod target;

pub use cells::{cell_masses, solver_dual_grid, CellMasses};
pub use solve::{
    per_atom_errors, solve, verify_solution, ConcavityCheck, MomentBoundCheck, SolveOptions, SolveReport, TracePoint,
};
pub use target::{check_solvability_condition, SolvabilityReport, SolvabilityVerdict, TargetMeasure};
