//! Every numeric default used by the commands, as printed by `--show-defaults`.

use orlicz_core::convex_core::asplund::DUAL_REFINEMENT_2D;
use orlicz_core::convex_core::membership::TRUNCATION_GROWTH_LIMIT;
use orlicz_core::curvature_measures::measure::{ATOM_DROP_FRACTION, SLICED_ANGLES};
use orlicz_core::curvature_measures::ops::{DEGENERATE_FRACTION, FACET_NODES};
use orlicz_core::minkowski_solver::cells::{DECAY_SPAN, DUAL_M_1D, DUAL_M_2D, MIN_DUAL_RADIUS, TAIL_LIMIT};
use orlicz_core::minkowski_solver::solve::{
    ARMIJO, BACKTRACK, CONCAVITY_TOL, DEFAULT_KKT_TOL, DEFAULT_MAX_ITERATIONS, MIN_STEP, RECOVERY_SUBCELLS, STALL_LIMIT,
};
use orlicz_core::minkowski_solver::target::{EVEN_TOL, MIN_ATOM_FRACTION, SOLVABILITY_PROBES, ZETA_SWEEP};
use orlicz_core::orlicz_moments::classify::A3_THRESHOLD;
use orlicz_core::orlicz_moments::moments::{ANGULAR_DIRECTIONS, ARC_NODES, SHELL_LIMIT, TRUNCATION_FLAG};
use orlicz_core::orlicz_moments::quadrature::{
    NEAR_ORIGIN_CELLS, NEAR_ORIGIN_SUBCELLS, ORIGIN_FAN_DIRECTIONS, ORIGIN_FAN_PIECES, SUBCELLS_1D, SUBCELLS_2D,
};
use orlicz_core::variation::{DEFAULT_ALPHA, DEFAULT_LADDER, VARIATION_M_1D, VARIATION_M_2D, WULFF_DIRECTIONS};
use orlicz_core::Grid;
use serde_json::{json, Value};

use crate::io::BALL_VERTICES;

/// Levels sampled by `coarea-check`.
pub const COAREA_LEVELS: usize = 64;

pub fn table() -> Value {
    json!({
        "grid": { "R": Grid::DEFAULT_R, "m_1d": Grid::DEFAULT_M_1D, "m_2d": Grid::DEFAULT_M_2D },
        "asplund": { "dual_refinement_2d": DUAL_REFINEMENT_2D },
        "membership": { "truncation_growth_limit": TRUNCATION_GROWTH_LIMIT },
        "weights": { "a3_threshold": A3_THRESHOLD },
        "moments": {
            "truncation_flag": TRUNCATION_FLAG,
            "shell_limit": SHELL_LIMIT,
            "angular_directions": ANGULAR_DIRECTIONS,
            "arc_nodes": ARC_NODES,
        },
        "quadrature": {
            "origin_fan_directions": ORIGIN_FAN_DIRECTIONS,
            "origin_fan_pieces": ORIGIN_FAN_PIECES,
            "subcells_1d": SUBCELLS_1D,
            "subcells_2d": SUBCELLS_2D,
            "near_origin_subcells": NEAR_ORIGIN_SUBCELLS,
            "near_origin_cells": NEAR_ORIGIN_CELLS,
        },
        "curvature_measures": {
            "facet_nodes": FACET_NODES,
            "sliced_angles": SLICED_ANGLES,
            "atom_drop_fraction": ATOM_DROP_FRACTION,
            "degenerate_fraction": DEGENERATE_FRACTION,
            "coarea_levels": COAREA_LEVELS,
            "ball_vertices": BALL_VERTICES,
        },
        "variation": {
            "ladder": DEFAULT_LADDER,
            "alpha": DEFAULT_ALPHA,
            "m_1d": VARIATION_M_1D,
            "m_2d": VARIATION_M_2D,
            "wulff_directions": WULFF_DIRECTIONS,
        },
        "solver": {
            "kkt_tol": DEFAULT_KKT_TOL,
            "max_iterations": DEFAULT_MAX_ITERATIONS,
            "armijo": ARMIJO,
            "backtrack": BACKTRACK,
            "min_step": MIN_STEP,
            "stall_limit": STALL_LIMIT,
            "concavity_tol": CONCAVITY_TOL,
            "recovery_subcells": RECOVERY_SUBCELLS,
            "dual_m_1d": DUAL_M_1D,
            "dual_m_2d": DUAL_M_2D,
            "min_dual_radius": MIN_DUAL_RADIUS,
            "decay_span": DECAY_SPAN,
            "tail_limit": TAIL_LIMIT,
            "even_tol": EVEN_TOL,
            "min_atom_fraction": MIN_ATOM_FRACTION,
            "zeta_sweep": ZETA_SWEEP,
            "solvability_probes": SOLVABILITY_PROBES,
        },
    })
}
