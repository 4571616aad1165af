use serde::Serialize;

use super::grid::Grid;
use super::logconcave::LogConcaveFunction;
use crate::orlicz_moments::quadrature;
use crate::orlicz_moments::weight::WeightFunction;

/// Relative growth of `int f` from radius `R/2` to `R` above which the
/// integral is considered divergent.
pub const TRUNCATION_GROWTH_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MembershipReport {
    pub integral: f64,
    /// Richardson extrapolation of the integral from spacings `h` and `2h`.
    pub integral_extrapolated: Option<f64>,
    pub integral_half_radius: f64,
    pub truncation_converged: bool,
    /// Smallest `phi(x)/|x|` over the outer shell; infinite when the shell is
    /// outside the domain.
    pub liminf_ratio: f64,
    pub member: bool,
}

fn integral(f: &LogConcaveFunction, grid: &Grid) -> Option<f64> {
    let w = WeightFunction::constant(grid.dim());
    quadrature::build(f, &w, grid, None).ok().map(|q| q.total())
}

/// Checks `0 < int f < infinity` on the natural grid of `f`.
pub fn check_membership_lcn(f: &LogConcaveFunction) -> MembershipReport {
    let grid = match f.natural_grid() {
        Ok(g) => g,
        Err(_) => {
            return MembershipReport {
                integral: f64::NAN,
                integral_extrapolated: None,
                integral_half_radius: f64::NAN,
                truncation_converged: false,
                liminf_ratio: f64::NAN,
                member: false,
            }
        }
    };
    let full = integral(f, &grid).unwrap_or(f64::NAN);
    let half_m = (grid.m() - 1) / 2 + 1;
    let half = Grid::with_half_widths(grid.dim(), [grid.half_width(0) / 2.0, grid.half_width(1) / 2.0], half_m)
        .ok()
        .and_then(|g| integral(f, &g))
        .unwrap_or(f64::NAN);
    let extrapolated = grid
        .refined(half_m)
        .ok()
        .filter(|g| g.m() == half_m)
        .and_then(|g| integral(f, &g))
        .map(|coarse| full + (full - coarse) / 3.0);
    let converged = full.is_finite() && half.is_finite() && (full - half).abs() <= TRUNCATION_GROWTH_LIMIT * full.abs();

    let mut ratio = f64::INFINITY;
    for k in 0..grid.len() {
        if !grid.is_outer(k) {
            continue;
        }
        let x = grid.node(k);
        if let Some(phi) = f.phi(&x) {
            ratio = ratio.min(phi / x[0].hypot(x[1]));
        }
    }
    let member = full > 0.0 && full.is_finite() && converged && ratio > 0.0;
    MembershipReport {
        integral: full,
        integral_extrapolated: extrapolated,
        integral_half_radius: half,
        truncation_converged: converged,
        liminf_ratio: ratio,
        member,
    }
}
