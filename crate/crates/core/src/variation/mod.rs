//! First variation of the Orlicz moment: difference quotients along Asplund
//! and Wulff families against the closed-form integrals.

use serde::Serialize;

use crate::convex_core::asplund::asplund_sum_on;
use crate::convex_core::body::{uniform_directions, wulff_shape, ConvexBody};
use crate::convex_core::grid::Grid;
use crate::convex_core::legendre::{auto_dual_grid, legendre_transform};
use crate::convex_core::logconcave::{LogConcaveFunction, Potential};
use crate::convex_core::sampled::SampledConvexFunction;
use crate::convex_core::Point;
use crate::curvature_measures::ops::{body_curvature_measure, spherical_curvature_measure, support_body};
use crate::error::{Error, Result};
use crate::orlicz_moments::moments::{admit_weight, dual_orlicz_volume};
use crate::orlicz_moments::quadrature;
use crate::orlicz_moments::weight::WeightFunction;

pub const DEFAULT_LADDER: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];
pub const DEFAULT_ALPHA: f64 = 0.5;
/// Node count of the default 1D variation grid (radius 8).
pub const VARIATION_M_1D: usize = 2049;
/// Node count per axis of the default 2D variation grid (radius 8).
pub const VARIATION_M_2D: usize = 129;
/// Directions of the Wulff family in the plane (facet normals of `K` are added).
pub const WULFF_DIRECTIONS: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegularityReport {
    pub alpha: f64,
    /// `(r, max_{|x| = r} |f(x) - f(o)| / r^{alpha + 1})` on `r = h, 2h, 4h, 8h`.
    pub shells: Vec<(f64, f64)>,
    pub pass: bool,
}

/// Heuristic check of `|f(x) - f(o)| = O(|x|^{1 + alpha})`: passes when the
/// shell ratio at `h` is within a factor 2 of the ratio at `8h`.
pub fn check_origin_regularity(f: &LogConcaveFunction, alpha: f64) -> Result<RegularityReport> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidInput(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    let h = f.natural_grid()?.h();
    let f0 = f.value(&[0.0, 0.0]);
    let dirs = uniform_directions(f.dim(), 16);
    let shells: Vec<(f64, f64)> = [1.0, 2.0, 4.0, 8.0]
        .iter()
        .map(|k| {
            let r = k * h;
            let worst = dirs
                .iter()
                .map(|u| (f.value(&[r * u[0], r * u[1]]) - f0).abs())
                .fold(0.0, f64::max);
            (r, worst / r.powf(alpha + 1.0))
        })
        .collect();
    let pass = shells[0].1 <= 2.0 * shells[3].1 + 1e-300;
    Ok(RegularityReport { alpha, shells, pass })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationOptions {
    pub ladder: Vec<f64>,
    /// Grid of the sampled pipeline; `None` picks the default variation grid.
    pub grid: Option<Grid>,
    pub alpha: f64,
}

impl Default for VariationOptions {
    fn default() -> Self {
        Self {
            ladder: DEFAULT_LADDER.to_vec(),
            grid: None,
            alpha: DEFAULT_ALPHA,
        }
    }
}

pub fn default_variation_grid(dim: usize) -> Result<Grid> {
    Grid::new(dim, 8.0, if dim == 1 { VARIATION_M_1D } else { VARIATION_M_2D })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderPoint {
    pub t: f64,
    pub value: f64,
    pub quotient: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NumericVariation {
    /// Two-point Richardson extrapolation from the two largest `t`.
    pub value: f64,
    pub base: f64,
    pub ladder: Vec<LadderPoint>,
}

fn richardson(ladder: &[LadderPoint]) -> f64 {
    match ladder {
        [a, b, ..] => {
            let r = a.t / b.t;
            (r * b.quotient - a.quotient) / (r - 1.0)
        }
        [a] => a.quotient,
        [] => f64::NAN,
    }
}

fn check_ladder(ladder: &[f64]) -> Result<()> {
    if ladder.is_empty() || ladder.iter().any(|t| !(*t > 0.0)) || ladder.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput(
            "ladder must be positive and strictly decreasing".into(),
        ));
    }
    Ok(())
}

/// `(V(f (+) t.g) - V(f)) / t` over the ladder, both moments taken through the
/// same sampled pipeline.
pub fn variation_numeric(
    f: &LogConcaveFunction,
    g: &LogConcaveFunction,
    omega: &WeightFunction,
    options: &VariationOptions,
) -> Result<NumericVariation> {
    check_ladder(&options.ladder)?;
    if g.compact_support().is_none() && !g.as_sampled().is_some_and(|s| s.has_bounded_support()) {
        return Err(Error::NonCompactPerturbation);
    }
    admit_weight(omega)?;
    let grid = match &options.grid {
        Some(g) => g.clone(),
        None => default_variation_grid(f.dim())?,
    };
    let moment = |h: &LogConcaveFunction| -> Result<f64> { Ok(quadrature::build(h, omega, &grid, None)?.total()) };
    let base_fn: LogConcaveFunction = f.sample(&grid)?.into();
    let base = moment(&base_fn)?;
    let mut ladder = Vec::with_capacity(options.ladder.len());
    for &t in &options.ladder {
        let value = moment(&asplund_sum_on(f, t, g, &grid)?)?;
        ladder.push(LadderPoint {
            t,
            value,
            quotient: (value - base) / t,
        });
    }
    Ok(NumericVariation {
        value: richardson(&ladder),
        base,
        ladder,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedFormVariation {
    pub value: f64,
    /// `int psi^*(grad phi) f omega dx`.
    pub euclidean_part: f64,
    /// `int h_{K_g}(nu) dC^s_omega(f, .)`.
    pub spherical_part: f64,
}

/// `psi^*` of the perturbation: exact for closed forms, otherwise the
/// interpolated discrete transform (linearly extrapolated off its grid).
fn conjugate_of(g: &LogConcaveFunction) -> Result<Box<dyn Fn(&Point) -> f64 + '_>> {
    match g.potential() {
        Potential::Closed(p) => Ok(Box::new(move |y| p.conjugate(y).unwrap_or(f64::INFINITY))),
        Potential::Sampled(s) => {
            let dual = auto_dual_grid(s)?;
            let conj: SampledConvexFunction = legendre_transform(s, &dual)?;
            Ok(Box::new(move |y| conj.interpolate(y).unwrap_or(f64::INFINITY)))
        }
    }
}

/// `int psi^* dC^e_omega(f, .) + int h_{K_g} dC^s_omega(f, .)`, with the
/// Euclidean part integrated against the unbinned pushforward.
pub fn variation_closed_form(
    f: &LogConcaveFunction,
    g: &LogConcaveFunction,
    omega: &WeightFunction,
) -> Result<ClosedFormVariation> {
    admit_weight(omega)?;
    let kg = support_body(g).map_err(|_| Error::NonCompactPerturbation)?;
    let psi_star = conjugate_of(g)?;
    let q = quadrature::build(f, omega, &f.natural_grid()?, None)?;
    let euclidean_part: f64 = q.points.iter().map(|p| psi_star(&p.grad) * p.mass()).sum();
    let spherical_part = match spherical_curvature_measure(f, omega) {
        Ok(c) => c.integrate(|v| kg.support(v)),
        Err(Error::UnboundedSupport) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(ClosedFormVariation {
        value: euclidean_part + spherical_part,
        euclidean_part,
        spherical_part,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VariationReport {
    pub numeric_derivative: f64,
    pub closed_form: f64,
    pub relative_gap: f64,
    pub condition_alpha_check: Option<RegularityReport>,
    /// Set when the origin regularity check fails.
    pub outside_hypotheses: bool,
    pub ladder: Vec<LadderPoint>,
}

fn gap(numeric: f64, closed: f64) -> f64 {
    (numeric - closed).abs() / closed.abs().max(1.0)
}

/// Runs both sides of the variational formula and the origin regularity check.
pub fn variation_check(
    f: &LogConcaveFunction,
    g: &LogConcaveFunction,
    omega: &WeightFunction,
    options: &VariationOptions,
) -> Result<VariationReport> {
    let regularity = check_origin_regularity(f, options.alpha)?;
    let numeric = variation_numeric(f, g, omega, options)?;
    let closed = variation_closed_form(f, g, omega)?;
    Ok(VariationReport {
        numeric_derivative: numeric.value,
        closed_form: closed.value,
        relative_gap: gap(numeric.value, closed.value),
        outside_hypotheses: !regularity.pass,
        condition_alpha_check: Some(regularity),
        ladder: numeric.ladder,
    })
}

/// Directions of the Wulff family for `K`: a uniform set plus the facet normals.
pub fn wulff_directions(k: &ConvexBody) -> Vec<Point> {
    let mut dirs = uniform_directions(k.dim(), WULFF_DIRECTIONS);
    for fc in k.facets() {
        if !dirs
            .iter()
            .any(|d| (d[0] - fc.normal[0]).abs() + (d[1] - fc.normal[1]).abs() < 1e-12)
        {
            dirs.push(fc.normal);
        }
    }
    dirs
}

/// Wulff family `[h_K + t g]` against `int g / h_K dC_omega(K, .)`.
pub fn geometric_variation(
    k: &ConvexBody,
    g: &dyn Fn(&Point) -> f64,
    omega: &WeightFunction,
    ladder: &[f64],
) -> Result<VariationReport> {
    check_ladder(ladder)?;
    let c = body_curvature_measure(k, omega)?;
    let closed = c.integrate(|v| g(v) / k.support(v));
    let dirs = wulff_directions(k);
    let family = |t: f64| -> Result<f64> {
        let values: Vec<f64> = dirs.iter().map(|u| k.support(u) + t * g(u)).collect();
        if values.iter().any(|v| *v <= 0.0) {
            return Err(Error::WulffDegenerate { t });
        }
        let body = wulff_shape(k.dim(), &dirs, &values)?;
        Ok(dual_orlicz_volume(&body, omega)?.value)
    };
    let base = family(0.0)?;
    let mut points = Vec::with_capacity(ladder.len());
    for &t in ladder {
        let value = family(t)?;
        points.push(LadderPoint {
            t,
            value,
            quotient: (value - base) / t,
        });
    }
    let numeric = richardson(&points);
    Ok(VariationReport {
        numeric_derivative: numeric,
        closed_form: closed,
        relative_gap: gap(numeric, closed),
        condition_alpha_check: None,
        outside_hypotheses: false,
        ladder: points,
    })
}
