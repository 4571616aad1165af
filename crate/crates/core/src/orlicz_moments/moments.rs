use std::f64::consts::PI;

use serde::Serialize;

use crate::convex_core::body::ConvexBody;
use crate::convex_core::grid::Grid;
use crate::convex_core::logconcave::{LogConcaveFunction, Potential};
use crate::convex_core::Point;
use crate::error::{Error, Result};
use crate::numeric::{gauss_legendre, integrate_from_zero, integrate_to_infinity};

use super::classify::classify_weight;
use super::quadrature::{self, Quadrature};
use super::weight::{FGrowth, WeightFunction};

/// Relative disagreement between radii `R` and `R/2` above which a moment is flagged.
pub const TRUNCATION_FLAG: f64 = 1e-2;
/// Outer-shell mass fraction above which a moment is rejected.
pub const SHELL_LIMIT: f64 = 1e-2;
/// Directions used for numeric angular integrals of non-polytopal quantities.
pub const ANGULAR_DIRECTIONS: usize = 256;
/// Gauss–Legendre nodes per angular arc between consecutive vertex directions.
pub const ARC_NODES: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentValue {
    pub value: f64,
    /// `|V_R - V_{R/2}|`.
    pub truncation_estimate: f64,
    pub quadrature_estimate: f64,
    /// Set when the truncation estimate exceeds 1% of the value.
    pub truncation_flag: bool,
}

pub(crate) fn admit_weight(omega: &WeightFunction) -> Result<()> {
    let c = classify_weight(omega)?;
    if c.any_fail() {
        return Err(Error::WeightRejected(format!("{} fail", c.failures().join(", "))));
    }
    Ok(())
}

fn check_dims(f: &LogConcaveFunction, omega: &WeightFunction) -> Result<()> {
    if f.dim() != omega.dim() {
        return Err(Error::GridMismatch {
            left: f.dim(),
            right: omega.dim(),
        });
    }
    Ok(())
}

/// Coarse companion of `grid` with twice the spacing, when it is a valid grid.
pub(crate) fn coarse_grid(grid: &Grid) -> Option<Grid> {
    let m = (grid.m() - 1) / 2 + 1;
    if m % 2 == 0 || m < 16 {
        return None;
    }
    Grid::with_half_widths(grid.dim(), grid.half_widths(), m).ok()
}

/// `V_omega(f) = int f omega dx` on the natural grid of `f`.
pub fn moment(f: &LogConcaveFunction, omega: &WeightFunction) -> Result<MomentValue> {
    moment_on(f, omega, &f.natural_grid()?)
}

pub fn moment_on(f: &LogConcaveFunction, omega: &WeightFunction, grid: &Grid) -> Result<MomentValue> {
    check_dims(f, omega)?;
    admit_weight(omega)?;
    let q = quadrature::build(f, omega, grid, None)?;
    moment_from(f, omega, &q)
}

pub(crate) fn moment_from(f: &LogConcaveFunction, omega: &WeightFunction, q: &Quadrature) -> Result<MomentValue> {
    let value = q.total();
    if !(value.is_finite() && value > 0.0) {
        return Err(Error::QuadratureFailure(format!("moment evaluated to {value}")));
    }
    let shell = q.shell_mass / value;
    if shell > SHELL_LIMIT {
        return Err(Error::TruncationUnreliable {
            fraction: shell,
            limit: SHELL_LIMIT,
        });
    }
    let truncation_estimate = (value - q.half_box_mass).abs();
    let quadrature_estimate = match f.potential() {
        Potential::Closed(p) if p.compact_support().is_none() => {
            let s = if q.grid.dim() == 1 {
                quadrature::SUBCELLS_1D
            } else {
                quadrature::SUBCELLS_2D
            };
            let single = quadrature::build(f, omega, &q.grid, Some(1))?.total();
            (value - single).abs() / ((s * s) as f64 - 1.0)
        }
        _ => match coarse_grid(&q.grid) {
            Some(c) => (value - quadrature::build(f, omega, &c, None)?.total()).abs() / 3.0,
            None => f64::NAN,
        },
    };
    Ok(MomentValue {
        value,
        truncation_estimate,
        quadrature_estimate,
        truncation_flag: truncation_estimate > TRUNCATION_FLAG * value,
    })
}

/// Angular nodes `(u, weight)` for `int_{S^{n-1}} g(u) du` where `g` is smooth
/// between the directions of `breaks` (vertex directions of a polygon).
fn angular_rule(dim: usize, breaks: &[Point]) -> Vec<(Point, f64)> {
    if dim == 1 {
        return vec![([-1.0, 0.0], 1.0), ([1.0, 0.0], 1.0)];
    }
    let mut angles: Vec<f64> = breaks.iter().map(|v| v[1].atan2(v[0])).collect();
    if angles.is_empty() {
        angles.push(0.0);
    }
    angles.sort_by(|a, b| a.total_cmp(b));
    angles.dedup_by(|a, b| (*a - *b).abs() < 1e-14);
    let first = angles[0];
    angles.push(first + 2.0 * PI);
    let arcs = angles.len() - 1;
    let nodes = if arcs == 1 { ANGULAR_DIRECTIONS } else { ARC_NODES };
    angles
        .windows(2)
        .flat_map(|w| gauss_legendre(nodes, w[0], w[1]))
        .map(|(a, w)| ([a.cos(), a.sin()], w))
        .collect()
}

/// Dual Orlicz volume `int_K omega = int_S omega_bar(rho_K(u), u) du`.
pub fn dual_orlicz_volume(k: &ConvexBody, omega: &WeightFunction) -> Result<MomentValue> {
    if k.dim() != omega.dim() {
        return Err(Error::GridMismatch {
            left: k.dim(),
            right: omega.dim(),
        });
    }
    if !k.is_origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    admit_weight(omega)?;
    let rule = angular_rule(k.dim(), k.vertices());
    let mut value = 0.0;
    for (u, w) in &rule {
        value += w * omega.omega_bar(k.radial(u)?, u)?;
    }
    let quadrature_estimate = if k.dim() == 2 {
        let mut coarse = 0.0;
        let mut angles: Vec<f64> = k.vertices().iter().map(|v| v[1].atan2(v[0])).collect();
        angles.sort_by(|a, b| a.total_cmp(b));
        let first = angles[0];
        angles.push(first + 2.0 * PI);
        for w in angles.windows(2) {
            for (a, wt) in gauss_legendre(ARC_NODES / 2, w[0], w[1]) {
                let u = [a.cos(), a.sin()];
                coarse += wt * omega.omega_bar(k.radial(&u)?, &u)?;
            }
        }
        (value - coarse).abs()
    } else {
        0.0
    };
    Ok(MomentValue {
        value,
        truncation_estimate: 0.0,
        quadrature_estimate,
        truncation_flag: false,
    })
}

/// `omega_bar(t, u) = int_0^t omega(r u) r^{n-1} dr`.
pub fn omega_bar(omega: &WeightFunction, t: f64, u: &Point) -> Result<f64> {
    omega.omega_bar(t, u)
}

fn sphere_rule(dim: usize) -> Vec<(Point, f64)> {
    angular_rule(dim, &[])
}

/// `F_omega(t) = V_omega(e^{-t|x|})`, closed form where available.
pub fn f_omega(omega: &WeightFunction, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("t = {t} must be positive")));
    }
    admit_weight(omega)?;
    match omega.f_omega_closed(t) {
        Some(v) => Ok(v),
        None => f_omega_numeric(omega, t),
    }
}

/// `F_omega(t)` by radial quadrature along each direction, ignoring closed forms.
pub fn f_omega_numeric(omega: &WeightFunction, t: f64) -> Result<f64> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("t = {t} must be positive")));
    }
    let n = omega.dim() as i32;
    let mut total = 0.0;
    for (u, w) in sphere_rule(omega.dim()) {
        let g = |r: f64| (-t * r).exp() * omega.eval(&[r * u[0], r * u[1]]) * r.powi(n - 1);
        let a = 1.0 / t;
        let near = integrate_from_zero(g, a);
        let far = integrate_to_infinity(g, a, a);
        match (near, far) {
            (Some(x), Some(y)) => total += w * (x + y),
            _ => return Err(Error::QuadratureFailure(format!("F_omega({t}) radial integral"))),
        }
    }
    Ok(total)
}

pub fn f_growth_classification(omega: &WeightFunction) -> FGrowth {
    omega.f_growth()
}

/// `b_t = V_omega(t B)` with `B` the unit ball.
pub fn b_t(omega: &WeightFunction, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::InvalidInput(format!("t = {t} must be positive")));
    }
    admit_weight(omega)?;
    let mut total = 0.0;
    for (u, w) in sphere_rule(omega.dim()) {
        total += w * omega.omega_bar(t, &u)?;
    }
    Ok(total)
}

fn require_origin_in_domain(f: &LogConcaveFunction) -> Result<()> {
    let ok = match f.potential() {
        Potential::Closed(p) => p.compact_support().map_or(true, |b| b.is_origin_interior()),
        Potential::Sampled(s) => s.domain()?.is_origin_interior(),
    };
    if ok {
        Ok(())
    } else {
        Err(Error::OriginNotInteriorDomain)
    }
}

/// `int phi^*(grad phi) f omega dx`, with `phi^*(grad phi) = <x, grad phi> - phi`.
pub fn dual_entropy_moment(f: &LogConcaveFunction, omega: &WeightFunction) -> Result<f64> {
    check_dims(f, omega)?;
    require_origin_in_domain(f)?;
    admit_weight(omega)?;
    let q = quadrature::build(f, omega, &f.natural_grid()?, None)?;
    Ok(q.points
        .iter()
        .map(|p| (p.anchor[0] * p.grad[0] + p.anchor[1] * p.grad[1] - p.phi) * p.mass())
        .sum())
}

/// `int |grad phi| f omega dx`.
pub fn gradient_moment(f: &LogConcaveFunction, omega: &WeightFunction) -> Result<f64> {
    check_dims(f, omega)?;
    require_origin_in_domain(f)?;
    admit_weight(omega)?;
    let q = quadrature::build(f, omega, &f.natural_grid()?, None)?;
    Ok(q.points.iter().map(|p| p.grad[0].hypot(p.grad[1]) * p.mass()).sum())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex_core::prototype::ClosedFormPrototype;

    fn cone(dim: usize) -> LogConcaveFunction {
        ClosedFormPrototype::exponential_cone(dim, 1.0).unwrap().into()
    }

    fn disk() -> LogConcaveFunction {
        ClosedFormPrototype::Indicator {
            body: ConvexBody::ball(2, 1.0, 512).unwrap(),
        }
        .into()
    }

    #[test]
    fn exponential_cone_mass() {
        let g = Grid::new(1, 16.0, 513).unwrap();
        let v = moment_on(&cone(1), &WeightFunction::constant(1), &g).unwrap();
        assert!((v.value - 2.0).abs() < 1e-4, "{v:?}");
        assert!(!v.truncation_flag);
    }

    #[test]
    fn default_grid_truncation_is_reported() {
        let v = moment(&cone(1), &WeightFunction::constant(1)).unwrap();
        // the tail beyond R = 8 is 2 e^{-8}
        assert!((v.value - (2.0 - 2.0 * (-8f64).exp())).abs() < 1e-4);
        assert!(v.truncation_estimate > 2.0 * (-8f64).exp());
    }

    #[test]
    fn disk_moments() {
        let area = moment(&disk(), &WeightFunction::constant(2)).unwrap();
        assert!((area.value - PI).abs() < 1e-2 * PI);
        let sing = moment(&disk(), &WeightFunction::power(2, 1.0).unwrap()).unwrap();
        assert!((sing.value - 2.0 * PI).abs() < 1e-2 * 2.0 * PI, "{sing:?}");
    }

    #[test]
    fn dual_volume_examples() {
        let sq = ConvexBody::cube(2, 1.0).unwrap();
        let v = dual_orlicz_volume(&sq, &WeightFunction::constant(2)).unwrap();
        assert!((v.value - 4.0).abs() < 1e-12);
        let ball = ConvexBody::ball(2, 1.0, 512).unwrap();
        let v = dual_orlicz_volume(&ball, &WeightFunction::power(2, 1.0).unwrap()).unwrap();
        assert!((v.value - 2.0 * PI).abs() < 1e-2 * 2.0 * PI);
        assert!((b_t(&WeightFunction::constant(1), 0.3).unwrap() - 0.6).abs() < 1e-15);
        let off = ConvexBody::cube(2, 1.0).unwrap().clip(&[1.0, 0.0], 0.0).unwrap();
        assert_eq!(
            dual_orlicz_volume(&off, &WeightFunction::constant(2)),
            Err(Error::OriginNotInterior)
        );
    }

    #[test]
    fn dual_volume_matches_moment_of_indicator() {
        let k = ConvexBody::from_points(2, &[[-1.0, -0.5], [1.5, -0.5], [0.2, 1.2]]).unwrap();
        let w = WeightFunction::gaussian_density(2);
        let a = dual_orlicz_volume(&k, &w).unwrap();
        let f: LogConcaveFunction = ClosedFormPrototype::Indicator { body: k }.into();
        let b = moment(&f, &w).unwrap();
        assert!((a.value - b.value).abs() <= 1e-3 * a.value, "{a:?} {b:?}");
    }

    #[test]
    fn f_omega_numeric_matches_closed_forms() {
        for (dim, q) in [(1, 1.0), (1, 2.5), (2, 1.0), (2, 3.0)] {
            let w = WeightFunction::power(dim, q).unwrap();
            for t in [0.1, 1.0, 10.0] {
                let a = w.f_omega_closed(t).unwrap();
                let b = f_omega_numeric(&w, t).unwrap();
                assert!((a - b).abs() < 1e-9 * a, "n={dim} q={q} t={t}: {a} vs {b}");
            }
        }
        assert!((f_omega(&WeightFunction::constant(1), 0.5).unwrap() - 4.0).abs() < 1e-12);
        assert!((f_omega(&WeightFunction::constant(2), 1.0).unwrap() - 2.0 * PI).abs() < 1e-12);
        let g = WeightFunction::gaussian_density(2);
        assert!((g.f_omega_closed(0.7).unwrap() - f_omega_numeric(&g, 0.7).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn stretched_exp_f_is_finite_and_decreasing() {
        let w = WeightFunction::stretched_exp(1, 0.5).unwrap();
        let a = f_omega(&w, 0.5).unwrap();
        let b = f_omega(&w, 1.0).unwrap();
        assert!(a.is_finite() && a > b && b > 2.0);
    }

    #[test]
    fn rejected_weight() {
        let w = WeightFunction::stretched_exp(1, 1.0).unwrap();
        assert!(matches!(moment(&cone(1), &w), Err(Error::WeightRejected(_))));
    }

    #[test]
    fn gradient_moments_of_prototypes() {
        let w = WeightFunction::constant(1);
        let gauss: LogConcaveFunction = ClosedFormPrototype::Gaussian { dim: 1 }.into();
        let e = dual_entropy_moment(&gauss, &w).unwrap();
        assert!((e - (2.0 * PI).sqrt() / 2.0).abs() < 1e-3, "{e}");
        assert!((gradient_moment(&gauss, &w).unwrap() - 2.0).abs() < 1e-3);
        assert!(dual_entropy_moment(&cone(1), &w).unwrap().abs() < 1e-12);
        let ind: LogConcaveFunction = ClosedFormPrototype::Indicator {
            body: ConvexBody::interval(-1.0, 1.0).unwrap(),
        }
        .into();
        assert_eq!(gradient_moment(&ind, &w).unwrap(), 0.0);
        assert_eq!(dual_entropy_moment(&ind, &w).unwrap(), 0.0);
        let shifted: LogConcaveFunction = ClosedFormPrototype::Indicator {
            body: ConvexBody::interval(0.0, 1.0).unwrap(),
        }
        .into();
        assert_eq!(gradient_moment(&shifted, &w), Err(Error::OriginNotInteriorDomain));
    }
}
