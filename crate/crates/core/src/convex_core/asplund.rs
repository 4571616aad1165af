use super::body::ConvexBody;
use super::grid::Grid;
use super::legendre::{auto_dual_grid_for, conjugate_values, PiecewiseLinear};
use super::logconcave::{box_corners, LogConcaveFunction};
use super::prototype::ClosedFormPrototype;
use super::sampled::{Provenance, SampledConvexFunction};
use crate::error::{Error, Result};

/// Node count of the shared dual grid in 2D relative to the primal `m`.
pub const DUAL_REFINEMENT_2D: usize = 4;

fn grid_of(f: &LogConcaveFunction, g: &LogConcaveFunction) -> Result<Grid> {
    if let Some(s) = f.as_sampled() {
        return Ok(s.grid().clone());
    }
    if let Some(s) = g.as_sampled() {
        return Ok(s.grid().clone());
    }
    Grid::default_for(f.dim())
}

/// `f (+) t.g = e^{-(phi^* + t psi^*)^*}` on the grid of `f` (or the default grid).
pub fn asplund_sum(f: &LogConcaveFunction, t: f64, g: &LogConcaveFunction) -> Result<LogConcaveFunction> {
    let grid = grid_of(f, g)?;
    asplund_sum_on(f, t, g, &grid)
}

/// Asplund sum sampled on `out`.
///
/// In 1D both conjugates are kept exact (piecewise linear with breakpoints at
/// the hull slopes), so the combined dual function is evaluated on the union of
/// its breakpoints and the result is exact for the sampled inputs. In 2D the
/// conjugates are sampled on a shared regular dual grid whose radius covers
/// the slopes of both potentials; closed-form operands other than max-affine
/// enter through their exact conjugates.
pub fn asplund_sum_on(
    f: &LogConcaveFunction,
    t: f64,
    g: &LogConcaveFunction,
    out: &Grid,
) -> Result<LogConcaveFunction> {
    if f.dim() != g.dim() {
        return Err(Error::GridMismatch {
            left: f.dim(),
            right: g.dim(),
        });
    }
    if f.dim() != out.dim() {
        return Err(Error::GridMismatch {
            left: f.dim(),
            right: out.dim(),
        });
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("Asplund coefficient {t} must be positive")));
    }
    let phi = f.sample(out)?;
    let psi = match g.as_sampled() {
        Some(s) => s.clone(),
        None => g.sample(out)?,
    };
    let domain = phi.domain()?.minkowski_sum(t, &psi.domain()?)?;
    let values = if out.dim() == 1 {
        let a = PiecewiseLinear::from_sampled(&phi)?;
        let b = PiecewiseLinear::from_sampled(&psi)?.dilate(t);
        let s = PiecewiseLinear::inf_convolution(&a, &b);
        (0..out.len()).map(|k| s.eval(out.coord(0, k))).collect::<Vec<_>>()
    } else {
        let dual = auto_dual_grid_for(&[&phi, &psi], DUAL_REFINEMENT_2D * (out.m() - 1) + 1)?;
        let a = dual_values(f, &phi, &dual)?;
        let b = match g.as_sampled() {
            Some(_) => conjugate_values(&psi, &dual)?.into_iter().map(Some).collect(),
            None => dual_values(g, &psi, &dual)?,
        };
        let sum: Vec<Option<f64>> = a.iter().zip(&b).map(|(x, y)| Some((*x)? + t * (*y)?)).collect();
        let back = back_transform(&dual, sum, out, Provenance::AsplundSum)?;
        let tol = 1e-9 * out.h();
        (0..out.len())
            .map(|k| domain.contains(&out.node(k), tol).then_some(back[k]))
            .collect()
    };
    finish(out, values, domain, Provenance::AsplundSum)
}

/// Conjugate of `f` on `dual`: exact for closed forms with a cheap transform,
/// the discrete transform of the samples otherwise. `None` marks `+inf`.
fn dual_values(f: &LogConcaveFunction, sampled: &SampledConvexFunction, dual: &Grid) -> Result<Vec<Option<f64>>> {
    match f.as_closed() {
        Some(p) if !matches!(p, ClosedFormPrototype::MaxAffine { .. }) => {
            Ok((0..dual.len()).map(|k| p.conjugate(&dual.node(k))).collect())
        }
        _ => Ok(conjugate_values(sampled, dual)?.into_iter().map(Some).collect()),
    }
}

fn back_transform(dual: &Grid, values: Vec<Option<f64>>, out: &Grid, p: Provenance) -> Result<Vec<f64>> {
    let mask: Vec<bool> = values.iter().map(|v| v.is_none()).collect();
    if mask.iter().all(|m| *m) {
        return Err(Error::EmptyEffectiveDomain);
    }
    let vals = values.into_iter().map(|v| v.unwrap_or(0.0)).collect();
    let combined = SampledConvexFunction::new(dual.clone(), vals, mask, p)?;
    conjugate_values(&combined, out)
}

fn finish(out: &Grid, values: Vec<Option<f64>>, domain: ConvexBody, p: Provenance) -> Result<LogConcaveFunction> {
    let mask: Vec<bool> = values.iter().map(|v| v.is_none()).collect();
    if mask.iter().all(|m| *m) {
        return Err(Error::EmptyEffectiveDomain);
    }
    let vals: Vec<f64> = values.into_iter().map(|v| v.unwrap_or(0.0)).collect();
    let s = SampledConvexFunction::new(out.clone(), vals, mask, p)?;
    // the stored domain never extends past the grid box
    let boxed = ConvexBody::from_points(out.dim(), &box_corners(out))?;
    let domain = clip_to(&domain, &boxed).unwrap_or(domain);
    Ok(s.with_domain(domain).into())
}

fn clip_to(body: &ConvexBody, bx: &ConvexBody) -> Option<ConvexBody> {
    let mut b = body.clone();
    for fct in bx.facets() {
        b = b.clip(&fct.normal, fct.offset)?;
    }
    Some(b)
}

/// `t . f = e^{-(t phi^*)^*}`, i.e. potential `t phi(x / t)`.
pub fn scalar_mult(t: f64, f: &LogConcaveFunction) -> Result<LogConcaveFunction> {
    let grid = match f.as_sampled() {
        Some(s) => s.grid().clone(),
        None => Grid::default_for(f.dim())?,
    };
    scalar_mult_on(t, f, &grid)
}

pub fn scalar_mult_on(t: f64, f: &LogConcaveFunction, out: &Grid) -> Result<LogConcaveFunction> {
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::InvalidInput(format!("scalar {t} must be positive")));
    }
    let phi = match f.as_sampled() {
        Some(s) => s.clone(),
        None => f.sample(out)?,
    };
    if t == 1.0 && phi.grid() == out {
        return Ok(phi.into());
    }
    let domain = phi.domain()?.scaled(t)?;
    let values = if out.dim() == 1 {
        let a = PiecewiseLinear::from_sampled(&phi)?.dilate(t);
        (0..out.len()).map(|k| a.eval(out.coord(0, k))).collect::<Vec<_>>()
    } else {
        let dual = auto_dual_grid_for(&[&phi], DUAL_REFINEMENT_2D * (out.m() - 1) + 1)?;
        let a: Vec<Option<f64>> = dual_values(f, &phi, &dual)?.iter().map(|v| v.map(|v| t * v)).collect();
        let back = back_transform(&dual, a, out, Provenance::ScalarMultiple)?;
        let tol = 1e-9 * out.h();
        (0..out.len())
            .map(|k| domain.contains(&out.node(k), tol).then_some(back[k]))
            .collect()
    };
    finish(out, values, domain, Provenance::ScalarMultiple)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::convex_core::prototype::ClosedFormPrototype;

    fn interval(r: f64) -> LogConcaveFunction {
        ClosedFormPrototype::Indicator {
            body: ConvexBody::interval(-r, r).unwrap(),
        }
        .into()
    }

    #[test]
    fn indicators_add_as_bodies() {
        let g = Grid::new(1, 4.0, 129).unwrap();
        let s = asplund_sum_on(&interval(1.0), 1.0, &interval(1.0), &g).unwrap();
        let phi = s.as_sampled().unwrap();
        for k in 0..g.len() {
            let x = g.coord(0, k);
            assert_eq!(phi.is_finite(k), x.abs() <= 2.0 + 1e-12, "x = {x}");
        }
        assert_eq!(phi.explicit_domain().unwrap().vertices()[1][0], 2.0);
    }

    #[test]
    fn cone_plus_half_interval() {
        let g = Grid::new(1, 8.0, 257).unwrap();
        let f: LogConcaveFunction = ClosedFormPrototype::exponential_cone(1, 1.0).unwrap().into();
        let s = asplund_sum_on(&f, 0.5, &interval(1.0), &g).unwrap();
        let phi = s.as_sampled().unwrap();
        for k in 0..g.len() {
            let x = g.coord(0, k);
            assert!((phi.values()[k] - (x.abs() - 0.5).max(0.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn dilating_a_gaussian() {
        let g = Grid::new(1, 8.0, 257).unwrap();
        let f: LogConcaveFunction = ClosedFormPrototype::Gaussian { dim: 1 }.into();
        let s = scalar_mult_on(2.0, &f, &g).unwrap();
        let phi = s.as_sampled().unwrap();
        let h = g.h();
        for k in 0..g.len() {
            let x = g.coord(0, k);
            // piecewise-linear interpolation of x^2/2 at spacing 2h
            assert!((phi.values()[k] - x * x / 4.0).abs() <= h * h / 2.0 + 1e-12);
        }
        let same = scalar_mult_on(1.0, &f, &g).unwrap();
        assert_eq!(same.as_sampled().unwrap(), &f.sample(&g).unwrap());
    }

    #[test]
    fn tripling_an_indicator() {
        let g = Grid::new(1, 4.0, 129).unwrap();
        let s = scalar_mult_on(3.0, &interval(1.0), &g).unwrap();
        let d = s.as_sampled().unwrap().explicit_domain().unwrap().clone();
        assert_eq!(d, ConvexBody::interval(-3.0, 3.0).unwrap());
    }

    #[test]
    fn two_dimensional_squares() {
        let g = Grid::new(2, 3.0, 49).unwrap();
        let sq: LogConcaveFunction = ClosedFormPrototype::Indicator {
            body: ConvexBody::cube(2, 1.0).unwrap(),
        }
        .into();
        let s = asplund_sum_on(&sq, 0.5, &sq, &g).unwrap();
        let phi = s.as_sampled().unwrap();
        for k in phi.finite_nodes() {
            assert!(phi.values()[k].abs() < 1e-12);
        }
        assert!((phi.explicit_domain().unwrap().volume() - 9.0).abs() < 1e-12);
    }
}
