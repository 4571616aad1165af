use serde::Serialize;

use crate::convex_core::body::{ConvexBody, Facet};
use crate::convex_core::geometry::polygon_centroid;
use crate::convex_core::grid::Grid;
use crate::convex_core::logconcave::{superlevel_set, LogConcaveFunction, Potential};
use crate::convex_core::Point;
use crate::error::{Error, Result};
use crate::numeric::gauss_legendre;
use crate::orlicz_moments::moments::admit_weight;
use crate::orlicz_moments::quadrature::{self, Quadrature};
use crate::orlicz_moments::weight::WeightFunction;

use super::measure::{Ambient, Atom, DiscreteMeasure};

/// Gauss–Legendre nodes per facet edge.
pub const FACET_NODES: usize = 16;
/// Fraction of mass on boundary-grade gradients above which the gradient
/// field is reported as degenerate.
pub const DEGENERATE_FRACTION: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EuclideanMeasureReport {
    pub measure: DiscreteMeasure,
    pub total_mass: f64,
    /// Mass deposited with one-sided gradients at the boundary of the domain.
    pub boundary_grade_mass: f64,
    pub degenerate_gradient_field: bool,
    pub max_at_origin: bool,
}

fn check_dims(dim: usize, omega: &WeightFunction) -> Result<()> {
    if dim != omega.dim() {
        return Err(Error::GridMismatch {
            left: dim,
            right: omega.dim(),
        });
    }
    Ok(())
}

/// Pushforward of `f omega dx` under `grad phi`, built on `grid`.
pub fn euclidean_curvature_measure_on(
    f: &LogConcaveFunction,
    omega: &WeightFunction,
    grid: &Grid,
    binning: Option<&Grid>,
) -> Result<EuclideanMeasureReport> {
    check_dims(f.dim(), omega)?;
    admit_weight(omega)?;
    let q = quadrature::build(f, omega, grid, None)?;
    pushforward(f, &q, binning)
}

/// Same as `euclidean_curvature_measure_on` with `subcells` quadrature points
/// per axis and cell.
pub fn euclidean_curvature_measure_subdivided(
    f: &LogConcaveFunction,
    omega: &WeightFunction,
    grid: &Grid,
    subcells: usize,
) -> Result<EuclideanMeasureReport> {
    check_dims(f.dim(), omega)?;
    admit_weight(omega)?;
    let q = quadrature::build(f, omega, grid, Some(subcells.max(1)))?;
    pushforward(f, &q, None)
}

/// Pushforward on the natural grid of `f`.
pub fn euclidean_curvature_measure(
    f: &LogConcaveFunction,
    omega: &WeightFunction,
    binning: Option<&Grid>,
) -> Result<EuclideanMeasureReport> {
    euclidean_curvature_measure_on(f, omega, &f.natural_grid()?, binning)
}

fn pushforward(f: &LogConcaveFunction, q: &Quadrature, binning: Option<&Grid>) -> Result<EuclideanMeasureReport> {
    let atoms = q
        .points
        .iter()
        .map(|p| Atom {
            location: p.grad,
            mass: p.mass(),
        })
        .collect();
    let raw = DiscreteMeasure::new(Ambient::Euclidean(q.grid.dim()), atoms)?;
    let measure = match binning {
        Some(g) => raw.binned(g)?,
        None => raw.merged(),
    };
    let total_mass = q.total();
    let boundary_grade_mass = q.boundary_grade_mass();
    Ok(EuclideanMeasureReport {
        measure,
        total_mass,
        boundary_grade_mass,
        degenerate_gradient_field: boundary_grade_mass > DEGENERATE_FRACTION * total_mass,
        max_at_origin: f.attains_max_at_origin(),
    })
}

/// Default binning of a pushforward: bins of the source spacing on a box
/// wide enough for the atoms.
pub fn default_binning(measure: &DiscreteMeasure, source: &Grid) -> Result<Grid> {
    let h = source.h();
    let reach = measure
        .atoms
        .iter()
        .map(|a| a.location[0].abs().max(a.location[1].abs()))
        .fold(h, f64::max);
    let half = ((reach / h).ceil() + 1.0).max(8.0) as usize;
    Grid::new(source.dim(), half as f64 * h, 2 * half + 1)
}

/// Support body of `f` when it is a compact polytope.
pub fn support_body(f: &LogConcaveFunction) -> Result<ConvexBody> {
    match f.potential() {
        Potential::Closed(p) => p.compact_support().ok_or(Error::UnboundedSupport),
        Potential::Sampled(s) => {
            if s.has_bounded_support() {
                s.domain()
            } else {
                Err(Error::UnboundedSupport)
            }
        }
    }
}

/// `phi` on the boundary of its domain, taken as the limit along the segment
/// from an interior point at grid resolution.
fn boundary_phi(f: &LogConcaveFunction, x: &Point, center: &Point) -> Option<f64> {
    if let Some(v) = f.phi(x) {
        return Some(v);
    }
    let s = f.as_sampled()?;
    let h = s.grid().h();
    let d = (x[0] - center[0]).hypot(x[1] - center[1]);
    if d == 0.0 {
        return None;
    }
    (1..=8).find_map(|j| {
        let lam = (j as f64 * 0.5 * h / d).min(1.0);
        let y = [x[0] + lam * (center[0] - x[0]), x[1] + lam * (center[1] - x[1])];
        s.interpolate(&y)
    })
}

/// `int_facet g dH^{n-1}` (a point evaluation in 1D).
fn facet_integral(facet: &Facet, dim: usize, g: impl Fn(&Point) -> f64) -> f64 {
    if dim == 1 {
        return g(&facet.endpoints[0]);
    }
    let [a, b] = facet.endpoints;
    gauss_legendre(FACET_NODES, 0.0, 1.0)
        .into_iter()
        .map(|(s, w)| w * g(&[a[0] + s * (b[0] - a[0]), a[1] + s * (b[1] - a[1])]))
        .sum::<f64>()
        * facet.measure
}

/// One atom per facet of the support of `f` at the outer normal, with mass
/// `int_facet e^{-phi} omega`.
pub fn spherical_curvature_measure(f: &LogConcaveFunction, omega: &WeightFunction) -> Result<DiscreteMeasure> {
    check_dims(f.dim(), omega)?;
    admit_weight(omega)?;
    let body = support_body(f)?;
    let center = if f.dim() == 1 {
        [0.5 * (body.vertices()[0][0] + body.vertices()[1][0]), 0.0]
    } else {
        polygon_centroid(body.vertices())
    };
    let atoms = body
        .facets()
        .iter()
        .map(|fc| Atom {
            location: fc.normal,
            mass: facet_integral(fc, f.dim(), |x| {
                boundary_phi(f, x, &center).map_or(0.0, |p| (-p).exp()) * omega.eval(x)
            }),
        })
        .collect();
    DiscreteMeasure::new(Ambient::Sphere(f.dim()), atoms)
}

/// One atom per facet of `K` with mass `h_K(nu) int_facet omega`.
pub fn body_curvature_measure(k: &ConvexBody, omega: &WeightFunction) -> Result<DiscreteMeasure> {
    check_dims(k.dim(), omega)?;
    if !k.is_origin_interior() {
        return Err(Error::OriginNotInterior);
    }
    admit_weight(omega)?;
    let atoms = k
        .facets()
        .iter()
        .map(|fc| Atom {
            location: fc.normal,
            mass: fc.offset * facet_integral(fc, k.dim(), |x| omega.eval(x)),
        })
        .collect();
    DiscreteMeasure::new(Ambient::Sphere(k.dim()), atoms)
}

/// `V_{1,omega}(K, L) = int h_L / h_K dC_omega(K, .)`.
pub fn mixed_volume_v1(k: &ConvexBody, l: &ConvexBody, omega: &WeightFunction) -> Result<f64> {
    if k.dim() != l.dim() {
        return Err(Error::GridMismatch {
            left: k.dim(),
            right: l.dim(),
        });
    }
    let c = body_curvature_measure(k, omega)?;
    Ok(c.integrate(|v| l.support(v) / k.support(v)))
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

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TotalVariation {
    pub value: f64,
    /// `int h_L(grad phi) f omega dx`.
    pub interior: f64,
    /// `int h_L(nu) dC^s_omega(f, .)`.
    pub boundary: f64,
}

/// Anisotropic weighted total variation `TV_{L,omega}(f)`.
pub fn weighted_total_variation(
    f: &LogConcaveFunction,
    l: &ConvexBody,
    omega: &WeightFunction,
) -> Result<TotalVariation> {
    check_dims(f.dim(), omega)?;
    require_origin_in_domain(f)?;
    admit_weight(omega)?;
    let q = quadrature::build(f, omega, &f.natural_grid()?, None)?;
    let interior: f64 = q.points.iter().map(|p| l.support(&p.grad) * p.mass()).sum();
    let boundary = match spherical_curvature_measure(f, omega) {
        Ok(c) => c.integrate(|v| l.support(v)),
        Err(Error::UnboundedSupport) => 0.0,
        Err(e) => return Err(e),
    };
    Ok(TotalVariation {
        value: interior + boundary,
        interior,
        boundary,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoareaReport {
    pub coarea_integral: f64,
    pub total_variation: f64,
    pub relative_gap: f64,
    pub levels: Vec<(f64, f64)>,
}

/// `int_{dE} h_L(nu) omega dH^{n-1}`.
pub fn anisotropic_perimeter(e: &ConvexBody, l: &ConvexBody, omega: &WeightFunction) -> f64 {
    e.facets()
        .iter()
        .map(|fc| l.support(&fc.normal) * facet_integral(fc, e.dim(), |x| omega.eval(x)))
        .sum()
}

/// Compares `int_0^{max f} Per_{L,omega}(E_s(f)) ds` (midpoint rule over
/// `s_samples` levels) with the total variation.
pub fn coarea_check(
    f: &LogConcaveFunction,
    l: &ConvexBody,
    omega: &WeightFunction,
    s_samples: usize,
) -> Result<CoareaReport> {
    if s_samples == 0 {
        return Err(Error::InvalidInput("at least one level is needed".into()));
    }
    let tv = weighted_total_variation(f, l, omega)?.value;
    let max = f.max_value().ok_or(Error::AllInfinite)?;
    let ds = max / s_samples as f64;
    let mut levels = Vec::with_capacity(s_samples);
    let mut integral = 0.0;
    for j in 0..s_samples {
        let s = (j as f64 + 0.5) * ds;
        let per = anisotropic_perimeter(&superlevel_set(f, s)?, l, omega);
        integral += per * ds;
        levels.push((s, per));
    }
    Ok(CoareaReport {
        coarea_integral: integral,
        total_variation: tv,
        relative_gap: (integral - tv).abs() / tv.abs().max(f64::MIN_POSITIVE),
        levels,
    })
}
