use super::body::ConvexBody;
use super::grid::Grid;
use super::prototype::ClosedFormPrototype;
use super::sampled::{Provenance, SampledConvexFunction};
use super::Point;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    Sampled(SampledConvexFunction),
    Closed(ClosedFormPrototype),
}

/// `f = e^{-phi}` for a grid-sampled or closed-form convex potential.
#[derive(Debug, Clone, PartialEq)]
pub struct LogConcaveFunction {
    potential: Potential,
}

impl From<ClosedFormPrototype> for LogConcaveFunction {
    fn from(p: ClosedFormPrototype) -> Self {
        Self {
            potential: Potential::Closed(p),
        }
    }
}

impl From<SampledConvexFunction> for LogConcaveFunction {
    fn from(s: SampledConvexFunction) -> Self {
        Self {
            potential: Potential::Sampled(s),
        }
    }
}

impl LogConcaveFunction {
    pub fn potential(&self) -> &Potential {
        &self.potential
    }

    pub fn as_closed(&self) -> Option<&ClosedFormPrototype> {
        match &self.potential {
            Potential::Closed(p) => Some(p),
            Potential::Sampled(_) => None,
        }
    }

    pub fn as_sampled(&self) -> Option<&SampledConvexFunction> {
        match &self.potential {
            Potential::Sampled(s) => Some(s),
            Potential::Closed(_) => None,
        }
    }

    pub fn dim(&self) -> usize {
        match &self.potential {
            Potential::Sampled(s) => s.dim(),
            Potential::Closed(p) => p.dim(),
        }
    }

    /// `phi(x)`; sampled potentials are interpolated inside their domain.
    pub fn phi(&self, x: &Point) -> Option<f64> {
        match &self.potential {
            Potential::Closed(p) => p.phi(x),
            Potential::Sampled(s) => {
                let inside = match s.explicit_domain() {
                    Some(d) => d.contains(x, 1e-12),
                    None => s.grid().contains(x),
                };
                if inside {
                    s.interpolate(x)
                } else {
                    None
                }
            }
        }
    }

    /// The sampling grid of a sampled potential, the default grid otherwise.
    pub fn natural_grid(&self) -> Result<Grid> {
        match &self.potential {
            Potential::Sampled(s) => Ok(s.grid().clone()),
            Potential::Closed(p) => Grid::default_for(p.dim()),
        }
    }

    pub fn value(&self, x: &Point) -> f64 {
        self.phi(x).map_or(0.0, |p| (-p).exp())
    }

    /// Samples the potential on `grid`. Closed forms carry their exact domain:
    /// the support body for indicators, the grid box otherwise.
    pub fn sample(&self, grid: &Grid) -> Result<SampledConvexFunction> {
        if grid.dim() != self.dim() {
            return Err(Error::GridMismatch {
                left: self.dim(),
                right: grid.dim(),
            });
        }
        match &self.potential {
            Potential::Sampled(s) if s.grid() == grid => Ok(s.clone()),
            Potential::Sampled(s) => {
                // grid data is +inf off the hull of its finite nodes
                let explicit = s.explicit_domain().is_some();
                let d = s.domain()?;
                let tol = 1e-9 * s.grid().h();
                let out = SampledConvexFunction::from_fn(grid.clone(), Provenance::GridData, |x| {
                    if d.contains(x, tol) {
                        s.interpolate(x)
                    } else {
                        None
                    }
                });
                Ok(if explicit { out.with_domain(d) } else { out })
            }
            Potential::Closed(p) => {
                let out =
                    SampledConvexFunction::from_fn(grid.clone(), Provenance::ClosedForm(p.name().to_string()), |x| {
                        p.phi(x)
                    });
                if out.finite_count() == 0 {
                    return Err(Error::AllInfinite);
                }
                let domain = match p.compact_support() {
                    Some(b) => b,
                    None => ConvexBody::from_points(grid.dim(), &box_corners(grid))?,
                };
                Ok(out.with_domain(domain))
            }
        }
    }

    /// Compact support body, if any.
    pub fn compact_support(&self) -> Option<ConvexBody> {
        match &self.potential {
            Potential::Closed(p) => p.compact_support(),
            Potential::Sampled(s) => {
                if s.has_bounded_support() {
                    s.domain().ok()
                } else {
                    None
                }
            }
        }
    }

    /// Location of the maximum; the origin is preferred among ties.
    pub fn max_location(&self) -> Option<Point> {
        match &self.potential {
            Potential::Closed(p) => match p {
                ClosedFormPrototype::Indicator { body } | ClosedFormPrototype::ScaledIndicator { body, .. } => {
                    if body.contains(&[0.0, 0.0], 1e-12) {
                        Some([0.0, 0.0])
                    } else {
                        body.vertices().first().copied()
                    }
                }
                ClosedFormPrototype::MaxAffine { .. } => {
                    let min = -p.conjugate(&[0.0, 0.0])?;
                    let at0 = p.phi(&[0.0, 0.0])?;
                    if at0 <= min + 1e-12 * (1.0 + min.abs()) {
                        Some([0.0, 0.0])
                    } else {
                        let g = Grid::default_for(p.dim()).ok()?;
                        let s = self.sample(&g).ok()?;
                        s.min_node().map(|(k, _)| g.node(k))
                    }
                }
                _ => Some([0.0, 0.0]),
            },
            Potential::Sampled(s) => {
                let (k, v) = s.min_node()?;
                let o = s.grid().origin_index();
                match s.value(o) {
                    Some(vo) if vo <= v + 1e-12 * (1.0 + v.abs()) => Some([0.0, 0.0]),
                    _ => Some(s.grid().node(k)),
                }
            }
        }
    }

    pub fn attains_max_at_origin(&self) -> bool {
        self.max_location() == Some([0.0, 0.0])
    }

    pub fn max_value(&self) -> Option<f64> {
        match &self.potential {
            Potential::Closed(p) => p.max_value(),
            Potential::Sampled(s) => s.min_node().map(|(_, v)| (-v).exp()),
        }
    }
}

pub(crate) fn box_corners(grid: &Grid) -> Vec<Point> {
    let (a, b) = (grid.half_width(0), grid.half_width(1));
    if grid.dim() == 1 {
        vec![[-a, 0.0], [a, 0.0]]
    } else {
        vec![[-a, -b], [a, -b], [a, b], [-a, b]]
    }
}

/// `E_s(f) = {x : f(x) >= s}` as a polytope: exact for closed forms, the hull
/// of the qualifying nodes for sampled potentials.
pub fn superlevel_set(f: &LogConcaveFunction, s: f64) -> Result<ConvexBody> {
    match f.potential() {
        Potential::Closed(p) => p.level_set(s),
        Potential::Sampled(phi) => {
            let max = f.max_value().ok_or(Error::AllInfinite)?;
            if !(s > 0.0) || s > max * (1.0 + 1e-12) {
                return Err(Error::EmptyLevel { s, max });
            }
            let r = -s.ln();
            let tol = 1e-12 * (1.0 + r.abs());
            let pts: Vec<Point> = phi
                .finite_nodes()
                .filter(|&k| phi.values()[k] <= r + tol)
                .map(|k| phi.grid().node(k))
                .collect();
            ConvexBody::from_points(phi.dim(), &pts)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_indicator_keeps_exact_domain() {
        let body = ConvexBody::interval(-1.0, 1.0).unwrap();
        let f = LogConcaveFunction::from(ClosedFormPrototype::Indicator { body: body.clone() });
        let g = Grid::new(1, 2.0, 17).unwrap();
        let s = f.sample(&g).unwrap();
        assert_eq!(s.explicit_domain(), Some(&body));
        assert_eq!(s.finite_count(), 9);
        assert!(f.attains_max_at_origin());
    }

    #[test]
    fn superlevel_of_cone() {
        let f = LogConcaveFunction::from(ClosedFormPrototype::exponential_cone(1, 1.0).unwrap());
        let k = superlevel_set(&f, (-1.0f64).exp()).unwrap();
        assert_eq!(k.vertices()[0][0], -1.0);
        let g = Grid::new(1, 8.0, 257).unwrap();
        let fs = LogConcaveFunction::from(f.sample(&g).unwrap());
        let ks = superlevel_set(&fs, (-1.0f64).exp()).unwrap();
        assert!(ks.hausdorff(&k) < 1e-12);
    }

    #[test]
    fn gaussian_level_set_in_2d() {
        let f = LogConcaveFunction::from(ClosedFormPrototype::Gaussian { dim: 2 });
        let g = Grid::new(2, 4.0, 129).unwrap();
        let fs = LogConcaveFunction::from(f.sample(&g).unwrap());
        let k = superlevel_set(&fs, (-0.5f64).exp()).unwrap();
        let disk = ConvexBody::ball(2, 1.0, 512).unwrap();
        assert!(k.hausdorff(&disk) <= 2.0 * g.h());
    }

    #[test]
    fn resampling_grid_data_stays_on_its_hull() {
        let g = Grid::new(1, 2.0, 65).unwrap();
        let s = SampledConvexFunction::from_fn(g, Provenance::GridData, |x| (x[0] >= -1.0).then_some(x[0].abs()));
        let wide = LogConcaveFunction::from(s)
            .sample(&Grid::new(1, 4.0, 129).unwrap())
            .unwrap();
        assert_eq!(wide.value(wide.grid().index([64 + 32, 0])), Some(2.0));
        assert_eq!(wide.value(wide.grid().index([64 + 33, 0])), None);
        assert_eq!(wide.value(wide.grid().index([64 - 16, 0])), Some(1.0));
        assert_eq!(wide.value(wide.grid().index([64 - 17, 0])), None);
    }
}
