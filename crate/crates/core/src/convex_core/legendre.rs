use rayon::prelude::*;

use super::body::ConvexBody;
use super::grid::Grid;
use super::logconcave::box_corners;
use super::sampled::{Provenance, SampledConvexFunction};
use crate::error::{Error, Result};

/// Lower convex hull of `(xs[i], vals[i])` with `xs` strictly increasing.
/// Returns the indices of the hull vertices.
fn lower_hull(xs: &[f64], vals: &[f64]) -> Vec<usize> {
    let mut hull: Vec<usize> = Vec::with_capacity(xs.len());
    for i in 0..xs.len() {
        while hull.len() >= 2 {
            let a = hull[hull.len() - 2];
            let b = hull[hull.len() - 1];
            // drop b when it lies on or above the chord from a to i
            let lhs = (vals[b] - vals[a]) * (xs[i] - xs[a]);
            let rhs = (vals[i] - vals[a]) * (xs[b] - xs[a]);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(i);
    }
    hull
}

/// Discrete conjugate `max_i (x_i y - v_i)` at every `y` of the increasing
/// sequence `ys`, in linear time: the maximizing hull vertex moves right as `y`
/// grows. Ties keep the lower index.
pub fn conjugate_line(xs: &[f64], vals: &[f64], ys: &[f64]) -> Vec<f64> {
    debug_assert!(!xs.is_empty());
    let hull = lower_hull(xs, vals);
    let mut out = Vec::with_capacity(ys.len());
    let mut p = 0;
    for &y in ys {
        let score = |k: usize| xs[hull[k]] * y - vals[hull[k]];
        while p + 1 < hull.len() && score(p + 1) > score(p) {
            p += 1;
        }
        out.push(score(p));
    }
    out
}

/// Dual grid with radius equal to the largest finite slope plus one spacing
/// along each axis, and the same node count as the primal grid.
pub fn auto_dual_grid(phi: &SampledConvexFunction) -> Result<Grid> {
    auto_dual_grid_for(&[phi], phi.grid().m())
}

pub(crate) fn auto_dual_grid_for(phis: &[&SampledConvexFunction], m: usize) -> Result<Grid> {
    let dim = phis[0].dim();
    let mut r = [0.0f64; 2];
    for (axis, ra) in r.iter_mut().enumerate().take(dim) {
        for phi in phis {
            let h = phi.grid().spacing(axis);
            *ra = ra.max(phi.max_abs_slope(axis) + h);
        }
    }
    Grid::with_half_widths(dim, r, m)
}

fn axis_coords(grid: &Grid, axis: usize) -> Vec<f64> {
    (0..grid.m()).map(|i| grid.coord(axis, i)).collect()
}

/// Raw discrete conjugate values on `dual`, computed one axis at a time.
pub(crate) fn conjugate_values(phi: &SampledConvexFunction, dual: &Grid) -> Result<Vec<f64>> {
    if phi.dim() != dual.dim() {
        return Err(Error::GridMismatch {
            left: phi.dim(),
            right: dual.dim(),
        });
    }
    if phi.finite_count() == 0 {
        return Err(Error::AllInfinite);
    }
    let g = phi.grid();
    let xs0 = axis_coords(g, 0);
    let ys0 = axis_coords(dual, 0);
    if g.dim() == 1 {
        let (xs, vals): (Vec<f64>, Vec<f64>) = phi.finite_nodes().map(|k| (xs0[k], phi.values()[k])).unzip();
        return Ok(conjugate_line(&xs, &vals, &ys0));
    }
    let xs1 = axis_coords(g, 1);
    let ys1 = axis_coords(dual, 1);
    let m = g.m();
    let md = dual.m();
    // rows of fixed x1: conjugate in x2; absent rows stay None
    let rows: Vec<Option<Vec<f64>>> = (0..m)
        .into_par_iter()
        .map(|i| {
            let (xs, vals): (Vec<f64>, Vec<f64>) = (0..m)
                .filter_map(|j| phi.value(g.index([i, j])).map(|v| (xs1[j], v)))
                .unzip();
            if xs.is_empty() {
                None
            } else {
                Some(conjugate_line(&xs, &vals, &ys1))
            }
        })
        .collect();
    let present: Vec<usize> = (0..m).filter(|&i| rows[i].is_some()).collect();
    let xs: Vec<f64> = present.iter().map(|&i| xs0[i]).collect();
    let cols: Vec<Vec<f64>> = (0..md)
        .into_par_iter()
        .map(|jd| {
            let vals: Vec<f64> = present.iter().map(|&i| -rows[i].as_ref().unwrap()[jd]).collect();
            conjugate_line(&xs, &vals, &ys0)
        })
        .collect();
    let mut out = vec![0.0; dual.len()];
    for (jd, col) in cols.iter().enumerate() {
        for (id, v) in col.iter().enumerate() {
            out[dual.index([id, jd])] = *v;
        }
    }
    Ok(out)
}

/// `phi^*(y) = max over finite nodes x of (<x, y> - phi(x))` on `dual`.
pub fn legendre_transform(phi: &SampledConvexFunction, dual: &Grid) -> Result<SampledConvexFunction> {
    let vals = conjugate_values(phi, dual)?;
    let out = SampledConvexFunction::new(
        dual.clone(),
        vals,
        vec![false; dual.len()],
        Provenance::ConjugateOf(Box::new(phi.provenance().clone())),
    )?;
    Ok(out.with_domain(ConvexBody::from_points(dual.dim(), &box_corners(dual))?))
}

/// `phi^{**}` on the grid of `phi`, through the automatic dual grid. Nodes
/// outside the hull of the original domain are masked.
pub fn biconjugate(phi: &SampledConvexFunction) -> Result<SampledConvexFunction> {
    let dual = auto_dual_grid(phi)?;
    let star = legendre_transform(phi, &dual)?;
    let back = conjugate_values(&star, phi.grid())?;
    let domain = phi.domain()?;
    let g = phi.grid();
    let mask: Vec<bool> = (0..g.len())
        .map(|k| !domain.contains(&g.node(k), 1e-9 * g.h()))
        .collect();
    let mut out = SampledConvexFunction::new(g.clone(), back, mask, phi.provenance().clone())?;
    out.set_provenance(Provenance::ConjugateOf(Box::new(star.provenance().clone())));
    Ok(out.with_domain(domain))
}

/// Exact piecewise-linear convex function of one variable on `[xs[0], xs[n-1]]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinear {
    pub xs: Vec<f64>,
    pub vals: Vec<f64>,
}

impl PiecewiseLinear {
    /// Lower convex hull of sampled data (a single point is allowed).
    pub fn hull_of(xs: &[f64], vals: &[f64]) -> Self {
        let h = lower_hull(xs, vals);
        Self {
            xs: h.iter().map(|&i| xs[i]).collect(),
            vals: h.iter().map(|&i| vals[i]).collect(),
        }
    }

    pub fn from_sampled(phi: &SampledConvexFunction) -> Result<Self> {
        if phi.dim() != 1 {
            return Err(Error::GridMismatch {
                left: phi.dim(),
                right: 1,
            });
        }
        let (xs, vals): (Vec<f64>, Vec<f64>) = phi
            .finite_nodes()
            .map(|k| (phi.grid().coord(0, k), phi.values()[k]))
            .unzip();
        if xs.is_empty() {
            return Err(Error::AllInfinite);
        }
        let mut out = Self::hull_of(&xs, &vals);
        if let Some(d) = phi.explicit_domain() {
            out.extend_to(d.vertices()[0][0], d.vertices()[1][0]);
        }
        Ok(out)
    }

    /// Extends the end edges linearly so the domain reaches `[a, b]`.
    fn extend_to(&mut self, a: f64, b: f64) {
        let slope = |xs: &[f64], vals: &[f64], i: usize, j: usize| {
            if i == j {
                0.0
            } else {
                (vals[j] - vals[i]) / (xs[j] - xs[i])
            }
        };
        let n = self.xs.len();
        if b > self.xs[n - 1] {
            let s = slope(&self.xs, &self.vals, n.saturating_sub(2), n - 1);
            let v = self.vals[n - 1] + s * (b - self.xs[n - 1]);
            if n >= 2 {
                self.xs[n - 1] = b;
                self.vals[n - 1] = v;
            } else {
                self.xs.push(b);
                self.vals.push(v);
            }
        }
        if a < self.xs[0] {
            let n = self.xs.len();
            let s = slope(&self.xs, &self.vals, 0, 1.min(n - 1));
            let v = self.vals[0] + s * (a - self.xs[0]);
            if n >= 2 {
                self.xs[0] = a;
                self.vals[0] = v;
            } else {
                self.xs.insert(0, a);
                self.vals.insert(0, v);
            }
        }
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], self.xs[self.xs.len() - 1])
    }

    pub fn eval(&self, x: f64) -> Option<f64> {
        let n = self.xs.len();
        let (a, b) = self.domain();
        let tol = 1e-12 * (1.0 + a.abs().max(b.abs()));
        if x < a - tol || x > b + tol {
            return None;
        }
        if n == 1 {
            return Some(self.vals[0]);
        }
        let i = match self.xs.partition_point(|&v| v <= x) {
            0 => 0,
            p => (p - 1).min(n - 2),
        };
        let (x0, x1) = (self.xs[i], self.xs[i + 1]);
        let s = ((x - x0) / (x1 - x0)).clamp(0.0, 1.0);
        Some(self.vals[i] + s * (self.vals[i + 1] - self.vals[i]))
    }

    /// `t phi(x / t)`, the potential of `t . f`.
    pub fn dilate(&self, t: f64) -> Self {
        Self {
            xs: self.xs.iter().map(|x| t * x).collect(),
            vals: self.vals.iter().map(|v| t * v).collect(),
        }
    }

    /// Infimal convolution `inf_{x + y = z} a(x) + b(y)`: the epigraph
    /// Minkowski sum, obtained by merging the edges of both graphs by slope.
    /// This equals `(a^* + b^*)^*` with both conjugates kept exact.
    pub fn inf_convolution(a: &Self, b: &Self) -> Self {
        let edges = |p: &Self| -> Vec<(f64, f64)> {
            p.xs.windows(2)
                .zip(p.vals.windows(2))
                .map(|(x, v)| (x[1] - x[0], v[1] - v[0]))
                .collect()
        };
        let ea = edges(a);
        let eb = edges(b);
        let mut xs = vec![a.xs[0] + b.xs[0]];
        let mut vals = vec![a.vals[0] + b.vals[0]];
        let (mut i, mut j) = (0, 0);
        while i < ea.len() || j < eb.len() {
            let take_a = match (ea.get(i), eb.get(j)) {
                (Some(p), Some(q)) => p.1 * q.0 <= q.1 * p.0,
                (Some(_), None) => true,
                _ => false,
            };
            let (dx, dv) = if take_a {
                i += 1;
                ea[i - 1]
            } else {
                j += 1;
                eb[j - 1]
            };
            let last = xs.len() - 1;
            xs.push(xs[last] + dx);
            vals.push(vals[last] + dv);
        }
        Self { xs, vals }
    }
}
