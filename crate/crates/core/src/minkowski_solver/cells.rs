//! Masses of the cells `{y : argmax_k <x_k, y> - v_k = k}` under
//! `e^{-phi*} omega dy`.

use rayon::prelude::*;
use serde::Serialize;

use crate::convex_core::geometry::{clip_halfplane, dot, polygon_area, square_cell};
use crate::convex_core::grid::Grid;
use crate::convex_core::Point;
use crate::error::{Error, Result};
use crate::numeric::{gauss_legendre, integrate_from_zero};
use crate::orlicz_moments::quadrature::origin_fan;
use crate::orlicz_moments::weight::WeightFunction;

/// Largest admissible share of the mass on the outer ring of the dual grid.
pub const TAIL_LIMIT: f64 = 5e-3;
/// Default node counts of the dual grid.
pub const DUAL_M_1D: usize = 2049;
pub const DUAL_M_2D: usize = 257;
/// `phi*` decays at least like `e^{-c |y|}`; the grid reaches `c R = DECAY_SPAN`.
pub const DECAY_SPAN: f64 = 10.0;
pub const MIN_DUAL_RADIUS: f64 = 8.0;

const GL_1D: usize = 8;
const GL_2D: usize = 3;
const GL_2D_NEAR: usize = 8;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellMasses {
    pub masses: Vec<f64>,
    /// `V = sum m_k`.
    pub total: f64,
    /// Share of `V` on the outer ring of the dual grid.
    pub tail_fraction: f64,
}

impl CellMasses {
    pub fn normalized(&self) -> Vec<f64> {
        self.masses.iter().map(|m| m / self.total).collect()
    }
}

/// `min over unit u of max_k <x_k, u>`, the slowest linear growth rate of `phi*`.
pub fn min_slope(points: &[Point], dim: usize) -> f64 {
    let dirs: Vec<Point> = if dim == 1 {
        vec![[1.0, 0.0], [-1.0, 0.0]]
    } else {
        (0..1024)
            .map(|j| {
                let a = j as f64 * std::f64::consts::TAU / 1024.0;
                [a.cos(), a.sin()]
            })
            .collect()
    };
    dirs.iter()
        .map(|u| points.iter().map(|x| dot(x, u)).fold(f64::NEG_INFINITY, f64::max))
        .fold(f64::INFINITY, f64::min)
}

/// Dual grid reaching `DECAY_SPAN / min_slope`.
pub fn solver_dual_grid(points: &[Point], dim: usize, m: Option<usize>) -> Result<Grid> {
    let c = min_slope(points, dim);
    if !(c > 0.0) {
        return Err(Error::RankDeficient);
    }
    let r = MIN_DUAL_RADIUS.max(DECAY_SPAN / c);
    Grid::new(dim, r, m.unwrap_or(if dim == 1 { DUAL_M_1D } else { DUAL_M_2D }))
}

fn affine(x: &Point, v: f64, y: &Point) -> f64 {
    x[0] * y[0] + x[1] * y[1] - v
}

fn argmax(points: &[Point], v: &[f64], y: &Point) -> (usize, f64) {
    let mut best = (0, f64::NEG_INFINITY);
    for (k, x) in points.iter().enumerate() {
        let a = affine(x, v[k], y);
        if a > best.1 {
            best = (k, a);
        }
    }
    best
}

/// Integrates `e^{-phi*} omega` cell by cell. Ties go to the lowest index.
pub fn cell_masses(v: &[f64], points: &[Point], omega: &WeightFunction, dual: &Grid) -> Result<CellMasses> {
    if v.len() != points.len() || points.is_empty() {
        return Err(Error::InvalidInput(format!(
            "{} offsets for {} atoms",
            v.len(),
            points.len()
        )));
    }
    if omega.dim() != dual.dim() {
        return Err(Error::GridMismatch {
            left: omega.dim(),
            right: dual.dim(),
        });
    }
    let (masses, tail) = if dual.dim() == 1 {
        masses_1d(v, points, omega, dual)
    } else {
        masses_2d(v, points, omega, dual)
    };
    let total: f64 = masses.iter().sum();
    if !(total.is_finite() && total > 0.0) {
        return Err(Error::QuadratureFailure(format!("cell masses sum to {total}")));
    }
    let tail_fraction = tail / total;
    if tail_fraction > TAIL_LIMIT {
        return Err(Error::TruncationUnreliable {
            fraction: tail_fraction,
            limit: TAIL_LIMIT,
        });
    }
    Ok(CellMasses {
        masses,
        total,
        tail_fraction,
    })
}

fn masses_1d(v: &[f64], points: &[Point], omega: &WeightFunction, dual: &Grid) -> (Vec<f64>, f64) {
    let r = dual.half_width(0);
    let h = dual.h();
    let mut cuts = vec![-r, 0.0, r];
    for a in 0..points.len() {
        for b in a + 1..points.len() {
            let dx = points[a][0] - points[b][0];
            if dx != 0.0 {
                let y = (v[a] - v[b]) / dx;
                if y.abs() < r {
                    cuts.push(y);
                }
            }
        }
    }
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut masses = vec![0.0; points.len()];
    let mut tail = 0.0;
    let singular = omega.is_singular_at_origin();
    for w in cuts.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let (k, _) = argmax(points, v, &[0.5 * (a + b), 0.0]);
        let g = |y: f64| (-affine(&points[k], v[k], &[y, 0.0])).exp() * omega.eval(&[y, 0.0]);
        let pieces = ((b - a) / h).ceil().max(1.0) as usize;
        let step = (b - a) / pieces as f64;
        for p in 0..pieces {
            let (lo, hi) = (a + p as f64 * step, a + (p + 1) as f64 * step);
            let val = if singular && lo == 0.0 {
                integrate_from_zero(g, hi).unwrap_or(f64::NAN)
            } else if singular && hi == 0.0 {
                integrate_from_zero(|s| g(-s), -lo).unwrap_or(f64::NAN)
            } else {
                gauss_legendre(GL_1D, lo, hi).iter().map(|&(y, wt)| wt * g(y)).sum()
            };
            masses[k] += val;
            if lo.abs().max(hi.abs()) > r - h + 1e-12 * r {
                tail += val;
            }
        }
    }
    (masses, tail)
}

/// GL rule on a triangle through the collapsed square.
fn triangle_rule(tri: [Point; 3], n: usize) -> Vec<(Point, f64)> {
    let [a, b, c] = tri;
    let area2 = ((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])).abs();
    let nodes = gauss_legendre(n, 0.0, 1.0);
    let mut out = Vec::with_capacity(n * n);
    for &(s, ws) in &nodes {
        for &(t, wt) in &nodes {
            let x = [
                a[0] + s * (b[0] - a[0]) + s * t * (c[0] - b[0]),
                a[1] + s * (b[1] - a[1]) + s * t * (c[1] - b[1]),
            ];
            out.push((x, ws * wt * s * area2));
        }
    }
    out
}

fn polygon_rule(poly: &[Point], n: usize) -> Vec<(Point, f64)> {
    (1..poly.len().saturating_sub(1))
        .flat_map(|i| triangle_rule([poly[0], poly[i], poly[i + 1]], n))
        .collect()
}

fn masses_2d(v: &[f64], points: &[Point], omega: &WeightFunction, dual: &Grid) -> (Vec<f64>, f64) {
    let m = dual.m();
    let (hx, hy) = (dual.spacing(0), dual.spacing(1));
    let origin = dual.origin_index();
    let singular = omega.is_singular_at_origin();
    let reach: Vec<f64> = points
        .iter()
        .map(|x| 0.5 * (x[0].abs() * hx + x[1].abs() * hy))
        .collect();
    let square = gauss_legendre(GL_2D, -0.5, 0.5);
    let square_near = gauss_legendre(GL_2D_NEAR, -0.5, 0.5);
    let rows: Vec<(Vec<f64>, f64)> = (0..m)
        .into_par_iter()
        .map(|i| {
            let mut masses = vec![0.0; points.len()];
            let mut tail = 0.0;
            let mut cand = Vec::with_capacity(points.len());
            for j in 0..m {
                let k = dual.index([i, j]);
                let c = dual.node(k);
                let mut cell = 0.0;
                if k == origin {
                    for (y, w) in origin_fan(omega, dual) {
                        let (kk, a) = argmax(points, v, &y);
                        let val = (-a).exp() * w;
                        masses[kk] += val;
                        cell += val;
                    }
                } else {
                    let centre: Vec<f64> = points.iter().zip(v).map(|(x, &vk)| affine(x, vk, &c)).collect();
                    let floor = centre
                        .iter()
                        .zip(&reach)
                        .map(|(a, r)| a - r)
                        .fold(f64::NEG_INFINITY, f64::max);
                    cand.clear();
                    cand.extend((0..points.len()).filter(|&q| centre[q] + reach[q] >= floor));
                    let near = singular && c[0].hypot(c[1]) <= 4.5 * dual.h();
                    let mut add = |q: usize, y: &Point, w: f64| {
                        let val = (-affine(&points[q], v[q], y)).exp() * omega.eval(y) * w;
                        masses[q] += val;
                        cell += val;
                    };
                    if cand.len() == 1 {
                        let rule = if near { &square_near } else { &square };
                        for &(s, ws) in rule {
                            for &(t, wt) in rule {
                                add(cand[0], &[c[0] + s * hx, c[1] + t * hy], ws * wt * hx * hy);
                            }
                        }
                    } else {
                        for &q in &cand {
                            let mut poly = square_cell(&c, 0.5 * hx, 0.5 * hy);
                            for &o in &cand {
                                if o == q || poly.is_empty() {
                                    continue;
                                }
                                // keep <x_o - x_q, y> <= v_o - v_q
                                let normal = [points[o][0] - points[q][0], points[o][1] - points[q][1]];
                                poly = clip_halfplane(&poly, &normal, v[o] - v[q]);
                            }
                            if poly.len() < 3 || polygon_area(&poly) <= 0.0 {
                                continue;
                            }
                            for (y, w) in polygon_rule(&poly, if near { GL_2D_NEAR } else { GL_2D }) {
                                add(q, &y, w);
                            }
                        }
                    }
                }
                if dual.is_outer(k) {
                    tail += cell;
                }
            }
            (masses, tail)
        })
        .collect();
    let mut masses = vec![0.0; points.len()];
    let mut tail = 0.0;
    for (row, t) in rows {
        for (a, b) in masses.iter_mut().zip(row) {
            *a += b;
        }
        tail += t;
    }
    (masses, tail)
}
