//! Cell quadrature of `f omega` on a grid, shared by moments, curvature
//! measures and total variation.
//!
//! Every node owns the cell of side `h` centred on it. The cell containing the
//! origin is integrated in polar form through `omega_bar`, which absorbs an
//! integrable singularity of the weight. Functions with compact support are
//! integrated over the exact support body: boundary cells are clipped and the
//! pieces belonging to masked nodes are handed to the nearest finite node.

use std::f64::consts::PI;

use crate::convex_core::body::ConvexBody;
use crate::convex_core::geometry::{clip_convex, polygon_area, polygon_centroid, square_cell};
use crate::convex_core::grid::Grid;
use crate::convex_core::logconcave::{LogConcaveFunction, Potential};
use crate::convex_core::prototype::ClosedFormPrototype;
use crate::convex_core::sampled::SampledConvexFunction;
use crate::convex_core::Point;
use crate::error::{Error, Result};
use crate::numeric::gauss_legendre;

use super::weight::WeightFunction;

/// Angular resolution of the polar fan on the origin cell (2D).
pub const ORIGIN_FAN_DIRECTIONS: usize = 256;
/// Radial pieces per fan direction.
pub const ORIGIN_FAN_PIECES: usize = 8;
/// Sub-cells per axis for closed-form potentials.
pub const SUBCELLS_1D: usize = 4;
pub const SUBCELLS_2D: usize = 2;
/// Sub-cells per axis near a singular origin.
pub const NEAR_ORIGIN_SUBCELLS: usize = 8;
/// Cells within this many spacings of the origin count as near the origin.
pub const NEAR_ORIGIN_CELLS: f64 = 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadPoint {
    pub x: Point,
    /// `int omega dx` over the piece represented by this point.
    pub weight: f64,
    pub phi: f64,
    /// Gradient of `phi` on the piece.
    pub grad: Point,
    /// Point where `phi` and `grad` are taken; the node itself for sampled
    /// potentials, so that `<anchor, grad> - phi` is the conjugate of the
    /// interpolant at `grad`.
    pub anchor: Point,
    /// Gradient taken from a one-sided difference at the domain boundary.
    pub boundary: bool,
}

impl QuadPoint {
    pub fn f(&self) -> f64 {
        (-self.phi).exp()
    }

    pub fn mass(&self) -> f64 {
        self.f() * self.weight
    }
}

#[derive(Debug, Clone)]
pub struct Quadrature {
    pub grid: Grid,
    pub points: Vec<QuadPoint>,
    /// Mass of `f omega` carried by cells on the outer shell of the grid.
    pub shell_mass: f64,
    /// Mass of `f omega` from nodes inside the box of half the radius.
    pub half_box_mass: f64,
}

impl Quadrature {
    pub fn total(&self) -> f64 {
        self.points.iter().map(|p| p.mass()).sum()
    }

    pub fn boundary_grade_mass(&self) -> f64 {
        self.points.iter().filter(|p| p.boundary).map(|p| p.mass()).sum()
    }
}

fn node_is_half_box(grid: &Grid, x: &Point) -> bool {
    (0..grid.dim()).all(|a| x[a].abs() <= 0.5 * grid.half_width(a) + 1e-12)
}

/// Builds the quadrature of `f omega` on `grid` with `subcells` points per axis
/// per cell for closed-form potentials (`None` for the defaults).
pub fn build(
    f: &LogConcaveFunction,
    omega: &WeightFunction,
    grid: &Grid,
    subcells: Option<usize>,
) -> Result<Quadrature> {
    if f.dim() != grid.dim() {
        return Err(Error::GridMismatch {
            left: f.dim(),
            right: grid.dim(),
        });
    }
    if omega.dim() != grid.dim() {
        return Err(Error::GridMismatch {
            left: omega.dim(),
            right: grid.dim(),
        });
    }
    match f.potential() {
        Potential::Closed(p) => match p.compact_support() {
            Some(body) => {
                let level = match p {
                    ClosedFormPrototype::ScaledIndicator { c, .. } => -c.ln(),
                    _ => 0.0,
                };
                Ok(compact_constant(&body, level, omega, grid))
            }
            None => Ok(full_support(p, omega, grid, subcells)),
        },
        Potential::Sampled(_) => {
            let s = f.sample(grid)?;
            sampled(&s, omega)
        }
    }
}

/// `int omega` over the square cell centred at `c`.
pub fn cell_omega(omega: &WeightFunction, grid: &Grid, c: &Point) -> f64 {
    let hx = grid.spacing(0);
    let hy = if grid.dim() == 2 { grid.spacing(1) } else { 1.0 };
    let is_origin = (0..grid.dim()).all(|a| c[a].abs() < 1e-12 * grid.spacing(a));
    if is_origin {
        return origin_fan(omega, grid).iter().map(|p| p.1).sum();
    }
    let near = omega.is_singular_at_origin() && c[0].hypot(c[1]) <= NEAR_ORIGIN_CELLS * grid.h() * 1.5;
    if !near {
        return omega.eval(c) * grid.cell_volume();
    }
    let s = NEAR_ORIGIN_SUBCELLS;
    let mut total = 0.0;
    for_subcells(grid.dim(), s, |u, v| {
        let x = [c[0] + u * hx, c[1] + v * hy * (grid.dim() == 2) as i32 as f64];
        total += omega.eval(&x);
    });
    total * grid.cell_volume() / (s.pow(grid.dim() as u32)) as f64
}

/// Calls `visit` with offsets (in units of the spacing) of the `s^n` sub-cell midpoints.
fn for_subcells(dim: usize, s: usize, mut visit: impl FnMut(f64, f64)) {
    let off = |i: usize| (i as f64 + 0.5) / s as f64 - 0.5;
    if dim == 1 {
        for i in 0..s {
            visit(off(i), 0.0);
        }
    } else {
        for i in 0..s {
            for j in 0..s {
                visit(off(i), off(j));
            }
        }
    }
}

/// Polar pieces of the origin cell: `(point, int omega over the piece)`.
/// Angles are Gauss–Legendre nodes on the four arcs between cell corners, so
/// the fan reproduces the square exactly for smooth weights.
pub(crate) fn origin_fan(omega: &WeightFunction, grid: &Grid) -> Vec<(Point, f64)> {
    let half = [0.5 * grid.spacing(0), 0.5 * grid.spacing(grid.dim() - 1)];
    let dirs: Vec<(Point, f64)> = if grid.dim() == 1 {
        vec![([-1.0, 0.0], 1.0), ([1.0, 0.0], 1.0)]
    } else {
        let c = half[1].atan2(half[0]);
        let cuts = [-c, c, PI - c, PI + c, 2.0 * PI - c];
        let per_arc = ORIGIN_FAN_DIRECTIONS / 4;
        cuts.windows(2)
            .flat_map(|w| gauss_legendre(per_arc, w[0], w[1]))
            .map(|(a, wt)| ([a.cos(), a.sin()], wt))
            .collect()
    };
    let mut out = Vec::with_capacity(dirs.len() * ORIGIN_FAN_PIECES);
    for (u, dtheta) in dirs {
        let rho = if grid.dim() == 1 {
            half[0]
        } else {
            (half[0] / u[0].abs()).min(half[1] / u[1].abs())
        };
        let mut prev = 0.0;
        for j in 0..ORIGIN_FAN_PIECES {
            let r1 = rho * (j + 1) as f64 / ORIGIN_FAN_PIECES as f64;
            let rm = rho * (j as f64 + 0.5) / ORIGIN_FAN_PIECES as f64;
            let cur = omega.omega_bar(r1, &u).unwrap_or(f64::NAN);
            out.push(([rm * u[0], rm * u[1]], (cur - prev) * dtheta));
            prev = cur;
        }
    }
    out
}

fn full_support(p: &ClosedFormPrototype, omega: &WeightFunction, grid: &Grid, subcells: Option<usize>) -> Quadrature {
    let dim = grid.dim();
    let s = subcells.unwrap_or(if dim == 1 { SUBCELLS_1D } else { SUBCELLS_2D });
    let hx = grid.spacing(0);
    let hy = if dim == 2 { grid.spacing(1) } else { 0.0 };
    let mut points = Vec::with_capacity(grid.len() * s.pow(dim as u32));
    let mut shell = 0.0;
    let mut half_box = 0.0;
    let origin = grid.origin_index();
    for k in 0..grid.len() {
        let c = grid.node(k);
        let start = points.len();
        let push = |x: Point, w: f64, points: &mut Vec<QuadPoint>| {
            let phi = p.phi(&x).expect("full-support potential");
            for (g, frac) in p.gradients(&x) {
                points.push(QuadPoint {
                    x,
                    weight: w * frac,
                    phi,
                    grad: g,
                    anchor: x,
                    boundary: false,
                });
            }
        };
        if k == origin {
            for (x, w) in origin_fan(omega, grid) {
                push(x, w, &mut points);
            }
        } else {
            let near = omega.is_singular_at_origin() && c[0].hypot(c[1]) <= NEAR_ORIGIN_CELLS * grid.h() * 1.5;
            let ss = if near { NEAR_ORIGIN_SUBCELLS.max(s) } else { s };
            let vol = grid.cell_volume() / ss.pow(dim as u32) as f64;
            for_subcells(dim, ss, |u, v| {
                let x = [c[0] + u * hx, c[1] + v * hy];
                push(x, omega.eval(&x) * vol, &mut points);
            });
        }
        let m: f64 = points[start..].iter().map(|q| q.mass()).sum();
        if grid.is_outer(k) {
            shell += m;
        }
        if node_is_half_box(grid, &c) {
            half_box += m;
        }
    }
    Quadrature {
        grid: grid.clone(),
        points,
        shell_mass: shell,
        half_box_mass: half_box,
    }
}

/// Pieces of cells intersecting `body`: `(node, clipped area, int omega)`.
fn clipped_cells(body: &ConvexBody, omega: &WeightFunction, grid: &Grid) -> Vec<(usize, f64)> {
    let dim = grid.dim();
    let hx = 0.5 * grid.spacing(0);
    let hy = if dim == 2 { 0.5 * grid.spacing(1) } else { 0.0 };
    let vol = grid.cell_volume();
    let tol = 1e-12 * grid.h();
    let mut out = Vec::new();
    for k in 0..grid.len() {
        let c = grid.node(k);
        if body.distance(&c) > hx.max(hy) * 1.5 {
            continue;
        }
        if dim == 1 {
            let (a, b) = (body.vertices()[0][0], body.vertices()[1][0]);
            let lo = (c[0] - hx).max(a);
            let hi = (c[0] + hx).min(b);
            if hi - lo <= tol {
                continue;
            }
            let len = hi - lo;
            let w = if (len - 2.0 * hx).abs() <= tol {
                cell_omega(omega, grid, &c)
            } else {
                omega.eval(&[0.5 * (lo + hi), 0.0]) * len
            };
            out.push((k, w));
            continue;
        }
        let cell = square_cell(&c, hx, hy);
        if cell.iter().all(|q| body.contains(q, tol)) {
            out.push((k, cell_omega(omega, grid, &c)));
            continue;
        }
        if body.is_degenerate() {
            continue;
        }
        let piece = clip_convex(&cell, body.vertices());
        let area = polygon_area(&piece);
        if area <= tol * tol {
            continue;
        }
        let w = if c == [0.0, 0.0] {
            cell_omega(omega, grid, &c) * area / vol
        } else {
            omega.eval(&polygon_centroid(&piece)) * area
        };
        out.push((k, w));
    }
    out
}

fn compact_constant(body: &ConvexBody, level: f64, omega: &WeightFunction, grid: &Grid) -> Quadrature {
    let mut points = Vec::new();
    let mut shell = 0.0;
    let mut half_box = 0.0;
    for (k, w) in clipped_cells(body, omega, grid) {
        let x = grid.node(k);
        let q = QuadPoint {
            x,
            weight: w,
            phi: level,
            grad: [0.0, 0.0],
            anchor: x,
            boundary: false,
        };
        if grid.is_outer(k) {
            shell += q.mass();
        }
        if node_is_half_box(grid, &x) {
            half_box += q.mass();
        }
        points.push(q);
    }
    Quadrature {
        grid: grid.clone(),
        points,
        shell_mass: shell,
        half_box_mass: half_box,
    }
}

fn nearest_finite(s: &SampledConvexFunction, k: usize) -> Option<usize> {
    let g = s.grid();
    let ij = g.multi_index(k);
    let x = g.node(k);
    let m = g.m() as isize;
    let mut best: Option<(f64, usize)> = None;
    let range: &[isize] = &[-1, 0, 1];
    for di in range {
        for dj in if g.dim() == 2 { range } else { &[0][..] } {
            let i = ij[0] as isize + di;
            let j = ij[1] as isize + dj;
            if i < 0 || i >= m || j < 0 || (g.dim() == 2 && j >= m) {
                continue;
            }
            let n = g.index([i as usize, j as usize]);
            if s.is_finite(n) {
                let y = g.node(n);
                let d = (x[0] - y[0]).hypot(x[1] - y[1]);
                if best.map_or(true, |(bd, _)| d < bd) {
                    best = Some((d, n));
                }
            }
        }
    }
    best.map(|(_, n)| n)
}

fn sampled(s: &SampledConvexFunction, omega: &WeightFunction) -> Result<Quadrature> {
    let grid = s.grid().clone();
    let dim = grid.dim();
    let domain = s.domain()?;
    let mut owned = vec![0.0; grid.len()];
    for (k, w) in clipped_cells(&domain, omega, &grid) {
        let target = if s.is_finite(k) { Some(k) } else { nearest_finite(s, k) };
        if let Some(t) = target {
            owned[t] += w;
        }
    }
    let mut points = Vec::with_capacity(grid.len() * (1 << dim));
    let mut shell = 0.0;
    let mut half_box = 0.0;
    let q = 0.25;
    for k in 0..grid.len() {
        let w = owned[k];
        if w == 0.0 {
            continue;
        }
        let phi = s.values()[k];
        let c = grid.node(k);
        let parts = 1usize << dim;
        for corner in 0..parts {
            let mut g = [0.0; 2];
            let mut x = c;
            let mut boundary = false;
            for axis in 0..dim {
                let dir: isize = if corner >> axis & 1 == 1 { 1 } else { -1 };
                x[axis] += dir as f64 * q * grid.spacing(axis);
                g[axis] = match s.one_sided(k, axis, dir).or_else(|| {
                    boundary = true;
                    s.one_sided(k, axis, -dir)
                }) {
                    Some(d) => d,
                    None => 0.0,
                };
            }
            points.push(QuadPoint {
                x,
                weight: w / parts as f64,
                phi,
                grad: g,
                anchor: c,
                boundary,
            });
        }
        let m = (-phi).exp() * w;
        if grid.is_outer(k) {
            shell += m;
        }
        if node_is_half_box(&grid, &c) {
            half_box += m;
        }
    }
    Ok(Quadrature {
        grid,
        points,
        shell_mass: shell,
        half_box_mass: half_box,
    })
}
