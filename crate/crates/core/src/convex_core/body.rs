use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::geometry::{self, dot, norm, sub};
use super::Point;
use crate::error::{Error, Result};

/// Compact convex polytope in dimension 1 (an interval) or 2 (a polygon).
///
/// Vertices are kept in convex position; polygons are counter-clockwise.
/// Degenerate bodies (a point, a segment) are allowed and have no facets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexBody {
    dim: usize,
    vertices: Vec<Point>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Facet {
    pub normal: Point,
    pub offset: f64,
    /// Length of the edge in 2D, one in 1D.
    pub measure: f64,
    pub endpoints: [Point; 2],
}

impl ConvexBody {
    pub fn interval(a: f64, b: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite()) || a > b {
            return Err(Error::InvalidInput(format!("bad interval [{a}, {b}]")));
        }
        Ok(Self {
            dim: 1,
            vertices: vec![[a, 0.0], [b, 0.0]],
        })
    }

    /// Convex hull of `points`.
    pub fn from_points(dim: usize, points: &[Point]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("body needs at least one point".into()));
        }
        if points.iter().any(|p| !p[0].is_finite() || !p[1].is_finite()) {
            return Err(Error::InvalidInput("non-finite vertex".into()));
        }
        match dim {
            1 => {
                let lo = points.iter().map(|p| p[0]).fold(f64::INFINITY, f64::min);
                let hi = points.iter().map(|p| p[0]).fold(f64::NEG_INFINITY, f64::max);
                Self::interval(lo, hi)
            }
            2 => Ok(Self {
                dim: 2,
                vertices: geometry::convex_hull(points),
            }),
            _ => Err(Error::InvalidInput(format!("dimension {dim} not supported"))),
        }
    }

    /// `[-r, r]^n`.
    pub fn cube(dim: usize, r: f64) -> Result<Self> {
        match dim {
            1 => Self::interval(-r, r),
            _ => Self::from_points(2, &[[-r, -r], [r, -r], [r, r], [-r, r]]),
        }
    }

    /// Regular polygon inscribed in the circle of radius `r`, first vertex on the
    /// positive first axis. In 1D this is `[-r, r]`.
    pub fn ball(dim: usize, r: f64, n: usize) -> Result<Self> {
        if dim == 1 {
            return Self::interval(-r, r);
        }
        if n < 3 {
            return Err(Error::InvalidInput("polygon needs three vertices".into()));
        }
        let pts: Vec<Point> = (0..n)
            .map(|k| {
                let a = 2.0 * PI * k as f64 / n as f64;
                [r * a.cos(), r * a.sin()]
            })
            .collect();
        Ok(Self { dim: 2, vertices: pts })
    }

    pub fn origin(dim: usize) -> Self {
        Self {
            dim,
            vertices: vec![[0.0, 0.0]],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn is_degenerate(&self) -> bool {
        if self.dim == 1 {
            self.vertices[1][0] - self.vertices[0][0] <= 0.0
        } else {
            self.vertices.len() < 3
        }
    }

    pub fn facets(&self) -> Vec<Facet> {
        if self.is_degenerate() {
            return Vec::new();
        }
        if self.dim == 1 {
            let (a, b) = (self.vertices[0][0], self.vertices[1][0]);
            return vec![
                Facet {
                    normal: [1.0, 0.0],
                    offset: b,
                    measure: 1.0,
                    endpoints: [[b, 0.0]; 2],
                },
                Facet {
                    normal: [-1.0, 0.0],
                    offset: -a,
                    measure: 1.0,
                    endpoints: [[a, 0.0]; 2],
                },
            ];
        }
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let a = self.vertices[i];
                let b = self.vertices[(i + 1) % n];
                let e = sub(&b, &a);
                let len = norm(&e);
                let normal = [e[1] / len, -e[0] / len];
                Facet {
                    normal,
                    offset: dot(&normal, &a),
                    measure: len,
                    endpoints: [a, b],
                }
            })
            .collect()
    }

    /// `h_K(v) = max over vertices of <v, vertex>`.
    pub fn support(&self, v: &Point) -> f64 {
        self.vertices
            .iter()
            .map(|p| v[0] * p[0] + v[1] * p[1])
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn contains(&self, x: &Point, tol: f64) -> bool {
        if self.dim == 1 {
            return x[0] >= self.vertices[0][0] - tol && x[0] <= self.vertices[1][0] + tol;
        }
        match self.vertices.len() {
            1 | 2 => geometry::distance_to_convex(&self.vertices, x) <= tol,
            _ => geometry::contains_convex(&self.vertices, x, tol),
        }
    }

    pub fn distance(&self, x: &Point) -> f64 {
        if self.dim == 1 {
            let (a, b) = (self.vertices[0][0], self.vertices[1][0]);
            return (a - x[0]).max(x[0] - b).max(0.0);
        }
        geometry::distance_to_convex(&self.vertices, x)
    }

    pub fn min_facet_offset(&self) -> f64 {
        self.facets().iter().map(|f| f.offset).fold(f64::INFINITY, f64::min)
    }

    pub fn is_origin_interior(&self) -> bool {
        !self.is_degenerate() && self.min_facet_offset() > 1e-12
    }

    fn require_origin_interior(&self) -> Result<()> {
        if self.is_origin_interior() {
            Ok(())
        } else {
            Err(Error::OriginNotInterior)
        }
    }

    /// `rho_K(u) = max{ s >= 0 : s u in K }` for `u != 0`.
    pub fn radial(&self, u: &Point) -> Result<f64> {
        self.require_origin_interior()?;
        let mut best = f64::INFINITY;
        for f in self.facets() {
            let c = dot(&f.normal, u);
            if c > 0.0 {
                best = best.min(f.offset / c);
            }
        }
        Ok(best)
    }

    pub fn polar(&self) -> Result<Self> {
        self.require_origin_interior()?;
        let pts: Vec<Point> = self
            .facets()
            .iter()
            .map(|f| [f.normal[0] / f.offset, f.normal[1] / f.offset])
            .collect();
        Self::from_points(self.dim, &pts)
    }

    /// `K + t L` for `t >= 0`.
    pub fn minkowski_sum(&self, t: f64, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::GridMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        if t < 0.0 {
            return Err(Error::InvalidInput("Minkowski coefficient must be nonnegative".into()));
        }
        let mut pts = Vec::with_capacity(self.vertices.len() * other.vertices.len());
        for a in &self.vertices {
            for b in &other.vertices {
                pts.push([a[0] + t * b[0], a[1] + t * b[1]]);
            }
        }
        Self::from_points(self.dim, &pts)
    }

    pub fn scaled(&self, t: f64) -> Result<Self> {
        let pts: Vec<Point> = self.vertices.iter().map(|p| [t * p[0], t * p[1]]).collect();
        Self::from_points(self.dim, &pts)
    }

    /// Length in 1D, area in 2D.
    pub fn volume(&self) -> f64 {
        if self.dim == 1 {
            self.vertices[1][0] - self.vertices[0][0]
        } else {
            geometry::polygon_area(&self.vertices)
        }
    }

    /// Hausdorff distance; for convex polytopes it is attained at vertices.
    pub fn hausdorff(&self, other: &Self) -> f64 {
        let a = self.vertices.iter().map(|v| other.distance(v)).fold(0.0, f64::max);
        let b = other.vertices.iter().map(|v| self.distance(v)).fold(0.0, f64::max);
        a.max(b)
    }

    /// Intersection with the halfspace `<normal, x> <= offset`.
    pub fn clip(&self, normal: &Point, offset: f64) -> Option<Self> {
        if self.dim == 1 {
            let (mut a, mut b) = (self.vertices[0][0], self.vertices[1][0]);
            let n = normal[0];
            if n > 0.0 {
                b = b.min(offset / n);
            } else if n < 0.0 {
                a = a.max(offset / n);
            } else if offset < 0.0 {
                return None;
            }
            return Self::interval(a, b).ok();
        }
        let poly = geometry::clip_halfplane(&self.vertices, normal, offset);
        if poly.is_empty() {
            return None;
        }
        Self::from_points(2, &poly).ok()
    }
}

/// Wulff shape `[g] = { x : <x, v> <= g(v) for every sampled v }`.
pub fn wulff_shape(dim: usize, directions: &[Point], values: &[f64]) -> Result<ConvexBody> {
    if directions.len() != values.len() || directions.is_empty() {
        return Err(Error::InvalidInput("directions and samples differ in length".into()));
    }
    if values.iter().any(|&g| !(g > 0.0) || !g.is_finite()) {
        return Err(Error::NonPositiveSamples);
    }
    let gmax = values.iter().cloned().fold(0.0, f64::max);
    let big = 1e3 * gmax;
    let mut body = ConvexBody::cube(dim, big)?;
    for (v, &g) in directions.iter().zip(values) {
        let l = norm(v);
        let u = [v[0] / l, v[1] / l];
        body = body
            .clip(&u, g / l)
            .ok_or_else(|| Error::InvalidInput("empty Wulff shape".into()))?;
    }
    if body.vertices.iter().any(|p| p[0].abs().max(p[1].abs()) > 0.5 * big) {
        return Err(Error::InvalidInput("directions do not bound the Wulff shape".into()));
    }
    Ok(body)
}

/// `n` equally spaced unit directions, starting at the first axis. In 1D `{+1, -1}`.
pub fn uniform_directions(dim: usize, n: usize) -> Vec<Point> {
    if dim == 1 {
        return vec![[1.0, 0.0], [-1.0, 0.0]];
    }
    (0..n)
        .map(|k| {
            let a = 2.0 * PI * k as f64 / n as f64;
            [a.cos(), a.sin()]
        })
        .collect()
}
