use serde::{Deserialize, Serialize};

use super::Point;
use crate::error::{Error, Result};

/// Regular axis-aligned grid on `[-R_1, R_1] x ... ` with `m` nodes per axis.
///
/// `m` is odd so the origin is always a node. In 2D nodes are stored row-major
/// with the second axis varying fastest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    dim: usize,
    #[serde(rename = "R")]
    half_width: [f64; 2],
    m: usize,
}

impl Grid {
    pub const DEFAULT_R: f64 = 8.0;
    pub const DEFAULT_M_1D: usize = 257;
    pub const DEFAULT_M_2D: usize = 129;

    pub fn new(dim: usize, r: f64, m: usize) -> Result<Self> {
        Self::with_half_widths(dim, [r, r], m)
    }

    pub fn with_half_widths(dim: usize, half_width: [f64; 2], m: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidGrid(format!("dimension {dim} not supported")));
        }
        if m < 16 || m % 2 == 0 {
            return Err(Error::InvalidGrid(format!("m = {m} must be odd and at least 16")));
        }
        for &r in &half_width[..dim] {
            if !(r.is_finite() && r > 0.0) {
                return Err(Error::InvalidGrid(format!("half width {r} must be positive")));
            }
        }
        let mut hw = half_width;
        if dim == 1 {
            hw[1] = 0.0;
        }
        Ok(Self { dim, half_width: hw, m })
    }

    /// Default grid for the dimension: `R = 8`, `m = 257` in 1D and `129` per axis in 2D.
    pub fn default_for(dim: usize) -> Result<Self> {
        let m = if dim == 1 {
            Self::DEFAULT_M_1D
        } else {
            Self::DEFAULT_M_2D
        };
        Self::new(dim, Self::DEFAULT_R, m)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn half_width(&self, axis: usize) -> f64 {
        self.half_width[axis]
    }

    pub fn half_widths(&self) -> [f64; 2] {
        self.half_width
    }

    pub fn spacing(&self, axis: usize) -> f64 {
        2.0 * self.half_width[axis] / (self.m - 1) as f64
    }

    /// Largest spacing over the axes.
    pub fn h(&self) -> f64 {
        (0..self.dim).map(|a| self.spacing(a)).fold(0.0, f64::max)
    }

    pub fn len(&self) -> usize {
        self.m.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn coord(&self, axis: usize, i: usize) -> f64 {
        let c = self.center_index();
        (i as f64 - c as f64) * self.spacing(axis)
    }

    pub fn center_index(&self) -> usize {
        (self.m - 1) / 2
    }

    pub fn origin_index(&self) -> usize {
        let c = self.center_index();
        self.index([c, c])
    }

    pub fn index(&self, ij: [usize; 2]) -> usize {
        if self.dim == 1 {
            ij[0]
        } else {
            ij[0] * self.m + ij[1]
        }
    }

    pub fn multi_index(&self, k: usize) -> [usize; 2] {
        if self.dim == 1 {
            [k, 0]
        } else {
            [k / self.m, k % self.m]
        }
    }

    pub fn node(&self, k: usize) -> Point {
        let [i, j] = self.multi_index(k);
        if self.dim == 1 {
            [self.coord(0, i), 0.0]
        } else {
            [self.coord(0, i), self.coord(1, j)]
        }
    }

    pub fn cell_volume(&self) -> f64 {
        (0..self.dim).map(|a| self.spacing(a)).product()
    }

    /// Whether node `k` lies on the outer shell of the grid.
    pub fn is_outer(&self, k: usize) -> bool {
        let ij = self.multi_index(k);
        ij[..self.dim].iter().any(|&i| i == 0 || i == self.m - 1)
    }

    pub fn contains(&self, x: &Point) -> bool {
        (0..self.dim).all(|a| x[a].abs() <= self.half_width[a] * (1.0 + 1e-12))
    }

    /// Cell index along `axis` and the local coordinate in the cell, clamped so
    /// that points outside the grid extrapolate from the boundary cell.
    pub fn locate(&self, axis: usize, x: f64) -> (usize, f64) {
        let h = self.spacing(axis);
        let s = (x + self.half_width[axis]) / h;
        let i = (s.floor().max(0.0) as usize).min(self.m - 2);
        (i, s - i as f64)
    }

    /// Same grid with a different node count; `m` is forced odd.
    pub fn refined(&self, m: usize) -> Result<Self> {
        let m = if m % 2 == 0 { m + 1 } else { m };
        Self::with_half_widths(self.dim, self.half_width, m)
    }

    pub fn scaled(&self, factor: f64) -> Result<Self> {
        Self::with_half_widths(
            self.dim,
            [self.half_width[0] * factor, self.half_width[1] * factor],
            self.m,
        )
    }
}
