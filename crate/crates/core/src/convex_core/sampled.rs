use serde::Serialize;

use super::body::ConvexBody;
use super::grid::Grid;
use super::Point;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    ClosedForm(String),
    GridData,
    ConjugateOf(Box<Provenance>),
    AsplundSum,
    ScalarMultiple,
}

/// Convex function sampled on a grid. Nodes outside the effective domain are
/// flagged in `mask` and never enter arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledConvexFunction {
    grid: Grid,
    values: Vec<f64>,
    mask: Vec<bool>,
    domain: Option<ConvexBody>,
    provenance: Provenance,
}

impl SampledConvexFunction {
    pub fn new(grid: Grid, values: Vec<f64>, mask: Vec<bool>, provenance: Provenance) -> Result<Self> {
        if values.len() != grid.len() || mask.len() != grid.len() {
            return Err(Error::InvalidInput(format!(
                "expected {} nodes, got {} values and {} mask entries",
                grid.len(),
                values.len(),
                mask.len()
            )));
        }
        let mut values = values;
        for (v, &m) in values.iter_mut().zip(&mask) {
            if m {
                *v = 0.0;
            } else if !v.is_finite() {
                return Err(Error::InvalidInput("finite node holds a non-finite value".into()));
            }
        }
        Ok(Self {
            grid,
            values,
            mask,
            domain: None,
            provenance,
        })
    }

    /// Samples `phi` at every node; `None` marks a node outside the domain.
    pub fn from_fn(grid: Grid, provenance: Provenance, phi: impl Fn(&Point) -> Option<f64>) -> Self {
        let mut values = vec![0.0; grid.len()];
        let mut mask = vec![true; grid.len()];
        for k in 0..grid.len() {
            if let Some(v) = phi(&grid.node(k)) {
                values[k] = v;
                mask[k] = false;
            }
        }
        Self {
            grid,
            values,
            mask,
            domain: None,
            provenance,
        }
    }

    /// Attaches the exact (continuous) effective domain.
    pub fn with_domain(mut self, domain: ConvexBody) -> Self {
        self.domain = Some(domain);
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn dim(&self) -> usize {
        self.grid.dim()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn value(&self, k: usize) -> Option<f64> {
        if self.mask[k] {
            None
        } else {
            Some(self.values[k])
        }
    }

    pub fn is_finite(&self, k: usize) -> bool {
        !self.mask[k]
    }

    pub fn finite_count(&self) -> usize {
        self.mask.iter().filter(|m| !**m).count()
    }

    pub fn finite_nodes(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.grid.len()).filter(move |&k| !self.mask[k])
    }

    /// The explicit domain if one was attached, else the hull of the finite nodes.
    pub fn domain(&self) -> Result<ConvexBody> {
        if let Some(d) = &self.domain {
            return Ok(d.clone());
        }
        let pts: Vec<Point> = self.finite_nodes().map(|k| self.grid.node(k)).collect();
        if pts.is_empty() {
            return Err(Error::AllInfinite);
        }
        ConvexBody::from_points(self.dim(), &pts)
    }

    pub fn explicit_domain(&self) -> Option<&ConvexBody> {
        self.domain.as_ref()
    }

    /// True when the domain stays away from the outer shell of the grid.
    pub fn has_bounded_support(&self) -> bool {
        match &self.domain {
            Some(d) => {
                let g = &self.grid;
                d.vertices()
                    .iter()
                    .all(|v| (0..g.dim()).all(|a| v[a].abs() < g.half_width(a) - 0.5 * g.spacing(a)))
            }
            None => self.finite_nodes().all(|k| !self.grid.is_outer(k)),
        }
    }

    /// Minimum value and its node, lowest index on ties.
    pub fn min_node(&self) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64)> = None;
        for k in self.finite_nodes() {
            let v = self.values[k];
            if best.map_or(true, |(_, b)| v < b) {
                best = Some((k, v));
            }
        }
        best
    }

    fn neighbor(&self, k: usize, axis: usize, dir: isize) -> Option<usize> {
        let mut ij = self.grid.multi_index(k);
        let i = ij[axis] as isize + dir;
        if i < 0 || i >= self.grid.m() as isize {
            return None;
        }
        ij[axis] = i as usize;
        let n = self.grid.index(ij);
        if self.mask[n] {
            None
        } else {
            Some(n)
        }
    }

    /// One-sided difference quotient toward `dir = +1` (forward) or `-1` (backward).
    pub fn one_sided(&self, k: usize, axis: usize, dir: isize) -> Option<f64> {
        let v = self.value(k)?;
        let n = self.neighbor(k, axis, dir)?;
        Some((self.values[n] - v) * dir as f64 / self.grid.spacing(axis))
    }

    /// Central-difference gradient at an interior node, falling back to one-sided
    /// differences (flagged as boundary grade) when a neighbour is masked.
    pub fn gradient(&self, k: usize) -> Option<(Point, bool)> {
        self.value(k)?;
        let mut g = [0.0; 2];
        let mut boundary = false;
        for axis in 0..self.dim() {
            let f = self.one_sided(k, axis, 1);
            let b = self.one_sided(k, axis, -1);
            g[axis] = match (b, f) {
                (Some(b), Some(f)) => 0.5 * (b + f),
                (Some(d), None) | (None, Some(d)) => {
                    boundary = true;
                    d
                }
                (None, None) => return None,
            };
        }
        Some((g, boundary))
    }

    /// Multilinear interpolation; outside the grid the boundary cell is
    /// extrapolated linearly. `None` if a corner carrying weight is masked, so
    /// points on a node only need that node.
    pub fn interpolate(&self, x: &Point) -> Option<f64> {
        let g = &self.grid;
        let snap = |s: f64| {
            if s.abs() < 1e-12 {
                0.0
            } else if (s - 1.0).abs() < 1e-12 {
                1.0
            } else {
                s
            }
        };
        let (i, s) = g.locate(0, x[0]);
        let s = snap(s);
        let (j, t) = if g.dim() == 1 { (0, 0.0) } else { g.locate(1, x[1]) };
        let t = snap(t);
        let mut acc = 0.0;
        for (di, wi) in [(0, 1.0 - s), (1, s)] {
            for (dj, wj) in [(0, 1.0 - t), (1, t)] {
                let w = wi * wj;
                if w == 0.0 || (g.dim() == 1 && dj == 1) {
                    continue;
                }
                acc += w * self.value(g.index([i + di, j + dj]))?;
            }
        }
        Some(acc)
    }

    /// Largest absolute slope between finite neighbours along `axis`.
    pub fn max_abs_slope(&self, axis: usize) -> f64 {
        let mut best: f64 = 0.0;
        for k in self.finite_nodes() {
            if let Some(d) = self.one_sided(k, axis, 1) {
                best = best.max(d.abs());
            }
        }
        best
    }

    /// Largest amount by which a value exceeds the chord of its neighbours along
    /// the axes and both diagonals (zero for grid-convex data).
    pub fn convexity_defect(&self) -> f64 {
        let g = &self.grid;
        let m = g.m() as isize;
        let steps: &[[isize; 2]] = if g.dim() == 1 {
            &[[1, 0]]
        } else {
            &[[1, 0], [0, 1], [1, 1], [1, -1]]
        };
        let mut defect: f64 = 0.0;
        for k in self.finite_nodes() {
            let ij = g.multi_index(k);
            for s in steps {
                let a = [ij[0] as isize - s[0], ij[1] as isize - s[1]];
                let b = [ij[0] as isize + s[0], ij[1] as isize + s[1]];
                let inside = |p: &[isize; 2]| (0..g.dim()).all(|ax| p[ax] >= 0 && p[ax] < m);
                if !inside(&a) || !inside(&b) {
                    continue;
                }
                let ka = g.index([a[0] as usize, a[1].max(0) as usize]);
                let kb = g.index([b[0] as usize, b[1].max(0) as usize]);
                if let (Some(va), Some(vb)) = (self.value(ka), self.value(kb)) {
                    defect = defect.max(self.values[k] - 0.5 * (va + vb));
                }
            }
        }
        defect
    }

    /// Grid-convexity within `1e-9` times the value scale.
    pub fn is_grid_convex(&self) -> bool {
        let scale = self.finite_nodes().map(|k| self.values[k].abs()).fold(1.0, f64::max);
        self.convexity_defect() <= 1e-9 * scale
    }

    pub fn shifted(&self, a: f64) -> Self {
        let mut out = self.clone();
        for k in 0..out.values.len() {
            if !out.mask[k] {
                out.values[k] += a;
            }
        }
        out
    }

    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        for k in 0..out.values.len() {
            if !out.mask[k] {
                out.values[k] *= c;
            }
        }
        out
    }

    pub(crate) fn set_provenance(&mut self, p: Provenance) {
        self.provenance = p;
    }
}
