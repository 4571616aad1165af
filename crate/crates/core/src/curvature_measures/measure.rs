use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::convex_core::grid::Grid;
use crate::convex_core::Point;
use crate::error::{Error, Result};

/// Number of projection angles of the sliced distance in the plane.
pub const SLICED_ANGLES: usize = 32;
/// Atoms lighter than this fraction of the total are dropped when binning.
pub const ATOM_DROP_FRACTION: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "dim", rename_all = "snake_case")]
pub enum Ambient {
    Euclidean(usize),
    Sphere(usize),
}

impl Ambient {
    pub fn dim(&self) -> usize {
        match self {
            Self::Euclidean(d) | Self::Sphere(d) => *d,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub location: Point,
    pub mass: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub ambient: Ambient,
    pub atoms: Vec<Atom>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MeasureComparison {
    /// Distance between the mass-normalized measures.
    pub w1_distance: f64,
    pub mass_gap: f64,
}

fn key(x: f64) -> u64 {
    // -0.0 and 0.0 are the same location
    (x + 0.0).to_bits()
}

impl DiscreteMeasure {
    pub fn new(ambient: Ambient, atoms: Vec<Atom>) -> Result<Self> {
        let dim = ambient.dim();
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidInput(format!("dimension {dim} not supported")));
        }
        for a in &atoms {
            if !(a.mass >= 0.0 && a.mass.is_finite()) {
                return Err(Error::InvalidInput(format!("atom mass {} must be nonnegative", a.mass)));
            }
            if !a.location.iter().all(|v| v.is_finite()) || (dim == 1 && a.location[1] != 0.0) {
                return Err(Error::InvalidInput(format!("bad atom location {:?}", a.location)));
            }
            if let Ambient::Sphere(_) = ambient {
                let r = a.location[0].hypot(a.location[1]);
                if (r - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidInput(format!(
                        "sphere atom {:?} is not a unit vector",
                        a.location
                    )));
                }
            }
        }
        Ok(Self { ambient, atoms })
    }

    pub fn empty(ambient: Ambient) -> Self {
        Self {
            ambient,
            atoms: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.ambient.dim()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    /// Mass carried by atoms within `tol` of `x`.
    pub fn mass_near(&self, x: &Point, tol: f64) -> f64 {
        self.atoms
            .iter()
            .filter(|a| (a.location[0] - x[0]).hypot(a.location[1] - x[1]) <= tol)
            .map(|a| a.mass)
            .sum()
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            ambient: self.ambient,
            atoms: self
                .atoms
                .iter()
                .map(|a| Atom {
                    location: a.location,
                    mass: c * a.mass,
                })
                .collect(),
        }
    }

    /// Merges atoms at identical locations; output sorted by location.
    pub fn merged(&self) -> Self {
        let mut acc: BTreeMap<(u64, u64), (Point, f64)> = BTreeMap::new();
        for a in &self.atoms {
            let e = acc
                .entry((key(a.location[0]), key(a.location[1])))
                .or_insert((a.location, 0.0));
            e.1 += a.mass;
        }
        let mut atoms: Vec<Atom> = acc
            .into_values()
            .map(|(location, mass)| Atom { location, mass })
            .collect();
        atoms.sort_by(|a, b| {
            a.location[0]
                .total_cmp(&b.location[0])
                .then(a.location[1].total_cmp(&b.location[1]))
        });
        Self {
            ambient: self.ambient,
            atoms,
        }
    }

    /// Merges atoms per cell of `grid` (nearest node) at their mass-weighted
    /// centroid and drops negligible atoms.
    pub fn binned(&self, grid: &Grid) -> Result<Self> {
        if grid.dim() != self.dim() {
            return Err(Error::GridMismatch {
                left: grid.dim(),
                right: self.dim(),
            });
        }
        let total = self.total_mass();
        let mut acc: BTreeMap<usize, (Point, f64)> = BTreeMap::new();
        for a in &self.atoms {
            let mut ij = [0usize; 2];
            for axis in 0..grid.dim() {
                let s = (a.location[axis] + grid.half_width(axis)) / grid.spacing(axis);
                ij[axis] = s.round().clamp(0.0, (grid.m() - 1) as f64) as usize;
            }
            let e = acc.entry(grid.index(ij)).or_insert(([0.0, 0.0], 0.0));
            e.0[0] += a.mass * a.location[0];
            e.0[1] += a.mass * a.location[1];
            e.1 += a.mass;
        }
        let atoms = acc
            .into_values()
            .filter(|(_, m)| *m > ATOM_DROP_FRACTION * total && *m > 0.0)
            .map(|(s, m)| Atom {
                location: [s[0] / m, s[1] / m],
                mass: m,
            })
            .collect();
        Ok(Self {
            ambient: self.ambient,
            atoms,
        })
    }

    /// Largest mass difference between an atom and the negated measure near
    /// `-location`, relative to the total.
    pub fn evenness_defect(&self, tol: f64) -> f64 {
        let total = self.total_mass().max(f64::MIN_POSITIVE);
        self.atoms
            .iter()
            .map(|a| {
                let neg = [-a.location[0], -a.location[1]];
                (self.mass_near(&a.location, tol) - self.mass_near(&neg, tol)).abs() / total
            })
            .fold(0.0, f64::max)
    }

    /// `int g dmu`.
    pub fn integrate(&self, g: impl Fn(&Point) -> f64) -> f64 {
        self.atoms.iter().map(|a| a.mass * g(&a.location)).sum()
    }
}

/// Exact transport distance between two discrete probability measures on the line.
pub fn w1_line(a: &[(f64, f64)], b: &[(f64, f64)]) -> f64 {
    let ma: f64 = a.iter().map(|p| p.1).sum();
    let mb: f64 = b.iter().map(|p| p.1).sum();
    let mut events: Vec<(f64, f64)> = a
        .iter()
        .map(|&(x, m)| (x, m / ma))
        .chain(b.iter().map(|&(x, m)| (x, -m / mb)))
        .collect();
    events.sort_by(|p, q| p.0.total_cmp(&q.0));
    let mut cdf = 0.0;
    let mut total = 0.0;
    for w in events.windows(2) {
        cdf += w[0].1;
        total += cdf.abs() * (w[1].0 - w[0].0);
    }
    total
}

/// Transport distance between the normalized measures (exact in 1D, sliced
/// over equispaced angles in 2D) and the gap between total masses.
pub fn compare(a: &DiscreteMeasure, b: &DiscreteMeasure) -> Result<MeasureComparison> {
    if a.dim() != b.dim() {
        return Err(Error::GridMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let mass_gap = (a.total_mass() - b.total_mass()).abs();
    if a.total_mass() <= 0.0 || b.total_mass() <= 0.0 {
        return Err(Error::InvalidInput("cannot compare a measure without mass".into()));
    }
    let project = |m: &DiscreteMeasure, u: &Point| -> Vec<(f64, f64)> {
        m.atoms
            .iter()
            .map(|x| (x.location[0] * u[0] + x.location[1] * u[1], x.mass))
            .collect()
    };
    let w1_distance = if a.dim() == 1 {
        w1_line(&project(a, &[1.0, 0.0]), &project(b, &[1.0, 0.0]))
    } else {
        let mut s = 0.0;
        for j in 0..SLICED_ANGLES {
            let th = j as f64 * std::f64::consts::PI / SLICED_ANGLES as f64;
            let u = [th.cos(), th.sin()];
            s += w1_line(&project(a, &u), &project(b, &u));
        }
        s / SLICED_ANGLES as f64
    };
    Ok(MeasureComparison { w1_distance, mass_gap })
}
