use std::f64::consts::PI;

use serde::Serialize;

use crate::convex_core::Point;
use crate::curvature_measures::measure::{Ambient, DiscreteMeasure};
use crate::error::{Error, Result};
use crate::orlicz_moments::moments::f_omega;
use crate::orlicz_moments::weight::{FGrowth, WeightFunction};

/// Atoms lighter than this fraction of the total are rejected.
pub const MIN_ATOM_FRACTION: f64 = 1e-10;
/// Relative tolerance of the evenness check.
pub const EVEN_TOL: f64 = 1e-12;
/// Angles of the sweep for `zeta_mu` in the plane.
pub const ZETA_SWEEP: usize = 1024;

/// An even discrete target measure with its pairing `k <-> pair[k]`,
/// `x_{pair[k]} = -x_k`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetMeasure {
    measure: DiscreteMeasure,
    pair: Vec<usize>,
}

fn close(a: &Point, b: &Point, scale: f64) -> bool {
    (a[0] - b[0]).abs() <= EVEN_TOL * scale && (a[1] - b[1]).abs() <= EVEN_TOL * scale
}

impl TargetMeasure {
    pub fn new(measure: DiscreteMeasure) -> Result<Self> {
        if let Ambient::Sphere(_) = measure.ambient {
            return Err(Error::InvalidInput("target must live in Euclidean space".into()));
        }
        let measure = measure.merged();
        let total = measure.total_mass();
        if !(total > 0.0) {
            return Err(Error::InvalidInput("target measure has no mass".into()));
        }
        if let Some(a) = measure.atoms.iter().find(|a| a.mass < MIN_ATOM_FRACTION * total) {
            return Err(Error::InvalidInput(format!(
                "atom at {:?} has mass {:.3e}, below {MIN_ATOM_FRACTION:e} of the total",
                a.location, a.mass
            )));
        }
        let scale = measure
            .atoms
            .iter()
            .map(|a| a.location[0].abs().max(a.location[1].abs()))
            .fold(1.0, f64::max);
        let mut pair = Vec::with_capacity(measure.len());
        for a in &measure.atoms {
            let neg = [-a.location[0], -a.location[1]];
            let j = measure
                .atoms
                .iter()
                .position(|b| close(&b.location, &neg, scale))
                .ok_or_else(|| Error::NotEven(format!("no atom at {neg:?}")))?;
            if (measure.atoms[j].mass - a.mass).abs() > EVEN_TOL * total {
                return Err(Error::NotEven(format!("masses differ at {:?}", a.location)));
            }
            pair.push(j);
        }
        let t = Self { measure, pair };
        t.zeta()?;
        Ok(t)
    }

    pub fn measure(&self) -> &DiscreteMeasure {
        &self.measure
    }

    pub fn dim(&self) -> usize {
        self.measure.dim()
    }

    pub fn len(&self) -> usize {
        self.measure.len()
    }

    pub fn is_empty(&self) -> bool {
        self.measure.is_empty()
    }

    pub fn points(&self) -> Vec<Point> {
        self.measure.atoms.iter().map(|a| a.location).collect()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.measure.atoms.iter().map(|a| a.mass).collect()
    }

    pub fn pair(&self) -> &[usize] {
        &self.pair
    }

    pub fn total_mass(&self) -> f64 {
        self.measure.total_mass()
    }

    pub fn first_moment(&self) -> f64 {
        self.measure.integrate(|x| x[0].hypot(x[1]))
    }

    fn directional(&self, u: &Point) -> f64 {
        self.measure.integrate(|x| (x[0] * u[0] + x[1] * u[1]).abs())
    }

    /// `zeta_mu = min over unit v of int |<x, v>| dmu`.
    pub fn zeta(&self) -> Result<f64> {
        let z = if self.dim() == 1 {
            self.directional(&[1.0, 0.0])
        } else {
            let f = |th: f64| self.directional(&[th.cos(), th.sin()]);
            let step = PI / ZETA_SWEEP as f64;
            let (mut best_th, mut best) = (0.0, f(0.0));
            for j in 1..ZETA_SWEEP {
                let th = j as f64 * step;
                let v = f(th);
                if v < best {
                    best = v;
                    best_th = th;
                }
            }
            let (mut a, mut b) = (best_th - step, best_th + step);
            let g = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..80 {
                let c = b - g * (b - a);
                let d = a + g * (b - a);
                if f(c) < f(d) {
                    b = d;
                } else {
                    a = c;
                }
            }
            best = best.min(f(0.5 * (a + b)));
            // the objective is concave between the directions orthogonal to atoms
            for x in self.points() {
                if x != [0.0, 0.0] {
                    best = best.min(f(x[1].atan2(x[0]) + 0.5 * PI));
                }
            }
            best
        };
        if z <= 1e-12 * self.first_moment().max(f64::MIN_POSITIVE) {
            return Err(Error::RankDeficient);
        }
        Ok(z)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SolvabilityVerdict {
    Satisfied,
    SatisfiedByClassification,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolvabilityReport {
    pub verdict: SolvabilityVerdict,
    pub growth: FGrowth,
    /// `(t, F_omega(t) e^{-zeta / (2 |mu| t)})` on `t = 2^{-k}`.
    pub samples: Vec<(f64, f64)>,
}

/// Largest `k` of the probe ladder `t = 2^{-k}`.
pub const SOLVABILITY_PROBES: i32 = 10;

/// Checks `liminf_{t -> 0+} F_omega(t) e^{-zeta_mu / (2 |mu| t)} = 0`.
pub fn check_solvability_condition(omega: &WeightFunction, mu: &TargetMeasure) -> Result<SolvabilityReport> {
    let zeta = mu.zeta()?;
    let total = mu.total_mass();
    let growth = omega.f_growth();
    let mut samples = Vec::new();
    for k in 0..=SOLVABILITY_PROBES {
        let t = 2f64.powi(-k);
        match f_omega(omega, t) {
            Ok(v) if v.is_finite() => samples.push((t, v * (-zeta / (2.0 * total * t)).exp())),
            _ => break,
        }
    }
    let verdict = if matches!(growth, FGrowth::Bounded | FGrowth::Polynomial) {
        SolvabilityVerdict::SatisfiedByClassification
    } else {
        let decreasing = samples.len() >= 4 && samples[samples.len() - 4..].windows(2).all(|w| w[1].1 < w[0].1);
        let small = samples
            .last()
            .is_some_and(|s| s.1 <= 1e-3 * samples.iter().map(|s| s.1).fold(0.0, f64::max));
        if decreasing && small {
            SolvabilityVerdict::Satisfied
        } else {
            SolvabilityVerdict::Inconclusive
        }
    };
    Ok(SolvabilityReport {
        verdict,
        growth,
        samples,
    })
}
