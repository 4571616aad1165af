use serde::Serialize;

use super::body::ConvexBody;
use super::Point;
use crate::error::{Error, Result};

/// Vertex count used for polygonal level sets of rotation-invariant prototypes.
pub const ROUND_LEVEL_VERTICES: usize = 512;

/// Closed-form potentials `phi` with `f = e^{-phi}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ClosedFormPrototype {
    /// `phi(x) = t |x|`.
    ExponentialCone { dim: usize, t: f64 },
    /// `phi(x) = |x|^2 / 2`.
    Gaussian { dim: usize },
    /// `phi = 0` on the body, `+inf` outside.
    Indicator { body: ConvexBody },
    /// `phi = -ln c` on the body, `+inf` outside.
    ScaledIndicator { c: f64, body: ConvexBody },
    /// `phi(x) = max_k (<s_k, x> - c_k)`.
    MaxAffine {
        dim: usize,
        slopes: Vec<Point>,
        offsets: Vec<f64>,
    },
}

fn dot(a: &Point, b: &Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

impl ClosedFormPrototype {
    pub fn exponential_cone(dim: usize, t: f64) -> Result<Self> {
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::InvalidInput(format!("cone slope {t} must be positive")));
        }
        Ok(Self::ExponentialCone { dim, t })
    }

    pub fn max_affine(dim: usize, slopes: Vec<Point>, offsets: Vec<f64>) -> Result<Self> {
        if slopes.is_empty() || slopes.len() != offsets.len() {
            return Err(Error::InvalidInput(
                "max-affine needs matching slopes and offsets".into(),
            ));
        }
        Ok(Self::MaxAffine { dim, slopes, offsets })
    }

    pub fn scaled_indicator(c: f64, body: ConvexBody) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::InvalidInput(format!("scale {c} must be positive")));
        }
        Ok(Self::ScaledIndicator { c, body })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::ExponentialCone { dim, .. } | Self::Gaussian { dim } | Self::MaxAffine { dim, .. } => *dim,
            Self::Indicator { body } | Self::ScaledIndicator { body, .. } => body.dim(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::ExponentialCone { .. } => "exponential_cone",
            Self::Gaussian { .. } => "gaussian",
            Self::Indicator { .. } => "indicator",
            Self::ScaledIndicator { .. } => "scaled_indicator",
            Self::MaxAffine { .. } => "max_affine",
        }
    }

    pub fn phi(&self, x: &Point) -> Option<f64> {
        match self {
            Self::ExponentialCone { t, .. } => Some(t * x[0].hypot(x[1])),
            Self::Gaussian { .. } => Some(0.5 * dot(x, x)),
            Self::Indicator { body } => body.contains(x, 1e-12).then_some(0.0),
            Self::ScaledIndicator { c, body } => body.contains(x, 1e-12).then_some(-c.ln()),
            Self::MaxAffine { slopes, offsets, .. } => Some(
                slopes
                    .iter()
                    .zip(offsets)
                    .map(|(s, c)| dot(s, x) - c)
                    .fold(f64::NEG_INFINITY, f64::max),
            ),
        }
    }

    /// Gradient(s) of `phi` at `x`. Where several affine pieces are active (a
    /// kink), the mass is split equally among their gradients.
    pub fn gradients(&self, x: &Point) -> Vec<(Point, f64)> {
        match self {
            Self::ExponentialCone { dim, t } => {
                let r = x[0].hypot(x[1]);
                if r > 0.0 {
                    vec![([t * x[0] / r, t * x[1] / r], 1.0)]
                } else if *dim == 1 {
                    vec![([-t, 0.0], 0.5), ([*t, 0.0], 0.5)]
                } else {
                    vec![([0.0, 0.0], 1.0)]
                }
            }
            Self::Gaussian { .. } => vec![(*x, 1.0)],
            Self::Indicator { .. } | Self::ScaledIndicator { .. } => vec![([0.0, 0.0], 1.0)],
            Self::MaxAffine { slopes, offsets, .. } => {
                let vals: Vec<f64> = slopes.iter().zip(offsets).map(|(s, c)| dot(s, x) - c).collect();
                let top = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let tol = 1e-12 * (1.0 + top.abs());
                let active: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] >= top - tol).collect();
                let w = 1.0 / active.len() as f64;
                let mut out: Vec<(Point, f64)> = Vec::with_capacity(active.len());
                for k in active {
                    match out.iter_mut().find(|(g, _)| *g == slopes[k]) {
                        Some(e) => e.1 += w,
                        None => out.push((slopes[k], w)),
                    }
                }
                out
            }
        }
    }

    /// Exact Legendre transform; `None` where it is `+inf`.
    pub fn conjugate(&self, y: &Point) -> Option<f64> {
        match self {
            Self::ExponentialCone { t, .. } => (y[0].hypot(y[1]) <= t * (1.0 + 1e-12)).then_some(0.0),
            Self::Gaussian { .. } => Some(0.5 * dot(y, y)),
            Self::Indicator { body } => Some(body.support(y)),
            Self::ScaledIndicator { c, body } => Some(body.support(y) + c.ln()),
            Self::MaxAffine { dim, slopes, offsets } => lower_envelope(*dim, slopes, offsets, y),
        }
    }

    /// Support body when it is compact.
    pub fn compact_support(&self) -> Option<ConvexBody> {
        match self {
            Self::Indicator { body } | Self::ScaledIndicator { body, .. } => Some(body.clone()),
            _ => None,
        }
    }

    /// `sup f`, or `None` when `phi` is unbounded below.
    pub fn max_value(&self) -> Option<f64> {
        match self {
            Self::ScaledIndicator { c, .. } => Some(*c),
            Self::MaxAffine { .. } => self.conjugate(&[0.0, 0.0]).map(f64::exp),
            _ => Some(1.0),
        }
    }

    /// `{x : f(x) >= s}`; rotation-invariant prototypes in 2D use a regular
    /// polygon with [`ROUND_LEVEL_VERTICES`] vertices inscribed in the level circle.
    pub fn level_set(&self, s: f64) -> Result<ConvexBody> {
        let max = self.max_value().unwrap_or(f64::INFINITY);
        if !(s > 0.0) || s > max * (1.0 + 1e-12) {
            return Err(Error::EmptyLevel { s, max });
        }
        let r = -s.ln();
        let dim = self.dim();
        match self {
            Self::ExponentialCone { t, .. } => ConvexBody::ball(dim, (r / t).max(0.0), ROUND_LEVEL_VERTICES),
            Self::Gaussian { .. } => ConvexBody::ball(dim, (2.0 * r).max(0.0).sqrt(), ROUND_LEVEL_VERTICES),
            Self::Indicator { body } | Self::ScaledIndicator { body, .. } => Ok(body.clone()),
            Self::MaxAffine { slopes, offsets, .. } => {
                let big = 1e6 * (1.0 + r.abs() + offsets.iter().fold(0.0f64, |a, c| a.max(c.abs())));
                let mut body = ConvexBody::cube(dim, big)?;
                for (sl, c) in slopes.iter().zip(offsets) {
                    body = body.clip(sl, c + r).ok_or(Error::EmptyLevel { s, max })?;
                }
                if body.vertices().iter().any(|p| p[0].abs().max(p[1].abs()) > 0.5 * big) {
                    return Err(Error::UnboundedSupport);
                }
                Ok(body)
            }
        }
    }
}

/// Lower convex envelope of the points `(s_k, c_k)` evaluated at `y`: the
/// conjugate of `max_k (<s_k, x> - c_k)`. `None` outside the hull of the slopes.
pub fn lower_envelope(dim: usize, slopes: &[Point], offsets: &[f64], y: &Point) -> Option<f64> {
    let n = slopes.len();
    let scale = slopes.iter().fold(1.0f64, |a, s| a.max(s[0].abs()).max(s[1].abs()));
    let tol = 1e-12 * scale;
    let mut best = f64::INFINITY;
    for k in 0..n {
        if (slopes[k][0] - y[0]).abs() <= tol && (dim == 1 || (slopes[k][1] - y[1]).abs() <= tol) {
            best = best.min(offsets[k]);
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let (sa, sb) = (slopes[a], slopes[b]);
            let e = [sb[0] - sa[0], sb[1] - sa[1]];
            let l2 = e[0] * e[0] + e[1] * e[1];
            if l2 == 0.0 {
                continue;
            }
            let d = [y[0] - sa[0], y[1] - sa[1]];
            let lam = (d[0] * e[0] + d[1] * e[1]) / l2;
            let off = (d[0] * e[1] - d[1] * e[0]).abs() / l2.sqrt();
            if off <= tol && (-1e-12..=1.0 + 1e-12).contains(&lam) {
                let lam = lam.clamp(0.0, 1.0);
                best = best.min((1.0 - lam) * offsets[a] + lam * offsets[b]);
            }
            if dim == 2 {
                for c in b + 1..n {
                    let sc = slopes[c];
                    let det = (sb[0] - sa[0]) * (sc[1] - sa[1]) - (sc[0] - sa[0]) * (sb[1] - sa[1]);
                    if det.abs() <= tol * tol {
                        continue;
                    }
                    let l1 = ((y[0] - sa[0]) * (sc[1] - sa[1]) - (sc[0] - sa[0]) * (y[1] - sa[1])) / det;
                    let l2 = ((sb[0] - sa[0]) * (y[1] - sa[1]) - (y[0] - sa[0]) * (sb[1] - sa[1])) / det;
                    let l0 = 1.0 - l1 - l2;
                    if l0 >= -1e-12 && l1 >= -1e-12 && l2 >= -1e-12 {
                        best = best.min(l0 * offsets[a] + l1 * offsets[b] + l2 * offsets[c]);
                    }
                }
            }
        }
    }
    best.is_finite().then_some(best)
}
