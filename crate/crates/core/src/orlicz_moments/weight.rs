use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use statrs::function::erf::erfc;
use statrs::function::gamma::gamma;

use crate::convex_core::Point;
use crate::error::{Error, Result};

pub type WeightClosure = Arc<dyn Fn(&Point) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum WeightKind {
    Constant,
    /// `|x|^{q-n}`.
    Power {
        q: f64,
    },
    /// `e^{-|x|^2/2}`.
    GaussianDensity,
    /// `e^{|x|^alpha}`.
    StretchedExp {
        alpha: f64,
    },
    Custom {
        name: String,
        eval: WeightClosure,
        even: bool,
    },
}

impl fmt::Debug for WeightKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Constant => write!(f, "Constant"),
            Self::Power { q } => write!(f, "Power {{ q: {q} }}"),
            Self::GaussianDensity => write!(f, "GaussianDensity"),
            Self::StretchedExp { alpha } => write!(f, "StretchedExp {{ alpha: {alpha} }}"),
            Self::Custom { name, even, .. } => write!(f, "Custom {{ name: {name:?}, even: {even} }}"),
        }
    }
}

/// A candidate weight `omega` on `R^n \ {o}` with `n = dim`.
#[derive(Clone, Debug)]
pub struct WeightFunction {
    kind: WeightKind,
    dim: usize,
}

/// Growth of `F_omega(t)` as `t -> 0+`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FGrowth {
    Bounded,
    Polynomial,
    Superpolynomial,
    Unknown,
}

/// Surface area of the unit sphere, `n V_n(B)`.
pub fn sphere_area(dim: usize) -> f64 {
    if dim == 1 {
        2.0
    } else {
        2.0 * PI
    }
}

impl WeightFunction {
    pub fn new(kind: WeightKind, dim: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidInput(format!("dimension {dim} not supported")));
        }
        let finite = |v: f64| v.is_finite();
        match &kind {
            WeightKind::Power { q } if !finite(*q) => {
                return Err(Error::InvalidInput("power exponent must be finite".into()))
            }
            WeightKind::StretchedExp { alpha } if !finite(*alpha) => {
                return Err(Error::InvalidInput("alpha must be finite".into()))
            }
            _ => {}
        }
        Ok(Self { kind, dim })
    }

    pub fn constant(dim: usize) -> Self {
        Self {
            kind: WeightKind::Constant,
            dim,
        }
    }

    pub fn power(dim: usize, q: f64) -> Result<Self> {
        Self::new(WeightKind::Power { q }, dim)
    }

    pub fn gaussian_density(dim: usize) -> Self {
        Self {
            kind: WeightKind::GaussianDensity,
            dim,
        }
    }

    pub fn stretched_exp(dim: usize, alpha: f64) -> Result<Self> {
        Self::new(WeightKind::StretchedExp { alpha }, dim)
    }

    pub fn custom(
        dim: usize,
        name: &str,
        even: bool,
        eval: impl Fn(&Point) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        Self::new(
            WeightKind::Custom {
                name: name.to_string(),
                eval: Arc::new(eval),
                even,
            },
            dim,
        )
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Same weight in another dimension (the power exponent `q` is kept).
    pub fn with_dim(&self, dim: usize) -> Result<Self> {
        Self::new(self.kind.clone(), dim)
    }

    /// Short label such as `power:q=2`.
    pub fn label(&self) -> String {
        match &self.kind {
            WeightKind::Constant => "constant".into(),
            WeightKind::Power { q } => format!("power:q={q}"),
            WeightKind::GaussianDensity => "gaussian_density".into(),
            WeightKind::StretchedExp { alpha } => format!("stretched_exp:alpha={alpha}"),
            WeightKind::Custom { name, .. } => format!("custom:{name}"),
        }
    }

    pub fn eval(&self, x: &Point) -> f64 {
        let r = x[0].hypot(x[1]);
        match &self.kind {
            WeightKind::Constant => 1.0,
            WeightKind::Power { q } => r.powf(q - self.dim as f64),
            WeightKind::GaussianDensity => (-0.5 * r * r).exp(),
            WeightKind::StretchedExp { alpha } => r.powf(*alpha).exp(),
            WeightKind::Custom { eval, .. } => eval(x),
        }
    }

    pub fn is_even(&self) -> bool {
        match &self.kind {
            WeightKind::Custom { even, .. } => *even,
            _ => true,
        }
    }

    /// Checks the declared evenness on a few sample points.
    pub fn evenness_consistent(&self) -> bool {
        if !self.is_even() {
            return true;
        }
        let samples: [Point; 6] = [
            [0.3, 0.0],
            [1.7, 0.0],
            [0.4, 0.9],
            [-2.5, 1.1],
            [0.05, -0.2],
            [6.0, 3.0],
        ];
        samples.iter().all(|p| {
            let p = if self.dim == 1 { [p[0], 0.0] } else { *p };
            let a = self.eval(&p);
            let b = self.eval(&[-p[0], -p[1]]);
            (a - b).abs() <= 1e-12 * a.abs().max(b.abs()).max(1e-300)
        })
    }

    /// Whether `omega` blows up at the origin.
    pub fn is_singular_at_origin(&self) -> bool {
        match &self.kind {
            WeightKind::Power { q } => *q < self.dim as f64,
            WeightKind::Custom { .. } => true,
            _ => false,
        }
    }

    /// Log-concave weights make the solver objective concave.
    pub fn is_log_concave(&self) -> bool {
        match &self.kind {
            WeightKind::Constant | WeightKind::GaussianDensity => true,
            WeightKind::Power { q } => (*q - self.dim as f64).abs() < 1e-15,
            _ => false,
        }
    }

    /// Closed-form radial antiderivative `int_0^t omega(r u) r^{n-1} dr`.
    pub fn omega_bar_closed(&self, t: f64) -> Option<f64> {
        let n = self.dim as f64;
        match &self.kind {
            WeightKind::Constant => Some(t.powf(n) / n),
            WeightKind::Power { q } if *q > 0.0 => Some(t.powf(*q) / q),
            WeightKind::GaussianDensity => Some(if self.dim == 1 {
                (PI / 2.0).sqrt() * statrs::function::erf::erf(t / 2f64.sqrt())
            } else {
                1.0 - (-0.5 * t * t).exp()
            }),
            _ => None,
        }
    }

    /// `omega_bar(t, u)`; weights without a closed form are integrated in the
    /// logarithmic radius, which absorbs integrable singularities at the origin.
    pub fn omega_bar(&self, t: f64, u: &Point) -> Result<f64> {
        if t < 0.0 || !t.is_finite() {
            return Err(Error::InvalidInput(format!("radius {t} must be nonnegative")));
        }
        if t == 0.0 {
            return Ok(0.0);
        }
        if let Some(v) = self.omega_bar_closed(t) {
            return Ok(v);
        }
        let n = self.dim as i32;
        crate::numeric::integrate_from_zero(|r| self.eval(&[r * u[0], r * u[1]]) * r.powi(n - 1), t)
            .ok_or_else(|| Error::QuadratureFailure(format!("omega_bar({t}) does not converge at the origin")))
    }

    /// Closed form of `F_omega(t) = int e^{-t|x|} omega(x) dx` where available.
    pub fn f_omega_closed(&self, t: f64) -> Option<f64> {
        let n = self.dim as f64;
        let area = sphere_area(self.dim);
        match &self.kind {
            WeightKind::Constant => Some(t.powf(-n) * area * gamma(n)),
            WeightKind::Power { q } if *q > 0.0 => Some(t.powf(-q) * area * gamma(*q)),
            WeightKind::GaussianDensity => {
                // int_0^inf r^{n-1} e^{-t r - r^2/2} dr
                let m0 = (PI / 2.0).sqrt() * (0.5 * t * t).exp() * erfc(t / 2f64.sqrt());
                let radial = if self.dim == 1 { m0 } else { 1.0 - t * m0 };
                Some(area * radial)
            }
            _ => None,
        }
    }

    pub fn f_growth(&self) -> FGrowth {
        match &self.kind {
            WeightKind::GaussianDensity => FGrowth::Bounded,
            WeightKind::Constant => FGrowth::Polynomial,
            WeightKind::Power { q } if *q > 0.0 => FGrowth::Polynomial,
            WeightKind::StretchedExp { alpha } if *alpha > 0.0 && *alpha < 1.0 => FGrowth::Superpolynomial,
            _ => FGrowth::Unknown,
        }
    }
}
