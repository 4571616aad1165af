use serde::Serialize;

use super::weight::{WeightFunction, WeightKind};
use crate::convex_core::body::uniform_directions;
use crate::convex_core::Point;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightClassification {
    pub weight: String,
    pub dim: usize,
    pub a1: Verdict,
    pub a2: Verdict,
    pub a3: Verdict,
    /// `analytic` for builtin kinds, `numeric` for probed closures.
    pub method: &'static str,
    pub notes: Vec<String>,
}

impl WeightClassification {
    pub fn any_fail(&self) -> bool {
        [self.a1, self.a2, self.a3].contains(&Verdict::Fail)
    }

    pub fn all_pass(&self) -> bool {
        [self.a1, self.a2, self.a3].iter().all(|v| *v == Verdict::Pass)
    }

    /// Names of the failing conditions, e.g. `["A3"]`.
    pub fn failures(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        for (name, v) in [("A1", self.a1), ("A2", self.a2), ("A3", self.a3)] {
            if v == Verdict::Fail {
                out.push(name);
            }
        }
        out
    }
}

/// A3 probe threshold on `ln omega(x) / |x|` at the largest probe radius.
pub const A3_THRESHOLD: f64 = 1e-2;

/// Verdicts on (A1) local integrability, (A2) `|x|^n omega(x)` bounded near the
/// origin, and (A3) `limsup ln omega(x) / |x| <= 0` at infinity.
pub fn classify_weight(w: &WeightFunction) -> Result<WeightClassification> {
    let analytic = |a1, a2, a3, notes: Vec<String>| {
        Ok(WeightClassification {
            weight: w.label(),
            dim: w.dim(),
            a1,
            a2,
            a3,
            method: "analytic",
            notes,
        })
    };
    use Verdict::*;
    match w.kind() {
        WeightKind::Constant | WeightKind::GaussianDensity => analytic(Pass, Pass, Pass, vec![]),
        WeightKind::Power { q } => {
            let q = *q;
            let a1 = if q > 0.0 { Pass } else { Fail };
            let a2 = if q >= 0.0 { Pass } else { Fail };
            let mut notes = vec![];
            if q <= 0.0 {
                notes.push(format!("|x|^{{q-n}} with q = {q} is not integrable at the origin"));
            }
            analytic(a1, a2, Pass, notes)
        }
        WeightKind::StretchedExp { alpha } => {
            let a = *alpha;
            if a <= 0.0 {
                analytic(Fail, Fail, Pass, vec![format!("alpha = {a} blows up at the origin")])
            } else if a < 1.0 {
                analytic(Pass, Pass, Pass, vec![])
            } else {
                analytic(
                    Pass,
                    Pass,
                    Fail,
                    vec![format!("ln omega / |x| = |x|^{} does not tend to 0", a - 1.0)],
                )
            }
        }
        WeightKind::Custom { .. } => probe(w),
    }
}

fn probe_dirs(w: &WeightFunction) -> Vec<Point> {
    uniform_directions(w.dim(), 8)
}

fn checked(w: &WeightFunction, x: &Point) -> Result<f64> {
    let v = w.eval(x);
    if !(v > 0.0) {
        return Err(Error::NonPositiveWeight {
            x: x[..w.dim()].to_vec(),
            value: v,
        });
    }
    Ok(v)
}

fn probe(w: &WeightFunction) -> Result<WeightClassification> {
    let dirs = probe_dirs(w);
    let n = w.dim() as i32;
    let mut notes = Vec::new();

    // A2: |x|^n omega(x) on |x| = 10^{-k}
    let mut a2_seq = Vec::new();
    for k in 1..=8 {
        let r = 10f64.powi(-k);
        let mut best: f64 = 0.0;
        for u in &dirs {
            best = best.max(r.powi(n) * checked(w, &[r * u[0], r * u[1]])?);
        }
        a2_seq.push(best);
    }
    let a2 = {
        let first = a2_seq[..4].iter().cloned().fold(0.0, f64::max);
        let last = a2_seq[4..].iter().cloned().fold(0.0, f64::max);
        let increasing = a2_seq[4..].windows(2).all(|p| p[1] > 1.5 * p[0]);
        if last <= 2.0 * first.max(f64::MIN_POSITIVE) {
            Verdict::Pass
        } else if increasing {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    };
    notes.push(format!("A2 probe |x|^n omega at 1e-1..1e-8: {:?}", a2_seq));

    // A1: int over eps < |x| < 1 as eps -> 0, through omega_bar differences
    let mut a1_seq = Vec::new();
    for k in 1..=8 {
        let eps = 10f64.powi(-k);
        let mut total = 0.0;
        for u in &dirs {
            let inner = radial_integral(w, u, eps, 1.0)?;
            total += inner;
        }
        a1_seq.push(total);
    }
    let a1 = {
        let inc: Vec<f64> = a1_seq.windows(2).map(|p| p[1] - p[0]).collect();
        let last = a1_seq[a1_seq.len() - 1];
        let tail = inc[inc.len() - 1];
        if tail <= 1e-3 * last.abs() {
            Verdict::Pass
        } else if inc[inc.len() - 3..].windows(2).all(|p| p[1] >= 0.9 * p[0]) {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    };
    notes.push(format!("A1 probe partial integrals: {:?}", a1_seq));

    // A3: ln omega / |x| on |x| = 2^k
    let mut a3_seq = Vec::new();
    for k in 1..=10 {
        let r = 2f64.powi(k);
        let mut best = f64::NEG_INFINITY;
        for u in &dirs {
            best = best.max(checked(w, &[r * u[0], r * u[1]])?.ln() / r);
        }
        a3_seq.push(best);
    }
    let a3 = {
        let last = a3_seq[a3_seq.len() - 1];
        if last <= A3_THRESHOLD {
            Verdict::Pass
        } else if a3_seq[7..].windows(2).all(|p| p[1] >= 0.9 * p[0]) {
            Verdict::Fail
        } else {
            Verdict::Inconclusive
        }
    };
    notes.push(format!("A3 probe ln omega/|x| at 2..1024: {:?}", a3_seq));

    Ok(WeightClassification {
        weight: w.label(),
        dim: w.dim(),
        a1,
        a2,
        a3,
        method: "numeric",
        notes,
    })
}

fn radial_integral(w: &WeightFunction, u: &Point, a: f64, b: f64) -> Result<f64> {
    // substitute r = e^s to resolve the scales between a and b
    let n = w.dim() as i32;
    let f = |s: f64| {
        let r = s.exp();
        w.eval(&[r * u[0], r * u[1]]) * r.powi(n)
    };
    let out = quadrature::integrate(f, a.ln(), b.ln(), 1e-10);
    if !out.integral.is_finite() {
        return Err(Error::QuadratureFailure("A1 probe integral".into()));
    }
    Ok(out.integral)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_verdicts() {
        let c = classify_weight(&WeightFunction::power(2, 2.0).unwrap()).unwrap();
        assert!(c.all_pass());
        let s = classify_weight(&WeightFunction::stretched_exp(2, 0.5).unwrap()).unwrap();
        assert!(s.all_pass());
        let e = classify_weight(&WeightFunction::stretched_exp(1, 1.0).unwrap()).unwrap();
        assert_eq!(e.a3, Verdict::Fail);
        assert_eq!(e.failures(), vec!["A3"]);
    }

    #[test]
    fn numeric_probes_agree_with_analytic_kinds() {
        let slow = WeightFunction::custom(2, "e^|x|^0.2", true, |x| x[0].hypot(x[1]).powf(0.2).exp()).unwrap();
        let c = classify_weight(&slow).unwrap();
        assert_eq!((c.a1, c.a2, c.a3), (Verdict::Pass, Verdict::Pass, Verdict::Pass));
        // 1024^{-1/2} is still above the probe threshold; the trend is decreasing
        let sqrt = WeightFunction::custom(2, "e^sqrt|x|", true, |x| x[0].hypot(x[1]).sqrt().exp()).unwrap();
        assert_eq!(classify_weight(&sqrt).unwrap().a3, Verdict::Inconclusive);
        let exp = WeightFunction::custom(1, "e^|x|", true, |x| x[0].abs().exp()).unwrap();
        assert_eq!(classify_weight(&exp).unwrap().a3, Verdict::Fail);
        let sing = WeightFunction::custom(1, "|x|^-2", true, |x| x[0].abs().powi(-2)).unwrap();
        let c = classify_weight(&sing).unwrap();
        assert_eq!(c.a1, Verdict::Fail);
        assert_eq!(c.a2, Verdict::Fail);
    }

    #[test]
    fn non_positive_probe_is_an_error() {
        let bad = WeightFunction::custom(1, "zero", true, |_| 0.0).unwrap();
        assert!(matches!(classify_weight(&bad), Err(Error::NonPositiveWeight { .. })));
    }
}
