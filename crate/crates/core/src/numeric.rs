//! Small quadrature helpers shared by the modules.

use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;

/// Gauss–Legendre nodes and weights mapped to `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let rule = GaussLegendre::new(NonZeroUsize::new(n.max(1)).expect("nonzero degree"));
    let (c, r) = (0.5 * (a + b), 0.5 * (b - a));
    rule.as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (c + r * x, r * w))
        .collect()
}

/// `int_0^t g(r) dr` for `g` with an integrable power singularity at `0`.
///
/// Substitutes `r = t e^{-z}` and integrates over dyadic `z` blocks until the
/// blocks stop contributing. Returns `None` if the tail does not decay.
pub fn integrate_from_zero(g: impl Fn(f64) -> f64, t: f64) -> Option<f64> {
    let nodes = gauss_legendre(24, 0.0, 1.0);
    let mut total = 0.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while lo < 700.0 {
        let mut block = 0.0;
        for &(s, w) in &nodes {
            let z = lo + s * (hi - lo);
            let r = t * (-z).exp();
            block += w * (hi - lo) * g(r) * r;
        }
        if !block.is_finite() {
            return None;
        }
        total += block;
        if lo >= 4.0 && block.abs() <= 1e-15 * total.abs() {
            return Some(total);
        }
        lo = hi;
        hi *= 2.0;
    }
    None
}

/// `int_a^inf g(r) dr` over blocks `a + scale [2^k - 1, 2^{k+1} - 1]` until a
/// block past the first few stops contributing.
pub fn integrate_to_infinity(g: impl Fn(f64) -> f64, a: f64, scale: f64) -> Option<f64> {
    let nodes = gauss_legendre(24, 0.0, 1.0);
    let mut total = 0.0;
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    while lo < 1e8 {
        let mut block = 0.0;
        for &(s, w) in &nodes {
            let z = lo + s * (hi - lo);
            block += w * (hi - lo) * scale * g(a + scale * z);
        }
        if !block.is_finite() {
            return None;
        }
        total += block;
        if lo >= 8.0 && block.abs() <= 1e-15 * total.abs() {
            return Some(total);
        }
        lo = hi;
        hi = 2.0 * hi + 1.0;
    }
    None
}
