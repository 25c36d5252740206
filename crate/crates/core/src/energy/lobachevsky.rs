//! Milnor's Lobachevsky function `Л(x) = -∫₀ˣ log|2 sin t| dt`.
//!
//! `Л(x) = ½ Cl₂(2x)` where `Cl₂` is the Clausen function. After reducing `x`
//! to `(-π/2, π/2]` the argument `θ = 2x` lies in `(-π, π]`, where
//!
//! ```text
//! Cl₂(θ) = θ - θ log|θ| + Σ_{n≥1} ζ(2n) θ (θ/2π)^{2n} / (n (2n + 1))
//! ```
//!
//! converges like `4^{-n}`; thirty terms reach full double precision.

use std::f64::consts::PI;
use std::sync::OnceLock;

const TERMS: usize = 30;

/// `ζ(2n) / (n (2n + 1))` for `n = 1..=TERMS`.
fn coefficients() -> &'static [f64; TERMS] {
    static COEFFS: OnceLock<[f64; TERMS]> = OnceLock::new();
    COEFFS.get_or_init(|| {
        let pi2 = PI * PI;
        let exact = [
            pi2 / 6.0,
            pi2 * pi2 / 90.0,
            pi2 * pi2 * pi2 / 945.0,
            pi2 * pi2 * pi2 * pi2 / 9450.0,
            pi2 * pi2 * pi2 * pi2 * pi2 / 93555.0,
        ];
        std::array::from_fn(|idx| {
            let n = idx + 1;
            let zeta = if n <= exact.len() {
                exact[idx]
            } else {
                // k^{-12} is below 1e-19 for k > 40
                1.0 + (2..=40).rev().map(|k| (k as f64).powi(-2 * n as i32)).sum::<f64>()
            };
            zeta / (n as f64 * (2 * n + 1) as f64)
        })
    })
}

/// Clausen function `Cl₂(θ)` for `|θ| <= π`.
fn clausen2_reduced(theta: f64) -> f64 {
    if theta == 0.0 {
        return 0.0;
    }
    let q = (theta / (2.0 * PI)).powi(2);
    let mut power = 1.0;
    let mut series = 0.0;
    for c in coefficients() {
        power *= q;
        series += c * power;
    }
    theta - theta * theta.abs().ln() + theta * series
}

/// Milnor's Lobachevsky function. Odd, `π`-periodic, maximal at `π/6`.
pub fn lobachevsky(x: f64) -> f64 {
    if !x.is_finite() {
        return f64::NAN;
    }
    let reduced = x - PI * (x / PI).round();
    0.5 * clausen2_reduced(2.0 * reduced)
}
