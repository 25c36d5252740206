//! Shared helpers for the integration tests: random metrics, evaluation at a
//! conformal factor, and numerical oracles.
#![allow(dead_code)]

use std::f64::consts::PI;

use disc_uniform::delaunay::{conformal_flow, make_weighted_delaunay, DelaunayOptions};
use disc_uniform::energy::{evaluate, EnergyOptions, EnergyReport};
use disc_uniform::metric::{validate_metric, MetricTolerances};
use disc_uniform::{DecoratedMetric, Mesh};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random radii in `[0.6, 1.6]` and inversive distances in `[1.05, 3]`,
/// rejection-sampled until the metric is valid, then flipped to weighted
/// Delaunay.
pub fn random_metric(rng: &mut ChaCha8Rng, mesh: &Mesh) -> (Mesh, DecoratedMetric) {
    loop {
        let r0: Vec<f64> = (0..mesh.vertex_count()).map(|_| rng.gen_range(0.6..1.6)).collect();
        let inv: Vec<f64> = (0..mesh.edge_count()).map(|_| rng.gen_range(1.05..3.0)).collect();
        let mut m = mesh.clone();
        let mut dm = DecoratedMetric::new(&m, r0, inv).unwrap();
        if !validate_metric(&m, &dm, MetricTolerances::default()).is_empty() {
            continue;
        }
        if make_weighted_delaunay(&mut m, &mut dm, &DelaunayOptions::default()).is_ok() {
            return (m, dm);
        }
    }
}

/// Random metric moved to a random factor with entries in `[-spread, spread]`.
pub fn random_point(rng: &mut ChaCha8Rng, mesh: &Mesh, spread: f64) -> (Mesh, DecoratedMetric) {
    let (mut m, mut dm) = random_metric(rng, mesh);
    let u: Vec<f64> = (0..m.vertex_count()).map(|_| rng.gen_range(-spread..=spread)).collect();
    conformal_flow(&mut m, &mut dm, &u, &DelaunayOptions::default()).unwrap();
    (m, dm)
}

/// Moves a copy of the surface to `u` and evaluates there.
pub fn report_at(mesh: &Mesh, dm: &DecoratedMetric, u: &[f64], hessian: bool) -> EnergyReport {
    let (mut m, mut d) = (mesh.clone(), dm.clone());
    conformal_flow(&mut m, &mut d, u, &DelaunayOptions::default()).unwrap();
    evaluate(&mut m, &mut d, &EnergyOptions { hessian, ..EnergyOptions::default() }).unwrap()
}

/// `u` with `delta` added to entry `i`.
pub fn bumped(u: &[f64], i: usize, delta: f64) -> Vec<f64> {
    let mut v = u.to_vec();
    v[i] += delta;
    v
}

/// Tanh-sinh quadrature of `f` over `[a, b]`. The integrand receives the
/// distances of the node to `a` and to `b`, computed without cancellation,
/// so endpoint singularities can be evaluated accurately.
pub fn tanh_sinh(f: impl Fn(f64, f64) -> f64, a: f64, b: f64) -> f64 {
    let half = 0.5 * (b - a);
    let node = |tau: f64| -> Option<f64> {
        let q = 0.5 * PI * tau.sinh();
        let weight = half * 0.5 * PI * tau.cosh() / q.cosh().powi(2);
        let to_a = (b - a) / (1.0 + (-2.0 * q).exp());
        let to_b = (b - a) / (1.0 + (2.0 * q).exp());
        (weight > 0.0 && to_a > 0.0 && to_b > 0.0).then(|| weight * f(to_a, to_b))
    };
    let tau_max = 4.0;
    let mut h = 0.5;
    let mut sum = node(0.0).unwrap_or(0.0);
    let mut k = 1.0;
    while k * h <= tau_max {
        sum += node(k * h).unwrap_or(0.0) + node(-k * h).unwrap_or(0.0);
        k += 1.0;
    }
    let mut estimate = h * sum;
    for _ in 0..10 {
        h *= 0.5;
        // only the new odd nodes are added at each halving
        let mut k = 1.0;
        while k * h <= tau_max {
            sum += node(k * h).unwrap_or(0.0) + node(-k * h).unwrap_or(0.0);
            k += 2.0;
        }
        let next = h * sum;
        let converged = (next - estimate).abs() <= 1e-15 * next.abs().max(1.0);
        estimate = next;
        if converged {
            break;
        }
    }
    estimate
}

/// `-∫₀ˣ log|2 sin t| dt` by quadrature, split at the singular points `kπ`.
pub fn lobachevsky_by_quadrature(x: f64) -> f64 {
    if x < 0.0 {
        return -lobachevsky_by_quadrature(-x);
    }
    let mut total = 0.0;
    let mut k = 0.0;
    while k * PI < x {
        let a = k * PI;
        let b = ((k + 1.0) * PI).min(x);
        let full = b == (k + 1.0) * PI;
        // |sin t| = sin(distance to the nearest multiple of π)
        let integrand = |to_a: f64, to_b: f64| {
            let s = if full { to_a.min(to_b) } else { to_a };
            -(2.0 * s.sin()).ln()
        };
        total += tanh_sinh(integrand, a, b);
        k += 1.0;
    }
    total
}

/// Central difference with step `eps`.
pub fn central_difference(f: impl Fn(f64) -> f64, eps: f64) -> f64 {
    (f(eps) - f(-eps)) / (2.0 * eps)
}
