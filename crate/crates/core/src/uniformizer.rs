//! Constant discrete Gaussian curvature by constrained energy minimization.
//!
//! For `χ < 0` the critical points of `E` under `A_tot = 1` are exactly the
//! metrics with `W_i = K̄ A_i` for a common `K̄`. Both `E` and `log A_tot`
//! shift linearly under `u ↦ u + c·1` (by `2cπχ` and `2c`), so the constraint
//! is removed with the scale-invariant reduced energy
//!
//! ```text
//! Ẽ(u) = E(u) - π χ log A_tot(u),    ∇Ẽ = W - π χ A / A_tot.
//! ```
//!
//! `Ẽ` is minimized by damped Newton with one coordinate pinned and the
//! scale restored to `A_tot = 1` after every step. For `χ = 0` the convex
//! energy `E` itself is minimized, which drives every angle defect to zero.
//! The triangulation is made weighted Delaunay at every evaluation.

use std::f64::consts::PI;

use log::{debug, info};
use nalgebra::{DMatrix, DVector};

use crate::delaunay::{conformal_flow, make_weighted_delaunay, DelaunayOptions};
use crate::energy::{evaluate, EnergyOptions, EnergyReport};
use crate::error::{Error, Result};
use crate::mesh::Mesh;
use crate::metric::DecoratedMetric;
use crate::trigeom::face_geometry;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverOptions {
    /// Stop when `‖W - K̄ A‖∞` and `max |K_i - K̄| / max(1, |K̄|)` are both
    /// below this.
    pub residual_tol: f64,
    pub max_iters: usize,
    /// Step shrink factor of the backtracking line search.
    pub backtrack: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Include the finite-difference Hessian of the total area in the Newton
    /// matrix; otherwise that block is dropped (Gauss-Newton).
    pub fd_jacobian: bool,
    /// Starting conformal factor; the metric's own factor if `None`.
    pub seed_u: Option<Vec<f64>>,
    pub delaunay: DelaunayOptions,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            residual_tol: 1e-10,
            max_iters: 100,
            backtrack: 0.5,
            armijo: 1e-4,
            fd_jacobian: true,
            seed_u: None,
            delaunay: DelaunayOptions::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StepKind {
    Newton,
    Gradient,
}

/// State of one iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    /// `Ẽ` for `χ < 0`, `E` for `χ = 0`.
    pub objective: f64,
    pub residual: f64,
    /// `Σ W_i` at this iterate.
    pub angle_defect_sum: f64,
    /// Flips performed while reaching this iterate.
    pub flips: usize,
    /// Step that produced this iterate (`None` for the start).
    pub step: Option<StepKind>,
    pub step_length: f64,
}

#[derive(Debug, Clone)]
pub struct UniformizeResult {
    pub converged: bool,
    pub u: Vec<f64>,
    pub mesh: Mesh,
    pub metric: DecoratedMetric,
    pub curvatures: Vec<f64>,
    pub angle_defects: Vec<f64>,
    pub areas: Vec<f64>,
    /// `Σ W / Σ A`; the common curvature on success.
    pub k_bar: f64,
    pub total_area: f64,
    pub iterations: usize,
    pub residual: f64,
    pub euler_characteristic: i64,
    pub trace: Vec<IterationRecord>,
}

impl UniformizeResult {
    pub fn residual_history(&self) -> Vec<f64> {
        self.trace.iter().map(|r| r.residual).collect()
    }

    pub fn flips_per_iteration(&self) -> Vec<usize> {
        self.trace.iter().map(|r| r.flips).collect()
    }

    pub fn total_flips(&self) -> usize {
        self.trace.iter().map(|r| r.flips).sum()
    }

    /// `max_i |K_i - K̄|`.
    pub fn curvature_spread(&self) -> f64 {
        self.curvatures.iter().map(|k| (k - self.k_bar).abs()).fold(0.0, f64::max)
    }
}

/// Shifts `u` by `c0 = -½ log A_tot` so the total area becomes 1. The
/// triangulation is made weighted Delaunay first. Returns `c0`.
pub fn scale_normalize(
    mesh: &mut Mesh,
    dm: &mut DecoratedMetric,
    opts: &DelaunayOptions,
) -> Result<f64> {
    make_weighted_delaunay(mesh, dm, opts)?;
    let total: f64 = mesh
        .faces()
        .map(|f| face_geometry(mesh, dm, f).map(|g| g.area))
        .sum::<Result<f64>>()?;
    let c0 = -0.5 * total.ln();
    dm.shift_conformal_factor(c0);
    Ok(c0)
}

/// `Ẽ = E - π χ log A_tot` and its gradient `W - π χ A / A_tot`.
pub fn reduced_energy(
    mesh: &mut Mesh,
    dm: &mut DecoratedMetric,
    opts: &DelaunayOptions,
) -> Result<(f64, Vec<f64>)> {
    let eopts = EnergyOptions { delaunay: *opts, hessian: false };
    let report = evaluate(mesh, dm, &eopts)?;
    let chi = report.euler_characteristic as f64;
    Ok(reduced_from_report(&report, chi))
}

fn reduced_from_report(r: &EnergyReport, chi: f64) -> (f64, Vec<f64>) {
    let value = r.energy - PI * chi * r.total_area.ln();
    let grad = r
        .angle_defects
        .iter()
        .zip(&r.areas)
        .map(|(w, a)| w - PI * chi * a / r.total_area)
        .collect();
    (value, grad)
}

/// `∂A_i / ∂u_j` on the current triangulation, by central differences of the
/// per-face corner areas.
pub fn area_hessian(mesh: &Mesh, dm: &DecoratedMetric) -> Result<DMatrix<f64>> {
    const STEP: f64 = 1e-5;
    let n = mesh.vertex_count();
    let mut h = DMatrix::zeros(n, n);
    for f in mesh.faces() {
        let verts = mesh.face_vertices(f);
        let radii = verts.map(|v| dm.radius(v));
        let inv = mesh.face_edges(f).map(|e| dm.inversive_distance(e));
        for b in 0..3 {
            let shifted = |s: f64| {
                let mut r = radii;
                r[b] *= s.exp();
                crate::trigeom::TriangleGeometry::new(r, inv)
            };
            let plus = shifted(STEP)?;
            let minus = shifted(-STEP)?;
            for a in 0..3 {
                let d = (plus.corner_areas[a] - minus.corner_areas[a]) / (2.0 * STEP);
                h[(verts[a].0, verts[b].0)] += d;
            }
        }
    }
    // symmetrize away the finite-difference noise
    Ok((&h + h.transpose()) * 0.5)
}

struct Iterate {
    mesh: Mesh,
    metric: DecoratedMetric,
    report: EnergyReport,
    objective: f64,
    gradient: Vec<f64>,
    residual: f64,
    spread: f64,
}

struct Solver<'a> {
    opts: &'a SolverOptions,
    chi: f64,
}

impl Solver<'_> {
    fn energy_opts(&self, hessian: bool) -> EnergyOptions {
        EnergyOptions { delaunay: self.opts.delaunay, hessian }
    }

    /// Normalizes the scale, flips, evaluates.
    fn iterate(&self, mut mesh: Mesh, mut metric: DecoratedMetric, hessian: bool) -> Result<Iterate> {
        let mut flips = make_weighted_delaunay(&mut mesh, &mut metric, &self.opts.delaunay)?.flip_count();
        scale_normalize(&mut mesh, &mut metric, &self.opts.delaunay)?;
        let mut report = evaluate(&mut mesh, &mut metric, &self.energy_opts(hessian))?;
        flips += report.flips;
        report.flips = flips;

        let (objective, gradient) = if self.chi < 0.0 {
            reduced_from_report(&report, self.chi)
        } else {
            (report.energy, report.angle_defects.clone())
        };
        let sum_w: f64 = report.angle_defects.iter().sum();
        let sum_a: f64 = report.areas.iter().sum();
        let k_bar = sum_w / sum_a;
        let residual = report
            .angle_defects
            .iter()
            .zip(&report.areas)
            .map(|(w, a)| (w - k_bar * a).abs())
            .fold(0.0, f64::max);
        let spread = report
            .angle_defects
            .iter()
            .zip(&report.areas)
            .map(|(w, a)| (w / a - k_bar).abs())
            .fold(0.0, f64::max)
            / k_bar.abs().max(1.0);
        Ok(Iterate { mesh, metric, report, objective, gradient, residual, spread })
    }

    fn converged(&self, it: &Iterate) -> bool {
        it.residual <= self.opts.residual_tol && it.spread <= self.opts.residual_tol
    }

    fn newton_matrix(&self, it: &Iterate) -> Result<DMatrix<f64>> {
        let mut h = it.report.hessian.clone().expect("Hessian requested");
        if self.chi < 0.0 {
            let total = it.report.total_area;
            let a = DVector::from_column_slice(&it.report.areas);
            let outer = &a * a.transpose() / (total * total);
            // -πχ (H_A / A_tot - A Aᵀ / A_tot²)
            let mut area_term = -outer;
            if self.opts.fd_jacobian {
                area_term += area_hessian(&it.mesh, &it.metric)? / total;
            }
            h -= area_term * (PI * self.chi);
        }
        Ok(h)
    }

    /// Search direction on coordinates `1..n` (vertex 0 pinned).
    fn directions(&self, it: &Iterate) -> Result<Vec<(StepKind, Vec<f64>)>> {
        let n = it.gradient.len();
        let g = DVector::from_iterator(n - 1, it.gradient[1..].iter().copied());
        let mut out = Vec::new();
        let h = self.newton_matrix(it)?;
        let h_r = h.view((1, 1), (n - 1, n - 1)).into_owned();
        let newton = h_r
            .clone()
            .cholesky()
            .map(|c| c.solve(&(-&g)))
            .or_else(|| h_r.lu().solve(&(-&g)));
        if let Some(d) = newton {
            if d.iter().all(|x| x.is_finite()) && d.dot(&g) < 0.0 {
                out.push((StepKind::Newton, d));
            }
        }
        out.push((StepKind::Gradient, -g));
        Ok(out
            .into_iter()
            .map(|(kind, d)| {
                let mut full = vec![0.0; n];
                full[1..].copy_from_slice(d.as_slice());
                (kind, full)
            })
            .collect())
    }

    fn line_search(&self, it: &Iterate, dir: &[f64]) -> Result<Option<(Iterate, f64)>> {
        let slope: f64 = dir.iter().zip(&it.gradient).map(|(d, g)| d * g).sum();
        // objective differences below this are rounding noise
        let noise = 64.0 * f64::EPSILON * it.objective.abs().max(1.0);
        let mut t = 1.0;
        for _ in 0..60 {
            let target: Vec<f64> =
                it.metric.conformal_factor().iter().zip(dir).map(|(u, d)| u + t * d).collect();
            let (mut mesh, mut metric) = (it.mesh.clone(), it.metric.clone());
            let trial = conformal_flow(&mut mesh, &mut metric, &target, &self.opts.delaunay)
                .and_then(|log| {
                    let mut trial = self.iterate(mesh, metric, false)?;
                    trial.report.flips += log.flip_count();
                    Ok(trial)
                });
            match trial {
                Ok(trial) => {
                    let armijo = trial.objective <= it.objective + self.opts.armijo * t * slope;
                    let within_noise =
                        trial.objective <= it.objective + noise && trial.residual < it.residual;
                    if armijo || within_noise {
                        return Ok(Some((trial, t)));
                    }
                }
                Err(e) => debug!("trial step t = {t:e} failed: {e}"),
            }
            t *= self.opts.backtrack;
        }
        Ok(None)
    }
}

/// Runs the solver and returns its final state, converged or not.
pub fn uniformize_trace(
    mesh: &Mesh,
    dm: &DecoratedMetric,
    opts: &SolverOptions,
) -> Result<UniformizeResult> {
    let chi = mesh.euler_characteristic();
    if chi > 0 {
        return Err(Error::PositiveEuler { chi });
    }
    let solver = Solver { opts, chi: chi as f64 };
    let start = match &opts.seed_u {
        Some(u) => {
            if u.len() != mesh.vertex_count() {
                return Err(Error::InvalidInput(format!(
                    "seed has {} entries for {} vertices",
                    u.len(),
                    mesh.vertex_count()
                )));
            }
            let (mut m, mut metric) = (mesh.clone(), dm.clone());
            conformal_flow(&mut m, &mut metric, u, &opts.delaunay)?;
            (m, metric)
        }
        None => (mesh.clone(), dm.clone()),
    };
    let mut it = solver.iterate(start.0, start.1, true)?;
    let mut trace = vec![IterationRecord {
        objective: it.objective,
        residual: it.residual,
        angle_defect_sum: it.report.angle_defect_sum(),
        flips: it.report.flips,
        step: None,
        step_length: 0.0,
    }];
    let mut iterations = 0;
    let mut converged = solver.converged(&it);
    while !converged && iterations < opts.max_iters && mesh.vertex_count() > 1 {
        let mut accepted = None;
        for (kind, dir) in solver.directions(&it)? {
            if let Some((trial, t)) = solver.line_search(&it, &dir)? {
                accepted = Some((kind, trial, t));
                break;
            }
            debug!("{kind:?} direction failed the line search");
        }
        let Some((kind, trial, t)) = accepted else {
            info!("line search stalled at residual {:e}", it.residual);
            break;
        };
        iterations += 1;
        let flips = trial.report.flips;
        it = solver.iterate(trial.mesh, trial.metric, true)?;
        it.report.flips += flips;
        trace.push(IterationRecord {
            objective: it.objective,
            residual: it.residual,
            angle_defect_sum: it.report.angle_defect_sum(),
            flips: it.report.flips,
            step: Some(kind),
            step_length: t,
        });
        debug!("iteration {iterations}: {kind:?} t = {t}, residual {:e}", it.residual);
        converged = solver.converged(&it);
    }

    let r = &it.report;
    let k_bar = r.angle_defect_sum() / r.areas.iter().sum::<f64>();
    Ok(UniformizeResult {
        converged,
        u: it.metric.conformal_factor().to_vec(),
        curvatures: r.curvatures.iter().map(|k| k.unwrap_or(f64::NAN)).collect(),
        angle_defects: r.angle_defects.clone(),
        areas: r.areas.clone(),
        k_bar,
        total_area: r.total_area,
        iterations,
        residual: it.residual,
        euler_characteristic: chi,
        trace,
        mesh: it.mesh,
        metric: it.metric,
    })
}

/// Finds a discrete conformal factor of constant discrete Gaussian curvature.
pub fn uniformize(
    mesh: &Mesh,
    dm: &DecoratedMetric,
    opts: &SolverOptions,
) -> Result<UniformizeResult> {
    let result = uniformize_trace(mesh, dm, opts)?;
    if !result.converged {
        return Err(Error::NotConverged { iterations: result.iterations, residual: result.residual });
    }
    Ok(result)
}
