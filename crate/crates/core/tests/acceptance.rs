//! Acceptance checks. Runs without the libtest harness so that it can print
//! one PASS/FAIL line per criterion; exits non-zero if any fails.

mod common;

use std::f64::consts::PI;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use disc_uniform::delaunay::{
    conformal_flow, delaunay_tolerance, flip_edge_metric, height_sums, DelaunayOptions,
};
use disc_uniform::energy::{evaluate_on, lobachevsky, EnergyOptions};
use disc_uniform::fixtures;
use disc_uniform::trigeom::{face_geometry, TriangleGeometry};
use disc_uniform::uniformizer::{uniformize, SolverOptions};
use disc_uniform::{EdgeId, Error, Mesh};
use nalgebra::{DVector, SymmetricEigen};
use rand::Rng;

use common::*;

type Outcome = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(f64::MIN_POSITIVE)
}

/// 100 random metrics, alternating between the two test surfaces.
fn random_metrics(seed: u64) -> Vec<(Mesh, disc_uniform::DecoratedMetric)> {
    let mut rng = rng(seed);
    let surfaces = [fixtures::genus_two_fan(), fixtures::one_vertex_torus()];
    (0..100).map(|k| random_point(&mut rng, &surfaces[k % 2], 1.0)).collect()
}

fn derivative_identities() -> Outcome {
    let start = Instant::now();
    let eps = 1e-5;
    let mut worst = [0.0f64; 3];
    for (mesh, dm) in random_metrics(1) {
        for f in mesh.faces() {
            let g = face_geometry(&mesh, &dm, f).map_err(|e| e.to_string())?;
            for i in 0..3 {
                let area = |s: f64| {
                    let mut r = g.radii;
                    r[i] *= s.exp();
                    TriangleGeometry::new(r, g.inversive).unwrap().area
                };
                worst[0] = worst[0].max((central_difference(area, eps) - g.corner_areas[i]).abs());
            }
        }
        let u = dm.conformal_factor().to_vec();
        let base = report_at(&mesh, &dm, &u, false);
        for i in 0..mesh.vertex_count() {
            let plus = report_at(&mesh, &dm, &bumped(&u, i, eps), false);
            let minus = report_at(&mesh, &dm, &bumped(&u, i, -eps), false);
            let d_energy = (plus.energy - minus.energy) / (2.0 * eps);
            let d_area = (plus.total_area - minus.total_area) / (2.0 * eps);
            worst[1] = worst[1].max((d_energy - base.angle_defects[i]).abs());
            worst[2] = worst[2].max((d_area - base.areas[i]).abs());
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let detail = format!(
        "max |err| dA_ijk {:.1e}, dE {:.1e}, dA_tot {:.1e}; {elapsed:.2} s",
        worst[0], worst[1], worst[2]
    );
    ensure(worst.iter().all(|&w| w <= 1e-6), || detail.clone())?;
    ensure(elapsed < 10.0, || detail.clone())?;
    Ok(detail)
}

fn flip_invariance() -> Outcome {
    // On the genus-two fan, shrinking the center circle turns the four rim
    // loops non-Delaunay simultaneously. Bisect for the center factor where
    // their height sums vanish.
    let mesh = fixtures::genus_two_fan();
    let dm0 = fixtures::equilateral_metric(&mesh);
    let rim: Vec<EdgeId> =
        mesh.edges().filter(|&e| mesh.edge_endpoints(e).iter().all(|v| v.0 == 1)).collect();
    let min_rim = |c: f64| {
        let h = height_sums(&mesh, &dm0.with_conformal_factor(&[c, 0.0])).unwrap();
        rim.iter().map(|e| h[e.0]).fold(f64::INFINITY, f64::min)
    };
    let (mut lo, mut hi) = (-1.5, -1.0);
    ensure(min_rim(lo) < 0.0 && min_rim(hi) > 0.0, || "bracket does not straddle zero".into())?;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid == lo || mid == hi {
            break;
        }
        if min_rim(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let dm = dm0.with_conformal_factor(&[hi, 0.0]);
    let flatness = min_rim(hi).abs();
    ensure(flatness < 1e-12, || format!("flat edge height sum {flatness:e}"))?;

    let opts = EnergyOptions::default();
    let before = evaluate_on(&mesh, &dm, &opts).map_err(|e| e.to_string())?;
    let (mut m, mut d) = (mesh.clone(), dm.clone());
    flip_edge_metric(&mut m, &mut d, rim[0]).map_err(|e| e.to_string())?;
    let one = evaluate_on(&m, &d, &opts).map_err(|e| e.to_string())?;
    for &e in &rim[1..] {
        flip_edge_metric(&mut m, &mut d, e).map_err(|e| e.to_string())?;
    }
    let all = evaluate_on(&m, &d, &opts).map_err(|e| e.to_string())?;

    let mut worst = [0.0f64; 3];
    for after in [&one, &all] {
        worst[0] = worst[0].max(rel(after.energy, before.energy));
        worst[1] = worst[1].max(rel(after.total_area, before.total_area));
        for (a, b) in after.areas.iter().zip(&before.areas) {
            worst[2] = worst[2].max(rel(*a, *b));
        }
    }
    let detail = format!(
        "center u* = {hi:.15}, |h-sum| {flatness:.1e}; rel diff E {:.1e}, A_tot {:.1e}, A_i {:.1e}",
        worst[0], worst[1], worst[2]
    );
    ensure(worst[0] <= 1e-9 && worst[1] <= 1e-10 && worst[2] <= 1e-10, || detail.clone())?;
    Ok(detail)
}

fn scaling_laws() -> Outcome {
    let mut worst = [0.0f64; 2];
    for (mesh, dm) in random_metrics(3).into_iter().take(20) {
        let chi = mesh.euler_characteristic() as f64;
        let u = dm.conformal_factor().to_vec();
        let base = report_at(&mesh, &dm, &u, false);
        for c in [-1.0, 0.3, 2.0] {
            let shifted: Vec<f64> = u.iter().map(|x| x + c).collect();
            let r = report_at(&mesh, &dm, &shifted, false);
            worst[0] = worst[0].max((r.energy - base.energy - 2.0 * c * PI * chi).abs());
            worst[1] = worst[1].max(rel(r.total_area, (2.0 * c).exp() * base.total_area));
        }
    }
    let detail = format!("max |ΔE - 2cπχ| {:.1e}, max rel A_tot {:.1e}", worst[0], worst[1]);
    ensure(worst[0] <= 1e-9 && worst[1] <= 1e-12, || detail.clone())?;
    Ok(detail)
}

fn gauss_bonnet() -> Outcome {
    let mut worst = 0.0f64;
    let mut checked = 0;
    for (mesh, dm) in random_metrics(4) {
        let chi = mesh.euler_characteristic() as f64;
        let r = evaluate_on(&mesh, &dm, &EnergyOptions::default()).map_err(|e| e.to_string())?;
        worst = worst.max((r.angle_defect_sum() - 2.0 * PI * chi).abs());
        checked += 1;
    }
    let mesh = fixtures::genus_two_fan();
    let dm = fixtures::equilateral_metric(&mesh);
    let g2 = evaluate_on(&mesh, &dm, &EnergyOptions::default()).map_err(|e| e.to_string())?;
    let g2_err = (g2.angle_defect_sum() + 4.0 * PI).abs();
    for seed in [None, Some(vec![-3.0, 1.0])] {
        let opts = SolverOptions { seed_u: seed, ..SolverOptions::default() };
        let result = uniformize(&mesh, &dm, &opts).map_err(|e| e.to_string())?;
        for rec in &result.trace {
            worst = worst.max((rec.angle_defect_sum + 4.0 * PI).abs());
            checked += 1;
        }
    }
    let detail =
        format!("{checked} states, max |ΣW - 2πχ| {worst:.1e}; G2 at u=0: |ΣW + 4π| {g2_err:.1e}");
    ensure(worst <= 1e-9 && g2_err <= 1e-9, || detail.clone())?;
    Ok(detail)
}

fn geometry_closed_forms() -> Outcome {
    // values printed by tests/oracles/equilateral_oracle.py from a coordinate layout
    let g = TriangleGeometry::new([1.0; 3], [2.0; 3]).map_err(|e| e.to_string())?;
    let s3 = 3f64.sqrt();
    let checks = [
        ("d", g.split[0][0], 6f64.sqrt() / 2.0),
        ("h", g.heights[0], 2f64.sqrt() / 2.0),
        ("r_ijk", g.face_circle_radius, 1.0),
        ("r_ij", g.half_chords[0], 2f64.sqrt() / 2.0),
        ("alpha", g.alphas[0], PI / 4.0),
        ("A_ijk", g.area, 1.5 * s3),
        ("A_i^jk", g.corner_areas[0], s3),
    ];
    let mut worst = 0.0f64;
    for (name, got, want) in checks {
        let err = (got - want).abs();
        ensure(err <= 1e-12, || format!("{name}: {got} vs {want}"))?;
        worst = worst.max(err);
    }
    for a in 0..3 {
        for (got, want) in [
            (g.split[a][0], 6f64.sqrt() / 2.0),
            (g.split[a][1], 6f64.sqrt() / 2.0),
            (g.heights[a], 2f64.sqrt() / 2.0),
            (g.alphas[a], PI / 4.0),
            (g.corner_areas[a], s3),
        ] {
            worst = worst.max((got - want).abs());
        }
    }
    let detail = format!("all equilateral-decoration quantities within {worst:.1e}");
    ensure(worst <= 1e-12, || detail.clone())?;
    Ok(detail)
}

fn lobachevsky_function() -> Outcome {
    let mut worst = 0.0f64;
    let mut at = 0.0;
    for k in 0..1000 {
        let x = -PI + 3.0 * PI * (k as f64 + 0.5) / 1000.0;
        let err = (lobachevsky(x) - lobachevsky_by_quadrature(x)).abs();
        if err > worst {
            worst = err;
            at = x;
        }
    }
    let zeros = lobachevsky(0.0).abs().max(lobachevsky(PI / 2.0).abs());
    let mut symmetry = 0.0f64;
    let mut rng = rng(6);
    for _ in 0..1000 {
        let x: f64 = rng.gen_range(-2.0 * PI..2.0 * PI);
        symmetry = symmetry.max((lobachevsky(-x) + lobachevsky(x)).abs());
        symmetry = symmetry.max((lobachevsky(x + PI) - lobachevsky(x)).abs());
    }
    let detail = format!(
        "max |Л - quadrature| {worst:.1e} (at x = {at:.4}); |Л(0)|, |Л(π/2)| ≤ {zeros:.1e}; \
         oddness/periodicity {symmetry:.1e}"
    );
    ensure(worst <= 1e-10 && zeros <= 1e-12 && symmetry <= 1e-12, || detail.clone())?;
    Ok(detail)
}

fn concavity() -> Outcome {
    let mut rng = rng(7);
    let surfaces = [fixtures::genus_two_fan(), fixtures::one_vertex_torus(), fixtures::icosahedron()];
    let mut min_eig = f64::INFINITY;
    let mut row_sum = 0.0f64;
    let mut points = 0;
    let mut skipped = 0;
    while points < 50 {
        let (mesh, dm) = random_point(&mut rng, &surfaces[points % 3], 0.5);
        let r = evaluate_on(&mesh, &dm, &EnergyOptions::default()).map_err(|e| e.to_string())?;
        if !r.flat_edges.is_empty() {
            skipped += 1;
            continue;
        }
        let h = r.hessian.expect("requested");
        let ones = DVector::from_element(h.nrows(), 1.0);
        row_sum = row_sum.max((&h * ones).amax());
        let eig = SymmetricEigen::new(h).eigenvalues.min();
        min_eig = min_eig.min(eig);
        points += 1;
    }
    let detail = format!(
        "{points} points ({skipped} near-flat skipped): min eigenvalue {min_eig:.1e}, max |H·1| {row_sum:.1e}"
    );
    ensure(min_eig >= -1e-9 && row_sum <= 1e-9, || detail.clone())?;
    Ok(detail)
}

fn end_to_end() -> Outcome {
    let mesh = fixtures::genus_two_fan();
    let dm = fixtures::equilateral_metric(&mesh);
    let start = Instant::now();
    let r = uniformize(&mesh, &dm, &SolverOptions::default()).map_err(|e| e.to_string())?;
    let g2_time = start.elapsed().as_secs_f64();
    let chi = mesh.euler_characteristic() as f64;
    let sum_a: f64 = r.areas.iter().sum();
    let spread = r.curvature_spread();
    let k_identity = rel(r.k_bar, 2.0 * PI * chi / sum_a);
    ensure(r.iterations <= 100, || format!("{} iterations", r.iterations))?;
    ensure(spread <= 1e-8 * r.k_bar.abs(), || format!("curvature spread {spread:e}"))?;
    ensure((r.total_area - 1.0).abs() <= 1e-10, || format!("A_tot = {}", r.total_area))?;
    ensure(r.k_bar < 0.0, || format!("K̄ = {}", r.k_bar))?;
    ensure(k_identity <= 1e-8, || format!("K̄ vs 2πχ/ΣA rel {k_identity:e}"))?;
    ensure(g2_time < 5.0, || format!("G2 took {g2_time:.2} s"))?;

    let torus = fixtures::one_vertex_torus();
    let start = Instant::now();
    let t = uniformize(&torus, &fixtures::equilateral_metric(&torus), &SolverOptions::default())
        .map_err(|e| e.to_string())?;
    let t1_time = start.elapsed().as_secs_f64();
    let w_max = t.angle_defects.iter().fold(0.0f64, |m, w| m.max(w.abs()));
    ensure(w_max <= 1e-10, || format!("T1 ‖W‖∞ = {w_max:e}"))?;
    ensure(t1_time < 5.0, || format!("T1 took {t1_time:.2} s"))?;

    Ok(format!(
        "G2: {} iterations, K̄ = {:.12} (πχ = {:.12}), spread {spread:.1e}, |A_tot-1| {:.1e}, \
         K̄ vs 2πχ/ΣA {k_identity:.1e}, {g2_time:.3} s; T1: ‖W‖∞ {w_max:.1e}, {t1_time:.3} s",
        r.iterations,
        r.k_bar,
        PI * chi,
        (r.total_area - 1.0).abs(),
    ))
}

fn robustness() -> Outcome {
    let ico = fixtures::icosahedron();
    match uniformize(&ico, &fixtures::equilateral_metric(&ico), &SolverOptions::default()) {
        Err(Error::PositiveEuler { chi: 2 }) => {}
        other => return Err(format!("χ = 2 input gave {other:?}")),
    }
    let mesh = fixtures::genus_two_fan();
    let dm0 = fixtures::equilateral_metric(&mesh);
    let opts = DelaunayOptions::default();
    let mut rng = rng(9);
    let mut worst = f64::INFINITY;
    let mut flips = 0;
    for _ in 0..100 {
        let u = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let (mut m, mut dm) = (mesh.clone(), dm0.clone());
        flips += conformal_flow(&mut m, &mut dm, &u, &opts).map_err(|e| e.to_string())?.flip_count();
        let tol = delaunay_tolerance(&m, &dm, opts.relative_tolerance);
        let min = height_sums(&m, &dm).map_err(|e| e.to_string())?.into_iter().fold(f64::INFINITY, f64::min);
        worst = worst.min(min / tol);
        ensure(min >= -tol, || format!("u = {u:?}: min height sum {min:e} < -{tol:e}"))?;
    }
    Ok(format!(
        "χ = 2 rejected with PositiveEuler; 100 random factors, {flips} flips, min h-sum / tol = {worst:.3e}"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 derivative identities", derivative_identities),
        ("2 flip invariance", flip_invariance),
        ("3 scaling laws", scaling_laws),
        ("4 Gauss-Bonnet", gauss_bonnet),
        ("5 geometry closed forms", geometry_closed_forms),
        ("6 Lobachevsky function", lobachevsky_function),
        ("7 concavity", concavity),
        ("8 end-to-end uniformization", end_to_end),
        ("9 robustness", robustness),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".to_string()));
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
