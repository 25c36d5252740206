//! Analytic derivatives against central differences.

mod common;

use std::f64::consts::PI;

use disc_uniform::delaunay::{conformal_flow, DelaunayOptions};
use disc_uniform::energy::{evaluate_on, triangle_potential, EnergyOptions};
use disc_uniform::fixtures;
use disc_uniform::trigeom::TriangleGeometry;
use disc_uniform::uniformizer::{area_hessian, reduced_energy};
use proptest::prelude::*;

use common::*;

const EPS: f64 = 1e-5;

/// Valid decorated triangles with every angle above 0.05. Nearly flat
/// triangles have derivatives in the thousands, where the truncation error
/// of a step-1e-5 difference alone exceeds the tolerances used here.
fn decorated_triangle() -> impl Strategy<Value = ([f64; 3], [f64; 3])> {
    (proptest::array::uniform3(0.1f64..10.0), proptest::array::uniform3(1.0001f64..10.0))
        .prop_filter("valid, not nearly flat", |(r, inv)| {
            TriangleGeometry::new(*r, *inv).is_ok_and(|g| g.angles.iter().all(|&t| t > 0.05))
        })
}

/// Geometry with radius `b` scaled by `e^s`.
fn scaled(r: [f64; 3], inv: [f64; 3], b: usize, s: f64) -> TriangleGeometry {
    let mut r = r;
    r[b] *= s.exp();
    TriangleGeometry::new(r, inv).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn angle_derivatives_match_differences((r, inv) in decorated_triangle()) {
        let g = TriangleGeometry::new(r, inv).unwrap();
        let d = g.angle_derivatives();
        for b in 0..3 {
            let plus = scaled(r, inv, b, EPS);
            let minus = scaled(r, inv, b, -EPS);
            for a in 0..3 {
                let fd = (plus.angles[a] - minus.angles[a]) / (2.0 * EPS);
                prop_assert!((fd - d[a][b]).abs() < 1e-6 * d[a][b].abs().max(1.0), "∂θ{a}/∂u{b}: {fd} vs {}", d[a][b]);
            }
        }
        for row in d {
            prop_assert!(row.iter().sum::<f64>().abs() < 1e-14 * row.iter().map(|x| x.abs()).sum::<f64>().max(1.0));
        }
    }

    #[test]
    fn length_derivative_is_split_distance((r, inv) in decorated_triangle()) {
        let g = TriangleGeometry::new(r, inv).unwrap();
        for a in 0..3 {
            // edge a runs from corner a to corner a + 1
            let plus = scaled(r, inv, a, EPS);
            let minus = scaled(r, inv, a, -EPS);
            let fd = (plus.lengths[a] - minus.lengths[a]) / (2.0 * EPS);
            prop_assert!((fd - g.split[a][0]).abs() < 1e-6 * g.lengths[a].max(1.0));
        }
    }

    #[test]
    fn area_derivative_is_corner_area((r, inv) in decorated_triangle()) {
        let g = TriangleGeometry::new(r, inv).unwrap();
        for a in 0..3 {
            let fd = (scaled(r, inv, a, EPS).area - scaled(r, inv, a, -EPS).area) / (2.0 * EPS);
            // thin triangles have large derivatives; scale the tolerance with them
            let scale = g.corner_areas.iter().fold(g.area, |m, x| m.max(x.abs())).max(1.0);
            prop_assert!((fd - g.corner_areas[a]).abs() < 1e-6 * scale);
        }
    }

    #[test]
    fn potential_gradient_is_angles((r, inv) in decorated_triangle()) {
        let lambdas = inv.map(f64::acosh);
        let potential = |rr: [f64; 3]| {
            let g = TriangleGeometry::new(rr, inv).unwrap();
            triangle_potential(rr.map(f64::ln), &g, lambdas)
        };
        let g = TriangleGeometry::new(r, inv).unwrap();
        for a in 0..3 {
            let mut p = r;
            p[a] *= EPS.exp();
            let mut m = r;
            m[a] *= (-EPS).exp();
            let fd = (potential(p) - potential(m)) / (2.0 * EPS);
            prop_assert!((fd - g.angles[a]).abs() < 1e-6, "corner {a}: {fd} vs {}", g.angles[a]);
        }
    }

    #[test]
    fn potential_shifts_by_c_pi((r, inv) in decorated_triangle(), c in -2.0f64..2.0) {
        let lambdas = inv.map(f64::acosh);
        let g = TriangleGeometry::new(r, inv).unwrap();
        let f = triangle_potential(r.map(f64::ln), &g, lambdas);
        let rs = r.map(|x| x * c.exp());
        let gs = TriangleGeometry::new(rs, inv).unwrap();
        let fs = triangle_potential(rs.map(f64::ln), &gs, lambdas);
        prop_assert!((fs - f - c * PI).abs() < 1e-9);
    }
}

#[test]
fn g2_hessian_matches_differences_of_angle_defects() {
    let mesh = fixtures::genus_two_fan();
    let dm = fixtures::equilateral_metric(&mesh);
    let h = evaluate_on(&mesh, &dm, &EnergyOptions::default()).unwrap().hessian.unwrap();
    let u = [0.0, 0.0];
    for j in 0..2 {
        let plus = report_at(&mesh, &dm, &bumped(&u, j, EPS), false);
        let minus = report_at(&mesh, &dm, &bumped(&u, j, -EPS), false);
        for i in 0..2 {
            let fd = (plus.angle_defects[i] - minus.angle_defects[i]) / (2.0 * EPS);
            assert!((fd - h[(i, j)]).abs() < 1e-5, "H[{i}][{j}] = {} vs {fd}", h[(i, j)]);
        }
    }
    assert!((h[(0, 0)] + h[(0, 1)]).abs() < 1e-12);
}

#[test]
fn hessian_matches_differences_on_random_points() {
    let mut rng = rng(21);
    let surfaces = [fixtures::genus_two_fan(), fixtures::icosahedron()];
    for k in 0..10 {
        let (mesh, dm) = random_point(&mut rng, &surfaces[k % 2], 0.5);
        let r = evaluate_on(&mesh, &dm, &EnergyOptions::default()).unwrap();
        if !r.flat_edges.is_empty() {
            continue;
        }
        let h = r.hessian.unwrap();
        let u = dm.conformal_factor().to_vec();
        for j in 0..mesh.vertex_count() {
            let plus = report_at(&mesh, &dm, &bumped(&u, j, EPS), false);
            let minus = report_at(&mesh, &dm, &bumped(&u, j, -EPS), false);
            for i in 0..mesh.vertex_count() {
                let fd = (plus.angle_defects[i] - minus.angle_defects[i]) / (2.0 * EPS);
                assert!((fd - h[(i, j)]).abs() < 1e-5);
            }
        }
    }
}

#[test]
fn area_hessian_matches_differences_of_areas() {
    let mut rng = rng(22);
    for _ in 0..5 {
        let (mesh, dm) = random_point(&mut rng, &fixtures::icosahedron(), 0.3);
        let r = evaluate_on(&mesh, &dm, &EnergyOptions::default()).unwrap();
        if !r.flat_edges.is_empty() {
            continue;
        }
        let h = area_hessian(&mesh, &dm).unwrap();
        let u = dm.conformal_factor().to_vec();
        for j in 0..mesh.vertex_count() {
            let plus = report_at(&mesh, &dm, &bumped(&u, j, EPS), false);
            let minus = report_at(&mesh, &dm, &bumped(&u, j, -EPS), false);
            for i in 0..mesh.vertex_count() {
                let fd = (plus.areas[i] - minus.areas[i]) / (2.0 * EPS);
                assert!((fd - h[(i, j)]).abs() < 1e-5 * r.total_area.max(1.0));
            }
        }
    }
}

#[test]
fn reduced_energy_gradient_and_scale_invariance() {
    let mut rng = rng(23);
    let opts = DelaunayOptions::default();
    for _ in 0..10 {
        let (mesh, dm) = random_point(&mut rng, &fixtures::genus_two_fan(), 1.0);
        let u = dm.conformal_factor().to_vec();
        let at = |v: &[f64]| {
            let (mut m, mut d) = (mesh.clone(), dm.clone());
            conformal_flow(&mut m, &mut d, v, &opts).unwrap();
            reduced_energy(&mut m, &mut d, &opts).unwrap()
        };
        let (value, grad) = at(&u);
        for i in 0..2 {
            let fd = (at(&bumped(&u, i, EPS)).0 - at(&bumped(&u, i, -EPS)).0) / (2.0 * EPS);
            assert!((fd - grad[i]).abs() < 1e-6, "{fd} vs {}", grad[i]);
        }
        for c in [-0.7, 0.4, 1.5] {
            let shifted: Vec<f64> = u.iter().map(|x| x + c).collect();
            assert!((at(&shifted).0 - value).abs() < 1e-9);
        }
    }
}

#[test]
fn energy_gradient_is_continuous_across_a_flip() {
    // the rim loops of the genus-two fan flip at center factor -ln 4
    let mesh = fixtures::genus_two_fan();
    let dm = fixtures::equilateral_metric(&mesh);
    let c = -(4f64.ln());
    let below = report_at(&mesh, &dm, &[c - 1e-7, 0.0], false);
    let above = report_at(&mesh, &dm, &[c + 1e-7, 0.0], false);
    assert_ne!(below.faces, above.faces);
    for i in 0..2 {
        assert!((below.angle_defects[i] - above.angle_defects[i]).abs() < 1e-5);
        // gradient across the flip, evaluated on different triangulations
        let fd = {
            let p = report_at(&mesh, &dm, &bumped(&[c, 0.0], i, EPS), false);
            let m = report_at(&mesh, &dm, &bumped(&[c, 0.0], i, -EPS), false);
            (p.energy - m.energy) / (2.0 * EPS)
        };
        let w = report_at(&mesh, &dm, &[c, 0.0], false).angle_defects[i];
        assert!((fd - w).abs() < 1e-6);
    }
}
