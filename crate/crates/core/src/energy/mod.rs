//! The convex energy of a decorated surface and its derivatives.
//!
//! Each face contributes
//!
//! ```text
//! F_ijk = -2 Vol(ijk) + θ_i ρ_i + θ_j ρ_j + θ_k ρ_k + Σ_edges (π/2 - α_e) λ_e
//! ```
//!
//! where `Vol` is the volume of the truncated hyperideal tetrahedron over the
//! triangle, `ρ = log r` are the current log-radii and `cosh λ_e = I_e`. The
//! gradient of `F_ijk` in `ρ` is the triple of inner angles, so the energy
//! `E(u) = -Σ F_ijk + 2π Σ u_i` has gradient `W_i = 2π - θ_i` and is convex.
//! It is always evaluated on a weighted Delaunay triangulation, which makes
//! it well defined and `C²` on all of `ℝ^V`.

mod lobachevsky;

use std::f64::consts::PI;

use nalgebra::DMatrix;

pub use self::lobachevsky::lobachevsky;
use crate::delaunay::{delaunay_tolerance, face_geometries, make_weighted_delaunay, DelaunayOptions};
use crate::error::Result;
use crate::mesh::{EdgeId, Mesh, VertexId};
use crate::metric::DecoratedMetric;
use crate::trigeom::TriangleGeometry;

/// Volume of the truncated tetrahedron with one ideal vertex over a decorated
/// triangle, from its inner angles `(θ_i, θ_j, θ_k)` and face-circle
/// intersection angles `(α_ij, α_jk, α_ki)`.
pub fn truncated_volume(angles: [f64; 3], alphas: [f64; 3]) -> f64 {
    let mut twice = angles.iter().map(|&t| lobachevsky(t)).sum::<f64>();
    for a in 0..3 {
        // the two edges at corner a are edge a and edge a + 2
        let (p, q) = (alphas[a], alphas[(a + 2) % 3]);
        let t = angles[a];
        twice += lobachevsky((PI + p + q - t) / 2.0)
            + lobachevsky((PI + p - q - t) / 2.0)
            + lobachevsky((PI - p + q - t) / 2.0)
            + lobachevsky((PI - p - q - t) / 2.0);
    }
    0.5 * twice
}

/// Per-face potential `F_ijk` at log-radii `log_radii` with edge parameters
/// `lambdas = arccosh(I)` of `(ij, jk, ki)`.
pub fn triangle_potential(log_radii: [f64; 3], geom: &TriangleGeometry, lambdas: [f64; 3]) -> f64 {
    let vol = truncated_volume(geom.angles, geom.alphas);
    let mut f = -2.0 * vol;
    for a in 0..3 {
        f += geom.angles[a] * log_radii[a];
        f += (PI / 2.0 - geom.alphas[a]) * lambdas[a];
    }
    f
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyOptions {
    pub delaunay: DelaunayOptions,
    /// Assemble the Hessian of `E`.
    pub hessian: bool,
}

impl Default for EnergyOptions {
    fn default() -> Self {
        EnergyOptions { delaunay: DelaunayOptions::default(), hessian: true }
    }
}

/// Energy, curvature data and (optionally) the Hessian at one conformal factor.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyReport {
    pub energy: f64,
    /// Cone angle `θ_i` per vertex.
    pub cone_angles: Vec<f64>,
    /// Angle defect `W_i = 2π - θ_i`, the gradient of the energy.
    pub angle_defects: Vec<f64>,
    /// Dual-cell area `A_i`, the gradient of the total area.
    pub areas: Vec<f64>,
    pub total_area: f64,
    /// `K_i = W_i / A_i`, `None` where `A_i = 0`.
    pub curvatures: Vec<Option<f64>>,
    /// `∂²E / ∂u_i ∂u_j`.
    pub hessian: Option<DMatrix<f64>>,
    /// Edges within the predicate tolerance of the flat configuration. The
    /// Hessian can jump across those.
    pub flat_edges: Vec<EdgeId>,
    /// Flips performed before evaluating.
    pub flips: usize,
    pub euler_characteristic: i64,
    /// Triangulation the report was evaluated on.
    pub faces: Vec<[usize; 3]>,
}

impl EnergyReport {
    /// `Σ W_i`, equal to `2π χ` by discrete Gauss-Bonnet.
    pub fn angle_defect_sum(&self) -> f64 {
        self.angle_defects.iter().sum()
    }

    /// Vertices whose dual-cell area vanishes.
    pub fn curvature_undefined(&self) -> Vec<VertexId> {
        self.curvatures
            .iter()
            .enumerate()
            .filter(|(_, k)| k.is_none())
            .map(|(i, _)| VertexId(i))
            .collect()
    }
}

/// Makes the triangulation weighted Delaunay, then evaluates.
pub fn evaluate(
    mesh: &mut Mesh,
    dm: &mut DecoratedMetric,
    opts: &EnergyOptions,
) -> Result<EnergyReport> {
    let log = make_weighted_delaunay(mesh, dm, &opts.delaunay)?;
    let mut report = evaluate_on(mesh, dm, opts)?;
    report.flips = log.flip_count();
    Ok(report)
}

/// Evaluates on the current triangulation without flipping.
pub fn evaluate_on(mesh: &Mesh, dm: &DecoratedMetric, opts: &EnergyOptions) -> Result<EnergyReport> {
    let n = mesh.vertex_count();
    let geoms = face_geometries(mesh, dm)?;
    let mut potential_sum = 0.0;
    let mut cone_angles = vec![0.0; n];
    let mut areas = vec![0.0; n];
    let mut total_area = 0.0;
    let mut hessian = opts.hessian.then(|| DMatrix::zeros(n, n));

    for (f, geom) in mesh.faces().zip(&geoms) {
        let verts = mesh.face_vertices(f);
        let log_radii = verts.map(|v| dm.log_radius(v));
        let lambdas = mesh.face_edges(f).map(|e| dm.lambda(e));
        potential_sum += triangle_potential(log_radii, geom, lambdas);
        total_area += geom.area;
        for a in 0..3 {
            cone_angles[verts[a].0] += geom.angles[a];
            areas[verts[a].0] += geom.corner_areas[a];
        }
        if let Some(h) = hessian.as_mut() {
            let d = geom.angle_derivatives();
            for a in 0..3 {
                for b in 0..3 {
                    h[(verts[a].0, verts[b].0)] -= d[a][b];
                }
            }
        }
    }

    let energy = -potential_sum + 2.0 * PI * dm.conformal_factor().iter().sum::<f64>();
    let angle_defects: Vec<f64> = cone_angles.iter().map(|t| 2.0 * PI - t).collect();
    let curvatures = angle_defects
        .iter()
        .zip(&areas)
        .map(|(w, a)| (*a != 0.0).then(|| w / a))
        .collect();

    let tol = delaunay_tolerance(mesh, dm, opts.delaunay.relative_tolerance);
    let flat_edges = mesh
        .edges()
        .filter(|&e| {
            let s: f64 = mesh
                .edge_half_edges(e)
                .iter()
                .map(|&h| {
                    let f = mesh.face_of(h);
                    let pos = mesh.face_half_edges(f).iter().position(|&x| x == h).unwrap();
                    geoms[f.0].heights[pos]
                })
                .sum();
            s.abs() <= tol
        })
        .collect();

    Ok(EnergyReport {
        energy,
        cone_angles,
        angle_defects,
        areas,
        total_area,
        curvatures,
        hessian,
        flat_edges,
        flips: 0,
        euler_characteristic: mesh.euler_characteristic(),
        faces: mesh.face_list(),
    })
}

/// `∇E = W`, after flipping to weighted Delaunay.
pub fn energy_gradient(mesh: &mut Mesh, dm: &mut DecoratedMetric) -> Result<Vec<f64>> {
    let opts = EnergyOptions { hessian: false, ..Default::default() };
    Ok(evaluate(mesh, dm, &opts)?.angle_defects)
}

/// Hessian of `E` and the edges near a cell boundary (where it may jump).
pub fn energy_hessian(
    mesh: &mut Mesh,
    dm: &mut DecoratedMetric,
) -> Result<(DMatrix<f64>, Vec<EdgeId>)> {
    let report = evaluate(mesh, dm, &EnergyOptions::default())?;
    if !report.flat_edges.is_empty() {
        log::warn!(
            "Hessian evaluated within tolerance of a flat edge ({} edges)",
            report.flat_edges.len()
        );
    }
    Ok((report.hessian.expect("requested"), report.flat_edges))
}

/// `(A_tot, A_i)` after flipping to weighted Delaunay.
pub fn area_gradient(mesh: &mut Mesh, dm: &mut DecoratedMetric) -> Result<(f64, Vec<f64>)> {
    let opts = EnergyOptions { hessian: false, ..Default::default() };
    let report = evaluate(mesh, dm, &opts)?;
    Ok((report.total_area, report.areas))
}
