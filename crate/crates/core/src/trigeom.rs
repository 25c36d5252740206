//! Closed-form geometry of a single decorated Euclidean triangle.
//!
//! Corners are numbered `0, 1, 2` (`i, j, k`); edge `a` runs from corner `a`
//! to corner `a + 1`, so the edges are `ij, jk, ki`. The face-circle is the
//! circle orthogonal to all three vertex-circles; `h` is the signed distance
//! of its center to each edge (positive towards the triangle) and `d` the
//! signed distance from each endpoint to the projection of the center onto
//! the edge.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::mesh::{FaceId, Mesh};
use crate::metric::{triangle_violation, DecoratedMetric};

/// Largest excursion of a law-of-cosines argument outside `[-1, 1]` that is
/// silently clamped.
const COS_CLAMP: f64 = 1e-12;

/// Inner angles opposite `l1`, `l2`, `l3`.
pub fn inner_angles(l1: f64, l2: f64, l3: f64) -> Result<[f64; 3]> {
    let l = [l1, l2, l3];
    if triangle_violation(l, 0.0).is_some() {
        return Err(Error::DegenerateTriangle { lengths: l });
    }
    let mut out = [0.0; 3];
    for a in 0..3 {
        let (opp, p, q) = (l[a], l[(a + 1) % 3], l[(a + 2) % 3]);
        let c = (p * p + q * q - opp * opp) / (2.0 * p * q);
        if c.abs() > 1.0 + COS_CLAMP {
            return Err(Error::DegenerateTriangle { lengths: l });
        }
        out[a] = c.clamp(-1.0, 1.0).acos();
    }
    if out.iter().any(|&t| t <= 0.0 || t >= PI) {
        return Err(Error::DegenerateTriangle { lengths: l });
    }
    Ok(out)
}

/// Signed distance from vertex `i` to the center of edge `ij`:
/// `(ri² + ri rj I) / l`.
pub fn edge_split_distance(ri: f64, rj: f64, inv: f64, l: f64) -> f64 {
    (ri * ri + ri * rj * inv) / l
}

/// Signed height of the face-circle center over edge `ij`, from the two edge
/// center distances at `i` and the inner angle there.
pub fn center_height(d_ik: f64, d_ij: f64, theta_i: f64) -> f64 {
    (d_ik - d_ij * theta_i.cos()) / theta_i.sin()
}

/// Signed dual-cell area at corner `i`: `½ l_ij h_ij + ½ l_ki h_ki`.
pub fn corner_area(l_ij: f64, h_ij: f64, l_ki: f64, h_ki: f64) -> f64 {
    0.5 * l_ij * h_ij + 0.5 * l_ki * h_ki
}

/// `½ l_ij l_jk sin θ_j`.
pub fn triangle_area(l_ij: f64, l_jk: f64, theta_j: f64) -> f64 {
    0.5 * l_ij * l_jk * theta_j.sin()
}

/// Every per-face quantity of a decorated triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleGeometry {
    /// Current vertex radii `(r_i, r_j, r_k)`.
    pub radii: [f64; 3],
    /// Inversive distances of `(ij, jk, ki)`.
    pub inversive: [f64; 3],
    /// `(l_ij, l_jk, l_ki)`.
    pub lengths: [f64; 3],
    /// Inner angles at `(i, j, k)`.
    pub angles: [f64; 3],
    /// Per edge `ab`: `[d_ab, d_ba]`.
    pub split: [[f64; 2]; 3],
    /// Per edge `ab`: signed height `h_ab` of the face-circle center.
    pub heights: [f64; 3],
    pub face_circle_radius: f64,
    /// Per edge: half the chord cut from the edge line by the face-circle.
    pub half_chords: [f64; 3],
    /// Per edge: intersection angle of face-circle and edge, in `(0, π)`.
    pub alphas: [f64; 3],
    pub area: f64,
    /// Signed dual-cell area at each corner.
    pub corner_areas: [f64; 3],
}

impl TriangleGeometry {
    /// `radii` are the current radii at `(i, j, k)`, `inversive` the
    /// inversive distances of `(ij, jk, ki)`.
    pub fn new(radii: [f64; 3], inversive: [f64; 3]) -> Result<Self> {
        let mut lengths = [0.0; 3];
        for a in 0..3 {
            let (ri, rj) = (radii[a], radii[(a + 1) % 3]);
            lengths[a] = (ri * ri + rj * rj + 2.0 * inversive[a] * ri * rj).sqrt();
        }
        // inner_angles returns angles opposite its arguments: l_jk is opposite i
        let angles = inner_angles(lengths[1], lengths[2], lengths[0])?;

        let mut split = [[0.0; 2]; 3];
        for a in 0..3 {
            let b = (a + 1) % 3;
            split[a] = [
                edge_split_distance(radii[a], radii[b], inversive[a], lengths[a]),
                edge_split_distance(radii[b], radii[a], inversive[a], lengths[a]),
            ];
        }

        let mut heights = [0.0; 3];
        for a in 0..3 {
            // d from corner a along the edge that ends at a
            let d_other = split[(a + 2) % 3][1];
            heights[a] = center_height(d_other, split[a][0], angles[a]);
        }

        let mut half_chords = [0.0; 3];
        let mut radius_sq = 0.0;
        for a in 0..3 {
            let chord_sq = split[a][0] * split[a][0] - radii[a] * radii[a];
            if !(chord_sq > 0.0) {
                return Err(Error::NoOrthogonalCircle { radius_sq: chord_sq });
            }
            half_chords[a] = chord_sq.sqrt();
            radius_sq += chord_sq + heights[a] * heights[a];
        }
        radius_sq /= 3.0;
        if !(radius_sq > 0.0) {
            return Err(Error::NoOrthogonalCircle { radius_sq });
        }
        let face_circle_radius = radius_sq.sqrt();
        let alphas = std::array::from_fn(|a| half_chords[a].atan2(heights[a]));

        let area = triangle_area(lengths[0], lengths[1], angles[1]);
        let corner_areas = std::array::from_fn(|a| {
            let c = (a + 2) % 3;
            corner_area(lengths[a], heights[a], lengths[c], heights[c])
        });

        Ok(TriangleGeometry {
            radii,
            inversive,
            lengths,
            angles,
            split,
            heights,
            face_circle_radius,
            half_chords,
            alphas,
            area,
            corner_areas,
        })
    }

    /// `∂θ_a / ∂u_b`: symmetric, off-diagonal `h_ab / l_ab`, rows summing to 0.
    pub fn angle_derivatives(&self) -> [[f64; 3]; 3] {
        let mut m = [[0.0; 3]; 3];
        for a in 0..3 {
            let b = (a + 1) % 3;
            let w = self.heights[a] / self.lengths[a];
            m[a][b] = w;
            m[b][a] = w;
        }
        for a in 0..3 {
            m[a][a] = -(m[a][(a + 1) % 3] + m[a][(a + 2) % 3]);
        }
        m
    }

    /// Heights from the curvature form
    /// `h_ab = r_a² r_b² r_c² κ_c h_c / (2 A l_ab)` with
    /// `h_c = κ_c (1 - I_ab²) + κ_a γ_b + κ_b γ_a` and
    /// `γ_a = I_bc + I_ab I_ca`. Used as an independent check of
    /// [`TriangleGeometry::heights`].
    pub fn heights_via_curvatures(&self) -> [f64; 3] {
        let kappa = self.radii.map(|r| 1.0 / r);
        let inv = self.inversive;
        // corner a is opposite edge a + 1 and touches edges a and a + 2
        let gamma: [f64; 3] = std::array::from_fn(|a| inv[(a + 1) % 3] + inv[a] * inv[(a + 2) % 3]);
        let r2: f64 = self.radii.iter().map(|r| r * r).product();
        std::array::from_fn(|a| {
            let b = (a + 1) % 3;
            let c = (a + 2) % 3;
            let h_c = kappa[c] * (1.0 - inv[a] * inv[a]) + kappa[a] * gamma[b] + kappa[b] * gamma[a];
            r2 * kappa[c] * h_c / (2.0 * self.area * self.lengths[a])
        })
    }
}

/// Geometry of face `f` at the metric's current conformal factor.
pub fn face_geometry(mesh: &Mesh, dm: &DecoratedMetric, f: FaceId) -> Result<TriangleGeometry> {
    let radii = mesh.face_vertices(f).map(|v| dm.radius(v));
    let inv = mesh.face_edges(f).map(|e| dm.inversive_distance(e));
    TriangleGeometry::new(radii, inv)
}
