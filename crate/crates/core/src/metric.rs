//! Decorated piecewise Euclidean metrics and the discrete conformal action.
//!
//! The canonical data are the reference radii `r0`, one inversive distance
//! `I_ij` per edge and the conformal factor `u`. Current radii are
//! `r_i = e^{u_i} r0_i` and lengths are always derived as
//! `l_ij = sqrt(r_i² + r_j² + 2 I_ij r_i r_j)`. Inversive distances do not
//! change under the conformal action, and they are carried along when edges
//! are flipped.

use crate::error::{Error, Result};
use crate::mesh::{EdgeId, FaceId, Mesh, VertexId};

/// `(l² - ri² - rj²) / (2 ri rj)`.
pub fn inversive_distance(l: f64, ri: f64, rj: f64) -> f64 {
    (l * l - ri * ri - rj * rj) / (2.0 * ri * rj)
}

/// Length of an edge between vertex-circles of radii `ri`, `rj` at inversive
/// distance `inv`.
pub fn edge_length(ri: f64, rj: f64, inv: f64) -> Result<f64> {
    if !(inv > 1.0) {
        return Err(Error::InvalidInversiveDistance { value: inv });
    }
    Ok((ri * ri + rj * rj + 2.0 * inv * ri * rj).sqrt())
}

/// Length after a conformal change, written in terms of the reference
/// length and radii instead of the inversive distance:
/// `l̃² = (e^{2ui} - e^{ui+uj}) ri² + (e^{2uj} - e^{ui+uj}) rj² + e^{ui+uj} l²`.
pub fn conformal_length(l: f64, ri: f64, rj: f64, ui: f64, uj: f64) -> f64 {
    let mixed = (ui + uj).exp();
    let sq = ((2.0 * ui).exp() - mixed) * ri * ri
        + ((2.0 * uj).exp() - mixed) * rj * rj
        + mixed * l * l;
    sq.sqrt()
}

/// Tolerances used by [`validate_metric`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricTolerances {
    /// An edge is flagged when `I <= 1 + separation`.
    pub separation: f64,
    /// A face is flagged when a triangle inequality fails by more than
    /// `triangle * perimeter`.
    pub triangle: f64,
}

impl Default for MetricTolerances {
    fn default() -> Self {
        MetricTolerances { separation: 1e-9, triangle: 1e-12 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    /// The vertex-circles at the ends of the edge are not separated.
    Separation { edge: EdgeId, inversive_distance: f64 },
    /// The face lengths violate a strict triangle inequality.
    TriangleInequality { face: FaceId, lengths: [f64; 3] },
    /// A reference radius is not a positive finite number.
    Radius { vertex: VertexId, radius: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::Separation { edge, inversive_distance } => {
                write!(f, "edge {edge}: inversive distance {inversive_distance} <= 1")
            }
            Violation::TriangleInequality { face, lengths } => {
                write!(f, "face {face}: lengths {lengths:?} violate the triangle inequality")
            }
            Violation::Radius { vertex, radius } => {
                write!(f, "vertex {vertex}: radius {radius} is not positive")
            }
        }
    }
}

/// Radii, inversive distances and conformal factor of a decorated surface.
#[derive(Debug, Clone, PartialEq)]
pub struct DecoratedMetric {
    r0: Vec<f64>,
    inv: Vec<f64>,
    /// `arccosh(inv)`, kept in sync with `inv`.
    lambda: Vec<f64>,
    u: Vec<f64>,
}

impl DecoratedMetric {
    /// Metric from reference radii (per vertex) and inversive distances (per
    /// edge, in edge id order), with `u = 0`.
    ///
    /// Only the shape of the data is checked here; use [`validate_metric`]
    /// for the separation and triangle conditions.
    pub fn new(mesh: &Mesh, r0: Vec<f64>, inv: Vec<f64>) -> Result<Self> {
        if r0.len() != mesh.vertex_count() {
            return Err(Error::InvalidInput(format!(
                "{} radii for {} vertices",
                r0.len(),
                mesh.vertex_count()
            )));
        }
        if inv.len() != mesh.edge_count() {
            return Err(Error::InvalidInput(format!(
                "{} inversive distances for {} edges",
                inv.len(),
                mesh.edge_count()
            )));
        }
        if let Some(r) = r0.iter().find(|r| !(r.is_finite() && **r > 0.0)) {
            return Err(Error::InvalidInput(format!("radius {r} is not positive")));
        }
        let lambda = inv.iter().map(|&i| arccosh(i)).collect();
        let u = vec![0.0; r0.len()];
        Ok(DecoratedMetric { r0, inv, lambda, u })
    }

    /// Metric from reference radii and edge lengths; lengths are converted to
    /// inversive distances once.
    pub fn from_lengths(mesh: &Mesh, r0: Vec<f64>, lengths: &[f64]) -> Result<Self> {
        if lengths.len() != mesh.edge_count() {
            return Err(Error::InvalidInput(format!(
                "{} lengths for {} edges",
                lengths.len(),
                mesh.edge_count()
            )));
        }
        let inv = mesh
            .edges()
            .map(|e| {
                let [a, b] = mesh.edge_endpoints(e);
                inversive_distance(lengths[e.0], r0[a.0], r0[b.0])
            })
            .collect();
        Self::new(mesh, r0, inv)
    }

    /// Same radius everywhere and same inversive distance on every edge.
    pub fn uniform(mesh: &Mesh, radius: f64, inv: f64) -> Result<Self> {
        Self::new(mesh, vec![radius; mesh.vertex_count()], vec![inv; mesh.edge_count()])
    }

    pub fn vertex_count(&self) -> usize {
        self.r0.len()
    }

    pub fn reference_radii(&self) -> &[f64] {
        &self.r0
    }

    pub fn inversive_distances(&self) -> &[f64] {
        &self.inv
    }

    pub fn inversive_distance(&self, e: EdgeId) -> f64 {
        self.inv[e.0]
    }

    /// `λ_ij = arccosh(I_ij)`, the hyperbolic distance between the truncation
    /// planes over the two vertex-circles.
    pub fn lambda(&self, e: EdgeId) -> f64 {
        self.lambda[e.0]
    }

    pub fn conformal_factor(&self) -> &[f64] {
        &self.u
    }

    /// Current radius `e^{u_i} r0_i`.
    pub fn radius(&self, v: VertexId) -> f64 {
        self.u[v.0].exp() * self.r0[v.0]
    }

    /// `log r_i = u_i + log r0_i`.
    pub fn log_radius(&self, v: VertexId) -> f64 {
        self.u[v.0] + self.r0[v.0].ln()
    }

    pub fn radii(&self) -> Vec<f64> {
        (0..self.r0.len()).map(|i| self.radius(VertexId(i))).collect()
    }

    /// Current length of `e` in `mesh`.
    pub fn length(&self, mesh: &Mesh, e: EdgeId) -> f64 {
        let [a, b] = mesh.edge_endpoints(e);
        let (ri, rj) = (self.radius(a), self.radius(b));
        (ri * ri + rj * rj + 2.0 * self.inv[e.0] * ri * rj).sqrt()
    }

    /// Returns the metric with `u` replaced by `u + du`.
    pub fn apply_conformal_factor(&self, du: &[f64]) -> DecoratedMetric {
        assert_eq!(du.len(), self.u.len(), "conformal factor has wrong length");
        let mut out = self.clone();
        for (u, d) in out.u.iter_mut().zip(du) {
            *u += d;
        }
        out
    }

    /// Returns the metric with `u` replaced by `u`.
    pub fn with_conformal_factor(&self, u: &[f64]) -> DecoratedMetric {
        assert_eq!(u.len(), self.u.len(), "conformal factor has wrong length");
        let mut out = self.clone();
        out.u.copy_from_slice(u);
        out
    }

    /// Adds `c` to every entry of `u`.
    pub fn shift_conformal_factor(&mut self, c: f64) {
        self.u.iter_mut().for_each(|u| *u += c);
    }

    pub(crate) fn set_inversive_distance(&mut self, e: EdgeId, value: f64) {
        self.inv[e.0] = value;
        self.lambda[e.0] = arccosh(value);
    }
}

fn arccosh(x: f64) -> f64 {
    if x >= 1.0 {
        x.acosh()
    } else {
        f64::NAN
    }
}

/// Per-edge lengths at the metric's current conformal factor.
pub fn lengths_at(mesh: &Mesh, dm: &DecoratedMetric) -> Vec<f64> {
    mesh.edges().map(|e| dm.length(mesh, e)).collect()
}

/// Lists separation and triangle-inequality violations.
pub fn validate_metric(
    mesh: &Mesh,
    dm: &DecoratedMetric,
    tol: MetricTolerances,
) -> Vec<Violation> {
    let mut out = Vec::new();
    for v in mesh.vertices() {
        let r = dm.radius(v);
        if !(r.is_finite() && r > 0.0) {
            out.push(Violation::Radius { vertex: v, radius: r });
        }
    }
    for e in mesh.edges() {
        let inv = dm.inversive_distance(e);
        if !(inv > 1.0 + tol.separation) {
            out.push(Violation::Separation { edge: e, inversive_distance: inv });
        }
    }
    let lengths = lengths_at(mesh, dm);
    for f in mesh.faces() {
        let l = mesh.face_edges(f).map(|e| lengths[e.0]);
        if let Some(violation) = triangle_violation(l, tol.triangle) {
            out.push(Violation::TriangleInequality { face: f, lengths: violation });
        }
    }
    out
}

/// `Some(lengths)` if the lengths fail a strict triangle inequality by more
/// than `rel * perimeter`.
pub(crate) fn triangle_violation(l: [f64; 3], rel: f64) -> Option<[f64; 3]> {
    let perimeter = l[0] + l[1] + l[2];
    let slack = rel * perimeter;
    let ok = (0..3).all(|a| {
        let others = l[(a + 1) % 3] + l[(a + 2) % 3];
        l[a].is_finite() && l[a] > 0.0 && others - l[a] > -slack
    });
    (!ok).then_some(l)
}
