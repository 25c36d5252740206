//! JSON surface and result files.
//!
//! A surface file lists vertex radii, oriented faces and one metric datum per
//! edge:
//!
//! ```json
//! {
//!   "vertices": [{"id": 0, "radius": 1.0}],
//!   "faces": [[0, 0, 0], [0, 0, 0]],
//!   "edges": [
//!     {"halfedges": [0, 4], "v": [0, 0], "inversive_distance": 2.0},
//!     {"halfedges": [1, 5], "v": [0, 0], "inversive_distance": 2.0},
//!     {"halfedges": [2, 3], "v": [0, 0], "length": 2.449489742783178}
//!   ]
//! }
//! ```
//!
//! Half-edge `3f + c` runs from `faces[f][c]` to `faces[f][(c+1) % 3]`. An
//! edge's optional `halfedges` pair glues those two half-edges; edges without
//! it are glued by matching oriented endpoints. Edges are enumerated in the
//! canonical order of their lowest half-edge id, and an edge record without
//! `halfedges` is matched to the `side`-th (default 0) edge joining `v` in
//! that order.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mesh::{EdgeId, Mesh};
use crate::metric::{inversive_distance, DecoratedMetric};
use crate::uniformizer::UniformizeResult;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VertexRecord {
    pub id: usize,
    pub radius: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub halfedges: Option<[usize; 2]>,
    pub v: [usize; 2],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inversive_distance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfaceFile {
    pub vertices: Vec<VertexRecord>,
    pub faces: Vec<[usize; 3]>,
    pub edges: Vec<EdgeRecord>,
}

/// Parse failures are kept apart from semantic ones so the CLI can map
/// them to different exit codes.
#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Parse(#[from] serde_json::Error),
    #[error(transparent)]
    Invalid(#[from] Error),
}

impl SurfaceFile {
    pub fn from_json(text: &str) -> std::result::Result<Self, LoadError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: impl AsRef<Path>) -> std::result::Result<Self, LoadError> {
        Self::from_json(&read(path.as_ref())?)
    }

    /// Builds the mesh and metric. Inversive distances are taken as given;
    /// lengths are converted using the vertex radii.
    pub fn build(&self) -> Result<(Mesh, DecoratedMetric)> {
        let n = self.vertices.len();
        let mut radii = vec![f64::NAN; n];
        for rec in &self.vertices {
            if rec.id >= n || !radii[rec.id].is_nan() {
                return Err(Error::InvalidInput(format!(
                    "vertex ids must be 0..{n} without repeats (got {})",
                    rec.id
                )));
            }
            if !(rec.radius > 0.0 && rec.radius.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "vertex {} has radius {}",
                    rec.id, rec.radius
                )));
            }
            radii[rec.id] = rec.radius;
        }

        let pairs: Vec<(usize, usize)> =
            self.edges.iter().filter_map(|e| e.halfedges.map(|[a, b]| (a, b))).collect();
        let mesh = Mesh::from_glued_faces(&self.faces, n, &pairs)?;

        let mut inv = vec![f64::NAN; mesh.edge_count()];
        for (k, rec) in self.edges.iter().enumerate() {
            let e = self.locate(&mesh, k, rec)?;
            if !inv[e.0].is_nan() {
                return Err(Error::InvalidInput(format!(
                    "edge record {k} addresses mesh edge {e}, which already has a datum"
                )));
            }
            let [a, b] = rec.v;
            inv[e.0] = match (rec.length, rec.inversive_distance) {
                (Some(l), None) => {
                    if !(l > 0.0 && l.is_finite()) {
                        return Err(Error::InvalidInput(format!("edge record {k} has length {l}")));
                    }
                    inversive_distance(l, radii[a], radii[b])
                }
                (None, Some(i)) => i,
                _ => {
                    return Err(Error::InvalidInput(format!(
                        "edge record {k} needs exactly one of length or inversive_distance"
                    )))
                }
            };
        }
        if let Some(e) = inv.iter().position(|x| x.is_nan()) {
            let [a, b] = mesh.edge_endpoints(EdgeId(e));
            return Err(Error::InvalidInput(format!("mesh edge {e} ({a}, {b}) has no metric datum")));
        }
        let dm = DecoratedMetric::new(&mesh, radii, inv)?;
        Ok((mesh, dm))
    }

    fn locate(&self, mesh: &Mesh, k: usize, rec: &EdgeRecord) -> Result<EdgeId> {
        let [a, b] = rec.v;
        let joins = |e: EdgeId| {
            let [p, q] = mesh.edge_endpoints(e);
            (p.0, q.0) == (a, b) || (p.0, q.0) == (b, a)
        };
        let e = match rec.halfedges {
            Some([h, _]) => mesh.edge_of(crate::mesh::HalfEdgeId(h)),
            None => {
                let side = rec.side.unwrap_or(0);
                mesh.edges().filter(|&e| joins(e)).nth(side).ok_or_else(|| {
                    Error::InvalidInput(format!(
                        "edge record {k}: no edge number {side} between {a} and {b}"
                    ))
                })?
            }
        };
        if !joins(e) {
            return Err(Error::InvalidInput(format!(
                "edge record {k} says ({a}, {b}) but its half-edges join {:?}",
                mesh.edge_endpoints(e)
            )));
        }
        Ok(e)
    }

    /// Describes a mesh and metric; every edge is written with its
    /// half-edges and inversive distance. The conformal factor is folded into
    /// the radii. Half-edges are numbered by their position in the written
    /// face list, which after flips differs from the mesh's internal ids.
    pub fn from_surface(mesh: &Mesh, dm: &DecoratedMetric) -> SurfaceFile {
        let mut position = vec![0; mesh.half_edge_count()];
        for f in mesh.faces() {
            for (c, h) in mesh.face_half_edges(f).into_iter().enumerate() {
                position[h.0] = 3 * f.0 + c;
            }
        }
        SurfaceFile {
            vertices: dm
                .radii()
                .into_iter()
                .enumerate()
                .map(|(id, radius)| VertexRecord { id, radius })
                .collect(),
            faces: mesh.face_list(),
            edges: mesh
                .edges()
                .map(|e| {
                    let [h0, h1] = mesh.edge_half_edges(e);
                    let [p, q] = mesh.edge_endpoints(e);
                    EdgeRecord {
                        halfedges: Some([position[h0.0], position[h1.0]]),
                        v: [p.0, q.0],
                        side: None,
                        length: None,
                        inversive_distance: Some(dm.inversive_distance(e)),
                    }
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("surface file serializes")
    }
}

fn read(path: &Path) -> std::result::Result<String, LoadError> {
    std::fs::read_to_string(path)
        .map_err(|source| LoadError::Io { path: path.display().to_string(), source })
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ConformalFactorFile {
    Bare(Vec<f64>),
    Wrapped { u: Vec<f64> },
}

/// Reads a conformal factor: either a bare array or an object with a `u`
/// array (so a result file can be fed back in).
pub fn parse_conformal_factor(text: &str) -> std::result::Result<Vec<f64>, LoadError> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    match serde_json::from_value(value)? {
        ConformalFactorFile::Bare(u) | ConformalFactorFile::Wrapped { u } => Ok(u),
    }
}

pub fn load_conformal_factor(path: impl AsRef<Path>) -> std::result::Result<Vec<f64>, LoadError> {
    parse_conformal_factor(&read(path.as_ref())?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultFile {
    pub u: Vec<f64>,
    pub faces: Vec<[usize; 3]>,
    #[serde(rename = "K")]
    pub k: Vec<f64>,
    #[serde(rename = "W")]
    pub w: Vec<f64>,
    #[serde(rename = "A")]
    pub a: Vec<f64>,
    #[serde(rename = "K_bar")]
    pub k_bar: f64,
    #[serde(rename = "A_tot")]
    pub a_tot: f64,
    pub iterations: usize,
    pub residual: f64,
    pub flips: usize,
    pub chi: i64,
    pub converged: bool,
    pub residual_history: Vec<f64>,
    pub flips_per_iteration: Vec<usize>,
}

impl From<&UniformizeResult> for ResultFile {
    fn from(r: &UniformizeResult) -> Self {
        ResultFile {
            u: r.u.clone(),
            faces: r.mesh.face_list(),
            k: r.curvatures.clone(),
            w: r.angle_defects.clone(),
            a: r.areas.clone(),
            k_bar: r.k_bar,
            a_tot: r.total_area,
            iterations: r.iterations,
            residual: r.residual,
            flips: r.total_flips(),
            chi: r.euler_characteristic,
            converged: r.converged,
            residual_history: r.residual_history(),
            flips_per_iteration: r.flips_per_iteration(),
        }
    }
}

impl ResultFile {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result file serializes")
    }
}
