//! Weighted Delaunay predicate and the edge-flip algorithm.
//!
//! An edge is weighted Delaunay when the face-circle centers of its two
//! triangles satisfy `h_ij^k + h_ij^l >= 0`; equivalently the two
//! intersection angles satisfy `α_ij^k + α_ij^l <= π`. Flipping keeps the
//! decorated surface fixed: the new diagonal is measured in the planar layout
//! of the quadrilateral, and its inversive distance is computed from the
//! current radii.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use log::debug;

use crate::error::{Error, Result};
use crate::mesh::{EdgeId, FaceId, HalfEdgeId, Mesh};
use crate::metric::{inversive_distance, lengths_at, DecoratedMetric};
use crate::trigeom::{face_geometry, inner_angles, TriangleGeometry};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelaunayOptions {
    /// Predicate tolerance relative to the mean edge length.
    pub relative_tolerance: f64,
    /// Flips allowed per call, as a multiple of the edge count.
    pub flip_cap_factor: usize,
}

impl Default for DelaunayOptions {
    fn default() -> Self {
        DelaunayOptions { relative_tolerance: 1e-10, flip_cap_factor: 100 }
    }
}

/// `true` iff `h_k + h_l >= -tol`.
pub fn edge_is_delaunay(h_k: f64, h_l: f64, tol: f64) -> bool {
    h_k + h_l >= -tol
}

/// Absolute predicate tolerance: `relative * mean edge length`.
pub fn delaunay_tolerance(mesh: &Mesh, dm: &DecoratedMetric, relative: f64) -> f64 {
    let lengths = lengths_at(mesh, dm);
    relative * lengths.iter().sum::<f64>() / lengths.len() as f64
}

fn corner_position(mesh: &Mesh, h: HalfEdgeId) -> usize {
    let f = mesh.face_of(h);
    mesh.face_half_edges(f)
        .iter()
        .position(|&x| x == h)
        .expect("half-edge belongs to its face")
}

fn height_sum_from(mesh: &Mesh, geoms: &[TriangleGeometry], e: EdgeId) -> f64 {
    mesh.edge_half_edges(e)
        .iter()
        .map(|&h| geoms[mesh.face_of(h).0].heights[corner_position(mesh, h)])
        .sum()
}

/// Geometry of every face, in face id order.
pub fn face_geometries(mesh: &Mesh, dm: &DecoratedMetric) -> Result<Vec<TriangleGeometry>> {
    mesh.faces().map(|f| face_geometry(mesh, dm, f)).collect()
}

/// `h_ij^k + h_ij^l` for every edge.
pub fn height_sums(mesh: &Mesh, dm: &DecoratedMetric) -> Result<Vec<f64>> {
    let geoms = face_geometries(mesh, dm)?;
    Ok(mesh.edges().map(|e| height_sum_from(mesh, &geoms, e)).collect())
}

/// `α_ij^k + α_ij^l` for every edge.
pub fn alpha_sums(mesh: &Mesh, dm: &DecoratedMetric) -> Result<Vec<f64>> {
    let geoms = face_geometries(mesh, dm)?;
    Ok(mesh
        .edges()
        .map(|e| {
            mesh.edge_half_edges(e)
                .iter()
                .map(|&h| geoms[mesh.face_of(h).0].alphas[corner_position(mesh, h)])
                .sum()
        })
        .collect())
}

/// Planar layout of the two triangles on either side of an edge `ij`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadLayout {
    pub i: [f64; 2],
    pub j: [f64; 2],
    /// Apex of the face containing the edge's lower half-edge (above the x-axis).
    pub k: [f64; 2],
    /// Apex of the other face (below the x-axis).
    pub l: [f64; 2],
    /// `|k - l|`.
    pub diagonal: f64,
}

impl QuadLayout {
    /// `true` if `i` and `j` lie strictly on opposite sides of the line `kl`,
    /// i.e. the quadrilateral `i l j k` is strictly convex at `i` and `j`.
    pub fn is_convex(&self) -> bool {
        let cross = |p: [f64; 2]| {
            (self.l[0] - self.k[0]) * (p[1] - self.k[1]) - (self.l[1] - self.k[1]) * (p[0] - self.k[0])
        };
        let (ci, cj) = (cross(self.i), cross(self.j));
        let scale = self.diagonal * self.j[0];
        ci * cj < 0.0 && ci.abs().min(cj.abs()) > 1e-14 * scale
    }
}

/// Lays out the faces on both sides of `e` with `i` at the origin, `j` on the
/// positive x-axis, `k` above and `l` below.
pub fn layout_quad(mesh: &Mesh, lengths: &[f64], e: EdgeId) -> Result<QuadLayout> {
    let [a, b] = mesh.edge_half_edges(e);
    let len = |h: HalfEdgeId| lengths[mesh.edge_of(h).0];
    let l_ij = len(a);
    let l_jk = len(mesh.next(a));
    let l_ki = len(mesh.next(mesh.next(a)));
    let l_il = len(mesh.next(b));
    let l_lj = len(mesh.next(mesh.next(b)));
    inner_angles(l_ij, l_jk, l_ki)?;
    inner_angles(l_ij, l_il, l_lj)?;

    let apex = |side_i: f64, side_j: f64, sign: f64| {
        let x = (l_ij * l_ij + side_i * side_i - side_j * side_j) / (2.0 * l_ij);
        let y = (side_i * side_i - x * x).max(0.0).sqrt();
        [x, sign * y]
    };
    let k = apex(l_ki, l_jk, 1.0);
    let l = apex(l_il, l_lj, -1.0);
    let diagonal = ((k[0] - l[0]).powi(2) + (k[1] - l[1]).powi(2)).sqrt();
    Ok(QuadLayout { i: [0.0, 0.0], j: [l_ij, 0.0], k, l, diagonal })
}

/// Flips `e` in the fixed decorated surface and stores the inversive
/// distance of the new diagonal. Returns that inversive distance.
pub fn flip_edge_metric(mesh: &mut Mesh, dm: &mut DecoratedMetric, e: EdgeId) -> Result<f64> {
    let [a, b] = mesh.edge_half_edges(e);
    let (fa, fb) = (mesh.face_of(a), mesh.face_of(b));
    if fa == fb {
        return Err(Error::FlipIllegal { edge: e.0, face: fa.0 });
    }
    let lengths = lengths_at(mesh, dm);
    let quad = layout_quad(mesh, &lengths, e)?;
    if !quad.is_convex() {
        return Err(Error::DegenerateTriangle {
            lengths: [quad.diagonal, lengths[mesh.edge_of(mesh.next(mesh.next(a))).0], lengths[mesh.edge_of(mesh.next(b)).0]],
        });
    }
    let [k, l] = mesh.opposite_vertices(e);
    let value = inversive_distance(quad.diagonal, dm.radius(k), dm.radius(l));
    if !(value > 1.0) {
        return Err(Error::SeparationLost { edge: e.0, value });
    }
    mesh.flip_edge(e)?;
    dm.set_inversive_distance(e, value);
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlipRecord {
    pub edge: EdgeId,
    /// `h_ij^k + h_ij^l` just before the flip; always below `-tolerance`.
    pub height_sum: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct FlipLog {
    pub flips: Vec<FlipRecord>,
    /// Queue entries examined, including stale ones.
    pub examined: usize,
    /// Absolute predicate tolerance used.
    pub tolerance: f64,
}

impl FlipLog {
    pub fn flip_count(&self) -> usize {
        self.flips.len()
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    height_sum: f64,
    edge: usize,
    version: u64,
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Candidate {
    // max-heap on the most negative height sum; ties broken by lower edge id
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .height_sum
            .total_cmp(&self.height_sum)
            .then_with(|| other.edge.cmp(&self.edge))
    }
}

/// Flips non-weighted-Delaunay edges, most negative height sum first, until
/// every edge satisfies [`edge_is_delaunay`].
pub fn make_weighted_delaunay(
    mesh: &mut Mesh,
    dm: &mut DecoratedMetric,
    opts: &DelaunayOptions,
) -> Result<FlipLog> {
    let tol = delaunay_tolerance(mesh, dm, opts.relative_tolerance);
    let limit = opts.flip_cap_factor * mesh.edge_count();
    let mut geoms = face_geometries(mesh, dm)?;
    let mut version = vec![0u64; mesh.edge_count()];
    let mut heap = BinaryHeap::new();
    for e in mesh.edges() {
        let height_sum = height_sum_from(mesh, &geoms, e);
        if height_sum < -tol {
            heap.push(Candidate { height_sum, edge: e.0, version: 0 });
        }
    }

    let mut log = FlipLog { tolerance: tol, ..FlipLog::default() };
    while let Some(c) = heap.pop() {
        log.examined += 1;
        if c.version != version[c.edge] {
            continue;
        }
        if log.flips.len() >= limit {
            return Err(Error::FlipLimitExceeded { limit });
        }
        let e = EdgeId(c.edge);
        flip_edge_metric(mesh, dm, e)?;
        log.flips.push(FlipRecord { edge: e, height_sum: c.height_sum });
        debug!("flipped edge {} (height sum {:e})", e, c.height_sum);

        let [a, b] = mesh.edge_half_edges(e);
        let touched: [FaceId; 2] = [mesh.face_of(a), mesh.face_of(b)];
        for f in touched {
            geoms[f.0] = face_geometry(mesh, dm, f)?;
        }
        for f in touched {
            for g in mesh.face_edges(f) {
                version[g.0] += 1;
                let height_sum = height_sum_from(mesh, &geoms, g);
                if height_sum < -tol {
                    heap.push(Candidate { height_sum, edge: g.0, version: version[g.0] });
                }
            }
        }
    }
    Ok(log)
}

/// `true` if every face is a valid decorated triangle and every edge passes
/// the predicate at the state's own tolerance.
fn is_weighted_delaunay(mesh: &Mesh, dm: &DecoratedMetric, opts: &DelaunayOptions) -> bool {
    let tol = delaunay_tolerance(mesh, dm, opts.relative_tolerance);
    match face_geometries(mesh, dm) {
        Ok(geoms) => mesh.edges().all(|e| height_sum_from(mesh, &geoms, e) >= -tol),
        Err(_) => false,
    }
}

/// Largest change of `u` in one leg of [`conformal_flow`]. Legs are checked
/// only at their ends, so this bounds how far an edge can leave and re-enter
/// the Delaunay region unnoticed.
const FLOW_LEG: f64 = 0.05;

/// Moves the conformal factor to `target` along a straight segment, flipping
/// each edge at the moment it stops being weighted Delaunay.
///
/// Scaling radii in a fixed triangulation only describes the conformal class
/// while that triangulation stays weighted Delaunay; past that point the
/// surface must be retriangulated first. The crossing point is located by
/// bisection and the flip is done there, where the quadrilateral is still
/// nearly flat. The mesh is made weighted Delaunay at the starting factor
/// before moving.
pub fn conformal_flow(
    mesh: &mut Mesh,
    dm: &mut DecoratedMetric,
    target: &[f64],
    opts: &DelaunayOptions,
) -> Result<FlipLog> {
    if target.len() != mesh.vertex_count() {
        return Err(Error::InvalidInput(format!(
            "conformal factor has {} entries for {} vertices",
            target.len(),
            mesh.vertex_count()
        )));
    }
    let mut log = make_weighted_delaunay(mesh, dm, opts)?;
    let limit = opts.flip_cap_factor * mesh.edge_count();
    let start = dm.conformal_factor().to_vec();
    let at = |t: f64| -> Vec<f64> {
        if t == 1.0 {
            return target.to_vec();
        }
        start.iter().zip(target).map(|(a, b)| a + t * (b - a)).collect()
    };
    let span = start.iter().zip(target).map(|(a, b)| (b - a).abs()).fold(0.0, f64::max);
    let legs = (span / FLOW_LEG).ceil().max(1.0) as usize;

    let mut t = 0.0;
    for leg in 1..=legs {
        let t_end = leg as f64 / legs as f64;
        loop {
            let trial = dm.with_conformal_factor(&at(t_end));
            if is_weighted_delaunay(mesh, &trial, opts) {
                *dm = trial;
                t = t_end;
                break;
            }
            let (mut lo, mut hi) = (t, t_end);
            while hi - lo > 1e-15 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if is_weighted_delaunay(mesh, &dm.with_conformal_factor(&at(mid)), opts) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let mut crossing = dm.with_conformal_factor(&at(hi));
            let flips = make_weighted_delaunay(mesh, &mut crossing, opts)?;
            if flips.flip_count() == 0 {
                // the triangulation broke without any edge turning non-Delaunay
                face_geometries(mesh, &crossing)?;
                return Err(Error::InvalidInput(format!(
                    "conformal flow stalled at t = {hi}"
                )));
            }
            log.examined += flips.examined;
            log.flips.extend(flips.flips);
            if log.flips.len() > limit {
                return Err(Error::FlipLimitExceeded { limit });
            }
            *dm = crossing;
            t = hi;
        }
    }
    log.tolerance = delaunay_tolerance(mesh, dm, opts.relative_tolerance);
    Ok(log)
}
