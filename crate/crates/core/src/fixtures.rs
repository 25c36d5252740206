//! Small reference surfaces used throughout tests and examples.
//!
//! * `T1`: one-vertex torus, a square with opposite sides glued and one
//!   diagonal (1 vertex, 3 edges, 2 faces).
//! * `G2`: genus-two surface, an octagon with side word `a b a⁻¹ b⁻¹ c d c⁻¹ d⁻¹`
//!   fanned from a center vertex (2 vertices, 12 edges, 8 faces).
//! * `equilateral_metric`: every radius 1 and every inversive distance 2,
//!   which makes every edge `√6` long and every face equilateral.

use crate::mesh::Mesh;
use crate::metric::DecoratedMetric;

/// Faces and explicit twin pairs of the one-vertex torus.
pub fn one_vertex_torus_gluing() -> (Vec<[usize; 3]>, Vec<(usize, usize)>) {
    // face 0: bottom, right, diagonal; face 1: diagonal, top, left
    let faces = vec![[0, 0, 0], [0, 0, 0]];
    let pairs = vec![(0, 4), (1, 5), (2, 3)];
    (faces, pairs)
}

pub fn one_vertex_torus() -> Mesh {
    let (faces, pairs) = one_vertex_torus_gluing();
    Mesh::from_glued_faces(&faces, 1, &pairs).expect("T1 fixture is valid")
}

/// Faces and explicit twin pairs of the two-vertex genus-two fan.
///
/// Vertex 0 is the center, vertex 1 the identified octagon corners. Face `k`
/// is `(center, Q_k, Q_{k+1})`; half-edge `3k` is spoke `k`, `3k + 1` is side
/// `k`, `3k + 2` is spoke `k + 1` reversed.
pub fn genus_two_fan_gluing() -> (Vec<[usize; 3]>, Vec<(usize, usize)>) {
    let faces = vec![[0, 1, 1]; 8];
    let mut pairs: Vec<(usize, usize)> = (0..8).map(|k| (3 * k + 2, 3 * ((k + 1) % 8))).collect();
    // sides 0/2, 1/3, 4/6, 5/7 are glued with opposite orientation
    for (s, t) in [(0, 2), (1, 3), (4, 6), (5, 7)] {
        pairs.push((3 * s + 1, 3 * t + 1));
    }
    (faces, pairs)
}

pub fn genus_two_fan() -> Mesh {
    let (faces, pairs) = genus_two_fan_gluing();
    Mesh::from_glued_faces(&faces, 2, &pairs).expect("G2 fixture is valid")
}

/// Regular icosahedron face list (χ = 2).
pub fn icosahedron_faces() -> Vec<[usize; 3]> {
    vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ]
}

pub fn icosahedron() -> Mesh {
    Mesh::from_faces(&icosahedron_faces(), 12).expect("icosahedron fixture is valid")
}

/// Every radius 1, every inversive distance 2, `u = 0`.
pub fn equilateral_metric(mesh: &Mesh) -> DecoratedMetric {
    DecoratedMetric::uniform(mesh, 1.0, 2.0).expect("equilateral metric is valid")
}
