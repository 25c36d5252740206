//! Half-edge representation of a closed, oriented, triangulated marked surface.
//!
//! Loops and parallel edges are allowed: twins are paired by half-edge
//! identity, not by endpoint pairs. Low-vertex surfaces (a one-vertex torus, a
//! two-vertex genus-two surface) need this, and so do the triangulations the
//! flip algorithm produces on them.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

macro_rules! id_type {
    ($(#[$meta:meta])* $name:ident) => {
        $(#[$meta])*
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
        pub struct $name(pub usize);

        impl $name {
            #[inline]
            pub fn index(self) -> usize {
                self.0
            }
        }

        impl fmt::Display for $name {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "{}", self.0)
            }
        }
    };
}

id_type!(
    /// A marked vertex.
    VertexId
);
id_type!(
    /// A half-edge. Ids are assigned at build time as `3 * face + corner` and
    /// never change afterwards, even when flips move half-edges between faces.
    HalfEdgeId
);
id_type!(
    /// An undirected edge. Flipping keeps the id and changes the endpoints.
    EdgeId
);
id_type!(
    /// A triangular face. Flipping keeps the ids of both incident faces.
    FaceId
);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct HalfEdge {
    origin: usize,
    twin: usize,
    next: usize,
    face: usize,
    edge: usize,
}

/// Closed triangulated surface.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mesh {
    vertex_count: usize,
    half_edges: Vec<HalfEdge>,
    /// First half-edge of each face; corners are enumerated from it.
    faces: Vec<usize>,
    /// Both half-edges of each edge, lower id first.
    edges: Vec<[usize; 2]>,
}

impl Mesh {
    /// Builds a mesh from oriented faces, pairing each half-edge `a -> b` with
    /// the unique half-edge `b -> a`.
    ///
    /// Surfaces where that pairing is ambiguous (loops, parallel edges with the
    /// same orientation pattern) must use [`Mesh::from_glued_faces`].
    pub fn from_faces(faces: &[[usize; 3]], vertex_count: usize) -> Result<Mesh> {
        Self::from_glued_faces(faces, vertex_count, &[])
    }

    /// Builds a mesh from oriented faces and an explicit list of twin pairs.
    ///
    /// Half-edge `3 * f + c` runs from `faces[f][c]` to `faces[f][(c + 1) % 3]`.
    /// Half-edges not named in `pairs` are matched by oriented endpoints, which
    /// must be unambiguous.
    pub fn from_glued_faces(
        faces: &[[usize; 3]],
        vertex_count: usize,
        pairs: &[(usize, usize)],
    ) -> Result<Mesh> {
        if faces.is_empty() {
            return Err(Error::InvalidInput("face list is empty".into()));
        }
        let n_half = 3 * faces.len();
        for (f, face) in faces.iter().enumerate() {
            if let Some(&v) = face.iter().find(|&&v| v >= vertex_count) {
                return Err(Error::InvalidInput(format!(
                    "face {f} references vertex {v} but vertex_count is {vertex_count}"
                )));
            }
        }
        let origin = |h: usize| faces[h / 3][h % 3];
        let dest = |h: usize| faces[h / 3][(h % 3 + 1) % 3];

        let mut twin = vec![usize::MAX; n_half];
        for &(a, b) in pairs {
            if a >= n_half || b >= n_half || a == b {
                return Err(Error::InvalidInput(format!("invalid half-edge pair ({a}, {b})")));
            }
            if twin[a] != usize::MAX || twin[b] != usize::MAX {
                return Err(Error::NonManifold(format!(
                    "half-edge {} is paired more than once",
                    if twin[a] != usize::MAX { a } else { b }
                )));
            }
            if origin(a) != dest(b) || dest(a) != origin(b) {
                return Err(Error::NonManifold(format!(
                    "half-edges {a} ({} -> {}) and {b} ({} -> {}) are not opposite",
                    origin(a),
                    dest(a),
                    origin(b),
                    dest(b)
                )));
            }
            twin[a] = b;
            twin[b] = a;
        }

        let mut by_endpoints: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
        for h in (0..n_half).filter(|&h| twin[h] == usize::MAX) {
            by_endpoints.entry((origin(h), dest(h))).or_default().push(h);
        }
        for h in 0..n_half {
            if twin[h] != usize::MAX {
                continue;
            }
            let key = (origin(h), dest(h));
            let same = &by_endpoints[&key];
            if same.len() > 1 {
                return Err(Error::NonManifold(format!(
                    "oriented edge {} -> {} appears in {} faces",
                    key.0,
                    key.1,
                    same.len()
                )));
            }
            let opposite = by_endpoints.get(&(key.1, key.0)).map(Vec::as_slice).unwrap_or(&[]);
            match opposite {
                [] => return Err(Error::OpenBoundary { half_edge: h }),
                [o] if *o != h => {
                    twin[h] = *o;
                    twin[*o] = h;
                }
                _ => {
                    return Err(Error::NonManifold(format!(
                        "oriented edge {} -> {} has no unique twin",
                        key.1, key.0
                    )))
                }
            }
        }

        let mut half_edges = Vec::with_capacity(n_half);
        let mut edges = Vec::with_capacity(n_half / 2);
        let mut edge_of = vec![usize::MAX; n_half];
        for h in 0..n_half {
            if edge_of[h] == usize::MAX {
                edge_of[h] = edges.len();
                edge_of[twin[h]] = edges.len();
                edges.push([h, twin[h]]);
            }
        }
        for h in 0..n_half {
            half_edges.push(HalfEdge {
                origin: origin(h),
                twin: twin[h],
                next: 3 * (h / 3) + (h % 3 + 1) % 3,
                face: h / 3,
                edge: edge_of[h],
            });
        }
        let mesh = Mesh {
            vertex_count,
            half_edges,
            faces: (0..faces.len()).map(|f| 3 * f).collect(),
            edges,
        };
        mesh.check_vertex_links()?;
        mesh.check_connected()?;
        Ok(mesh)
    }

    /// Every vertex label must correspond to exactly one cycle of corners
    /// around it; otherwise the gluing pinches vertices together or splits one.
    fn check_vertex_links(&self) -> Result<()> {
        let mut seen = vec![false; self.half_edges.len()];
        let mut orbits = vec![0usize; self.vertex_count];
        for start in 0..self.half_edges.len() {
            if seen[start] {
                continue;
            }
            let v = self.half_edges[start].origin;
            orbits[v] += 1;
            let mut h = start;
            loop {
                seen[h] = true;
                // rotate around the origin: prev(h) ends at v, its twin leaves v
                h = self.half_edges[self.prev(h)].twin;
                if h == start {
                    break;
                }
                if self.half_edges[h].origin != v {
                    return Err(Error::NonManifold(format!(
                        "corner cycle around vertex {v} reaches vertex {}",
                        self.half_edges[h].origin
                    )));
                }
            }
        }
        if let Some(v) = orbits.iter().position(|&n| n == 0) {
            return Err(Error::InvalidInput(format!("vertex {v} is not used by any face")));
        }
        if let Some(v) = orbits.iter().position(|&n| n > 1) {
            return Err(Error::NonManifold(format!(
                "vertex {v} has {} separate corner cycles",
                orbits[v]
            )));
        }
        Ok(())
    }

    fn check_connected(&self) -> Result<()> {
        let n = self.faces.len();
        let mut component = vec![usize::MAX; n];
        let mut components = 0;
        for root in 0..n {
            if component[root] != usize::MAX {
                continue;
            }
            let mut stack = vec![root];
            component[root] = components;
            while let Some(f) = stack.pop() {
                for h in self.face_half_edge_indices(f) {
                    let g = self.half_edges[self.half_edges[h].twin].face;
                    if component[g] == usize::MAX {
                        component[g] = components;
                        stack.push(g);
                    }
                }
            }
            components += 1;
        }
        if components > 1 {
            return Err(Error::Disconnected { components });
        }
        Ok(())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn face_count(&self) -> usize {
        self.faces.len()
    }

    pub fn half_edge_count(&self) -> usize {
        self.half_edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertex_count).map(VertexId)
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> {
        (0..self.edges.len()).map(EdgeId)
    }

    pub fn faces(&self) -> impl Iterator<Item = FaceId> {
        (0..self.faces.len()).map(FaceId)
    }

    /// Euler characteristic `|V| - |E| + |F|`.
    pub fn euler_characteristic(&self) -> i64 {
        let v = self.vertex_count as i64;
        let e = self.edges.len() as i64;
        let f = self.faces.len() as i64;
        let chi = v - e + f;
        debug_assert_eq!(2 * v - f, 2 * chi);
        chi
    }

    pub fn origin(&self, h: HalfEdgeId) -> VertexId {
        VertexId(self.half_edges[h.0].origin)
    }

    pub fn destination(&self, h: HalfEdgeId) -> VertexId {
        self.origin(self.next(h))
    }

    pub fn twin(&self, h: HalfEdgeId) -> HalfEdgeId {
        HalfEdgeId(self.half_edges[h.0].twin)
    }

    pub fn next(&self, h: HalfEdgeId) -> HalfEdgeId {
        HalfEdgeId(self.half_edges[h.0].next)
    }

    fn prev(&self, h: usize) -> usize {
        let n = self.half_edges[h].next;
        self.half_edges[n].next
    }

    pub fn face_of(&self, h: HalfEdgeId) -> FaceId {
        FaceId(self.half_edges[h.0].face)
    }

    pub fn edge_of(&self, h: HalfEdgeId) -> EdgeId {
        EdgeId(self.half_edges[h.0].edge)
    }

    /// The two half-edges of `e`, lower id first.
    pub fn edge_half_edges(&self, e: EdgeId) -> [HalfEdgeId; 2] {
        let [a, b] = self.edges[e.0];
        [HalfEdgeId(a), HalfEdgeId(b)]
    }

    pub fn edge_endpoints(&self, e: EdgeId) -> [VertexId; 2] {
        let [a, _] = self.edge_half_edges(e);
        [self.origin(a), self.destination(a)]
    }

    fn face_half_edge_indices(&self, f: usize) -> [usize; 3] {
        let h0 = self.faces[f];
        let h1 = self.half_edges[h0].next;
        let h2 = self.half_edges[h1].next;
        [h0, h1, h2]
    }

    /// Half-edges of `f` in corner order: half-edge `c` leaves corner `c`.
    pub fn face_half_edges(&self, f: FaceId) -> [HalfEdgeId; 3] {
        self.face_half_edge_indices(f.0).map(HalfEdgeId)
    }

    /// Corner vertices `(i, j, k)` of `f`.
    pub fn face_vertices(&self, f: FaceId) -> [VertexId; 3] {
        self.face_half_edges(f).map(|h| self.origin(h))
    }

    /// Edges `(ij, jk, ki)` of `f`.
    pub fn face_edges(&self, f: FaceId) -> [EdgeId; 3] {
        self.face_half_edges(f).map(|h| self.edge_of(h))
    }

    /// Face list in the current triangulation, one vertex triple per face.
    pub fn face_list(&self) -> Vec<[usize; 3]> {
        self.faces().map(|f| self.face_vertices(f).map(VertexId::index)).collect()
    }

    /// Twin pairs in the current triangulation, one per edge.
    pub fn twin_pairs(&self) -> Vec<[usize; 2]> {
        self.edges.clone()
    }

    /// Every corner at `v` as `(face, corner position)`, with multiplicity.
    pub fn vertex_star(&self, v: VertexId) -> Vec<(FaceId, usize)> {
        self.faces()
            .flat_map(|f| {
                self.face_vertices(f)
                    .into_iter()
                    .enumerate()
                    .filter(move |(_, w)| *w == v)
                    .map(move |(c, _)| (f, c))
            })
            .collect()
    }

    /// The vertices opposite to `e` in its two incident faces.
    pub fn opposite_vertices(&self, e: EdgeId) -> [VertexId; 2] {
        self.edge_half_edges(e).map(|h| self.origin(self.next(self.next(h))))
    }

    /// Flips `e` inside the quadrilateral formed by its two faces.
    ///
    /// With `a = i -> j` in face `(i, j, k)` and its twin `b = j -> i` in face
    /// `(j, i, l)`, the edge afterwards joins `k` and `l`: the first face
    /// becomes `(l, k, i)` and the second `(k, l, j)`.
    pub fn flip_edge(&mut self, e: EdgeId) -> Result<()> {
        let [a, b] = self.edges[e.0];
        let fa = self.half_edges[a].face;
        let fb = self.half_edges[b].face;
        if fa == fb {
            return Err(Error::FlipIllegal { edge: e.0, face: fa });
        }
        let a1 = self.half_edges[a].next;
        let a2 = self.half_edges[a1].next;
        let b1 = self.half_edges[b].next;
        let b2 = self.half_edges[b1].next;
        let k = self.half_edges[a2].origin;
        let l = self.half_edges[b2].origin;

        // face fa: a (l -> k), a2 (k -> i), b1 (i -> l)
        self.half_edges[a].origin = l;
        self.half_edges[a].next = a2;
        self.half_edges[a2].next = b1;
        self.half_edges[b1].next = a;
        self.half_edges[b1].face = fa;
        // face fb: b (k -> l), b2 (l -> j), a1 (j -> k)
        self.half_edges[b].origin = k;
        self.half_edges[b].next = b2;
        self.half_edges[b2].next = a1;
        self.half_edges[a1].next = b;
        self.half_edges[a1].face = fb;

        self.faces[fa] = a;
        self.faces[fb] = b;
        Ok(())
    }

    /// Checks the half-edge axioms; used by tests after flip sequences.
    pub fn check_invariants(&self) -> Result<()> {
        for (h, he) in self.half_edges.iter().enumerate() {
            let t = &self.half_edges[he.twin];
            if t.twin != h || he.twin == h {
                return Err(Error::NonManifold(format!("twin axiom fails at half-edge {h}")));
            }
            if self.prev(self.prev(self.prev(h))) != h {
                return Err(Error::NonManifold(format!("next^3 != id at half-edge {h}")));
            }
            if self.half_edges[he.next].face != he.face {
                return Err(Error::NonManifold(format!("face mismatch at half-edge {h}")));
            }
            if t.edge != he.edge {
                return Err(Error::NonManifold(format!("edge mismatch at half-edge {h}")));
            }
            if self.half_edges[t.next].origin != he.origin {
                return Err(Error::NonManifold(format!(
                    "twin of half-edge {h} does not end at its origin"
                )));
            }
        }
        if 3 * self.faces.len() != 2 * self.edges.len() {
            return Err(Error::NonManifold("3|F| != 2|E|".into()));
        }
        self.check_vertex_links()?;
        self.check_connected()
    }
}
