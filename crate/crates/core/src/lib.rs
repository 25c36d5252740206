//! Discrete uniformization of decorated piecewise Euclidean surfaces.
//!
//! A closed triangulated surface carries a vertex-circle of radius `r_i` at
//! every vertex and an inversive distance `I_ij > 1` on every edge. Scaling
//! the radii by `e^{u_i}` while keeping the inversive distances fixed moves the
//! metric inside its discrete conformal class. This crate finds the factor `u`
//! for which the discrete Gaussian curvature `K_i = W_i / A_i` (angle defect
//! over dual-cell area) is the same at every vertex, for surfaces with Euler
//! characteristic `χ ≤ 0`.
//!
//! The pieces, bottom up:
//!
//! * [`mesh`]: half-edge combinatorics with loops and parallel edges.
//! * [`metric`]: radii, inversive distances and the conformal action.
//! * [`trigeom`]: closed-form quantities of one decorated triangle.
//! * [`delaunay`]: the weighted Delaunay predicate and the flip algorithm.
//! * [`energy`]: Lobachevsky function, the convex energy, its derivatives,
//!   dual-cell areas and curvatures.
//! * [`uniformizer`]: the damped Newton solver for constant curvature.
//! * [`io`] and [`cli`]: JSON surface/result files and the command driver.
//!
//! See the crate's `examples/` directory for one runnable program per
//! capability.

pub mod cli;
pub mod delaunay;
pub mod energy;
mod error;
pub mod fixtures;
pub mod io;
pub mod mesh;
pub mod metric;
pub mod trigeom;
pub mod uniformizer;

pub use error::{Error, Result};
pub use mesh::{EdgeId, FaceId, HalfEdgeId, Mesh, VertexId};
pub use metric::DecoratedMetric;
