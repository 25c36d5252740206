use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-manifold input: {0}")]
    NonManifold(String),
    #[error("surface is not connected ({components} components)")]
    Disconnected { components: usize },
    #[error("surface has an open boundary at half-edge {half_edge}")]
    OpenBoundary { half_edge: usize },
    #[error("edge {edge} cannot be flipped: both sides belong to face {face}")]
    FlipIllegal { edge: usize, face: usize },
    #[error("inversive distance {value} is not greater than 1")]
    InvalidInversiveDistance { value: f64 },
    #[error("degenerate triangle with lengths {lengths:?}")]
    DegenerateTriangle { lengths: [f64; 3] },
    #[error("no circle orthogonal to the three vertex-circles (squared radius {radius_sq})")]
    NoOrthogonalCircle { radius_sq: f64 },
    #[error("flipped edge {edge} would have inversive distance {value} <= 1")]
    SeparationLost { edge: usize, value: f64 },
    #[error("flip limit of {limit} exceeded")]
    FlipLimitExceeded { limit: usize },
    #[error("solver did not converge in {iterations} iterations (residual {residual:e})")]
    NotConverged { iterations: usize, residual: f64 },
    #[error("Euler characteristic {chi} > 0 is not supported")]
    PositiveEuler { chi: i64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
