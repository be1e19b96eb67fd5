use alloc::string::String;
use alloc::vec::Vec;

/// Errors raised across the geometry, combinatorics and solver layers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("points are not collinear")]
    NonCollinear,
    #[error("degenerate configuration: {0}")]
    DegenerateConfiguration(&'static str),
    #[error("point is not inside the ball")]
    PointNotFinite,
    #[error("point is not hyperideal")]
    NotHyperideal,
    #[error("plane normals are proportional")]
    ProportionalNormals,
    #[error("segment between hyperideal points does not cross the ball")]
    SegmentMissesBall,
    #[error("ideal point given without a horosphere")]
    MissingHorosphere,
    #[error("point is at the projection pole")]
    AtPole,
    #[error("face-normal Gram solve failed: {0}")]
    SolveDiverged(&'static str),
    #[error("degenerate simplex")]
    DegenerateSimplex,
    #[error("quadrature did not converge (error bound {0:e})")]
    QuadratureNotConverged(f64),
    #[error("argument out of domain: {0}")]
    OutOfDomain(&'static str),
    #[error("cellulation is not a sphere (Euler characteristic {0})")]
    NotASphere(i64),
    #[error("edge {0}-{1} is not shared by exactly two faces")]
    NonManifoldEdge(usize, usize),
    #[error("invalid face: {0}")]
    InvalidFace(String),
    #[error("invalid angle assignment: {0}")]
    InvalidAngles(String),
    #[error("angle assignment is not admissible")]
    Inadmissible(Vec<String>),
    #[error("no strictly feasible point (best slack {0:e})")]
    Infeasible(f64),
    #[error("iterates collapsed onto the boundary at simplex {0}")]
    BoundaryCollapse(usize),
    #[error("maximum iterations reached (reduced gradient {0:e})")]
    MaxIterations(f64),
    #[error("gluing mismatch {0:e}")]
    GluingMismatch(f64),
    #[error("continuation stalled at delta {0}")]
    ContinuationStalled(f64),
}

pub type Result<T> = core::result::Result<T, Error>;
