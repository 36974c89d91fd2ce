use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("polyhedron is empty")]
    EmptyPolyhedron,
    #[error("the given set is not a face of the polyhedron")]
    NotAFace,
    #[error("point lies outside the closure of the cell")]
    OutsideCell,
    #[error("inconsistent cell values at {point}: {detail}")]
    InconsistentValues { point: String, detail: String },
    #[error("unsupported operation: {0}")]
    Unsupported(String),
    #[error("fixture {location}: {message}")]
    Fixture { location: String, message: String },
    #[error("function is not locally Lipschitz at {0}")]
    NotLipschitz(String),
    #[error("no declared adjacency data at {0}")]
    MissingAdjacency(String),
    #[error("point is not in the closure of the piece union")]
    PointNotInUnion,
    #[error("local dimension cannot be certified at {0}")]
    Undecided(String),
    #[error("insufficient samples: need {need}, have {have}")]
    InsufficientSamples { need: usize, have: usize },
    #[error("anchor is not a solution of the unperturbed system")]
    AnchorNotSolution,
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
