use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("empty request: {0}")]
    EmptyRequest(String),

    #[error("index {requested} out of range: only {available} eigenvalues available")]
    IndexOutOfRange { requested: usize, available: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("non-manifold edge ({0}, {1}): borders {2} faces")]
    NonManifoldEdge(usize, usize, usize),

    #[error("closed surface required: boundary edge ({0}, {1})")]
    ClosedSurfaceRequired(usize, usize),

    #[error("inconsistent orientation at directed edge ({0}, {1})")]
    InconsistentOrientation(usize, usize),

    #[error("degenerate face {0}")]
    DegenerateFace(usize),

    #[error("invalid mesh: {0}")]
    InvalidMesh(String),

    #[error("invalid request: {0}")]
    InvalidRequest(String),

    #[error("eigensolver did not converge after {iterations} restarts (worst residual {worst_residual:e})")]
    NonConvergence {
        iterations: usize,
        worst_residual: f64,
        best_residuals: Vec<f64>,
    },

    #[error("matrix is not positive definite (pivot {0})")]
    NotPositiveDefinite(usize),

    #[error("vector is not mass-normalized: s^T M s = {0}")]
    NotNormalized(f64),

    #[error("inconsistent kernel: spectrum has {zero_dim} zero modes, {requested} requested")]
    InconsistentKernel { zero_dim: usize, requested: usize },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("input is not a unit vector (norm {0})")]
    NonUnitInput(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Stable machine-readable tag for the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidModel(_) => "invalid_model",
            Error::EmptyRequest(_) => "empty_request",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::Parse { .. } => "parse",
            Error::NonManifoldEdge(..) => "non_manifold_edge",
            Error::ClosedSurfaceRequired(..) => "closed_surface_required",
            Error::InconsistentOrientation(..) => "inconsistent_orientation",
            Error::DegenerateFace(_) => "degenerate_face",
            Error::InvalidMesh(_) => "invalid_mesh",
            Error::InvalidRequest(_) => "invalid_request",
            Error::NonConvergence { .. } => "non_convergence",
            Error::NotPositiveDefinite(_) => "not_positive_definite",
            Error::NotNormalized(_) => "not_normalized",
            Error::InconsistentKernel { .. } => "inconsistent_kernel",
            Error::HypothesisViolated(_) => "hypothesis_violated",
            Error::NonUnitInput(_) => "non_unit_input",
            Error::Io(_) => "io",
        }
    }

    /// True for failures of the numerics rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::NotPositiveDefinite(_))
    }
}
