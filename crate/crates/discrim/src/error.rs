use thiserror::Error;

/// Errors produced by ensemble validation, certificate construction, and
/// measurement verification.
#[derive(Debug, Error)]
pub enum Error {
    /// The operator's traceless part is too small for a one-dimensional
    /// kernel to exist; the zero eigenspace is absent or two-dimensional.
    #[error("no one-dimensional kernel: |t| = {vector_norm:.3e} is below the degeneracy threshold")]
    DegenerateKernel { vector_norm: f64 },

    /// Inversion of an operator that is not strictly positive.
    #[error("singular operator: s = {scalar:.6e}, |t| = {vector_norm:.6e}")]
    SingularOperator { scalar: f64, vector_norm: f64 },

    /// Two states share the same weighted Bloch point, so no projective
    /// direction separates them.
    #[error("states {i} and {j} have coincident weighted Bloch points")]
    DegeneratePair { i: usize, j: usize },

    /// The weighted Bloch points of a three-state subset lie on a line.
    #[error("weighted Bloch points of subset {subset:?} are collinear")]
    CollinearPoints { subset: [usize; 3] },

    /// The constraint quadratic for a candidate operator has no real root.
    #[error("constraint quadratic has no real root (discriminant {discriminant:.3e})")]
    NoRealRoot { discriminant: f64 },

    /// The linear difference system does not determine the operator vector.
    #[error("singular linear system: {context}")]
    SingularLinearSystem { context: &'static str },

    /// A completeness weight came out negative: the candidate admits no
    /// physical measurement on this subset.
    #[error("outcome weight {weight:.3e} for state {index} is negative")]
    NegativeWeight { index: usize, weight: f64 },

    /// The completeness system has a residual beyond tolerance.
    #[error("completeness system residual {residual:.3e} exceeds tolerance")]
    InconsistentSystem { residual: f64 },

    /// Exhaustive search ended without a certified measurement. A valid
    /// optimum with at most four outcomes always exists, so this signals a
    /// tolerance failure or a bug, never a property of the ensemble.
    #[error("no certified measurement found: {diagnostics}")]
    NoSolutionFound { diagnostics: String },

    /// The supplied elements do not form a measurement.
    #[error("not a valid measurement: {reason}")]
    NotAPovm { reason: String },

    /// An input document violates an invariant.
    #[error("{path}: {reason} (got {value})")]
    Validation {
        path: String,
        value: f64,
        reason: String,
    },

    /// Malformed input document.
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    /// Invalid sweep specification.
    #[error("invalid sweep specification: {reason}")]
    InvalidSpec { reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
