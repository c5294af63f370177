use thiserror::Error;

use crate::linalg::SpinMatrix;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("matrix has non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("eigensolver did not converge after {iterations} iterations")]
    SolverFailure { iterations: usize, matrix: Box<SpinMatrix> },

    #[error("metric has wrong signature at {point:?}: {positive} positive, {negative} negative eigenvalues")]
    Signature { point: [f64; 4], positive: usize, negative: usize },

    #[error("metric is singular at {point:?} (|det g| = {det:e})")]
    SingularMetric { point: [f64; 4], det: f64 },

    #[error("metric `{0}` has no analytic vielbein, so its derivative is unsupported")]
    UnsupportedDerivative(String),

    #[error("unknown metric preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid preset parameters: {0}")]
    InvalidParameters(String),

    #[error("identity violated in {context}: residual {residual:e} exceeds {tolerance:e}")]
    IdentityViolation { context: &'static str, residual: f64, tolerance: f64 },

    #[error("dual-scalar computations disagree: full contraction {full:e}, three-term form {reduced:e}")]
    InternalConsistency { full: f64, reduced: f64 },

    #[error("degenerate geometry: |(f*f)| = {fsf:e} is below threshold {threshold:e}")]
    DegenerateGeometry { fsf: f64, threshold: f64 },

    #[error("constant matrix C is not realizable as xdot^mu f_mu_nu here (residual {residual:e})")]
    InconsistentC { residual: f64 },

    #[error("constant matrix C_{index} has trace {trace:e}")]
    NotTraceless { index: usize, trace: f64 },

    #[error("worldvolume jacobian has p = {got}, expected {expected}")]
    WrongDimension { expected: usize, got: usize },

    #[error("field strength is not antisymmetric at ({0}, {1})")]
    NotAntisymmetric(usize, usize),

    #[error("{0}")]
    InvalidInput(String),
}
