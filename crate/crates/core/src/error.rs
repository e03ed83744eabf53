use thiserror::Error;

/// Errors produced by grid construction, form evaluation and the solvers.
#[derive(Debug, Error)]
pub enum FracError {
    #[error("invalid extent: left endpoint {a} must be strictly below right endpoint {b}")]
    InvalidExtent { a: f64, b: f64 },
    #[error("too few cells: n = {n}, need n >= 2")]
    TooFewCells { n: usize },
    #[error("parameter out of range: {name} = {value}, expected {expected}")]
    ParameterOutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },
    #[error("dimension mismatch: field has {field} entries, kernel/grid has {expected}")]
    DimensionMismatch { field: usize, expected: usize },
    #[error("missing lambda: the spectral parameters carry no fixed eigenvalue parameter")]
    MissingLambda,
    #[error("zero field: the Rayleigh quotient is undefined at u = 0")]
    ZeroField,
    #[error("regime mismatch: {op} requires the {required} regime, parameters are {actual}")]
    RegimeMismatch {
        op: &'static str,
        required: &'static str,
        actual: String,
    },
    #[error(
        "not above the Poincare cone: lambda * mass = {lam_mass} <= seminorm_q = {sq}; \
         the direction cannot be projected onto the Nehari set"
    )]
    NotAboveCone { lam_mass: f64, sq: f64 },
    #[error("infeasible lambda: no Nehari-feasible direction found across {restarts} restarts")]
    InfeasibleLambda { restarts: usize },
    #[error("asymmetric grid: odd-symmetry solve needs a grid symmetric about its midpoint")]
    AsymmetricGrid,
    #[error("insufficient points: rate fit needs at least 3 converged branch points, got {got}")]
    InsufficientPoints { got: usize },
    #[error("nonpositive gap: branch point at rho = {rho} has lambda {lambda} <= reference {reference}")]
    NonpositiveGap {
        rho: f64,
        lambda: f64,
        reference: f64,
    },
    #[error("malformed config: {key}: {message}")]
    MalformedConfig { key: String, message: String },
    #[error("io failure: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, FracError>;
