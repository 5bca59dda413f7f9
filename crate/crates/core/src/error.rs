use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} is outside the explicit weight list of length {len}")]
    OutOfRange { index: usize, len: usize },

    #[error("malformed weight spec `{0}`")]
    MalformedSpec(String),

    #[error("geometric weights need a >= 1, got {0}")]
    GeometricBase(f64),

    #[error("cannot read weight file `{path}`: {reason}")]
    WeightFile { path: String, reason: String },

    #[error("the {kind} block at level {k} is empty")]
    EmptyBlock { kind: crate::blocks::Kind, k: usize },

    #[error("polynomial index m = {m} outside [-1, {n}]")]
    PolynomialIndex { m: i64, n: usize },

    #[error("tolerance must be positive, got {0}")]
    Tolerance(f64),

    #[error("matrix is not symmetric: |a[{row}][{col}] - a[{col}][{row}]| = {gap:e}")]
    Asymmetric { row: usize, col: usize, gap: f64 },

    #[error("matrix must be square and non-empty, got {rows}x{cols}")]
    Shape { rows: usize, cols: usize },

    #[error("Jacobi sweeps did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("invariant-subspace coupling {0:e} exceeds 1e-12")]
    Coupling(f64),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("|lambda| = {modulus} is not inside the certified disk (beta = {beta} >= 1)")]
    OutsideDisk { modulus: f64, beta: f64 },

    #[error("residual {residual:e} still above {tol:e} at truncation order {order}")]
    Residual { residual: f64, tol: f64, order: usize },

    #[error("invalid argument: {0}")]
    Invalid(String),
}
