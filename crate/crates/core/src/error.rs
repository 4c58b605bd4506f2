use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` has no assigned value")]
    UnassignedVariable(String),
    #[error("near-singular denominator ({value:e}) while evaluating `{expr}`")]
    NearSingular { expr: String, value: f64 },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("expression is not a polynomial in the formal parameters: {0}")]
    NotPolynomial(String),
    #[error("every sampled point fell inside the singular exclusion zone ({attempts} attempts)")]
    AllPointsExcluded { attempts: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("no subalgebra declared on `{0}`")]
    SubalgebraNotDeclared(String),
    #[error("coisotropy fails: {0}")]
    CoisotropyFailed(String),
    #[error("chart Jacobian is rank deficient at {point}")]
    RankDeficient { point: String },
    #[error("least-squares residual {residual:e} exceeds bound at {point}")]
    LeastSquaresResidual { point: String, residual: f64 },
    #[error("unknown catalog entry `{0}`")]
    UnknownEntry(String),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown chart `{0}`")]
    UnknownChart(String),
    #[error("rewriting exceeded {bound} swap steps; relation set does not terminate")]
    NonTerminating { bound: usize },
    #[error("unsupported shape: {0}")]
    Shape(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("missing data file {path}: {source}")]
    MissingData {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
