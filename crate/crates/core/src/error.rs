use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("infeasible parameters: cell {cell} = {value} lies outside [0, 1]")]
    InfeasibleParameters { cell: &'static str, value: f64 },

    #[error("probability {name} = {value} lies outside [0, 1]")]
    InvalidProbability { name: &'static str, value: f64 },

    #[error("degenerate cell {cell}: log odds ratio is undefined for a zero cell")]
    DegenerateCell { cell: &'static str },

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("no latent correlation in (-1, 1) reproduces rho = {rho} for p1 = {p1}, p2 = {p2}")]
    InfeasibleRho { p1: f64, p2: f64, rho: f64 },

    #[error("objective is not finite at the current parameters")]
    NonFiniteObjective,

    #[error("information matrix is not positive definite; the fit is not identified")]
    SingularInformation,

    #[error(
        "optimizer did not converge after {iterations} iterations (gradient norm {grad_norm:.3e})"
    )]
    NonConverged { iterations: usize, grad_norm: f64 },

    #[error("separation detected: coefficient {index} diverged to {value}")]
    SeparationDetected { index: usize, value: f64 },

    #[error("degenerate offset: fitted p_i * p_j = {0} at the boundary")]
    DegenerateOffset(f64),

    #[error("class degeneracy: {0}")]
    ClassDegeneracy(String),

    #[error("unknown configuration `{0}`")]
    UnknownConfig(String),

    #[error("malformed csv: {0}")]
    MalformedCsv(String),

    #[error("invalid experiment plan: {0}")]
    InvalidPlan(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
