use crate::flow::Trajectory;
use crate::models::PhasePoint;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("constant curvature: {0}")]
    ConstantCurvature(String),
    #[error("chart error: {0}")]
    Chart(String),
    #[error("HypMinusLocal has no global structure")]
    NoGlobalStructure,
    #[error("no motion: {0}")]
    NoMotion(String),
    #[error("degenerate regime: {0}")]
    DegenerateRegime(String),
    #[error("point outside the regime domain: {0}")]
    OutOfDomain(String),
    #[error("chart boundary reached at t = {t}")]
    BoundaryReached {
        t: f64,
        point: PhasePoint,
        partial: Box<Trajectory>,
    },
    #[error("step size underflow at t = {t}")]
    StepFailure { t: f64 },
    #[error("regime is not bounded")]
    NotBounded,
    #[error("(E, L) is not in a closed-geodesic window: {0}")]
    NotClosedRegime(String),
    #[error("quadrature failed: {0}")]
    QuadratureFailure(String),
    #[error("no bound state: {0}")]
    NoBoundState(String),
    #[error("no convergence: {0}")]
    ConvergenceFailure(String),
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
