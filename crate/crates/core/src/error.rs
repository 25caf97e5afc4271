use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid geometry: {0}")]
    Geometry(String),

    #[error("invalid process: {0}")]
    InvalidProcess(String),

    /// A pore-variance budget below `1/(pi*lambda)` cannot be certified by
    /// the sufficient condition on the mean perimeter.
    #[error("infeasible design: variance budget {eps} is below 1/(pi*lambda) = {floor} (the sufficient condition requires eps >= 1/(pi*lambda))")]
    InfeasibleBudget { eps: f64, floor: f64 },

    #[error("query outside the observation window: {0}")]
    OutsideWindow(String),

    #[error("rejection sampling failed: {0}")]
    Rejection(String),

    #[error("malformed realization data: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn geometry(msg: impl Into<String>) -> Self {
        Error::Geometry(msg.into())
    }

    pub(crate) fn process(msg: impl Into<String>) -> Self {
        Error::InvalidProcess(msg.into())
    }
}
