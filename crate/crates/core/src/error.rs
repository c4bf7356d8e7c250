use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{op}: {msg}")]
    Domain { op: &'static str, msg: String },

    /// A series hit its term cap before meeting the truncation tolerance.
    #[error("series did not converge within {terms} terms (partial sum {partial})")]
    NonConvergence { terms: usize, partial: f64 },

    /// Adaptive quadrature reached its depth cap. Carries the best estimate so far.
    #[error("quadrature depth exhausted: best estimate {estimate} with error {error}")]
    DepthExhausted { estimate: f64, error: f64 },

    #[error("function returned non-finite value {value} at x = {x}")]
    NonFinite { x: f64, value: f64 },

    /// A theorem or proposition hypothesis does not hold for the given inputs.
    #[error("hypothesis `{hypothesis}` failed: {detail}")]
    Precondition { hypothesis: String, detail: String },

    #[error("unknown function `{0}`")]
    UnknownFunction(String),
}

impl Error {
    pub(crate) fn domain(op: &'static str, msg: impl Into<String>) -> Self {
        Error::Domain { op, msg: msg.into() }
    }

    pub(crate) fn precondition(hypothesis: impl Into<String>, detail: impl Into<String>) -> Self {
        Error::Precondition {
            hypothesis: hypothesis.into(),
            detail: detail.into(),
        }
    }
}
