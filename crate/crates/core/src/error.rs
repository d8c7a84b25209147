use thiserror::Error;

use crate::wave::WaveClass;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Why a bracketing eigenvalue search could not produce a result.
#[derive(Debug, Clone, PartialEq)]
pub enum SearchFailure {
    /// The wave belongs to a class for which the search is not defined.
    WrongClass(WaveClass),
    /// An endpoint of the search path does not have the required sign of `G_p`.
    SignCondition {
        endpoint: &'static str,
        lambda_re: f64,
        lambda_im: f64,
        gp: f64,
    },
    /// The doubling search for a large real point hit its cap.
    DoublingExhausted { last_lambda: f64, last_gp: f64 },
    /// The bisection finished but the located point fails its own checks.
    Unverified(String),
}

impl std::fmt::Display for SearchFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SearchFailure::WrongClass(class) => write!(f, "not applicable to {class} waves"),
            SearchFailure::SignCondition {
                endpoint,
                lambda_re,
                lambda_im,
                gp,
            } => write!(
                f,
                "sign condition fails at {endpoint} = {lambda_re} + {lambda_im}i (G_p = {gp:e})"
            ),
            SearchFailure::DoublingExhausted {
                last_lambda,
                last_gp,
            } => write!(
                f,
                "doubling search exhausted at lambda = {last_lambda} (G_p = {last_gp:e})"
            ),
            SearchFailure::Unverified(msg) => write!(f, "{msg}"),
        }
    }
}

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no convergence: {message} (estimate {estimate:e}, error bound {error_bound:e})")]
    Convergence {
        message: String,
        estimate: f64,
        error_bound: f64,
    },

    #[error("accuracy check failed: {check} residual {residual:e} exceeds {bound:e}")]
    Accuracy {
        check: String,
        residual: f64,
        bound: f64,
    },

    #[error("band structure error: {0}")]
    Structure(String),

    #[error("search failed: {0}")]
    Search(SearchFailure),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
