use alloc::string::String;

/// Failure modes of the numerical kernels.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    #[error("{func}: argument {value} is outside the supported domain")]
    Domain { func: &'static str, value: f64 },

    #[error("{func}: argument {value} overflows double precision")]
    Overflow { func: &'static str, value: f64 },

    #[error("{what}: series did not converge within {terms} terms")]
    SeriesTruncation { what: &'static str, terms: usize },

    #[error("{what}: no sign change bracketing root #{index} in the scan range")]
    BracketNotFound { what: &'static str, index: usize },

    #[error("{what}: ill-conditioned at {value}")]
    IllConditioned { what: &'static str, value: f64 },

    #[error("{what}: quadrature did not converge (last change {change:e})")]
    Quadrature { what: &'static str, change: f64 },

    #[error("mode {mode}: time-basis member {m} is resonant (λ̃ = 0)")]
    ResonantBasis { mode: usize, m: usize },

    #[error("{what}: truncation tail {tail:e} exceeds tolerance {tol:e}")]
    Truncation { what: &'static str, tail: f64, tol: f64 },

    #[error("{what}: singular linear system")]
    Singular { what: &'static str },

    #[error("finite-difference solution diverged at t = {time} s")]
    Divergence { time: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: &str) -> Error {
    Error::InvalidArgument {
        name,
        reason: String::from(reason),
    }
}
