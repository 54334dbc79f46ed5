use thiserror::Error;

/// Everything that can go wrong inside the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{what}: argument {value} outside domain ({constraint})")]
    Domain {
        what: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("prime table limit exceeded: requested {requested}, limit {limit}")]
    LimitExceeded { requested: u64, limit: u64 },

    #[error(
        "integration on [{a}, {b}] did not reach tolerance {tol:e} within {evaluations} \
         evaluations (estimate {estimate:e})"
    )]
    TolUnreachable {
        a: f64,
        b: f64,
        tol: f64,
        estimate: f64,
        evaluations: usize,
    },

    #[error(
        "no bracket for T={t}: residual {g_lo:e} at x={lo}, {g_hi:e} at x={hi} \
         (need negative then positive)"
    )]
    Bracket {
        t: f64,
        lo: f64,
        hi: f64,
        g_lo: f64,
        g_hi: f64,
    },

    #[error("residual map J(x) - F(T) not increasing for T={t} between x={x0} and x={x1}")]
    NonMonotone { t: f64, x0: f64, x1: f64 },

    #[error("ladder solve for T={t} stalled at residual {residual:e} (limit {limit:e})")]
    Residual { t: f64, residual: f64, limit: f64 },

    #[error("zero enumeration incomplete below t={t}: S(t) = {s} fails the count check")]
    IncompleteZeros { t: f64, s: f64 },

    #[error("profile deviation {deviation:e} exceeds {limit:e} at t={t}; reduce anchor spacing")]
    ProfileDeviation { t: f64, deviation: f64, limit: f64 },

    #[error("no sign change of the second difference of phi1 inside ({gamma}, {gamma_prime})")]
    NoInflection { gamma: f64, gamma_prime: f64 },

    #[error("ladder never meets the chord inside ({gamma}, {gamma_bar})")]
    CrossingNotFound { gamma: f64, gamma_bar: f64 },

    #[error("test function changes sign on [{lo}, {hi}]")]
    SignViolation { lo: f64, hi: f64 },

    #[error("integrand is not finite at interior point t={t}")]
    SingularInterior { t: f64 },

    #[error("no zero of Z found after t={t}")]
    NoZero { t: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("cache file: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, value: f64, constraint: &'static str) -> Error {
    Error::Domain {
        what,
        value,
        constraint,
    }
}
