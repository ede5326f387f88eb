use thiserror::Error;

/// Errors raised anywhere in the dimension pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precision policy violated: working precision {working} digits is below the guard policy minimum {minimum} for {target} target digits")]
    PrecisionPolicy {
        target: u32,
        working: u32,
        minimum: u32,
    },

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange {
        lo: String,
        hi: String,
        f_lo: String,
        f_hi: String,
    },

    #[error("quadrature for `{integrand}` did not converge within {nodes} nodes (last change {last_change})")]
    QuadratureDiverged {
        integrand: String,
        nodes: usize,
        last_change: String,
    },

    #[error("disc is not admissible: {0}")]
    Inadmissible(String),

    #[error("resource limit exceeded for period {period}: {records} orbit records requested, limit is {limit}")]
    ResourceLimit {
        period: usize,
        records: u128,
        limit: u128,
    },

    #[error("internal consistency check failed: {0}")]
    Inconsistent(String),

    #[error("euler tail does not converge geometrically at Q = {q} (ratio {ratio}); raise Q")]
    EulerTailRatio { q: usize, ratio: String },

    #[error(
        "certification inconclusive: tail bound {tail} does not separate the endpoints; raise P"
    )]
    Inconclusive {
        tail: String,
        certificate: Box<crate::certify::Certificate>,
    },

    #[error("orbit table cache: {0}")]
    Cache(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
