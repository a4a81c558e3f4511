use thiserror::Error;

/// Failures raised by the numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no n up to the scan ceiling {ceiling} satisfies the threshold inequality")]
    ScanCeiling { ceiling: u64 },

    #[error("tolerance {tol:e} unreachable within {cap} terms")]
    ToleranceUnreachable { tol: f64, cap: u64 },

    #[error("finite difference of order {m} at k={k} lost its guard digits (relative error {rel_err:e})")]
    PrecisionLoss { m: usize, k: u64, rel_err: f64 },

    #[error("kernel does not change sign on bracket {index} ({lo}, {hi})")]
    NoSignChange { index: usize, lo: f64, hi: f64 },

    #[error("zero brackets are degenerate: {0}")]
    DegenerateBrackets(String),

    #[error("phase function is not increasing near t={t}")]
    PhaseNotMonotone { t: f64 },

    #[error("adaptive quadrature stalled on [{a}, {b}] at depth {depth}")]
    QuadratureStall { a: f64, b: f64, depth: usize },

    #[error("exchange stalled after {rounds} rounds (gap {gap:e})")]
    ExchangeStall { rounds: usize, gap: f64 },

    #[error("ramp half-width {delta} exceeds the admissible bound {limit}")]
    DeltaTooLarge { delta: f64, limit: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Broad failure class, used for process exit codes.
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Domain(_) | Error::DeltaTooLarge { .. } | Error::DegenerateBrackets(_) => {
                ErrorClass::Domain
            }
            Error::Io(_) | Error::Json(_) => ErrorClass::Io,
            _ => ErrorClass::Numeric,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Domain,
    Numeric,
    Io,
}

pub type Result<T> = std::result::Result<T, Error>;
