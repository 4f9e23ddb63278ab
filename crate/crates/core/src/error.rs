use thiserror::Error;

/// Errors raised by the library. Verification findings are never errors; they
/// come back as report values.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid minimal model index {0}: m must be at least 1")]
    InvalidModel(i64),

    #[error("Kac label ({r},{s}) out of range for m={m}")]
    LabelOutOfRange { m: u32, r: i64, s: i64 },

    #[error("cannot parse {kind} from {input:?}")]
    Parse { kind: &'static str, input: String },

    #[error("p={p} and q={q} are not coprime (or smaller than 2)")]
    NotCoprime { p: i64, q: i64 },

    #[error("unknown label {0:?}")]
    UnknownLabel(String),

    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),

    #[error("modular data invariant violated: {0}")]
    ModularInvariant(String),

    #[error("Verlinde value {value} for ({a},{b},{c}) is not within {tol} of an integer")]
    NonIntegralVerlinde {
        a: String,
        b: String,
        c: String,
        value: f64,
        tol: f64,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("exponent denominator overflow")]
    DenominatorOverflow,

    #[error("coefficient at exponent {0} lies beyond the truncation order")]
    BeyondTruncation(String),

    #[error("independent computations disagree: {0}")]
    OracleMismatch(String),

    #[error("malformed dataset: {0}")]
    Dataset(String),
}

pub type Result<T> = std::result::Result<T, Error>;
