use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("unmapped character at position {0}")]
    UnmappedCharacter(usize),
    #[error("input is not valid UTF-8 (byte offset {0})")]
    InvalidUtf8(usize),
    #[error("sequences use different alphabets")]
    AlphabetMismatch,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("expected {expected} key streams, found {found}")]
    WrongKeyCount { expected: usize, found: usize },
    #[error("need at least 2 sources, found {0}")]
    TooFewSources(usize),
    #[error("insufficient key material: need {needed} symbols, have {available}")]
    InsufficientKeyMaterial { needed: usize, available: usize },
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("initial distribution is not stationary (residual {0:e})")]
    NotStationary(f64),
    #[error("empirical models report estimates only; exact value unavailable")]
    UnsupportedForEmpirical,
    #[error("estimate-flagged source rejected by an exact computation")]
    EstimateRejected,
    #[error("budget exceeded: need {needed} entries, budget {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("sequence too short: length {length}, order {order}")]
    SequenceTooShort { length: usize, order: usize },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("no solution: lambda {lambda} exceeds log2 n = {max}")]
    NoSolution { lambda: f64, max: f64 },
    #[error("source index {index} out of range 1..={s}")]
    IndexOutOfRange { index: usize, s: usize },
    #[error("model file: {0}")]
    ModelFile(String),
}

impl Error {
    /// Stable machine-readable identifier.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidAlphabet(_) => "invalid_alphabet",
            Error::UnmappedCharacter(_) => "unmapped_character",
            Error::InvalidUtf8(_) => "invalid_utf8",
            Error::AlphabetMismatch => "alphabet_mismatch",
            Error::LengthMismatch { .. } => "length_mismatch",
            Error::WrongKeyCount { .. } => "wrong_key_count",
            Error::TooFewSources(_) => "too_few_sources",
            Error::InsufficientKeyMaterial { .. } => "insufficient_key_material",
            Error::InvalidDistribution(_) => "invalid_distribution",
            Error::NotStationary(_) => "not_stationary",
            Error::UnsupportedForEmpirical => "unsupported_for_empirical",
            Error::EstimateRejected => "estimate_rejected",
            Error::BudgetExceeded { .. } => "budget_exceeded",
            Error::EmptyCorpus => "empty_corpus",
            Error::SequenceTooShort { .. } => "sequence_too_short",
            Error::Domain(_) => "domain_error",
            Error::NoSolution { .. } => "no_solution",
            Error::IndexOutOfRange { .. } => "index_out_of_range",
            Error::ModelFile(_) => "model_file",
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}

/// Default budget on enumerated table entries.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

pub(crate) fn check_budget(needed: u128, budget: u128) -> Result<()> {
    if needed > budget {
        Err(Error::BudgetExceeded { needed, budget })
    } else {
        Ok(())
    }
}

/// `base^exp` saturating at `u128::MAX`.
pub(crate) fn saturating_pow(base: usize, exp: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..exp {
        acc = acc.saturating_mul(base as u128);
    }
    acc
}
