//! Worked analyses of Shannon's two strengthened running-key ciphers.
//!
//! * sum-of-texts: the message plus `d = s - 1` independent English key texts.
//! * spaced-letter: one English key text read at a stride, modelled as
//!   independent letters with English unigram frequencies (`s = 2`).

use serde::Serialize;

use crate::bounds::{lambda_t_identical, BoundReport};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Reference constants for printed English (Shannon's estimates, in bits).
pub mod constants {
    /// Letter (first-order) entropy, 26 letters, no spaces.
    pub const H1_ENGLISH_NO_SPACES: f64 = 4.14;
    /// Letter entropy with the space symbol.
    pub const H1_ENGLISH_WITH_SPACES: f64 = 4.03;
    /// Long-range entropy rate.
    pub const H_INF_ENGLISH: f64 = 1.0;
    /// `log2 26` as rounded in the classical analysis.
    pub const LOG2_26_ROUNDED: f64 = 4.7;
    pub const ENGLISH_LETTERS: usize = 26;
    /// Default number of sources for the sum-of-texts preset (plaintext + 4 keys).
    pub const SUM_OF_TEXTS_DEFAULT_S: usize = 5;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CipherPreset {
    SumOfTexts,
    SpacedLetter,
}

impl std::str::FromStr for CipherPreset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sum-of-texts" => Ok(Self::SumOfTexts),
            "spaced-letter" => Ok(Self::SpacedLetter),
            other => Err(Error::Domain(format!("unknown preset {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PresetParams<T> {
    /// Entropy rate of an English text source.
    pub h_inf: T,
    /// Letter entropy of the spaced key (spaced-letter only).
    pub h1_key: T,
    pub n: usize,
    /// Total number of sources (sum-of-texts only; spaced-letter is always 2).
    pub s: usize,
}

impl<T: Scalar> Default for PresetParams<T> {
    fn default() -> Self {
        Self {
            h_inf: T::lit(constants::H_INF_ENGLISH),
            h1_key: T::lit(constants::H1_ENGLISH_NO_SPACES),
            n: constants::ENGLISH_LETTERS,
            s: constants::SUM_OF_TEXTS_DEFAULT_S,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ShannonAnalysis<T> {
    pub preset: CipherPreset,
    pub params: PresetParams<T>,
    /// Evaluated with `log2 n` rounded to one decimal (4.7 for n = 26).
    pub rounded: BoundReport<T>,
    /// Evaluated with the exact `log2 n`.
    pub exact: BoundReport<T>,
    /// Smallest `s` giving positive `Lambda` (sum-of-texts only).
    pub min_secure_s_rounded: Option<usize>,
    pub min_secure_s_exact: Option<usize>,
    pub threshold: Option<String>,
    pub verdict: String,
}

/// `log2 n` rounded to one decimal place.
pub fn rounded_log2<T: Scalar>(n: usize) -> T {
    T::lit(((n as f64).log2() * 10.0).round() / 10.0)
}

fn min_secure_s<T: Scalar>(h: T, log2_n: T) -> Result<Option<usize>> {
    for s in 2..=10_000 {
        if lambda_t_identical(h, s, log2_n)? > T::zero() {
            return Ok(Some(s));
        }
    }
    Ok(None)
}

pub fn shannon_analysis<T: Scalar>(preset: CipherPreset, params: PresetParams<T>) -> Result<ShannonAnalysis<T>> {
    if params.n < 2 {
        return Err(Error::Domain(format!("alphabet size {} < 2", params.n)));
    }
    let exact_log = T::from_count(params.n as u64).log2();
    let rounded_log = rounded_log2::<T>(params.n);
    let entropies = match preset {
        CipherPreset::SumOfTexts => {
            if params.s < 2 {
                return Err(Error::TooFewSources(params.s));
            }
            vec![params.h_inf; params.s]
        }
        CipherPreset::SpacedLetter => vec![params.h_inf, params.h1_key],
    };
    let rounded = BoundReport::evaluate(entropies.clone(), params.n, None, Some(rounded_log))?;
    let exact = BoundReport::evaluate(entropies, params.n, None, Some(exact_log))?;
    let (min_r, min_e, threshold) = match preset {
        CipherPreset::SumOfTexts => {
            let r = min_secure_s(params.h_inf, rounded_log)?;
            let e = min_secure_s(params.h_inf, exact_log)?;
            let threshold = r.map(|s| format!("secure threshold d >= {}", s - 1));
            (r, e, threshold)
        }
        CipherPreset::SpacedLetter => (None, None, None),
    };
    let verdict = if rounded.secure && exact.secure {
        "secure: positive residual equivocation".to_string()
    } else if rounded.secure || exact.secure {
        "borderline: sign depends on rounding of log2 n".to_string()
    } else {
        "no guarantee".to_string()
    };
    Ok(ShannonAnalysis {
        preset,
        params: PresetParams { s: rounded.s, ..params },
        rounded,
        exact,
        min_secure_s_rounded: min_r,
        min_secure_s_exact: min_e,
        threshold,
        verdict,
    })
}
