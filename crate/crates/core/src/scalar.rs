//! Scalar abstraction shared by every probability and entropy computation.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point type used for probabilities and bit quantities.
///
/// Implemented for `f32` and `f64`. Tolerances scale with the precision of
/// the type so the same validation code works for both.
pub trait Scalar:
    Float + FromPrimitive + ToPrimitive + Sum + Debug + Display + Default + Send + Sync + 'static
{
    /// Slack used when comparing derived quantities (equalities, verdicts).
    fn tolerance() -> Self;

    /// Slack allowed when checking that a probability vector sums to one.
    fn sum_tolerance() -> Self;

    /// Convert an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable")
    }

    fn as_f64(self) -> f64 {
        self.to_f64().expect("finite scalar")
    }
}

impl Scalar for f64 {
    fn tolerance() -> Self {
        1e-9
    }
    fn sum_tolerance() -> Self {
        1e-12
    }
}

impl Scalar for f32 {
    fn tolerance() -> Self {
        1e-4
    }
    fn sum_tolerance() -> Self {
        1e-5
    }
}

/// `-p log2 p` with the convention `0 log 0 = 0`.
pub fn surprisal_term<T: Scalar>(p: T) -> T {
    if p <= T::zero() {
        T::zero()
    } else {
        -p * p.log2()
    }
}

/// Shannon entropy in bits of an (unnormalised-safe) probability iterator.
///
/// Values are used as given; callers normalise first.
pub fn entropy_bits<T: Scalar, I: IntoIterator<Item = T>>(probs: I) -> T {
    probs.into_iter().map(surprisal_term).sum()
}

pub fn log2_count<T: Scalar>(n: usize) -> T {
    T::from_count(n as u64).log2()
}
