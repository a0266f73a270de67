//! Security index, equivocation inequalities, and the Fano-type limit on
//! letter-wise recovery without the key.
//!
//! With `s` independent stationary sources and `Z` their sum mod `n`:
//!
//! ```text
//! Lambda_t = (h_t(X^1) + ... + h_t(X^s) - log2 n) / (s - 1)
//!
//! (l1)  h_t(X^1/Z) + ... + h_t(X^{s-1}/Z)          >= sum_i h_t(X^i) - log2 n
//! (l2)  (s-1)/s * (h_t(X^1/Z) + ... + h_t(X^s/Z))   >= sum_i h_t(X^i) - log2 n
//!
//! (1 - p_b) log2(n - 1) + h(p_b) >= Lambda_t
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::{log2_count, surprisal_term, Scalar};

/// `-p log2 p - (1-p) log2 (1-p)`.
pub fn binary_entropy<T: Scalar>(p: T) -> Result<T> {
    if !(p >= T::zero() && p <= T::one()) {
        return Err(Error::Domain(format!("probability {p} outside [0, 1]")));
    }
    Ok(surprisal_term(p) + surprisal_term(T::one() - p))
}

/// Left side of the recovery bound: `(1 - p) log2(n - 1) + h(p)`.
pub fn fano_lhs<T: Scalar>(p: T, n: usize) -> Result<T> {
    if n < 2 {
        return Err(Error::Domain(format!("alphabet size {n} < 2")));
    }
    let tail = if n == 2 { T::zero() } else { (T::one() - p) * log2_count::<T>(n - 1) };
    Ok(tail + binary_entropy(p)?)
}

fn check_entropies<T: Scalar>(entropies: &[T], log2_n: T) -> Result<()> {
    for (i, &h) in entropies.iter().enumerate() {
        if !(h >= -T::tolerance() && h <= log2_n + T::tolerance()) {
            return Err(Error::Domain(format!("entropy #{} = {h} outside [0, {log2_n}]", i + 1)));
        }
    }
    Ok(())
}

/// `Lambda_t` for per-source entropies and alphabet size `n`.
pub fn lambda_t<T: Scalar>(entropies: &[T], n: usize) -> Result<T> {
    if n < 2 {
        return Err(Error::Domain(format!("alphabet size {n} < 2")));
    }
    lambda_t_with_log(entropies, log2_count(n))
}

/// `Lambda_t` with an explicit value standing in for `log2 n` (e.g. a rounded constant).
pub fn lambda_t_with_log<T: Scalar>(entropies: &[T], log2_n: T) -> Result<T> {
    let s = entropies.len();
    if s < 2 {
        return Err(Error::TooFewSources(s));
    }
    check_entropies(entropies, log2_n)?;
    let total: T = entropies.iter().copied().sum();
    Ok((total - log2_n) / T::from_count(s as u64 - 1))
}

/// Identically distributed sources: `(s h - log2 n) / (s - 1)`.
pub fn lambda_t_identical<T: Scalar>(entropy: T, s: usize, log2_n: T) -> Result<T> {
    if s < 2 {
        return Err(Error::TooFewSources(s));
    }
    check_entropies(&[entropy], log2_n)?;
    let st = T::from_count(s as u64);
    Ok((st * entropy - log2_n) / (st - T::one()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct InequalityCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub holds: bool,
}

impl<T: Scalar> InequalityCheck<T> {
    pub fn new(lhs: T, rhs: T) -> Self {
        Self { lhs, rhs, holds: lhs >= rhs - T::tolerance() }
    }

    pub fn slack(&self) -> T {
        self.lhs - self.rhs
    }
}

/// Both sides of (l1) and (l2).
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Lemma1Check<T> {
    pub first: InequalityCheck<T>,
    pub second: InequalityCheck<T>,
}

impl<T: Scalar> Lemma1Check<T> {
    pub fn holds(&self) -> bool {
        self.first.holds && self.second.holds
    }
}

/// Evaluate (l1) and (l2) from all `s` equivocations `h_t(X^i/Z)` and entropies `h_t(X^i)`.
pub fn lemma1_check<T: Scalar>(equivocations: &[T], entropies: &[T], n: usize) -> Result<Lemma1Check<T>> {
    let s = entropies.len();
    if s < 2 {
        return Err(Error::TooFewSources(s));
    }
    if equivocations.len() != s {
        return Err(Error::Domain(format!("{} equivocations for {s} sources", equivocations.len())));
    }
    if n < 2 {
        return Err(Error::Domain(format!("alphabet size {n} < 2")));
    }
    let log2_n: T = log2_count(n);
    check_entropies(entropies, log2_n)?;
    check_entropies(equivocations, log2_n)?;
    let rhs = entropies.iter().copied().sum::<T>() - log2_n;
    let first_lhs: T = equivocations[..s - 1].iter().copied().sum();
    let st = T::from_count(s as u64);
    let second_lhs = (st - T::one()) / st * equivocations.iter().copied().sum::<T>();
    Ok(Lemma1Check { first: InequalityCheck::new(first_lhs, rhs), second: InequalityCheck::new(second_lhs, rhs) })
}

/// Largest `p` in `[0, 1]` with `(1 - p) log2(n - 1) + h(p) >= lambda`.
///
/// The left side rises to `log2 n` at `p = 1/n` and falls to 0 at `p = 1`;
/// the root is located by bisection on the falling branch down to the
/// resolution of the scalar type.
pub fn fano_p_star<T: Scalar>(lambda: T, n: usize) -> Result<T> {
    if n < 2 {
        return Err(Error::Domain(format!("alphabet size {n} < 2")));
    }
    if !lambda.is_finite() {
        return Err(Error::Domain(format!("lambda {lambda} is not finite")));
    }
    let max: T = log2_count(n);
    let floor = T::one() / T::from_count(n as u64);
    if lambda <= T::zero() {
        return Ok(T::one());
    }
    if lambda > max + T::tolerance() {
        return Err(Error::NoSolution { lambda: lambda.as_f64(), max: max.as_f64() });
    }
    if lambda >= max {
        return Ok(floor);
    }
    // invariant: lhs(lo) >= lambda > lhs(hi)
    let mut lo = floor;
    let mut hi = T::one();
    let two = T::lit(2.0);
    for _ in 0..256 {
        let mid = (lo + hi) / two;
        if mid <= lo || mid >= hi {
            break;
        }
        if fano_lhs(mid, n)? >= lambda {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}

/// Evaluated bound quantities for one configuration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundReport<T> {
    pub n: usize,
    pub s: usize,
    pub t: Option<usize>,
    /// Value used for `log2 n` (exact, or a rounded constant).
    pub log2_n: T,
    pub entropies: Vec<T>,
    pub lambda_t: T,
    pub lemma1: Option<Lemma1Check<T>>,
    pub fano_p_star: T,
    /// `Lambda_t > 0`: a positive residual equivocation is certified.
    pub secure: bool,
}

impl<T: Scalar> BoundReport<T> {
    /// Evaluate `Lambda_t` (and `p*`) from entropies; `log2_n` overrides the exact logarithm.
    pub fn evaluate(entropies: Vec<T>, n: usize, t: Option<usize>, log2_n: Option<T>) -> Result<Self> {
        let log2_n = log2_n.unwrap_or_else(|| log2_count(n));
        let lambda = lambda_t_with_log(&entropies, log2_n)?;
        let p_star = fano_p_star(lambda.min(log2_count(n)), n)?;
        Ok(Self {
            n,
            s: entropies.len(),
            t,
            log2_n,
            entropies,
            lambda_t: lambda,
            lemma1: None,
            fano_p_star: p_star,
            secure: lambda > T::zero(),
        })
    }

    pub fn with_equivocations(mut self, equivocations: &[T]) -> Result<Self> {
        self.lemma1 = Some(lemma1_check(equivocations, &self.entropies, self.n)?);
        Ok(self)
    }

    pub fn verdicts_hold(&self) -> bool {
        self.lemma1.as_ref().is_none_or(Lemma1Check::holds)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn h(p: f64) -> f64 {
        binary_entropy(p).unwrap()
    }

    #[test]
    fn binary_entropy_examples() {
        assert_eq!(h(0.5), 1.0);
        assert_eq!(h(0.0), 0.0);
        assert_eq!(h(1.0), 0.0);
        // -0.1 log2 0.1 - 0.9 log2 0.9
        let direct = -0.1 * 0.1f64.log2() - 0.9 * 0.9f64.log2();
        assert!((h(0.1) - direct).abs() < 1e-15);
        assert!((h(0.1) - 0.4690).abs() < 1e-4);
        assert!(binary_entropy(1.5f64).is_err());
        assert!(binary_entropy(f64::NAN).is_err());
    }

    #[test]
    fn lambda_examples() {
        let l = lambda_t(&[1.0f64; 5], 26).unwrap();
        assert!((l - (5.0 - 26f64.log2()) / 4.0).abs() < 1e-15);
        assert!((l - 0.075).abs() < 1e-3);
        let spaced = lambda_t_with_log(&[1.0f64, 4.14], 4.7).unwrap();
        assert!((spaced - 0.44).abs() < 1e-12);
        let uniform = lambda_t(&[26f64.log2(), 26f64.log2()], 26).unwrap();
        assert!((uniform - 26f64.log2()).abs() < 1e-12);
        assert!(lambda_t(&[1.0f64], 26).is_err());
        assert!(lambda_t(&[1.0f64, 5.0], 26).is_err());
        assert!(lambda_t(&[-0.5f64, 1.0], 26).is_err());
    }

    #[test]
    fn negative_lambda_reported_as_is() {
        let r = BoundReport::evaluate(vec![1.0f64, 1.0], 26, None, Some(4.7)).unwrap();
        assert!((r.lambda_t + 2.7).abs() < 1e-12);
        assert!(!r.secure);
        assert_eq!(r.fano_p_star, 1.0);
    }

    #[test]
    fn lemma_examples() {
        // one-time pad: uniform key on n = 2
        let c = lemma1_check(&[h(0.1), 1.0], &[h(0.1), 1.0], 2).unwrap();
        assert!(c.first.holds);
        assert!((c.first.lhs - c.first.rhs).abs() < 1e-12);
        // Bern(0.1)/Bern(0.2): h(X1|Z) = h(.1) + h(.2) - h(.74); h(X2|Z) identical by symmetry of Z
        let eq = h(0.1) + h(0.2) - h(0.74);
        let c = lemma1_check(&[eq, eq], &[h(0.1), h(0.2)], 2).unwrap();
        assert!((c.first.rhs - 0.1909).abs() < 1e-4);
        assert!((c.first.lhs - 0.364).abs() < 1e-3);
        assert!(c.holds());
        // point masses
        let c = lemma1_check(&[0.0f64, 0.0], &[0.0, 0.0], 26).unwrap();
        assert_eq!(c.first.lhs, 0.0);
        assert!(c.first.rhs < 0.0);
        assert!(c.holds());
        assert!(lemma1_check(&[0.0f64], &[0.0, 0.0], 2).is_err());
    }

    #[test]
    fn fano_examples() {
        for n in [2, 3, 26] {
            assert_eq!(fano_p_star(0.0f64, n).unwrap(), 1.0);
            assert_eq!(fano_p_star(-3.0f64, n).unwrap(), 1.0);
            let top = fano_p_star((n as f64).log2(), n).unwrap();
            assert!((top - 1.0 / n as f64).abs() < 1e-15);
        }
        let p = fano_p_star(0.44f64, 26).unwrap();
        assert!((p - 0.958).abs() < 1e-3, "{p}");
        // independent bisection in double precision
        assert!((p - 0.9587013592027854).abs() < 1e-12);
        assert!((fano_lhs(p, 26).unwrap() - 0.44).abs() < 1e-10);
        assert!(matches!(fano_p_star(5.0f64, 26), Err(Error::NoSolution { .. })));
    }

    #[test]
    fn fano_binary_reduces_to_entropy_inverse() {
        let p = fano_p_star(0.5f64, 2).unwrap();
        assert!(p > 0.5);
        assert!((h(p) - 0.5).abs() < 1e-12);
    }

    #[test]
    fn fano_single_precision() {
        let p = fano_p_star(0.44f32, 26).unwrap();
        assert!((p - 0.9587).abs() < 1e-3);
    }

    proptest! {
        #[test]
        fn p_star_inverts_lhs(n in 2usize..40, frac in 0.0f64..=1.0) {
            let p = 1.0 / n as f64 + frac * (1.0 - 1.0 / n as f64);
            let lambda = fano_lhs(p, n).unwrap();
            prop_assert!(p <= fano_p_star(lambda, n).unwrap() + 1e-8);
        }

        #[test]
        fn p_star_non_increasing(n in 2usize..40, a in 0.0f64..1.0, b in 0.0f64..1.0) {
            let max = (n as f64).log2();
            let (lo, hi) = if a <= b { (a * max, b * max) } else { (b * max, a * max) };
            prop_assert!(fano_p_star(hi, n).unwrap() <= fano_p_star(lo, n).unwrap());
        }

        #[test]
        fn identical_specialisation_matches(hh in 0.0f64..4.7, s in 2usize..12) {
            let n = 26;
            let general = lambda_t(&vec![hh; s], n).unwrap();
            let special = lambda_t_identical(hh, s, 26f64.log2()).unwrap();
            prop_assert!((general - special).abs() <= 1e-12);
        }
    }
}
