//! Ciphertext-only attackers and Monte-Carlo estimation of the per-letter
//! success probability `p_b`.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::alphabet::{Symbol, SymbolSeq};
use crate::bounds::fano_p_star;
use crate::cipher::{encipher, CipherSpec};
use crate::error::{check_budget, Error, Result, DEFAULT_BUDGET};
use crate::scalar::Scalar;
use crate::source::{SourceModel, SourceTuple, Stepper};

/// A keyless deciphering rule `M(Z_1..Z_t) = X*_1..X*_t`.
pub trait Attacker<T>: Sync {
    fn id(&self) -> String;
    fn attack(&self, ciphertext: &SymbolSeq) -> Result<SymbolSeq>;
}

/// Index of the largest weight; near-ties (relative `1e-12`-scale) go to the smaller symbol.
fn argmax<T: Scalar>(weights: &[T]) -> Symbol {
    let mut best = 0usize;
    for (i, &w) in weights.iter().enumerate().skip(1) {
        if w > weights[best] + weights[best].abs() * T::sum_tolerance() {
            best = i;
        }
    }
    best as Symbol
}

/// Per-letter maximum a posteriori attacker.
///
/// Each output letter is `argmax_a P(X1_i = a | Z_1..Z_t)`. With all sources
/// i.i.d. the posterior only depends on `Z_i` and a fixed decision table is
/// used; otherwise the posterior comes from a forward-backward pass over the
/// joint history states of all sources.
pub struct MapLetterAttacker<T> {
    sources: SourceTuple<T>,
    steppers: Vec<Stepper<T>>,
    table: Option<Vec<Symbol>>,
}

impl<T: Scalar> MapLetterAttacker<T> {
    pub fn new(sources: &SourceTuple<T>) -> Result<Self> {
        Self::with_budget(sources, DEFAULT_BUDGET)
    }

    pub fn with_budget(sources: &SourceTuple<T>, budget: u128) -> Result<Self> {
        if sources.any_estimate() {
            return Err(Error::EstimateRejected);
        }
        let n = sources.alphabet().size();
        let steppers = sources.components().iter().map(|c| c.stepper()).collect::<Result<Vec<_>>>()?;
        let states: u128 = steppers.iter().map(|st| st.num_states as u128).product();
        let work = states.saturating_mul(n as u128).saturating_mul(crate::error::saturating_pow(n, sources.s() - 1));
        check_budget(work, budget)?;
        let all_iid = sources.components().iter().all(|c| matches!(c, SourceModel::Iid(_)));
        let table = if all_iid { Some(iid_decision_table(sources)?) } else { None };
        Ok(Self { sources: sources.clone(), steppers, table })
    }

    /// Posterior laws `P(X1_i = . | Z)` for every position, by forward-backward.
    pub fn posteriors(&self, ciphertext: &SymbolSeq) -> Result<Vec<Vec<T>>> {
        if **ciphertext.alphabet() != **self.sources.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        forward_backward(&self.steppers, ciphertext.alphabet().size(), ciphertext.symbols())
    }

    /// Whether the i.i.d. decision-table shortcut is in use.
    pub fn uses_letter_table(&self) -> bool {
        self.table.is_some()
    }
}

impl<T: Scalar> Attacker<T> for MapLetterAttacker<T> {
    fn id(&self) -> String {
        "map-letter".into()
    }

    fn attack(&self, ciphertext: &SymbolSeq) -> Result<SymbolSeq> {
        let out = match &self.table {
            Some(table) => {
                if **ciphertext.alphabet() != **self.sources.alphabet() {
                    return Err(Error::AlphabetMismatch);
                }
                ciphertext.symbols().iter().map(|&z| table[z as usize]).collect()
            }
            None => self.posteriors(ciphertext)?.iter().map(|p| argmax(p)).collect(),
        };
        Ok(SymbolSeq::from_trusted(ciphertext.alphabet().clone(), out))
    }
}

/// Convenience wrapper: build a MAP attacker for `sources` and run it on `ciphertext`.
pub fn map_letter_attack<T: Scalar>(ciphertext: &SymbolSeq, sources: &SourceTuple<T>) -> Result<SymbolSeq> {
    MapLetterAttacker::new(sources)?.attack(ciphertext)
}

/// Law of the summed key letter `X^2 + .. + X^s mod n` for i.i.d. keys.
fn key_sum_law<T: Scalar>(sources: &SourceTuple<T>) -> Result<Vec<T>> {
    let n = sources.alphabet().size();
    let mut law = vec![T::zero(); n];
    law[0] = T::one();
    for key in &sources.components()[1..] {
        let p = key.letter_marginal()?;
        let mut next = vec![T::zero(); n];
        for (a, &la) in law.iter().enumerate() {
            for (b, &pb) in p.iter().enumerate() {
                next[(a + b) % n] = next[(a + b) % n] + la * pb;
            }
        }
        law = next;
    }
    Ok(law)
}

fn iid_decision_table<T: Scalar>(sources: &SourceTuple<T>) -> Result<Vec<Symbol>> {
    let n = sources.alphabet().size();
    let prior = sources.components()[0].letter_marginal()?;
    let keys = key_sum_law(sources)?;
    Ok((0..n)
        .map(|z| {
            let weights: Vec<T> = (0..n).map(|a| prior[a] * keys[(z + n - a) % n]).collect();
            argmax(&weights)
        })
        .collect())
}

fn forward_backward<T: Scalar>(steppers: &[Stepper<T>], n: usize, z: &[Symbol]) -> Result<Vec<Vec<T>>> {
    let s = steppers.len();
    let t = z.len();
    if t == 0 {
        return Ok(Vec::new());
    }
    // joint context index: mixed radix over per-source history states
    let radices: Vec<usize> = steppers.iter().map(|st| st.num_states).collect();
    let contexts: usize = radices.iter().product();
    let decode = |mut idx: usize| -> Vec<u32> {
        radices
            .iter()
            .map(|&r| {
                let v = idx % r;
                idx /= r;
                v as u32
            })
            .collect()
    };
    let encode = |parts: &[u32]| -> usize {
        parts.iter().zip(&radices).rev().fold(0usize, |acc, (&p, &r)| acc * r + p as usize)
    };
    let free = n.pow((s - 1) as u32);

    // enumerate consistent letter tuples from a joint context given z:
    // returns (probability, next context index, plaintext letter)
    let expand = |ctx: usize, zl: usize, out: &mut Vec<(T, usize, usize)>| {
        out.clear();
        let parts = decode(ctx);
        let mut letters = vec![0usize; s];
        let mut next = vec![0u32; s];
        for f in 0..free {
            let mut rest = f;
            let mut sum = 0usize;
            for l in letters.iter_mut().take(s - 1) {
                *l = rest % n;
                rest /= n;
                sum += *l;
            }
            letters[s - 1] = (zl + n * s - sum % n) % n;
            let mut p = T::one();
            for j in 0..s {
                let (q, nx) = steppers[j].step(parts[j], letters[j] as Symbol);
                p = p * q;
                next[j] = nx;
                if p == T::zero() {
                    break;
                }
            }
            if p > T::zero() {
                out.push((p, encode(&next), letters[0]));
            }
        }
    };

    let mut scratch = Vec::new();
    // alpha[i][ctx * n + x1]
    let mut alpha: Vec<Vec<T>> = Vec::with_capacity(t);
    let mut carried = vec![T::zero(); contexts];
    carried[0] = T::one();
    for &zl in z {
        let mut a = vec![T::zero(); contexts * n];
        for (ctx, &w) in carried.iter().enumerate() {
            if w == T::zero() {
                continue;
            }
            expand(ctx, zl as usize, &mut scratch);
            for &(p, nx, x1) in &scratch {
                a[nx * n + x1] = a[nx * n + x1] + w * p;
            }
        }
        let total: T = a.iter().copied().sum();
        if !(total > T::zero()) {
            return Err(Error::Domain("ciphertext has zero probability under the sources".into()));
        }
        for v in a.iter_mut() {
            *v = *v / total;
        }
        carried = vec![T::zero(); contexts];
        for (idx, &v) in a.iter().enumerate() {
            carried[idx / n] = carried[idx / n] + v;
        }
        alpha.push(a);
    }

    let mut posts = vec![vec![T::zero(); n]; t];
    let mut beta = vec![T::one(); contexts];
    for i in (0..t).rev() {
        let post = &mut posts[i];
        for (idx, &a) in alpha[i].iter().enumerate() {
            post[idx % n] = post[idx % n] + a * beta[idx / n];
        }
        let total: T = post.iter().copied().sum();
        for v in post.iter_mut() {
            *v = *v / total;
        }
        if i == 0 {
            break;
        }
        let mut prev = vec![T::zero(); contexts];
        for (ctx, slot) in prev.iter_mut().enumerate() {
            // only contexts reachable at step i-1 matter
            let reach: T = (0..n).map(|x| alpha[i - 1][ctx * n + x]).sum();
            if reach == T::zero() {
                continue;
            }
            expand(ctx, z[i] as usize, &mut scratch);
            *slot = scratch.iter().map(|&(p, nx, _)| p * beta[nx]).sum();
        }
        let scale = prev.iter().copied().fold(T::zero(), T::max);
        if scale > T::zero() {
            for v in prev.iter_mut() {
                *v = *v / scale;
            }
        }
        beta = prev;
    }
    Ok(posts)
}

/// Always answers the most likely plaintext letter, ignoring the ciphertext.
pub struct PriorArgmaxAttacker {
    guess: Symbol,
}

impl PriorArgmaxAttacker {
    pub fn new<T: Scalar>(sources: &SourceTuple<T>) -> Result<Self> {
        Ok(Self { guess: argmax(&sources.components()[0].letter_marginal()?) })
    }
}

impl<T: Scalar> Attacker<T> for PriorArgmaxAttacker {
    fn id(&self) -> String {
        "prior-argmax".into()
    }

    fn attack(&self, ciphertext: &SymbolSeq) -> Result<SymbolSeq> {
        Ok(SymbolSeq::from_trusted(ciphertext.alphabet().clone(), vec![self.guess; ciphertext.len()]))
    }
}

/// Reads the ciphertext as if it were the plaintext.
pub struct IdentityAttacker;

impl<T: Scalar> Attacker<T> for IdentityAttacker {
    fn id(&self) -> String {
        "identity".into()
    }

    fn attack(&self, ciphertext: &SymbolSeq) -> Result<SymbolSeq> {
        Ok(ciphertext.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct AttackResult<T> {
    pub attacker_id: String,
    pub t: usize,
    pub seed: u64,
    pub trials: u64,
    pub letters: u64,
    pub correct: u64,
    pub p_b_hat: T,
    /// 95% normal-approximation halfwidth.
    pub confidence_halfwidth: T,
    /// Fewer than 10 successes or failures: the halfwidth is unreliable.
    pub low_confidence: bool,
}

impl<T: Scalar> AttackResult<T> {
    pub fn from_counts(attacker_id: String, t: usize, seed: u64, trials: u64, letters: u64, correct: u64) -> Self {
        let total = T::from_count(letters.max(1));
        let p = T::from_count(correct) / total;
        let halfwidth = T::lit(1.96) * (p * (T::one() - p) / total).sqrt();
        Self {
            attacker_id,
            t,
            seed,
            trials,
            letters,
            correct,
            p_b_hat: p,
            confidence_halfwidth: halfwidth,
            low_confidence: correct < 10 || letters - correct < 10,
        }
    }
}

/// Monte-Carlo `p_b`: sample plaintext and keys, encipher, attack, score letters.
///
/// Trial `k` draws from a ChaCha stream keyed by `(seed, k)`, so results are
/// reproducible and independent of scheduling.
pub fn estimate_pb<T: Scalar, A: Attacker<T> + ?Sized>(
    attacker: &A,
    sources: &SourceTuple<T>,
    t: usize,
    trials: u64,
    seed: u64,
) -> Result<AttackResult<T>> {
    if trials == 0 {
        return Err(Error::Domain("trials must be at least 1".into()));
    }
    let spec = CipherSpec::new(sources.alphabet().clone(), sources.s())?;
    let correct = (0..trials)
        .into_par_iter()
        .map(|k| -> Result<u64> {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let words: Vec<SymbolSeq> = sources.components().iter().map(|c| c.sample_with(t, &mut rng)).collect();
            let z = encipher(&words[0], &words[1..], &spec)?;
            let guess = attacker.attack(&z)?;
            if guess.len() != t {
                return Err(Error::LengthMismatch { expected: t, found: guess.len() });
            }
            Ok(guess.symbols().iter().zip(words[0].symbols()).filter(|(a, b)| a == b).count() as u64)
        })
        .try_reduce(|| 0, |a, b| Ok(a + b))?;
    Ok(AttackResult::from_counts(attacker.id(), t, seed, trials, trials * t as u64, correct))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundConsistency<T> {
    pub lambda: T,
    pub p_star: T,
    pub p_b_hat: T,
    pub confidence_halfwidth: T,
    pub consistent: bool,
}

/// `p_b_hat <= p*(lambda, n) + halfwidth + 1e-6`.
pub fn bound_consistency<T: Scalar>(result: &AttackResult<T>, lambda: T, n: usize) -> Result<BoundConsistency<T>> {
    let p_star = fano_p_star(lambda, n)?;
    let consistent = result.p_b_hat <= p_star + result.confidence_halfwidth + T::lit(1e-6);
    Ok(BoundConsistency {
        lambda,
        p_star,
        p_b_hat: result.p_b_hat,
        confidence_halfwidth: result.confidence_halfwidth,
        consistent,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::Alphabet;
    use crate::cipher::decipher;
    use crate::oracle::build_joint;
    use crate::source::{IidSource, MarkovSource};
    use std::sync::Arc;

    fn iid(a: &Arc<Alphabet>, p: &[f64]) -> SourceModel<f64> {
        SourceModel::Iid(IidSource::new(a.clone(), p.to_vec()).unwrap())
    }

    fn markov(a: &Arc<Alphabet>, rows: Vec<Vec<f64>>) -> SourceModel<f64> {
        SourceModel::Markov(MarkovSource::new(a.clone(), 1, rows).unwrap())
    }

    /// `P(X1_i = a | Z = z)` by summing the exact joint table.
    fn brute_posteriors(sources: &SourceTuple<f64>, z: &[Symbol]) -> Vec<Vec<f64>> {
        let n = sources.alphabet().size();
        let t = z.len();
        let joint = build_joint(sources, t).unwrap();
        let zc = z.iter().fold(0usize, |c, &s| c * n + s as usize);
        let mut post = vec![vec![0.0; n]; t];
        for (tuple, &p) in joint.probabilities().iter().enumerate() {
            if joint.cipher_word(tuple) != zc {
                continue;
            }
            let x = joint.source_word(tuple, 0);
            for (i, row) in post.iter_mut().enumerate() {
                row[(x / n.pow((t - 1 - i) as u32)) % n] += p;
            }
        }
        for row in &mut post {
            let s: f64 = row.iter().sum();
            row.iter_mut().for_each(|v| *v /= s);
        }
        post
    }

    #[test]
    fn forward_backward_matches_enumeration() {
        let a = Arc::new(Alphabet::numeric(3).unwrap());
        let sources = SourceTuple::new(vec![
            markov(&a, vec![vec![0.7, 0.2, 0.1], vec![0.1, 0.6, 0.3], vec![0.3, 0.3, 0.4]]),
            iid(&a, &[0.5, 0.3, 0.2]),
            markov(&a, vec![vec![0.2, 0.2, 0.6], vec![0.5, 0.4, 0.1], vec![0.3, 0.5, 0.2]]),
        ])
        .unwrap();
        let attacker = MapLetterAttacker::new(&sources).unwrap();
        assert!(!attacker.uses_letter_table());
        for z in [[0u32, 1, 2], [2, 2, 0], [1, 0, 1]] {
            let seq = SymbolSeq::new(a.clone(), z.to_vec()).unwrap();
            let fb = attacker.posteriors(&seq).unwrap();
            let brute = brute_posteriors(&sources, &z);
            for (r1, r2) in fb.iter().zip(&brute) {
                for (x, y) in r1.iter().zip(r2) {
                    assert!((x - y).abs() < 1e-12, "{fb:?} vs {brute:?}");
                }
            }
        }
    }

    #[test]
    fn second_order_plaintext_matches_enumeration() {
        let a = Arc::new(Alphabet::numeric(2).unwrap());
        let rows = vec![vec![0.9, 0.1], vec![0.3, 0.7], vec![0.4, 0.6], vec![0.2, 0.8]];
        let m2 = SourceModel::Markov(MarkovSource::new(a.clone(), 2, rows).unwrap());
        let sources = SourceTuple::new(vec![m2, iid(&a, &[0.65, 0.35])]).unwrap();
        let attacker = MapLetterAttacker::new(&sources).unwrap();
        let z = [1u32, 0, 0, 1];
        let fb = attacker.posteriors(&SymbolSeq::new(a.clone(), z.to_vec()).unwrap()).unwrap();
        let brute = brute_posteriors(&sources, &z);
        for (r1, r2) in fb.iter().zip(&brute) {
            for (x, y) in r1.iter().zip(r2) {
                assert!((x - y).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn letter_table_matches_forward_backward() {
        let a = Arc::new(Alphabet::numeric(4).unwrap());
        let sources = SourceTuple::new(vec![
            iid(&a, &[0.4, 0.3, 0.2, 0.1]),
            iid(&a, &[0.1, 0.6, 0.2, 0.1]),
            iid(&a, &[0.25, 0.15, 0.35, 0.25]),
        ])
        .unwrap();
        let attacker = MapLetterAttacker::new(&sources).unwrap();
        assert!(attacker.uses_letter_table());
        let z = SymbolSeq::new(a.clone(), vec![0, 1, 2, 3, 3, 1]).unwrap();
        let fb: Vec<Symbol> = attacker.posteriors(&z).unwrap().iter().map(|p| argmax(p)).collect();
        assert_eq!(attacker.attack(&z).unwrap().symbols(), fb.as_slice());
    }

    #[test]
    fn uniform_key_yields_prior_guess() {
        let a = Arc::new(Alphabet::numeric(3).unwrap());
        let sources = SourceTuple::new(vec![iid(&a, &[0.2, 0.5, 0.3]), iid(&a, &[1.0 / 3.0; 3])]).unwrap();
        let z = SymbolSeq::new(a.clone(), vec![0, 1, 2, 2]).unwrap();
        assert_eq!(map_letter_attack(&z, &sources).unwrap().symbols(), &[1, 1, 1, 1]);
        // markov plaintext through the forward-backward route
        let chain = markov(&a, vec![vec![0.1, 0.8, 0.1], vec![0.2, 0.6, 0.2], vec![0.3, 0.4, 0.3]]);
        let sources = SourceTuple::new(vec![chain, iid(&a, &[1.0 / 3.0; 3])]).unwrap();
        assert_eq!(map_letter_attack(&z, &sources).unwrap().symbols(), &[1, 1, 1, 1]);
    }

    #[test]
    fn point_mass_key_deciphers() {
        let a = Arc::new(Alphabet::numeric(5).unwrap());
        let key = SourceModel::Iid(IidSource::point_mass(a.clone(), 3).unwrap());
        let sources = SourceTuple::new(vec![iid(&a, &[0.3, 0.2, 0.2, 0.2, 0.1]), key]).unwrap();
        let z = SymbolSeq::new(a.clone(), vec![0, 4, 2]).unwrap();
        let spec = CipherSpec::new(a.clone(), 2).unwrap();
        let k = SymbolSeq::new(a.clone(), vec![3, 3, 3]).unwrap();
        assert_eq!(map_letter_attack(&z, &sources).unwrap(), decipher(&z, &[k], &spec).unwrap());
        let attacker = MapLetterAttacker::new(&sources).unwrap();
        let r = estimate_pb(&attacker, &sources, 16, 200, 1).unwrap();
        assert_eq!(r.p_b_hat, 1.0);
        assert!(r.low_confidence);
    }

    #[test]
    fn bernoulli_pair_posterior_and_success() {
        let a = Arc::new(Alphabet::numeric(2).unwrap());
        let sources = SourceTuple::new(vec![iid(&a, &[0.9, 0.1]), iid(&a, &[0.8, 0.2])]).unwrap();
        let z = SymbolSeq::new(a.clone(), vec![0, 1]).unwrap();
        assert_eq!(map_letter_attack(&z, &sources).unwrap().symbols(), &[0, 0]);
        let post = brute_posteriors(&sources, &[0]);
        assert!((post[0][0] - 0.72 / 0.74).abs() < 1e-12);
        let post = brute_posteriors(&sources, &[1]);
        assert!((post[0][0] - 0.18 / 0.26).abs() < 1e-12);
        // exact MAP success = 0.72 + 0.18
        let attacker = MapLetterAttacker::new(&sources).unwrap();
        let r = estimate_pb(&attacker, &sources, 64, 10_000, 7).unwrap();
        assert!((r.p_b_hat - 0.9).abs() <= r.confidence_halfwidth, "{r:?}");
    }

    #[test]
    fn map_beats_every_letter_rule() {
        for n in [2usize, 3] {
            let a = Arc::new(Alphabet::numeric(n).unwrap());
            let mut p1: Vec<f64> = (1..=n).map(|i| (i * i) as f64).collect();
            let s1: f64 = p1.iter().sum();
            p1.iter_mut().for_each(|v| *v /= s1);
            let mut p2: Vec<f64> = (1..=n).map(|i| (n + 2 - i) as f64).collect();
            let s2: f64 = p2.iter().sum();
            p2.iter_mut().for_each(|v| *v /= s2);
            let sources = SourceTuple::new(vec![iid(&a, &p1), iid(&a, &p2)]).unwrap();
            let joint = build_joint(&sources, 1).unwrap();
            let success = |rule: &dyn Fn(usize) -> usize| -> f64 {
                joint
                    .probabilities()
                    .iter()
                    .enumerate()
                    .filter(|(tuple, _)| rule(joint.cipher_word(*tuple)) == joint.source_word(*tuple, 0))
                    .map(|(_, &p)| p)
                    .sum()
            };
            let attacker = MapLetterAttacker::new(&sources).unwrap();
            let map_rule = |z: usize| -> usize {
                attacker.attack(&SymbolSeq::new(a.clone(), vec![z as u32]).unwrap()).unwrap().symbols()[0] as usize
            };
            let map_success = success(&map_rule);
            for code in 0..n.pow(n as u32) {
                let rule = |z: usize| (code / n.pow(z as u32)) % n;
                assert!(success(&rule) <= map_success + 1e-15);
            }
        }
    }

    #[test]
    fn estimates_are_reproducible() {
        let a = Arc::new(Alphabet::numeric(3).unwrap());
        let sources = SourceTuple::new(vec![
            markov(&a, vec![vec![0.7, 0.2, 0.1], vec![0.1, 0.6, 0.3], vec![0.3, 0.3, 0.4]]),
            iid(&a, &[0.5, 0.3, 0.2]),
        ])
        .unwrap();
        let attacker = MapLetterAttacker::new(&sources).unwrap();
        let r1 = estimate_pb(&attacker, &sources, 12, 300, 99).unwrap();
        let r2 = estimate_pb(&attacker, &sources, 12, 300, 99).unwrap();
        assert_eq!(r1, r2);
        assert_eq!(r1.letters, 3600);
        assert!(estimate_pb(&attacker, &sources, 12, 0, 99).is_err());
    }

    #[test]
    fn bound_consistency_examples() {
        let uniform = AttackResult::<f64>::from_counts("x".into(), 1, 0, 26_000, 26_000, 1_000);
        let v = bound_consistency(&uniform, 26f64.log2(), 26).unwrap();
        assert!((v.p_star - 1.0 / 26.0).abs() < 1e-15);
        assert!(v.consistent);

        let h = |p: f64| -p * p.log2() - (1.0 - p) * (1.0 - p).log2();
        let lambda = h(0.1) + h(0.2) - 1.0;
        assert!(lambda <= h(0.74));
        let r = AttackResult::<f64>::from_counts("x".into(), 1, 0, 100, 100, 74);
        assert!(bound_consistency(&r, lambda, 2).unwrap().consistent);

        let perfect = AttackResult::<f64>::from_counts("x".into(), 1, 0, 100, 100, 100);
        let v = bound_consistency(&perfect, 0.44, 26).unwrap();
        assert!((v.p_star - 0.958).abs() < 1e-3);
        assert!(!v.consistent);
    }

    #[test]
    fn other_attackers() {
        let a = Arc::new(Alphabet::numeric(3).unwrap());
        let sources = SourceTuple::new(vec![iid(&a, &[0.2, 0.5, 0.3]), iid(&a, &[0.6, 0.2, 0.2])]).unwrap();
        let prior = PriorArgmaxAttacker::new(&sources).unwrap();
        let z = SymbolSeq::new(a.clone(), vec![0, 2]).unwrap();
        assert_eq!(Attacker::<f64>::attack(&prior, &z).unwrap().symbols(), &[1, 1]);
        assert_eq!(Attacker::<f64>::attack(&IdentityAttacker, &z).unwrap(), z);
    }

    #[test]
    fn attack_budget_and_estimates() {
        let a = Arc::new(Alphabet::numeric(4).unwrap());
        let m = markov(&a, vec![vec![0.25; 4]; 4]);
        let sources = SourceTuple::new(vec![m.clone(), m.clone(), m]).unwrap();
        assert!(matches!(MapLetterAttacker::with_budget(&sources, 100), Err(Error::BudgetExceeded { .. })));
    }
}
