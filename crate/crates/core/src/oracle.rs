//! Exhaustive enumeration of small cipher instances.
//!
//! The joint law of the `s` source words and the induced ciphertext word is
//! tabulated exactly, so equivocations, the equivocation inequalities and
//! every step of their derivation can be evaluated without sampling error.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rand::distributions::{Distribution, WeightedIndex};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::alphabet::{Alphabet, Symbol, SymbolSeq};
use crate::bounds::{lemma1_check, Lemma1Check};
use crate::error::{check_budget, saturating_pow, Error, Result, DEFAULT_BUDGET};
use crate::scalar::{log2_count, surprisal_term, Scalar};
use crate::source::SourceTuple;

/// Exact law of `(X^1, .., X^s)` over length-`t` words, with `Z` attached.
///
/// Tuple codes are mixed radix: source `j` (0-based) contributes `w_j * W^j`
/// where `W = n^t` and `w_j` is its word code (first letter most significant).
#[derive(Clone, Debug)]
pub struct JointDistribution<T> {
    alphabet: Arc<Alphabet>,
    s: usize,
    t: usize,
    words: usize,
    probs: Vec<T>,
    cipher: Vec<u32>,
}

fn word_letters(code: usize, n: usize, t: usize) -> impl Iterator<Item = usize> {
    (0..t).rev().map(move |k| (code / n.pow(k as u32)) % n)
}

/// Letter-wise sum mod n of the words packed in `tuple`.
fn cipher_word(tuple: usize, n: usize, t: usize, s: usize, words: usize) -> u32 {
    let mut z = 0usize;
    let mut rest = tuple;
    let mut codes = Vec::with_capacity(s);
    for _ in 0..s {
        codes.push(rest % words);
        rest /= words;
    }
    for k in (0..t).rev() {
        let place = n.pow(k as u32);
        let letter = codes.iter().map(|&c| (c / place) % n).sum::<usize>() % n;
        z = z * n + letter;
    }
    z as u32
}

/// Joint law of independent sources over length-`t` words.
pub fn build_joint<T: Scalar>(sources: &SourceTuple<T>, t: usize) -> Result<JointDistribution<T>> {
    build_joint_with_budget(sources, t, DEFAULT_BUDGET)
}

pub fn build_joint_with_budget<T: Scalar>(
    sources: &SourceTuple<T>,
    t: usize,
    budget: u128,
) -> Result<JointDistribution<T>> {
    if sources.any_estimate() {
        return Err(Error::EstimateRejected);
    }
    if t == 0 {
        return Err(Error::Domain("word length must be at least 1".into()));
    }
    let n = sources.alphabet().size();
    let s = sources.s();
    check_budget(saturating_pow(n, s * t), budget)?;
    let marginals = sources.components().iter().map(|m| m.word_distribution(t, budget)).collect::<Result<Vec<_>>>()?;
    let words = n.pow(t as u32);
    let size = words.pow(s as u32);
    let (probs, cipher): (Vec<T>, Vec<u32>) = (0..size)
        .into_par_iter()
        .map(|tuple| {
            let mut rest = tuple;
            let mut p = T::one();
            for marg in &marginals {
                p = p * marg[rest % words];
                rest /= words;
            }
            (p, cipher_word(tuple, n, t, s, words))
        })
        .unzip();
    Ok(JointDistribution { alphabet: sources.alphabet().clone(), s, t, words, probs, cipher })
}

impl<T: Scalar> JointDistribution<T> {
    /// Arbitrary (possibly dependent) tuple law; used to probe hypothesis violations.
    pub fn from_table(alphabet: Arc<Alphabet>, s: usize, t: usize, probs: Vec<T>) -> Result<Self> {
        if s < 2 {
            return Err(Error::TooFewSources(s));
        }
        let n = alphabet.size();
        let words = n.pow(t as u32);
        if probs.len() != words.pow(s as u32) {
            return Err(Error::Domain(format!("table has {} entries, expected {}", probs.len(), words.pow(s as u32))));
        }
        let total: T = probs.iter().copied().sum();
        if probs.iter().any(|p| !(*p >= T::zero())) || (total - T::one()).abs() > T::tolerance() {
            return Err(Error::InvalidDistribution(format!("joint table sums to {total}")));
        }
        let cipher = (0..probs.len()).map(|tuple| cipher_word(tuple, n, t, s, words)).collect();
        Ok(Self { alphabet, s, t, words, probs, cipher })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn s(&self) -> usize {
        self.s
    }

    pub fn t(&self) -> usize {
        self.t
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probs
    }

    pub fn total_probability(&self) -> T {
        self.probs.iter().copied().sum()
    }

    /// Word code of source `j` (0-based) inside a tuple code.
    pub fn source_word(&self, tuple: usize, j: usize) -> usize {
        (tuple / self.words.pow(j as u32)) % self.words
    }

    pub fn cipher_word(&self, tuple: usize) -> usize {
        self.cipher[tuple] as usize
    }

    /// Recompute every ciphertext coordinate from its tuple.
    pub fn cipher_consistent(&self) -> bool {
        let n = self.alphabet.size();
        (0..self.probs.len()).all(|tuple| {
            let expect = (0..self.t).fold(0usize, |z, k| {
                let letter: usize = (0..self.s)
                    .map(|j| word_letters(self.source_word(tuple, j), n, self.t).nth(k).unwrap())
                    .sum::<usize>()
                    % n;
                z * n + letter
            });
            expect == self.cipher[tuple] as usize
        })
    }

    fn key(&self, tuple: usize, sources: &[usize], with_z: bool) -> u64 {
        let mut k = 0u64;
        for &j in sources {
            k = k * self.words as u64 + self.source_word(tuple, j) as u64;
        }
        if with_z {
            k = k * self.words as u64 + self.cipher[tuple] as u64;
        }
        k
    }

    /// Per-letter entropy of the projection onto `sources` (0-based) and optionally `Z`.
    pub fn entropy(&self, sources: &[usize], with_z: bool) -> T {
        let mut law: HashMap<u64, T> = HashMap::new();
        for (tuple, &p) in self.probs.iter().enumerate() {
            if p > T::zero() {
                let e = law.entry(self.key(tuple, sources, with_z)).or_insert(T::zero());
                *e = *e + p;
            }
        }
        law.into_values().map(surprisal_term).sum::<T>() / T::from_count(self.t as u64)
    }

    /// Per-letter `H(target | given, [Z])`, summed directly over conditional laws.
    pub fn conditional_entropy(&self, target: &[usize], given: &[usize], given_z: bool) -> T {
        let mut groups: HashMap<u64, HashMap<u64, T>> = HashMap::new();
        for (tuple, &p) in self.probs.iter().enumerate() {
            if p > T::zero() {
                let inner = groups.entry(self.key(tuple, given, given_z)).or_default();
                let e = inner.entry(self.key(tuple, target, false)).or_insert(T::zero());
                *e = *e + p;
            }
        }
        let total: T = groups
            .into_values()
            .map(|inner| {
                let mass: T = inner.values().copied().sum();
                inner.into_values().map(|p| -p * (p / mass).log2()).sum::<T>()
            })
            .sum();
        total / T::from_count(self.t as u64)
    }

    /// Tab-delimited `x1 .. xs z probability` rows, words rendered via the codec.
    pub fn export_delimited(&self) -> String {
        let n = self.alphabet.size();
        let render =
            |code: usize| -> String { word_letters(code, n, self.t).map(|l| self.alphabet.codec()[l]).collect() };
        let mut out = String::new();
        for j in 1..=self.s {
            let _ = write!(out, "x{j}\t");
        }
        out.push_str("z\tprobability\n");
        for (tuple, &p) in self.probs.iter().enumerate() {
            for j in 0..self.s {
                let _ = write!(out, "{}\t", render(self.source_word(tuple, j)));
            }
            let _ = writeln!(out, "{}\t{:.17e}", render(self.cipher[tuple] as usize), p.as_f64());
        }
        out
    }

    fn word_seq(&self, code: usize) -> SymbolSeq {
        let n = self.alphabet.size();
        SymbolSeq::from_trusted(self.alphabet.clone(), word_letters(code, n, self.t).map(|l| l as Symbol).collect())
    }
}

/// `h_t(X^i / Z)` for 1-based source index `i`.
pub fn exact_equivocation<T: Scalar>(joint: &JointDistribution<T>, i: usize) -> Result<T> {
    if i == 0 || i > joint.s {
        return Err(Error::IndexOutOfRange { index: i, s: joint.s });
    }
    Ok(joint.entropy(&[i - 1], true) - joint.entropy(&[], true))
}

pub fn exact_equivocations<T: Scalar>(joint: &JointDistribution<T>) -> Vec<T> {
    (1..=joint.s).map(|i| exact_equivocation(joint, i).expect("index in range")).collect()
}

/// Exact `h_t(X^i)` for each source, read off the joint table.
pub fn exact_source_entropies<T: Scalar>(joint: &JointDistribution<T>) -> Vec<T> {
    (0..joint.s).map(|j| joint.entropy(&[j], false)).collect()
}

/// (l1)/(l2) evaluated on exact equivocations.
pub fn exact_lemma1<T: Scalar>(joint: &JointDistribution<T>) -> Result<Lemma1Check<T>> {
    lemma1_check(&exact_equivocations(joint), &exact_source_entropies(joint), joint.alphabet.size())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Relation {
    Equal,
    AtMost,
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChainStep<T> {
    pub step: String,
    pub relation: Relation,
    pub lhs: T,
    pub rhs: T,
    pub holds: bool,
}

impl<T: Scalar> ChainStep<T> {
    fn new(step: impl Into<String>, relation: Relation, lhs: T, rhs: T) -> Self {
        let tol = T::tolerance();
        let holds = match relation {
            Relation::Equal => (lhs - rhs).abs() <= tol,
            Relation::AtMost => lhs <= rhs + tol,
            Relation::AtLeast => lhs >= rhs - tol,
        };
        Self { step: step.into(), relation, lhs, rhs, holds }
    }
}

/// Evaluate each step of the derivation of the equivocation inequalities.
///
/// Conditional entropies are summed directly over conditional laws rather
/// than obtained by subtracting joint entropies, so the chain-rule steps are
/// genuine numerical checks.
pub fn verify_proof_chain<T: Scalar>(joint: &JointDistribution<T>) -> Vec<ChainStep<T>> {
    let s = joint.s;
    let all: Vec<usize> = (0..s).collect();
    let singles: Vec<T> = (0..s).map(|j| joint.entropy(&[j], false)).collect();
    let sum_singles: T = singles.iter().copied().sum();
    let h_joint = joint.entropy(&all, false);
    let h_joint_z = joint.entropy(&all, true);
    let h_z = joint.entropy(&[], true);
    let h_all_given_z = joint.conditional_entropy(&all, &[], true);
    let chain_terms: Vec<T> = (0..s).map(|j| joint.conditional_entropy(&[j], &all[..j], true)).collect();
    let equivocations: Vec<T> = (0..s).map(|j| joint.conditional_entropy(&[j], &[], true)).collect();
    let log2_n: T = log2_count(joint.alphabet.size());

    let mut steps = vec![
        ChainStep::new(
            "independence: sum of source entropies equals joint entropy",
            Relation::Equal,
            sum_singles,
            h_joint,
        ),
        ChainStep::new("ciphertext is a function of the sources", Relation::Equal, h_joint, h_joint_z),
        ChainStep::new(
            "chain rule: h(X^1..X^s, Z) = h(Z) + h(X^1..X^s / Z)",
            Relation::Equal,
            h_joint_z,
            h_z + h_all_given_z,
        ),
        ChainStep::new(
            "chain rule over sources given Z",
            Relation::Equal,
            h_all_given_z,
            chain_terms.iter().copied().sum(),
        ),
        ChainStep::new("last source determined by the others and Z", Relation::Equal, chain_terms[s - 1], T::zero()),
    ];
    let kept: T = chain_terms[..s - 1].iter().copied().sum();
    let unconditioned: T = equivocations[..s - 1].iter().copied().sum();
    steps.push(ChainStep::new("conditioning reduces entropy", Relation::AtMost, h_z + kept, h_z + unconditioned));
    steps.push(ChainStep::new(
        "sum of source entropies <= h(Z) + first s-1 equivocations",
        Relation::AtMost,
        sum_singles,
        h_z + unconditioned,
    ));
    steps.push(ChainStep::new("h(Z) <= log2 n", Relation::AtMost, h_z, log2_n));
    for j in 0..s {
        let others: T = equivocations.iter().enumerate().filter(|(i, _)| *i != j).map(|(_, &e)| e).sum();
        steps.push(ChainStep::new(
            format!("sum of source entropies <= h(Z) + equivocations omitting source {}", j + 1),
            Relation::AtMost,
            sum_singles,
            h_z + others,
        ));
    }
    let st = T::from_count(s as u64);
    let rhs = sum_singles - log2_n;
    steps.push(ChainStep::new("first inequality (s-1 equivocations)", Relation::AtLeast, unconditioned, rhs));
    steps.push(ChainStep::new(
        "second inequality ((s-1)/s times all equivocations)",
        Relation::AtLeast,
        (st - T::one()) / st * equivocations.iter().copied().sum::<T>(),
        rhs,
    ));
    steps
}

/// Which ciphertext to condition the near-equiprobable set on.
#[derive(Clone, Debug, PartialEq)]
pub enum CiphertextChoice {
    /// Draw `Z` from its exact law.
    Sampled {
        seed: u64,
    },
    Given(SymbolSeq),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TypicalSetReport<T> {
    pub t: usize,
    pub ciphertext: String,
    pub epsilon: T,
    pub delta: T,
    pub median_log2_posterior: T,
    /// `|Psi|`
    pub size: u64,
    /// `(1/t) log2 |Psi|`
    pub log_size_per_letter: T,
    /// `(1/t) (max - min) log2 P(w | z)` over `Psi`
    pub spread_per_letter: T,
    /// `P(Psi | Z = z)`
    pub probability: T,
    pub spread_below_epsilon: bool,
    pub probability_above_one_minus_delta: bool,
}

/// Near-equiprobable plaintext set for one ciphertext.
///
/// Plaintext words whose posterior satisfies
/// `|log2 P(w|z) - m| < t * epsilon / 2`, where `m` is the posterior-weighted
/// median of `log2 P(w|z)`. The result is a finite-`t` diagnostic; nothing
/// here asserts the asymptotic statement.
pub fn typical_set_check<T: Scalar>(
    joint: &JointDistribution<T>,
    epsilon: T,
    delta: T,
    choice: &CiphertextChoice,
) -> Result<TypicalSetReport<T>> {
    if !(epsilon > T::zero()) || !(delta > T::zero() && delta < T::one()) {
        return Err(Error::Domain("need epsilon > 0 and 0 < delta < 1".into()));
    }
    let z = match choice {
        CiphertextChoice::Given(word) => {
            if word.len() != joint.t || **word.alphabet() != *joint.alphabet {
                return Err(Error::Domain("ciphertext must be a word of length t over the joint alphabet".into()));
            }
            let n = joint.alphabet.size();
            word.symbols().iter().fold(0usize, |c, &s| c * n + s as usize)
        }
        CiphertextChoice::Sampled { seed } => {
            let mut law = vec![0.0f64; joint.words];
            for (tuple, &p) in joint.probs.iter().enumerate() {
                law[joint.cipher[tuple] as usize] += p.as_f64();
            }
            let dist = WeightedIndex::new(&law).map_err(|e| Error::Domain(e.to_string()))?;
            dist.sample(&mut ChaCha8Rng::seed_from_u64(*seed))
        }
    };
    let mut posterior = vec![T::zero(); joint.words];
    for (tuple, &p) in joint.probs.iter().enumerate() {
        if joint.cipher[tuple] as usize == z {
            let x = joint.source_word(tuple, 0);
            posterior[x] = posterior[x] + p;
        }
    }
    let mass: T = posterior.iter().copied().sum();
    if !(mass > T::zero()) {
        return Err(Error::Domain("ciphertext has zero probability".into()));
    }
    let mut support: Vec<(T, T)> = posterior
        .iter()
        .filter(|&&p| p > T::zero())
        .map(|&p| {
            let q = p / mass;
            (q.log2(), q)
        })
        .collect();
    support.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite log"));
    let half = T::lit(0.5);
    let mut acc = T::zero();
    let mut median = support[support.len() - 1].0;
    for &(lp, q) in &support {
        acc = acc + q;
        if acc >= half {
            median = lp;
            break;
        }
    }
    let tt = T::from_count(joint.t as u64);
    let band = tt * epsilon / T::lit(2.0);
    let members: Vec<(T, T)> = support.into_iter().filter(|(lp, _)| (*lp - median).abs() < band).collect();
    let size = members.len() as u64;
    let lo = members.iter().map(|m| m.0).fold(T::infinity(), T::min);
    let hi = members.iter().map(|m| m.0).fold(T::neg_infinity(), T::max);
    let probability: T = members.iter().map(|m| m.1).sum();
    let spread = (hi - lo) / tt;
    Ok(TypicalSetReport {
        t: joint.t,
        ciphertext: crate::alphabet::decode(&joint.word_seq(z)),
        epsilon,
        delta,
        median_log2_posterior: median,
        size,
        log_size_per_letter: T::from_count(size).log2() / tt,
        spread_per_letter: spread,
        probability,
        spread_below_epsilon: spread < epsilon,
        probability_above_one_minus_delta: probability > T::one() - delta,
    })
}
