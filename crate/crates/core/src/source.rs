//! Stationary sources: i.i.d., finite-order Markov, and empirical corpora.
//!
//! i.i.d. and Markov models report exact word probabilities and exact
//! block entropies. Empirical models only ever produce values flagged as
//! estimates, and every exact computation refuses them.

use std::sync::Arc;

use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alphabet::{Alphabet, Symbol, SymbolSeq};
use crate::error::{check_budget, saturating_pow, Error, Result, DEFAULT_BUDGET};
use crate::scalar::{entropy_bits, Scalar};

/// A value together with a flag telling whether it is an estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate<T> {
    pub value: T,
    pub estimated: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SourceKind {
    Iid,
    Markov { order: usize },
    Empirical,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IidSource<T> {
    alphabet: Arc<Alphabet>,
    probs: Vec<T>,
    smoothed: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MarkovSource<T> {
    alphabet: Arc<Alphabet>,
    order: usize,
    /// Row `c` is the next-letter law after context `c` (base-n code, oldest letter most significant).
    transitions: Vec<Vec<T>>,
    /// Stationary law over contexts of length `order`.
    initial: Vec<T>,
}

/// How an empirical model cuts sample windows out of its reference corpus.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WindowPolicy {
    /// Uniform start position; reads past the end wrap to the beginning.
    Wrap,
    /// Uniform start among positions where the window fits; wraps only if the corpus is shorter than the window.
    Contiguous,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalSource {
    alphabet: Arc<Alphabet>,
    corpus: Vec<Symbol>,
    window: WindowPolicy,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SourceModel<T> {
    Iid(IidSource<T>),
    Markov(MarkovSource<T>),
    Empirical(EmpiricalSource),
}

pub(crate) fn validate_distribution<T: Scalar>(probs: &[T], what: &str) -> Result<()> {
    if probs.iter().any(|p| !p.is_finite() || *p < T::zero()) {
        return Err(Error::InvalidDistribution(format!("{what}: negative or non-finite entry")));
    }
    let total: T = probs.iter().copied().sum();
    if (total - T::one()).abs() > T::sum_tolerance() {
        return Err(Error::InvalidDistribution(format!("{what}: sums to {total}")));
    }
    Ok(())
}

impl<T: Scalar> IidSource<T> {
    pub fn new(alphabet: Arc<Alphabet>, probs: Vec<T>) -> Result<Self> {
        if probs.len() != alphabet.size() {
            return Err(Error::InvalidDistribution(format!(
                "{} probabilities for alphabet of size {}",
                probs.len(),
                alphabet.size()
            )));
        }
        validate_distribution(&probs, "iid probabilities")?;
        Ok(Self { alphabet, probs, smoothed: false })
    }

    pub fn uniform(alphabet: Arc<Alphabet>) -> Self {
        let n = alphabet.size();
        let p = T::one() / T::from_count(n as u64);
        Self { alphabet, probs: vec![p; n], smoothed: false }
    }

    /// All mass on one symbol.
    pub fn point_mass(alphabet: Arc<Alphabet>, symbol: Symbol) -> Result<Self> {
        let mut probs = vec![T::zero(); alphabet.size()];
        *probs.get_mut(symbol as usize).ok_or_else(|| Error::Domain(format!("symbol {symbol} outside alphabet")))? =
            T::one();
        Ok(Self { alphabet, probs, smoothed: false })
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probs
    }

    /// True when the probabilities came from add-one smoothed counts.
    pub fn smoothed(&self) -> bool {
        self.smoothed
    }

    pub(crate) fn with_smoothed_flag(mut self, smoothed: bool) -> Self {
        self.smoothed = smoothed;
        self
    }
}

impl<T: Scalar> MarkovSource<T> {
    /// Build from a transition table; the stationary context law is found by
    /// fixed-point iteration of the lazy chain `pi <- (pi + pi P) / 2`.
    pub fn new(alphabet: Arc<Alphabet>, order: usize, transitions: Vec<Vec<T>>) -> Result<Self> {
        Self::check_table(&alphabet, order, &transitions)?;
        let initial = stationary_contexts(alphabet.size(), &transitions)?;
        Ok(Self { alphabet, order, transitions, initial })
    }

    /// Build with an explicit initial law, which must be stationary.
    pub fn with_initial(
        alphabet: Arc<Alphabet>,
        order: usize,
        transitions: Vec<Vec<T>>,
        initial: Vec<T>,
    ) -> Result<Self> {
        Self::check_table(&alphabet, order, &transitions)?;
        if initial.len() != transitions.len() {
            return Err(Error::InvalidDistribution("initial law has wrong length".into()));
        }
        validate_distribution(&initial, "initial law")?;
        let stepped = apply_transition(alphabet.size(), &transitions, &initial);
        let residual = stepped.iter().zip(&initial).map(|(a, b)| (*a - *b).abs()).fold(T::zero(), T::max);
        if residual > T::tolerance() {
            return Err(Error::NotStationary(residual.as_f64()));
        }
        Ok(Self { alphabet, order, transitions, initial })
    }

    fn check_table(alphabet: &Alphabet, order: usize, transitions: &[Vec<T>]) -> Result<()> {
        if order == 0 {
            return Err(Error::Domain("markov order must be at least 1".into()));
        }
        let n = alphabet.size();
        let contexts = saturating_pow(n, order);
        check_budget(contexts.saturating_mul(n as u128), DEFAULT_BUDGET)?;
        if transitions.len() as u128 != contexts {
            return Err(Error::InvalidDistribution(format!(
                "expected {contexts} transition rows, found {}",
                transitions.len()
            )));
        }
        for (c, row) in transitions.iter().enumerate() {
            if row.len() != n {
                return Err(Error::InvalidDistribution(format!("row {c} has {} entries", row.len())));
            }
            validate_distribution(row, &format!("transition row {c}"))?;
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn transitions(&self) -> &[Vec<T>] {
        &self.transitions
    }

    pub fn initial(&self) -> &[T] {
        &self.initial
    }

    fn num_contexts(&self) -> usize {
        self.transitions.len()
    }

    /// Stationary law of the first `len <= order` letters.
    fn prefix_marginal(&self, len: usize) -> Vec<T> {
        let block = self.alphabet.size().pow((self.order - len) as u32);
        self.initial.chunks(block).map(|c| c.iter().copied().sum()).collect()
    }

    /// Entropy of the next letter given the context, averaged over the stationary law.
    pub fn conditional_entropy(&self) -> T {
        self.initial.iter().zip(&self.transitions).map(|(&w, row)| w * entropy_bits(row.iter().copied())).sum()
    }

    /// Sample starting from a fixed context of exactly `order` letters.
    pub fn sample_from_context<R: Rng>(&self, start: &[Symbol], t: usize, rng: &mut R) -> Result<SymbolSeq> {
        let n = self.alphabet.size();
        if start.len() != self.order || start.iter().any(|&s| s as usize >= n) {
            return Err(Error::Domain(format!("start context must hold {} valid symbols", self.order)));
        }
        let code = start.iter().fold(0usize, |c, &s| c * n + s as usize);
        let out = self.walk(code, start.to_vec(), t, rng);
        Ok(SymbolSeq::from_trusted(self.alphabet.clone(), out))
    }

    fn walk<R: Rng>(&self, mut code: usize, mut out: Vec<Symbol>, t: usize, rng: &mut R) -> Vec<Symbol> {
        let n = self.alphabet.size();
        let contexts = self.num_contexts();
        let mut rows: Vec<Option<WeightedIndex<f64>>> = vec![None; contexts];
        out.truncate(t);
        while out.len() < t {
            let dist = rows[code].get_or_insert_with(|| weighted(&self.transitions[code]));
            let sym = dist.sample(rng);
            out.push(sym as Symbol);
            code = (code * n + sym) % contexts;
        }
        out
    }
}

fn weighted<T: Scalar>(probs: &[T]) -> WeightedIndex<f64> {
    WeightedIndex::new(probs.iter().map(|p| p.as_f64())).expect("validated distribution")
}

fn apply_transition<T: Scalar>(n: usize, transitions: &[Vec<T>], law: &[T]) -> Vec<T> {
    let contexts = transitions.len();
    let mut next = vec![T::zero(); contexts];
    for (c, (&w, row)) in law.iter().zip(transitions).enumerate() {
        if w == T::zero() {
            continue;
        }
        for (v, &p) in row.iter().enumerate() {
            next[(c * n + v) % contexts] = next[(c * n + v) % contexts] + w * p;
        }
    }
    next
}

fn stationary_contexts<T: Scalar>(n: usize, transitions: &[Vec<T>]) -> Result<Vec<T>> {
    let contexts = transitions.len();
    let half = T::lit(0.5);
    let mut law = vec![T::one() / T::from_count(contexts as u64); contexts];
    let mut residual = T::infinity();
    for _ in 0..1_000_000 {
        let stepped = apply_transition(n, transitions, &law);
        residual = stepped.iter().zip(&law).map(|(a, b)| (*a - *b).abs()).fold(T::zero(), T::max);
        law = law.iter().zip(&stepped).map(|(&a, &b)| half * (a + b)).collect();
        if residual <= T::sum_tolerance() {
            let total: T = law.iter().copied().sum();
            return Ok(law.into_iter().map(|p| p / total).collect());
        }
    }
    Err(Error::NotStationary(residual.as_f64()))
}

impl EmpiricalSource {
    pub fn new(corpus: &SymbolSeq, window: WindowPolicy) -> Result<Self> {
        if corpus.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(Self { alphabet: corpus.alphabet().clone(), corpus: corpus.symbols().to_vec(), window })
    }

    pub fn corpus(&self) -> SymbolSeq {
        SymbolSeq::from_trusted(self.alphabet.clone(), self.corpus.clone())
    }

    pub fn window(&self) -> WindowPolicy {
        self.window
    }

    /// Relative frequency of `word` among all sliding windows of the corpus.
    pub fn estimated_word_probability(&self, word: &[Symbol]) -> f64 {
        let len = word.len();
        if len == 0 || len > self.corpus.len() {
            return 0.0;
        }
        let hits = self.corpus.windows(len).filter(|w| *w == word).count();
        hits as f64 / (self.corpus.len() - len + 1) as f64
    }
}

/// Per-source transition machine over "history states".
///
/// State 0 is the empty history. While fewer than `order` letters have been
/// seen the state is the whole prefix; afterwards it is the last `order`
/// letters. Step probabilities are stationary conditionals, so walking from
/// state 0 multiplies out to the exact word probability.
#[derive(Clone, Debug)]
pub(crate) struct Stepper<T> {
    pub n: usize,
    pub num_states: usize,
    /// `prob[state * n + sym]`
    pub prob: Vec<T>,
    /// `next[state * n + sym]`
    pub next: Vec<u32>,
}

impl<T: Scalar> Stepper<T> {
    fn iid(probs: &[T]) -> Self {
        Self { n: probs.len(), num_states: 1, prob: probs.to_vec(), next: vec![0; probs.len()] }
    }

    fn markov(src: &MarkovSource<T>) -> Self {
        let n = src.alphabet.size();
        let m = src.order;
        let offsets: Vec<usize> = (0..=m + 1).map(|l| (0..l).map(|k| n.pow(k as u32)).sum()).collect();
        let num_states = offsets[m + 1];
        let mut prob = vec![T::zero(); num_states * n];
        let mut next = vec![0u32; num_states * n];
        let marginals: Vec<Vec<T>> = (0..=m).map(|l| src.prefix_marginal(l)).collect();
        for len in 0..=m {
            let count = n.pow(len as u32);
            for code in 0..count {
                let state = offsets[len] + code;
                for sym in 0..n {
                    let idx = state * n + sym;
                    if len < m {
                        let ext = code * n + sym;
                        next[idx] = (offsets[len + 1] + ext) as u32;
                        let base = marginals[len][code];
                        prob[idx] = if base > T::zero() { marginals[len + 1][ext] / base } else { T::zero() };
                    } else {
                        next[idx] = (offsets[m] + (code * n + sym) % count) as u32;
                        prob[idx] = src.transitions[code][sym];
                    }
                }
            }
        }
        Self { n, num_states, prob, next }
    }

    pub fn step(&self, state: u32, sym: Symbol) -> (T, u32) {
        let idx = state as usize * self.n + sym as usize;
        (self.prob[idx], self.next[idx])
    }
}

impl<T: Scalar> SourceModel<T> {
    pub fn kind(&self) -> SourceKind {
        match self {
            SourceModel::Iid(_) => SourceKind::Iid,
            SourceModel::Markov(m) => SourceKind::Markov { order: m.order },
            SourceModel::Empirical(_) => SourceKind::Empirical,
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        match self {
            SourceModel::Iid(m) => &m.alphabet,
            SourceModel::Markov(m) => &m.alphabet,
            SourceModel::Empirical(m) => &m.alphabet,
        }
    }

    /// True for models whose probabilities are estimates rather than exact.
    pub fn is_estimate(&self) -> bool {
        matches!(self, SourceModel::Empirical(_))
    }

    pub fn sample(&self, t: usize, seed: u64) -> SymbolSeq {
        self.sample_with(t, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn sample_with<R: Rng>(&self, t: usize, rng: &mut R) -> SymbolSeq {
        let out = match self {
            SourceModel::Iid(m) => {
                let dist = weighted(&m.probs);
                (0..t).map(|_| dist.sample(rng) as Symbol).collect()
            }
            SourceModel::Markov(m) => {
                let n = m.alphabet.size();
                let code = weighted(&m.initial).sample(rng);
                let mut start = vec![0; m.order];
                let mut c = code;
                for slot in start.iter_mut().rev() {
                    *slot = (c % n) as Symbol;
                    c /= n;
                }
                m.walk(code, start, t, rng)
            }
            SourceModel::Empirical(m) => {
                let len = m.corpus.len();
                let start = match m.window {
                    WindowPolicy::Contiguous if len >= t => rng.gen_range(0..=len - t),
                    _ => rng.gen_range(0..len),
                };
                (0..t).map(|i| m.corpus[(start + i) % len]).collect()
            }
        };
        SymbolSeq::from_trusted(self.alphabet().clone(), out)
    }

    /// Exact stationary probability of `word`.
    pub fn word_probability(&self, word: &SymbolSeq) -> Result<T> {
        if word.is_empty() {
            return Err(Error::Domain("word must be non-empty".into()));
        }
        if *word.alphabet().as_ref() != **self.alphabet() {
            return Err(Error::AlphabetMismatch);
        }
        let w = word.symbols();
        match self {
            SourceModel::Iid(m) => Ok(w.iter().map(|&s| m.probs[s as usize]).fold(T::one(), |a, p| a * p)),
            SourceModel::Markov(m) => {
                let n = m.alphabet.size();
                let k = m.order.min(w.len());
                let head = w[..k].iter().fold(0usize, |c, &s| c * n + s as usize);
                let mut p = m.prefix_marginal(k)[head];
                let contexts = m.num_contexts();
                let mut code = head;
                for &s in &w[k..] {
                    p = p * m.transitions[code][s as usize];
                    code = (code * n + s as usize) % contexts;
                }
                Ok(p)
            }
            SourceModel::Empirical(_) => Err(Error::UnsupportedForEmpirical),
        }
    }

    /// Word probability, falling back to a flagged corpus estimate for empirical models.
    pub fn word_probability_estimate(&self, word: &SymbolSeq) -> Result<Estimate<T>> {
        match self {
            SourceModel::Empirical(m) => {
                Ok(Estimate { value: T::lit(m.estimated_word_probability(word.symbols())), estimated: true })
            }
            _ => Ok(Estimate { value: self.word_probability(word)?, estimated: false }),
        }
    }

    /// Per-letter entropy `H(W_1..W_t) / t` in bits, by closed form.
    pub fn exact_block_entropy(&self, t: usize) -> Result<T> {
        self.exact_block_entropy_with_budget(t, DEFAULT_BUDGET)
    }

    pub fn exact_block_entropy_with_budget(&self, t: usize, budget: u128) -> Result<T> {
        if t == 0 {
            return Err(Error::Domain("block length must be at least 1".into()));
        }
        match self {
            SourceModel::Iid(m) => Ok(entropy_bits(m.probs.iter().copied())),
            SourceModel::Markov(m) => {
                check_budget(m.num_contexts() as u128, budget)?;
                let tt = T::from_count(t as u64);
                if t >= m.order {
                    let head = entropy_bits(m.initial.iter().copied());
                    let steps = T::from_count((t - m.order) as u64);
                    Ok((head + steps * m.conditional_entropy()) / tt)
                } else {
                    Ok(entropy_bits(m.prefix_marginal(t)) / tt)
                }
            }
            SourceModel::Empirical(_) => Err(Error::UnsupportedForEmpirical),
        }
    }

    /// Per-letter block entropy by summing over every length-`t` word.
    pub fn block_entropy_by_enumeration(&self, t: usize, budget: u128) -> Result<T> {
        let dist = self.word_distribution(t, budget)?;
        Ok(entropy_bits(dist) / T::from_count(t as u64))
    }

    /// Exact probabilities of all `n^t` words, indexed by base-n code (first letter most significant).
    pub fn word_distribution(&self, t: usize, budget: u128) -> Result<Vec<T>> {
        if t == 0 {
            return Err(Error::Domain("word length must be at least 1".into()));
        }
        let n = self.alphabet().size();
        check_budget(saturating_pow(n, t), budget)?;
        let stepper = self.stepper()?;
        let mut probs = vec![T::one()];
        let mut states = vec![0u32];
        for _ in 0..t {
            let mut np = Vec::with_capacity(probs.len() * n);
            let mut ns = Vec::with_capacity(probs.len() * n);
            for (&p, &st) in probs.iter().zip(&states) {
                for sym in 0..n {
                    let (q, nx) = stepper.step(st, sym as Symbol);
                    np.push(p * q);
                    ns.push(nx);
                }
            }
            probs = np;
            states = ns;
        }
        Ok(probs)
    }

    /// Stationary single-letter law.
    pub fn letter_marginal(&self) -> Result<Vec<T>> {
        match self {
            SourceModel::Iid(m) => Ok(m.probs.clone()),
            SourceModel::Markov(m) => Ok(m.prefix_marginal(1)),
            SourceModel::Empirical(_) => Err(Error::UnsupportedForEmpirical),
        }
    }

    pub(crate) fn stepper(&self) -> Result<Stepper<T>> {
        match self {
            SourceModel::Iid(m) => Ok(Stepper::iid(&m.probs)),
            SourceModel::Markov(m) => Ok(Stepper::markov(m)),
            SourceModel::Empirical(_) => Err(Error::EstimateRejected),
        }
    }
}

/// IID model whose letter law is the corpus letter-frequency vector.
pub fn fit_empirical_iid<T: Scalar>(corpus: &SymbolSeq, alphabet: &Arc<Alphabet>) -> Result<SourceModel<T>> {
    fit_iid(corpus, alphabet, false)
}

/// Add-one smoothed variant of [`fit_empirical_iid`]; the result is flagged as smoothed.
pub fn fit_empirical_iid_add_one<T: Scalar>(corpus: &SymbolSeq, alphabet: &Arc<Alphabet>) -> Result<SourceModel<T>> {
    fit_iid(corpus, alphabet, true)
}

fn fit_iid<T: Scalar>(corpus: &SymbolSeq, alphabet: &Arc<Alphabet>, add_one: bool) -> Result<SourceModel<T>> {
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    if *corpus.alphabet().as_ref() != **alphabet {
        return Err(Error::AlphabetMismatch);
    }
    let pseudo = u64::from(add_one);
    let mut counts = vec![pseudo; alphabet.size()];
    for &s in corpus.symbols() {
        counts[s as usize] += 1;
    }
    let total = T::from_count(counts.iter().sum());
    let probs = counts.into_iter().map(|c| T::from_count(c) / total).collect();
    Ok(SourceModel::Iid(IidSource::new(alphabet.clone(), probs)?.with_smoothed_flag(add_one)))
}

/// Mutually independent sources feeding one cipher: plaintext first, then keys.
#[derive(Clone, Debug, PartialEq)]
pub struct SourceTuple<T> {
    components: Vec<SourceModel<T>>,
}

impl<T: Scalar> SourceTuple<T> {
    pub fn new(components: Vec<SourceModel<T>>) -> Result<Self> {
        if components.len() < 2 {
            return Err(Error::TooFewSources(components.len()));
        }
        let first = components[0].alphabet().clone();
        if components.iter().any(|c| **c.alphabet() != *first) {
            return Err(Error::AlphabetMismatch);
        }
        Ok(Self { components })
    }

    pub fn components(&self) -> &[SourceModel<T>] {
        &self.components
    }

    pub fn s(&self) -> usize {
        self.components.len()
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        self.components[0].alphabet()
    }

    pub fn any_estimate(&self) -> bool {
        self.components.iter().any(SourceModel::is_estimate)
    }

    /// Exact per-letter block entropies `h_t(X^i)` of every component.
    pub fn block_entropies(&self, t: usize) -> Result<Vec<T>> {
        self.components.iter().map(|c| c.exact_block_entropy(t)).collect()
    }
}
