//! Plug-in estimates of block and conditional entropies from t-gram counts.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::sync::Arc;

use rayon::prelude::*;

use crate::alphabet::{Alphabet, Symbol, SymbolSeq};
use crate::error::{saturating_pow, Error, Result, DEFAULT_BUDGET};
use crate::scalar::{surprisal_term, Scalar};

const PARALLEL_THRESHOLD: usize = 1 << 16;

/// Sliding-window counts of all length-`order` words.
///
/// Words are packed as base-`radix` integers, first letter most significant.
#[derive(Clone, Debug, PartialEq)]
pub struct NgramTable {
    alphabet: Option<Arc<Alphabet>>,
    radix: usize,
    order: usize,
    counts: HashMap<u128, u64>,
    total: u64,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Smoothing {
    /// Raw relative frequencies.
    #[default]
    None,
    /// Add one to the count of every one of the `radix^order` words.
    AddOne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EstimatorConfig {
    pub smoothing: Smoothing,
    /// Cap on distinct t-grams held in memory.
    pub budget: u128,
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        Self { smoothing: Smoothing::None, budget: DEFAULT_BUDGET }
    }
}

impl NgramTable {
    pub fn order(&self) -> usize {
        self.order
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn distinct(&self) -> usize {
        self.counts.len()
    }

    pub fn radix(&self) -> usize {
        self.radix
    }

    pub fn count(&self, word: &[Symbol]) -> u64 {
        if word.len() != self.order {
            return 0;
        }
        let code = word.iter().fold(0u128, |c, &s| c * self.radix as u128 + s as u128);
        self.counts.get(&code).copied().unwrap_or(0)
    }

    pub fn decode_word(&self, code: u128) -> Vec<Symbol> {
        let mut w = vec![0; self.order];
        let mut c = code;
        for slot in w.iter_mut().rev() {
            *slot = (c % self.radix as u128) as Symbol;
            c /= self.radix as u128;
        }
        w
    }

    /// `(word, count)` pairs sorted by word.
    pub fn entries(&self) -> Vec<(Vec<Symbol>, u64)> {
        let mut codes: Vec<_> = self.counts.iter().map(|(&k, &v)| (k, v)).collect();
        codes.sort_unstable();
        codes.into_iter().map(|(k, v)| (self.decode_word(k), v)).collect()
    }

    /// Tab-delimited `word<TAB>count` lines with a header.
    pub fn export_delimited(&self) -> String {
        let mut out = String::from("word\tcount\n");
        for (word, count) in self.entries() {
            let rendered: String = match &self.alphabet {
                Some(a) => word.iter().map(|&s| a.char_of(s).unwrap_or('?')).collect(),
                None => word.iter().map(|s| s.to_string()).collect::<Vec<_>>().join("."),
            };
            let _ = writeln!(out, "{rendered}\t{count}");
        }
        out
    }

    fn merge(mut self, other: NgramTable, budget: u128) -> Result<NgramTable> {
        self.total += other.total;
        for (k, v) in other.counts {
            *self.counts.entry(k).or_insert(0) += v;
        }
        check_distinct(self.counts.len(), budget)?;
        Ok(self)
    }

    /// Plug-in entropy of the t-gram law in bits (not divided by the order).
    pub fn entropy<T: Scalar>(&self, smoothing: Smoothing) -> T {
        match smoothing {
            Smoothing::None => {
                let total = T::from_count(self.total);
                self.counts.values().map(|&c| surprisal_term(T::from_count(c) / total)).sum()
            }
            Smoothing::AddOne => {
                let words = saturating_pow(self.radix, self.order);
                let denom = T::from_u128(words + self.total as u128).expect("finite");
                let seen: T = self.counts.values().map(|&c| surprisal_term(T::from_count(c + 1) / denom)).sum();
                let unseen = T::from_u128(words - self.counts.len() as u128).expect("finite");
                seen + unseen * surprisal_term(T::one() / denom)
            }
        }
    }
}

fn check_distinct(distinct: usize, budget: u128) -> Result<()> {
    if distinct as u128 > budget {
        Err(Error::BudgetExceeded { needed: distinct as u128, budget })
    } else {
        Ok(())
    }
}

fn count_slice(symbols: &[Symbol], radix: usize, order: usize, budget: u128) -> Result<HashMap<u128, u64>> {
    let modulus = saturating_pow(radix, order);
    let mut counts = HashMap::new();
    let mut code = 0u128;
    for (i, &s) in symbols.iter().enumerate() {
        code = if order == 1 { s as u128 } else { (code * radix as u128 + s as u128) % modulus };
        if i + 1 >= order {
            *counts.entry(code).or_insert(0) += 1;
            if counts.len() as u128 > budget {
                return Err(Error::BudgetExceeded { needed: counts.len() as u128, budget });
            }
        }
    }
    Ok(counts)
}

pub(crate) fn count_raw(
    symbols: &[Symbol],
    radix: usize,
    order: usize,
    budget: u128,
    alphabet: Option<Arc<Alphabet>>,
) -> Result<NgramTable> {
    if order == 0 {
        return Err(Error::Domain("order must be at least 1".into()));
    }
    if symbols.len() < order {
        return Err(Error::SequenceTooShort { length: symbols.len(), order });
    }
    // packing needs radix^order to fit with one spare factor of radix
    if saturating_pow(radix, order + 1) == u128::MAX {
        return Err(Error::Domain(format!("order {order} too large for radix {radix}")));
    }
    let windows = symbols.len() - order + 1;
    let empty = NgramTable { alphabet, radix, order, counts: HashMap::new(), total: 0 };
    if symbols.len() < PARALLEL_THRESHOLD {
        let counts = count_slice(symbols, radix, order, budget)?;
        return Ok(NgramTable { counts, total: windows as u64, ..empty });
    }
    // shards overlap by order-1 letters so every window is counted exactly once
    let shard = PARALLEL_THRESHOLD;
    let starts: Vec<usize> = (0..windows).step_by(shard).collect();
    let tables = starts
        .par_iter()
        .map(|&start| {
            let end = (start + shard + order - 1).min(symbols.len());
            let counts = count_slice(&symbols[start..end], radix, order, budget)?;
            Ok(NgramTable { counts, total: (end - start - order + 1) as u64, ..empty.clone() })
        })
        .collect::<Result<Vec<_>>>()?;
    tables.into_iter().try_fold(empty.clone(), |acc, t| acc.merge(t, budget))
}

pub fn count_ngrams(seq: &SymbolSeq, order: usize) -> Result<NgramTable> {
    count_ngrams_with_budget(seq, order, DEFAULT_BUDGET)
}

pub fn count_ngrams_with_budget(seq: &SymbolSeq, order: usize, budget: u128) -> Result<NgramTable> {
    count_raw(seq.symbols(), seq.alphabet().size(), order, budget, Some(seq.alphabet().clone()))
}

/// Per-letter plug-in block entropy `H(t-grams) / t`.
pub fn estimate_block_entropy<T: Scalar>(seq: &SymbolSeq, order: usize) -> Result<T> {
    estimate_block_entropy_with(seq, order, EstimatorConfig::default())
}

pub fn estimate_block_entropy_with<T: Scalar>(seq: &SymbolSeq, order: usize, config: EstimatorConfig) -> Result<T> {
    let table = count_ngrams_with_budget(seq, order, config.budget)?;
    Ok(table.entropy::<T>(config.smoothing) / T::from_count(order as u64))
}

/// `h_t(W,V) - h_t(V)`, with the joint estimated on the product alphabet.
pub fn estimate_conditional_entropy<T: Scalar>(seq_w: &SymbolSeq, seq_v: &SymbolSeq, order: usize) -> Result<T> {
    estimate_conditional_entropy_with(seq_w, seq_v, order, EstimatorConfig::default())
}

pub fn estimate_conditional_entropy_with<T: Scalar>(
    seq_w: &SymbolSeq,
    seq_v: &SymbolSeq,
    order: usize,
    config: EstimatorConfig,
) -> Result<T> {
    if seq_w.len() != seq_v.len() {
        return Err(Error::LengthMismatch { expected: seq_w.len(), found: seq_v.len() });
    }
    let nv = seq_v.alphabet().size();
    let radix = seq_w.alphabet().size() * nv;
    let paired: Vec<Symbol> =
        seq_w.symbols().iter().zip(seq_v.symbols()).map(|(&w, &v)| w * nv as Symbol + v).collect();
    let joint = count_raw(&paired, radix, order, config.budget, None)?;
    let marginal = count_ngrams_with_budget(seq_v, order, config.budget)?;
    let t = T::from_count(order as u64);
    let h_joint = joint.entropy::<T>(config.smoothing) / t;
    let h_v = marginal.entropy::<T>(config.smoothing) / t;
    Ok(h_joint - h_v)
}
