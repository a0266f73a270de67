//! The s-source modular-addition running-key cipher.
//!
//! Ciphertext letters are `Z_i = (X1_i + X2_i + ... + Xs_i) mod n`. The nested
//! reductions of the textbook formulation equal the flat sum reduced once, so
//! key streams can be supplied in any order.

use std::sync::Arc;

use crate::alphabet::{Alphabet, Symbol, SymbolSeq};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct CipherSpec {
    alphabet: Arc<Alphabet>,
    num_sources: usize,
}

impl CipherSpec {
    /// `num_sources` counts the plaintext plus every key stream.
    pub fn new(alphabet: Arc<Alphabet>, num_sources: usize) -> Result<Self> {
        if num_sources < 2 {
            return Err(Error::TooFewSources(num_sources));
        }
        Ok(Self { alphabet, num_sources })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn num_sources(&self) -> usize {
        self.num_sources
    }

    pub fn num_keys(&self) -> usize {
        self.num_sources - 1
    }

    fn check(&self, text: &SymbolSeq, keys: &[SymbolSeq]) -> Result<()> {
        if keys.len() != self.num_keys() {
            return Err(Error::WrongKeyCount { expected: self.num_keys(), found: keys.len() });
        }
        if *text.alphabet().as_ref() != *self.alphabet {
            return Err(Error::AlphabetMismatch);
        }
        for k in keys {
            if !k.same_alphabet(text) {
                return Err(Error::AlphabetMismatch);
            }
            if k.len() != text.len() {
                return Err(Error::LengthMismatch { expected: text.len(), found: k.len() });
            }
        }
        Ok(())
    }

    /// Sum of the key streams at each position, reduced mod n.
    fn key_sum(&self, keys: &[SymbolSeq], len: usize) -> Vec<u64> {
        let n = self.alphabet.size() as u64;
        let mut acc = vec![0u64; len];
        for k in keys {
            for (a, &s) in acc.iter_mut().zip(k.symbols()) {
                *a = (*a + s as u64) % n;
            }
        }
        acc
    }
}

pub fn encipher(plaintext: &SymbolSeq, keys: &[SymbolSeq], spec: &CipherSpec) -> Result<SymbolSeq> {
    spec.check(plaintext, keys)?;
    let n = spec.alphabet.size() as u64;
    let sum = spec.key_sum(keys, plaintext.len());
    let out = plaintext.symbols().iter().zip(sum).map(|(&x, k)| ((x as u64 + k) % n) as Symbol).collect();
    Ok(SymbolSeq::from_trusted(plaintext.alphabet().clone(), out))
}

pub fn decipher(ciphertext: &SymbolSeq, keys: &[SymbolSeq], spec: &CipherSpec) -> Result<SymbolSeq> {
    spec.check(ciphertext, keys)?;
    let n = spec.alphabet.size() as u64;
    let sum = spec.key_sum(keys, ciphertext.len());
    let out = ciphertext.symbols().iter().zip(sum).map(|(&z, k)| ((z as u64 + n - k) % n) as Symbol).collect();
    Ok(SymbolSeq::from_trusted(ciphertext.alphabet().clone(), out))
}

/// Every `stride`-th letter (1-based positions `stride, 2*stride, ..`) of `source`, `needed` of them.
pub fn extract_spaced_key(source: &SymbolSeq, stride: usize, needed: usize) -> Result<SymbolSeq> {
    KeyTape::new(source.clone()).take_spaced(stride, needed)
}

/// A key text consumed front to back.
///
/// Letters handed out (or skipped over by a stride) are never handed out
/// again, so a spaced key drawn from a tape never reuses material.
#[derive(Clone, Debug)]
pub struct KeyTape {
    source: SymbolSeq,
    cursor: usize,
}

impl KeyTape {
    pub fn new(source: SymbolSeq) -> Self {
        Self { source, cursor: 0 }
    }

    /// Number of letters already consumed (used or omitted).
    pub fn consumed(&self) -> usize {
        self.cursor
    }

    pub fn remaining(&self) -> usize {
        self.source.len() - self.cursor
    }

    pub fn take_spaced(&mut self, stride: usize, needed: usize) -> Result<SymbolSeq> {
        if stride == 0 {
            return Err(Error::Domain("stride must be at least 1".into()));
        }
        let span = stride.checked_mul(needed).ok_or_else(|| Error::Domain("stride * length overflows".into()))?;
        if span > self.remaining() {
            return Err(Error::InsufficientKeyMaterial { needed: span, available: self.remaining() });
        }
        let window = &self.source.symbols()[self.cursor..self.cursor + span];
        let key = window.iter().skip(stride - 1).step_by(stride).copied().collect();
        self.cursor += span;
        Ok(SymbolSeq::from_trusted(self.source.alphabet().clone(), key))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::make_english_alphabet;
    use proptest::prelude::*;

    fn seq(a: &Arc<Alphabet>, s: &[Symbol]) -> SymbolSeq {
        SymbolSeq::new(a.clone(), s.to_vec()).unwrap()
    }

    #[test]
    fn encipher_examples() {
        let en = Arc::new(make_english_alphabet(false));
        let spec = CipherSpec::new(en.clone(), 2).unwrap();
        let z = encipher(&seq(&en, &[0, 1]), &[seq(&en, &[0, 0])], &spec).unwrap();
        assert_eq!(z.symbols(), &[0, 1]);

        let bin = Arc::new(Alphabet::numeric(2).unwrap());
        let spec2 = CipherSpec::new(bin.clone(), 3).unwrap();
        let keys = [seq(&bin, &[1, 1, 0]), seq(&bin, &[0, 1, 1])];
        let z = encipher(&seq(&bin, &[1, 0, 1]), &keys, &spec2).unwrap();
        assert_eq!(z.symbols(), &[0, 0, 0]);
        assert_eq!(decipher(&z, &keys, &spec2).unwrap().symbols(), &[1, 0, 1]);

        let spec3 = CipherSpec::new(en.clone(), 3).unwrap();
        let keys = [seq(&en, &[25]), seq(&en, &[3])];
        let z = encipher(&seq(&en, &[7]), &keys, &spec3).unwrap();
        assert_eq!(z.symbols(), &[9]);
        assert_eq!(decipher(&z, &keys, &spec3).unwrap().symbols(), &[7]);
    }

    #[test]
    fn shape_errors() {
        let en = Arc::new(make_english_alphabet(false));
        assert_eq!(CipherSpec::new(en.clone(), 1), Err(Error::TooFewSources(1)));
        let spec = CipherSpec::new(en.clone(), 3).unwrap();
        let p = seq(&en, &[1, 2]);
        assert!(matches!(
            encipher(&p, &[seq(&en, &[1, 2])], &spec),
            Err(Error::WrongKeyCount { expected: 2, found: 1 })
        ));
        assert!(matches!(
            encipher(&p, &[seq(&en, &[1, 2]), seq(&en, &[1])], &spec),
            Err(Error::LengthMismatch { expected: 2, found: 1 })
        ));
        let other = Arc::new(make_english_alphabet(true));
        assert_eq!(encipher(&p, &[seq(&en, &[1, 2]), seq(&other, &[1, 2])], &spec), Err(Error::AlphabetMismatch));
    }

    #[test]
    fn spaced_key_examples() {
        let a = Arc::new(Alphabet::numeric(20).unwrap());
        let ten = seq(&a, &(0..10).collect::<Vec<_>>());
        assert_eq!(extract_spaced_key(&ten, 10, 1).unwrap().symbols(), &[9]);
        let twenty = seq(&a, &(0..20).collect::<Vec<_>>());
        assert_eq!(extract_spaced_key(&twenty, 10, 2).unwrap().symbols(), &[9, 19]);
        assert!(matches!(
            extract_spaced_key(&ten, 10, 2),
            Err(Error::InsufficientKeyMaterial { needed: 20, available: 10 })
        ));
        assert!(extract_spaced_key(&ten, 0, 1).is_err());
    }

    #[test]
    fn tape_never_reuses_letters() {
        let a = Arc::new(Alphabet::numeric(20).unwrap());
        let mut tape = KeyTape::new(seq(&a, &(0..20).collect::<Vec<_>>()));
        assert_eq!(tape.take_spaced(3, 2).unwrap().symbols(), &[2, 5]);
        assert_eq!(tape.consumed(), 6);
        assert_eq!(tape.take_spaced(1, 3).unwrap().symbols(), &[6, 7, 8]);
        assert!(tape.take_spaced(5, 3).is_err());
        assert_eq!(tape.remaining(), 11);
    }

    proptest! {
        #[test]
        fn decipher_inverts_encipher(
            n in prop::sample::select(vec![2usize, 3, 26, 27]),
            s in 2usize..=6,
            raw in prop::collection::vec(any::<u32>(), 0..64 * 6),
        ) {
            let a = Arc::new(Alphabet::numeric(n).unwrap());
            let spec = CipherSpec::new(a.clone(), s).unwrap();
            let t = raw.len() / s;
            let streams: Vec<SymbolSeq> = (0..s)
                .map(|j| seq(&a, &raw[j * t..(j + 1) * t].iter().map(|x| x % n as u32).collect::<Vec<_>>()))
                .collect();
            let z = encipher(&streams[0], &streams[1..], &spec).unwrap();
            prop_assert_eq!(&decipher(&z, &streams[1..], &spec).unwrap(), &streams[0]);
            let mut rev = streams[1..].to_vec();
            rev.reverse();
            prop_assert_eq!(encipher(&streams[0], &rev, &spec).unwrap(), z);
        }

        #[test]
        fn zero_key_is_identity(raw in prop::collection::vec(0u32..26, 0..100)) {
            let a = Arc::new(make_english_alphabet(false));
            let spec = CipherSpec::new(a.clone(), 2).unwrap();
            let p = seq(&a, &raw);
            let zero = seq(&a, &vec![0; raw.len()]);
            prop_assert_eq!(encipher(&p, &[zero], &spec).unwrap(), p);
        }
    }
}
