//! Alphabets, symbol sequences and corpus ingestion.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A symbol value in `0..n`.
pub type Symbol = u32;

/// The symbol set `{0, .., n-1}` together with its character codec.
///
/// Position in the codec is the symbol value.
#[derive(Clone)]
pub struct Alphabet {
    codec: Vec<char>,
    lookup: HashMap<char, Symbol>,
}

impl PartialEq for Alphabet {
    fn eq(&self, other: &Self) -> bool {
        self.codec == other.codec
    }
}

impl Eq for Alphabet {}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Alphabet")
            .field("size", &self.codec.len())
            .field("codec", &self.codec.iter().collect::<String>())
            .finish()
    }
}

impl Alphabet {
    /// Build an alphabet from an explicit, duplicate-free codec of at least two characters.
    pub fn new(codec: Vec<char>) -> Result<Self> {
        if codec.len() < 2 {
            return Err(Error::InvalidAlphabet(format!("size {} < 2", codec.len())));
        }
        if codec.len() > u32::MAX as usize {
            return Err(Error::InvalidAlphabet("too many symbols".into()));
        }
        let mut lookup = HashMap::with_capacity(codec.len());
        for (i, &c) in codec.iter().enumerate() {
            if lookup.insert(c, i as Symbol).is_some() {
                return Err(Error::InvalidAlphabet(format!("duplicate character {c:?}")));
            }
        }
        Ok(Self { codec, lookup })
    }

    /// Anonymous alphabet of size `n`; symbols render as consecutive code points from '0'.
    ///
    /// Used for synthetic experiments where only `n` matters.
    pub fn numeric(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidAlphabet(format!("size {n} < 2")));
        }
        let codec = (0..n)
            .map(|i| {
                char::from_u32('0' as u32 + i as u32)
                    .ok_or_else(|| Error::InvalidAlphabet(format!("size {n} too large")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(codec)
    }

    pub fn size(&self) -> usize {
        self.codec.len()
    }

    pub fn codec(&self) -> &[char] {
        &self.codec
    }

    pub fn symbol_of(&self, c: char) -> Option<Symbol> {
        self.lookup.get(&c).copied()
    }

    pub fn char_of(&self, s: Symbol) -> Option<char> {
        self.codec.get(s as usize).copied()
    }

    pub fn log2_size(&self) -> f64 {
        (self.size() as f64).log2()
    }

    pub fn contains_space(&self) -> bool {
        self.lookup.contains_key(&' ')
    }
}

/// The built-in English alphabet: `a..z`, followed by space when `keep_spaces`.
pub fn make_english_alphabet(keep_spaces: bool) -> Alphabet {
    let mut codec: Vec<char> = ('a'..='z').collect();
    if keep_spaces {
        codec.push(' ');
    }
    Alphabet::new(codec).expect("english codec is valid")
}

/// A finite word over an alphabet.
#[derive(Clone, PartialEq, Eq)]
pub struct SymbolSeq {
    alphabet: Arc<Alphabet>,
    symbols: Vec<Symbol>,
}

impl fmt::Debug for SymbolSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SymbolSeq(n={}, {:?})", self.alphabet.size(), self.symbols)
    }
}

impl SymbolSeq {
    pub fn new(alphabet: Arc<Alphabet>, symbols: Vec<Symbol>) -> Result<Self> {
        let n = alphabet.size();
        if let Some(&bad) = symbols.iter().find(|&&s| s as usize >= n) {
            return Err(Error::Domain(format!("symbol {bad} outside alphabet of size {n}")));
        }
        Ok(Self { alphabet, symbols })
    }

    pub(crate) fn from_trusted(alphabet: Arc<Alphabet>, symbols: Vec<Symbol>) -> Self {
        debug_assert!(symbols.iter().all(|&s| (s as usize) < alphabet.size()));
        Self { alphabet, symbols }
    }

    pub fn empty(alphabet: Arc<Alphabet>) -> Self {
        Self { alphabet, symbols: Vec::new() }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Prefix of length `len` (or the whole sequence if shorter).
    pub fn prefix(&self, len: usize) -> SymbolSeq {
        let len = len.min(self.len());
        Self::from_trusted(self.alphabet.clone(), self.symbols[..len].to_vec())
    }

    pub fn same_alphabet(&self, other: &SymbolSeq) -> bool {
        Arc::ptr_eq(&self.alphabet, &other.alphabet) || *self.alphabet == *other.alphabet
    }
}

/// Character filtering rules applied by [`ingest_text`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CorpusPolicy {
    /// Map ASCII upper-case letters to lower case before lookup.
    pub fold_case: bool,
    /// Map whitespace to the space symbol; otherwise whitespace is skipped.
    pub keep_spaces: bool,
    /// Skip unmapped characters instead of failing.
    pub drop_unknown: bool,
}

impl Default for CorpusPolicy {
    fn default() -> Self {
        Self { fold_case: true, keep_spaces: false, drop_unknown: true }
    }
}

impl CorpusPolicy {
    pub fn strict() -> Self {
        Self { fold_case: false, keep_spaces: false, drop_unknown: false }
    }
}

/// Convert text into symbols. `UnmappedCharacter` carries the char index of the offender.
pub fn ingest_text(raw: &str, alphabet: &Arc<Alphabet>, policy: CorpusPolicy) -> Result<SymbolSeq> {
    let space = alphabet.symbol_of(' ');
    let mut out = Vec::with_capacity(raw.len());
    for (pos, c) in raw.chars().enumerate() {
        if c.is_whitespace() {
            if !policy.keep_spaces {
                continue;
            }
            if let Some(sym) = alphabet.symbol_of(c).or(space) {
                out.push(sym);
                continue;
            }
        }
        let c = if policy.fold_case { c.to_ascii_lowercase() } else { c };
        match alphabet.symbol_of(c) {
            Some(sym) => out.push(sym),
            None if policy.drop_unknown => {}
            None => return Err(Error::UnmappedCharacter(pos)),
        }
    }
    Ok(SymbolSeq::from_trusted(alphabet.clone(), out))
}

/// Byte-level entry point: the bytes must be UTF-8.
pub fn ingest_bytes(raw: &[u8], alphabet: &Arc<Alphabet>, policy: CorpusPolicy) -> Result<SymbolSeq> {
    let text = std::str::from_utf8(raw).map_err(|e| Error::InvalidUtf8(e.valid_up_to()))?;
    ingest_text(text, alphabet, policy)
}

pub fn decode(seq: &SymbolSeq) -> String {
    let codec = seq.alphabet.codec();
    seq.symbols.iter().map(|&s| codec[s as usize]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn en26() -> Arc<Alphabet> {
        Arc::new(make_english_alphabet(false))
    }

    #[test]
    fn english_sizes() {
        let a = make_english_alphabet(false);
        assert_eq!(a.size(), 26);
        assert!((a.log2_size() - 4.700).abs() < 5e-4);
        assert_eq!(make_english_alphabet(true).size(), 27);
        assert_eq!(a.symbol_of('a'), Some(0));
        assert_eq!(make_english_alphabet(true).symbol_of('a'), Some(0));
        assert_eq!(make_english_alphabet(true).symbol_of(' '), Some(26));
    }

    #[test]
    fn invalid_alphabets() {
        assert!(Alphabet::new(vec!['a']).is_err());
        assert!(Alphabet::new(vec!['a', 'b', 'a']).is_err());
        assert!(Alphabet::numeric(1).is_err());
        assert_eq!(Alphabet::numeric(3).unwrap().codec(), &['0', '1', '2']);
    }

    #[test]
    fn ingest_examples() {
        let a = en26();
        assert_eq!(ingest_text("ab", &a, CorpusPolicy::strict()).unwrap().symbols(), &[0, 1]);
        let p = CorpusPolicy { fold_case: true, keep_spaces: false, drop_unknown: true };
        assert_eq!(ingest_text("A b!", &a, p).unwrap().symbols(), &[0, 1]);
        let strict = CorpusPolicy { drop_unknown: false, ..p };
        assert_eq!(ingest_text("a#", &a, strict), Err(Error::UnmappedCharacter(1)));
    }

    #[test]
    fn unmapped_position_counts_chars_not_bytes() {
        let a = en26();
        let strict = CorpusPolicy { drop_unknown: false, ..CorpusPolicy::default() };
        assert_eq!(ingest_text("aé#", &a, strict), Err(Error::UnmappedCharacter(1)));
    }

    #[test]
    fn spaces_map_to_space_symbol() {
        let a = Arc::new(make_english_alphabet(true));
        let p = CorpusPolicy { keep_spaces: true, ..CorpusPolicy::default() };
        let s = ingest_text("Hi,\nyou", &a, p).unwrap();
        assert_eq!(decode(&s), "hi you");
        let dropped = ingest_text("hi you", &a, CorpusPolicy::default()).unwrap();
        assert_eq!(decode(&dropped), "hiyou");
    }

    #[test]
    fn decode_examples() {
        let a = en26();
        assert_eq!(decode(&SymbolSeq::new(a.clone(), vec![0, 1]).unwrap()), "ab");
        assert_eq!(decode(&SymbolSeq::empty(a.clone())), "");
        let s = ingest_text("hello", &a, CorpusPolicy::default()).unwrap();
        assert_eq!(decode(&s), "hello");
    }

    #[test]
    fn invalid_utf8_rejected() {
        let a = en26();
        assert_eq!(ingest_bytes(b"ab\xff", &a, CorpusPolicy::default()), Err(Error::InvalidUtf8(2)));
    }

    #[test]
    fn out_of_range_symbol_rejected() {
        assert!(SymbolSeq::new(en26(), vec![26]).is_err());
    }

    proptest! {
        #[test]
        fn decode_then_ingest_roundtrips(
            spaces in any::<bool>(),
            raw in prop::collection::vec(0u32..27, 0..200),
        ) {
            let a = Arc::new(make_english_alphabet(spaces));
            let n = a.size() as u32;
            let syms: Vec<Symbol> = raw.into_iter().map(|s| s % n).collect();
            let seq = SymbolSeq::new(a.clone(), syms).unwrap();
            let policy = CorpusPolicy { keep_spaces: spaces, drop_unknown: false, fold_case: false };
            let back = ingest_text(&decode(&seq), &a, policy).unwrap();
            prop_assert_eq!(back, seq);
        }

        #[test]
        fn ingested_symbols_in_range(text in ".{0,200}") {
            let a = en26();
            let s = ingest_text(&text, &a, CorpusPolicy::default()).unwrap();
            prop_assert!(s.symbols().iter().all(|&x| (x as usize) < a.size()));
        }
    }
}
