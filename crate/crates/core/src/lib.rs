//! Laboratory for generalized running-key ciphers.
//!
//! A plaintext is enciphered by adding `s - 1` key streams letter by letter
//! modulo the alphabet size. The crate computes and estimates the quantities
//! that govern how much a keyless reader can recover:
//!
//! * per-letter block entropies of the sources, exact ([`source`]) or
//!   estimated from text ([`estimate`]);
//! * the security index `Lambda_t`, the equivocation inequalities and the
//!   Fano-type limit on letter recovery ([`bounds`]);
//! * exact joint laws of small instances ([`oracle`]) and Monte-Carlo
//!   attacks ([`attack`]) to check those bounds numerically.
//!
//! All probability arithmetic is generic over [`Scalar`] (`f64` or `f32`);
//! the `*64` / `*32` aliases below fix the precision.

pub mod alphabet;
pub mod analysis;
pub mod attack;
pub mod bounds;
pub mod cipher;
pub mod error;
pub mod estimate;
pub mod modelfile;
pub mod oracle;
pub mod scalar;
pub mod source;

pub use alphabet::{
    decode, ingest_bytes, ingest_text, make_english_alphabet, Alphabet, CorpusPolicy, Symbol, SymbolSeq,
};
pub use error::{Error, Result, DEFAULT_BUDGET};
pub use scalar::Scalar;

pub type SourceModel64 = source::SourceModel<f64>;
pub type SourceModel32 = source::SourceModel<f32>;
pub type SourceTuple64 = source::SourceTuple<f64>;
pub type SourceTuple32 = source::SourceTuple<f32>;
pub type JointDistribution64 = oracle::JointDistribution<f64>;
pub type JointDistribution32 = oracle::JointDistribution<f32>;
pub type BoundReport64 = bounds::BoundReport<f64>;
pub type BoundReport32 = bounds::BoundReport<f32>;
pub type AttackResult64 = attack::AttackResult<f64>;
pub type AttackResult32 = attack::AttackResult<f32>;
pub type MapLetterAttacker64 = attack::MapLetterAttacker<f64>;
pub type ShannonAnalysis64 = analysis::ShannonAnalysis<f64>;
pub type TypicalSetReport64 = oracle::TypicalSetReport<f64>;
