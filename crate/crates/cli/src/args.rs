use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Running-key cipher laboratory: ciphers, entropies, bounds, exact oracles and attacks.
#[derive(Debug, Parser, Serialize)]
#[command(name = "runkey", version)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Serialize)]
pub struct GlobalOpts {
    /// english26, english27 (with space) or custom:<file> (every character of the file except line breaks).
    #[arg(long, global = true, default_value = "english26")]
    pub alphabet: String,

    /// Number of sources (plaintext plus keys).
    #[arg(long, global = true)]
    pub s: Option<usize>,

    /// Block length.
    #[arg(long, global = true)]
    pub t: Option<usize>,

    /// Key stride: use every k-th letter of each key text.
    #[arg(long, global = true, default_value_t = 1)]
    pub stride: usize,

    #[arg(long, global = true, default_value_t = 10_000)]
    pub trials: u64,

    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    /// Cap on enumerated table entries.
    #[arg(long, global = true, env = "RUNKEY_BUDGET", default_value_t = runkey::DEFAULT_BUDGET)]
    pub budget: u128,

    /// Report destination (standard output if omitted).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Report)]
    pub format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    /// One JSON document.
    Report,
    /// Flat tab-separated `key value` lines.
    Summary,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Add key texts to a plaintext letter by letter.
    Encrypt(EncryptArgs),
    /// Subtract key texts from a ciphertext.
    Decrypt(DecryptArgs),
    /// Block-entropy profile of a corpus or a model.
    Entropy(EntropyArgs),
    /// Security index, equivocation inequalities and recovery limit.
    Bounds(BoundsArgs),
    /// Exact check of the equivocation inequalities and each proof step.
    VerifyLemma(ModelsArgs),
    /// Near-equiprobable plaintext set for one ciphertext.
    TypicalSet(TypicalSetArgs),
    /// Monte-Carlo letter-recovery rate of a keyless attacker.
    Attack(AttackArgs),
    /// The classical sum-of-texts and spaced-letter analyses.
    ShannonAnalysis(ShannonArgs),
    /// Fit a source model file from a corpus.
    Fit(FitArgs),
}

#[derive(Debug, Args, Serialize)]
pub struct EncryptArgs {
    #[arg(long)]
    pub plaintext: PathBuf,
    /// Key text file; repeat once per key.
    #[arg(long = "key", required = true)]
    pub keys: Vec<PathBuf>,
    /// Write the ciphertext here as well as into the report.
    #[arg(long)]
    pub ciphertext_out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct DecryptArgs {
    #[arg(long)]
    pub ciphertext: PathBuf,
    #[arg(long = "key", required = true)]
    pub keys: Vec<PathBuf>,
    #[arg(long)]
    pub plaintext_out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SmoothingArg {
    None,
    AddOne,
}

#[derive(Debug, Args, Serialize)]
pub struct EntropyArgs {
    /// Text corpus to estimate from.
    #[arg(long, conflicts_with = "model", required_unless_present = "model")]
    pub corpus: Option<PathBuf>,
    /// Model file to evaluate exactly.
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = SmoothingArg::None)]
    pub smoothing: SmoothingArg,
    /// Write the order-t n-gram counts here.
    #[arg(long, requires = "corpus")]
    pub ngrams_out: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct BoundsArgs {
    /// Per-source entropy h_t(X^i); repeat once per source.
    #[arg(long = "entropy", conflicts_with = "models")]
    pub entropies: Vec<f64>,
    /// Source model files (plaintext first); entropies are computed exactly at --t.
    #[arg(long = "model")]
    pub models: Vec<PathBuf>,
    /// Measured equivocations h_t(X^i/Z), one per source.
    #[arg(long = "equivocation")]
    pub equivocations: Vec<f64>,
    /// Alphabet size (defaults to the size of --alphabet).
    #[arg(long)]
    pub n: Option<usize>,
    /// Use this value for log2 n instead of the exact logarithm.
    #[arg(long)]
    pub log2_n: Option<f64>,
}

#[derive(Debug, Args, Serialize)]
pub struct ModelsArgs {
    /// Source model files, plaintext first.
    #[arg(long = "model", required = true)]
    pub models: Vec<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct TypicalSetArgs {
    #[command(flatten)]
    pub models: ModelsArgs,
    #[arg(long, default_value_t = 0.5)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 0.2)]
    pub delta: f64,
    /// Ciphertext word to condition on; sampled from its law when omitted.
    #[arg(long)]
    pub ciphertext: Option<String>,
    /// Exit with the verification status when the spread or mass gate fails.
    #[arg(long)]
    pub gate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum AttackerArg {
    Map,
    PriorArgmax,
    Identity,
}

#[derive(Debug, Args, Serialize)]
pub struct AttackArgs {
    #[command(flatten)]
    pub models: ModelsArgs,
    #[arg(long, value_enum, default_value_t = AttackerArg::Map)]
    pub attacker: AttackerArg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PresetArg {
    SumOfTexts,
    SpacedLetter,
}

#[derive(Debug, Args, Serialize)]
pub struct ShannonArgs {
    #[arg(long, value_enum)]
    pub cipher: PresetArg,
    #[arg(long)]
    pub h_inf: Option<f64>,
    #[arg(long)]
    pub h1_key: Option<f64>,
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitKind {
    Iid,
    IidAddOne,
    Empirical,
}

#[derive(Debug, Args, Serialize)]
pub struct FitArgs {
    #[arg(long)]
    pub corpus: PathBuf,
    #[arg(long, value_enum, default_value_t = FitKind::Iid)]
    pub kind: FitKind,
    /// Where to write the model file.
    #[arg(long)]
    pub model_out: PathBuf,
}
