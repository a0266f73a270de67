//! TOML model files.
//!
//! Probabilities are written with 17 significant digits so that reading a
//! file back reproduces every `f64` bit-for-bit.
//!
//! ```toml
//! format = "runkey-source-model"
//! version = 1
//! kind = "markov"
//! codec = ["0", "1"]
//!
//! [markov]
//! order = 1
//! initial = [5.0000000000000000e-01, 5.0000000000000000e-01]
//! transitions = [
//!   [0.0000000000000000e+00, 1.0000000000000000e+00],
//!   [1.0000000000000000e+00, 0.0000000000000000e+00],
//! ]
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use serde::Deserialize;

use crate::alphabet::{Alphabet, CorpusPolicy, SymbolSeq};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::source::{EmpiricalSource, IidSource, MarkovSource, SourceModel, WindowPolicy};

pub const FORMAT_TAG: &str = "runkey-source-model";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelDoc {
    format: String,
    version: u32,
    kind: String,
    codec: Vec<String>,
    iid: Option<IidSection>,
    markov: Option<MarkovSection>,
    empirical: Option<EmpiricalSection>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IidSection {
    probabilities: Vec<f64>,
    #[serde(default)]
    smoothed: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MarkovSection {
    order: usize,
    transitions: Vec<Vec<f64>>,
    initial: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct EmpiricalSection {
    window: String,
    corpus: String,
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn float_array<T: Scalar>(xs: &[T]) -> String {
    let items: Vec<String> = xs.iter().map(|x| float(x.as_f64())).collect();
    format!("[{}]", items.join(", "))
}

fn toml_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            '\r' => out.push_str("\\r"),
            c if c.is_control() => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Serialise a model to the TOML model-file format.
pub fn write_model<T: Scalar>(model: &SourceModel<T>) -> String {
    let alphabet = model.alphabet();
    let codec: Vec<String> = alphabet.codec().iter().map(|c| toml_string(&c.to_string())).collect();
    let kind = match model {
        SourceModel::Iid(_) => "iid",
        SourceModel::Markov(_) => "markov",
        SourceModel::Empirical(_) => "empirical",
    };
    let mut out = String::new();
    let _ = writeln!(out, "format = {}", toml_string(FORMAT_TAG));
    let _ = writeln!(out, "version = {FORMAT_VERSION}");
    let _ = writeln!(out, "kind = {}", toml_string(kind));
    let _ = writeln!(out, "codec = [{}]", codec.join(", "));
    out.push('\n');
    match model {
        SourceModel::Iid(m) => {
            out.push_str("[iid]\n");
            let _ = writeln!(out, "probabilities = {}", float_array(m.probabilities()));
            let _ = writeln!(out, "smoothed = {}", m.smoothed());
        }
        SourceModel::Markov(m) => {
            out.push_str("[markov]\n");
            let _ = writeln!(out, "order = {}", m.order());
            let _ = writeln!(out, "initial = {}", float_array(m.initial()));
            out.push_str("transitions = [\n");
            for row in m.transitions() {
                let _ = writeln!(out, "  {},", float_array(row));
            }
            out.push_str("]\n");
        }
        SourceModel::Empirical(m) => {
            out.push_str("[empirical]\n");
            let window = match m.window() {
                WindowPolicy::Wrap => "wrap",
                WindowPolicy::Contiguous => "contiguous",
            };
            let _ = writeln!(out, "window = {}", toml_string(window));
            let _ = writeln!(out, "corpus = {}", toml_string(&crate::alphabet::decode(&m.corpus())));
        }
    }
    out
}

fn bad(msg: impl Into<String>) -> Error {
    Error::ModelFile(msg.into())
}

fn convert<T: Scalar>(xs: Vec<f64>) -> Result<Vec<T>> {
    xs.into_iter().map(|x| T::from_f64(x).ok_or_else(|| bad(format!("{x} not representable")))).collect()
}

/// Parse a model file.
pub fn read_model<T: Scalar>(text: &str) -> Result<SourceModel<T>> {
    let doc: ModelDoc = toml::from_str(text).map_err(|e| bad(e.to_string()))?;
    if doc.format != FORMAT_TAG {
        return Err(bad(format!("unexpected format tag {:?}", doc.format)));
    }
    if doc.version != FORMAT_VERSION {
        return Err(bad(format!("unsupported version {}", doc.version)));
    }
    let codec = doc
        .codec
        .iter()
        .map(|s| {
            let mut chars = s.chars();
            match (chars.next(), chars.next()) {
                (Some(c), None) => Ok(c),
                _ => Err(bad(format!("codec entry {s:?} is not a single character"))),
            }
        })
        .collect::<Result<Vec<char>>>()?;
    let alphabet = Arc::new(Alphabet::new(codec)?);
    match doc.kind.as_str() {
        "iid" => {
            let sec = doc.iid.ok_or_else(|| bad("missing [iid] table"))?;
            let src = IidSource::new(alphabet, convert(sec.probabilities)?)?.with_smoothed_flag(sec.smoothed);
            Ok(SourceModel::Iid(src))
        }
        "markov" => {
            let sec = doc.markov.ok_or_else(|| bad("missing [markov] table"))?;
            let rows = sec.transitions.into_iter().map(convert).collect::<Result<Vec<_>>>()?;
            let src = match sec.initial {
                Some(init) => MarkovSource::with_initial(alphabet, sec.order, rows, convert(init)?)?,
                None => MarkovSource::new(alphabet, sec.order, rows)?,
            };
            Ok(SourceModel::Markov(src))
        }
        "empirical" => {
            let sec = doc.empirical.ok_or_else(|| bad("missing [empirical] table"))?;
            let window = match sec.window.as_str() {
                "wrap" => WindowPolicy::Wrap,
                "contiguous" => WindowPolicy::Contiguous,
                other => return Err(bad(format!("unknown window policy {other:?}"))),
            };
            let policy = CorpusPolicy { fold_case: false, keep_spaces: alphabet.contains_space(), drop_unknown: false };
            let corpus: SymbolSeq = crate::alphabet::ingest_text(&sec.corpus, &alphabet, policy)?;
            Ok(SourceModel::Empirical(EmpiricalSource::new(&corpus, window)?))
        }
        other => Err(bad(format!("unknown kind {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::alphabet::make_english_alphabet;
    use proptest::prelude::*;

    #[test]
    fn markov_roundtrip_is_bit_exact() {
        let a = Arc::new(Alphabet::numeric(3).unwrap());
        let rows = vec![vec![0.1, 0.2, 0.7], vec![1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0], vec![0.5, 0.25, 0.25]];
        let m: SourceModel<f64> = SourceModel::Markov(MarkovSource::new(a, 1, rows).unwrap());
        let text = write_model(&m);
        let back: SourceModel<f64> = read_model(&text).unwrap();
        assert_eq!(back, m);
        assert_eq!(write_model(&back), text);
    }

    #[test]
    fn empirical_roundtrip() {
        let a = Arc::new(make_english_alphabet(true));
        let corpus = crate::alphabet::ingest_text(
            "call me \"ish\"mael",
            &a,
            CorpusPolicy { keep_spaces: true, ..Default::default() },
        )
        .unwrap();
        let m: SourceModel<f64> =
            SourceModel::Empirical(EmpiricalSource::new(&corpus, WindowPolicy::Contiguous).unwrap());
        let back: SourceModel<f64> = read_model(&write_model(&m)).unwrap();
        assert_eq!(back, m);
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(matches!(read_model::<f64>("kind = 3"), Err(Error::ModelFile(_))));
        let wrong_tag =
            "format = \"x\"\nversion = 1\nkind = \"iid\"\ncodec = [\"a\", \"b\"]\n[iid]\nprobabilities = [0.5, 0.5]\n";
        assert!(read_model::<f64>(wrong_tag).is_err());
        let bad_sum = "format = \"runkey-source-model\"\nversion = 1\nkind = \"iid\"\ncodec = [\"a\", \"b\"]\n[iid]\nprobabilities = [0.5, 0.6]\n";
        assert!(matches!(read_model::<f64>(bad_sum), Err(Error::InvalidDistribution(_))));
        let ok = bad_sum.replace("0.6", "0.5");
        assert!(read_model::<f64>(&ok).is_ok());
    }

    proptest! {
        #[test]
        fn iid_roundtrip(weights in prop::collection::vec(0.0f64..1.0, 2..30)) {
            let total: f64 = weights.iter().sum();
            prop_assume!(total > 1e-6);
            let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
            let sum: f64 = probs.iter().sum();
            prop_assume!((sum - 1.0).abs() <= 1e-12);
            let a = Arc::new(Alphabet::numeric(probs.len()).unwrap());
            let m: SourceModel<f64> = SourceModel::Iid(IidSource::new(a, probs).unwrap());
            let back: SourceModel<f64> = read_model(&write_model(&m)).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}
