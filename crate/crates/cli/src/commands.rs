use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde_json::json;

use runkey::analysis::{shannon_analysis, CipherPreset, PresetParams};
use runkey::attack::{
    bound_consistency, estimate_pb, Attacker, IdentityAttacker, MapLetterAttacker, PriorArgmaxAttacker,
};
use runkey::bounds::{lambda_t, BoundReport};
use runkey::cipher::{decipher, encipher, CipherSpec, KeyTape};
use runkey::estimate::{count_ngrams_with_budget, estimate_block_entropy_with, EstimatorConfig, Smoothing};
use runkey::modelfile::{read_model, write_model};
use runkey::oracle::{
    build_joint_with_budget, exact_equivocations, exact_lemma1, exact_source_entropies, typical_set_check,
    verify_proof_chain, CiphertextChoice,
};
use runkey::source::{
    fit_empirical_iid, fit_empirical_iid_add_one, EmpiricalSource, SourceModel, SourceTuple, WindowPolicy,
};
use runkey::{decode, ingest_text, make_english_alphabet, Alphabet, CorpusPolicy, SymbolSeq};

use crate::args::*;
use crate::report::{CliError, CliResult, Outcome};

pub fn load_alphabet(choice: &str) -> CliResult<Arc<Alphabet>> {
    let alphabet = match choice {
        "english26" => make_english_alphabet(false),
        "english27" => make_english_alphabet(true),
        other => match other.strip_prefix("custom:") {
            Some(path) => {
                let text = read_text(Path::new(path))?;
                Alphabet::new(text.chars().filter(|&c| c != '\n' && c != '\r').collect())?
            }
            None => return Err(CliError::Usage(format!("unknown alphabet {other:?}"))),
        },
    };
    Ok(Arc::new(alphabet))
}

fn read_text(path: &Path) -> CliResult<String> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    String::from_utf8(bytes).map_err(|e| CliError::Core(runkey::Error::InvalidUtf8(e.utf8_error().valid_up_to())))
}

fn write_text(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

fn ingest_file(path: &Path, alphabet: &Arc<Alphabet>) -> CliResult<SymbolSeq> {
    let policy = CorpusPolicy { keep_spaces: alphabet.contains_space(), ..CorpusPolicy::default() };
    Ok(ingest_text(&read_text(path)?, alphabet, policy)?)
}

fn need_t(g: &GlobalOpts) -> CliResult<usize> {
    match g.t {
        Some(0) => Err(CliError::Usage("--t must be at least 1".into())),
        Some(t) => Ok(t),
        None => Err(CliError::Usage("--t is required for this command".into())),
    }
}

fn check_s(g: &GlobalOpts, actual: usize) -> CliResult<()> {
    match g.s {
        Some(s) if s != actual => Err(CliError::Usage(format!("--s {s} but {actual} sources were given"))),
        _ => Ok(()),
    }
}

fn load_models(paths: &[std::path::PathBuf], g: &GlobalOpts) -> CliResult<SourceTuple<f64>> {
    check_s(g, paths.len())?;
    let models = paths.iter().map(|p| Ok(read_model::<f64>(&read_text(p)?)?)).collect::<CliResult<Vec<_>>>()?;
    Ok(SourceTuple::new(models)?)
}

fn exact_entropies(sources: &SourceTuple<f64>, t: usize, budget: u128) -> CliResult<Vec<f64>> {
    Ok(sources
        .components()
        .iter()
        .map(|c| c.exact_block_entropy_with_budget(t, budget))
        .collect::<runkey::Result<Vec<_>>>()?)
}

fn key_streams(
    paths: &[std::path::PathBuf],
    alphabet: &Arc<Alphabet>,
    stride: usize,
    len: usize,
) -> CliResult<Vec<SymbolSeq>> {
    paths.iter().map(|p| Ok(KeyTape::new(ingest_file(p, alphabet)?).take_spaced(stride, len)?)).collect()
}

pub fn encrypt(a: &EncryptArgs, g: &GlobalOpts) -> CliResult<Outcome> {
    let alphabet = load_alphabet(&g.alphabet)?;
    check_s(g, a.keys.len() + 1)?;
    let plain = ingest_file(&a.plaintext, &alphabet)?;
    let keys = key_streams(&a.keys, &alphabet, g.stride, plain.len())?;
    let spec = CipherSpec::new(alphabet, keys.len() + 1)?;
    let text = decode(&encipher(&plain, &keys, &spec)?);
    if let Some(path) = &a.ciphertext_out {
        write_text(path, &text)?;
    }
    Ok(Outcome::ok(json!({
        "n": spec.alphabet().size(),
        "s": spec.num_sources(),
        "letters": plain.len(),
        "key_letters_consumed": plain.len() * g.stride,
        "ciphertext": text,
    })))
}

pub fn decrypt(a: &DecryptArgs, g: &GlobalOpts) -> CliResult<Outcome> {
    let alphabet = load_alphabet(&g.alphabet)?;
    check_s(g, a.keys.len() + 1)?;
    let cipher = ingest_file(&a.ciphertext, &alphabet)?;
    let keys = key_streams(&a.keys, &alphabet, g.stride, cipher.len())?;
    let spec = CipherSpec::new(alphabet, keys.len() + 1)?;
    let text = decode(&decipher(&cipher, &keys, &spec)?);
    if let Some(path) = &a.plaintext_out {
        write_text(path, &text)?;
    }
    Ok(Outcome::ok(json!({
        "n": spec.alphabet().size(),
        "s": spec.num_sources(),
        "letters": cipher.len(),
        "plaintext": text,
    })))
}

pub fn entropy(a: &EntropyArgs, g: &GlobalOpts) -> CliResult<Outcome> {
    let max_t = g.t.unwrap_or(1);
    if max_t == 0 {
        return Err(CliError::Usage("--t must be at least 1".into()));
    }
    let (source, n, per_letter) = if let Some(path) = &a.corpus {
        let alphabet = load_alphabet(&g.alphabet)?;
        let seq = ingest_file(path, &alphabet)?;
        let smoothing = match a.smoothing {
            SmoothingArg::None => Smoothing::None,
            SmoothingArg::AddOne => Smoothing::AddOne,
        };
        let config = EstimatorConfig { smoothing, budget: g.budget };
        let hs = (1..=max_t)
            .map(|k| estimate_block_entropy_with::<f64>(&seq, k, config))
            .collect::<runkey::Result<Vec<_>>>()?;
        if let Some(out) = &a.ngrams_out {
            write_text(out, &count_ngrams_with_budget(&seq, max_t, g.budget)?.export_delimited())?;
        }
        (json!({"corpus": path, "letters": seq.len(), "estimated": true}), alphabet.size(), hs)
    } else {
        let path = a.model.as_ref().expect("clap enforces corpus or model");
        let model = read_model::<f64>(&read_text(path)?)?;
        let hs = (1..=max_t)
            .map(|k| model.exact_block_entropy_with_budget(k, g.budget))
            .collect::<runkey::Result<Vec<_>>>()?;
        (json!({"model": path, "estimated": false}), model.alphabet().size(), hs)
    };
    // conditional entropies F_k = k h_k - (k-1) h_{k-1}
    let conditional: Vec<f64> = per_letter
        .iter()
        .enumerate()
        .map(|(i, &h)| if i == 0 { h } else { (i as f64 + 1.0) * h - i as f64 * per_letter[i - 1] })
        .collect();
    let profile: Vec<_> = per_letter
        .iter()
        .zip(&conditional)
        .enumerate()
        .map(|(i, (h, f))| json!({"t": i + 1, "h_t": h, "conditional": f}))
        .collect();
    Ok(Outcome::ok(json!({
        "source": source,
        "n": n,
        "log2_n": (n as f64).log2(),
        "profile": profile,
    })))
}

pub fn bounds(a: &BoundsArgs, g: &GlobalOpts) -> CliResult<Outcome> {
    let (entropies, n) = if a.models.is_empty() {
        if a.entropies.is_empty() {
            return Err(CliError::Usage("give --entropy values or --model files".into()));
        }
        check_s(g, a.entropies.len())?;
        let n = match a.n {
            Some(n) => n,
            None => load_alphabet(&g.alphabet)?.size(),
        };
        (a.entropies.clone(), n)
    } else {
        let sources = load_models(&a.models, g)?;
        let n = sources.alphabet().size();
        if a.n.is_some_and(|m| m != n) {
            return Err(CliError::Usage(format!("--n disagrees with the model alphabet size {n}")));
        }
        (exact_entropies(&sources, need_t(g)?, g.budget)?, n)
    };
    let mut report = BoundReport::evaluate(entropies, n, g.t, a.log2_n)?;
    if !a.equivocations.is_empty() {
        report = report.with_equivocations(&a.equivocations)?;
    }
    let verified = report.verdicts_hold();
    Ok(Outcome::checked(report, verified))
}

pub fn verify_lemma(a: &ModelsArgs, g: &GlobalOpts) -> CliResult<Outcome> {
    let sources = load_models(&a.models, g)?;
    let t = need_t(g)?;
    let joint = build_joint_with_budget(&sources, t, g.budget)?;
    let lemma = exact_lemma1(&joint)?;
    let chain = verify_proof_chain(&joint);
    let verified = lemma.holds() && chain.iter().all(|c| c.holds);
    Ok(Outcome::checked(
        json!({
            "n": joint.alphabet().size(),
            "s": joint.s(),
            "t": t,
            "entropies": exact_source_entropies(&joint),
            "equivocations": exact_equivocations(&joint),
            "lemma1": lemma,
            "proof_chain": chain,
        }),
        verified,
    ))
}

pub fn typical_set(a: &TypicalSetArgs, g: &GlobalOpts) -> CliResult<Outcome> {
    let sources = load_models(&a.models.models, g)?;
    let t = need_t(g)?;
    let joint = build_joint_with_budget(&sources, t, g.budget)?;
    let choice = match &a.ciphertext {
        Some(text) => CiphertextChoice::Given(ingest_text(text, sources.alphabet(), CorpusPolicy::strict())?),
        None => CiphertextChoice::Sampled { seed: g.seed },
    };
    let report = typical_set_check(&joint, a.epsilon, a.delta, &choice)?;
    let lambda = lambda_t(&exact_source_entropies(&joint), joint.alphabet().size())?;
    let gate = report.spread_below_epsilon && report.probability_above_one_minus_delta;
    Ok(Outcome::checked(json!({ "lambda_t": lambda, "gate_passed": gate, "typical_set": report }), gate || !a.gate))
}

pub fn attack(a: &AttackArgs, g: &GlobalOpts) -> CliResult<Outcome> {
    let sources = load_models(&a.models.models, g)?;
    let t = need_t(g)?;
    let attacker: Box<dyn Attacker<f64>> = match a.attacker {
        AttackerArg::Map => Box::new(MapLetterAttacker::with_budget(&sources, g.budget)?),
        AttackerArg::PriorArgmax => Box::new(PriorArgmaxAttacker::new(&sources)?),
        AttackerArg::Identity => Box::new(IdentityAttacker),
    };
    let result = estimate_pb(attacker.as_ref(), &sources, t, g.trials, g.seed)?;
    let n = sources.alphabet().size();
    let lambda = lambda_t(&exact_entropies(&sources, t, g.budget)?, n)?;
    let check = bound_consistency(&result, lambda, n)?;
    let verified = check.consistent;
    Ok(Outcome::checked(json!({ "attack": result, "bound_consistency": check }), verified))
}

pub fn shannon(a: &ShannonArgs, g: &GlobalOpts) -> CliResult<Outcome> {
    let preset = match a.cipher {
        PresetArg::SumOfTexts => CipherPreset::SumOfTexts,
        PresetArg::SpacedLetter => CipherPreset::SpacedLetter,
    };
    let defaults = PresetParams::<f64>::default();
    let params = PresetParams {
        h_inf: a.h_inf.unwrap_or(defaults.h_inf),
        h1_key: a.h1_key.unwrap_or(defaults.h1_key),
        n: a.n.unwrap_or(defaults.n),
        s: g.s.unwrap_or(defaults.s),
    };
    if preset == CipherPreset::SpacedLetter && g.s.is_some_and(|s| s != 2) {
        return Err(CliError::Usage("the spaced-letter cipher always has s = 2".into()));
    }
    Ok(Outcome::ok(shannon_analysis(preset, params)?))
}

pub fn fit(a: &FitArgs, g: &GlobalOpts) -> CliResult<Outcome> {
    let alphabet = load_alphabet(&g.alphabet)?;
    let seq = ingest_file(&a.corpus, &alphabet)?;
    let model: SourceModel<f64> = match a.kind {
        FitKind::Iid => fit_empirical_iid(&seq, &alphabet)?,
        FitKind::IidAddOne => fit_empirical_iid_add_one(&seq, &alphabet)?,
        FitKind::Empirical => SourceModel::Empirical(EmpiricalSource::new(&seq, WindowPolicy::Contiguous)?),
    };
    write_text(&a.model_out, &write_model(&model))?;
    let letters: Option<Vec<f64>> = model.letter_marginal().ok();
    Ok(Outcome::ok(json!({
        "model_out": a.model_out,
        "kind": a.kind,
        "letters": seq.len(),
        "letter_probabilities": letters,
    })))
}
