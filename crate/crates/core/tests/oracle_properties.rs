//! Randomised checks of the exact oracle against the bounds and the attacker.

use std::sync::Arc;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use runkey::attack::{estimate_pb, MapLetterAttacker};
use runkey::bounds::{fano_lhs, lambda_t};
use runkey::oracle::{build_joint, exact_equivocations, exact_lemma1, exact_source_entropies, verify_proof_chain};
use runkey::source::{IidSource, MarkovSource, SourceModel, SourceTuple};
use runkey::Alphabet;

fn random_tuple(seed: u64, n: usize, s: usize) -> SourceTuple<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = Arc::new(Alphabet::numeric(n).unwrap());
    let law = |rng: &mut ChaCha8Rng| {
        let w: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..1.0)).collect();
        let total: f64 = w.iter().sum();
        w.into_iter().map(|x| x / total).collect::<Vec<_>>()
    };
    let comps = (0..s)
        .map(|_| {
            if rng.gen_bool(0.5) {
                let rows = (0..n).map(|_| law(&mut rng)).collect();
                SourceModel::Markov(MarkovSource::new(a.clone(), 1, rows).unwrap())
            } else {
                SourceModel::Iid(IidSource::new(a.clone(), law(&mut rng)).unwrap())
            }
        })
        .collect();
    SourceTuple::new(comps).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn joint_marginals_match_closed_forms(seed in any::<u64>(), n in 2usize..=3, s in 2usize..=3, t in 1usize..=3) {
        let sources = random_tuple(seed, n, s);
        let joint = build_joint(&sources, t).unwrap();
        prop_assert!((joint.total_probability() - 1.0).abs() < 1e-12);
        prop_assert!(joint.cipher_consistent());
        let closed = sources.block_entropies(t).unwrap();
        for (a, b) in exact_source_entropies(&joint).iter().zip(&closed) {
            prop_assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn lemma_and_chain_hold(seed in any::<u64>(), n in 2usize..=4, s in 2usize..=3, t in 1usize..=2) {
        let joint = build_joint(&random_tuple(seed, n, s), t).unwrap();
        prop_assert!(exact_lemma1(&joint).unwrap().holds());
        for step in verify_proof_chain(&joint) {
            prop_assert!(step.holds, "{}: {} vs {}", step.step, step.lhs, step.rhs);
        }
    }

    /// Two sources: Fano applied to the plaintext equivocation bounds the
    /// exact MAP success rate, and the equivocation is at least Lambda.
    #[test]
    fn two_source_fano_chain(seed in any::<u64>(), n in 2usize..=3, t in 1usize..=3) {
        let sources = random_tuple(seed, n, 2);
        let joint = build_joint(&sources, t).unwrap();
        let eq = exact_equivocations(&joint);
        let lambda = lambda_t(&exact_source_entropies(&joint), n).unwrap();
        prop_assert!(eq[0] >= lambda - 1e-9);
        let r = estimate_pb(&MapLetterAttacker::new(&sources).unwrap(), &sources, t, 3000, seed).unwrap();
        // the left side falls on [1/n, 1], so the lower confidence end gives the weakest claim
        let p = (r.p_b_hat - r.confidence_halfwidth).clamp(1.0 / n as f64, 1.0);
        prop_assert!(fano_lhs(p, n).unwrap() >= eq[0] - 1e-6, "p_b lower end {p}, equivocation {}", eq[0]);
    }
}
