use bargmann::criteria::{commutator_gap, reduced_set_coherence, set_coherence_decide, Verdict};
use bargmann::invariants::{bargmann_invariant, classical_invariant, ClassicalRealization, Word};
use bargmann::numkernel::{hermitian_eig, ComplexMatrix};
use bargmann::states::{
    bloch_map, commuting_set, random_state, random_unitary, BlochConvention, Ensemble,
    PositiveOperator,
};
use bargmann::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn states(seed: u64, dim: usize, n: usize) -> Vec<PositiveOperator> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| random_state(dim, Ensemble::GinibreMixed, &mut rng))
        .collect()
}

fn word_strategy(n: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(1..=n, 1..7).prop_map(|v| Word::new(v).unwrap())
}

fn close(a: Complex64, b: Complex64, rel: f64) -> bool {
    (a - b).norm() <= rel * a.norm().max(b.norm()).max(1e-3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn cyclic_invariance(seed in any::<u64>(), dim in 1usize..6, word in word_strategy(3), shift in 0usize..7) {
        let s = states(seed, dim, 3);
        let a = bargmann_invariant(&s, &word).unwrap();
        let b = bargmann_invariant(&s, &word.rotated(shift)).unwrap();
        prop_assert!(close(a, b, 1e-12), "{a} vs {b}");
    }

    #[test]
    fn reversal_conjugates(seed in any::<u64>(), dim in 1usize..6, word in word_strategy(3)) {
        let s = states(seed, dim, 3);
        let a = bargmann_invariant(&s, &word).unwrap();
        let b = bargmann_invariant(&s, &word.reversed()).unwrap();
        prop_assert!(close(a, b.conj(), 1e-12));
    }

    #[test]
    fn unitary_invariance(seed in any::<u64>(), dim in 2usize..6, word in word_strategy(3)) {
        let s = states(seed, dim, 3);
        let u = random_unitary(dim, &mut ChaCha20Rng::seed_from_u64(seed ^ 0x55));
        let t: Vec<PositiveOperator> = s.iter().map(|x| x.conjugated(&u).unwrap()).collect();
        let a = bargmann_invariant(&s, &word).unwrap();
        let b = bargmann_invariant(&t, &word).unwrap();
        prop_assert!(close(a, b, 1e-10), "{a} vs {b}");
    }

    #[test]
    fn invariant_modulus_at_most_one(seed in any::<u64>(), dim in 1usize..6, word in word_strategy(3)) {
        let s = states(seed, dim, 3);
        prop_assert!(bargmann_invariant(&s, &word).unwrap().norm() <= 1.0 + 1e-12);
    }

    #[test]
    fn gap_matches_commutator_norm(seed in any::<u64>(), dim in 1usize..7) {
        let s = states(seed, dim, 2);
        let gap = commutator_gap(&s[0], &s[1], 1e-10).unwrap().gap;
        let c = s[0].matrix().commutator(s[1].matrix()).unwrap();
        let half_norm = 0.5 * c.frobenius_norm().powi(2);
        prop_assert!(gap >= -1e-12);
        prop_assert!((gap - half_norm).abs() <= 1e-12);
    }

    #[test]
    fn pauli_overlap_identity(seed in any::<u64>()) {
        let s = states(seed, 2, 2);
        let r = bloch_map(&s[0], BlochConvention::Pauli).unwrap();
        let q = bloch_map(&s[1], BlochConvention::Pauli).unwrap();
        let overlap = bargmann_invariant(&s, &Word::new(vec![1, 2]).unwrap()).unwrap().re;
        prop_assert!((overlap - (1.0 + r.dot(&q)) / 2.0).abs() <= 1e-12);
    }

    #[test]
    fn orthonormal_overlap_identity(seed in any::<u64>(), dim in 2usize..7) {
        let s = states(seed, dim, 2);
        let r = bloch_map(&s[0], BlochConvention::Orthonormal).unwrap();
        let q = bloch_map(&s[1], BlochConvention::Orthonormal).unwrap();
        let overlap = bargmann_invariant(&s, &Word::new(vec![1, 2]).unwrap()).unwrap().re;
        prop_assert!((overlap - (1.0 / dim as f64 + r.dot(&q))).abs() <= 1e-12);
    }

    #[test]
    fn commuting_sets_are_classical(seed in any::<u64>(), dim in 1usize..6, n in 1usize..5, word in word_strategy(4)) {
        let s = commuting_set(dim, n, &mut ChaCha20Rng::seed_from_u64(seed));
        prop_assume!(word.max_letter() <= n);
        let report = set_coherence_decide(&s, 1e-10).unwrap();
        prop_assert_eq!(report.verdict, Verdict::SetIncoherent);
        let cr = ClassicalRealization::from_commuting(&s).unwrap();
        let quantum = bargmann_invariant(&s, &word).unwrap();
        let classical = classical_invariant(&cr, &word).unwrap();
        prop_assert!(quantum.im.abs() <= 1e-12);
        prop_assert!((quantum.re - classical).abs() <= 1e-10);
    }

    #[test]
    fn reduced_agrees_with_full(seed in any::<u64>(), dim in 2usize..5, n in 2usize..5, commuting in any::<bool>()) {
        let s = if commuting {
            commuting_set(dim, n, &mut ChaCha20Rng::seed_from_u64(seed))
        } else {
            states(seed, dim, n)
        };
        let full = set_coherence_decide(&s, 1e-10).unwrap();
        // a random Ginibre state has a simple spectrum with probability one
        if let Ok(reduced) = reduced_set_coherence(&s, 0, 1e-10, 1e-8) {
            prop_assert_eq!(reduced.verdict, full.verdict);
            prop_assert_eq!(reduced.invariant_count, 2 * (n - 1));
        }
    }

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), dim in 1usize..9) {
        let a: ComplexMatrix = states(seed, dim, 1)[0].matrix().clone();
        let es = hermitian_eig(&a, 1e-12).unwrap();
        prop_assert!(es.reconstruct().max_abs_diff(&a) <= 1e-12);
        prop_assert!(es.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!((es.eigenvalues.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
    }
}
