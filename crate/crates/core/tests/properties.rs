//! Property tests for the structural invariants.

use grandlab::bits::Bits;
use grandlab::channel::{folded_cdf, folded_inv_cdf, LlrVector};
use grandlab::gf2::{bch_construct, read_alist_str, write_alist_string, BchSpec, ParityCheckMatrix};
use grandlab::pattern::{rank_llrs, GammaWeights, PatternBasis, SgrandQueue};
use proptest::prelude::*;

proptest! {
    #[test]
    fn every_encoded_message_is_a_codeword(bits in proptest::collection::vec(any::<bool>(), 7)) {
        let code = bch_construct(&BchSpec::new(4, 2).unwrap()).unwrap();
        let mut u = Bits::zeros(7);
        for (i, &b) in bits.iter().enumerate() {
            u.set(i, b);
        }
        let w = code.generator.encode(&u).unwrap();
        prop_assert!(code.parity.is_codeword(&w).unwrap());
        // systematic prefix
        for i in 0..7 {
            prop_assert_eq!(w.get(i), u.get(i));
        }
    }

    #[test]
    fn basis_weights_nondecreasing_for_random_gamma(
        raw in proptest::collection::vec(0.01f64..4.0, 8),
    ) {
        let mut values = raw;
        values.sort_by(f64::total_cmp);
        let mut acc = 0.0;
        for v in values.iter_mut() {
            acc += *v;
            *v = acc; // strictly positive, non-decreasing
        }
        let basis = PatternBasis::build(GammaWeights::new(values).unwrap(), 200).unwrap();
        for t in 1..basis.len() {
            prop_assert!(basis.weight(t) >= basis.weight(t - 1) - 1e-12);
        }
        prop_assert_eq!(basis.support(0).len(), 0);
    }

    #[test]
    fn permutation_preserves_cardinality_and_weight(
        mags in proptest::collection::vec(0.0f64..9.0, 9),
    ) {
        let gamma = GammaWeights::orbgrand(9);
        let basis = PatternBasis::build(gamma.clone(), 128).unwrap();
        let llr = LlrVector {
            magnitudes: mags,
            hard_bits: Bits::zeros(9),
        };
        let ranking = rank_llrs(&llr);
        for t in 0..basis.len() {
            let e = basis.permute_pattern(t, &ranking);
            prop_assert_eq!(e.weight(), basis.support(t).len());
            let w: f64 = (0..9)
                .filter(|&i| e.get(i))
                .map(|i| gamma.get(ranking.rank[i] as usize))
                .sum();
            prop_assert!((w - basis.weight(t)).abs() < 1e-9);
        }
    }

    #[test]
    fn folded_cdf_monotone_and_inverse_consistent(
        sigma in 0.2f64..2.0,
        p in 1e-6f64..0.999999,
    ) {
        let mut prev = 0.0;
        for i in 0..200 {
            let ell = i as f64 * 0.1;
            let c = folded_cdf(ell, sigma);
            prop_assert!(c >= prev - 1e-12);
            prev = c;
        }
        let ell = folded_inv_cdf(p, sigma).unwrap();
        prop_assert!((folded_cdf(ell, sigma) - p).abs() < 1e-9);
    }

    #[test]
    fn sgrand_exhaustive_pop_order(
        mags in proptest::collection::vec(0.001f64..5.0, 8),
    ) {
        let llr = LlrVector {
            magnitudes: mags,
            hard_bits: Bits::zeros(8),
        };
        let ranking = rank_llrs(&llr);
        let mut queue = SgrandQueue::new(&ranking);
        let mut prev = -1.0;
        let mut count = 0;
        while let Some((zeta, _)) = queue.next_pattern() {
            prop_assert!(zeta >= prev - 1e-12);
            prev = zeta;
            count += 1;
        }
        prop_assert_eq!(count, 256);
    }

    #[test]
    fn alist_round_trip_random_matrices(
        supports in proptest::collection::vec(
            proptest::collection::btree_set(0usize..12, 1..6),
            2..5,
        ),
    ) {
        let rows: Vec<Vec<usize>> = supports
            .iter()
            .map(|s| s.iter().copied().collect())
            .collect();
        // only full-rank matrices construct; skip the rest
        let Ok(h) = ParityCheckMatrix::from_row_supports(12, &rows) else {
            return Ok(());
        };
        let text = write_alist_string(&h);
        let back = read_alist_str(&text).unwrap();
        prop_assert_eq!(back.rows(), h.rows());
    }
}
