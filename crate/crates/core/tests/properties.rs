//! Property tests over randomized matrices, codes and channel inputs.

use proptest::prelude::*;
use rootcheck_ldpc::channel::{llr, ChannelSpec, FadingRealization, Regime};
use rootcheck_ldpc::codec::{syndrome, TransmitMapping};
use rootcheck_ldpc::construction::{build_code, girth};
use rootcheck_ldpc::decoder::spa_decode;
use rootcheck_ldpc::gf2::BitMatrix;
use rootcheck_ldpc::scaffold::{CodeFamily, FamilyKind};

fn arb_matrix(max_rows: usize, max_cols: usize) -> impl Strategy<Value = BitMatrix> {
    (1..=max_rows, 1..=max_cols)
        .prop_flat_map(|(r, c)| {
            (
                Just(r),
                Just(c),
                proptest::collection::vec(proptest::bool::weighted(0.3), r * c),
            )
        })
        .prop_map(|(r, c, bits)| {
            let entries = bits
                .iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(|(i, _)| (i / c, i % c));
            BitMatrix::from_entries(r, c, entries).unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn alist_round_trip_is_identity(m in arb_matrix(24, 24)) {
        let back = BitMatrix::from_alist(&m.to_alist()).unwrap();
        prop_assert_eq!(back, m);
    }

    #[test]
    fn transpose_is_involutive_and_consistent(m in arb_matrix(20, 28)) {
        m.validate().unwrap();
        let t = m.transpose();
        t.validate().unwrap();
        prop_assert_eq!(t.transpose(), m);
    }

    #[test]
    fn inverse_times_matrix_is_identity(n in 1usize..=64, seed in 0u64..1000) {
        // random nonsingular matrix: random lower triangular with unit
        // diagonal times random upper triangular with unit diagonal
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut lower = BitMatrix::identity(n);
        let mut upper = BitMatrix::identity(n);
        for r in 0..n {
            for c in 0..r {
                if rng.random::<f64>() < 0.3 {
                    lower.insert(r, c).unwrap();
                }
                if rng.random::<f64>() < 0.3 {
                    upper.insert(c, r).unwrap();
                }
            }
        }
        let m = lower.multiply(&upper).unwrap();
        let inv = m.invert().unwrap();
        prop_assert_eq!(inv.multiply(&m).unwrap(), BitMatrix::identity(n));
        prop_assert_eq!(m.multiply(&inv).unwrap(), BitMatrix::identity(n));
    }

    #[test]
    fn multiply_matches_triple_loop(a in arb_matrix(12, 12), b in arb_matrix(12, 12)) {
        prop_assume!(a.n_cols() == b.n_rows());
        let prod = a.multiply(&b).unwrap();
        for r in 0..a.n_rows() {
            for c in 0..b.n_cols() {
                let mut acc = false;
                for k in 0..a.n_cols() {
                    acc ^= a.get(r, k) && b.get(k, c);
                }
                prop_assert_eq!(prod.get(r, c), acc);
            }
        }
    }

    #[test]
    fn llr_antisymmetry(values in proptest::collection::vec(-10.0f64..10.0, 1..40)) {
        let n = values.len();
        let spec = ChannelSpec::new(Regime::Fast, 3.0, 0.5);
        let fading = FadingRealization { coeffs: vec![1.0; n] };
        let cols: Vec<usize> = (0..n).collect();
        let mapping = TransmitMapping { n_pre: n, transmit_cols: &cols };
        let pos = llr(&values, &fading, &spec, &mapping).unwrap();
        let negated: Vec<f64> = values.iter().map(|v| -v).collect();
        let neg = llr(&negated, &fading, &spec, &mapping).unwrap();
        for (p, q) in pos.iter().zip(&neg) {
            prop_assert!((p + q).abs() < 1e-12);
        }
    }

    #[test]
    fn decoder_survives_adversarial_llrs(
        values in proptest::collection::vec(prop_oneof![
            Just(1e6), Just(-1e6), -1e6f64..1e6, Just(0.0)
        ], 7)
    ) {
        let h = BitMatrix::from_entries(
            3,
            7,
            [(0, 0), (0, 2), (0, 4), (0, 6), (1, 1), (1, 2), (1, 5), (1, 6), (2, 3), (2, 4), (2, 5), (2, 6)],
        )
        .unwrap();
        let out = spa_decode(&h, &values, 20).unwrap();
        prop_assert!(out.bits.iter().all(|&b| b <= 1));
        if out.converged {
            prop_assert!(syndrome(&h, &out.bits).unwrap().iter().all(|&s| s == 0));
        }
    }
}

proptest! {
    // code construction is the slow part; fewer cases
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn constructed_codes_satisfy_their_contracts(seed in 0u64..1_000_000) {
        for (kind, n, f) in [
            (FamilyKind::IraRcHalf, 64, 2),
            (FamilyKind::IraRcThird, 72, 3),
            (FamilyKind::IraaRcHalf, 72, 2),
        ] {
            let family = CodeFamily::new(kind, n, f, seed).unwrap();
            let code = build_code(&family).unwrap();
            // full rank
            prop_assert_eq!(code.h().rank(), family.m());
            // no four-cycles
            let g = girth(code.h()).unwrap_or(usize::MAX);
            prop_assert!(g >= 6, "{} girth {}", kind.name(), g);
            // every codeword checks out
            use rand::{Rng, SeedableRng};
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xabc);
            let u: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2u8)).collect();
            let c = code.encode(&u).unwrap();
            prop_assert!(syndrome(code.h(), &c).unwrap().iter().all(|&s| s == 0));
            prop_assert_eq!(&c[..code.k()], &u[..]);
        }
    }
}

/// Statistical, seed-pinned: FER does not increase with SNR for a small
/// root-check code over three well-separated block-fading points.
#[test]
fn fer_monotone_over_three_snr_points() {
    use rootcheck_ldpc::analysis::{fer_point, SimOptions, StopRule};
    let family = CodeFamily::new(FamilyKind::IraRcHalf, 64, 2, 4).unwrap();
    let code = build_code(&family).unwrap();
    let opts = SimOptions {
        stop: StopRule {
            min_frame_errors: 80,
            max_frames: 6000,
        },
        max_iter: 20,
        master_seed: 5,
        workers: 2,
    };
    let fers: Vec<f64> = [0.0, 8.0, 16.0]
        .iter()
        .map(|&db| fer_point(&code, Regime::Block(2), db, &opts).fer())
        .collect();
    assert!(
        fers[0] >= fers[1] && fers[1] >= fers[2],
        "FER not monotone: {fers:?}"
    );
}
