//! Cross-module checks against independent oracles: generator-vs-accumulator
//! encoding, maximum-likelihood decoding on a toy code, closed-form outage,
//! and the end-to-end channel sign statistics.

use rootcheck_ldpc::analysis::{
    derive_rng, fer_point, outage_closed_form_single_block, outage_probability, SimOptions,
    StopRule,
};
use rootcheck_ldpc::channel::{llr, modulate, sample_fading, transmit, ChannelSpec, Regime};
use rootcheck_ldpc::codec::syndrome;
use rootcheck_ldpc::construction::{build_code, girth, verify_root_check};
use rootcheck_ldpc::decoder::spa_decode;
use rootcheck_ldpc::gf2::BitMatrix;
use rootcheck_ldpc::scaffold::{CodeFamily, FamilyKind};
use rootcheck_ldpc::LinearCode;

use rand::Rng;

fn families_at_reference_sizes() -> Vec<CodeFamily> {
    vec![
        CodeFamily::new(FamilyKind::IraRcHalf, 1200, 2, 7).unwrap(),
        CodeFamily::new(FamilyKind::IraRcThird, 900, 3, 7).unwrap(),
        CodeFamily::from_transmitted_len(FamilyKind::IraaRcHalf, 1200, 2, 7).unwrap(),
        CodeFamily::from_transmitted_len(FamilyKind::IraaRcThird, 900, 3, 7).unwrap(),
    ]
}

fn small_families() -> Vec<CodeFamily> {
    vec![
        CodeFamily::new(FamilyKind::IraRcHalf, 16, 2, 3).unwrap(), // the 8x16 miniature
        CodeFamily::new(FamilyKind::IraRcHalf, 24, 2, 3).unwrap(), // k = 12
        CodeFamily::new(FamilyKind::IraRcThird, 18, 3, 3).unwrap(), // k = 6
        CodeFamily::new(FamilyKind::IraaRcHalf, 36, 2, 3).unwrap(), // k = 12
        CodeFamily::new(FamilyKind::IraaRcThird, 30, 3, 3).unwrap(), // k = 6
        CodeFamily::new(FamilyKind::Ra, 16, 2, 3).unwrap(),        // k = 8
        CodeFamily::new(FamilyKind::PegBaseline, 20, 2, 3).unwrap(), // k = 10
    ]
}

#[test]
fn encoder_routes_agree_exhaustively_for_small_k() {
    for family in small_families() {
        let code = build_code(&family).unwrap();
        let k = code.k();
        assert!(k <= 12, "{}: k = {k}", family.kind.name());
        for word in 0u32..1 << k {
            let u: Vec<u8> = (0..k).map(|i| (word >> i & 1) as u8).collect();
            let fast = code.encode(&u).unwrap();
            let gen = code.encode_via_generator(&u).unwrap();
            assert_eq!(fast, gen, "{} word {word}", family.kind.name());
            assert!(
                syndrome(code.h(), &fast).unwrap().iter().all(|&s| s == 0),
                "{} word {word} not a codeword",
                family.kind.name()
            );
        }
    }
}

#[test]
fn encoder_routes_agree_at_reference_sizes() {
    for family in families_at_reference_sizes() {
        let code = build_code(&family).unwrap();
        assert!(code.has_fast_encoder(), "{}", family.kind.name());
        let mut rng = derive_rng(41, 0, 0);
        for _ in 0..1000 {
            let u: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2u8)).collect();
            let fast = code.encode(&u).unwrap();
            let gen = code.encode_via_generator(&u).unwrap();
            assert_eq!(fast, gen, "{}", family.kind.name());
        }
    }
}

#[test]
fn encode_is_linear() {
    let family = CodeFamily::new(FamilyKind::IraRcThird, 90, 3, 11).unwrap();
    let code = build_code(&family).unwrap();
    let mut rng = derive_rng(42, 0, 0);
    for _ in 0..200 {
        let a: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2u8)).collect();
        let b: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2u8)).collect();
        let xor: Vec<u8> = a.iter().zip(&b).map(|(x, y)| x ^ y).collect();
        let ca = code.encode(&a).unwrap();
        let cb = code.encode(&b).unwrap();
        let cx = code.encode(&xor).unwrap();
        let sum: Vec<u8> = ca.iter().zip(&cb).map(|(x, y)| x ^ y).collect();
        assert_eq!(cx, sum);
    }
}

#[test]
fn rate_bookkeeping_is_exact() {
    for family in families_at_reference_sizes() {
        let code = build_code(&family).unwrap();
        let (k, n_tx) = family.rate_fraction();
        assert_eq!(code.k(), k);
        assert_eq!(code.n_tx(), n_tx);
        let denominator = n_tx / k;
        assert_eq!(k * denominator, n_tx, "{}", family.kind.name());
    }
    // puncturing moves the IRAA designs between their exact nominal rates
    let f = CodeFamily::from_transmitted_len(FamilyKind::IraaRcHalf, 1200, 2, 1).unwrap();
    assert_eq!((f.n, f.n_tx()), (1800, 1200)); // 1/3 mother, 1/2 transmitted
    let f = CodeFamily::from_transmitted_len(FamilyKind::IraaRcThird, 900, 3, 1).unwrap();
    assert_eq!((f.n, f.n_tx()), (1500, 900)); // 1/5 mother, 1/3 transmitted
}

/// Exhaustive ML oracle on the (7,4) Hamming code: at high SNR the SPA
/// decision must match maximum likelihood nearly always.
#[test]
fn spa_matches_ml_on_toy_code() {
    let rows = [
        [1, 0, 1, 0, 1, 0, 1],
        [0, 1, 1, 0, 0, 1, 1],
        [0, 0, 0, 1, 1, 1, 1],
    ];
    let mut entries = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        for (c, &bit) in row.iter().enumerate() {
            if bit == 1 {
                entries.push((r, c));
            }
        }
    }
    let h = BitMatrix::from_entries(3, 7, entries).unwrap();
    let codewords: Vec<Vec<u8>> = (0..128u32)
        .map(|w| (0..7).map(|i| (w >> i & 1) as u8).collect::<Vec<u8>>())
        .filter(|c| syndrome(&h, c).unwrap().iter().all(|&s| s == 0))
        .collect();
    assert_eq!(codewords.len(), 16);

    let n0 = 0.5; // about 6.4 dB Eb/N0 at rate 4/7
    let mut rng = derive_rng(7, 7, 7);
    let frames = 10_000;
    let mut agree = 0usize;
    for i in 0..frames {
        let cw = &codewords[i % 16];
        let s = modulate(cw);
        let r: Vec<f64> = s
            .iter()
            .map(|&x| x + (n0 / 2.0f64).sqrt() * rootcheck_ldpc::channel::standard_normal(&mut rng))
            .collect();
        let llrs: Vec<f64> = r.iter().map(|&x| 4.0 * x / n0).collect();
        let spa = spa_decode(&h, &llrs, 20).unwrap();
        let ml = codewords
            .iter()
            .max_by(|a, b| {
                let score = |c: &[u8]| -> f64 {
                    c.iter()
                        .zip(&llrs)
                        .map(|(&bit, &l)| if bit == 0 { l } else { -l })
                        .sum()
                };
                score(a).total_cmp(&score(b))
            })
            .unwrap();
        if &spa.bits == ml {
            agree += 1;
        }
    }
    assert!(
        agree as f64 >= 0.99 * frames as f64,
        "SPA agreed with ML on {agree}/{frames} frames"
    );
}

#[test]
fn outage_estimate_matches_closed_form() {
    let db = 20.0;
    let p = outage_probability(1, 0.5, db, 2_000_000, 3);
    let exact = outage_closed_form_single_block(0.5, db);
    assert!((p.estimate() - exact).abs() / exact < 0.05);
}

/// End-to-end pipeline at generous SNR: everything decodes, and the decoded
/// info bits survive the puncture/interleave/llr round trip.
#[test]
fn pipeline_round_trip_with_puncturing() {
    let family = CodeFamily::from_transmitted_len(FamilyKind::IraaRcThird, 90, 3, 5).unwrap();
    let code = build_code(&family).unwrap();
    assert_eq!(code.n_tx(), 90);
    assert_eq!(code.n_pre(), 150);
    let spec = ChannelSpec::new(Regime::Block(3), 30.0, code.rate());
    let mut rng = derive_rng(1, 2, 3);
    for _ in 0..50 {
        let u: Vec<u8> = (0..code.k()).map(|_| rng.random_range(0..2u8)).collect();
        let c = code.encode(&u).unwrap();
        let tx = code.puncture(&c).unwrap();
        assert_eq!(tx.len(), 90);
        let s = modulate(&tx);
        let fading = sample_fading(&spec, s.len(), &mut rng);
        let r = transmit(&s, &fading, &spec, &mut rng).unwrap();
        let llrs = llr(&r, &fading, &spec, &code.transmit_mapping()).unwrap();
        // punctured positions arrive erased
        for &pc in code.puncture_cols() {
            assert_eq!(llrs[pc], 0.0);
        }
        let out = spa_decode(code.h(), &llrs, 40).unwrap();
        assert_eq!(&out.bits[..code.k()], &u[..]);
    }
}

#[test]
fn structural_checks_at_reference_sizes() {
    for family in families_at_reference_sizes() {
        let code = build_code(&family).unwrap();
        let name = family.kind.name();
        assert_eq!(code.h().rank(), family.m(), "{name} rank");
        let g = code.generator().expect("generator attached");
        assert!(g
            .multiply(&code.h().transpose())
            .unwrap()
            .is_zero(), "{name} G H^T");
        assert!(girth(code.h()).unwrap() >= 6, "{name} girth");
        let report = verify_root_check(&code);
        assert!(report.pass(), "{name} root check");
    }
}

#[test]
fn fer_counters_reproduce_across_worker_counts() {
    let family = CodeFamily::new(FamilyKind::IraRcHalf, 120, 2, 9).unwrap();
    let code: LinearCode = build_code(&family).unwrap();
    let mk = |workers: usize| SimOptions {
        stop: StopRule {
            min_frame_errors: 25,
            max_frames: 6000,
        },
        max_iter: 20,
        master_seed: 31,
        workers,
    };
    let a = fer_point(&code, Regime::Block(2), 8.0, &mk(1));
    let b = fer_point(&code, Regime::Block(2), 8.0, &mk(3));
    let c = fer_point(&code, Regime::Block(2), 8.0, &mk(8));
    assert_eq!(a, b);
    assert_eq!(a, c);
}
