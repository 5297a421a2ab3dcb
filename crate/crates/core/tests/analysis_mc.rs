//! Cross-validation of the analytic stage model against sampling.

use keyforge::analysis::{stage_fail_prob, StageModel, SuccessPredicate};
use keyforge::channel::{eec_sample, ErrorErasureChannel, RngStream};
use keyforge::gfield::Field;
use keyforge::linearcode::DecodeOutcome;
use keyforge::rscode::RsCode;

const TRIALS: u64 = 1_000_000;

fn sampled_failure_rate(n: usize, pred: SuccessPredicate, ch: &ErrorErasureChannel) -> f64 {
    let word = vec![0u16; n];
    let mut fails = 0u64;
    for t in 0..TRIALS {
        let y = eec_sample(&word, 32, ch, &mut RngStream::new(77, t));
        let delta = y.iter().filter(|s| s.is_none()).count();
        let tau = y.iter().filter(|s| matches!(s, Some(v) if *v != 0)).count();
        fails += !pred.succeeds(n, tau, delta) as u64;
    }
    fails as f64 / TRIALS as f64
}

fn assert_within_4_sigma(predicted: f64, observed: f64) {
    let sigma = (predicted * (1.0 - predicted) / TRIALS as f64).sqrt();
    assert!(predicted >= 1e-3, "channel too clean for this check: {predicted:e}");
    assert!(
        (observed - predicted).abs() <= 4.0 * sigma,
        "predicted {predicted:e}, observed {observed:e}, sigma {sigma:e}"
    );
}

#[test]
fn half_distance_stage_matches_sampling() {
    let (n, d) = (31, 15);
    let ch = ErrorErasureChannel::new(0.08, 0.12).unwrap();
    let pred = SuccessPredicate::HalfDistance { d };
    let predicted = stage_fail_prob(&StageModel::new(n, pred, 0.08, 0.12)).unwrap();
    assert_within_4_sigma(predicted, sampled_failure_rate(n, pred, &ch));
}

#[test]
fn power_stage_matches_sampling() {
    let (n, k) = (32, 2);
    let ch = ErrorErasureChannel::new(0.45, 0.15).unwrap();
    let pred = SuccessPredicate::Power { k, ell_max: 5 };
    let predicted = stage_fail_prob(&StageModel::new(n, pred, 0.45, 0.15)).unwrap();
    assert_within_4_sigma(predicted, sampled_failure_rate(n, pred, &ch));
}

/// The bounded-distance decoder succeeds exactly when the predicate says so.
#[test]
fn error_erasure_decoder_agrees_with_predicate() {
    let f = Field::new(5, None).unwrap();
    let code = RsCode::new(&f, 31, 17).unwrap();
    let ch = ErrorErasureChannel::new(0.08, 0.12).unwrap();
    let pred = SuccessPredicate::HalfDistance { d: code.d() };
    let mut fails = 0;
    for t in 0..20_000 {
        let mut rng = RngStream::new(5, t);
        let info: Vec<u16> = (0..code.k()).map(|_| rng.below(32) as u16).collect();
        let c = code.encode(&info).unwrap();
        let y = eec_sample(&c, 32, &ch, &mut rng);
        let delta = y.iter().filter(|s| s.is_none()).count();
        let tau = y.iter().zip(&c).filter(|(s, &v)| matches!(s, Some(x) if *x != v)).count();
        let ok = code.decode_ee(&y).unwrap() == DecodeOutcome::Decoded(c);
        assert_eq!(ok, pred.succeeds(code.n(), tau, delta), "tau={tau} delta={delta}");
        fails += !ok as u32;
    }
    assert!(fails > 0);
}
