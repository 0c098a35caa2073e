use dixmier::{
    dixmier_estimate, is_measurable, measurability, p1_norm, partial_ratio, pinfty_norm, DixmierError, Run,
    SingularValueSeq,
};
use proptest::prelude::*;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const DECADES: [u64; 4] = [10_000, 100_000, 1_000_000, 10_000_000];

fn harmonic_number(n: u64) -> f64 {
    let n = n as f64;
    n.ln() + EULER_GAMMA + 1.0 / (2.0 * n) - 1.0 / (12.0 * n * n)
}

#[test]
fn telescoping_ratio_is_exact() {
    for n in [2u64, 10, 1000, 123_456] {
        let r = partial_ratio(&SingularValueSeq::telescoping(), n).unwrap();
        let expected = ((n + 2) as f64).ln() / (n as f64).ln();
        assert!((r - expected).abs() < 1e-12, "n = {n}");
    }
}

#[test]
fn summable_ratio_decays() {
    let s = SingularValueSeq::geometric(0.5);
    let r = partial_ratio(&s, 1_000_000).unwrap();
    assert!((r - 2.0 / (1e6f64).ln()).abs() < 1e-12);
}

#[test]
fn harmonic_ratio_matches_harmonic_numbers() {
    let n = 1_000_000;
    let r = partial_ratio(&SingularValueSeq::harmonic(), n).unwrap();
    assert!((r - harmonic_number(n + 1) / (n as f64).ln()).abs() < 1e-12);
}

#[test]
fn ratio_needs_two_terms() {
    assert_eq!(partial_ratio(&SingularValueSeq::harmonic(), 1), Err(DixmierError::NTooSmall(1)));
}

#[test]
fn extrapolated_values() {
    let harmonic = dixmier_estimate(&SingularValueSeq::harmonic(), &DECADES).unwrap();
    assert!((harmonic.value - 1.0).abs() < 0.01 && harmonic.error_bar < 0.01, "{harmonic:?}");
    let trace_class = dixmier_estimate(&SingularValueSeq::inverse_square(), &DECADES).unwrap();
    assert!(trace_class.value.abs() < 0.01, "{trace_class:?}");
    let doubled = dixmier_estimate(&SingularValueSeq::harmonic().with_multiplicity(2), &DECADES).unwrap();
    assert!((doubled.value - 2.0).abs() < 0.02, "{doubled:?}");
}

#[test]
fn schedules_are_validated() {
    let s = SingularValueSeq::harmonic();
    for bad in [&[10u64, 100][..], &[100, 10, 1000], &[1, 10, 100], &[10, 10, 100]] {
        assert_eq!(dixmier_estimate(&s, bad), Err(DixmierError::BadSchedule));
    }
}

#[test]
fn increasing_sequences_are_rejected() {
    let s = SingularValueSeq::from_runs("bad", vec![Run::new(1.0, 1), Run::new(2.0, 1)]);
    assert!(matches!(partial_ratio(&s, 5), Err(DixmierError::InvalidSequence { index: 1, .. })));
}

#[test]
fn measurability_verdicts() {
    assert!(is_measurable(&SingularValueSeq::harmonic(), 0.01).unwrap());
    assert!(is_measurable(&SingularValueSeq::inverse_square(), 0.01).unwrap());
    let m = measurability(&SingularValueSeq::inverse_square(), 0.01).unwrap();
    assert!(m.even.value.abs() < 0.01);
    assert!(!is_measurable(&SingularValueSeq::oscillating(), 0.01).unwrap());
    assert!(is_measurable(&SingularValueSeq::harmonic(), -1.0).is_err());
}

#[test]
fn oscillating_ratio_really_oscillates() {
    let s = SingularValueSeq::oscillating();
    // Multiplicity 2 while log(k+2) lies in [2, 4) or [8, 16), 1 on [1, 2) and [4, 8); the ratio lags behind.
    let rising = partial_ratio(&s, 100).unwrap();
    let falling = partial_ratio(&s, 6_000).unwrap();
    let rising_again = partial_ratio(&s, 30_000_000).unwrap();
    assert!(rising - falling > 0.1 && rising_again - falling > 0.25, "{rising} {falling} {rising_again}");
}

#[test]
fn linearity_on_direct_sums() {
    let a = SingularValueSeq::harmonic();
    let b = SingularValueSeq::telescoping();
    let ea = dixmier_estimate(&a, &DECADES).unwrap();
    let eb = dixmier_estimate(&b, &DECADES).unwrap();
    let sum = dixmier_estimate(&a.merged(&b), &DECADES).unwrap();
    let slack = ea.error_bar + eb.error_bar + sum.error_bar + 1e-3;
    assert!((sum.value - ea.value - eb.value).abs() < slack, "{sum:?}");
}

#[test]
fn finite_prefix_edits_do_not_move_the_limit() {
    let base = SingularValueSeq::harmonic();
    let edited = base.with_prefix(vec![50.0, 40.0, 30.0, 20.0, 10.0]);
    let far = [1_000_000_000_000u64 / 1_000_000, 10_000_000, 20_000_000];
    let e0 = dixmier_estimate(&base, &far).unwrap();
    let e1 = dixmier_estimate(&edited, &far).unwrap();
    assert!((e0.value - e1.value).abs() < 0.01 + e0.error_bar + e1.error_bar, "{e0:?} {e1:?}");
}

#[test]
fn positivity_and_homogeneity() {
    let s = SingularValueSeq::harmonic().merged(&SingularValueSeq::inverse_square());
    let e = dixmier_estimate(&s, &DECADES).unwrap();
    assert!(e.value >= -e.error_bar);
    let scaled = dixmier_estimate(&s.scaled(3.5), &DECADES).unwrap();
    assert!((scaled.value - 3.5 * e.value).abs() < 1e-12 * e.value.abs());
}

fn brute_pinfty(values: &[f64], p: f64, n: u64) -> f64 {
    let mut sum = 0.0;
    let mut best = 0.0f64;
    for (m, v) in values.iter().enumerate().take(n as usize + 1) {
        sum += v;
        if m >= 1 {
            best = best.max(sum / (m as f64).powf(1.0 - 1.0 / p));
        }
    }
    best
}

fn expand(runs: &[Run]) -> Vec<f64> {
    runs.iter().flat_map(|r| std::iter::repeat_n(r.value, r.multiplicity as usize)).collect()
}

#[test]
fn pinfty_norm_of_the_critical_power_is_bounded() {
    for p in [1.5, 2.0, 3.0] {
        let s = SingularValueSeq::power(p);
        let mut previous = 0.0;
        for n in [10u64, 1000, 100_000, 1_000_000] {
            let norm = pinfty_norm(&s, p, n).unwrap();
            // Σ_{n≤M} (n+1)^{-1/p} ≤ 1 + (p/(p-1))((M+1)^{1-1/p} - 1) and (M+1)/M ≤ 2.
            let bound = 1.0 + p / (p - 1.0) * 2f64.powf(1.0 - 1.0 / p);
            assert!(norm >= previous && norm <= bound, "p = {p}, n = {n}: {norm}");
            previous = norm;
        }
    }
    assert!(pinfty_norm(&SingularValueSeq::harmonic(), 1.0, 10).is_err());
}

#[test]
fn norms_converge_on_summable_sequences_and_scale() {
    let s = SingularValueSeq::geometric(0.5);
    let a = p1_norm(&s, 2.0, 1_000).unwrap();
    let b = p1_norm(&s, 2.0, 100_000).unwrap();
    assert!((a - b).abs() < 1e-12 && b >= a);
    let c = pinfty_norm(&s, 2.0, 1_000).unwrap();
    let d = pinfty_norm(&s, 2.0, 100_000).unwrap();
    assert!((c - d).abs() < 1e-12 && d >= c);
    let scaled = p1_norm(&s.scaled(4.0), 2.0, 1_000).unwrap();
    assert!((scaled - 4.0 * a).abs() < 1e-12);
    assert!((pinfty_norm(&s.scaled(4.0), 2.0, 1_000).unwrap() - 4.0 * c).abs() < 1e-12);
}

fn run_list() -> impl Strategy<Value = Vec<Run>> {
    proptest::collection::vec((0.01f64..1.0, 1u64..6), 1..40).prop_map(|raw| {
        let mut values: Vec<(f64, u64)> = raw;
        values.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        values.into_iter().map(|(v, m)| Run::new(v, m)).collect()
    })
}

proptest! {
    #[test]
    fn pinfty_matches_brute_force(runs in run_list(), p in 1.2f64..4.0, n in 1u64..200) {
        let values = expand(&runs);
        let fast = pinfty_norm(&SingularValueSeq::from_runs("r", runs), p, n).unwrap();
        let slow = brute_pinfty(&values, p, n);
        prop_assert!((fast - slow).abs() <= 1e-9 * slow.max(1.0), "{} vs {}", fast, slow);
    }

    #[test]
    fn merge_preserves_counts_and_order(a in run_list(), b in run_list()) {
        let total: u64 = a.iter().chain(&b).map(|r| r.multiplicity).sum();
        let merged = SingularValueSeq::from_runs("a", a).merged(&SingularValueSeq::from_runs("b", b));
        let runs: Vec<Run> = merged.validated().collect::<Result<Vec<_>, _>>().unwrap().into_iter().map(|(_, r)| r).collect();
        prop_assert_eq!(runs.iter().map(|r| r.multiplicity).sum::<u64>(), total);
    }

    #[test]
    fn partial_sums_match_expansion(runs in run_list(), n in 2u64..150) {
        let values = expand(&runs);
        let direct: f64 = values.iter().take(n as usize + 1).sum();
        let r = partial_ratio(&SingularValueSeq::from_runs("r", runs), n).unwrap();
        prop_assert!((r * (n as f64).ln() - direct).abs() < 1e-9);
    }
}
