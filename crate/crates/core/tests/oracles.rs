// SPDX-License-Identifier: Apache-2.0

//! Cross-checks of the exact LP distortion oracle against independent
//! computations: closed forms for two candidates, exhaustive line
//! embeddings, and direct evaluation on concrete metrics.

use vetolab::distortion::{
    brute_force_line_oracle, consistency_distortion, distortion_on_metric, worst_case_distortion,
};
use vetolab::generators::{random_euclidean, random_profile, tight_distortion, tight_instance};
use vetolab::{ratio, Extended, PreferenceProfile, Rational};

/// Two candidates, `k` of `n` voters rank `a` first: `1 + 2(n−k)/k`,
/// attained with `a`'s supporters halfway and the rest on `b`.
fn two_candidate_closed_form(n: usize, k: usize) -> Extended {
    if k == 0 {
        return Extended::Infinite;
    }
    Extended::Finite(Rational::one() + Rational::new(2 * (n - k) as i64, k as i64))
}

#[test]
fn two_candidate_profiles_match_closed_form() {
    for n in 1..=5 {
        for k in 0..=n {
            let rankings = (0..n)
                .map(|v| if v < k { vec![0, 1] } else { vec![1, 0] })
                .collect();
            let profile = PreferenceProfile::new(2, rankings).unwrap();
            let expected = two_candidate_closed_form(n, k);
            let lp = worst_case_distortion(&profile, 0).unwrap();
            assert_eq!(lp.value, expected, "n={n} k={k}");
            if n + 2 <= 6 {
                assert_eq!(
                    brute_force_line_oracle(&profile, 0, 4).unwrap(),
                    expected,
                    "n={n} k={k}"
                );
            }
        }
    }
}

#[test]
fn line_oracle_never_exceeds_lp() {
    for seed in 0..40 {
        let n = 1 + (seed % 3) as usize;
        let m = 2 + (seed % 2) as usize;
        let profile = random_profile(n, m, seed).unwrap();
        for a in 0..m {
            let lp = worst_case_distortion(&profile, a).unwrap().value;
            let line = brute_force_line_oracle(&profile, a, 8).unwrap();
            assert!(line <= lp, "seed {seed} a={a}: line {line} > lp {lp}");
        }
    }
}

#[test]
fn witnesses_are_aligned_and_attain_the_value() {
    for seed in 0..30 {
        let profile = random_profile(4, 3, 100 + seed).unwrap();
        for a in 0..3 {
            let report = worst_case_distortion(&profile, a).unwrap();
            let Some(w) = report.witness else {
                assert_eq!(report.value, Extended::Infinite);
                continue;
            };
            assert!(w.is_aligned(&profile).unwrap());
            let ratio =
                w.social_cost(a).unwrap() / w.social_cost(report.reference_candidate).unwrap();
            assert_eq!(report.value, ratio);
        }
    }
}

#[test]
fn lp_dominates_every_concrete_metric() {
    for seed in 0..40 {
        let inst = random_euclidean(5, 3, 2, seed).unwrap();
        if inst
            .metric
            .social_cost(inst.metric.optimal_candidate())
            .unwrap()
            .is_zero()
        {
            continue;
        }
        for a in 0..3 {
            let on_metric = distortion_on_metric(&inst.metric, a).unwrap();
            let worst = worst_case_distortion(&inst.profile, a).unwrap().value;
            assert!(worst >= on_metric, "seed {seed} a={a}");
            let o = inst.metric.optimal_candidate();
            let cons = consistency_distortion(&inst.profile, a, o).unwrap().value;
            assert!(cons >= on_metric && cons <= worst, "seed {seed} a={a}");
        }
    }
}

#[test]
fn tight_family_is_bounded_by_the_lp() {
    // μ = 1/2, λ = 1 (uniform voter weights): the family approaches 5.
    let (mu, lambda) = (ratio(1, 2), Rational::one());
    let mut lp_value = None;
    for eps in [ratio(1, 10), ratio(1, 100), ratio(1, 1000)] {
        let inst = tight_instance(&mu, &lambda, 3, &eps).unwrap();
        let value = distortion_on_metric(&inst.metric, 1).unwrap();
        assert_eq!(value, tight_distortion(&mu, &lambda, &eps));
        let lp =
            lp_value.get_or_insert_with(|| worst_case_distortion(&inst.profile, 1).unwrap().value);
        assert!(*lp >= value);
    }
    assert!(lp_value.unwrap() >= Rational::integer(5));
}

#[test]
fn line_oracle_converges_on_tight_profile() {
    let inst = tight_instance(&ratio(1, 2), &Rational::one(), 3, &ratio(1, 10)).unwrap();
    let lp = worst_case_distortion(&inst.profile, 1).unwrap().value;
    let mut previous = Extended::Finite(Rational::zero());
    for grid in [8, 16, 32] {
        let value = brute_force_line_oracle(&inst.profile, 1, grid).unwrap();
        assert!(value >= previous, "grid {grid}");
        assert!(value <= lp, "grid {grid}");
        previous = value;
    }
    assert!(previous >= Rational::integer(5));
}

#[test]
fn everyone_ranking_a_last_is_unbounded() {
    for n in 1..=4 {
        let profile = PreferenceProfile::new(2, vec![vec![1, 0]; n]).unwrap();
        assert_eq!(
            worst_case_distortion(&profile, 0).unwrap().value,
            Extended::Infinite
        );
        // Growing grids find ever larger ratios on the line.
        let coarse = brute_force_line_oracle(&profile, 0, 4).unwrap();
        assert_eq!(coarse, Extended::Infinite);
    }
}

#[test]
fn identical_inputs_give_identical_reports() {
    let profile = random_profile(5, 4, 77).unwrap();
    for a in 0..4 {
        assert_eq!(
            worst_case_distortion(&profile, a).unwrap(),
            worst_case_distortion(&profile, a).unwrap()
        );
    }
}
