// SPDX-License-Identifier: Apache-2.0

//! Distortion of a fixed candidate: on a single metric, in the worst case over
//! every metric aligned with a profile (exact LP), restricted to metrics where
//! the prediction is optimal, and by exhaustive search over line embeddings.

use crate::error::{Error, Result};
use crate::lp::{LinearProgram, LpOutcome};
use crate::metric::MetricInstance;
use crate::profile::PreferenceProfile;
use crate::rational::{Extended, Rational};

/// Worst-case ratio `SC(a)/SC(b)` found for `candidate`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistortionReport {
    pub candidate: usize,
    pub value: Extended,
    /// A metric attaining `value`, when the value is finite.
    pub witness: Option<MetricInstance>,
    /// The candidate `b` whose cost is the denominator of the worst ratio.
    pub reference_candidate: usize,
}

/// `SC(a)/SC(o)` on one metric.
pub fn distortion_on_metric(metric: &MetricInstance, candidate: usize) -> Result<Rational> {
    let cost = metric.social_cost(candidate)?;
    let opt = metric.social_cost(metric.optimal_candidate())?;
    if opt.is_zero() {
        return Err(Error::ZeroOptimalCost);
    }
    Ok(cost / opt)
}

/// Maps unordered point pairs `{x, y}`, `x ≠ y`, to LP variable indices.
struct PairIndex {
    size: usize,
    index: Vec<usize>,
    count: usize,
}

impl PairIndex {
    fn new(size: usize) -> Self {
        let mut index = vec![usize::MAX; size * size];
        let mut count = 0;
        for x in 0..size {
            for y in x + 1..size {
                index[x * size + y] = count;
                index[y * size + x] = count;
                count += 1;
            }
        }
        PairIndex { size, index, count }
    }

    fn var(&self, x: usize, y: usize) -> usize {
        debug_assert!(x != y);
        self.index[x * self.size + y]
    }
}

/// Extra conditions on the adversary's metric beyond alignment.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MetricFilter {
    /// `(p̂, η)`: the prediction `p̂` has error at most `η`, i.e.
    /// `n·d(p̂,o) ≤ η·SC(o)` for the optimal candidate `o`.
    pub prediction_error: Option<(usize, Rational)>,
    /// Every voter is `α`-decisive: `d(v,top(v)) ≤ α·d(v,c)` for all `c`.
    pub decisiveness: Option<Rational>,
}

/// Rows added to the program for one reference candidate `b`.
#[derive(Default)]
struct Rows<'a> {
    /// `b` must be a social-cost minimiser.
    reference_optimal: bool,
    eta: Option<(usize, &'a Rational)>,
    alpha: Option<&'a Rational>,
}

/// LP over all pseudo-metrics on `V ∪ C` aligned with `profile`:
/// maximize `Σ_v d(v,a)` subject to `Σ_v d(v,b) ≤ 1`.
///
/// Every other row is homogeneous, so the optimum saturates the
/// normalisation whenever it is positive; this makes `≤ 1` equivalent to
/// `= 1` while keeping the origin feasible.
fn build_program(
    profile: &PreferenceProfile,
    a: usize,
    b: usize,
    rows: &Rows,
) -> (LinearProgram, PairIndex) {
    let n = profile.n();
    let m = profile.m();
    let size = n + m;
    let pairs = PairIndex::new(size);
    let one = Rational::one();
    let minus_one = -Rational::one();
    let mut lp = LinearProgram::new(pairs.count);

    for v in 0..n {
        lp.set_objective(pairs.var(v, n + a), one.clone());
    }
    let cost_b = || -> Vec<(usize, Rational)> {
        (0..n).map(|v| (pairs.var(v, n + b), one.clone())).collect()
    };
    lp.add_le(cost_b(), one.clone());
    if rows.reference_optimal {
        for c in (0..m).filter(|&c| c != b) {
            let mut coeffs = cost_b();
            coeffs.extend((0..n).map(|v| (pairs.var(v, n + c), minus_one.clone())));
            lp.add_le(coeffs, Rational::zero());
        }
    }
    if let Some((predicted, eta)) = rows.eta {
        if predicted != b {
            let mut coeffs: Vec<(usize, Rational)> =
                (0..n).map(|v| (pairs.var(v, n + b), -eta)).collect();
            coeffs.push((pairs.var(n + predicted, n + b), Rational::from(n)));
            lp.add_le(coeffs, Rational::zero());
        }
    }
    if let Some(alpha) = rows.alpha {
        let neg_alpha = -alpha;
        for v in 0..n {
            let top = profile.top(v);
            for &c in &profile.ranking(v)[1..] {
                lp.add_le(
                    vec![
                        (pairs.var(v, n + top), one.clone()),
                        (pairs.var(v, n + c), neg_alpha.clone()),
                    ],
                    Rational::zero(),
                );
            }
        }
    }
    for v in 0..n {
        for w in profile.ranking(v).windows(2) {
            lp.add_le(
                vec![
                    (pairs.var(v, n + w[0]), one.clone()),
                    (pairs.var(v, n + w[1]), minus_one.clone()),
                ],
                Rational::zero(),
            );
        }
    }
    // d(x,z) ≤ d(x,y) + d(y,z) for every pair {x,z} and every third point y.
    for x in 0..size {
        for z in x + 1..size {
            for y in (0..size).filter(|&y| y != x && y != z) {
                lp.add_le(
                    vec![
                        (pairs.var(x, z), one.clone()),
                        (pairs.var(x, y), minus_one.clone()),
                        (pairs.var(y, z), minus_one.clone()),
                    ],
                    Rational::zero(),
                );
            }
        }
    }
    (lp, pairs)
}

fn witness_from_solution(
    n: usize,
    m: usize,
    pairs: &PairIndex,
    solution: &[Rational],
) -> MetricInstance {
    let size = n + m;
    let matrix = (0..size)
        .map(|x| {
            (0..size)
                .map(|y| {
                    if x == y {
                        Rational::zero()
                    } else {
                        solution[pairs.var(x, y)].clone()
                    }
                })
                .collect()
        })
        .collect();
    MetricInstance::new(n, m, matrix).expect("LP solutions satisfy the metric axioms")
}

/// Every distance 1: aligned with any profile, all costs equal.
fn uniform_metric(n: usize, m: usize) -> MetricInstance {
    let size = n + m;
    let matrix = (0..size)
        .map(|x| {
            (0..size)
                .map(|y| {
                    if x == y {
                        Rational::zero()
                    } else {
                        Rational::one()
                    }
                })
                .collect()
        })
        .collect();
    MetricInstance::new(n, m, matrix).expect("uniform metric is valid")
}

/// Solves one `(a, b)` program, returning the value and its witness.
fn solve_pair(
    profile: &PreferenceProfile,
    a: usize,
    b: usize,
    rows: &Rows,
) -> (Extended, Option<MetricInstance>) {
    let (lp, pairs) = build_program(profile, a, b, rows);
    match lp.solve() {
        LpOutcome::Unbounded => (Extended::Infinite, None),
        // Only the zero metric passes the restrictions.
        LpOutcome::Optimal { value, .. } if value.is_zero() => (Extended::Finite(value), None),
        LpOutcome::Optimal {
            value, solution, ..
        } => {
            let witness = witness_from_solution(profile.n(), profile.m(), &pairs, &solution);
            debug_assert_eq!(witness.social_cost(b).unwrap(), Rational::one());
            (Extended::Finite(value), Some(witness))
        }
    }
}

/// `sup_{d ▷ σ} SC(a,d) / SC(o(d),d)`, computed as the maximum over reference
/// candidates `b` of the exact LP optimum. Ties keep the lowest `b`.
pub fn worst_case_distortion(
    profile: &PreferenceProfile,
    candidate: usize,
) -> Result<DistortionReport> {
    profile.check_candidate(candidate)?;
    let mut report = DistortionReport {
        candidate,
        value: Extended::Finite(Rational::one()),
        witness: Some(uniform_metric(profile.n(), profile.m())),
        reference_candidate: candidate,
    };
    for b in (0..profile.m()).filter(|&b| b != candidate) {
        let (value, witness) = solve_pair(profile, candidate, b, &Rows::default());
        if value > report.value {
            report = DistortionReport {
                candidate,
                value,
                witness,
                reference_candidate: b,
            };
            if !report.value.is_finite() {
                break;
            }
        }
    }
    Ok(report)
}

/// Worst-case distortion of `candidate` over aligned metrics in which
/// `predicted` is an optimal candidate.
pub fn consistency_distortion(
    profile: &PreferenceProfile,
    candidate: usize,
    predicted: usize,
) -> Result<DistortionReport> {
    profile.check_candidate(candidate)?;
    profile.check_candidate(predicted)?;
    if candidate == predicted {
        return Ok(DistortionReport {
            candidate,
            value: Extended::Finite(Rational::one()),
            witness: Some(uniform_metric(profile.n(), profile.m())),
            reference_candidate: predicted,
        });
    }
    let (value, witness) = solve_pair(
        profile,
        candidate,
        predicted,
        &Rows {
            reference_optimal: true,
            ..Rows::default()
        },
    );
    Ok(DistortionReport {
        candidate,
        value,
        witness,
        reference_candidate: predicted,
    })
}

/// Worst-case distortion of `candidate` over aligned metrics passing
/// `filter`. Every reference candidate, including `candidate` itself, gets
/// its own program; with a prediction-error bound the reference is also
/// required to be optimal so that the bound refers to it.
///
/// Fails with [`Error::NoFeasibleMetric`] when no metric passing the filter
/// has a positive optimal cost.
pub fn restricted_distortion(
    profile: &PreferenceProfile,
    candidate: usize,
    filter: &MetricFilter,
) -> Result<DistortionReport> {
    profile.check_candidate(candidate)?;
    if let Some((predicted, eta)) = &filter.prediction_error {
        profile.check_candidate(*predicted)?;
        if eta.is_negative() {
            return Err(Error::ParameterOutOfRange {
                name: "eta",
                value: eta.clone(),
                expected: "eta >= 0",
            });
        }
    }
    if let Some(alpha) = &filter.decisiveness {
        if alpha.is_negative() || *alpha > Rational::one() {
            return Err(Error::ParameterOutOfRange {
                name: "alpha",
                value: alpha.clone(),
                expected: "0 <= alpha <= 1",
            });
        }
    }
    let rows = Rows {
        reference_optimal: filter.prediction_error.is_some(),
        eta: filter.prediction_error.as_ref().map(|(p, e)| (*p, e)),
        alpha: filter.decisiveness.as_ref(),
    };
    let mut best: Option<DistortionReport> = None;
    for b in 0..profile.m() {
        let (value, witness) = solve_pair(profile, candidate, b, &rows);
        if best.as_ref().is_none_or(|r| value > r.value) {
            best = Some(DistortionReport {
                candidate,
                value,
                witness,
                reference_candidate: b,
            });
        }
        if !best.as_ref().unwrap().value.is_finite() {
            break;
        }
    }
    let best = best.expect("at least one candidate");
    if best.value == Rational::zero() {
        return Err(Error::NoFeasibleMetric);
    }
    Ok(best)
}

/// Largest `SC(a)/SC(o)` over all placements of the `n + m` points at grid
/// positions `{0, 1/g, …, 1}` on a line whose distances are aligned with
/// `profile`. Exhaustive over candidate placements; the voter placements
/// are optimised exactly per reference candidate by Dinkelbach iteration,
/// which is valid because voters contribute independently to both costs.
pub fn brute_force_line_oracle(
    profile: &PreferenceProfile,
    candidate: usize,
    grid_size: u32,
) -> Result<Extended> {
    profile.check_candidate(candidate)?;
    if grid_size == 0 {
        return Err(Error::InvalidParameters(
            "grid size must be positive".into(),
        ));
    }
    let n = profile.n();
    let m = profile.m();
    let g = grid_size as i64;
    let mut best = Extended::Finite(Rational::one());
    let mut cand_pos = vec![0i64; m];
    // Positions are integers 0..=g; ratios are scale-free so no division by g.
    loop {
        // Allowed voter positions given the candidate placement.
        let options: Option<Vec<Vec<i64>>> = (0..n)
            .map(|v| {
                let ranking = profile.ranking(v);
                let allowed: Vec<i64> = (0..=g)
                    .filter(|&x| {
                        ranking
                            .windows(2)
                            .all(|w| (x - cand_pos[w[0]]).abs() <= (x - cand_pos[w[1]]).abs())
                    })
                    .collect();
                (!allowed.is_empty()).then_some(allowed)
            })
            .collect();
        if let Some(options) = options {
            for b in (0..m).filter(|&b| b != candidate) {
                let value = max_ratio(&options, cand_pos[candidate], cand_pos[b]);
                if value > best {
                    best = value;
                    if !best.is_finite() {
                        return Ok(best);
                    }
                }
            }
        }
        // Next candidate placement in lexicographic order.
        let mut i = 0;
        loop {
            if i == m {
                return Ok(best);
            }
            cand_pos[i] += 1;
            if cand_pos[i] <= g {
                break;
            }
            cand_pos[i] = 0;
            i += 1;
        }
    }
}

/// `max Σ|x_v − pa| / Σ|x_v − pb|` with each `x_v` drawn from `options[v]`.
fn max_ratio(options: &[Vec<i64>], pa: i64, pb: i64) -> Extended {
    // Current ratio num/den, starting from 0.
    let (mut num, mut den) = (0i128, 1i128);
    loop {
        let mut total_a = 0i128;
        let mut total_b = 0i128;
        let mut gain = 0i128; // Σ (den·a − num·b) of the chosen points
        for opts in options {
            let mut best: Option<(i128, i128, i128)> = None;
            for &x in opts {
                let da = (x - pa).abs() as i128;
                let db = (x - pb).abs() as i128;
                let score = den * da - num * db;
                let better = match best {
                    None => true,
                    Some((s, _, bdb)) => score > s || (score == s && db > bdb),
                };
                if better {
                    best = Some((score, da, db));
                }
            }
            let (s, da, db) = best.expect("non-empty options");
            gain += s;
            total_a += da;
            total_b += db;
        }
        if gain <= 0 {
            return Extended::Finite(Rational::from_bigints(num.into(), den.into()));
        }
        if total_b == 0 {
            return Extended::Infinite;
        }
        num = total_a;
        den = total_b;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn r(v: i64) -> Rational {
        Rational::integer(v)
    }

    #[test]
    fn single_candidate_is_one() {
        let profile = PreferenceProfile::new(1, vec![vec![0], vec![0]]).unwrap();
        let report = worst_case_distortion(&profile, 0).unwrap();
        assert_eq!(report.value, r(1));
        assert_eq!(brute_force_line_oracle(&profile, 0, 4).unwrap(), r(1));
    }

    #[test]
    fn optimum_has_unit_distortion() {
        let metric = MetricInstance::from_line(&[r(0), r(1), r(4)], &[r(1), r(3)]).unwrap();
        let o = metric.optimal_candidate();
        assert_eq!(distortion_on_metric(&metric, o).unwrap(), r(1));
        assert_eq!(o, 0);
        assert_eq!(distortion_on_metric(&metric, 1).unwrap(), ratio(3, 2));
    }

    #[test]
    fn zero_optimal_cost_is_an_error() {
        let metric = MetricInstance::from_line(&[r(0)], &[r(0), r(1)]).unwrap();
        assert_eq!(
            distortion_on_metric(&metric, 1),
            Err(Error::ZeroOptimalCost)
        );
    }

    #[test]
    fn two_candidates_one_third_support() {
        // One of three voters ranks b first: worst case 1 + 2·2 = 5.
        let profile = PreferenceProfile::new(2, vec![vec![0, 1], vec![0, 1], vec![1, 0]]).unwrap();
        let report = worst_case_distortion(&profile, 1).unwrap();
        assert_eq!(report.value, r(5));
        assert_eq!(report.reference_candidate, 0);
        let witness = report.witness.unwrap();
        assert!(witness.is_aligned(&profile).unwrap());
        assert_eq!(
            witness.social_cost(1).unwrap() / witness.social_cost(0).unwrap(),
            r(5)
        );
    }

    #[test]
    fn everyone_ranks_candidate_last_is_unbounded() {
        let profile = PreferenceProfile::new(2, vec![vec![0, 1], vec![0, 1]]).unwrap();
        let report = worst_case_distortion(&profile, 1).unwrap();
        assert_eq!(report.value, Extended::Infinite);
        assert!(report.witness.is_none());
        assert_eq!(
            brute_force_line_oracle(&profile, 1, 4).unwrap(),
            Extended::Infinite
        );
    }

    #[test]
    fn consistency_of_prediction_is_one() {
        let profile = PreferenceProfile::new(2, vec![vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(consistency_distortion(&profile, 1, 1).unwrap().value, r(1));
    }

    #[test]
    fn consistency_is_at_most_worst_case() {
        let profile =
            PreferenceProfile::new(3, vec![vec![0, 1, 2], vec![1, 2, 0], vec![2, 1, 0]]).unwrap();
        for a in 0..3 {
            let worst = worst_case_distortion(&profile, a).unwrap().value;
            for p in 0..3 {
                let cons = consistency_distortion(&profile, a, p).unwrap();
                assert!(cons.value <= worst);
                if let Some(w) = &cons.witness {
                    assert!(
                        w.optimal_candidate() == p
                            || w.social_cost(p) == w.social_cost(w.optimal_candidate())
                    );
                }
            }
        }
    }

    #[test]
    fn restricted_matches_special_cases() {
        let profile = PreferenceProfile::new(
            3,
            vec![vec![0, 1, 2], vec![1, 0, 2], vec![2, 1, 0], vec![1, 2, 0]],
        )
        .unwrap();
        for a in 0..3 {
            let worst = worst_case_distortion(&profile, a).unwrap().value;
            let alpha_one = MetricFilter {
                decisiveness: Some(Rational::one()),
                ..MetricFilter::default()
            };
            assert_eq!(
                restricted_distortion(&profile, a, &alpha_one)
                    .unwrap()
                    .value,
                worst
            );
            for p in 0..3 {
                let exact = MetricFilter {
                    prediction_error: Some((p, Rational::zero())),
                    ..MetricFilter::default()
                };
                let with_zero_error = restricted_distortion(&profile, a, &exact).unwrap();
                assert_eq!(
                    with_zero_error.value,
                    consistency_distortion(&profile, a, p).unwrap().value
                );
                let loose = MetricFilter {
                    prediction_error: Some((p, Rational::integer(3))),
                    ..MetricFilter::default()
                };
                let loose = restricted_distortion(&profile, a, &loose).unwrap().value;
                assert!(with_zero_error.value <= loose && loose <= worst);
            }
        }
    }

    #[test]
    fn zero_decisive_two_candidates() {
        // Voters sit on their favourites: the minority candidate costs at most
        // twice the majority one.
        let profile = PreferenceProfile::new(2, vec![vec![0, 1], vec![0, 1], vec![1, 0]]).unwrap();
        let filter = MetricFilter {
            decisiveness: Some(Rational::zero()),
            ..MetricFilter::default()
        };
        let report = restricted_distortion(&profile, 1, &filter).unwrap();
        assert_eq!(report.value, Rational::integer(2));
        let w = report.witness.unwrap();
        assert_eq!(w.decisiveness_alpha(&profile).unwrap(), Rational::zero());
    }

    #[test]
    fn max_ratio_matches_enumeration() {
        let options: Vec<Vec<i64>> = vec![vec![0, 2, 5], vec![1, 3], vec![4, 6]];
        let (pa, pb) = (6i64, 1i64);
        let mut best = Rational::zero();
        for &x in &options[0] {
            for &y in &options[1] {
                for &z in &options[2] {
                    let num = (x - pa).abs() + (y - pa).abs() + (z - pa).abs();
                    let den = (x - pb).abs() + (y - pb).abs() + (z - pb).abs();
                    best = best.max(ratio(num, den));
                }
            }
        }
        assert_eq!(max_ratio(&options, pa, pb), best);
    }
}
