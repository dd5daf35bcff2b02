// SPDX-License-Identifier: Apache-2.0

//! Instance families: the tight `(μ, λ)` construction, the two-instance
//! impossibility pair, and seeded random families for sweeps.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::matching::FractionalMatching;
use crate::metric::MetricInstance;
use crate::profile::PreferenceProfile;
use crate::rational::Rational;
use crate::weights::WeightVector;

/// Random coordinates are `k/GRID` for `k ∈ {0..GRID}`.
pub const GRID: i64 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratedInstance {
    pub metric: MetricInstance,
    pub profile: PreferenceProfile,
    pub p: Option<WeightVector>,
    pub q: Option<WeightVector>,
    /// Matching certifying the instance's distinguished candidate, if any.
    pub certificate: Option<FractionalMatching>,
    pub label: String,
    pub parameters: BTreeMap<&'static str, Rational>,
}

impl GeneratedInstance {
    fn from_metric(metric: MetricInstance, label: impl Into<String>) -> Self {
        let profile = metric.induce_profile();
        GeneratedInstance {
            metric,
            profile,
            p: None,
            q: None,
            certificate: None,
            label: label.into(),
            parameters: BTreeMap::new(),
        }
    }

    fn with(mut self, name: &'static str, value: Rational) -> Self {
        self.parameters.insert(name, value);
        self
    }
}

fn out_of_range(name: &'static str, value: &Rational, expected: &'static str) -> Error {
    Error::ParameterOutOfRange {
        name,
        value: value.clone(),
        expected,
    }
}

/// Candidate `a` (index 0) and `b` (index 1) on a line at `0` and `2 − ε`.
/// `λn/(μ+λ)` voters sit on `a`; the other `μn/(μ+λ)` sit at `1`, i.e. at
/// distance 1 from `a` and `1 − ε` from `b`. Voter weights favour the second
/// group so that `λ(p) = λ`, and `q` gives `μ(σ,q) = μ` while keeping `b` in
/// the `(p,q)`-veto core, making `b`'s distortion approach `1 + 2λ/μ`.
pub fn tight_instance(
    mu: &Rational,
    lambda: &Rational,
    n: usize,
    epsilon: &Rational,
) -> Result<GeneratedInstance> {
    let one = Rational::one();
    if !mu.is_positive() || *mu > one {
        return Err(out_of_range("mu", mu, "0 < mu <= 1"));
    }
    let n_r = Rational::from(n);
    if *lambda < one || *lambda > n_r {
        return Err(out_of_range("lambda", lambda, "1 <= lambda <= n"));
    }
    if !epsilon.is_positive() || *epsilon >= one {
        return Err(out_of_range("epsilon", epsilon, "0 < epsilon < 1"));
    }
    let sum = mu + lambda;
    let near = lambda * &n_r / &sum;
    let far = mu * &n_r / &sum;
    let (Some(near_count), Some(far_count)) = (near.to_i64(), far.to_i64()) else {
        return Err(Error::InvalidParameters(format!(
            "group sizes lambda*n/(mu+lambda) = {near} and mu*n/(mu+lambda) = {far} must be integers"
        )));
    };
    let (near_count, far_count) = (near_count as usize, far_count as usize);

    let mut voters = vec![Rational::zero(); near_count];
    voters.extend(std::iter::repeat_n(one.clone(), far_count));
    let metric =
        MetricInstance::from_line(&voters, &[Rational::zero(), Rational::integer(2) - epsilon])?;
    let mut inst = GeneratedInstance::from_metric(metric, "tight");

    let p_near = (&one - (lambda - &one) * mu / lambda) / &n_r;
    let p_far = lambda / &n_r;
    let p: Vec<Rational> = (0..n)
        .map(|v| {
            if v < near_count {
                p_near.clone()
            } else {
                p_far.clone()
            }
        })
        .collect();
    let q_a = mu * lambda / &sum;
    let q_b = (&sum - mu * lambda) / &sum;
    let mut w = FractionalMatching::zeros(n, 2);
    for (v, pv) in p.iter().enumerate() {
        w.set(v, if v < near_count { 1 } else { 0 }, pv.clone());
    }
    inst.p = Some(WeightVector::new(p)?);
    inst.q = Some(WeightVector::new(vec![q_a, q_b])?);
    inst.certificate = Some(w);
    Ok(inst
        .with("mu", mu.clone())
        .with("lambda", lambda.clone())
        .with("n", n_r)
        .with("epsilon", epsilon.clone()))
}

/// `1 + 2λ/μ − ε(μ+λ)/μ`, the distortion of `b` in [`tight_instance`].
pub fn tight_distortion(mu: &Rational, lambda: &Rational, epsilon: &Rational) -> Rational {
    Rational::one() + Rational::integer(2) * lambda / mu - epsilon * (mu + lambda) / mu
}

/// Group sizes `(⌈(1−δ)n/2 + 1⌉, ⌊(1+δ)n/2 − 1⌋)` of the impossibility pair.
pub fn impossibility_groups(delta: &Rational, n: usize) -> (usize, usize) {
    let half = Rational::new(1, 2);
    let n_r = Rational::from(n);
    let first = ((Rational::one() - delta) * &n_r * &half + Rational::one()).ceil();
    let first: usize = first.try_into().expect("group size fits in usize");
    (first, n - first)
}

/// Two line instances inducing the same profile, with `a` at 0 and `b` at
/// `2 − ε`. In the first, `⌈(1−δ)n/2 + 1⌉` voters sit on `b` and the rest at
/// `1 − ε`; in the second, the first group moves to `1` and the rest onto
/// `a`. Any rule must pick one of `a`, `b`, and each is bad in one instance.
pub fn impossibility_pair(
    delta: &Rational,
    n: usize,
    epsilon: &Rational,
) -> Result<(GeneratedInstance, GeneratedInstance)> {
    if delta.is_negative() || *delta >= Rational::one() {
        return Err(out_of_range("delta", delta, "0 <= delta < 1"));
    }
    if n == 0 {
        return Err(Error::InvalidParameters("n must be positive".into()));
    }
    let n_r = Rational::from(n);
    if !epsilon.is_positive() || *epsilon >= n_r.recip() {
        return Err(out_of_range("epsilon", epsilon, "0 < epsilon < 1/n"));
    }
    let (first, rest) = impossibility_groups(delta, n);
    if first == 0 || first >= n {
        return Err(Error::InvalidParameters(format!(
            "groups of sizes {first} and {} must both be non-empty",
            n as i64 - first as i64
        )));
    }
    let one = Rational::one();
    let b_pos = Rational::integer(2) - epsilon;
    let candidates = [Rational::zero(), b_pos.clone()];

    let mut v1 = vec![b_pos; first];
    v1.extend(std::iter::repeat_n(&one - epsilon, rest));
    let mut v2 = vec![one; first];
    v2.extend(std::iter::repeat_n(Rational::zero(), rest));

    let tag = |inst: GeneratedInstance| {
        inst.with("delta", delta.clone())
            .with("n", n_r.clone())
            .with("epsilon", epsilon.clone())
    };
    let i1 = tag(GeneratedInstance::from_metric(
        MetricInstance::from_line(&v1, &candidates)?,
        "impossibility-1",
    ));
    let i2 = tag(GeneratedInstance::from_metric(
        MetricInstance::from_line(&v2, &candidates)?,
        "impossibility-2",
    ));
    Ok((i1, i2))
}

/// `(3 + δ − 4/n − 2ε) / (1 − δ + 4/n)`.
pub fn impossibility_ratio(delta: &Rational, n: usize, epsilon: &Rational) -> Rational {
    let four_n = Rational::new(4, n as i64);
    (Rational::integer(3) + delta - &four_n - Rational::integer(2) * epsilon)
        / (Rational::one() - delta + four_n)
}

fn random_points(rng: &mut ChaCha8Rng, count: usize, dim: usize) -> Vec<Vec<Rational>> {
    (0..count)
        .map(|_| {
            (0..dim)
                .map(|_| Rational::new(rng.gen_range(0..=GRID), GRID))
                .collect()
        })
        .collect()
}

/// Voters and candidates at uniform grid points of `[0,1]^dim` under L1.
pub fn random_euclidean(n: usize, m: usize, dim: usize, seed: u64) -> Result<GeneratedInstance> {
    if n == 0 || m == 0 {
        return Err(Error::InvalidParameters("n and m must be positive".into()));
    }
    if !(1..=3).contains(&dim) {
        return Err(Error::InvalidParameters(format!(
            "dimension {dim} not in 1..=3"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = random_points(&mut rng, n + m, dim);
    let metric = MetricInstance::from_l1_points(n, m, &points)?;
    Ok(GeneratedInstance::from_metric(metric, "random")
        .with("dim", Rational::from(dim))
        .with("seed", Rational::from(seed as usize)))
}

pub fn random_line(n: usize, m: usize, seed: u64) -> Result<GeneratedInstance> {
    random_euclidean(n, m, 1, seed)
}

/// `n` peers in the plane, each voter sharing its location with the
/// candidate of the same index.
pub fn peer_selection(n: usize, seed: u64) -> Result<GeneratedInstance> {
    if n == 0 {
        return Err(Error::InvalidParameters("n must be positive".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sites: Vec<Vec<Rational>> = Vec::with_capacity(n);
    while sites.len() < n {
        let p = random_points(&mut rng, 1, 2).remove(0);
        if !sites.contains(&p) {
            sites.push(p);
        }
    }
    let points: Vec<Vec<Rational>> = sites.iter().chain(sites.iter()).cloned().collect();
    let metric = MetricInstance::from_l1_points(n, n, &points)?;
    Ok(GeneratedInstance::from_metric(metric, "peer-selection")
        .with("alpha", Rational::zero())
        .with("seed", Rational::from(seed as usize)))
}

/// Attempts per voter before [`alpha_decisive`] gives up.
pub const ALPHA_RETRIES: usize = 10_000;

/// Random planar instance whose voters are all `α`-decisive. Candidates are
/// placed first; each voter's location is then redrawn until the ratio of
/// its distances to its nearest and any other candidate is at most `α`.
pub fn alpha_decisive(
    n: usize,
    m: usize,
    alpha: &Rational,
    seed: u64,
) -> Result<GeneratedInstance> {
    if alpha.is_negative() || *alpha > Rational::one() {
        return Err(out_of_range("alpha", alpha, "0 <= alpha <= 1"));
    }
    if n == 0 || m < 2 {
        return Err(Error::InvalidParameters("need n >= 1 and m >= 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let candidates = random_points(&mut rng, m, 2);
    let l1 = |x: &[Rational], y: &[Rational]| -> Rational {
        x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum()
    };
    let mut voters = Vec::with_capacity(n);
    for _ in 0..n {
        let mut attempts = 0;
        let voter = loop {
            if attempts == ALPHA_RETRIES {
                return Err(Error::GenerationFailed {
                    attempts,
                    reason: format!("no location within alpha = {alpha} of a candidate"),
                });
            }
            attempts += 1;
            let x = random_points(&mut rng, 1, 2).remove(0);
            let dists: Vec<Rational> = candidates.iter().map(|c| l1(&x, c)).collect();
            // Nearest candidate, lowest index on ties, as induce_profile does.
            let top = (0..m)
                .min_by(|&i, &j| dists[i].cmp(&dists[j]).then(i.cmp(&j)))
                .unwrap();
            let ok = (0..m).filter(|&c| c != top).all(|c| {
                if dists[c].is_zero() {
                    dists[top].is_zero()
                } else {
                    &dists[top] / &dists[c] <= *alpha
                }
            });
            if ok {
                break x;
            }
        };
        voters.push(voter);
    }
    let points: Vec<Vec<Rational>> = voters.into_iter().chain(candidates).collect();
    let metric = MetricInstance::from_l1_points(n, m, &points)?;
    let inst = GeneratedInstance::from_metric(metric, "alpha-decisive");
    let achieved = inst.metric.decisiveness_alpha(&inst.profile)?;
    debug_assert!(achieved <= *alpha);
    Ok(inst
        .with("alpha", alpha.clone())
        .with("seed", Rational::from(seed as usize)))
}

/// `n` uniformly random strict rankings over `m` candidates.
pub fn random_profile(n: usize, m: usize, seed: u64) -> Result<PreferenceProfile> {
    use rand::seq::SliceRandom;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rankings = (0..n)
        .map(|_| {
            let mut r: Vec<usize> = (0..m).collect();
            r.shuffle(&mut rng);
            r
        })
        .collect();
    PreferenceProfile::new(m, rankings)
}

/// Random probability vector of length `len` with denominators at most
/// `len·GRID`; every entry is positive.
pub fn random_weights(len: usize, seed: u64) -> WeightVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let raw: Vec<i64> = (0..len).map(|_| rng.gen_range(1..=GRID)).collect();
    let total: i64 = raw.iter().sum();
    WeightVector::new(raw.into_iter().map(|x| Rational::new(x, total)).collect())
        .expect("positive entries")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distortion::distortion_on_metric;
    use crate::matching::{build_domination_graph, lambda, mu};
    use crate::rational::ratio;

    #[test]
    fn tight_unit_case() {
        let inst = tight_instance(&Rational::one(), &Rational::one(), 2, &ratio(1, 10)).unwrap();
        assert_eq!(inst.metric.social_cost(0).unwrap(), Rational::one());
        assert_eq!(distortion_on_metric(&inst.metric, 1).unwrap(), ratio(14, 5));
        assert_eq!(
            tight_distortion(&Rational::one(), &Rational::one(), &ratio(1, 10)),
            ratio(14, 5)
        );
    }

    #[test]
    fn tight_half_two() {
        let (m, l, e) = (ratio(1, 2), Rational::integer(2), ratio(1, 100));
        let inst = tight_instance(&m, &l, 5, &e).unwrap();
        let (p, q) = (inst.p.clone().unwrap(), inst.q.clone().unwrap());
        assert_eq!(lambda(&p), l);
        assert_eq!(mu(&inst.profile, &q).unwrap(), m);
        assert_eq!(
            distortion_on_metric(&inst.metric, 1).unwrap(),
            Rational::integer(9) - ratio(1, 20)
        );
        let g = build_domination_graph(&inst.profile, 1, &p, &q).unwrap();
        inst.certificate.unwrap().validate(&g).unwrap();
    }

    #[test]
    fn tight_rejects_fractional_groups() {
        let err =
            tight_instance(&ratio(1, 2), &Rational::integer(2), 4, &ratio(1, 10)).unwrap_err();
        assert!(matches!(err, Error::InvalidParameters(_)));
        assert!(tight_instance(&Rational::zero(), &Rational::one(), 2, &ratio(1, 10)).is_err());
        assert!(tight_instance(&Rational::one(), &Rational::integer(3), 2, &ratio(1, 10)).is_err());
    }

    #[test]
    fn impossibility_first_instance() {
        let (i1, i2) = impossibility_pair(&Rational::zero(), 4, &ratio(1, 10)).unwrap();
        assert_eq!(i1.profile, i2.profile);
        assert_eq!(i1.metric.social_cost(1).unwrap(), Rational::one());
        assert_eq!(i1.metric.social_cost(0).unwrap(), ratio(33, 5));
        assert_eq!(i1.metric.optimal_candidate(), 1);
        assert!(i2.metric.is_aligned(&i1.profile).unwrap());
        // Second instance: SC(a) = 3, SC(b) = 3·9/10 + 19/10.
        assert_eq!(distortion_on_metric(&i2.metric, 1).unwrap(), ratio(23, 15));
        assert_eq!(i2.metric.prediction_error(1).unwrap(), ratio(38, 15));
    }

    #[test]
    fn impossibility_parameter_checks() {
        assert!(impossibility_pair(&Rational::zero(), 4, &ratio(1, 4)).is_err());
        assert!(impossibility_pair(&Rational::one(), 4, &ratio(1, 10)).is_err());
        // n = 2, δ = 0: first group takes everyone.
        assert!(impossibility_pair(&Rational::zero(), 2, &ratio(1, 10)).is_err());
        assert_eq!(impossibility_groups(&ratio(1, 3), 10), (5, 5));
    }

    #[test]
    fn random_families_are_deterministic() {
        assert_eq!(
            random_euclidean(4, 3, 2, 7).unwrap(),
            random_euclidean(4, 3, 2, 7).unwrap()
        );
        assert_eq!(
            random_profile(5, 4, 1).unwrap(),
            random_profile(5, 4, 1).unwrap()
        );
        assert!(random_euclidean(2, 2, 4, 0).is_err());
        let single = random_line(1, 3, 3).unwrap();
        let costs = single.metric.social_costs();
        assert_eq!(costs.iter().min().unwrap(), &costs[single.profile.top(0)]);
    }

    #[test]
    fn peer_selection_is_zero_decisive() {
        let inst = peer_selection(5, 11).unwrap();
        assert_eq!(
            inst.metric.decisiveness_alpha(&inst.profile).unwrap(),
            Rational::zero()
        );
    }

    #[test]
    fn alpha_decisive_respects_alpha() {
        let inst = alpha_decisive(4, 3, &ratio(1, 2), 5).unwrap();
        assert!(inst.metric.decisiveness_alpha(&inst.profile).unwrap() <= ratio(1, 2));
        assert!(alpha_decisive(4, 3, &Rational::one(), 9).is_ok());
    }

    #[test]
    fn random_weights_sum_to_one() {
        let w = random_weights(6, 3);
        assert_eq!(w.iter().sum::<Rational>(), Rational::one());
        assert!(w.iter().all(Rational::is_positive));
    }
}
