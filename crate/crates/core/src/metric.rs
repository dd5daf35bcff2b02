// SPDX-License-Identifier: Apache-2.0

//! Metric instances over voters and candidates, and the cardinal quantities
//! derived from them: social cost, the optimal candidate, decisiveness and
//! prediction error.

use crate::error::{Error, Result};
use crate::profile::PreferenceProfile;
use crate::rational::Rational;

/// Distances over `n` voters and `m` candidates.
///
/// Points are indexed `0..n` for voters and `n..n+m` for candidates. The
/// matrix is validated on construction to be a pseudo-metric: zero
/// diagonal, symmetric, non-negative and satisfying every triangle
/// inequality. Distinct points may sit at distance zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetricInstance {
    n: usize,
    m: usize,
    dist: Vec<Rational>,
}

impl MetricInstance {
    /// Validates and wraps a full `(n+m)×(n+m)` distance matrix.
    pub fn new(n: usize, m: usize, matrix: Vec<Vec<Rational>>) -> Result<Self> {
        if n == 0 || m == 0 {
            return Err(Error::InvalidMetric(
                "need at least one voter and one candidate".into(),
            ));
        }
        let size = n + m;
        if matrix.len() != size || matrix.iter().any(|row| row.len() != size) {
            return Err(Error::InvalidMetric(format!(
                "expected a {size}x{size} matrix"
            )));
        }
        let dist: Vec<Rational> = matrix.into_iter().flatten().collect();
        let metric = MetricInstance { n, m, dist };
        metric.validate()?;
        Ok(metric)
    }

    /// Points on a line; distances are absolute coordinate differences.
    pub fn from_line(voters: &[Rational], candidates: &[Rational]) -> Result<Self> {
        let points: Vec<Vec<Rational>> = voters
            .iter()
            .chain(candidates)
            .map(|x| vec![x.clone()])
            .collect();
        Self::from_l1_points(voters.len(), candidates.len(), &points)
    }

    /// Points in `R^k` under the L1 norm, voters first.
    pub fn from_l1_points(n: usize, m: usize, points: &[Vec<Rational>]) -> Result<Self> {
        if points.len() != n + m {
            return Err(Error::DimensionMismatch(format!(
                "{} points for {n} voters and {m} candidates",
                points.len()
            )));
        }
        let matrix = points
            .iter()
            .map(|x| {
                points
                    .iter()
                    .map(|y| x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum())
                    .collect()
            })
            .collect();
        Self::new(n, m, matrix)
    }

    fn validate(&self) -> Result<()> {
        let size = self.size();
        for x in 0..size {
            if !self.dist(x, x).is_zero() {
                return Err(Error::InvalidMetric(format!("d({x},{x}) is not zero")));
            }
            for y in 0..size {
                let d = self.dist(x, y);
                if d.is_negative() {
                    return Err(Error::InvalidMetric(format!("d({x},{y}) is negative")));
                }
                if d != self.dist(y, x) {
                    return Err(Error::InvalidMetric(format!("d({x},{y}) != d({y},{x})")));
                }
            }
        }
        for x in 0..size {
            for y in 0..size {
                let dxy = self.dist(x, y);
                for z in 0..size {
                    if dxy + self.dist(y, z) < *self.dist(x, z) {
                        return Err(Error::InvalidMetric(format!(
                            "triangle inequality fails for ({x},{y},{z})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Total number of points, `n + m`.
    pub fn size(&self) -> usize {
        self.n + self.m
    }

    /// Distance between two points by global index.
    pub fn dist(&self, x: usize, y: usize) -> &Rational {
        &self.dist[x * self.size() + y]
    }

    /// Voter-to-candidate distance.
    pub fn vc(&self, voter: usize, candidate: usize) -> &Rational {
        self.dist(voter, self.n + candidate)
    }

    /// Candidate-to-candidate distance.
    pub fn cc(&self, a: usize, b: usize) -> &Rational {
        self.dist(self.n + a, self.n + b)
    }

    /// Voter-to-voter distance.
    pub fn vv(&self, v: usize, w: usize) -> &Rational {
        self.dist(v, w)
    }

    /// Full matrix, row by row.
    pub fn rows(&self) -> impl Iterator<Item = &[Rational]> {
        self.dist.chunks(self.size())
    }

    /// Every distance multiplied by `factor > 0`.
    pub fn scaled(&self, factor: &Rational) -> MetricInstance {
        assert!(factor.is_positive());
        MetricInstance {
            n: self.n,
            m: self.m,
            dist: self.dist.iter().map(|d| d * factor).collect(),
        }
    }

    /// Sorts candidates by distance for each voter, ties by candidate index.
    pub fn induce_profile(&self) -> PreferenceProfile {
        let rankings = (0..self.n)
            .map(|v| {
                let mut ranking: Vec<usize> = (0..self.m).collect();
                ranking.sort_by(|&a, &b| self.vc(v, a).cmp(self.vc(v, b)).then(a.cmp(&b)));
                ranking
            })
            .collect();
        PreferenceProfile::new(self.m, rankings).expect("sorted candidate lists are permutations")
    }

    fn check_dimensions(&self, profile: &PreferenceProfile) -> Result<()> {
        if profile.n() != self.n || profile.m() != self.m {
            return Err(Error::DimensionMismatch(format!(
                "metric has {}x{}, profile has {}x{}",
                self.n,
                self.m,
                profile.n(),
                profile.m()
            )));
        }
        Ok(())
    }

    /// First voter whose ranking the distances contradict, if any.
    pub fn first_unaligned_voter(&self, profile: &PreferenceProfile) -> Result<Option<usize>> {
        self.check_dimensions(profile)?;
        Ok((0..self.n).find(|&v| {
            profile
                .ranking(v)
                .windows(2)
                .any(|w| self.vc(v, w[0]) > self.vc(v, w[1]))
        }))
    }

    /// `d ▷ σ`: each voter's distances are non-decreasing along its ranking.
    pub fn is_aligned(&self, profile: &PreferenceProfile) -> Result<bool> {
        Ok(self.first_unaligned_voter(profile)?.is_none())
    }

    /// Errors with [`Error::UnalignedMetric`] unless aligned.
    pub fn require_aligned(&self, profile: &PreferenceProfile) -> Result<()> {
        match self.first_unaligned_voter(profile)? {
            Some(voter) => Err(Error::UnalignedMetric { voter }),
            None => Ok(()),
        }
    }

    /// `SC(c) = Σ_v d(v,c)`.
    pub fn social_cost(&self, candidate: usize) -> Result<Rational> {
        if candidate >= self.m {
            return Err(Error::IndexOutOfRange {
                kind: "candidate",
                index: candidate,
                size: self.m,
            });
        }
        Ok((0..self.n).map(|v| self.vc(v, candidate)).sum())
    }

    pub fn social_costs(&self) -> Vec<Rational> {
        (0..self.m)
            .map(|c| (0..self.n).map(|v| self.vc(v, c)).sum())
            .collect()
    }

    /// Social-cost minimiser, lowest index on ties.
    pub fn optimal_candidate(&self) -> usize {
        let costs = self.social_costs();
        let mut best = 0;
        for c in 1..self.m {
            if costs[c] < costs[best] {
                best = c;
            }
        }
        best
    }

    /// Smallest `α` for which every voter is `α`-decisive under `profile`:
    /// `max_v max_{c≠top(v)} d(v,top(v)) / d(v,c)`, with `0/0` read as 0.
    pub fn decisiveness_alpha(&self, profile: &PreferenceProfile) -> Result<Rational> {
        self.check_dimensions(profile)?;
        let mut alpha = Rational::zero();
        for v in 0..self.n {
            let top = profile.top(v);
            let near = self.vc(v, top);
            for c in (0..self.m).filter(|&c| c != top) {
                let far = self.vc(v, c);
                if far.is_zero() {
                    if near.is_zero() {
                        continue;
                    }
                    return Err(Error::DegenerateDecisiveness {
                        voter: v,
                        candidate: c,
                    });
                }
                let r = near / far;
                if r > alpha {
                    alpha = r;
                }
            }
        }
        Ok(alpha)
    }

    /// `η = n·d(p̂,o) / SC(o)` for the optimal candidate `o`.
    pub fn prediction_error(&self, predicted: usize) -> Result<Rational> {
        if predicted >= self.m {
            return Err(Error::IndexOutOfRange {
                kind: "candidate",
                index: predicted,
                size: self.m,
            });
        }
        let opt = self.optimal_candidate();
        let opt_cost = self.social_cost(opt)?;
        if opt_cost.is_zero() {
            return Err(Error::ZeroOptimalCost);
        }
        Ok(Rational::from(self.n) * self.cc(predicted, opt) / opt_cost)
    }
}
