// SPDX-License-Identifier: Apache-2.0

//! Voter domination graphs: a voter-to-voter view of a `(p^uni, q)`
//! certificate for `a`, used to bound the optimal social cost.
//!
//! The right side holds a copy of every voter with weight `μ/n` plus one
//! extra vertex `b` absorbing the remaining `1 − μ`.

use crate::error::{Error, Result};
use crate::matching::{
    build_domination_graph, find_fractional_perfect_matching, mu, FractionalMatching,
};
use crate::metric::MetricInstance;
use crate::profile::PreferenceProfile;
use crate::rational::Rational;
use crate::report::CheckReport;
use crate::weights::WeightVector;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VoterDominationGraph {
    candidate: usize,
    mu: Rational,
    // voter_edges[v][v′]: v weakly prefers a to top(v′).
    voter_edges: Vec<Vec<bool>>,
    boost_edges: Vec<bool>,
}

impl VoterDominationGraph {
    pub fn candidate(&self) -> usize {
        self.candidate
    }

    pub fn mu(&self) -> &Rational {
        &self.mu
    }

    pub fn n(&self) -> usize {
        self.voter_edges.len()
    }

    pub fn has_voter_edge(&self, v: usize, w: usize) -> bool {
        self.voter_edges[v][w]
    }

    pub fn has_boost_edge(&self, v: usize) -> bool {
        self.boost_edges[v]
    }

    /// `p(v) = 1/n` on the left.
    pub fn left_weight(&self) -> Rational {
        Rational::new(1, self.n() as i64)
    }

    /// `p′(v′) = μ/n` for each right voter.
    pub fn right_voter_weight(&self) -> Rational {
        &self.mu / Rational::from(self.n())
    }

    /// `p′(b) = 1 − μ`.
    pub fn boost_weight(&self) -> Rational {
        Rational::one() - &self.mu
    }

    pub fn voter_edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |v| {
            (0..n)
                .filter(move |&w| self.voter_edges[v][w])
                .map(move |w| (v, w))
        })
    }
}

/// Builds `VDG(a)`. Fails with [`Error::NotInCore`] unless `a` is in the
/// `(p^uni, q)`-veto core.
pub fn build_vdg(
    profile: &PreferenceProfile,
    a: usize,
    q: &WeightVector,
) -> Result<VoterDominationGraph> {
    let n = profile.n();
    let p = WeightVector::uniform(n);
    let graph = build_domination_graph(profile, a, &p, q)?;
    if find_fractional_perfect_matching(&graph).is_none() {
        return Err(Error::NotInCore { candidate: a });
    }
    let mu = mu(profile, q)?;
    let plu = profile.plurality();
    let n_r = Rational::from(n);
    // Candidates whose weight exceeds their μ-scaled plurality share.
    let surplus: Vec<bool> = (0..profile.m())
        .map(|c| q[c] > &mu * Rational::from(plu[c]) / &n_r)
        .collect();
    let voter_edges = (0..n)
        .map(|v| {
            (0..n)
                .map(|w| profile.weakly_prefers(v, a, profile.top(w)))
                .collect()
        })
        .collect();
    let boost_edges = (0..n)
        .map(|v| (0..profile.m()).any(|c| graph.has_edge(v, c) && surplus[c]))
        .collect();
    Ok(VoterDominationGraph {
        candidate: a,
        mu,
        voter_edges,
        boost_edges,
    })
}

/// Weights on the edges of a voter domination graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransferredMatching {
    // voter[v][v′]
    voter: Vec<Vec<Rational>>,
    boost: Vec<Rational>,
}

impl TransferredMatching {
    pub fn voter_weight(&self, v: usize, w: usize) -> &Rational {
        &self.voter[v][w]
    }

    pub fn boost_weight(&self, v: usize) -> &Rational {
        &self.boost[v]
    }

    pub fn left_total(&self, v: usize) -> Rational {
        self.voter[v].iter().sum::<Rational>() + &self.boost[v]
    }

    pub fn right_total(&self, w: usize) -> Rational {
        self.voter.iter().map(|row| &row[w]).sum()
    }

    pub fn boost_total(&self) -> Rational {
        self.boost.iter().sum()
    }

    /// Total weight on voter-to-voter edges.
    pub fn useful_total(&self) -> Rational {
        self.voter.iter().flatten().sum()
    }

    /// Support inside the graph, and all four marginal identities.
    pub fn validate(&self, vdg: &VoterDominationGraph) -> Result<()> {
        let n = vdg.n();
        let fail = |msg: String| Err(Error::InvalidMatching(msg));
        for v in 0..n {
            for w in 0..n {
                let x = &self.voter[v][w];
                if x.is_negative() || (x.is_positive() && !vdg.has_voter_edge(v, w)) {
                    return fail(format!("w′({v},{w}) = {x} is negative or off the graph"));
                }
            }
            let x = &self.boost[v];
            if x.is_negative() || (x.is_positive() && !vdg.has_boost_edge(v)) {
                return fail(format!("w′({v},b) = {x} is negative or off the graph"));
            }
        }
        for v in 0..n {
            if self.left_total(v) != vdg.left_weight() {
                return fail(format!("left voter {v} carries {}", self.left_total(v)));
            }
            if self.right_total(v) != vdg.right_voter_weight() {
                return fail(format!("right voter {v} carries {}", self.right_total(v)));
            }
        }
        if self.boost_total() != vdg.boost_weight() {
            return fail(format!("b carries {}", self.boost_total()));
        }
        if &self.useful_total() != vdg.mu() {
            return fail(format!("voter edges carry {}", self.useful_total()));
        }
        Ok(())
    }
}

/// Moves a `(p^uni, q)` certificate `w` for `a` onto `VDG(a)`:
/// each voter's share toward `top(v′)` is split evenly over the voters
/// ranking that candidate first, scaled to total `μ/n` per right voter, and
/// the surplus of every candidate over its `μ`-share goes to `b`.
pub fn transfer_matching(
    vdg: &VoterDominationGraph,
    profile: &PreferenceProfile,
    q: &WeightVector,
    w: &FractionalMatching,
) -> Result<TransferredMatching> {
    let n = profile.n();
    if vdg.n() != n || q.len() != profile.m() {
        return Err(Error::DimensionMismatch(
            "graph, profile and weights disagree".into(),
        ));
    }
    let graph = build_domination_graph(profile, vdg.candidate(), &WeightVector::uniform(n), q)?;
    w.validate(&graph)?;
    let n_r = Rational::from(n);
    let plu = profile.plurality();
    let mu = vdg.mu();

    let mut voter = vec![vec![Rational::zero(); n]; n];
    for (v, row) in voter.iter_mut().enumerate() {
        for (v2, cell) in row.iter_mut().enumerate() {
            if !vdg.has_voter_edge(v, v2) {
                continue;
            }
            let top = profile.top(v2);
            if q[top].is_zero() {
                return Err(Error::TransferUndefined {
                    voter: v2,
                    candidate: top,
                });
            }
            *cell = mu / (&q[top] * &n_r) * w.weight(v, top);
        }
    }
    let boost = (0..n)
        .map(|v| {
            (0..profile.m())
                .filter(|&c| w.weight(v, c).is_positive())
                .map(|c| {
                    let share = mu * Rational::from(plu[c]) / (&q[c] * &n_r);
                    (Rational::one() - share) * w.weight(v, c)
                })
                .sum()
        })
        .collect();
    Ok(TransferredMatching { voter, boost })
}

/// For every voter edge `(v,v′)` of `VDG(a)` and the optimum `o` of `metric`:
/// `d(v,a) ≤ d(v,o) + 2d(v′,o)` and `d(v,o) + d(v′,o) ≥ d(o,a)/2`.
pub fn assert_pairwise_bounds(
    vdg: &VoterDominationGraph,
    profile: &PreferenceProfile,
    metric: &MetricInstance,
) -> Result<CheckReport> {
    metric.require_aligned(profile)?;
    let a = vdg.candidate();
    let o = metric.optimal_candidate();
    let two = Rational::integer(2);
    let d_oa = metric.cc(o, a);
    let mut report = CheckReport::new();
    for (v, w) in vdg.voter_edges() {
        let (d_va, d_vo, d_wo) = (metric.vc(v, a), metric.vc(v, o), metric.vc(w, o));
        report.record("winner-to-optimum", *d_va <= d_vo + &two * d_wo, || {
            format!(
                "edge ({v},{w}): d(v,a)={d_va} > d(v,o)+2d(v′,o)={}",
                d_vo + &two * d_wo
            )
        });
        report.record("pair-distance", (d_vo + d_wo) * &two >= *d_oa, || {
            format!(
                "edge ({v},{w}): d(v,o)+d(v′,o)={} < d(o,a)/2={}",
                d_vo + d_wo,
                d_oa / &two
            )
        });
    }
    Ok(report)
}

/// `SC(o) ≥ (μ/(1+μ))·n·d(o,a)/2` for a member `a` of the
/// `(p^uni, q)`-veto core. Returns the report and the slack
/// `SC(o) − (μ/(1+μ))·n·d(o,a)/2`.
pub fn assert_opt_cost_bound(
    profile: &PreferenceProfile,
    a: usize,
    q: &WeightVector,
    metric: &MetricInstance,
) -> Result<(CheckReport, Rational)> {
    metric.require_aligned(profile)?;
    let vdg = build_vdg(profile, a, q)?;
    let mu = vdg.mu().clone();
    let o = metric.optimal_candidate();
    let opt = metric.social_cost(o)?;
    let bound = &mu / (Rational::one() + &mu) * Rational::from(profile.n()) * metric.cc(o, a)
        / Rational::integer(2);
    let slack = &opt - &bound;
    let mut report = CheckReport::new();
    report.record("optimal-cost", !slack.is_negative(), || {
        format!("SC(o)={opt} < {bound} for candidate {a}")
    });
    Ok((report, slack))
}
