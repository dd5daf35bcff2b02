// SPDX-License-Identifier: Apache-2.0

//! Boosted simultaneous veto: every candidate starts with its plurality
//! score, the predicted candidate receives an extra `2δn/(1−δ)`, and all
//! voters continuously eat the score of their least-favourite surviving
//! candidate at rate `(1+δ)/(1−δ)` until time 1.
//!
//! Between two deaths the process is linear, so it is simulated exactly one
//! round at a time.

use crate::error::{Error, Result};
use crate::matching::{build_domination_graph, veto_core, FractionalMatching};
use crate::metric::MetricInstance;
use crate::profile::PreferenceProfile;
use crate::rational::Rational;
use crate::report::CheckReport;
use crate::weights::WeightVector;

/// Rejects `δ ∉ [0, 1)`.
pub fn check_delta(delta: &Rational) -> Result<()> {
    if delta.is_negative() || *delta >= Rational::one() {
        return Err(Error::ParameterOutOfRange {
            name: "delta",
            value: delta.clone(),
            expected: "0 <= delta < 1",
        });
    }
    Ok(())
}

/// `2δn/(1−δ)`.
pub fn boost(n: usize, delta: &Rational) -> Rational {
    Rational::integer(2) * delta * Rational::from(n) / (Rational::one() - delta)
}

/// `(1+δ)/(1−δ)`.
pub fn eating_rate(delta: &Rational) -> Rational {
    (Rational::one() + delta) / (Rational::one() - delta)
}

/// `q̂`: plurality shares scaled by `(1−δ)/(1+δ)`, with the boost added to
/// the prediction's score before scaling.
pub fn boosted_q(
    profile: &PreferenceProfile,
    predicted: usize,
    delta: &Rational,
) -> Result<WeightVector> {
    check_delta(delta)?;
    profile.check_candidate(predicted)?;
    let n = profile.n();
    let scale = eating_rate(delta).recip() / Rational::from(n);
    let extra = boost(n, delta);
    let q = profile
        .plurality()
        .into_iter()
        .enumerate()
        .map(|(c, plu)| {
            let score = Rational::from(plu);
            if c == predicted {
                (score + &extra) * &scale
            } else {
                score * &scale
            }
        })
        .collect();
    WeightVector::new(q)
}

/// One stretch of the process during which nobody changes target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Round {
    pub start: Rational,
    pub end: Rational,
    /// Candidate each voter eats during the round.
    pub targets: Vec<usize>,
    /// Active candidates during the round.
    pub active: Vec<usize>,
    pub scores_at_end: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecutionTrace {
    pub delta: Rational,
    pub predicted: usize,
    pub boost: Rational,
    pub rate: Rational,
    pub initial_scores: Vec<Rational>,
    pub rounds: Vec<Round>,
    /// `f[v][c]`: total time voter `v` spent eating candidate `c`.
    pub f: Vec<Vec<Rational>>,
    /// Candidates still alive during the last round.
    pub final_active: Vec<usize>,
}

impl ExecutionTrace {
    pub fn n(&self) -> usize {
        self.f.len()
    }

    /// Checks the bookkeeping identities of the process: time partitions,
    /// per-candidate eaten totals, monotone round boundaries ending at 1,
    /// at most `m` rounds, and all scores exhausted.
    pub fn verify(&self, profile: &PreferenceProfile) -> CheckReport {
        let mut report = CheckReport::new();
        let m = profile.m();
        let plu = profile.plurality();
        let scale = self.rate.recip();
        for (v, row) in self.f.iter().enumerate() {
            let total: Rational = row.iter().sum();
            report.record("voter-time", total == Rational::one(), || {
                format!("voter {v} eats for {total}")
            });
        }
        for c in 0..m {
            let eaten: Rational = self.f.iter().map(|row| &row[c]).sum();
            let mut expected = Rational::from(plu[c]);
            if c == self.predicted {
                expected += &self.boost;
            }
            expected *= &scale;
            report.record("candidate-eaten", eaten == expected, || {
                format!("candidate {c} eaten {eaten}, expected {expected}")
            });
        }
        let mut t = Rational::zero();
        for (i, round) in self.rounds.iter().enumerate() {
            report.record(
                "round-times",
                round.start == t && round.end > round.start,
                || format!("round {i} spans [{}, {}] after {t}", round.start, round.end),
            );
            t = round.end.clone();
            report.record(
                "scores-nonnegative",
                round.scores_at_end.iter().all(|s| !s.is_negative()),
                || format!("round {i} ends with a negative score"),
            );
        }
        report.record("ends-at-one", t == Rational::one(), || {
            format!("process ends at {t}")
        });
        report.record("round-count", self.rounds.len() <= m, || {
            format!("{} rounds for {m} candidates", self.rounds.len())
        });
        if let Some(last) = self.rounds.last() {
            report.record(
                "scores-exhausted",
                last.scores_at_end.iter().all(Rational::is_zero),
                || "positive score left at time 1".to_string(),
            );
        }
        report
    }

    /// `f/n`, which certifies the winner for `(p^uni, q̂)`.
    pub fn certificate(&self) -> FractionalMatching {
        let n = Rational::from(self.n());
        FractionalMatching::new(
            self.f
                .iter()
                .map(|row| row.iter().map(|x| x / &n).collect())
                .collect(),
        )
    }
}

/// Runs the eating process and returns the winner: the prediction if it
/// survives to the end, otherwise the lowest-index survivor.
pub fn run_simveto(
    profile: &PreferenceProfile,
    predicted: usize,
    delta: &Rational,
) -> Result<(usize, ExecutionTrace)> {
    check_delta(delta)?;
    profile.check_candidate(predicted)?;
    let (n, m) = (profile.n(), profile.m());
    let boost = boost(n, delta);
    let rate = eating_rate(delta);

    let mut scores: Vec<Rational> = profile
        .plurality()
        .into_iter()
        .map(Rational::from)
        .collect();
    scores[predicted] += &boost;
    let initial_scores = scores.clone();
    let mut alive: Vec<bool> = scores.iter().map(Rational::is_positive).collect();
    let mut f = vec![vec![Rational::zero(); m]; n];
    let mut rounds = Vec::new();
    let mut t = Rational::zero();
    let one = Rational::one();

    while t < one {
        let targets: Vec<usize> = (0..n)
            .map(|v| {
                profile
                    .bottom_among(v, &alive)
                    .expect("total score is positive before time 1")
            })
            .collect();
        let mut eaters = vec![0usize; m];
        for &c in &targets {
            eaters[c] += 1;
        }
        // Time until the first eaten candidate runs out.
        let step = (0..m)
            .filter(|&c| eaters[c] > 0)
            .map(|c| &scores[c] / (Rational::from(eaters[c]) * &rate))
            .min()
            .expect("some candidate is eaten");
        for (v, &c) in targets.iter().enumerate() {
            f[v][c] += &step;
        }
        for c in 0..m {
            if eaters[c] > 0 {
                scores[c] -= Rational::from(eaters[c]) * &rate * &step;
            }
        }
        let start = t.clone();
        t += &step;
        let active = (0..m).filter(|&c| alive[c]).collect();
        for c in 0..m {
            if alive[c] && scores[c].is_zero() {
                alive[c] = false;
            }
        }
        rounds.push(Round {
            start,
            end: t.clone(),
            targets,
            active,
            scores_at_end: scores.clone(),
        });
    }
    assert!(t == one, "eating process overshot time 1");

    let final_active: Vec<usize> = rounds.last().map(|r| r.active.clone()).unwrap_or_default();
    let winner = if final_active.contains(&predicted) {
        predicted
    } else {
        final_active[0]
    };
    let trace = ExecutionTrace {
        delta: delta.clone(),
        predicted,
        boost,
        rate,
        initial_scores,
        rounds,
        f,
        final_active,
    };
    Ok((winner, trace))
}

/// Any `(p^uni, q̂)`-veto core member: the prediction if it qualifies,
/// otherwise the lowest-index member.
pub fn select_from_core(
    profile: &PreferenceProfile,
    predicted: usize,
    delta: &Rational,
) -> Result<usize> {
    let q = boosted_q(profile, predicted, delta)?;
    let core = veto_core(profile, &WeightVector::uniform(profile.n()), &q)?;
    Ok(if core.contains(&predicted) {
        predicted
    } else {
        *core.first().expect("the veto core is never empty")
    })
}

/// Voter-to-voter redistribution of eaten score: `v` sends
/// `f(v,top(v′))·rate/plu(top(v′))` to every `v′`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VetoMap {
    // weights[v][v′]
    weights: Vec<Vec<Rational>>,
}

impl VetoMap {
    pub fn weight(&self, v: usize, w: usize) -> &Rational {
        &self.weights[v][w]
    }

    pub fn has_edge(&self, v: usize, w: usize) -> bool {
        self.weights[v][w].is_positive()
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.weights.iter().enumerate().flat_map(|(v, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, x)| x.is_positive())
                .map(move |(w, x)| (v, w, x))
        })
    }

    pub fn out_weight(&self, v: usize) -> Rational {
        self.weights[v].iter().sum()
    }

    pub fn in_weight(&self, w: usize) -> Rational {
        self.weights.iter().map(|row| &row[w]).sum()
    }
}

pub fn build_veto_map(trace: &ExecutionTrace, profile: &PreferenceProfile) -> Result<VetoMap> {
    let n = profile.n();
    if trace.n() != n {
        return Err(Error::DimensionMismatch(format!(
            "trace has {} voters, profile {n}",
            trace.n()
        )));
    }
    let plu = profile.plurality();
    let weights = (0..n)
        .map(|v| {
            (0..n)
                .map(|w| {
                    let top = profile.top(w);
                    let eaten = &trace.f[v][top];
                    if eaten.is_positive() {
                        eaten * &trace.rate / Rational::from(plu[top])
                    } else {
                        Rational::zero()
                    }
                })
                .collect()
        })
        .collect();
    Ok(VetoMap { weights })
}

/// Runs the rule and evaluates, exactly, the inequalities its analysis
/// rests on:
/// - every candidate a voter eats is at least as far from it as the winner;
/// - the winner is alive in every round;
/// - `d(v,o) + d(v′,o) ≥ d(o,winner)/2` along every veto-map edge;
/// - `SC(o) ≥ ((1−δ)/2)·n·d(o,p̂)/2` when the prediction wins;
/// - veto-map in-weights are 1 off the prediction, out-weights at most the rate.
pub fn assert_companion_lemmas(
    profile: &PreferenceProfile,
    predicted: usize,
    delta: &Rational,
    metric: &MetricInstance,
) -> Result<CheckReport> {
    metric.require_aligned(profile)?;
    let (winner, trace) = run_simveto(profile, predicted, delta)?;
    let (n, m) = (profile.n(), profile.m());
    let o = metric.optimal_candidate();
    let two = Rational::integer(2);
    let mut report = CheckReport::new();

    for v in 0..n {
        for c in 0..m {
            if trace.f[v][c].is_positive() {
                let (d_c, d_w) = (metric.vc(v, c), metric.vc(v, winner));
                report.record("eaten-not-closer", d_c >= d_w, || {
                    format!("voter {v} ate {c} at {d_c} but winner {winner} is at {d_w}")
                });
            }
        }
    }
    for (i, round) in trace.rounds.iter().enumerate() {
        report.record("winner-active", round.active.contains(&winner), || {
            format!("winner {winner} inactive in round {i}")
        });
    }

    let map = build_veto_map(&trace, profile)?;
    let d_ow = metric.cc(o, winner);
    for (v, w, _) in map.edges() {
        let lhs = metric.vc(v, o) + metric.vc(w, o);
        report.record("veto-edge-distance", &lhs * &two >= *d_ow, || {
            format!("edge ({v},{w}): d(v,o)+d(v′,o)={lhs} < d(o,winner)/2")
        });
    }
    for w in 0..n {
        if profile.top(w) != predicted {
            let inflow = map.in_weight(w);
            report.record("veto-in-weight", inflow == Rational::one(), || {
                format!("voter {w} receives {inflow}")
            });
        }
    }
    for v in 0..n {
        let out = map.out_weight(v);
        report.record("veto-out-weight", out <= trace.rate, || {
            format!("voter {v} sends {out} > {}", trace.rate)
        });
    }

    if winner == predicted {
        let opt = metric.social_cost(o)?;
        let bound =
            (Rational::one() - delta) / &two * Rational::from(n) * metric.cc(o, predicted) / &two;
        report.record("optimal-cost-prediction", opt >= bound, || {
            format!("SC(o)={opt} < {bound}")
        });
    }
    Ok(report)
}

/// When the rule overrides the prediction with `a`, rerunning it with `a`
/// as the prediction must return `a` again.
pub fn assert_reduction_property(
    profile: &PreferenceProfile,
    predicted: usize,
    delta: &Rational,
) -> Result<CheckReport> {
    let (winner, _) = run_simveto(profile, predicted, delta)?;
    let mut report = CheckReport::new();
    if winner != predicted {
        let (again, _) = run_simveto(profile, winner, delta)?;
        report.record("rerun-with-winner", again == winner, || {
            format!("prediction {predicted} gave {winner}, rerun with {winner} gave {again}")
        });
    }
    Ok(report)
}

/// Certificate check: `f/n` is a fractional perfect matching of the
/// winner's `(p^uni, q̂)`-domination graph.
pub fn certifies_winner(
    profile: &PreferenceProfile,
    winner: usize,
    trace: &ExecutionTrace,
) -> Result<()> {
    let q = boosted_q(profile, trace.predicted, &trace.delta)?;
    let graph = build_domination_graph(profile, winner, &WeightVector::uniform(profile.n()), &q)?;
    trace.certificate().validate(&graph)
}
