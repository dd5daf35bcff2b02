// SPDX-License-Identifier: Apache-2.0

//! Parameter sweeps comparing observed worst-case distortions of the boosted
//! veto winner with the closed-form guarantees.
//!
//! Every sweep first collects one observation per (sample, parameter) in
//! parallel, then folds them into rows in grid order, so the output does not
//! depend on the thread count.

use std::collections::hash_map::Entry;
use std::collections::HashMap;

use anyhow::Result;
use rayon::prelude::*;
use vetolab::bounds::{
    consistency_bound, decisive_bound, error_bound, error_crossover, robustness_bound,
};
use vetolab::distortion::{
    consistency_distortion, restricted_distortion, worst_case_distortion, MetricFilter,
};
use vetolab::simveto::run_simveto;
use vetolab::{Error, Extended, PreferenceProfile, Rational};

use crate::numeric::to_f64_ext;
use crate::sampling::SampleSpec;
use crate::svg::{line_chart, Series};
use crate::table::{Row, Table};

/// Decisive bound once the prediction-error term is capped:
/// `(2+α−αδ)/(1+δ) + 8δ/((1+δ)(1−δ))`.
pub fn decisive_robustness(delta: &Rational, alpha: &Rational) -> Result<Rational> {
    Ok(decisive_bound(delta, alpha, &error_crossover(delta)?)?)
}

/// `restricted_distortion`, with "no metric passes the filter" as `None`.
fn restricted(
    profile: &PreferenceProfile,
    candidate: usize,
    filter: &MetricFilter,
) -> Result<Option<Extended>> {
    match restricted_distortion(profile, candidate, filter) {
        Ok(report) => Ok(Some(report.value)),
        Err(Error::NoFeasibleMetric) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn max_of<'a>(values: impl Iterator<Item = &'a Extended>) -> Extended {
    values.fold(Extended::Finite(Rational::zero()), |acc, v| {
        acc.max(v.clone())
    })
}

fn within(observed: &Extended, bound: &Rational) -> bool {
    *observed <= *bound
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaObservation {
    pub sample: usize,
    pub delta: Rational,
    pub predicted: usize,
    pub winner: usize,
    /// Worst case over all aligned metrics.
    pub worst: Extended,
    /// Worst case over aligned metrics in which the prediction is optimal.
    pub consistency: Extended,
}

pub fn delta_observations(spec: &SampleSpec, deltas: &[Rational]) -> Result<Vec<DeltaObservation>> {
    let per_sample: Vec<Result<Vec<DeltaObservation>>> = (0..spec.samples)
        .into_par_iter()
        .map(|i| {
            let s = spec.profile(i);
            let mut memo: HashMap<usize, (Extended, Extended)> = HashMap::new();
            let mut out = Vec::with_capacity(deltas.len());
            for delta in deltas {
                let (winner, _) = run_simveto(&s.profile, s.predicted, delta)?;
                if let Entry::Vacant(e) = memo.entry(winner) {
                    let worst = worst_case_distortion(&s.profile, winner)?.value;
                    let cons = consistency_distortion(&s.profile, winner, s.predicted)?.value;
                    e.insert((worst, cons));
                }
                let (worst, consistency) = memo[&winner].clone();
                out.push(DeltaObservation {
                    sample: i,
                    delta: delta.clone(),
                    predicted: s.predicted,
                    winner,
                    worst,
                    consistency,
                });
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in per_sample {
        all.extend(r?);
    }
    Ok(all)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaRow {
    pub delta: Rational,
    pub consistency_bound: Rational,
    pub robustness_bound: Rational,
    pub observed_consistency: Extended,
    pub observed_worst: Extended,
    pub samples: usize,
}

impl DeltaRow {
    pub fn within_bounds(&self) -> bool {
        within(&self.observed_consistency, &self.consistency_bound)
            && within(&self.observed_worst, &self.robustness_bound)
    }
}

pub fn sweep_delta(spec: &SampleSpec, deltas: &[Rational]) -> Result<Vec<DeltaRow>> {
    let obs = delta_observations(spec, deltas)?;
    deltas
        .iter()
        .map(|delta| {
            let rows: Vec<&DeltaObservation> = obs.iter().filter(|o| &o.delta == delta).collect();
            Ok(DeltaRow {
                delta: delta.clone(),
                consistency_bound: consistency_bound(delta)?,
                robustness_bound: robustness_bound(delta)?,
                observed_consistency: max_of(rows.iter().map(|o| &o.consistency)),
                observed_worst: max_of(rows.iter().map(|o| &o.worst)),
                samples: rows.len(),
            })
        })
        .collect()
}

pub fn delta_table(rows: &[DeltaRow]) -> Table {
    let mut t = Table::new();
    for r in rows {
        t.push(
            Row::new()
                .rational("delta", "1", &r.delta)
                .rational("consistency_bound", "ratio", &r.consistency_bound)
                .rational("robustness_bound", "ratio", &r.robustness_bound)
                .extended("observed_consistency", "ratio", &r.observed_consistency)
                .extended("observed_worst", "ratio", &r.observed_worst)
                .text("samples", "count", r.samples)
                .text("within_bounds", "bool", r.within_bounds()),
        );
    }
    t
}

pub fn delta_chart(rows: &[DeltaRow]) -> String {
    let pts = |f: &dyn Fn(&DeltaRow) -> Option<f64>| -> Vec<(f64, f64)> {
        rows.iter()
            .filter_map(|r| f(r).map(|y| (r.delta.to_f64(), y)))
            .collect()
    };
    line_chart(
        "Consistency and robustness",
        "delta",
        "distortion",
        &[
            Series::new(
                "consistency bound",
                pts(&|r| Some(r.consistency_bound.to_f64())),
            ),
            Series::new(
                "robustness bound",
                pts(&|r| Some(r.robustness_bound.to_f64())),
            ),
            Series::new(
                "observed consistency",
                pts(&|r| to_f64_ext(&r.observed_consistency)),
            )
            .dashed(),
            Series::new(
                "observed worst case",
                pts(&|r| to_f64_ext(&r.observed_worst)),
            )
            .dashed(),
        ],
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaObservation {
    pub sample: usize,
    pub delta: Rational,
    pub eta: Rational,
    pub predicted: usize,
    pub winner: usize,
    /// Worst case over aligned metrics with prediction error at most `eta`;
    /// `None` when no such metric has positive optimal cost.
    pub value: Option<Extended>,
}

pub fn eta_observations(
    spec: &SampleSpec,
    deltas: &[Rational],
    etas: &[Rational],
) -> Result<Vec<EtaObservation>> {
    let per_sample: Vec<Result<Vec<EtaObservation>>> = (0..spec.samples)
        .into_par_iter()
        .map(|i| {
            let s = spec.profile(i);
            let mut memo: HashMap<(usize, Rational), Option<Extended>> = HashMap::new();
            let mut out = Vec::new();
            for delta in deltas {
                let (winner, _) = run_simveto(&s.profile, s.predicted, delta)?;
                for eta in etas {
                    let key = (winner, eta.clone());
                    if !memo.contains_key(&key) {
                        let filter = MetricFilter {
                            prediction_error: Some((s.predicted, eta.clone())),
                            decisiveness: None,
                        };
                        memo.insert(key.clone(), restricted(&s.profile, winner, &filter)?);
                    }
                    out.push(EtaObservation {
                        sample: i,
                        delta: delta.clone(),
                        eta: eta.clone(),
                        predicted: s.predicted,
                        winner,
                        value: memo[&key].clone(),
                    });
                }
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in per_sample {
        all.extend(r?);
    }
    Ok(all)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EtaRow {
    pub delta: Rational,
    pub eta: Rational,
    pub error_bound: Rational,
    pub consistency_bound: Rational,
    pub robustness_bound: Rational,
    pub observed: Extended,
    pub samples: usize,
    /// Samples for which no metric satisfies the error restriction.
    pub vacuous: usize,
}

impl EtaRow {
    pub fn within_bounds(&self) -> bool {
        within(&self.observed, &self.error_bound)
    }
}

pub fn sweep_eta(spec: &SampleSpec, deltas: &[Rational], etas: &[Rational]) -> Result<Vec<EtaRow>> {
    let obs = eta_observations(spec, deltas, etas)?;
    let mut rows = Vec::new();
    for delta in deltas {
        for eta in etas {
            let cell: Vec<&EtaObservation> = obs
                .iter()
                .filter(|o| &o.delta == delta && &o.eta == eta)
                .collect();
            rows.push(EtaRow {
                delta: delta.clone(),
                eta: eta.clone(),
                error_bound: error_bound(delta, eta)?,
                consistency_bound: consistency_bound(delta)?,
                robustness_bound: robustness_bound(delta)?,
                observed: max_of(cell.iter().filter_map(|o| o.value.as_ref())),
                samples: cell.len(),
                vacuous: cell.iter().filter(|o| o.value.is_none()).count(),
            });
        }
    }
    Ok(rows)
}

pub fn eta_table(rows: &[EtaRow]) -> Table {
    let mut t = Table::new();
    for r in rows {
        t.push(
            Row::new()
                .rational("delta", "1", &r.delta)
                .rational("eta", "1", &r.eta)
                .rational("error_bound", "ratio", &r.error_bound)
                .rational("consistency_bound", "ratio", &r.consistency_bound)
                .rational("robustness_bound", "ratio", &r.robustness_bound)
                .extended("observed", "ratio", &r.observed)
                .text("samples", "count", r.samples)
                .text("vacuous", "count", r.vacuous)
                .text("within_bounds", "bool", r.within_bounds()),
        );
    }
    t
}

pub fn eta_chart(rows: &[EtaRow]) -> String {
    let mut series = Vec::new();
    let mut deltas: Vec<&Rational> = Vec::new();
    for r in rows {
        if !deltas.contains(&&r.delta) {
            deltas.push(&r.delta);
        }
    }
    for d in deltas {
        let of = rows.iter().filter(|r| &r.delta == d);
        series.push(Series::new(
            format!("bound, delta={d}"),
            of.clone()
                .map(|r| (r.eta.to_f64(), r.error_bound.to_f64()))
                .collect(),
        ));
        series.push(
            Series::new(
                format!("observed, delta={d}"),
                of.filter_map(|r| to_f64_ext(&r.observed).map(|y| (r.eta.to_f64(), y)))
                    .collect(),
            )
            .dashed(),
        );
    }
    line_chart(
        "Distortion against prediction error",
        "eta",
        "distortion",
        &series,
    )
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaObservation {
    pub sample: usize,
    pub alpha: Rational,
    pub delta: Rational,
    pub predicted: usize,
    pub winner: usize,
    /// Worst case over aligned `alpha`-decisive metrics.
    pub worst: Option<Extended>,
    /// Same, restricted to metrics in which the prediction is optimal.
    pub consistency: Option<Extended>,
}

/// Profiles come from planar `alpha`-decisive instances; the adversary is
/// restricted to `alpha`-decisive metrics.
pub fn alpha_observations(
    spec: &SampleSpec,
    alphas: &[Rational],
    deltas: &[Rational],
) -> Result<Vec<AlphaObservation>> {
    let jobs: Vec<(usize, &Rational)> = alphas
        .iter()
        .flat_map(|a| (0..spec.samples).map(move |i| (i, a)))
        .collect();
    let per_job: Vec<Result<Vec<AlphaObservation>>> = jobs
        .into_par_iter()
        .map(|(i, alpha)| {
            let s = spec.decisive(i, alpha)?;
            let profile = &s.instance.profile;
            let mut memo: HashMap<usize, (Option<Extended>, Option<Extended>)> = HashMap::new();
            let mut out = Vec::with_capacity(deltas.len());
            for delta in deltas {
                let (winner, _) = run_simveto(profile, s.predicted, delta)?;
                if let Entry::Vacant(e) = memo.entry(winner) {
                    let worst = restricted(
                        profile,
                        winner,
                        &MetricFilter {
                            prediction_error: None,
                            decisiveness: Some(alpha.clone()),
                        },
                    )?;
                    let cons = restricted(
                        profile,
                        winner,
                        &MetricFilter {
                            prediction_error: Some((s.predicted, Rational::zero())),
                            decisiveness: Some(alpha.clone()),
                        },
                    )?;
                    e.insert((worst, cons));
                }
                let (worst, consistency) = memo[&winner].clone();
                out.push(AlphaObservation {
                    sample: i,
                    alpha: alpha.clone(),
                    delta: delta.clone(),
                    predicted: s.predicted,
                    winner,
                    worst,
                    consistency,
                });
            }
            Ok(out)
        })
        .collect();
    let mut all = Vec::new();
    for r in per_job {
        all.extend(r?);
    }
    Ok(all)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaRow {
    pub alpha: Rational,
    pub delta: Rational,
    pub consistency_bound: Rational,
    pub robustness_bound: Rational,
    pub observed_consistency: Extended,
    pub observed_worst: Extended,
    pub samples: usize,
}

impl AlphaRow {
    pub fn within_bounds(&self) -> bool {
        within(&self.observed_consistency, &self.consistency_bound)
            && within(&self.observed_worst, &self.robustness_bound)
    }
}

pub fn sweep_alpha(
    spec: &SampleSpec,
    alphas: &[Rational],
    deltas: &[Rational],
) -> Result<Vec<AlphaRow>> {
    let obs = alpha_observations(spec, alphas, deltas)?;
    let mut rows = Vec::new();
    for alpha in alphas {
        for delta in deltas {
            let cell: Vec<&AlphaObservation> = obs
                .iter()
                .filter(|o| &o.alpha == alpha && &o.delta == delta)
                .collect();
            rows.push(AlphaRow {
                alpha: alpha.clone(),
                delta: delta.clone(),
                consistency_bound: decisive_bound(delta, alpha, &Rational::zero())?,
                robustness_bound: decisive_robustness(delta, alpha)?,
                observed_consistency: max_of(cell.iter().filter_map(|o| o.consistency.as_ref())),
                observed_worst: max_of(cell.iter().filter_map(|o| o.worst.as_ref())),
                samples: cell.len(),
            });
        }
    }
    Ok(rows)
}

pub fn alpha_table(rows: &[AlphaRow]) -> Table {
    let mut t = Table::new();
    for r in rows {
        t.push(
            Row::new()
                .rational("alpha", "1", &r.alpha)
                .rational("delta", "1", &r.delta)
                .rational("consistency_bound", "ratio", &r.consistency_bound)
                .rational("robustness_bound", "ratio", &r.robustness_bound)
                .extended("observed_consistency", "ratio", &r.observed_consistency)
                .extended("observed_worst", "ratio", &r.observed_worst)
                .text("samples", "count", r.samples)
                .text("within_bounds", "bool", r.within_bounds()),
        );
    }
    t
}

pub fn alpha_chart(rows: &[AlphaRow]) -> String {
    let mut series = Vec::new();
    let mut alphas: Vec<&Rational> = Vec::new();
    for r in rows {
        if !alphas.contains(&&r.alpha) {
            alphas.push(&r.alpha);
        }
    }
    for a in alphas {
        let of: Vec<&AlphaRow> = rows.iter().filter(|r| &r.alpha == a).collect();
        let xs = |f: &dyn Fn(&AlphaRow) -> Option<f64>| -> Vec<(f64, f64)> {
            of.iter()
                .filter_map(|r| f(r).map(|y| (r.delta.to_f64(), y)))
                .collect()
        };
        series.push(Series::new(
            format!("consistency, alpha={a}"),
            xs(&|r| Some(r.consistency_bound.to_f64())),
        ));
        series.push(Series::new(
            format!("robustness, alpha={a}"),
            xs(&|r| Some(r.robustness_bound.to_f64())),
        ));
        series.push(
            Series::new(
                format!("observed worst, alpha={a}"),
                xs(&|r| to_f64_ext(&r.observed_worst)),
            )
            .dashed(),
        );
    }
    line_chart("Decisive instances", "delta", "distortion", &series)
}
