// SPDX-License-Identifier: Apache-2.0

//! Named invariant suites run by `vetolab verify`. Each evaluates exact
//! inequalities over seeded instance streams and reports every violation.

use anyhow::{bail, Result};
use rayon::prelude::*;
use serde::Serialize;
use vetolab::bounds::{
    consistency_bound, decisive_bound, error_bound, error_crossover, pareto_consistency,
    robustness_bound,
};
use vetolab::distortion::{
    distortion_on_metric, restricted_distortion, worst_case_distortion, MetricFilter,
};
use vetolab::generators::{
    impossibility_groups, impossibility_pair, impossibility_ratio, random_weights,
    tight_distortion, tight_instance,
};
use vetolab::matching::{
    build_domination_graph, find_fractional_perfect_matching, in_veto_core, lambda, mu,
    reduce_to_uniform, veto_core,
};
use vetolab::report::CheckReport;
use vetolab::simveto::{
    assert_companion_lemmas, assert_reduction_property, boosted_q, certifies_winner, run_simveto,
};
use vetolab::vdg::{assert_opt_cost_bound, assert_pairwise_bounds, build_vdg, transfer_matching};
use vetolab::{ratio, Error, Rational, WeightVector};

use crate::numeric::unit_grid;
use crate::sampling::SampleSpec;
use crate::sweeps::{
    alpha_observations, decisive_robustness, delta_observations, eta_observations,
};

/// Confidence values every sampled suite runs at.
pub fn delta_grid() -> Vec<Rational> {
    vec![Rational::zero(), ratio(1, 9), ratio(1, 3), ratio(3, 5)]
}

/// Prediction errors used by the restricted-LP suites.
pub fn eta_grid() -> Vec<Rational> {
    vec![
        Rational::zero(),
        ratio(1, 2),
        Rational::one(),
        Rational::integer(2),
        Rational::integer(4),
    ]
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOutcome {
    /// Instances (or instance/parameter combinations) examined.
    pub instances: usize,
    pub report: CheckReport,
}

impl SuiteOutcome {
    fn merge_all(parts: Vec<Result<SuiteOutcome>>) -> Result<SuiteOutcome> {
        let mut total = SuiteOutcome::default();
        for p in parts {
            let p = p?;
            total.instances += p.instances;
            total.report.merge(p.report);
        }
        Ok(total)
    }
}

type SuiteFn = fn(&SampleSpec) -> Result<SuiteOutcome>;

pub struct Suite {
    pub name: &'static str,
    pub description: &'static str,
    pub default_samples: usize,
    pub run: SuiteFn,
}

pub const SUITES: &[Suite] = &[
    Suite {
        name: "matching",
        description: "veto cores are non-empty and every certificate is a fractional perfect matching",
        default_samples: 100,
        run: matching,
    },
    Suite {
        name: "reduction",
        description: "reducing voter weights to uniform keeps core membership and scales mu by at most lambda",
        default_samples: 100,
        run: reduction,
    },
    Suite {
        name: "vdg",
        description: "transferred voter-domination matchings and the optimal-cost bound",
        default_samples: 60,
        run: vdg,
    },
    Suite {
        name: "simveto",
        description: "trace bookkeeping identities and winner certificates",
        default_samples: 100,
        run: simveto,
    },
    Suite {
        name: "companion-lemmas",
        description: "the inequalities behind the rule's analysis on aligned instances",
        default_samples: 100,
        run: companion_lemmas,
    },
    Suite {
        name: "tight-instances",
        description: "the mu/lambda family attains its closed-form distortion exactly",
        default_samples: 0,
        run: tight_instances,
    },
    Suite {
        name: "impossibility",
        description: "the instance pair defeating every deterministic rule",
        default_samples: 0,
        run: impossibility,
    },
    Suite {
        name: "bounds",
        description: "algebraic identities between the closed-form guarantees",
        default_samples: 0,
        run: bounds,
    },
    Suite {
        name: "error",
        description: "the winner's distortion is within the prediction-error bound on aligned instances",
        default_samples: 100,
        run: error,
    },
    Suite {
        name: "decisive",
        description: "the winner's distortion is within the decisive bound on peer-selection and decisive instances",
        default_samples: 60,
        run: decisive,
    },
    Suite {
        name: "optimal-recovery",
        description: "worst-case distortion of plurality-weighted veto-core members is at most 3 (LP)",
        default_samples: 30,
        run: optimal_recovery,
    },
    Suite {
        name: "consistency-robustness",
        description: "worst-case and consistency distortion of the winner against the delta bounds (LP)",
        default_samples: 15,
        run: consistency_robustness,
    },
    Suite {
        name: "error-lp",
        description: "worst case over metrics with bounded prediction error against the error bound (LP)",
        default_samples: 6,
        run: error_lp,
    },
    Suite {
        name: "decisive-lp",
        description: "worst case over 0-decisive metrics against the decisive bound (LP)",
        default_samples: 6,
        run: decisive_lp,
    },
];

pub fn find(name: &str) -> Option<&'static Suite> {
    SUITES.iter().find(|s| s.name == name)
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ViolationSummary {
    pub check: String,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct SuiteSummary {
    pub suite: String,
    pub seed: u64,
    pub samples: usize,
    pub instances: usize,
    pub checks: usize,
    pub passed: bool,
    pub violations: Vec<ViolationSummary>,
}

pub fn run_named(name: &str, seed: u64, samples: Option<usize>) -> Result<SuiteSummary> {
    let Some(suite) = find(name) else {
        let names: Vec<&str> = SUITES.iter().map(|s| s.name).collect();
        bail!(
            "unknown suite `{name}`; available: all, {}",
            names.join(", ")
        );
    };
    let samples = samples.unwrap_or(suite.default_samples).max(1);
    let spec = SampleSpec::new(samples, seed, 6, 5)?;
    let out = (suite.run)(&spec)?;
    Ok(SuiteSummary {
        suite: suite.name.to_string(),
        seed,
        samples,
        instances: out.instances,
        checks: out.report.checks,
        passed: out.report.passed(),
        violations: out
            .report
            .violations
            .into_iter()
            .map(|v| ViolationSummary {
                check: v.check.to_string(),
                detail: v.detail,
            })
            .collect(),
    })
}

fn per_sample(
    spec: &SampleSpec,
    f: impl Fn(usize) -> Result<SuiteOutcome> + Sync + Send,
) -> Result<SuiteOutcome> {
    SuiteOutcome::merge_all((0..spec.samples).into_par_iter().map(f).collect())
}

pub fn matching(spec: &SampleSpec) -> Result<SuiteOutcome> {
    per_sample(spec, |i| {
        let (profile, p, q) = spec.weighted(i);
        let mut r = CheckReport::new();
        let core = veto_core(&profile, &p, &q)?;
        r.record("core-nonempty", !core.is_empty(), || {
            format!("sample {i}: empty core")
        });
        for a in 0..profile.m() {
            let g = build_domination_graph(&profile, a, &p, &q)?;
            let w = find_fractional_perfect_matching(&g);
            r.record("core-agrees", w.is_some() == core.contains(&a), || {
                format!("sample {i}: candidate {a} matching/core disagree")
            });
            if let Some(w) = w {
                let v = w.validate(&g);
                r.record("certificate-valid", v.is_ok(), || {
                    format!("sample {i}, candidate {a}: {v:?}")
                });
            }
        }
        let mu_q = mu(&profile, &q)?;
        r.record("mu-at-most-one", mu_q <= Rational::one(), || {
            format!("sample {i}: mu = {mu_q}")
        });
        // Moving half of every other candidate's weight onto a member keeps it in.
        let half = ratio(1, 2);
        for &a in &core {
            let shifted: Vec<Rational> = (0..profile.m())
                .map(|c| {
                    if c == a {
                        (&q[c] + Rational::one()) * &half
                    } else {
                        &q[c] * &half
                    }
                })
                .collect();
            let held = in_veto_core(&profile, a, &p, &WeightVector::new(shifted)?)?;
            r.record("shift-keeps-member", held, || {
                format!("sample {i}: {a} left the core")
            });
        }
        let uni = WeightVector::uniform(profile.n());
        let plu_core = veto_core(&profile, &uni, &WeightVector::plurality(&profile))?;
        r.record("plurality-core-nonempty", !plu_core.is_empty(), || {
            format!("sample {i}")
        });
        Ok(SuiteOutcome {
            instances: 1,
            report: r,
        })
    })
}

pub fn reduction(spec: &SampleSpec) -> Result<SuiteOutcome> {
    per_sample(spec, |i| {
        let (profile, p, q) = spec.weighted(i);
        let n = profile.n();
        let mut r = CheckReport::new();
        let (mu_q, lam) = (mu(&profile, &q)?, lambda(&p));
        let mut tuples = 0;
        for a in veto_core(&profile, &p, &q)? {
            tuples += 1;
            let g = build_domination_graph(&profile, a, &p, &q)?;
            let w = find_fractional_perfect_matching(&g).expect("core member has a certificate");
            let (q2, w2) = reduce_to_uniform(&profile, a, &p, &q, &w)?;
            let g2 = build_domination_graph(&profile, a, &WeightVector::uniform(n), &q2)?;
            let v = w2.validate(&g2);
            r.record("reduced-certificate", v.is_ok(), || {
                format!("sample {i}, candidate {a}: {v:?}")
            });
            let mu2 = mu(&profile, &q2)?;
            let floor = &mu_q / &lam;
            r.record("reduced-mu", mu2 >= floor, || {
                format!("sample {i}, candidate {a}: mu' = {mu2} < mu/lambda = {floor}")
            });
        }
        Ok(SuiteOutcome {
            instances: tuples,
            report: r,
        })
    })
}

pub fn vdg(spec: &SampleSpec) -> Result<SuiteOutcome> {
    per_sample(spec, |i| {
        let s = spec.aligned(i);
        let (profile, metric) = (&s.instance.profile, &s.instance.metric);
        let n = profile.n();
        let q = random_weights(profile.m(), spec.seed.wrapping_add(i as u64));
        let mut r = CheckReport::new();
        for a in veto_core(profile, &WeightVector::uniform(n), &q)? {
            let g = build_vdg(profile, a, &q)?;
            let dg = build_domination_graph(profile, a, &WeightVector::uniform(n), &q)?;
            let w = find_fractional_perfect_matching(&dg).expect("core member has a certificate");
            let t = transfer_matching(&g, profile, &q, &w)?;
            let v = t.validate(&g);
            r.record("transfer-marginals", v.is_ok(), || {
                format!("sample {i}, candidate {a}: {v:?}")
            });
            r.record("useful-weight", t.useful_total() == *g.mu(), || {
                format!(
                    "sample {i}, candidate {a}: useful {} != mu {}",
                    t.useful_total(),
                    g.mu()
                )
            });
            r.merge(assert_pairwise_bounds(&g, profile, metric)?);
            r.merge(assert_opt_cost_bound(profile, a, &q, metric)?.0);
        }
        Ok(SuiteOutcome {
            instances: 1,
            report: r,
        })
    })
}

pub fn simveto(spec: &SampleSpec) -> Result<SuiteOutcome> {
    let deltas = delta_grid();
    per_sample(spec, |i| {
        let s = spec.profile(i);
        let n = s.profile.n();
        let mut r = CheckReport::new();
        for delta in &deltas {
            let (winner, trace) = run_simveto(&s.profile, s.predicted, delta)?;
            r.merge(trace.verify(&s.profile));
            let cert = certifies_winner(&s.profile, winner, &trace);
            r.record("certificate", cert.is_ok(), || {
                format!("sample {i}, delta {delta}: {cert:?}")
            });
            let core = veto_core(
                &s.profile,
                &WeightVector::uniform(n),
                &boosted_q(&s.profile, s.predicted, delta)?,
            )?;
            r.record("winner-in-core", core.contains(&winner), || {
                format!("sample {i}, delta {delta}: winner {winner} not in {core:?}")
            });
        }
        Ok(SuiteOutcome {
            instances: deltas.len(),
            report: r,
        })
    })
}

pub fn companion_lemmas(spec: &SampleSpec) -> Result<SuiteOutcome> {
    let deltas = delta_grid();
    per_sample(spec, |i| {
        let s = spec.aligned(i);
        let (profile, metric) = (&s.instance.profile, &s.instance.metric);
        let mut r = CheckReport::new();
        for delta in &deltas {
            r.merge(assert_companion_lemmas(
                profile,
                s.predicted,
                delta,
                metric,
            )?);
            r.merge(assert_reduction_property(profile, s.predicted, delta)?);
            let (winner, trace) = run_simveto(profile, s.predicted, delta)?;
            r.merge(trace.verify(profile));
            let q_hat = boosted_q(profile, s.predicted, delta)?;
            let g = build_vdg(profile, winner, &q_hat)?;
            let t = transfer_matching(&g, profile, &q_hat, &trace.certificate())?;
            let v = t.validate(&g);
            r.record("transfer-certificate", v.is_ok(), || {
                format!("sample {i}, delta {delta}: {v:?}")
            });
            r.record("useful-weight", t.useful_total() == *g.mu(), || {
                format!(
                    "sample {i}, delta {delta}: useful {} != mu {}",
                    t.useful_total(),
                    g.mu()
                )
            });
            r.merge(assert_pairwise_bounds(&g, profile, metric)?);
            r.merge(assert_opt_cost_bound(profile, winner, &q_hat, metric)?.0);
        }
        Ok(SuiteOutcome {
            instances: deltas.len(),
            report: r,
        })
    })
}

/// Parameter grid of the tight family, with the smallest admissible `n`.
pub fn tight_grid() -> Vec<(Rational, Rational, usize, Rational)> {
    let mut out = Vec::new();
    for mu in [ratio(1, 4), ratio(1, 2), Rational::one()] {
        for lam in [1, 2, 4].map(Rational::integer) {
            let n = (1..=64)
                .find(|&n| tight_instance(&mu, &lam, n, &ratio(1, 2)).is_ok())
                .expect("some n up to 64 fits every grid point");
            for eps in [ratio(1, 10), ratio(1, 100)] {
                out.push((mu.clone(), lam.clone(), n, eps));
            }
        }
    }
    out
}

pub fn tight_instances(_: &SampleSpec) -> Result<SuiteOutcome> {
    let grid = tight_grid();
    let mut r = CheckReport::new();
    for (mu_t, lam, n, eps) in &grid {
        let inst = tight_instance(mu_t, lam, *n, eps)?;
        let tag = || format!("mu={mu_t} lambda={lam} n={n} eps={eps}");
        let (p, q) = (inst.p.as_ref().unwrap(), inst.q.as_ref().unwrap());
        r.record("b-in-core", in_veto_core(&inst.profile, 1, p, q)?, tag);
        let g = build_domination_graph(&inst.profile, 1, p, q)?;
        let v = inst.certificate.as_ref().unwrap().validate(&g);
        r.record("certificate", v.is_ok(), || format!("{}: {v:?}", tag()));
        let got_mu = mu(&inst.profile, q)?;
        r.record("mu-exact", &got_mu == mu_t, || {
            format!("{}: mu = {got_mu}", tag())
        });
        let got_lam = lambda(p);
        r.record("lambda-exact", &got_lam == lam, || {
            format!("{}: lambda = {got_lam}", tag())
        });
        let value = distortion_on_metric(&inst.metric, 1)?;
        let expected = tight_distortion(mu_t, lam, eps);
        r.record("distortion-exact", value == expected, || {
            format!("{}: distortion {value}, expected {expected}", tag())
        });
    }
    Ok(SuiteOutcome {
        instances: grid.len(),
        report: r,
    })
}

pub fn impossibility(_: &SampleSpec) -> Result<SuiteOutcome> {
    let mut r = CheckReport::new();
    let mut count = 0;
    let eps = ratio(1, 100);
    for delta in [Rational::zero(), ratio(1, 3)] {
        for n in [4usize, 10] {
            count += 1;
            let tag = || format!("delta={delta} n={n}");
            let (i1, i2) = impossibility_pair(&delta, n, &eps)?;
            r.record("same-profile", i1.profile == i2.profile, tag);
            let (first, rest) = impossibility_groups(&delta, n);
            let d1 = distortion_on_metric(&i1.metric, 0)?;
            let closed = (Rational::from(n) * (Rational::one() - &eps) + Rational::from(first))
                / Rational::from(rest);
            r.record("i1-closed-form", d1 == closed, || {
                format!("{}: {d1} != {closed}", tag())
            });
            let cons = consistency_bound(&delta)?;
            r.record("i1-exceeds-consistency", d1 > cons, || {
                format!("{}: {d1} <= {cons}", tag())
            });
            let d2 = distortion_on_metric(&i2.metric, 1)?;
            let target = impossibility_ratio(&delta, n, &eps);
            r.record("i2-at-least-ratio", d2 >= target, || {
                format!("{}: {d2} < {target}", tag())
            });
            r.record("i2-equals-ratio", d2 == target, || {
                format!("{}: {d2} != {target}", tag())
            });
        }
    }
    Ok(SuiteOutcome {
        instances: count,
        report: r,
    })
}

pub fn bounds(_: &SampleSpec) -> Result<SuiteOutcome> {
    let mut r = CheckReport::new();
    let etas: Vec<Rational> = (0..=40).map(|k| ratio(k, 4)).collect();
    let alphas = [Rational::zero(), ratio(1, 4), ratio(1, 2), Rational::one()];
    let three = Rational::integer(3);
    let grid = unit_grid(20);
    for d in &grid {
        let (c, rb) = (consistency_bound(d)?, robustness_bound(d)?);
        r.record("consistency-below-three", c <= three && three <= rb, || {
            format!("delta {d}")
        });
        r.record("equal-iff-zero", (c == rb) == d.is_zero(), || {
            format!("delta {d}")
        });
        r.record("pareto-identity", pareto_consistency(&rb)? == c, || {
            format!("delta {d}")
        });
        let mut previous = error_bound(d, &Rational::zero())?;
        r.record("error-at-zero", previous == c, || format!("delta {d}"));
        for eta in &etas[1..] {
            let e = error_bound(d, eta)?;
            r.record("error-monotone", e >= previous, || {
                format!("delta {d}, eta {eta}")
            });
            previous = e;
        }
        let x = error_crossover(d)?;
        let one_plus = Rational::one() + d;
        let linear = (&three - d + Rational::integer(2) * d * &x) / &one_plus;
        r.record(
            "error-crossover",
            linear == rb && error_bound(d, &x)? == rb,
            || format!("delta {d}"),
        );
        r.record(
            "error-at-two",
            error_bound(d, &Rational::integer(2))? == three,
            || format!("delta {d}"),
        );
        for eta in &etas {
            let at_one = decisive_bound(d, &Rational::one(), eta)?;
            let lin = (&three - d + Rational::integer(2) * d * eta) / &one_plus;
            r.record(
                "decisive-linear-branch",
                at_one == lin.clone().min(decisive_robustness(d, &Rational::one())?),
                || format!("delta {d}, eta {eta}"),
            );
            for a in &alphas {
                r.record(
                    "decisive-below-error",
                    decisive_bound(d, a, eta)? <= error_bound(d, eta)?,
                    || format!("delta {d}, alpha {a}, eta {eta}"),
                );
            }
        }
    }
    r.record(
        "zero-decisive-recovers-two",
        decisive_bound(&Rational::zero(), &Rational::zero(), &Rational::zero())?
            == Rational::integer(2),
        String::new,
    );
    r.record(
        "one-third-pair",
        consistency_bound(&ratio(1, 3))? == Rational::integer(2)
            && robustness_bound(&ratio(1, 3))? == Rational::integer(5),
        String::new,
    );
    Ok(SuiteOutcome {
        instances: grid.len(),
        report: r,
    })
}

pub fn error(spec: &SampleSpec) -> Result<SuiteOutcome> {
    let deltas = delta_grid();
    per_sample(spec, |i| {
        let s = spec.aligned(i);
        let (profile, metric) = (&s.instance.profile, &s.instance.metric);
        let mut r = CheckReport::new();
        if metric.social_cost(metric.optimal_candidate())?.is_zero() {
            return Ok(SuiteOutcome::default());
        }
        let eta = metric.prediction_error(s.predicted)?;
        for delta in &deltas {
            let (winner, _) = run_simveto(profile, s.predicted, delta)?;
            let value = distortion_on_metric(metric, winner)?;
            let bound = error_bound(delta, &eta)?;
            r.record("error-bound", value <= bound, || {
                format!("sample {i}, delta {delta}, eta {eta}: {value} > {bound}")
            });
        }
        Ok(SuiteOutcome {
            instances: deltas.len(),
            report: r,
        })
    })
}

pub fn decisive(spec: &SampleSpec) -> Result<SuiteOutcome> {
    let deltas = delta_grid();
    let two = Rational::integer(2);
    let peers = per_sample(spec, |i| {
        let s = spec.peers(i);
        let (profile, metric) = (&s.instance.profile, &s.instance.metric);
        let mut r = CheckReport::new();
        let alpha = metric.decisiveness_alpha(profile)?;
        r.record("peer-zero-decisive", alpha.is_zero(), || {
            format!("sample {i}: alpha = {alpha}")
        });
        let eta = metric.prediction_error(s.predicted)?;
        for delta in &deltas {
            let (winner, _) = run_simveto(profile, s.predicted, delta)?;
            let value = distortion_on_metric(metric, winner)?;
            let bound = decisive_bound(delta, &alpha, &eta)?;
            r.record("decisive-bound", value <= bound, || {
                format!("peers {i}, delta {delta}, eta {eta}: {value} > {bound}")
            });
            if delta.is_zero() {
                r.record("peer-delta-zero", value <= two, || {
                    format!("peers {i}: {value} > 2")
                });
            }
            if eta <= Rational::one() {
                r.record("peer-small-error", value <= two, || {
                    format!("peers {i}, delta {delta}, eta {eta}: {value} > 2")
                });
            }
        }
        Ok(SuiteOutcome {
            instances: deltas.len(),
            report: r,
        })
    })?;
    let mut total = peers;
    for target in [ratio(1, 4), ratio(1, 2)] {
        let part = per_sample(spec, |i| {
            let s = spec.decisive(i, &target)?;
            let (profile, metric) = (&s.instance.profile, &s.instance.metric);
            let mut r = CheckReport::new();
            if metric.social_cost(metric.optimal_candidate())?.is_zero() {
                return Ok(SuiteOutcome::default());
            }
            let alpha = metric.decisiveness_alpha(profile)?;
            r.record("generated-decisive", alpha <= target, || {
                format!("sample {i}: alpha {alpha} > {target}")
            });
            let eta = metric.prediction_error(s.predicted)?;
            for delta in &deltas {
                let (winner, _) = run_simveto(profile, s.predicted, delta)?;
                let value = distortion_on_metric(metric, winner)?;
                let bound = decisive_bound(delta, &alpha, &eta)?;
                r.record("decisive-bound", value <= bound, || {
                    format!(
                        "decisive {i}, alpha {alpha}, delta {delta}, eta {eta}: {value} > {bound}"
                    )
                });
            }
            Ok(SuiteOutcome {
                instances: deltas.len(),
                report: r,
            })
        })?;
        total.instances += part.instances;
        total.report.merge(part.report);
    }
    Ok(total)
}

pub fn optimal_recovery(spec: &SampleSpec) -> Result<SuiteOutcome> {
    let three = Rational::integer(3);
    per_sample(spec, |i| {
        let s = spec.profile(i);
        let n = s.profile.n();
        let mut r = CheckReport::new();
        for a in veto_core(
            &s.profile,
            &WeightVector::uniform(n),
            &WeightVector::plurality(&s.profile),
        )? {
            let value = worst_case_distortion(&s.profile, a)?.value;
            r.record("at-most-three", value <= three, || {
                format!("sample {i}, candidate {a}: {value}")
            });
        }
        Ok(SuiteOutcome {
            instances: 1,
            report: r,
        })
    })
}

pub fn consistency_robustness(spec: &SampleSpec) -> Result<SuiteOutcome> {
    let deltas = delta_grid();
    let obs = delta_observations(spec, &deltas)?;
    let mut r = CheckReport::new();
    for o in &obs {
        let rb = robustness_bound(&o.delta)?;
        r.record("robustness", o.worst <= rb, || {
            format!("sample {}, delta {}: {} > {rb}", o.sample, o.delta, o.worst)
        });
        let cb = consistency_bound(&o.delta)?;
        r.record("consistency", o.consistency <= cb, || {
            format!(
                "sample {}, delta {}: {} > {cb}",
                o.sample, o.delta, o.consistency
            )
        });
    }
    Ok(SuiteOutcome {
        instances: obs.len(),
        report: r,
    })
}

pub fn error_lp(spec: &SampleSpec) -> Result<SuiteOutcome> {
    let small = SampleSpec::new(
        spec.samples,
        spec.seed,
        spec.n_max.min(5),
        spec.m_max.min(4),
    )?;
    let obs = eta_observations(&small, &delta_grid(), &eta_grid())?;
    let mut r = CheckReport::new();
    for o in &obs {
        let Some(value) = &o.value else { continue };
        let bound = error_bound(&o.delta, &o.eta)?;
        r.record("error-bound", *value <= bound, || {
            format!(
                "sample {}, delta {}, eta {}: {value} > {bound}",
                o.sample, o.delta, o.eta
            )
        });
    }
    Ok(SuiteOutcome {
        instances: obs.len(),
        report: r,
    })
}

pub fn decisive_lp(spec: &SampleSpec) -> Result<SuiteOutcome> {
    let small = SampleSpec::new(
        spec.samples,
        spec.seed,
        spec.n_max.min(5),
        spec.m_max.min(4),
    )?;
    let deltas = delta_grid();
    let zero = Rational::zero();
    let two = Rational::integer(2);
    let mut r = CheckReport::new();
    let obs = alpha_observations(&small, std::slice::from_ref(&zero), &deltas)?;
    for o in &obs {
        if let Some(worst) = &o.worst {
            let bound = decisive_robustness(&o.delta, &zero)?;
            r.record("decisive-robustness", *worst <= bound, || {
                format!("sample {}, delta {}: {worst} > {bound}", o.sample, o.delta)
            });
            if o.delta.is_zero() {
                r.record("zero-decisive-delta-zero", *worst <= two, || {
                    format!("sample {}: {worst} > 2", o.sample)
                });
            }
        }
        if let Some(cons) = &o.consistency {
            let bound = decisive_bound(&o.delta, &zero, &zero)?;
            r.record("decisive-consistency", *cons <= bound, || {
                format!("sample {}, delta {}: {cons} > {bound}", o.sample, o.delta)
            });
        }
    }
    // Peer-selection profiles against 0-decisive metrics with error at most 1.
    let peers: Vec<Result<CheckReport>> = (0..small.samples)
        .into_par_iter()
        .map(|i| {
            let s = small.peers(i);
            let profile = &s.instance.profile;
            let mut r = CheckReport::new();
            for delta in &deltas {
                let (winner, _) = run_simveto(profile, s.predicted, delta)?;
                let filter = MetricFilter {
                    prediction_error: Some((s.predicted, Rational::one())),
                    decisiveness: Some(Rational::zero()),
                };
                match restricted_distortion(profile, winner, &filter) {
                    Ok(rep) => r.record(
                        "peer-small-error",
                        rep.value <= Rational::integer(2),
                        || format!("peers {i}, delta {delta}: {}", rep.value),
                    ),
                    Err(Error::NoFeasibleMetric) => {}
                    Err(e) => return Err(e.into()),
                }
            }
            Ok(r)
        })
        .collect();
    for p in peers {
        r.merge(p?);
    }
    Ok(SuiteOutcome {
        instances: obs.len() + small.samples * deltas.len(),
        report: r,
    })
}
