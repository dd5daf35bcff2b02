// SPDX-License-Identifier: Apache-2.0

//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails. Every expected value below is written
//! out here rather than taken from the library's bound functions.

use std::process::ExitCode;
use std::time::Instant;

use vetolab::distortion::distortion_on_metric;
use vetolab::generators::{impossibility_pair, tight_instance};
use vetolab::matching::{
    build_domination_graph, find_fractional_perfect_matching, in_veto_core, mu,
};
use vetolab::simveto::{boosted_q, certifies_winner, run_simveto, ExecutionTrace};
use vetolab::vdg::{build_vdg, transfer_matching};
use vetolab::{ratio, PreferenceProfile, Rational, WeightVector};
use vetolab_cli::curves::{alpha_curve, delta_curve, eta_curve};
use vetolab_cli::numeric::{parse_rational, unit_grid};
use vetolab_cli::sampling::SampleSpec;
use vetolab_cli::suites::{self, delta_grid, tight_grid, SuiteOutcome};
use vetolab_cli::sweeps::delta_observations;
use vetolab_cli::table::Table;

const SEED: u64 = 20_240_601;

/// Relative tolerance for "agrees to 12 significant digits".
const DIGITS_TOL: f64 = 5e-12;

type Verdict = Result<String, String>;

/// A closed form evaluated at a row's key parameters.
type ClosedForm<'a> = (&'a str, &'a dyn Fn(&[Rational]) -> Rational);

fn r(v: i64) -> Rational {
    Rational::integer(v)
}

fn spec(samples: usize) -> SampleSpec {
    SampleSpec::new(samples, SEED, 6, 5).expect("valid sample spec")
}

fn suite_verdict(name: &str, out: anyhow::Result<SuiteOutcome>, min_instances: usize) -> Verdict {
    let out = out.map_err(|e| format!("{name}: {e:#}"))?;
    if out.instances < min_instances {
        return Err(format!(
            "{name}: {} instances < {min_instances}",
            out.instances
        ));
    }
    match out.report.violations.first() {
        None => Ok(format!(
            "{name}: {} instances, {} checks",
            out.instances, out.report.checks
        )),
        Some(v) => Err(format!(
            "{name}: {} of {} checks violated, first {}: {}",
            out.report.violations.len(),
            out.report.checks,
            v.check,
            v.detail
        )),
    }
}

fn criterion_1() -> Verdict {
    suite_verdict(
        "optimal-recovery",
        suites::optimal_recovery(&spec(500)),
        500,
    )
}

fn criteria_2_and_3() -> (Verdict, Verdict) {
    let obs = match delta_observations(&spec(200), &delta_grid()) {
        Ok(o) => o,
        Err(e) => return (Err(format!("{e:#}")), Err(format!("{e:#}"))),
    };
    let (mut worst_bad, mut cons_bad) = (Vec::new(), Vec::new());
    for o in &obs {
        let rob = (r(3) + &o.delta) / (r(1) - &o.delta);
        let cons = (r(3) - &o.delta) / (r(1) + &o.delta);
        if o.worst > rob {
            worst_bad.push(format!(
                "sample {} delta {}: {} > {rob}",
                o.sample, o.delta, o.worst
            ));
        }
        if o.consistency > cons {
            cons_bad.push(format!(
                "sample {} delta {}: {} > {cons}",
                o.sample, o.delta, o.consistency
            ));
        }
    }
    let verdict = |bad: Vec<String>| {
        if obs.len() < 800 {
            Err(format!("only {} observations", obs.len()))
        } else if bad.is_empty() {
            Ok(format!("{} (profile, delta) pairs", obs.len()))
        } else {
            Err(format!("{} violations, first {}", bad.len(), bad[0]))
        }
    };
    (verdict(worst_bad), verdict(cons_bad))
}

fn criterion_4() -> Verdict {
    let grid = tight_grid();
    let mut pairs: Vec<(Rational, Rational)> =
        grid.iter().map(|g| (g.0.clone(), g.1.clone())).collect();
    pairs.dedup();
    if pairs.len() != 9 || grid.len() != 18 {
        return Err(format!(
            "grid has {} points over {} (mu, lambda) pairs",
            grid.len(),
            pairs.len()
        ));
    }
    for (mu_t, lam, n, eps) in &grid {
        let tag = format!("mu={mu_t} lambda={lam} n={n} eps={eps}");
        let inst = tight_instance(mu_t, lam, *n, eps).map_err(|e| format!("{tag}: {e}"))?;
        let (p, q) = (inst.p.as_ref().unwrap(), inst.q.as_ref().unwrap());
        if !in_veto_core(&inst.profile, 1, p, q).map_err(|e| e.to_string())? {
            return Err(format!("{tag}: b not in core"));
        }
        let g = build_domination_graph(&inst.profile, 1, p, q).map_err(|e| e.to_string())?;
        let cert = inst
            .certificate
            .as_ref()
            .ok_or(format!("{tag}: no certificate"))?;
        cert.validate(&g)
            .map_err(|e| format!("{tag}: certificate {e}"))?;
        let got = distortion_on_metric(&inst.metric, 1).map_err(|e| e.to_string())?;
        let expected = r(1) + r(2) * lam / mu_t - eps * (mu_t + lam) / mu_t;
        if got != expected {
            return Err(format!("{tag}: distortion {got}, expected {expected}"));
        }
    }
    Ok(format!("{} instances", grid.len()))
}

fn criterion_5() -> Verdict {
    let eps = ratio(1, 100);
    let mut notes = Vec::new();
    for delta in [r(0), ratio(1, 3)] {
        for n in [4i64, 10] {
            let tag = format!("delta={delta} n={n}");
            let (i1, i2) =
                impossibility_pair(&delta, n as usize, &eps).map_err(|e| format!("{tag}: {e}"))?;
            if i1.profile != i2.profile {
                return Err(format!("{tag}: profiles differ"));
            }
            let cons = (r(3) - &delta) / (r(1) + &delta);
            let d1 = distortion_on_metric(&i1.metric, 0).map_err(|e| e.to_string())?;
            if d1 <= cons {
                return Err(format!("{tag}: I1 distortion {d1} <= {cons}"));
            }
            let four_n = r(4) / r(n);
            let target = (r(3) + &delta - &four_n - r(2) * &eps) / (r(1) - &delta + &four_n);
            let d2 = distortion_on_metric(&i2.metric, 1).map_err(|e| e.to_string())?;
            if d2 != target {
                notes.push(format!("{tag}: I2 ratio {d2} != {target}"));
            }
        }
    }
    if notes.is_empty() {
        Ok("4 pairs".into())
    } else {
        Err(notes.join("; "))
    }
}

fn criterion_6() -> Verdict {
    let profile = PreferenceProfile::new(2, vec![vec![0, 1], vec![1, 0], vec![1, 0]]).unwrap();
    let q = WeightVector::new(vec![ratio(2, 3), ratio(1, 3)]).unwrap();
    let p = WeightVector::uniform(3);
    let g = build_domination_graph(&profile, 0, &p, &q).map_err(|e| e.to_string())?;
    let w = find_fractional_perfect_matching(&g).ok_or("a has no certificate")?;
    let vdg = build_vdg(&profile, 0, &q).map_err(|e| e.to_string())?;
    if vdg.mu() != &ratio(1, 2) || mu(&profile, &q).map_err(|e| e.to_string())? != ratio(1, 2) {
        return Err(format!("mu = {}", vdg.mu()));
    }
    let t = transfer_matching(&vdg, &profile, &q, &w).map_err(|e| e.to_string())?;
    t.validate(&vdg).map_err(|e| e.to_string())?;
    // Voters are 0-indexed here: voter 0 is the one ranking a first.
    let expected = [
        ("w'(2,1)", t.voter_weight(1, 0), ratio(1, 12)),
        ("w'(3,1)", t.voter_weight(2, 0), ratio(1, 12)),
        ("w'(1,2)", t.voter_weight(0, 1), ratio(1, 6)),
        ("w'(1,3)", t.voter_weight(0, 2), ratio(1, 6)),
        ("w'(2,b)", t.boost_weight(1), ratio(1, 4)),
        ("w'(3,b)", t.boost_weight(2), ratio(1, 4)),
        ("w'(1,b)", t.boost_weight(0), r(0)),
    ];
    for (name, got, want) in expected {
        if *got != want {
            return Err(format!("{name} = {got}, expected {want}"));
        }
    }
    Ok("mu = 1/2 and all transferred weights exact".into())
}

/// Independent restatement of the trace identities.
fn trace_identities(
    profile: &PreferenceProfile,
    predicted: usize,
    delta: &Rational,
) -> Result<(), String> {
    let (winner, trace): (usize, ExecutionTrace) =
        run_simveto(profile, predicted, delta).map_err(|e| e.to_string())?;
    let (n, m) = (profile.n(), profile.m());
    let tag = format!("predicted {predicted} delta {delta}");
    for (v, row) in trace.f.iter().enumerate() {
        let total: Rational = row.iter().sum();
        if total != r(1) {
            return Err(format!("{tag}: voter {v} eats {total}"));
        }
    }
    let factor = (r(1) - delta) / (r(1) + delta);
    for c in 0..m {
        let plu = Rational::from(profile.rankings().iter().filter(|rk| rk[0] == c).count());
        let expected = if c == predicted {
            &factor * (plu + r(2) * delta * Rational::from(n) / (r(1) - delta))
        } else {
            &factor * plu
        };
        let eaten: Rational = trace.f.iter().map(|row| &row[c]).sum();
        if eaten != expected {
            return Err(format!(
                "{tag}: candidate {c} eaten {eaten}, expected {expected}"
            ));
        }
    }
    let q_hat = boosted_q(profile, predicted, delta).map_err(|e| e.to_string())?;
    let g = build_domination_graph(profile, winner, &WeightVector::uniform(n), &q_hat)
        .map_err(|e| e.to_string())?;
    trace
        .certificate()
        .validate(&g)
        .map_err(|e| format!("{tag}: certificate {e}"))?;
    certifies_winner(profile, winner, &trace).map_err(|e| format!("{tag}: {e}"))?;
    if trace.rounds.len() > m {
        return Err(format!(
            "{tag}: {} rounds for {m} candidates",
            trace.rounds.len()
        ));
    }
    match trace.rounds.last() {
        Some(last) if last.end == r(1) => Ok(()),
        Some(last) => Err(format!("{tag}: ends at {}", last.end)),
        None => Err(format!("{tag}: no rounds")),
    }
}

fn criterion_7() -> Verdict {
    let s = spec(300);
    let mut runs = 0;
    for i in 0..s.samples {
        let profile_sample = s.profile(i);
        let aligned = s.aligned(i);
        for delta in delta_grid() {
            trace_identities(&profile_sample.profile, profile_sample.predicted, &delta)
                .map_err(|e| format!("profile sample {i}: {e}"))?;
            trace_identities(&aligned.instance.profile, aligned.predicted, &delta)
                .map_err(|e| format!("aligned sample {i}: {e}"))?;
            runs += 2;
        }
    }
    suite_verdict("simveto", suites::simveto(&s), 1)?;
    Ok(format!("{runs} executions"))
}

fn criterion_8() -> Verdict {
    suite_verdict(
        "companion-lemmas",
        suites::companion_lemmas(&spec(300)),
        300 * 4,
    )
}

fn criterion_9() -> Verdict {
    suite_verdict("reduction", suites::reduction(&spec(200)), 200)
}

fn relative_gap(shown: &str, exact: f64) -> f64 {
    let shown: f64 = shown.parse().unwrap_or(f64::NAN);
    (shown - exact).abs() / exact.abs().max(1.0)
}

/// Every `(column, closed form)` pair must agree exactly in the `_exact`
/// column and to 12 significant digits in the decimal column.
fn check_curve(name: &str, table: &Table, closed: &[ClosedForm], keys: &[&str]) -> Verdict {
    let csv = table.to_csv();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().ok_or("empty csv")?.split(',').collect();
    let col = |c: &str| {
        header
            .iter()
            .position(|h| h.starts_with(&format!("{c}[")))
            .ok_or(format!("{name}: no column {c}"))
    };
    let mut rows = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        let params: Vec<Rational> = keys
            .iter()
            .map(|k| parse_rational(cells[col(&format!("{k}_exact")).unwrap()]).unwrap())
            .collect();
        for (c, f) in closed {
            let want = f(&params);
            let exact = parse_rational(cells[col(&format!("{c}_exact"))?])
                .map_err(|e| format!("{name}: {e}"))?;
            if exact != want {
                return Err(format!("{name} {c} at {params:?}: {exact} != {want}"));
            }
            let gap = relative_gap(cells[col(c)?], want.to_f64());
            if gap.is_nan() || gap > DIGITS_TOL {
                return Err(format!("{name} {c} at {params:?}: decimal off by {gap:e}"));
            }
        }
        rows += 1;
    }
    Ok(format!("{name} {rows} rows"))
}

fn criterion_10() -> Verdict {
    let mut parts = vec![
        suite_verdict("error", suites::error(&spec(200)), 1)?,
        suite_verdict("error-lp", suites::error_lp(&spec(12)), 1)?,
        suite_verdict("decisive", suites::decisive(&spec(100)), 1)?,
        suite_verdict("decisive-lp", suites::decisive_lp(&spec(12)), 1)?,
    ];
    let cons = |x: &[Rational]| (r(3) - &x[0]) / (r(1) + &x[0]);
    let rob = |x: &[Rational]| (r(3) + &x[0]) / (r(1) - &x[0]);
    let err = |x: &[Rational]| {
        let (d, eta) = (&x[0], &x[1]);
        let lin = (r(3) - d + r(2) * d * eta) / (r(1) + d);
        lin.min((r(3) + d) / (r(1) - d))
    };
    // Keys for the alpha table are (alpha, delta).
    let dec_cons = |x: &[Rational]| (r(2) + &x[0] - &x[0] * &x[1]) / (r(1) + &x[1]);
    let dec_rob = |x: &[Rational]| {
        let (a, d) = (&x[0], &x[1]);
        (r(2) + a - a * d) / (r(1) + d) + r(8) * d / ((r(1) + d) * (r(1) - d))
    };
    let deltas = unit_grid(40);
    let etas: Vec<Rational> = (0..=40).map(|k| ratio(k, 5)).collect();
    let alphas = [r(0), ratio(1, 4), ratio(1, 2), ratio(3, 4), r(1)];
    let t = delta_curve(&deltas).map_err(|e| e.to_string())?;
    parts.push(check_curve(
        "delta-curve",
        &t,
        &[("consistency_bound", &cons), ("robustness_bound", &rob)],
        &["delta"],
    )?);
    let t = eta_curve(&delta_grid(), &etas).map_err(|e| e.to_string())?;
    parts.push(check_curve(
        "eta-curve",
        &t,
        &[("error_bound", &err)],
        &["delta", "eta"],
    )?);
    let t = alpha_curve(&alphas, &deltas).map_err(|e| e.to_string())?;
    parts.push(check_curve(
        "alpha-curve",
        &t,
        &[
            ("consistency_bound", &dec_cons),
            ("robustness_bound", &dec_rob),
        ],
        &["alpha", "delta"],
    )?);
    Ok(parts.join("; "))
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |id: &str, verdict: Verdict, started: Instant| {
        let secs = started.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("PASS criterion {id}: {detail} ({secs:.1}s)"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {id}: {detail} ({secs:.1}s)");
            }
        }
    };
    let t = Instant::now();
    report("1", criterion_1(), t);
    let t = Instant::now();
    let (two, three) = criteria_2_and_3();
    report("2", two, t);
    report("3", three, t);
    let t = Instant::now();
    report("4", criterion_4(), t);
    let t = Instant::now();
    report("5", criterion_5(), t);
    let t = Instant::now();
    report("6", criterion_6(), t);
    let t = Instant::now();
    report("7", criterion_7(), t);
    let t = Instant::now();
    report("8", criterion_8(), t);
    let t = Instant::now();
    report("9", criterion_9(), t);
    let t = Instant::now();
    report("10", criterion_10(), t);
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
