// SPDX-License-Identifier: Apache-2.0

//! Argument definitions and subcommand implementations.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use vetolab::distortion::{
    brute_force_line_oracle, consistency_distortion, distortion_on_metric, worst_case_distortion,
    DistortionReport,
};
use vetolab::generators::{
    alpha_decisive, impossibility_pair, peer_selection, random_euclidean, random_line,
    tight_instance, GeneratedInstance,
};
use vetolab::io::{
    f_matrix_csv, parse_metric, parse_profile, parse_weights, report_csv, trace_csv, write_metric,
    write_profile, write_weights,
};
use vetolab::matching::{generic_bound, lambda, mu, veto_core_with_certificates};
use vetolab::simveto::run_simveto;
use vetolab::{Rational, WeightVector};

use crate::curves::{self, Curve};
use crate::numeric::{parse_list, parse_rational, unit_grid};
use crate::sampling::{in_pool, SampleSpec};
use crate::suites::{self, delta_grid, eta_grid, SUITES};
use crate::sweeps;

/// Comma-separated rationals, e.g. `0,1/9,1/3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalList(pub Vec<Rational>);

fn parse_rational_list(s: &str) -> Result<RationalList, String> {
    parse_list(s).map(RationalList)
}

#[derive(Debug, Parser)]
#[command(
    name = "vetolab",
    version,
    about = "Veto cores, the boosted simultaneous veto rule and exact distortion oracles"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
#[allow(clippy::large_enum_variant)]
pub enum Command {
    /// List the (p,q)-veto core with a certifying matching per member.
    Core(CoreArgs),
    /// Run the boosted simultaneous veto rule on a profile.
    Simveto(SimvetoArgs),
    /// Worst-case distortion of candidates by exact LP.
    Distortion(DistortionArgs),
    /// Write a generated instance family to files.
    Gen(GenArgs),
    /// Tabulate closed-form guarantees.
    Bounds(BoundsArgs),
    /// Observed consistency and worst-case distortion against the delta bounds.
    SweepDelta(SweepArgs),
    /// Observed distortion under bounded prediction error against the error bound.
    SweepEta(SweepEtaArgs),
    /// Observed distortion on decisive instances against the decisive bounds.
    SweepAlpha(SweepAlphaArgs),
    /// Run invariant suites and print a JSON summary.
    Verify(VerifyArgs),
}

#[derive(Debug, Args)]
pub struct CoreArgs {
    #[arg(long)]
    pub profile: PathBuf,
    /// Weights file with `p:` and `q:` lines; defaults to uniform p and plurality q.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimvetoArgs {
    #[arg(long)]
    pub profile: PathBuf,
    /// Index of the predicted candidate.
    #[arg(long)]
    pub predicted: usize,
    #[arg(long, value_parser = parse_rational, default_value = "0")]
    pub delta: Rational,
    /// Per-round trace CSV.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Eating-time matrix CSV.
    #[arg(long)]
    pub f_matrix: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct DistortionArgs {
    #[arg(long, required_unless_present = "metric")]
    pub profile: Option<PathBuf>,
    /// Evaluate on this concrete metric instead of the worst case.
    #[arg(long, conflicts_with_all = ["predicted", "grid", "witness"])]
    pub metric: Option<PathBuf>,
    /// Only this candidate; all candidates otherwise.
    #[arg(long)]
    pub candidate: Option<usize>,
    /// Restrict to metrics in which this candidate is optimal.
    #[arg(long)]
    pub predicted: Option<usize>,
    /// Also run the brute-force line oracle with this many grid steps.
    #[arg(long)]
    pub grid: Option<u32>,
    /// Write the witness metric of `--candidate` here.
    #[arg(long, requires = "candidate")]
    pub witness: Option<PathBuf>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Tight,
    Impossibility,
    Random,
    Line,
    Peers,
    Decisive,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub family: Family,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    #[arg(long, default_value_t = 3)]
    pub m: usize,
    #[arg(long, default_value_t = 2)]
    pub dim: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_parser = parse_rational, default_value = "1/2")]
    pub mu: Rational,
    #[arg(long, value_parser = parse_rational, default_value = "1")]
    pub lambda: Rational,
    #[arg(long, value_parser = parse_rational, default_value = "1/100")]
    pub epsilon: Rational,
    #[arg(long, value_parser = parse_rational, default_value = "0")]
    pub delta: Rational,
    #[arg(long, value_parser = parse_rational, default_value = "1/2")]
    pub alpha: Rational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CurveArg {
    Delta,
    Eta,
    Alpha,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Tabulate a curve over `--grid`; a single parameter point otherwise.
    #[arg(long, value_enum)]
    pub curve: Option<CurveArg>,
    #[arg(long, value_parser = parse_rational_list)]
    pub delta: Option<RationalList>,
    #[arg(long, value_parser = parse_rational_list)]
    pub eta: Option<RationalList>,
    #[arg(long, value_parser = parse_rational_list)]
    pub alpha: Option<RationalList>,
    /// x-axis values of the curve.
    #[arg(long, value_parser = parse_rational_list)]
    pub grid: Option<RationalList>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SampleArgs {
    #[arg(long, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Largest number of voters.
    #[arg(long, default_value_t = 6)]
    pub n: usize,
    /// Largest number of candidates.
    #[arg(long, default_value_t = 5)]
    pub m: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

impl SampleArgs {
    fn spec(&self) -> Result<SampleSpec> {
        SampleSpec::new(self.samples, self.seed, self.n, self.m)
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub sample: SampleArgs,
    /// Confidence values.
    #[arg(long, value_parser = parse_rational_list)]
    pub grid: Option<RationalList>,
}

#[derive(Debug, Args)]
pub struct SweepEtaArgs {
    #[command(flatten)]
    pub sample: SampleArgs,
    /// Confidence values, one curve each.
    #[arg(long, value_parser = parse_rational_list)]
    pub delta: Option<RationalList>,
    /// Prediction-error values.
    #[arg(long, value_parser = parse_rational_list)]
    pub grid: Option<RationalList>,
}

#[derive(Debug, Args)]
pub struct SweepAlphaArgs {
    #[command(flatten)]
    pub sample: SampleArgs,
    /// Decisiveness values, one curve each.
    #[arg(long, value_parser = parse_rational_list, default_value = "0")]
    pub alpha: RationalList,
    /// Confidence values.
    #[arg(long, value_parser = parse_rational_list)]
    pub grid: Option<RationalList>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Suite name, or `all`.
    pub suite: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Samples per suite; each suite has its own default.
    #[arg(long)]
    pub samples: Option<usize>,
    /// JSON summary path; stdout otherwise.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// How a successful run ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// A guarantee or invariant was violated.
    Violation,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::Violation => 1,
        }
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => write(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_profile(path: &Path) -> Result<vetolab::PreferenceProfile> {
    parse_profile(&read(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn run(cli: Cli) -> Result<Status> {
    match cli.command {
        Command::Core(a) => cmd_core(&a),
        Command::Simveto(a) => cmd_simveto(&a),
        Command::Distortion(a) => cmd_distortion(&a),
        Command::Gen(a) => cmd_gen(&a),
        Command::Bounds(a) => cmd_bounds(&a),
        Command::SweepDelta(a) => cmd_sweep_delta(&a),
        Command::SweepEta(a) => cmd_sweep_eta(&a),
        Command::SweepAlpha(a) => cmd_sweep_alpha(&a),
        Command::Verify(a) => cmd_verify(&a),
    }
}

fn cmd_core(a: &CoreArgs) -> Result<Status> {
    let profile = load_profile(&a.profile)?;
    let (p, q) = match &a.weights {
        Some(path) => parse_weights(&read(path)?, profile.n(), profile.m())
            .with_context(|| format!("in {}", path.display()))?,
        None => (
            WeightVector::uniform(profile.n()),
            WeightVector::plurality(&profile),
        ),
    };
    let core = veto_core_with_certificates(&profile, &p, &q)?;
    let mut out = String::new();
    let members: Vec<String> = core.iter().map(|(c, _)| c.to_string()).collect();
    let _ = writeln!(
        out,
        "n {} m {} mu {} lambda {} bound {}",
        profile.n(),
        profile.m(),
        mu(&profile, &q)?,
        lambda(&p),
        generic_bound(&profile, &p, &q)?
    );
    let _ = writeln!(out, "core {}", members.join(" "));
    for (c, w) in &core {
        let _ = writeln!(out, "candidate {c}");
        for (v, x, weight) in w.support() {
            let _ = writeln!(out, "  voter {v} -> {x} : {weight}");
        }
    }
    emit(a.out.as_deref(), &out)?;
    Ok(Status::Ok)
}

fn cmd_simveto(a: &SimvetoArgs) -> Result<Status> {
    let profile = load_profile(&a.profile)?;
    let (winner, trace) = run_simveto(&profile, a.predicted, &a.delta)?;
    let report = trace.verify(&profile);
    println!(
        "winner {winner} predicted {} delta {} rounds {} boost {} rate {}",
        a.predicted,
        a.delta,
        trace.rounds.len(),
        trace.boost,
        trace.rate
    );
    if let Some(path) = &a.out {
        write(path, &trace_csv(&trace))?;
    }
    if let Some(path) = &a.f_matrix {
        write(path, &f_matrix_csv(&trace))?;
    }
    if !report.passed() {
        eprintln!("{report}");
        return Ok(Status::Violation);
    }
    Ok(Status::Ok)
}

fn cmd_distortion(a: &DistortionArgs) -> Result<Status> {
    if let Some(path) = &a.metric {
        let metric =
            parse_metric(&read(path)?).with_context(|| format!("in {}", path.display()))?;
        if let Some(p) = &a.profile {
            metric.require_aligned(&load_profile(p)?)?;
        }
        let candidates: Vec<usize> = match a.candidate {
            Some(c) => vec![c],
            None => (0..metric.m()).collect(),
        };
        let mut out = String::from("candidate,value\n");
        for c in candidates {
            let _ = writeln!(out, "{c},{}", distortion_on_metric(&metric, c)?);
        }
        emit(a.out.as_deref(), &out)?;
        return Ok(Status::Ok);
    }
    let profile = load_profile(
        a.profile
            .as_ref()
            .expect("clap requires --profile without --metric"),
    )?;
    let candidates: Vec<usize> = match a.candidate {
        Some(c) => vec![c],
        None => (0..profile.m()).collect(),
    };
    let reports: Vec<DistortionReport> = in_pool(|| {
        use rayon::prelude::*;
        candidates
            .par_iter()
            .map(|&c| match a.predicted {
                Some(p) => consistency_distortion(&profile, c, p),
                None => worst_case_distortion(&profile, c),
            })
            .collect::<Result<Vec<_>, _>>()
    })??;
    let mut out = report_csv(&reports);
    if let Some(grid) = a.grid {
        let mut lines = out.lines();
        let mut extended = format!("{},line_oracle\n", lines.next().unwrap_or_default());
        for (line, r) in lines.zip(&reports) {
            let _ = writeln!(
                extended,
                "{line},{}",
                brute_force_line_oracle(&profile, r.candidate, grid)?
            );
        }
        out = extended;
    }
    if let Some(path) = &a.witness {
        match &reports[0].witness {
            Some(w) => write(path, &write_metric(w))?,
            None => eprintln!("no witness: the distortion is unbounded"),
        }
    }
    emit(a.out.as_deref(), &out)?;
    Ok(Status::Ok)
}

fn write_instance(dir: &Path, inst: &GeneratedInstance) -> Result<()> {
    let base = dir.join(&inst.label);
    write(
        &base.with_extension("profile"),
        &write_profile(&inst.profile),
    )?;
    write(&base.with_extension("metric"), &write_metric(&inst.metric))?;
    if let (Some(p), Some(q)) = (&inst.p, &inst.q) {
        write(&base.with_extension("weights"), &write_weights(p, q))?;
    }
    let mut manifest = format!(
        "label = {}\nn = {}\nm = {}\n",
        inst.label,
        inst.profile.n(),
        inst.profile.m()
    );
    for (k, v) in &inst.parameters {
        let _ = writeln!(manifest, "{k} = {v}");
    }
    if let Some(w) = &inst.certificate {
        manifest.push_str("certificate =");
        for (v, c, x) in w.support() {
            let _ = write!(manifest, " {v}:{c}:{x}");
        }
        manifest.push('\n');
    }
    write(&base.with_extension("manifest"), &manifest)
}

fn cmd_gen(a: &GenArgs) -> Result<Status> {
    fs::create_dir_all(&a.out).with_context(|| format!("cannot create {}", a.out.display()))?;
    let instances = match a.family {
        Family::Tight => vec![tight_instance(&a.mu, &a.lambda, a.n, &a.epsilon)?],
        Family::Impossibility => {
            let (i1, i2) = impossibility_pair(&a.delta, a.n, &a.epsilon)?;
            vec![i1, i2]
        }
        Family::Random => vec![random_euclidean(a.n, a.m, a.dim, a.seed)?],
        Family::Line => vec![random_line(a.n, a.m, a.seed)?],
        Family::Peers => vec![peer_selection(a.n, a.seed)?],
        Family::Decisive => vec![alpha_decisive(a.n, a.m, &a.alpha, a.seed)?],
    };
    for inst in &instances {
        write_instance(&a.out, inst)?;
        println!("{}", a.out.join(&inst.label).display());
    }
    Ok(Status::Ok)
}

fn list_or(arg: &Option<RationalList>, default: impl FnOnce() -> Vec<Rational>) -> Vec<Rational> {
    arg.as_ref().map_or_else(default, |l| l.0.clone())
}

fn single(arg: &Option<RationalList>, name: &str) -> Result<Option<Rational>> {
    match arg {
        None => Ok(None),
        Some(RationalList(v)) if v.len() == 1 => Ok(Some(v[0].clone())),
        Some(_) => bail!("--{name} takes a single value unless --curve is given"),
    }
}

fn cmd_bounds(a: &BoundsArgs) -> Result<Status> {
    let (curve, table) = match a.curve {
        None => {
            let delta = single(&a.delta, "delta")?.unwrap_or_else(Rational::zero);
            let alpha = single(&a.alpha, "alpha")?;
            let eta = single(&a.eta, "eta")?;
            if a.svg.is_some() {
                bail!("--svg needs --curve");
            }
            emit(
                a.out.as_deref(),
                &curves::point(&delta, alpha.as_ref(), eta.as_ref())?.to_csv(),
            )?;
            return Ok(Status::Ok);
        }
        Some(CurveArg::Delta) => (
            Curve::Delta,
            curves::delta_curve(&list_or(&a.grid, || unit_grid(20)))?,
        ),
        Some(CurveArg::Eta) => {
            let etas = list_or(&a.grid, || (0..=20).map(|k| Rational::new(k, 2)).collect());
            (
                Curve::Eta,
                curves::eta_curve(&list_or(&a.delta, delta_grid), &etas)?,
            )
        }
        Some(CurveArg::Alpha) => {
            let alphas = list_or(&a.alpha, || vec![Rational::zero()]);
            (
                Curve::Alpha,
                curves::alpha_curve(&alphas, &list_or(&a.grid, || unit_grid(20)))?,
            )
        }
    };
    emit(a.out.as_deref(), &table.to_csv())?;
    if let Some(path) = &a.svg {
        write(path, &curves::chart(curve, &table))?;
    }
    Ok(Status::Ok)
}

fn status(all_within: bool) -> Status {
    if all_within {
        Status::Ok
    } else {
        eprintln!("observed distortion exceeds a bound; see the within_bounds column");
        Status::Violation
    }
}

fn cmd_sweep_delta(a: &SweepArgs) -> Result<Status> {
    let spec = a.sample.spec()?;
    let deltas = list_or(&a.grid, delta_grid);
    let rows = in_pool(|| sweeps::sweep_delta(&spec, &deltas))??;
    emit(
        a.sample.out.as_deref(),
        &sweeps::delta_table(&rows).to_csv(),
    )?;
    if let Some(path) = &a.sample.svg {
        write(path, &sweeps::delta_chart(&rows))?;
    }
    Ok(status(rows.iter().all(sweeps::DeltaRow::within_bounds)))
}

fn cmd_sweep_eta(a: &SweepEtaArgs) -> Result<Status> {
    let spec = a.sample.spec()?;
    let deltas = list_or(&a.delta, delta_grid);
    let etas = list_or(&a.grid, eta_grid);
    let rows = in_pool(|| sweeps::sweep_eta(&spec, &deltas, &etas))??;
    emit(a.sample.out.as_deref(), &sweeps::eta_table(&rows).to_csv())?;
    if let Some(path) = &a.sample.svg {
        write(path, &sweeps::eta_chart(&rows))?;
    }
    Ok(status(rows.iter().all(sweeps::EtaRow::within_bounds)))
}

fn cmd_sweep_alpha(a: &SweepAlphaArgs) -> Result<Status> {
    let spec = a.sample.spec()?;
    let deltas = list_or(&a.grid, delta_grid);
    let rows = in_pool(|| sweeps::sweep_alpha(&spec, &a.alpha.0, &deltas))??;
    emit(
        a.sample.out.as_deref(),
        &sweeps::alpha_table(&rows).to_csv(),
    )?;
    if let Some(path) = &a.sample.svg {
        write(path, &sweeps::alpha_chart(&rows))?;
    }
    Ok(status(rows.iter().all(sweeps::AlphaRow::within_bounds)))
}

fn cmd_verify(a: &VerifyArgs) -> Result<Status> {
    let names: Vec<&str> = if a.suite == "all" {
        SUITES.iter().map(|s| s.name).collect()
    } else {
        suites::find(&a.suite)
            .map(|s| vec![s.name])
            .unwrap_or_else(|| vec![a.suite.as_str()])
    };
    let mut summaries = Vec::new();
    for name in names {
        let summary = in_pool(|| suites::run_named(name, a.seed, a.samples))??;
        eprintln!(
            "{} {}: {} instances, {} checks, {} violations",
            if summary.passed { "PASS" } else { "FAIL" },
            summary.suite,
            summary.instances,
            summary.checks,
            summary.violations.len()
        );
        summaries.push(summary);
    }
    let passed = summaries.iter().all(|s| s.passed);
    let json = serde_json::json!({ "passed": passed, "suites": summaries });
    emit(
        a.out.as_deref(),
        &format!("{}\n", serde_json::to_string_pretty(&json)?),
    )?;
    Ok(if passed {
        Status::Ok
    } else {
        Status::Violation
    })
}
