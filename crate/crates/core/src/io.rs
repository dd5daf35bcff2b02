// SPDX-License-Identifier: Apache-2.0

//! Plain-text formats for profiles, metrics, weights, traces and reports.
//!
//! Blank lines and lines starting with `#` are ignored. Errors carry the
//! 1-based line number of the offending line.

use std::fmt::Write as _;

use crate::distortion::DistortionReport;
use crate::error::{Error, Result};
use crate::metric::MetricInstance;
use crate::profile::PreferenceProfile;
use crate::rational::Rational;
use crate::simveto::ExecutionTrace;
use crate::weights::WeightVector;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn parse_header<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>) -> Result<(usize, usize)> {
    let (line, text) = lines
        .next()
        .ok_or_else(|| parse_error(1, "missing `n m` header"))?;
    let fields: Vec<&str> = text.split_whitespace().collect();
    let parse = |s: &str| {
        s.parse::<usize>()
            .map_err(|_| parse_error(line, format!("`{s}` is not a count")))
    };
    match fields.as_slice() {
        [n, m] => Ok((parse(n)?, parse(m)?)),
        _ => Err(parse_error(line, "header must be `n m`")),
    }
}

fn parse_rationals(line: usize, fields: &str) -> Result<Vec<Rational>> {
    fields
        .split_whitespace()
        .map(|s| {
            s.parse()
                .map_err(|_| parse_error(line, format!("`{s}` is not a rational")))
        })
        .collect()
}

/// `n m`, then `n` lines of `m` candidate indices, most preferred first.
pub fn parse_profile(text: &str) -> Result<PreferenceProfile> {
    let mut lines = content_lines(text);
    let (n, m) = parse_header(&mut lines)?;
    let mut rankings = Vec::with_capacity(n);
    let mut last_line = 1;
    for (line, l) in lines.by_ref().take(n) {
        last_line = line;
        let ranking: Vec<usize> = l
            .split_whitespace()
            .map(|s| {
                s.parse()
                    .map_err(|_| parse_error(line, format!("`{s}` is not a candidate index")))
            })
            .collect::<Result<_>>()?;
        // Validate each line on its own so errors point at it.
        PreferenceProfile::new(m, vec![ranking.clone()])
            .map_err(|e| parse_error(line, e.to_string()))?;
        rankings.push(ranking);
    }
    if rankings.len() != n {
        return Err(parse_error(
            last_line,
            format!("expected {n} rankings, found {}", rankings.len()),
        ));
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_error(
            line,
            "unexpected content after the last ranking",
        ));
    }
    PreferenceProfile::new(m, rankings)
}

pub fn write_profile(profile: &PreferenceProfile) -> String {
    let mut out = format!("{} {}\n", profile.n(), profile.m());
    for r in profile.rankings() {
        let line: Vec<String> = r.iter().map(usize::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// `n m`, then `n+m` rows of `n+m` rationals; voters first.
pub fn parse_metric(text: &str) -> Result<MetricInstance> {
    let mut lines = content_lines(text);
    let (n, m) = parse_header(&mut lines)?;
    let size = n + m;
    let mut rows = Vec::with_capacity(size);
    let mut last_line = 1;
    for (line, l) in lines.by_ref().take(size) {
        last_line = line;
        let row = parse_rationals(line, l)?;
        if row.len() != size {
            return Err(parse_error(
                line,
                format!("expected {size} entries, found {}", row.len()),
            ));
        }
        rows.push(row);
    }
    if rows.len() != size {
        return Err(parse_error(
            last_line,
            format!("expected {size} rows, found {}", rows.len()),
        ));
    }
    if let Some((line, _)) = lines.next() {
        return Err(parse_error(line, "unexpected content after the last row"));
    }
    MetricInstance::new(n, m, rows)
}

pub fn write_metric(metric: &MetricInstance) -> String {
    let mut out = format!("{} {}\n", metric.n(), metric.m());
    for row in metric.rows() {
        let line: Vec<String> = row.iter().map(Rational::to_string).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// `p: …` with `n` rationals and `q: …` with `m` rationals, in either order.
pub fn parse_weights(text: &str, n: usize, m: usize) -> Result<(WeightVector, WeightVector)> {
    let mut p = None;
    let mut q = None;
    for (line, l) in content_lines(text) {
        let (key, rest) = l
            .split_once(':')
            .ok_or_else(|| parse_error(line, "expected `p:` or `q:`"))?;
        let (slot, len) = match key.trim() {
            "p" => (&mut p, n),
            "q" => (&mut q, m),
            other => {
                return Err(parse_error(
                    line,
                    format!("unknown weight vector `{other}`"),
                ))
            }
        };
        if slot.is_some() {
            return Err(parse_error(line, format!("`{}` given twice", key.trim())));
        }
        let values = parse_rationals(line, rest)?;
        if values.len() != len {
            return Err(parse_error(
                line,
                format!("expected {len} weights, found {}", values.len()),
            ));
        }
        *slot = Some(WeightVector::new(values).map_err(|e| parse_error(line, e.to_string()))?);
    }
    let last = text.lines().count().max(1);
    Ok((
        p.ok_or_else(|| parse_error(last, "missing `p:` line"))?,
        q.ok_or_else(|| parse_error(last, "missing `q:` line"))?,
    ))
}

pub fn write_weights(p: &WeightVector, q: &WeightVector) -> String {
    let join = |w: &WeightVector| {
        w.iter()
            .map(Rational::to_string)
            .collect::<Vec<_>>()
            .join(" ")
    };
    format!("p: {}\nq: {}\n", join(p), join(q))
}

/// One row per round: its time span, each candidate's score at its end
/// and each voter's target during it. Times and scores are exact.
pub fn trace_csv(trace: &ExecutionTrace) -> String {
    let m = trace.initial_scores.len();
    let n = trace.n();
    let mut out = String::from("round,t_start,t_end");
    for c in 0..m {
        let _ = write!(out, ",score_{c}");
    }
    for v in 0..n {
        let _ = write!(out, ",target_{v}");
    }
    out.push('\n');
    for (i, r) in trace.rounds.iter().enumerate() {
        let _ = write!(out, "{},{},{}", i + 1, r.start, r.end);
        for s in &r.scores_at_end {
            let _ = write!(out, ",{s}");
        }
        for t in &r.targets {
            let _ = write!(out, ",{t}");
        }
        out.push('\n');
    }
    out
}

/// `f(v,c)` with one row per voter.
pub fn f_matrix_csv(trace: &ExecutionTrace) -> String {
    let m = trace.initial_scores.len();
    let mut out = String::from("voter");
    for c in 0..m {
        let _ = write!(out, ",c{c}");
    }
    out.push('\n');
    for (v, row) in trace.f.iter().enumerate() {
        let _ = write!(out, "{v}");
        for x in row {
            let _ = write!(out, ",{x}");
        }
        out.push('\n');
    }
    out
}

pub fn report_csv(reports: &[DistortionReport]) -> String {
    let mut out = String::from("candidate,value,reference\n");
    for r in reports {
        let _ = writeln!(out, "{},{},{}", r.candidate, r.value, r.reference_candidate);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    #[test]
    fn profile_round_trip() {
        let p = PreferenceProfile::new(3, vec![vec![2, 0, 1], vec![0, 1, 2]]).unwrap();
        assert_eq!(parse_profile(&write_profile(&p)).unwrap(), p);
    }

    #[test]
    fn profile_errors_name_lines() {
        let err = parse_profile("2 2\n0 1\n\n1 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 4, .. }), "{err}");
        let err = parse_profile("2 2\n0 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = parse_profile("2 2\n0 1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(matches!(
            parse_profile("").unwrap_err(),
            Error::Parse { line: 1, .. }
        ));
    }

    #[test]
    fn metric_round_trip() {
        let r = |x: i64| Rational::integer(x);
        let m = MetricInstance::from_line(&[r(0), ratio(1, 2)], &[r(1)]).unwrap();
        assert_eq!(parse_metric(&write_metric(&m)).unwrap(), m);
        let err = parse_metric("1 1\n0 1\n1 0 3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
        assert!(matches!(
            parse_metric("1 1\n0 1\n2 0\n").unwrap_err(),
            Error::InvalidMetric(_)
        ));
    }

    #[test]
    fn weights_round_trip() {
        let p = WeightVector::uniform(3);
        let q = WeightVector::new(vec![ratio(2, 3), ratio(1, 3)]).unwrap();
        assert_eq!(parse_weights(&write_weights(&p, &q), 3, 2).unwrap(), (p, q));
        let err = parse_weights("q: 1/2 1/2\np: 1/2 1/4\n", 2, 2).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(parse_weights("p: 1\n", 1, 1).is_err());
    }
}
