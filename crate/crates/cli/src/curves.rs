// SPDX-License-Identifier: Apache-2.0

//! Closed-form guarantee curves, evaluated exactly on rational grids.

use anyhow::Result;
use vetolab::bounds::{consistency_bound, decisive_bound, error_bound, robustness_bound, BoundSet};
use vetolab::Rational;

use crate::svg::{line_chart, Series};
use crate::sweeps::decisive_robustness;
use crate::table::{Row, Table};

/// Which guarantee to tabulate against which parameter.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Curve {
    /// Consistency and robustness as functions of `δ`.
    Delta,
    /// The error bound as a function of `η`, one curve per `δ`.
    Eta,
    /// Decisive consistency and robustness as functions of `δ`, one pair per `α`.
    Alpha,
}

pub fn delta_curve(grid: &[Rational]) -> Result<Table> {
    let mut t = Table::new();
    for d in grid {
        t.push(
            Row::new()
                .rational("delta", "1", d)
                .rational("consistency_bound", "ratio", &consistency_bound(d)?)
                .rational("robustness_bound", "ratio", &robustness_bound(d)?),
        );
    }
    Ok(t)
}

pub fn eta_curve(deltas: &[Rational], grid: &[Rational]) -> Result<Table> {
    let mut t = Table::new();
    for d in deltas {
        for eta in grid {
            t.push(
                Row::new()
                    .rational("delta", "1", d)
                    .rational("eta", "1", eta)
                    .rational("error_bound", "ratio", &error_bound(d, eta)?),
            );
        }
    }
    Ok(t)
}

pub fn alpha_curve(alphas: &[Rational], grid: &[Rational]) -> Result<Table> {
    let mut t = Table::new();
    for a in alphas {
        for d in grid {
            t.push(
                Row::new()
                    .rational("alpha", "1", a)
                    .rational("delta", "1", d)
                    .rational(
                        "consistency_bound",
                        "ratio",
                        &decisive_bound(d, a, &Rational::zero())?,
                    )
                    .rational("robustness_bound", "ratio", &decisive_robustness(d, a)?),
            );
        }
    }
    Ok(t)
}

/// Every guarantee at one parameter point.
pub fn point(delta: &Rational, alpha: Option<&Rational>, eta: Option<&Rational>) -> Result<Table> {
    let b = BoundSet::new(delta, alpha, eta)?;
    let mut row = Row::new()
        .rational("delta", "1", &b.delta)
        .rational("consistency_bound", "ratio", &b.consistency)
        .rational("robustness_bound", "ratio", &b.robustness);
    if let (Some(eta), Some(e)) = (&b.eta, &b.error_bound) {
        row = row
            .rational("eta", "1", eta)
            .rational("error_bound", "ratio", e);
    }
    if let (Some(alpha), Some(d)) = (&b.alpha, &b.decisive_bound) {
        row = row
            .rational("alpha", "1", alpha)
            .rational("decisive_bound", "ratio", d);
    }
    let mut t = Table::new();
    t.push(row);
    Ok(t)
}

/// Chart of a table built by the function matching `curve`.
pub fn chart(curve: Curve, table: &Table) -> String {
    let col = |name: &str| {
        table
            .column(name)
            .expect("curve tables carry their columns")
    };
    let num = |row: &[String], c: usize| row[c].parse::<f64>().unwrap_or(f64::NAN);
    let group =
        |key: Option<usize>, x: usize, y: usize, label: &str, dashed: bool| -> Vec<Series> {
            let mut keys: Vec<&str> = Vec::new();
            for r in table.rows() {
                let k = key.map_or("", |c| r[c].as_str());
                if !keys.contains(&k) {
                    keys.push(k);
                }
            }
            keys.into_iter()
                .map(|k| {
                    let pts = table
                        .rows()
                        .iter()
                        .filter(|r| key.map_or("", |c| r[c].as_str()) == k)
                        .map(|r| (num(r, x), num(r, y)))
                        .collect();
                    let name = if k.is_empty() {
                        label.to_string()
                    } else {
                        format!("{label}, {k}")
                    };
                    let s = Series::new(name, pts);
                    if dashed {
                        s.dashed()
                    } else {
                        s
                    }
                })
                .collect()
        };
    match curve {
        Curve::Delta => {
            let x = col("delta");
            let mut s = group(None, x, col("consistency_bound"), "consistency", false);
            s.extend(group(None, x, col("robustness_bound"), "robustness", false));
            line_chart(
                "Consistency and robustness bounds",
                "delta",
                "distortion",
                &s,
            )
        }
        Curve::Eta => {
            let s = group(
                Some(col("delta_exact")),
                col("eta"),
                col("error_bound"),
                "delta",
                false,
            );
            line_chart("Error bound", "eta", "distortion", &s)
        }
        Curve::Alpha => {
            let key = Some(col("alpha_exact"));
            let x = col("delta");
            let mut s = group(
                key,
                x,
                col("consistency_bound"),
                "consistency, alpha",
                false,
            );
            s.extend(group(
                key,
                x,
                col("robustness_bound"),
                "robustness, alpha",
                true,
            ));
            line_chart("Decisive bounds", "delta", "distortion", &s)
        }
    }
}
