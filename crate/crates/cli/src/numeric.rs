// SPDX-License-Identifier: Apache-2.0

//! Command-line number syntax: rationals as `a/b` or integers, lists
//! separated by commas.

use vetolab::{Extended, Rational};

/// Significant digits of the decimal CSV columns.
pub const DIGITS: usize = 12;

pub fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse()
        .map_err(|_| format!("`{s}` is not a rational (expected `a/b` or an integer)"))
}

pub fn parse_list(s: &str) -> Result<Vec<Rational>, String> {
    let values: Vec<Rational> = s
        .split(',')
        .map(|x| parse_rational(x.trim()))
        .collect::<Result<_, _>>()?;
    if values.is_empty() {
        return Err("empty list".into());
    }
    Ok(values)
}

pub fn decimal(x: &Rational) -> String {
    x.to_decimal(DIGITS)
}

pub fn decimal_ext(x: &Extended) -> String {
    x.to_decimal(DIGITS)
}

pub fn to_f64_ext(x: &Extended) -> Option<f64> {
    match x {
        Extended::Finite(r) => Some(r.to_f64()),
        Extended::Infinite => None,
    }
}

/// `{0, 1/k, …, (k−1)/k}`.
pub fn unit_grid(k: i64) -> Vec<Rational> {
    (0..k).map(|i| Rational::new(i, k)).collect()
}
