// SPDX-License-Identifier: Apache-2.0

//! Closed-form distortion guarantees of the boosted veto rule as functions of
//! the confidence `δ`, the prediction error `η` and the decisiveness `α`.

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::simveto::check_delta;

fn check_eta(eta: &Rational) -> Result<()> {
    if eta.is_negative() {
        return Err(Error::ParameterOutOfRange {
            name: "eta",
            value: eta.clone(),
            expected: "eta >= 0",
        });
    }
    Ok(())
}

fn check_alpha(alpha: &Rational) -> Result<()> {
    if alpha.is_negative() || *alpha > Rational::one() {
        return Err(Error::ParameterOutOfRange {
            name: "alpha",
            value: alpha.clone(),
            expected: "0 <= alpha <= 1",
        });
    }
    Ok(())
}

fn r(v: i64) -> Rational {
    Rational::integer(v)
}

/// `(3−δ)/(1+δ)`: distortion when the prediction is the optimum.
pub fn consistency_bound(delta: &Rational) -> Result<Rational> {
    check_delta(delta)?;
    Ok((r(3) - delta) / (r(1) + delta))
}

/// `(3+δ)/(1−δ)`: distortion for an arbitrary prediction.
pub fn robustness_bound(delta: &Rational) -> Result<Rational> {
    check_delta(delta)?;
    Ok((r(3) + delta) / (r(1) - delta))
}

/// `min{(3−δ+2δη)/(1+δ), (3+δ)/(1−δ)}`.
pub fn error_bound(delta: &Rational, eta: &Rational) -> Result<Rational> {
    check_eta(eta)?;
    let linear = (r(3) - delta + r(2) * delta * eta) / (r(1) + delta);
    Ok(linear.min(robustness_bound(delta)?))
}

/// Prediction error at which the two branches of [`error_bound`] meet:
/// `4/(1−δ)`.
pub fn error_crossover(delta: &Rational) -> Result<Rational> {
    check_delta(delta)?;
    Ok(r(4) / (r(1) - delta))
}

/// `(2+α−αδ)/(1+δ) + min{2δη/(1+δ), 8δ/((1+δ)(1−δ))}` on `α`-decisive
/// instances.
pub fn decisive_bound(delta: &Rational, alpha: &Rational, eta: &Rational) -> Result<Rational> {
    check_delta(delta)?;
    check_alpha(alpha)?;
    check_eta(eta)?;
    let one_plus = r(1) + delta;
    let base = (r(2) + alpha - alpha * delta) / &one_plus;
    let by_error = r(2) * delta * eta / &one_plus;
    let cap = r(8) * delta / (&one_plus * (r(1) - delta));
    Ok(base + by_error.min(cap))
}

/// Consistency attainable with robustness `β ≥ 3`: `(β+3)/(β−1)`.
pub fn pareto_consistency(beta: &Rational) -> Result<Rational> {
    if *beta < r(3) {
        return Err(Error::ParameterOutOfRange {
            name: "beta",
            value: beta.clone(),
            expected: "beta >= 3",
        });
    }
    Ok((beta + r(3)) / (beta - r(1)))
}

/// All guarantees at one parameter point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundSet {
    pub delta: Rational,
    pub alpha: Option<Rational>,
    pub eta: Option<Rational>,
    pub consistency: Rational,
    pub robustness: Rational,
    pub error_bound: Option<Rational>,
    pub decisive_bound: Option<Rational>,
}

impl BoundSet {
    pub fn new(delta: &Rational, alpha: Option<&Rational>, eta: Option<&Rational>) -> Result<Self> {
        let error = eta.map(|e| error_bound(delta, e)).transpose()?;
        let decisive = match (alpha, eta) {
            (Some(a), Some(e)) => Some(decisive_bound(delta, a, e)?),
            (Some(a), None) => Some(decisive_bound(delta, a, &Rational::zero())?),
            _ => None,
        };
        Ok(BoundSet {
            delta: delta.clone(),
            alpha: alpha.cloned(),
            eta: eta.cloned(),
            consistency: consistency_bound(delta)?,
            robustness: robustness_bound(delta)?,
            error_bound: error,
            decisive_bound: decisive,
        })
    }
}
