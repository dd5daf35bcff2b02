// SPDX-License-Identifier: Apache-2.0

use crate::rational::Rational;

/// Errors raised by the library. Each variant corresponds to a violated
/// precondition or an undefined quantity; none of them are transient.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid preference profile: {0}")]
    InvalidProfile(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("{kind} index {index} out of range (size {size})")]
    IndexOutOfRange {
        kind: &'static str,
        index: usize,
        size: usize,
    },

    #[error("parameter `{name}` = {value} out of range: {expected}")]
    ParameterOutOfRange {
        name: &'static str,
        value: Rational,
        expected: &'static str,
    },

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("degenerate instance: voter {voter} is at distance 0 from candidate {candidate} but not from its top choice")]
    DegenerateDecisiveness { voter: usize, candidate: usize },

    #[error("optimal social cost is zero; the quantity is undefined")]
    ZeroOptimalCost,

    #[error("reduction undefined: voter {voter} has zero weight")]
    ReductionUndefined { voter: usize },

    #[error("matching transfer undefined: candidate {candidate} has zero weight but is the top choice of voter {voter}")]
    TransferUndefined { voter: usize, candidate: usize },

    #[error("the metric is not aligned with the preference profile (voter {voter})")]
    UnalignedMetric { voter: usize },

    #[error("candidate {candidate} is not in the veto core")]
    NotInCore { candidate: usize },

    #[error("the given weights are not a fractional perfect matching: {0}")]
    InvalidMatching(String),

    #[error("no aligned metric makes candidate {predicted} optimal")]
    VacuousConsistency { predicted: usize },

    #[error("no aligned metric with positive optimal cost satisfies the restrictions")]
    NoFeasibleMetric,

    #[error("instance generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
