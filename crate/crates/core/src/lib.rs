// SPDX-License-Identifier: Apache-2.0

//! Exact-arithmetic toolkit for metric distortion of ordinal voting rules.

pub mod bounds;
pub mod distortion;
pub mod error;
pub mod flow;
pub mod generators;
pub mod io;
pub mod lp;
pub mod matching;
pub mod metric;
pub mod profile;
pub mod rational;
pub mod report;
pub mod simveto;
pub mod vdg;
pub mod weights;

pub use error::{Error, Result};
pub use metric::MetricInstance;
pub use profile::PreferenceProfile;
pub use rational::{ratio, Extended, Rational};
pub use weights::WeightVector;
