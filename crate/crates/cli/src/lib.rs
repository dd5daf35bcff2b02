// SPDX-License-Identifier: Apache-2.0

//! Experiment harness behind the `vetolab` binary: seeded sweeps, bound
//! curves, invariant suites and their CSV, SVG and JSON output.

pub mod app;
pub mod curves;
pub mod numeric;
pub mod sampling;
pub mod suites;
pub mod svg;
pub mod sweeps;
pub mod table;
