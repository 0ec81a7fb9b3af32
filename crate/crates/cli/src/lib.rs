//! Command-line front end: circuit files in, power reports out.

// `!(x > 0)` rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circuit;
pub mod commands;
pub mod report;

pub use circuit::{parse_circuit, CircuitFile, CompensatorSpec, HarmonicEntry, InputError};
pub use commands::{analyze, compensate, render, waveform, CliError, Format, Mode};
pub use report::{AnalysisReport, CompensationReport, DesignReport, PowerReport};
