//! Circuit description files.
//!
//! TOML with the fundamental frequency in hertz, one array of tables per
//! signal and an optional compensator:
//!
//! ```toml
//! fundamental_hz = 50.0
//!
//! [[voltage]]
//! order = 1
//! rms = 200.0
//! phase_deg = 0.0
//!
//! [[current]]
//! order = 1
//! rms = 20.0
//! phase_deg = -45.0
//!
//! [compensator]
//! type = "lc"                      # or "capacitor" with `farads = ...`
//! pole_multipliers = [1.2, 2.5, 4.5]
//! ```
//!
//! Phases are sine-referenced degrees; they are converted to radians when
//! spectra are built.

use std::collections::BTreeSet;
use std::f64::consts::TAU;

use gcga_power::{cft, HarmonicComponent, SignalKind, Spectrum64};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InputError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    #[error("fundamental_hz must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("{signal} harmonic order must be a positive integer, got {order}")]
    InvalidOrder { signal: &'static str, order: u32 },
    #[error("duplicate {signal} harmonic order {order}")]
    DuplicateOrder { signal: &'static str, order: u32 },
    #[error("{signal} harmonic {order}: rms must be positive, got {rms}")]
    NonPositiveRms { signal: &'static str, order: u32, rms: f64 },
    #[error("{signal} harmonic {order}: phase_deg must be finite")]
    NonFinitePhase { signal: &'static str, order: u32 },
    #[error("unknown compensator type `{0}` (expected `capacitor` or `lc`)")]
    UnknownCompensator(String),
    #[error("invalid compensator: {0}")]
    InvalidCompensator(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarmonicEntry {
    pub order: u32,
    pub rms: f64,
    pub phase_deg: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum CompensatorSpec {
    Capacitor { farads: f64 },
    Lc { pole_multipliers: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CircuitFile {
    pub fundamental_hz: f64,
    pub voltage: Vec<HarmonicEntry>,
    pub current: Vec<HarmonicEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compensator: Option<CompensatorSpec>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCircuit {
    fundamental_hz: f64,
    #[serde(default)]
    voltage: Vec<HarmonicEntry>,
    #[serde(default)]
    current: Vec<HarmonicEntry>,
    compensator: Option<RawCompensator>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCompensator {
    #[serde(rename = "type")]
    kind: String,
    farads: Option<f64>,
    pole_multipliers: Option<Vec<f64>>,
}

fn line_col(text: &str, offset: usize) -> (usize, usize) {
    let before = &text[..offset.min(text.len())];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

pub fn parse_circuit(text: &str) -> Result<CircuitFile, InputError> {
    let raw: RawCircuit = toml::from_str(text).map_err(|e| {
        let (line, column) = e.span().map_or((1, 1), |s| line_col(text, s.start));
        InputError::Syntax { line, column, message: e.message().to_string() }
    })?;

    if !(raw.fundamental_hz > 0.0) || !raw.fundamental_hz.is_finite() {
        return Err(InputError::NonPositiveFrequency(raw.fundamental_hz));
    }
    validate_entries("voltage", &raw.voltage)?;
    validate_entries("current", &raw.current)?;

    let compensator = match raw.compensator {
        None => None,
        Some(c) => Some(match c.kind.as_str() {
            "capacitor" => {
                if c.pole_multipliers.is_some() {
                    return Err(InputError::InvalidCompensator("capacitor takes no pole_multipliers".into()));
                }
                let farads = c.farads.ok_or_else(|| InputError::InvalidCompensator("capacitor needs `farads`".into()))?;
                if !(farads >= 0.0) || !farads.is_finite() {
                    return Err(InputError::InvalidCompensator(format!("farads must be >= 0, got {farads}")));
                }
                CompensatorSpec::Capacitor { farads }
            }
            "lc" => {
                if c.farads.is_some() {
                    return Err(InputError::InvalidCompensator("lc takes no `farads`".into()));
                }
                let poles = c
                    .pole_multipliers
                    .ok_or_else(|| InputError::InvalidCompensator("lc needs `pole_multipliers`".into()))?;
                CompensatorSpec::Lc { pole_multipliers: poles }
            }
            other => return Err(InputError::UnknownCompensator(other.to_string())),
        }),
    };

    Ok(CircuitFile { fundamental_hz: raw.fundamental_hz, voltage: raw.voltage, current: raw.current, compensator })
}

fn validate_entries(signal: &'static str, entries: &[HarmonicEntry]) -> Result<(), InputError> {
    let mut seen = BTreeSet::new();
    for e in entries {
        if e.order == 0 {
            return Err(InputError::InvalidOrder { signal, order: e.order });
        }
        if !seen.insert(e.order) {
            return Err(InputError::DuplicateOrder { signal, order: e.order });
        }
        if !(e.rms > 0.0) || !e.rms.is_finite() {
            return Err(InputError::NonPositiveRms { signal, order: e.order, rms: e.rms });
        }
        if !e.phase_deg.is_finite() {
            return Err(InputError::NonFinitePhase { signal, order: e.order });
        }
    }
    Ok(())
}

impl CircuitFile {
    /// ω = 2π·f
    pub fn omega(&self) -> f64 {
        TAU * self.fundamental_hz
    }

    pub fn voltage_spectrum(&self) -> Result<Spectrum64, gcga_power::SignalError> {
        spectrum(&self.voltage, SignalKind::Voltage, self.omega())
    }

    pub fn current_spectrum(&self) -> Result<Spectrum64, gcga_power::SignalError> {
        spectrum(&self.current, SignalKind::Current, self.omega())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("circuit file serializes")
    }
}

fn spectrum(entries: &[HarmonicEntry], kind: SignalKind, omega: f64) -> Result<Spectrum64, gcga_power::SignalError> {
    let comps: Vec<_> = entries.iter().map(|e| HarmonicComponent::from_degrees(e.order, e.rms, e.phase_deg)).collect();
    cft(&comps, kind, omega)
}
