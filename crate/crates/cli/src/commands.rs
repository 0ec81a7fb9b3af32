//! The `analyze`, `compensate` and `waveform` subcommands as plain functions.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use gcga_power::{
    apparent_power, apply_compensator, design_fixed_pole_lc, instantaneous_power, magnitudes,
    optimal_shunt_capacitor, rqi, CompensationError, CompensatorDesign, PowerError, ShuntCapacitor, SignalError,
    Spectrum64,
};
use thiserror::Error;

use crate::circuit::{parse_circuit, CircuitFile, CompensatorSpec, InputError};
use crate::report::{
    entries_of, fmt_num, render_csv, render_json, render_table, AnalysisReport, CompensationReport, DesignReport,
    PowerReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// single shunt capacitor of optimal size
    Cap,
    /// fixed-pole series-LC branches, one per common harmonic
    Lc,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Power(#[from] PowerError),
    #[error(transparent)]
    Compensation(#[from] CompensationError),
}

impl CliError {
    /// 2 for bad input, 3 for a failed computation, 4 for an unrealizable design.
    pub fn exit_code(&self) -> i32 {
        use CompensationError as C;
        match self {
            CliError::Io { .. } | CliError::Input(_) | CliError::Signal(_) | CliError::Usage(_) => 2,
            CliError::Power(PowerError::Signal(_)) => 2,
            CliError::Power(_) => 3,
            CliError::Compensation(e) => match e {
                C::Signal(_) | C::InvalidElement(_) | C::PoleCountMismatch { .. } => 2,
                C::Infeasible { .. }
                | C::PoleAtHarmonic { .. }
                | C::SingularAdmittance { .. }
                | C::SingularDesign
                | C::InvalidPole { .. }
                | C::NoCommonHarmonics => 4,
            },
        }
    }
}

pub fn load(path: &Path) -> Result<CircuitFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })?;
    Ok(parse_circuit(&text)?)
}

fn power_report(u: &Spectrum64, i: &Spectrum64) -> Result<PowerReport, CliError> {
    let pm = apparent_power(u, i)?;
    let summary = magnitudes(&pm, u, i)?;
    // δ and PF only exist when something flows; a load delivering power is an error
    let index = if summary.apparent > 0.0 { Some(rqi(&pm, &summary)?) } else { None };
    Ok(PowerReport::build(u, i, &pm, &summary, index.as_ref()))
}

pub fn analyze(circuit: &CircuitFile) -> Result<AnalysisReport, CliError> {
    let u = circuit.voltage_spectrum()?;
    let i = circuit.current_spectrum()?;
    Ok(AnalysisReport {
        input: circuit.clone(),
        fundamental_rad_s: circuit.omega(),
        power: power_report(&u, &i)?,
        compensation: None,
    })
}

/// `mode` overrides the file's compensator section. Without either, the
/// optimal capacitor is sized.
pub fn compensate(circuit: &CircuitFile, mode: Option<Mode>, poles: Option<&[f64]>) -> Result<AnalysisReport, CliError> {
    let mut report = analyze(circuit)?;
    let u = circuit.voltage_spectrum()?;
    let i = circuit.current_spectrum()?;
    let w = circuit.omega();

    let file_poles = match &circuit.compensator {
        Some(CompensatorSpec::Lc { pole_multipliers }) => Some(pole_multipliers.as_slice()),
        _ => None,
    };
    let mode = mode.or(match (&circuit.compensator, poles) {
        (_, Some(_)) | (Some(CompensatorSpec::Lc { .. }), None) => Some(Mode::Lc),
        _ => None,
    });

    let (design, design_report) = match mode {
        Some(Mode::Lc) => {
            let ks = poles
                .or(file_poles)
                .ok_or_else(|| CliError::Usage("lc mode needs pole multipliers (--poles or the file)".into()))?;
            let d = design_fixed_pole_lc(&u, &i, ks)?;
            let r = DesignReport::from_design(&d, Some(ks), false);
            (d, r)
        }
        Some(Mode::Cap) => {
            let c = optimal_shunt_capacitor(&u, &i)?;
            let d = CompensatorDesign::capacitor(c, w);
            let r = DesignReport::from_design(&d, None, true);
            (d, r)
        }
        None => match &circuit.compensator {
            Some(CompensatorSpec::Capacitor { farads }) => {
                let d = CompensatorDesign::capacitor(ShuntCapacitor::new(*farads)?, w);
                let r = DesignReport::from_design(&d, None, false);
                (d, r)
            }
            _ => {
                let d = CompensatorDesign::capacitor(optimal_shunt_capacitor(&u, &i)?, w);
                let r = DesignReport::from_design(&d, None, true);
                (d, r)
            }
        },
    };

    let after = apply_compensator(&u, &i, &design)?;
    report.compensation = Some(CompensationReport {
        design: design_report,
        compensated_current: entries_of(&after),
        after: power_report(&u, &after)?,
    });
    Ok(report)
}

pub fn render(report: &AnalysisReport, format: Format) -> String {
    match format {
        Format::Table => render_table(report),
        Format::Json => render_json(report),
        Format::Csv => render_csv(report),
    }
}

/// `samples` evenly spaced points over `cycles` periods, starting at t = 0
/// and excluding the end point. Columns are `t,u,i,p`.
pub fn waveform(circuit: &CircuitFile, samples: usize, cycles: u32) -> Result<String, CliError> {
    if samples < 2 {
        return Err(CliError::Usage(format!("--samples must be at least 2, got {samples}")));
    }
    if cycles < 1 {
        return Err(CliError::Usage("--cycles must be at least 1".into()));
    }
    let u = circuit.voltage_spectrum()?;
    let i = circuit.current_spectrum()?;
    let span = f64::from(cycles) * u.period();
    let mut out = String::from("t,u,i,p\n");
    for k in 0..samples {
        let t = k as f64 * span / samples as f64;
        let p = instantaneous_power(&u, &i, t)?;
        let _ = writeln!(out, "{},{},{},{}", fmt_num(t), fmt_num(u.sample(t)), fmt_num(i.sample(t)), fmt_num(p));
    }
    Ok(out)
}

pub fn run_analyze(path: &Path, format: Format) -> Result<String, CliError> {
    Ok(render(&analyze(&load(path)?)?, format))
}

pub fn run_compensate(path: &Path, mode: Option<Mode>, poles: Option<&[f64]>, format: Format) -> Result<String, CliError> {
    Ok(render(&compensate(&load(path)?, mode, poles)?, format))
}

pub fn run_waveform(path: &Path, samples: usize, cycles: u32) -> Result<String, CliError> {
    waveform(&load(path)?, samples, cycles)
}
