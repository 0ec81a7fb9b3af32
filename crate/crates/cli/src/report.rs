//! Analysis reports and their three renderings: a human table, JSON and CSV.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use gcga_power::{
    CompensatorDesign64, DistortionKind, HarmonicPartition, PowerMultivector64, PowerSummary64, Rqi64, ShuntElement,
    Spectrum64,
};
use serde::{Deserialize, Serialize};

use crate::circuit::{CircuitFile, HarmonicEntry};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TermKind {
    Linear,
    Nonlinear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PartitionReport {
    pub common: Vec<u32>,
    pub voltage_only: Vec<u32>,
    pub current_only: Vec<u32>,
}

/// Direction of the active power of one harmonic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PowerFlow {
    /// P_n >= 0: absorbed by the load
    Load,
    /// P_n < 0: injected back toward the supply
    Source,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicPowerReport {
    pub order: u32,
    pub active_w: f64,
    pub reactive_var: f64,
    pub flow: PowerFlow,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionTermReport {
    /// Orientation as in `σ_p σ_q`
    pub pair: [u32; 2],
    pub re_va: f64,
    pub im_va: f64,
    pub magnitude_va: f64,
    pub kind: TermKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RqiTermReport {
    pub pair: [u32; 2],
    pub re: f64,
    pub im: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RqiReport {
    pub scalar_re: f64,
    pub scalar_im: f64,
    pub terms: Vec<RqiTermReport>,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerReport {
    pub voltage_rms_v: f64,
    pub current_rms_a: f64,
    pub active_w: f64,
    pub reactive_signed_var: f64,
    pub reactive_abs_var: f64,
    pub distortion_va: f64,
    pub apparent_va: f64,
    pub apparent_squared_va2: f64,
    /// Absent when the apparent power is zero.
    pub power_factor: Option<f64>,
    pub rqi: Option<RqiReport>,
    pub partition: PartitionReport,
    pub harmonics: Vec<HarmonicPowerReport>,
    pub distortion_terms: Vec<DistortionTermReport>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BranchReport {
    pub pole_multiplier: f64,
    pub pole_rad_s: f64,
    pub inductance_h: f64,
    pub capacitance_f: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DesignReport {
    Capacitor { capacitance_f: f64, optimal: bool },
    Lc { branches: Vec<BranchReport> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompensationReport {
    pub design: DesignReport,
    pub compensated_current: Vec<HarmonicEntry>,
    pub after: PowerReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub input: CircuitFile,
    pub fundamental_rad_s: f64,
    pub power: PowerReport,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub compensation: Option<CompensationReport>,
}

fn sorted(set: &BTreeSet<u32>) -> Vec<u32> {
    set.iter().copied().collect()
}

impl PartitionReport {
    pub fn from_partition(p: &HarmonicPartition) -> Self {
        PartitionReport {
            common: sorted(&p.common),
            voltage_only: sorted(&p.voltage_only),
            current_only: sorted(&p.current_only),
        }
    }
}

impl PowerReport {
    pub fn build(
        u: &Spectrum64,
        i: &Spectrum64,
        pm: &PowerMultivector64,
        summary: &PowerSummary64,
        rqi: Option<&Rqi64>,
    ) -> Self {
        PowerReport {
            voltage_rms_v: u.rms(),
            current_rms_a: i.rms(),
            active_w: summary.active,
            reactive_signed_var: summary.reactive_signed,
            reactive_abs_var: summary.reactive_abs,
            distortion_va: summary.distortion,
            apparent_va: summary.apparent,
            apparent_squared_va2: summary.apparent_squared,
            power_factor: summary.power_factor().ok(),
            rqi: rqi.map(|r| RqiReport {
                scalar_re: r.index.scalar.re,
                scalar_im: r.index.scalar.im,
                terms: r
                    .index
                    .terms
                    .iter()
                    .map(|t| RqiTermReport { pair: [t.pair.0, t.pair.1], re: t.value.re, im: t.value.im })
                    .collect(),
                magnitude: r.magnitude,
            }),
            partition: PartitionReport::from_partition(&pm.partition),
            harmonics: pm
                .harmonics
                .iter()
                .map(|(&order, s)| HarmonicPowerReport {
                    order,
                    active_w: s.re,
                    reactive_var: s.im,
                    flow: if s.re < 0.0 { PowerFlow::Source } else { PowerFlow::Load },
                })
                .collect(),
            distortion_terms: pm
                .terms
                .iter()
                .map(|t| DistortionTermReport {
                    pair: [t.pair.0, t.pair.1],
                    re_va: t.value.re,
                    im_va: t.value.im,
                    magnitude_va: t.magnitude(),
                    kind: match t.kind {
                        DistortionKind::Linear => TermKind::Linear,
                        DistortionKind::Nonlinear => TermKind::Nonlinear,
                    },
                })
                .collect(),
        }
    }

    pub fn term(&self, p: u32, q: u32) -> Option<&DistortionTermReport> {
        self.distortion_terms.iter().find(|t| t.pair == [p, q])
    }
}

impl DesignReport {
    pub fn from_design(design: &CompensatorDesign64, poles: Option<&[f64]>, optimal: bool) -> Self {
        let branches: Vec<BranchReport> = design
            .branches()
            .enumerate()
            .map(|(k, b)| BranchReport {
                pole_multiplier: poles.and_then(|p| p.get(k).copied()).unwrap_or(b.pole() / design.fundamental),
                pole_rad_s: b.pole(),
                inductance_h: b.inductance,
                capacitance_f: b.capacitance,
            })
            .collect();
        if branches.is_empty() {
            let capacitance_f = design
                .elements
                .iter()
                .map(|e| match e {
                    ShuntElement::Capacitor(c) => c.capacitance,
                    ShuntElement::Branch(_) => 0.0,
                })
                .sum();
            DesignReport::Capacitor { capacitance_f, optimal }
        } else {
            DesignReport::Lc { branches }
        }
    }
}

pub fn entries_of(s: &Spectrum64) -> Vec<HarmonicEntry> {
    s.components()
        .into_iter()
        .map(|c| HarmonicEntry { order: c.order, rms: c.rms, phase_deg: c.phase.to_degrees() })
        .collect()
}

/// Shortest round-trip decimal, padded to at least six significant digits.
pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let mut s = format!("{x}");
    let digits: String = s.chars().filter(|c| c.is_ascii_digit()).collect();
    let sig = digits.trim_start_matches('0').len();
    let sig = if sig == 0 { 1 } else { sig };
    if sig < 6 {
        if !s.contains('.') {
            s.push('.');
        }
        let pad = if x == 0.0 { 5 } else { 6 - sig };
        s.extend(std::iter::repeat_n('0', pad));
    }
    s
}

fn opt(x: Option<f64>) -> String {
    x.map(fmt_num).unwrap_or_default()
}

pub fn render_json(report: &AnalysisReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

fn csv_power_rows(out: &mut String, prefix: &str, p: &PowerReport) {
    let mut row = |q: &str, re: String, im: String, mag: String, unit: &str| {
        let _ = writeln!(out, "{prefix}{q},{re},{im},{mag},{unit}");
    };
    let real = |x: f64| (fmt_num(x), fmt_num(0.0), fmt_num(x.abs()));
    let (a, b, c) = real(p.voltage_rms_v);
    row("U_rms", a, b, c, "V");
    let (a, b, c) = real(p.current_rms_a);
    row("I_rms", a, b, c, "A");
    row("S0", fmt_num(p.active_w), fmt_num(p.reactive_signed_var), fmt_num(p.active_w.hypot(p.reactive_signed_var)), "VA");
    let (a, b, c) = real(p.active_w);
    row("P", a, b, c, "W");
    let (a, b, c) = real(p.reactive_signed_var);
    row("Q", a, b, c, "var");
    let (a, b, c) = real(p.distortion_va);
    row("D", a, b, c, "VA");
    let (a, b, c) = real(p.apparent_va);
    row("S", a, b, c, "VA");
    let (a, b, c) = real(p.apparent_squared_va2);
    row("S2", a, b, c, "VA2");
    row("PF", opt(p.power_factor), String::new(), opt(p.power_factor.map(f64::abs)), "1");
    row("delta", opt(p.rqi.as_ref().map(|r| r.magnitude)), String::new(), opt(p.rqi.as_ref().map(|r| r.magnitude)), "1");
    for h in &p.harmonics {
        row(
            &format!("S0_{}", h.order),
            fmt_num(h.active_w),
            fmt_num(h.reactive_var),
            fmt_num(h.active_w.hypot(h.reactive_var)),
            "VA",
        );
    }
    for t in &p.distortion_terms {
        row(&format!("D_{}_{}", t.pair[0], t.pair[1]), fmt_num(t.re_va), fmt_num(t.im_va), fmt_num(t.magnitude_va), "VA");
    }
}

pub fn render_csv(report: &AnalysisReport) -> String {
    let mut out = String::from("quantity,re,im,magnitude,unit\n");
    csv_power_rows(&mut out, "", &report.power);
    if let Some(c) = &report.compensation {
        match &c.design {
            DesignReport::Capacitor { capacitance_f, .. } => {
                let _ = writeln!(out, "C,{},{},{},F", fmt_num(*capacitance_f), fmt_num(0.0), fmt_num(*capacitance_f));
            }
            DesignReport::Lc { branches } => {
                for (k, b) in branches.iter().enumerate() {
                    let n = k + 1;
                    let _ = writeln!(out, "L_{n},{},{},{},H", fmt_num(b.inductance_h), fmt_num(0.0), fmt_num(b.inductance_h));
                    let _ = writeln!(out, "C_{n},{},{},{},F", fmt_num(b.capacitance_f), fmt_num(0.0), fmt_num(b.capacitance_f));
                }
            }
        }
        csv_power_rows(&mut out, "after_", &c.after);
    }
    out
}

fn f2(x: f64) -> String {
    format!("{x:.2}")
}

fn complex2(re: f64, im: f64) -> String {
    let sign = if im < 0.0 { '-' } else { '+' };
    format!("{re:.2} {sign} j{:.2}", im.abs())
}

fn power_block(out: &mut String, p: &PowerReport) {
    let _ = writeln!(out, "  U rms        {:>14} V", f2(p.voltage_rms_v));
    let _ = writeln!(out, "  I rms        {:>14} A", f2(p.current_rms_a));
    let _ = writeln!(out, "  P            {:>14} W", f2(p.active_w));
    let _ = writeln!(out, "  Q            {:>14} var  (signed {})", f2(p.reactive_abs_var), f2(p.reactive_signed_var));
    let _ = writeln!(out, "  D            {:>14} VA", f2(p.distortion_va));
    let _ = writeln!(out, "  |S|          {:>14} VA", f2(p.apparent_va));
    let _ = writeln!(out, "  |S|^2        {:>14.6e} VA^2", p.apparent_squared_va2);
    let _ = writeln!(out, "  |delta|      {:>14}", p.rqi.as_ref().map(|r| f2(r.magnitude)).unwrap_or_else(|| "-".into()));
    let _ = writeln!(out, "  PF           {:>14}", p.power_factor.map(f2).unwrap_or_else(|| "-".into()));
    if !p.harmonics.is_empty() {
        let _ = writeln!(out, "  per harmonic (P_n + jQ_n):");
        for h in &p.harmonics {
            let flow = match h.flow {
                PowerFlow::Load => "load",
                PowerFlow::Source => "source",
            };
            let _ = writeln!(out, "    n={:<3} {:>28} VA  [{flow}]", h.order, complex2(h.active_w, h.reactive_var));
        }
    }
    if p.distortion_terms.is_empty() {
        let _ = writeln!(out, "  distortion terms: none");
    } else {
        let _ = writeln!(out, "  distortion terms:");
        for t in &p.distortion_terms {
            let kind = match t.kind {
                TermKind::Linear => "linear",
                TermKind::Nonlinear => "nonlinear",
            };
            let _ = writeln!(
                out,
                "    D{},{:<4} {:>28} VA  |{}|  {kind}",
                t.pair[0],
                t.pair[1],
                complex2(t.re_va, t.im_va),
                f2(t.magnitude_va)
            );
        }
    }
}

fn comparison(out: &mut String, before: &PowerReport, after: &PowerReport) {
    let _ = writeln!(out, "{:<12}{:>14}{:>14}", "", "before", "after");
    let mut line = |name: &str, a: String, b: String| {
        let _ = writeln!(out, "{name:<12}{a:>14}{b:>14}");
    };
    line("I_Load", f2(before.current_rms_a), f2(after.current_rms_a));
    line("P", f2(before.active_w), f2(after.active_w));
    line("Q", f2(before.reactive_abs_var), f2(after.reactive_abs_var));
    let pairs: BTreeSet<[u32; 2]> =
        before.distortion_terms.iter().chain(&after.distortion_terms).map(|t| t.pair).collect();
    for pr in pairs {
        let mag = |r: &PowerReport| r.term(pr[0], pr[1]).map_or(0.0, |t| t.magnitude_va);
        line(&format!("D{},{}", pr[0], pr[1]), f2(mag(before)), f2(mag(after)));
    }
    line("S", f2(before.apparent_va), f2(after.apparent_va));
    let d = |r: &PowerReport| r.rqi.as_ref().map(|x| f2(x.magnitude)).unwrap_or_else(|| "-".into());
    line("|delta|", d(before), d(after));
    let pf = |r: &PowerReport| r.power_factor.map(f2).unwrap_or_else(|| "-".into());
    line("PF", pf(before), pf(after));
}

pub fn render_table(report: &AnalysisReport) -> String {
    let mut out = String::new();
    let p = &report.power.partition;
    let _ = writeln!(
        out,
        "fundamental {} Hz (ω = {:.4} rad/s)",
        report.input.fundamental_hz, report.fundamental_rad_s
    );
    let _ = writeln!(out, "harmonics  N = {:?}  L = {:?}  M = {:?}", p.common, p.voltage_only, p.current_only);
    let _ = writeln!(out);
    let _ = writeln!(out, "power multivector:");
    power_block(&mut out, &report.power);
    if let Some(c) = &report.compensation {
        let _ = writeln!(out);
        match &c.design {
            DesignReport::Capacitor { capacitance_f, optimal } => {
                let tag = if *optimal { "optimal " } else { "" };
                let _ = writeln!(out, "{tag}shunt capacitor: C = {:.2} uF", capacitance_f * 1e6);
            }
            DesignReport::Lc { branches } => {
                let _ = writeln!(out, "fixed-pole LC branches:");
                for (k, b) in branches.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "  branch {}: pole {:.2}ω  L = {:.2} mH  C = {:.2} uF",
                        k + 1,
                        b.pole_multiplier,
                        b.inductance_h * 1e3,
                        b.capacitance_f * 1e6
                    );
                }
            }
        }
        let _ = writeln!(out);
        let _ = writeln!(out, "after compensation:");
        power_block(&mut out, &c.after);
        let _ = writeln!(out);
        comparison(&mut out, &report.power, &c.after);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_keep_six_significant_digits() {
        assert_eq!(fmt_num(1000.0), "1000.00");
        assert_eq!(fmt_num(0.0), "0.00000");
        assert_eq!(fmt_num(-0.5), "-0.500000");
        assert_eq!(fmt_num(5196.152422706632), "5196.152422706632");
        assert_eq!(fmt_num(123456.0), "123456");
        assert_eq!(fmt_num(0.00012), "0.000120000");
        for x in [1000.0, -0.5, 3.653349169824142e-5, 0.0, 54e6] {
            assert_eq!(fmt_num(x).parse::<f64>().unwrap(), x);
        }
    }

    #[test]
    fn complex_formatting() {
        assert_eq!(complex2(-3000.0, 1732.05), "-3000.00 + j1732.05");
        assert_eq!(complex2(1.0, -2.0), "1.00 - j2.00");
    }
}
