//! Passive shunt compensation at a stiff bus.
//!
//! Elements are lossless, so every admittance is purely imaginary and
//! compensation never changes the active power. A compensated source current
//! is `Ī'_n = Ī_n + Y(n)·Ū_n` for each voltage harmonic.

use std::collections::BTreeSet;

use num_complex::Complex;
use num_traits::Zero;
use thiserror::Error;

use crate::linalg;
use crate::scalar::Real;
use crate::signal::{partition, SignalError, SignalKind, Spectrum};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CompensationError {
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error("invalid element value: {0}")]
    InvalidElement(String),
    #[error("harmonic {order} sits on the branch pole (admittance is singular)")]
    SingularAdmittance { order: u32 },
    #[error("no harmonic is present in both voltage and current")]
    NoCommonHarmonics,
    #[error("expected {expected} pole multipliers (one per common harmonic), got {got}")]
    PoleCountMismatch { expected: usize, got: usize },
    #[error("pole multiplier {multiplier} is not a positive finite number")]
    InvalidPole { multiplier: f64 },
    #[error("pole multiplier {multiplier} coincides with present harmonic {order}")]
    PoleAtHarmonic { multiplier: f64, order: u32 },
    #[error("branch sizing system is singular for the chosen poles")]
    SingularDesign,
    #[error("branch {branch} needs negative capacitance {capacitance} F; no passive design with these poles")]
    Infeasible { branch: usize, capacitance: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShuntCapacitor<T: Real> {
    /// F
    pub capacitance: T,
}

impl<T: Real> ShuntCapacitor<T> {
    pub fn new(capacitance: T) -> Result<Self, CompensationError> {
        if !(capacitance >= T::zero()) || !capacitance.is_finite() {
            return Err(CompensationError::InvalidElement(format!("capacitance {capacitance} must be >= 0")));
        }
        Ok(ShuntCapacitor { capacitance })
    }
}

/// Series L–C branch connected in shunt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LcBranch<T: Real> {
    /// H
    pub inductance: T,
    /// F
    pub capacitance: T,
}

impl<T: Real> LcBranch<T> {
    pub fn new(inductance: T, capacitance: T) -> Result<Self, CompensationError> {
        let ok = |v: T| v > T::zero() && v.is_finite();
        if !ok(inductance) || !ok(capacitance) {
            return Err(CompensationError::InvalidElement(format!(
                "branch needs L > 0 and C > 0, got L = {inductance}, C = {capacitance}"
            )));
        }
        Ok(LcBranch { inductance, capacitance })
    }

    /// Series resonance `1/√(LC)` in rad/s, where the shunt admittance has its
    /// pole.
    pub fn pole(&self) -> T {
        T::one() / (self.inductance * self.capacitance).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShuntElement<T: Real> {
    Capacitor(ShuntCapacitor<T>),
    Branch(LcBranch<T>),
}

/// Admittance of one element at harmonic `order` of fundamental `omega`.
pub fn admittance<T: Real>(element: &ShuntElement<T>, order: u32, omega: T) -> Result<Complex<T>, CompensationError> {
    let w = T::from_u32(order).unwrap_or_else(T::zero) * omega;
    match element {
        ShuntElement::Capacitor(c) => Ok(Complex::new(T::zero(), w * c.capacitance)),
        ShuntElement::Branch(b) => {
            let pole = b.pole();
            if (w - pole).abs() <= T::lit(1e-9) * pole {
                return Err(CompensationError::SingularAdmittance { order });
            }
            let denom = T::one() - w * w * b.inductance * b.capacitance;
            Ok(Complex::new(T::zero(), w * b.capacitance / denom))
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompensatorDesign<T: Real> {
    pub elements: Vec<ShuntElement<T>>,
    /// ω in rad/s
    pub fundamental: T,
}

impl<T: Real> CompensatorDesign<T> {
    pub fn new(elements: Vec<ShuntElement<T>>, fundamental: T) -> Self {
        CompensatorDesign { elements, fundamental }
    }

    pub fn capacitor(c: ShuntCapacitor<T>, fundamental: T) -> Self {
        Self::new(vec![ShuntElement::Capacitor(c)], fundamental)
    }

    pub fn total_admittance(&self, order: u32) -> Result<Complex<T>, CompensationError> {
        self.elements
            .iter()
            .try_fold(Complex::zero(), |acc, e| Ok(acc + admittance(e, order, self.fundamental)?))
    }

    pub fn branches(&self) -> impl Iterator<Item = &LcBranch<T>> {
        self.elements.iter().filter_map(|e| match e {
            ShuntElement::Branch(b) => Some(b),
            ShuntElement::Capacitor(_) => None,
        })
    }
}

fn reactive_by_order<T: Real>(u: &Spectrum<T>, i: &Spectrum<T>, orders: &BTreeSet<u32>) -> Vec<(u32, T, T)> {
    orders
        .iter()
        .map(|&n| {
            let un = u.phasor(n).unwrap_or_else(Complex::zero);
            let inn = i.phasor(n).unwrap_or_else(Complex::zero);
            (n, (un * inn.conj()).im, un.norm_sqr())
        })
        .collect()
}

/// Single shunt capacitor minimizing the compensated source current rms.
///
/// With `Ī'_n = Ī_n + jnωC·Ū_n` the rms² is a quadratic in `C` whose
/// stationary point is `Σ n·Q_n / (ω·Σ n²·U_n²)`, with the numerator over
/// common orders and the denominator over every voltage order. Capacitive
/// loads clamp to `C = 0`.
pub fn optimal_shunt_capacitor<T: Real>(
    u: &Spectrum<T>,
    i: &Spectrum<T>,
) -> Result<ShuntCapacitor<T>, CompensationError> {
    let part = partition(u, i)?;
    if part.common.is_empty() {
        return Err(CompensationError::NoCommonHarmonics);
    }
    let num = reactive_by_order(u, i, &part.common)
        .into_iter()
        .fold(T::zero(), |s, (n, q, _)| s + T::from_u32(n).unwrap_or_else(T::zero) * q);
    let den = u.phasors().fold(T::zero(), |s, (n, c)| {
        let n = T::from_u32(n).unwrap_or_else(T::zero);
        s + n * n * c.norm_sqr()
    }) * u.fundamental();
    ShuntCapacitor::new((num / den).max(T::zero()))
}

/// Bank of series-LC branches with poles at `k_i·ω`, one per common harmonic,
/// sized so that the total susceptance at each common order `n` equals
/// `Q_n / U_n²`. This nulls the reactive power of every common harmonic.
pub fn design_fixed_pole_lc<T: Real>(
    u: &Spectrum<T>,
    i: &Spectrum<T>,
    pole_multipliers: &[T],
) -> Result<CompensatorDesign<T>, CompensationError> {
    let part = partition(u, i)?;
    if part.common.is_empty() {
        return Err(CompensationError::NoCommonHarmonics);
    }
    if pole_multipliers.len() != part.common.len() {
        return Err(CompensationError::PoleCountMismatch {
            expected: part.common.len(),
            got: pole_multipliers.len(),
        });
    }
    let present: BTreeSet<u32> = u.orders().chain(i.orders()).collect();
    for &k in pole_multipliers {
        let kf = k.to_f64().unwrap_or(f64::NAN);
        if !(k > T::zero()) || !k.is_finite() {
            return Err(CompensationError::InvalidPole { multiplier: kf });
        }
        for &n in &present {
            let nf = T::from_u32(n).unwrap_or_else(T::zero);
            if (k - nf).abs() <= T::lit(1e-9) * nf {
                return Err(CompensationError::PoleAtHarmonic { multiplier: kf, order: n });
            }
        }
    }

    let w = u.fundamental();
    let rows = reactive_by_order(u, i, &part.common);
    // susceptance of branch i at order n per farad: nω·k²/(k² − n²)
    let a: Vec<Vec<T>> = rows
        .iter()
        .map(|&(n, _, _)| {
            let n = T::from_u32(n).unwrap_or_else(T::zero);
            pole_multipliers.iter().map(|&k| n * w * k * k / (k * k - n * n)).collect()
        })
        .collect();
    let b: Vec<T> = rows.iter().map(|&(_, q, u2)| q / u2).collect();
    let caps = linalg::solve(a, b).map_err(|_| CompensationError::SingularDesign)?;

    let mut elements = Vec::with_capacity(caps.len());
    for (idx, (&c, &k)) in caps.iter().zip(pole_multipliers).enumerate() {
        if !(c > T::zero()) {
            return Err(CompensationError::Infeasible { branch: idx, capacitance: c.to_f64().unwrap_or(f64::NAN) });
        }
        let pole = k * w;
        elements.push(ShuntElement::Branch(LcBranch::new(T::one() / (pole * pole * c), c)?));
    }
    Ok(CompensatorDesign::new(elements, w))
}

/// Source-side current after connecting `design` in shunt with the load.
pub fn apply_compensator<T: Real>(
    u: &Spectrum<T>,
    i: &Spectrum<T>,
    design: &CompensatorDesign<T>,
) -> Result<Spectrum<T>, CompensationError> {
    u.check_same_fundamental(i)?;
    let w = u.fundamental();
    if (design.fundamental - w).abs() > T::lit(1e-12) * w {
        return Err(SignalError::FundamentalMismatch(
            design.fundamental.to_f64().unwrap_or(f64::NAN),
            w.to_f64().unwrap_or(f64::NAN),
        )
        .into());
    }
    let orders: BTreeSet<u32> = u.orders().chain(i.orders()).collect();
    let mut out = Vec::with_capacity(orders.len());
    for n in orders {
        let cur = i.phasor(n).unwrap_or_else(Complex::zero);
        let added = match u.phasor(n) {
            Some(v) if !design.elements.is_empty() => design.total_admittance(n)? * v,
            _ => Complex::zero(),
        };
        out.push((n, cur + added));
    }
    Ok(Spectrum::from_phasors(SignalKind::Current, w, out)?)
}
