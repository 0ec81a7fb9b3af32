//! Multivector apparent power `S = Ũ ĝ Ĩ*` and its decomposition into
//! active, reactive and distortion parts.
//!
//! The fast path goes through the H matrix: `H_pq = Ū_p·Ī_q*`, rotated by
//! `e^{-2j(α_p − α_q)}` below the diagonal for orders present in both
//! signals. Its trace over the common orders is `P + jQ`; linear distortion
//! terms are `H_pq − H_qp` and nonlinear terms are single entries.
//! [`apparent_power_multivector`] computes the same thing through the kernel.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;
use num_traits::Zero;
use thiserror::Error;

use crate::kernel::{generalized_product, Blade, KernelError, Multivector, PhasorTags, TaggedVector};
use crate::scalar::Real;
use crate::signal::{partition, HarmonicPartition, SignalError, Spectrum};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PowerError {
    #[error(transparent)]
    Signal(#[from] SignalError),
    #[error(transparent)]
    Kernel(#[from] KernelError),
    #[error("|S|² from rms product ({from_rms}) disagrees with P²+Q²+D² ({from_components})")]
    InconsistentMagnitudes { from_rms: f64, from_components: f64 },
    #[error("power factor undefined: apparent power is zero")]
    UndefinedPowerFactor,
    #[error("no meaningful power factor for active power {0} <= 0")]
    NonPositiveActivePower(f64),
}

/// Complex coefficients matrix with rows indexed by voltage orders and
/// columns by current orders. Only present harmonics get a row or column.
#[derive(Debug, Clone, PartialEq)]
pub struct HMatrix<T: Real> {
    rows: Vec<u32>,
    cols: Vec<u32>,
    entries: BTreeMap<(u32, u32), Complex<T>>,
    partition: HarmonicPartition,
}

impl<T: Real> HMatrix<T> {
    pub fn rows(&self) -> &[u32] {
        &self.rows
    }

    pub fn cols(&self) -> &[u32] {
        &self.cols
    }

    pub fn partition(&self) -> &HarmonicPartition {
        &self.partition
    }

    /// Entry `(p, q)`; zero for an absent row or column.
    pub fn entry(&self, p: u32, q: u32) -> Complex<T> {
        self.entries.get(&(p, q)).copied().unwrap_or_else(Complex::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((u32, u32), Complex<T>)> + '_ {
        self.entries.iter().map(|(k, v)| (*k, *v))
    }

    /// `P + jQ`
    pub fn trace(&self) -> Complex<T> {
        self.partition.common.iter().fold(Complex::zero(), |acc, &n| acc + self.entry(n, n))
    }
}

pub fn h_matrix<T: Real>(u: &Spectrum<T>, i: &Spectrum<T>) -> Result<HMatrix<T>, PowerError> {
    let part = partition(u, i)?;
    let rows: Vec<u32> = part.common.union(&part.voltage_only).copied().collect();
    let cols: Vec<u32> = part.common.union(&part.current_only).copied().collect();
    let mut entries = BTreeMap::new();
    for &p in &rows {
        let up = u.phasor(p).unwrap_or_else(Complex::zero);
        for &q in &cols {
            let iq = i.phasor(q).unwrap_or_else(Complex::zero);
            let mut h = up * iq.conj();
            if p > q && part.common.contains(&p) && part.common.contains(&q) {
                let alpha_q = u.phasor(q).map(|c| c.arg()).unwrap_or_else(T::zero);
                h *= Complex::from_polar(T::one(), -T::lit(2.0) * (up.arg() - alpha_q));
            }
            entries.insert((p, q), h);
        }
    }
    Ok(HMatrix { rows, cols, entries, partition: part })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistortionKind {
    /// Cross term between two orders present in both signals.
    Linear,
    /// Term involving a voltage-only or current-only order.
    Nonlinear,
}

/// One complex-bivector coefficient of the distortion power.
///
/// `pair` keeps the orientation used in reports: `(p, q)` with `p < q` for
/// linear terms, `(voltage order, current order)` for nonlinear ones. The
/// value is the coefficient on `σ_p σ_q` in that order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistortionTerm<T: Real> {
    pub pair: (u32, u32),
    pub value: Complex<T>,
    pub kind: DistortionKind,
}

impl<T: Real> DistortionTerm<T> {
    pub fn magnitude(&self) -> T {
        self.value.norm()
    }

    /// Coefficient on the canonical (ascending) blade.
    pub fn canonical(&self) -> (Blade, Complex<T>) {
        let (sign, blade) = Blade::from_indices(&[self.pair.0, self.pair.1]);
        (blade, if sign.is_negative() { -self.value } else { self.value })
    }
}

/// A complex scalar plus a set of oriented complex bivector terms.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerPart<T: Real> {
    pub scalar: Complex<T>,
    pub terms: Vec<DistortionTerm<T>>,
}

impl<T: Real> PowerPart<T> {
    pub fn norm_squared(&self) -> T {
        self.terms.iter().fold(self.scalar.norm_sqr(), |acc, t| acc + t.value.norm_sqr())
    }

    pub fn term(&self, p: u32, q: u32) -> Option<&DistortionTerm<T>> {
        self.terms.iter().find(|t| t.pair == (p, q))
    }

    pub fn to_multivector(&self, dim: u32) -> Result<Multivector<T>, KernelError> {
        Multivector::from_terms(
            dim,
            std::iter::once((Blade::scalar(), self.scalar)).chain(self.terms.iter().map(|t| t.canonical())),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerMultivector<T: Real> {
    /// `P + jQ`
    pub scalar: Complex<T>,
    /// Distortion terms in row-major H order.
    pub terms: Vec<DistortionTerm<T>>,
    /// `P_n + jQ_n` for every common order.
    pub harmonics: BTreeMap<u32, Complex<T>>,
    pub partition: HarmonicPartition,
}

impl<T: Real> PowerMultivector<T> {
    pub fn active(&self) -> T {
        self.scalar.re
    }

    pub fn reactive(&self) -> T {
        self.scalar.im
    }

    pub fn term(&self, p: u32, q: u32) -> Option<&DistortionTerm<T>> {
        self.terms.iter().find(|t| t.pair == (p, q))
    }

    pub fn distortion_squared(&self) -> T {
        self.terms.iter().fold(T::zero(), |acc, t| acc + t.value.norm_sqr())
    }

    pub fn distortion(&self) -> T {
        self.distortion_squared().sqrt()
    }

    /// Largest harmonic order involved, used as the algebra dimension.
    pub fn dim(&self) -> u32 {
        let p = &self.partition;
        p.common.iter().chain(&p.voltage_only).chain(&p.current_only).copied().max().unwrap_or(0)
    }

    pub fn as_part(&self) -> PowerPart<T> {
        PowerPart { scalar: self.scalar, terms: self.terms.clone() }
    }

    pub fn to_multivector(&self) -> Result<Multivector<T>, KernelError> {
        self.as_part().to_multivector(self.dim())
    }
}

pub fn apparent_power<T: Real>(u: &Spectrum<T>, i: &Spectrum<T>) -> Result<PowerMultivector<T>, PowerError> {
    Ok(from_h_matrix(&h_matrix(u, i)?))
}

pub fn from_h_matrix<T: Real>(h: &HMatrix<T>) -> PowerMultivector<T> {
    let n = &h.partition.common;
    let mut terms = Vec::new();
    for &p in &h.rows {
        for &q in &h.cols {
            let both = n.contains(&p) && n.contains(&q);
            if both && p < q {
                terms.push(DistortionTerm {
                    pair: (p, q),
                    value: h.entry(p, q) - h.entry(q, p),
                    kind: DistortionKind::Linear,
                });
            } else if !both {
                terms.push(DistortionTerm { pair: (p, q), value: h.entry(p, q), kind: DistortionKind::Nonlinear });
            }
        }
    }
    PowerMultivector {
        scalar: h.trace(),
        terms,
        harmonics: n.iter().map(|&k| (k, h.entry(k, k))).collect(),
        partition: h.partition.clone(),
    }
}

/// `Ũ ĝ Ĩ*` evaluated in the algebra.
///
/// The voltage is tagged with its own phases. The conjugated current carries
/// the voltage phase on common orders and its own phase elsewhere (the tag is
/// not used for those).
pub fn apparent_power_multivector<T: Real>(u: &Spectrum<T>, i: &Spectrum<T>) -> Result<Multivector<T>, PowerError> {
    let part = partition(u, i)?;
    let u_present: BTreeSet<u32> = part.common.union(&part.voltage_only).copied().collect();
    let i_present: BTreeSet<u32> = part.common.union(&part.current_only).copied().collect();
    let u = u.restricted_to(&u_present);
    let ic = i.restricted_to(&i_present).conjugate();
    let dim = u.max_order().max(ic.max_order());

    let lhs = u.to_tagged(dim)?;
    let tags: PhasorTags<T> = ic
        .phasors()
        .map(|(k, c)| (k, if part.common.contains(&k) { u.phasor(k).map(|v| v.arg()).unwrap_or(c.arg()) } else { c.arg() }))
        .collect();
    let rhs = TaggedVector::new(ic.to_multivector(dim)?, tags)?;
    Ok(generalized_product(&lhs, &rhs, &part.common)?)
}

/// The three groupings of the power multivector.
#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition<T: Real> {
    /// `P + jQ` plus linear distortion.
    pub linear: PowerPart<T>,
    /// Nonlinear distortion only.
    pub nonlinear: PowerPart<T>,
    /// `jQ` plus all distortion.
    pub nonactive: PowerPart<T>,
}

pub fn decompose<T: Real>(pm: &PowerMultivector<T>) -> Decomposition<T> {
    let pick = |kind| pm.terms.iter().filter(|t| t.kind == kind).copied().collect::<Vec<_>>();
    Decomposition {
        linear: PowerPart { scalar: pm.scalar, terms: pick(DistortionKind::Linear) },
        nonlinear: PowerPart { scalar: Complex::zero(), terms: pick(DistortionKind::Nonlinear) },
        nonactive: PowerPart { scalar: Complex::new(T::zero(), pm.scalar.im), terms: pm.terms.clone() },
    }
}

/// Scalar magnitudes of a power multivector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSummary<T: Real> {
    /// P, W
    pub active: T,
    /// Σ U_n I_n sin φ_n, var
    pub reactive_signed: T,
    pub reactive_abs: T,
    /// D, VA
    pub distortion: T,
    /// |S| = ‖U‖·‖I‖, VA
    pub apparent: T,
    pub apparent_squared: T,
}

impl<T: Real> PowerSummary<T> {
    pub fn power_factor(&self) -> Result<T, PowerError> {
        if self.apparent <= T::zero() {
            return Err(PowerError::UndefinedPowerFactor);
        }
        Ok(self.active / self.apparent)
    }
}

/// Magnitudes with the `‖U‖²‖I‖² = P² + Q² + D²` cross-check.
pub fn magnitudes<T: Real>(
    pm: &PowerMultivector<T>,
    u: &Spectrum<T>,
    i: &Spectrum<T>,
) -> Result<PowerSummary<T>, PowerError> {
    let s2 = u.rms_squared() * i.rms_squared();
    let p = pm.active();
    let q = pm.reactive();
    let d2 = pm.distortion_squared();
    let by_parts = p * p + q * q + d2;
    if (s2 - by_parts).abs() > T::identity_tolerance() * s2.max(by_parts) {
        return Err(PowerError::InconsistentMagnitudes {
            from_rms: s2.to_f64().unwrap_or(f64::NAN),
            from_components: by_parts.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok(PowerSummary {
        active: p,
        reactive_signed: q,
        reactive_abs: q.abs(),
        distortion: d2.sqrt(),
        apparent: s2.sqrt(),
        apparent_squared: s2,
    })
}

/// Relative quality index `δ = S / P`.
#[derive(Debug, Clone, PartialEq)]
pub struct Rqi<T: Real> {
    pub index: PowerPart<T>,
    pub magnitude: T,
    pub power_factor: T,
}

pub fn rqi<T: Real>(pm: &PowerMultivector<T>, summary: &PowerSummary<T>) -> Result<Rqi<T>, PowerError> {
    let p = summary.active;
    if !(p > T::zero()) {
        return Err(PowerError::NonPositiveActivePower(p.to_f64().unwrap_or(f64::NAN)));
    }
    let index = PowerPart {
        scalar: Complex::new(T::one(), summary.reactive_signed / p),
        terms: pm.terms.iter().map(|t| DistortionTerm { value: t.value / p, ..*t }).collect(),
    };
    let q = summary.reactive_signed / p;
    let d = summary.distortion / p;
    let magnitude = (T::one() + q * q + d * d).sqrt();
    Ok(Rqi { index, magnitude, power_factor: T::one() / magnitude })
}
