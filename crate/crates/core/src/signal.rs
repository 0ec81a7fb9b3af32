//! Harmonic signal model.
//!
//! A periodic waveform `x(t) = √2 Σ X_k sin(kωt + θ_k)` is represented by its
//! rms phasors `X_k e^{jθ_k}`, one per harmonic order. Phases are
//! sine-referenced and stored in radians.

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex;
use thiserror::Error;

use crate::kernel::{KernelError, Multivector, PhasorTags, TaggedVector};
use crate::scalar::{normalize_angle, Real};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SignalError {
    #[error("harmonic order {0} appears more than once")]
    DuplicateOrder(u32),
    #[error("harmonic order must be >= 1 (DC is not supported)")]
    ZeroOrder,
    #[error("rms of order {order} must be finite and non-negative, got {rms}")]
    InvalidRms { order: u32, rms: f64 },
    #[error("phase of order {order} is not finite")]
    InvalidPhase { order: u32 },
    #[error("fundamental angular frequency must be positive, got {0}")]
    NonPositiveFrequency(f64),
    #[error("fundamental mismatch: {0} vs {1} rad/s")]
    FundamentalMismatch(f64, f64),
    #[error(transparent)]
    Kernel(#[from] KernelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalKind {
    Voltage,
    Current,
}

/// One sinusoidal term `√2·rms·sin(order·ωt + phase)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicComponent<T: Real> {
    pub order: u32,
    pub rms: T,
    pub phase: T,
}

impl<T: Real> HarmonicComponent<T> {
    pub fn new(order: u32, rms: T, phase: T) -> Self {
        HarmonicComponent { order, rms, phase }
    }

    pub fn from_degrees(order: u32, rms: T, phase_deg: T) -> Self {
        HarmonicComponent { order, rms, phase: phase_deg.to_radians() }
    }
}

/// Per-harmonic rms phasors of a voltage or current.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum<T: Real> {
    kind: SignalKind,
    fundamental: T,
    components: BTreeMap<u32, Complex<T>>,
}

fn check_fundamental<T: Real>(omega: T) -> Result<(), SignalError> {
    if !(omega > T::zero()) || !omega.is_finite() {
        return Err(SignalError::NonPositiveFrequency(omega.to_f64().unwrap_or(f64::NAN)));
    }
    Ok(())
}

/// Maps a harmonic series onto its vector-phasor spectrum: each
/// `√2·X_k·sin(kωt + θ_k)` becomes `X_k e^{jθ_k}` on order `k`.
/// Zero-rms terms are dropped.
pub fn cft<T: Real>(
    components: &[HarmonicComponent<T>],
    kind: SignalKind,
    fundamental: T,
) -> Result<Spectrum<T>, SignalError> {
    check_fundamental(fundamental)?;
    let mut map = BTreeMap::new();
    for h in components {
        if h.order == 0 {
            return Err(SignalError::ZeroOrder);
        }
        if !(h.rms >= T::zero()) || !h.rms.is_finite() {
            return Err(SignalError::InvalidRms { order: h.order, rms: h.rms.to_f64().unwrap_or(f64::NAN) });
        }
        if !h.phase.is_finite() {
            return Err(SignalError::InvalidPhase { order: h.order });
        }
        if map.contains_key(&h.order) {
            return Err(SignalError::DuplicateOrder(h.order));
        }
        map.insert(h.order, Complex::from_polar(h.rms, normalize_angle(h.phase)));
    }
    map.retain(|_, c| c.norm() > T::zero());
    Ok(Spectrum { kind, fundamental, components: map })
}

impl<T: Real> Spectrum<T> {
    pub fn empty(kind: SignalKind, fundamental: T) -> Result<Self, SignalError> {
        check_fundamental(fundamental)?;
        Ok(Spectrum { kind, fundamental, components: BTreeMap::new() })
    }

    /// Builds directly from complex phasors; zero phasors are dropped.
    pub fn from_phasors<I>(kind: SignalKind, fundamental: T, phasors: I) -> Result<Self, SignalError>
    where
        I: IntoIterator<Item = (u32, Complex<T>)>,
    {
        check_fundamental(fundamental)?;
        let mut map = BTreeMap::new();
        for (k, c) in phasors {
            if k == 0 {
                return Err(SignalError::ZeroOrder);
            }
            if map.insert(k, c).is_some() {
                return Err(SignalError::DuplicateOrder(k));
            }
        }
        map.retain(|_, c: &mut Complex<T>| c.norm() > T::zero());
        Ok(Spectrum { kind, fundamental, components: map })
    }

    pub fn kind(&self) -> SignalKind {
        self.kind
    }

    /// Fundamental angular frequency ω in rad/s.
    pub fn fundamental(&self) -> T {
        self.fundamental
    }

    pub fn period(&self) -> T {
        T::TAU() / self.fundamental
    }

    pub fn phasor(&self, order: u32) -> Option<Complex<T>> {
        self.components.get(&order).copied()
    }

    pub fn phasors(&self) -> impl Iterator<Item = (u32, Complex<T>)> + '_ {
        self.components.iter().map(|(k, c)| (*k, *c))
    }

    pub fn components(&self) -> Vec<HarmonicComponent<T>> {
        self.phasors().map(|(k, c)| HarmonicComponent::new(k, c.norm(), c.arg())).collect()
    }

    pub fn orders(&self) -> impl Iterator<Item = u32> + '_ {
        self.components.keys().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn max_order(&self) -> u32 {
        self.components.keys().next_back().copied().unwrap_or(0)
    }

    /// Instantaneous value `√2 Σ rms_k sin(kωt + phase_k)`.
    pub fn sample(&self, t: T) -> T {
        let w = self.fundamental;
        let sum = self.components.iter().fold(T::zero(), |acc, (k, c)| {
            let k = T::from_u32(*k).unwrap_or_else(T::zero);
            acc + c.norm() * (k * w * t + c.arg()).sin()
        });
        T::SQRT_2() * sum
    }

    pub fn rms(&self) -> T {
        self.rms_squared().sqrt()
    }

    pub fn rms_squared(&self) -> T {
        self.components.values().map(|c| c.norm_sqr()).fold(T::zero(), |a, b| a + b)
    }

    /// Orders whose rms is at least the presence threshold relative to the
    /// largest component.
    pub fn present_orders(&self) -> BTreeSet<u32> {
        let max = self.components.values().map(|c| c.norm()).fold(T::zero(), T::max);
        let floor = max * T::presence_threshold();
        self.components
            .iter()
            .filter(|(_, c)| c.norm() > T::zero() && c.norm() >= floor)
            .map(|(k, _)| *k)
            .collect()
    }

    /// Copy keeping only orders in `keep`.
    pub fn restricted_to(&self, keep: &BTreeSet<u32>) -> Self {
        Spectrum {
            kind: self.kind,
            fundamental: self.fundamental,
            components: self.components.iter().filter(|(k, _)| keep.contains(k)).map(|(k, c)| (*k, *c)).collect(),
        }
    }

    /// Copy with every phasor conjugated.
    pub fn conjugate(&self) -> Self {
        Spectrum {
            kind: self.kind,
            fundamental: self.fundamental,
            components: self.components.iter().map(|(k, c)| (*k, c.conj())).collect(),
        }
    }

    /// Grade-1 multivector `Σ X̄_k σ_k` in a space of dimension `dim`.
    pub fn to_multivector(&self, dim: u32) -> Result<Multivector<T>, SignalError> {
        Ok(Multivector::vector(dim, self.phasors())?)
    }

    /// Tagged vector whose tags are this spectrum's own phase angles.
    pub fn to_tagged(&self, dim: u32) -> Result<TaggedVector<T>, SignalError> {
        let tags: PhasorTags<T> = self.phasors().map(|(k, c)| (k, c.arg())).collect();
        Ok(TaggedVector::new(self.to_multivector(dim)?, tags)?)
    }

    pub fn check_same_fundamental(&self, other: &Self) -> Result<(), SignalError> {
        let (a, b) = (self.fundamental, other.fundamental);
        if (a - b).abs() > T::lit(1e-12) * a.max(b) {
            return Err(SignalError::FundamentalMismatch(
                a.to_f64().unwrap_or(f64::NAN),
                b.to_f64().unwrap_or(f64::NAN),
            ));
        }
        Ok(())
    }
}

/// Harmonic orders split by where they occur: in both signals (`common`),
/// voltage only, or current only.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HarmonicPartition {
    pub common: BTreeSet<u32>,
    pub voltage_only: BTreeSet<u32>,
    pub current_only: BTreeSet<u32>,
}

impl HarmonicPartition {
    pub fn is_linear(&self) -> bool {
        self.voltage_only.is_empty() && self.current_only.is_empty()
    }
}

pub fn partition<T: Real>(u: &Spectrum<T>, i: &Spectrum<T>) -> Result<HarmonicPartition, SignalError> {
    u.check_same_fundamental(i)?;
    let uo = u.present_orders();
    let io = i.present_orders();
    Ok(HarmonicPartition {
        common: uo.intersection(&io).copied().collect(),
        voltage_only: uo.difference(&io).copied().collect(),
        current_only: io.difference(&uo).copied().collect(),
    })
}

/// `u(t)·i(t)`
pub fn instantaneous_power<T: Real>(u: &Spectrum<T>, i: &Spectrum<T>, t: T) -> Result<T, SignalError> {
    u.check_same_fundamental(i)?;
    Ok(u.sample(t) * i.sample(t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    const W: f64 = 100.0 * PI;

    fn example1_voltage() -> Spectrum<f64> {
        cft(
            &[
                HarmonicComponent::from_degrees(1, 200.0, 0.0),
                HarmonicComponent::from_degrees(2, 200.0, -30.0),
                HarmonicComponent::from_degrees(4, 100.0, 30.0),
            ],
            SignalKind::Voltage,
            W,
        )
        .unwrap()
    }

    fn example1_current() -> Spectrum<f64> {
        cft(
            &[
                HarmonicComponent::from_degrees(1, 20.0, 30.0),
                HarmonicComponent::from_degrees(2, 10.0, -60.0),
                HarmonicComponent::from_degrees(3, 10.0, 60.0),
            ],
            SignalKind::Current,
            W,
        )
        .unwrap()
    }

    /// Composite Simpson over one period of the fundamental.
    fn simpson<F: Fn(f64) -> f64>(f: F, period: f64, n: usize) -> f64 {
        let h = period / n as f64;
        let mut s = f(0.0) + f(period);
        for k in 1..n {
            s += f(k as f64 * h) * if k % 2 == 1 { 4.0 } else { 2.0 };
        }
        s * h / 3.0 / period
    }

    #[test]
    fn cft_maps_terms_to_phasors() {
        let u = example1_voltage();
        assert_eq!(u.orders().collect::<Vec<_>>(), vec![1, 2, 4]);
        let p2 = u.phasor(2).unwrap();
        assert!((p2.norm() - 200.0).abs() < 1e-12);
        assert!((p2.arg() + 30f64.to_radians()).abs() < 1e-12);
        assert!((u.phasor(4).unwrap().arg() - 30f64.to_radians()).abs() < 1e-12);
    }

    #[test]
    fn cft_edge_cases() {
        let e = cft::<f64>(&[], SignalKind::Voltage, W).unwrap();
        assert!(e.is_empty());
        assert_eq!(e.rms(), 0.0);
        assert_eq!(e.sample(0.123), 0.0);

        let s = cft(&[HarmonicComponent::new(1, 1.0, 0.0)], SignalKind::Voltage, W).unwrap();
        assert_eq!(s.phasor(1), Some(Complex::new(1.0, 0.0)));

        let z = cft(&[HarmonicComponent::new(3, 0.0, 1.0)], SignalKind::Current, W).unwrap();
        assert!(z.is_empty());
    }

    #[test]
    fn cft_errors() {
        let dup = [HarmonicComponent::new(2, 1.0, 0.0), HarmonicComponent::new(2, 3.0, 0.0)];
        assert_eq!(cft(&dup, SignalKind::Voltage, W), Err(SignalError::DuplicateOrder(2)));
        assert!(matches!(cft::<f64>(&[], SignalKind::Voltage, 0.0), Err(SignalError::NonPositiveFrequency(_))));
        assert!(matches!(cft::<f64>(&[], SignalKind::Voltage, -1.0), Err(SignalError::NonPositiveFrequency(_))));
        assert_eq!(cft(&[HarmonicComponent::new(0, 1.0, 0.0)], SignalKind::Voltage, W), Err(SignalError::ZeroOrder));
        assert!(matches!(
            cft(&[HarmonicComponent::new(1, -1.0, 0.0)], SignalKind::Voltage, W),
            Err(SignalError::InvalidRms { order: 1, .. })
        ));
    }

    #[test]
    fn sample_at_zero() {
        let u = example1_voltage();
        let expect = 2f64.sqrt() * (200.0 * (-PI / 6.0).sin() + 100.0 * (PI / 6.0).sin());
        assert!((u.sample(0.0) - expect).abs() < 1e-9);
        assert!((u.sample(0.0) + 70.7107).abs() < 1e-4);
    }

    #[test]
    fn quadrature_projection_recovers_spectrum() {
        let u = example1_voltage();
        let t = u.period();
        for k in 1..=6u32 {
            let kf = k as f64;
            // x(t) = √2 X (sin kωt cosθ + cos kωt sinθ)
            let a = simpson(|s| u.sample(s) * (kf * W * s).sin(), t, 4096) * 2f64.sqrt();
            let b = simpson(|s| u.sample(s) * (kf * W * s).cos(), t, 4096) * 2f64.sqrt();
            let got = Complex::new(a, b);
            let want = u.phasor(k).unwrap_or_default();
            assert!((got - want).norm() <= 1e-9 * 200.0, "order {k}: {got} vs {want}");
        }
    }

    #[test]
    fn rms_values() {
        assert!((example1_voltage().rms() - 300.0).abs() < 1e-12);
        assert!((example1_current().rms() - 600f64.sqrt()).abs() < 1e-12);
        let u = example1_voltage();
        let n = u.to_multivector(4).unwrap().norm().unwrap();
        assert!((n - 300.0).abs() < 1e-9);
    }

    #[test]
    fn partition_example1() {
        let p = partition(&example1_voltage(), &example1_current()).unwrap();
        assert_eq!(p.common, [1, 2].into());
        assert_eq!(p.voltage_only, [4].into());
        assert_eq!(p.current_only, [3].into());
    }

    #[test]
    fn partition_degenerate_supports() {
        let u = example1_voltage();
        let same = partition(&u, &u).unwrap();
        assert!(same.is_linear());
        assert_eq!(same.common.len(), 3);
        let i = cft(&[HarmonicComponent::new(5, 1.0, 0.0)], SignalKind::Current, W).unwrap();
        let dis = partition(&u, &i).unwrap();
        assert!(dis.common.is_empty());
        assert_eq!(dis.voltage_only, [1, 2, 4].into());
        assert_eq!(dis.current_only, [5].into());
    }

    #[test]
    fn partition_ignores_numeric_dust() {
        let u = cft(
            &[HarmonicComponent::new(1, 230.0, 0.0), HarmonicComponent::new(3, 1e-10, 0.0)],
            SignalKind::Voltage,
            W,
        )
        .unwrap();
        let i = cft(&[HarmonicComponent::new(3, 1.0, 0.0)], SignalKind::Current, W).unwrap();
        let p = partition(&u, &i).unwrap();
        assert!(p.common.is_empty());
        assert_eq!(p.current_only, [3].into());
    }

    #[test]
    fn fundamental_mismatch() {
        let u = example1_voltage();
        let i = cft(&[HarmonicComponent::new(1, 1.0, 0.0)], SignalKind::Current, 120.0 * PI).unwrap();
        assert!(matches!(partition(&u, &i), Err(SignalError::FundamentalMismatch(..))));
        assert!(instantaneous_power(&u, &i, 0.0).is_err());
    }

    #[test]
    fn instantaneous_power_cases() {
        let u = example1_voltage();
        let zero = Spectrum::empty(SignalKind::Current, W).unwrap();
        for k in 0..10 {
            assert_eq!(instantaneous_power(&u, &zero, k as f64 * 1e-3).unwrap(), 0.0);
        }
        let one = cft(&[HarmonicComponent::new(1, 1.0, 0.0)], SignalKind::Voltage, W).unwrap();
        let cur = cft(&[HarmonicComponent::new(1, 1.0, 0.0)], SignalKind::Current, W).unwrap();
        let avg = simpson(|t| instantaneous_power(&one, &cur, t).unwrap(), one.period(), 4096);
        assert!((avg - 1.0).abs() < 1e-12);

        let avg = simpson(|t| instantaneous_power(&u, &example1_current(), t).unwrap(), u.period(), 4096);
        assert!((avg - 5196.15).abs() < 0.01, "{avg}");
    }

    #[test]
    fn generic_over_f32() {
        let u = cft(
            &[HarmonicComponent::from_degrees(1, 200.0f32, 0.0), HarmonicComponent::from_degrees(2, 200.0, -30.0)],
            SignalKind::Voltage,
            100.0 * std::f32::consts::PI,
        )
        .unwrap();
        assert!((u.rms() - 282.8427).abs() < 1e-3);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn spectrum(kind: SignalKind) -> impl Strategy<Value = Spectrum<f64>> {
            prop::collection::btree_map(1u32..=10, (0.01f64..50.0, -PI..PI), 0..6).prop_map(move |m| {
                let comps: Vec<_> = m.into_iter().map(|(k, (r, a))| HarmonicComponent::new(k, r, a)).collect();
                cft(&comps, kind, W).unwrap()
            })
        }

        proptest! {
            #[test]
            fn parseval(s in spectrum(SignalKind::Voltage)) {
                let ms = simpson(|t| s.sample(t).powi(2), s.period(), 4096);
                let r2 = s.rms_squared();
                prop_assert!((ms - r2).abs() <= 1e-9 * r2.max(1e-300) || (r2 == 0.0 && ms == 0.0));
            }

            #[test]
            fn partition_symmetric(u in spectrum(SignalKind::Voltage), i in spectrum(SignalKind::Current)) {
                let a = partition(&u, &i).unwrap();
                let b = partition(&i, &u).unwrap();
                prop_assert_eq!(&a.voltage_only, &b.current_only);
                prop_assert_eq!(&a.current_only, &b.voltage_only);
                prop_assert_eq!(&a.common, &b.common);
                prop_assert!(a.common.is_disjoint(&a.voltage_only));
                prop_assert!(a.common.is_disjoint(&a.current_only));
                prop_assert!(a.voltage_only.is_disjoint(&a.current_only));
            }

            #[test]
            fn rms_matches_kernel_norm(s in spectrum(SignalKind::Current)) {
                let n = s.to_multivector(10).unwrap().norm().unwrap();
                prop_assert!((n - s.rms()).abs() <= 1e-12 * s.rms().max(1.0));
            }
        }
    }
}
