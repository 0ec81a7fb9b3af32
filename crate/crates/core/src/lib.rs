//! Multivector apparent power for single-port circuits under periodic
//! nonsinusoidal excitation.
//!
//! Voltage and current harmonics become grade-1 vectors of a complex Clifford
//! algebra. Their phase-rotated geometric product is a complex scalar
//! `P + jQ` plus complex bivectors carrying the distortion power, one per
//! pair of harmonic orders. The [`compensation`] module sizes passive shunt
//! compensators and re-evaluates the decomposition after connecting them.
//!
//! Everything is generic over [`Real`] (`f32` or `f64`); the `*64` aliases
//! below are the double-precision instantiations used by the CLI.

// `!(x > 0)` rejects NaN along with non-positive values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod compensation;
pub mod kernel;
pub mod linalg;
pub mod power;
pub mod scalar;
pub mod signal;

pub use compensation::{
    admittance, apply_compensator, design_fixed_pole_lc, optimal_shunt_capacitor, CompensationError,
    CompensatorDesign, LcBranch, ShuntCapacitor, ShuntElement,
};
pub use kernel::{generalized_product, Blade, KernelError, Multivector, PhasorTags, Sign, TaggedVector};
pub use power::{
    apparent_power, apparent_power_multivector, decompose, h_matrix, magnitudes, rqi, Decomposition,
    DistortionKind, DistortionTerm, HMatrix, PowerError, PowerMultivector, PowerPart, PowerSummary, Rqi,
};
pub use scalar::Real;
pub use signal::{
    cft, instantaneous_power, partition, HarmonicComponent, HarmonicPartition, SignalError, SignalKind, Spectrum,
};

pub type Complex64 = num_complex::Complex<f64>;
pub type Multivector64 = Multivector<f64>;
pub type Spectrum64 = Spectrum<f64>;
pub type HarmonicComponent64 = HarmonicComponent<f64>;
pub type HMatrix64 = HMatrix<f64>;
pub type PowerMultivector64 = PowerMultivector<f64>;
pub type PowerSummary64 = PowerSummary<f64>;
pub type Rqi64 = Rqi<f64>;
pub type CompensatorDesign64 = CompensatorDesign<f64>;

pub type Multivector32 = Multivector<f32>;
pub type Spectrum32 = Spectrum<f32>;
pub type PowerMultivector32 = PowerMultivector<f32>;
