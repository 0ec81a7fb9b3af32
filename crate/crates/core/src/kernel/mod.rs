//! Complex-coefficient Clifford algebra: blades, sparse multivectors, the
//! classic geometric product and the phase-rotated product used for power.

mod blade;
mod generalized;
mod multivector;

pub use blade::{Blade, Sign};
pub use generalized::{generalized_product, rotation, PhasorTags, TaggedVector};
pub use multivector::Multivector;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum KernelError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: u32, right: u32 },
    #[error("basis index {index} outside 1..={dim}")]
    IndexOutOfRange { index: u32, dim: u32 },
    #[error("operand must be a pure grade-1 multivector (found grade {found:?})")]
    NotGradeOne { found: Option<usize> },
    #[error("no phasor tag for order {order}")]
    MissingPhasorTag { order: u32 },
    #[error("norm evaluated to non-real or negative value {re} + j{im}")]
    NonRealNorm { re: f64, im: f64 },
}
