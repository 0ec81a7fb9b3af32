use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real scalar backing every coefficient in the crate.
///
/// Tolerances are per type so that `f32` builds do not trip the
/// double-precision identity checks.
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + Default + Send + Sync + 'static
{
    /// Relative magnitude below which multivector terms are dropped.
    fn prune_tolerance() -> Self;
    /// Relative rms below which a harmonic counts as absent.
    fn presence_threshold() -> Self;
    /// Relative tolerance for identities that hold exactly in real arithmetic.
    fn identity_tolerance() -> Self;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }
}

impl Real for f64 {
    fn prune_tolerance() -> Self {
        1e-12
    }
    fn presence_threshold() -> Self {
        1e-9
    }
    fn identity_tolerance() -> Self {
        1e-9
    }
}

impl Real for f32 {
    fn prune_tolerance() -> Self {
        1e-6
    }
    fn presence_threshold() -> Self {
        1e-6
    }
    fn identity_tolerance() -> Self {
        1e-4
    }
}

/// Wraps an angle into (-pi, pi].
pub fn normalize_angle<T: Real>(angle: T) -> T {
    let two_pi = T::TAU();
    let mut a = angle % two_pi;
    if a <= -T::PI() {
        a += two_pi;
    } else if a > T::PI() {
        a -= two_pi;
    }
    a
}

pub fn deg_to_rad<T: Real>(deg: T) -> T {
    deg.to_radians()
}

pub fn rad_to_deg<T: Real>(rad: T) -> T {
    rad.to_degrees()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn angles_wrap_into_half_open_interval() {
        assert!((normalize_angle(PI) - PI).abs() < 1e-15);
        assert!((normalize_angle(-PI) - PI).abs() < 1e-15);
        assert!((normalize_angle(3.0 * PI / 2.0) + PI / 2.0).abs() < 1e-12);
        assert!((normalize_angle(-7.0 * PI / 2.0) - PI / 2.0).abs() < 1e-12);
        assert_eq!(normalize_angle(0.25_f64), 0.25);
    }

    #[test]
    fn f32_angles_wrap() {
        let a = normalize_angle(4.0_f32);
        assert!((a - (4.0 - 2.0 * std::f32::consts::PI)).abs() < 1e-6);
    }
}
