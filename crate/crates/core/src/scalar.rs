//! Floating-point abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar the pattern math is generic over: implemented for `f32` and `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Default + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` literal. Never fails for the supported types.
    fn lit(value: f64) -> Self;

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    fn from_usize_lossy(value: usize) -> Self {
        Self::lit(value as f64)
    }
}

impl Scalar for f32 {
    #[inline]
    fn lit(value: f64) -> Self {
        value as f32
    }
}

impl Scalar for f64 {
    #[inline]
    fn lit(value: f64) -> Self {
        value
    }
}

/// Tolerance (degrees) inside which an angle is considered to sit on a grid node.
pub const NODE_TOLERANCE_DEG: f64 = 1e-9;

#[inline]
pub fn deg_to_rad<T: Scalar>(deg: T) -> T {
    deg * T::PI() / T::lit(180.0)
}

#[inline]
pub fn rad_to_deg<T: Scalar>(rad: T) -> T {
    rad * T::lit(180.0) / T::PI()
}

/// `sin` of a polar angle given in degrees, folded about 90° so that the
/// endpoint rings 0° and 180° give exactly zero.
#[inline]
pub fn sin_polar_deg<T: Scalar>(theta_deg: T) -> T {
    let folded = if theta_deg > T::lit(90.0) {
        T::lit(180.0) - theta_deg
    } else {
        theta_deg
    };
    deg_to_rad(folded).sin()
}

/// Wraps an azimuth into `[0, 360)`.
#[inline]
pub fn wrap_360<T: Scalar>(deg: T) -> T {
    let full = T::lit(360.0);
    let mut w = deg % full;
    if w < T::zero() {
        w = w + full;
    }
    // -1e-20 % 360 + 360 rounds to 360.0
    if w >= full {
        w = w - full;
    }
    w
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum<T> {
    sum: T,
    compensation: T,
}

impl<T: Scalar> CompensatedSum<T> {
    pub fn new() -> Self {
        Self {
            sum: T::zero(),
            compensation: T::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, value: T) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation = self.compensation + ((self.sum - t) + value);
        } else {
            self.compensation = self.compensation + ((value - t) + self.sum);
        }
        self.sum = t;
    }

    #[inline]
    pub fn total(&self) -> T {
        self.sum + self.compensation
    }
}

impl<T: Scalar> FromIterator<T> for CompensatedSum<T> {
    fn from_iter<I: IntoIterator<Item = T>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn endpoint_rings_have_zero_sine() {
        assert_eq!(sin_polar_deg(0.0_f64), 0.0);
        assert_eq!(sin_polar_deg(180.0_f64), 0.0);
        assert_eq!(sin_polar_deg(90.0_f64), 1.0);
        assert_eq!(sin_polar_deg(30.0_f64), sin_polar_deg(150.0_f64));
    }

    #[test]
    fn wrap_stays_in_half_open_range() {
        assert_eq!(wrap_360(360.0_f64), 0.0);
        assert_eq!(wrap_360(-90.0_f64), 270.0);
        assert_eq!(wrap_360(725.0_f64), 5.0);
        assert!(wrap_360(-1e-20_f64) < 360.0);
    }

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let values = [1e16_f64, 1.0, -1e16, 1.0];
        let naive: f64 = values.iter().sum();
        let acc: CompensatedSum<f64> = values.iter().copied().collect();
        assert_eq!(acc.total(), 2.0);
        assert_ne!(naive, 2.0);
    }
}
