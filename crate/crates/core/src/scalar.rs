//! Floating-point scalar abstraction for the pipeline math.
//!
//! All numeric routines in this crate are generic over [`Real`] so the same
//! code runs on `f32` or `f64`. The crate root exposes `f64` aliases, which is
//! what the CLI and the file formats use.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar: `f32` or `f64`.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Sum<Self> + Debug + Display + Default + 'static
{
    /// Constant conversion from `f64`.
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }

    /// Conversion from a count.
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable as scalar")
    }

    /// π as `Self`.
    fn pi() -> Self {
        Self::of(std::f64::consts::PI)
    }
}

impl Real for f32 {}
impl Real for f64 {}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn conversions_roundtrip() {
        assert_eq!(f64::of(2.5), 2.5);
        assert_eq!(f32::of_usize(12), 12.0);
        assert!((f32::pi() - std::f32::consts::PI).abs() < 1e-6);
    }
}
