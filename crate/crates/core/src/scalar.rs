//! Scalar abstractions shared by the two engines.
//!
//! The symbolic engine is generic over an [`Exact`] rational type (exact
//! equality is what makes canonical forms a decision procedure); the numeric
//! engine is generic over a [`Real`] floating type.

use std::fmt::{Debug, Display};

use nalgebra::RealField;
use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{FromPrimitive, Signed, ToPrimitive};
use rustfft::FftNum;

/// Exact rational coefficient field.
pub trait Exact:
    Clone + PartialEq + PartialOrd + Signed + ToPrimitive + FromPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Builds `numer / denom`. Panics on a zero denominator.
    fn ratio(numer: i64, denom: i64) -> Self;

    /// Converts a finite `f64` (exactly where the type allows it).
    fn from_float(x: f64) -> Option<Self>;
}

impl Exact for BigRational {
    fn ratio(numer: i64, denom: i64) -> Self {
        BigRational::new(BigInt::from(numer), BigInt::from(denom))
    }

    fn from_float(x: f64) -> Option<Self> {
        BigRational::from_float(x)
    }
}

impl Exact for Ratio<i64> {
    fn ratio(numer: i64, denom: i64) -> Self {
        Ratio::new(numer, denom)
    }

    fn from_float(x: f64) -> Option<Self> {
        Ratio::<i64>::from_f64(x)
    }
}

/// Floating-point scalar for the numeric engine: f32 or f64.
pub trait Real: RealField + FftNum + Copy + Display {
    /// Multiplier applied to the f64-calibrated tolerances.
    const TOLERANCE_SCALE: f64;

    fn from_f64_lossy(x: f64) -> Self;

    fn to_f64_lossy(self) -> f64;

    /// A tolerance calibrated for f64, widened for lower precision types.
    fn tol(x: f64) -> Self {
        Self::from_f64_lossy(x * Self::TOLERANCE_SCALE)
    }
}

impl Real for f64 {
    const TOLERANCE_SCALE: f64 = 1.0;

    fn from_f64_lossy(x: f64) -> Self {
        x
    }

    fn to_f64_lossy(self) -> f64 {
        self
    }
}

impl Real for f32 {
    const TOLERANCE_SCALE: f64 = 1.0e7;

    fn from_f64_lossy(x: f64) -> Self {
        x as f32
    }

    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

/// Converts an exact value to the numeric scalar.
pub fn exact_to_real<R: Exact, T: Real>(x: &R) -> T {
    T::from_f64_lossy(x.to_f64().unwrap_or(f64::NAN))
}
