//! Scalar layer: one numeric trait implemented by hardware doubles and by
//! arbitrary-precision binary floats, plus a complex type and radix-2 FFT that
//! work at either precision.
//!
//! All simulation code is generic over [`Real`]; the working precision is
//! fixed by a [`ScalarContext`] at construction time.

mod complex;
mod fft;
mod mp;

pub use complex::{Complex, ComplexVector};
pub use fft::{fft_forward, fft_inverse, FftPlan};
pub use mp::Mp;

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Guard bits added on top of the mantissa needed for the requested digits.
pub const GUARD_BITS: u32 = 8;

/// Significant decimal digits carried by an IEEE double.
pub const DOUBLE_DIGITS: u32 = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrecisionMode {
    HardwareDouble,
    Arbitrary,
}

/// Working precision for one computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ScalarContext {
    digits: u32,
    mode: PrecisionMode,
}

impl ScalarContext {
    pub fn hardware() -> Self {
        ScalarContext {
            digits: DOUBLE_DIGITS,
            mode: PrecisionMode::HardwareDouble,
        }
    }

    /// Binary floating point holding at least `digits` significant decimal digits.
    pub fn arbitrary(digits: u32) -> Result<Self> {
        if digits == 0 {
            return Err(Error::InvalidParameter(
                "precision digits must be positive".into(),
            ));
        }
        Ok(ScalarContext {
            digits,
            mode: PrecisionMode::Arbitrary,
        })
    }

    pub fn digits(&self) -> u32 {
        self.digits
    }

    pub fn mode(&self) -> PrecisionMode {
        self.mode
    }

    pub fn is_hardware(&self) -> bool {
        self.mode == PrecisionMode::HardwareDouble
    }

    /// Mantissa bits: 53 for doubles, otherwise ceil(digits * log2 10) + guard bits.
    pub fn mantissa_bits(&self) -> u32 {
        match self.mode {
            PrecisionMode::HardwareDouble => f64::MANTISSA_DIGITS,
            PrecisionMode::Arbitrary => {
                (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + GUARD_BITS
            }
        }
    }

    /// Machine epsilon 2^(1 - bits).
    pub fn epsilon(&self) -> f64 {
        2f64.powi(1 - self.mantissa_bits() as i32)
    }

    /// Decimal digits needed to print a value losslessly.
    pub fn print_digits(&self) -> usize {
        match self.mode {
            PrecisionMode::HardwareDouble => 17,
            PrecisionMode::Arbitrary => self.digits.max(17) as usize,
        }
    }
}

impl Default for ScalarContext {
    fn default() -> Self {
        ScalarContext::hardware()
    }
}

/// Real scalar usable by every numeric kernel in the crate.
pub trait Real:
    Clone
    + Debug
    + Send
    + Sync
    + PartialEq
    + PartialOrd
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Add<&'a Self, Output = Self>
    + for<'a> Sub<&'a Self, Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
    + for<'a> DivAssign<&'a Self>
{
    fn from_f64(ctx: &ScalarContext, v: f64) -> Self;
    fn from_i64(ctx: &ScalarContext, v: i64) -> Self;
    fn to_f64(&self) -> f64;

    /// `v` at the precision of `self`.
    fn like_f64(&self, v: f64) -> Self;
    /// `v` at the precision of `self`; exact for `|v| < 2^53`.
    fn like_i64(&self, v: i64) -> Self;

    fn zero(ctx: &ScalarContext) -> Self {
        Self::from_i64(ctx, 0)
    }
    fn one(ctx: &ScalarContext) -> Self {
        Self::from_i64(ctx, 1)
    }
    fn pi(ctx: &ScalarContext) -> Self;
    fn two_pi(ctx: &ScalarContext) -> Self {
        Self::pi(ctx) * &Self::from_i64(ctx, 2)
    }
    fn e(ctx: &ScalarContext) -> Self {
        Self::one(ctx).exp()
    }

    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn abs(&self) -> Self;
    fn sin_cos(&self) -> (Self, Self);

    /// `self * self`.
    fn square(&self) -> Self {
        self.clone() * self
    }

    fn is_finite(&self) -> bool;
    fn is_zero(&self) -> bool;

    /// Scientific notation with `digits` significant digits.
    fn to_decimal(&self, digits: usize) -> String;
    fn parse_decimal(ctx: &ScalarContext, s: &str) -> Result<Self>;
}

impl Real for f64 {
    #[inline]
    fn from_f64(_: &ScalarContext, v: f64) -> Self {
        v
    }
    #[inline]
    fn from_i64(_: &ScalarContext, v: i64) -> Self {
        v as f64
    }
    #[inline]
    fn to_f64(&self) -> f64 {
        *self
    }
    #[inline]
    fn like_f64(&self, v: f64) -> Self {
        v
    }
    #[inline]
    fn like_i64(&self, v: i64) -> Self {
        v as f64
    }
    fn pi(_: &ScalarContext) -> Self {
        std::f64::consts::PI
    }
    fn two_pi(_: &ScalarContext) -> Self {
        std::f64::consts::TAU
    }
    fn e(_: &ScalarContext) -> Self {
        std::f64::consts::E
    }
    #[inline]
    fn sqrt(&self) -> Self {
        f64::sqrt(*self)
    }
    #[inline]
    fn exp(&self) -> Self {
        f64::exp(*self)
    }
    #[inline]
    fn ln(&self) -> Self {
        f64::ln(*self)
    }
    #[inline]
    fn abs(&self) -> Self {
        f64::abs(*self)
    }
    #[inline]
    fn sin_cos(&self) -> (Self, Self) {
        f64::sin_cos(*self)
    }
    #[inline]
    fn square(&self) -> Self {
        self * self
    }
    fn is_finite(&self) -> bool {
        f64::is_finite(*self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn to_decimal(&self, digits: usize) -> String {
        format!("{:.*e}", digits.max(1) - 1, self)
    }
    fn parse_decimal(_: &ScalarContext, s: &str) -> Result<Self> {
        s.trim()
            .parse::<f64>()
            .map_err(|e| Error::Config(format!("cannot parse {s:?} as a number: {e}")))
    }
}
