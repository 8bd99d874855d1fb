use std::ops::{Add, AddAssign, Div, DivAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::Constant;
use rug::Float;

use super::{Real, ScalarContext};
use crate::error::{Error, Result};

/// Arbitrary-precision binary float (MPFR). The precision of a value is
/// fixed when it is created from a [`ScalarContext`]; arithmetic keeps the
/// precision of the left operand.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct Mp(Float);

impl Mp {
    pub fn inner(&self) -> &Float {
        &self.0
    }

    pub fn precision_bits(&self) -> u32 {
        self.0.prec()
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $tra:ident, $method_a:ident) => {
        impl $tr for Mp {
            type Output = Mp;
            #[inline]
            fn $method(self, rhs: Mp) -> Mp {
                Mp(self.0.$method(rhs.0))
            }
        }
        impl<'a> $tr<&'a Mp> for Mp {
            type Output = Mp;
            #[inline]
            fn $method(self, rhs: &'a Mp) -> Mp {
                Mp(self.0.$method(&rhs.0))
            }
        }
        impl<'a> $tra<&'a Mp> for Mp {
            #[inline]
            fn $method_a(&mut self, rhs: &'a Mp) {
                self.0.$method_a(&rhs.0);
            }
        }
    };
}

binop!(Add, add, AddAssign, add_assign);
binop!(Sub, sub, SubAssign, sub_assign);
binop!(Mul, mul, MulAssign, mul_assign);
binop!(Div, div, DivAssign, div_assign);

impl Neg for Mp {
    type Output = Mp;
    fn neg(self) -> Mp {
        Mp(-self.0)
    }
}

impl Real for Mp {
    fn from_f64(ctx: &ScalarContext, v: f64) -> Self {
        Mp(Float::with_val(ctx.mantissa_bits(), v))
    }

    fn from_i64(ctx: &ScalarContext, v: i64) -> Self {
        Mp(Float::with_val(ctx.mantissa_bits(), v))
    }

    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }

    fn like_f64(&self, v: f64) -> Self {
        Mp(Float::with_val(self.0.prec(), v))
    }

    fn like_i64(&self, v: i64) -> Self {
        Mp(Float::with_val(self.0.prec(), v))
    }

    fn pi(ctx: &ScalarContext) -> Self {
        Mp(Float::with_val(ctx.mantissa_bits(), Constant::Pi))
    }

    fn sqrt(&self) -> Self {
        Mp(self.0.clone().sqrt())
    }

    fn exp(&self) -> Self {
        Mp(self.0.clone().exp())
    }

    fn ln(&self) -> Self {
        Mp(self.0.clone().ln())
    }

    fn abs(&self) -> Self {
        Mp(self.0.clone().abs())
    }

    fn sin_cos(&self) -> (Self, Self) {
        let (s, c) = self.0.clone().sin_cos(Float::new(self.0.prec()));
        (Mp(s), Mp(c))
    }

    fn square(&self) -> Self {
        Mp(self.0.clone().square())
    }

    fn is_finite(&self) -> bool {
        self.0.is_finite()
    }

    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    fn to_decimal(&self, digits: usize) -> String {
        self.0.to_string_radix(10, Some(digits.max(1)))
    }

    fn parse_decimal(ctx: &ScalarContext, s: &str) -> Result<Self> {
        let parsed = Float::parse(s.trim())
            .map_err(|e| Error::Config(format!("cannot parse {s:?} as a number: {e}")))?;
        Ok(Mp(Float::with_val(ctx.mantissa_bits(), parsed)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ulp_distance(a: f64, b: f64) -> u64 {
        (a.to_bits() as i64 - b.to_bits() as i64).unsigned_abs()
    }

    #[test]
    fn fifteen_digits_track_doubles_to_one_ulp() {
        let ctx = ScalarContext::arbitrary(15).unwrap();
        let operands = [
            (1.0 / 3.0, 2.0 / 7.0),
            (12345.678, -0.000321),
            (std::f64::consts::PI, std::f64::consts::E),
            (1e-12, 7.5e11),
            (-5.25, 0.1),
        ];
        for (a, b) in operands {
            let (ma, mb) = (Mp::from_f64(&ctx, a), Mp::from_f64(&ctx, b));
            let cases = [
                ((ma.clone() + &mb).to_f64(), a + b),
                ((ma.clone() - &mb).to_f64(), a - b),
                ((ma.clone() * &mb).to_f64(), a * b),
                ((ma.clone() / &mb).to_f64(), a / b),
            ];
            for (mp, hw) in cases {
                assert!(ulp_distance(mp, hw) <= 1, "{mp} vs {hw}");
            }
        }
    }

    #[test]
    fn constants_at_full_precision() {
        let ctx = ScalarContext::arbitrary(100).unwrap();
        let pi = Mp::pi(&ctx);
        let expected = "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798215";
        assert!(pi.to_decimal(100).starts_with(&expected[..98]));
        let two_pi = Mp::two_pi(&ctx);
        assert_eq!((two_pi / &pi).to_decimal(50), Mp::from_i64(&ctx, 2).to_decimal(50));
        let e = Mp::e(&ctx);
        assert!(e
            .to_decimal(64)
            .starts_with("2.7182818284590452353602874713526624977572470936999595749669676"));
    }

    #[test]
    fn decimal_roundtrip_keeps_all_digits() {
        let ctx = ScalarContext::arbitrary(64).unwrap();
        let third = Mp::one(&ctx) / &Mp::from_i64(&ctx, 3);
        let text = third.to_decimal(ctx.print_digits() + 2);
        let back = Mp::parse_decimal(&ctx, &text).unwrap();
        let diff = (back - &third).abs().to_f64();
        assert!(diff <= ctx.epsilon());
    }
}
