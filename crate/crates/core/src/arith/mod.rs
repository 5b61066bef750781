//! Scalar arithmetic.
//!
//! Every algorithm in this crate is written against the [`Scalar`] trait so the
//! same code runs over exact rationals ([`Rational`]) and over checked
//! floating point ([`Approx`]). Plain `f64`/`f32` also implement the trait for
//! callers that want raw floats.

mod approx;
mod rational;

pub use self::approx::Approx;
pub use self::rational::{
    integer_log, integer_log_bounded, rational_parse, Rational, DEFAULT_LOG_BOUND,
};

use std::fmt;
use std::ops::Neg;

use num_traits::{NumOps, One, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ArithError {
    #[error("malformed rational literal {0:?}")]
    MalformedLiteral(String),
    #[error("zero denominator in rational literal")]
    ZeroDenominator,
    #[error("division by zero")]
    DivisionByZero,
    #[error("logarithm base must not be 0, 1 or -1")]
    BadBase,
    #[error("no exponent found below the bound {0}")]
    BoundExceeded(u32),
    #[error("non-finite floating point value {0}")]
    NonFinite(f64),
}

/// A field element usable by the generic linear algebra and polynomial code.
///
/// Exact implementations ignore tolerances; floating implementations compare
/// magnitudes against them.
pub trait Scalar:
    Clone
    + fmt::Debug
    + fmt::Display
    + PartialEq
    + Zero
    + One
    + NumOps
    + Neg<Output = Self>
    + Send
    + Sync
    + 'static
{
    /// True for exact fields, where zero tests are decidable.
    const EXACT: bool;

    fn from_i64(value: i64) -> Self;

    fn from_rational(value: &Rational) -> Self;

    fn to_f64(&self) -> f64;

    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }

    /// Zero test. `tol` is an absolute threshold and is ignored by exact types.
    fn is_negligible(&self, tol: f64) -> bool;

    /// Tolerance used when a caller does not pass one explicitly.
    fn default_tolerance() -> f64;

    fn checked_inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(Self::one() / self.clone())
        }
    }

    /// Integer power with the convention `0^0 = 1`; `None` for `0^e`, `e < 0`.
    fn pow_i64(&self, exp: i64) -> Option<Self> {
        let base = if exp < 0 {
            self.checked_inv()?
        } else {
            self.clone()
        };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * sq.clone();
            }
            e >>= 1;
            if e > 0 {
                sq = sq.clone() * sq;
            }
        }
        Some(acc)
    }
}

/// Floating scalars that can be built back from an `f64`.
pub trait FloatScalar: Scalar {
    /// `None` when `value` is not representable (non-finite for [`Approx`]).
    fn from_f64(value: f64) -> Option<Self>;
}

impl FloatScalar for Approx {
    fn from_f64(value: f64) -> Option<Self> {
        Approx::new(value).ok()
    }
}

macro_rules! impl_float_scalar {
    ($($t:ty),*) => {
        $(
            impl Scalar for $t {
                const EXACT: bool = false;

                fn from_i64(value: i64) -> Self {
                    value as $t
                }

                fn from_rational(value: &Rational) -> Self {
                    value.to_f64() as $t
                }

                fn to_f64(&self) -> f64 {
                    *self as f64
                }

                fn is_negligible(&self, tol: f64) -> bool {
                    (*self as f64).abs() <= tol
                }

                fn default_tolerance() -> f64 {
                    (<$t>::EPSILON as f64).sqrt() * 1e-2
                }
            }

            impl FloatScalar for $t {
                fn from_f64(value: f64) -> Option<Self> {
                    Some(value as $t)
                }
            }
        )*
    };
}

impl_float_scalar!(f32, f64);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pow_convention() {
        assert_eq!(Rational::zero().pow_i64(0), Some(Rational::one()));
        assert_eq!(Rational::zero().pow_i64(-1), None);
        assert_eq!(Rational::from_i64(2).pow_i64(-3), Some(Rational::new(1, 8)));
        assert_eq!(3.0f64.pow_i64(4), Some(81.0));
        assert_eq!(2.0f32.pow_i64(-1), Some(0.5));
    }
}
