use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{ArithError, Rational, Scalar};

/// A finite `f64`.
///
/// Operator arithmetic is unchecked so it can satisfy the generic numeric
/// traits; the `checked_*` methods and [`Approx::ensure_finite`] report
/// overflow and NaN as [`ArithError::NonFinite`].
#[derive(Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Approx(f64);

impl Approx {
    pub fn new(value: f64) -> Result<Self, ArithError> {
        if value.is_finite() {
            Ok(Approx(value))
        } else {
            Err(ArithError::NonFinite(value))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn ensure_finite(self) -> Result<Self, ArithError> {
        Approx::new(self.0)
    }

    pub fn checked_add(self, rhs: Approx) -> Result<Approx, ArithError> {
        Approx::new(self.0 + rhs.0)
    }

    pub fn checked_sub(self, rhs: Approx) -> Result<Approx, ArithError> {
        Approx::new(self.0 - rhs.0)
    }

    pub fn checked_mul(self, rhs: Approx) -> Result<Approx, ArithError> {
        Approx::new(self.0 * rhs.0)
    }

    pub fn checked_div(self, rhs: Approx) -> Result<Approx, ArithError> {
        if rhs.0 == 0.0 {
            return Err(ArithError::DivisionByZero);
        }
        Approx::new(self.0 / rhs.0)
    }
}

impl TryFrom<f64> for Approx {
    type Error = ArithError;

    fn try_from(value: f64) -> Result<Self, Self::Error> {
        Approx::new(value)
    }
}

impl From<Approx> for f64 {
    fn from(value: Approx) -> f64 {
        value.0
    }
}

impl fmt::Display for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for Approx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(&self.0, f)
    }
}

macro_rules! float_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Approx {
            type Output = Approx;
            fn $method(self, rhs: Approx) -> Approx {
                Approx(self.0.$method(rhs.0))
            }
        }
    };
}

float_binop!(Add, add);
float_binop!(Sub, sub);
float_binop!(Mul, mul);
float_binop!(Div, div);
float_binop!(Rem, rem);

impl Neg for Approx {
    type Output = Approx;
    fn neg(self) -> Approx {
        Approx(-self.0)
    }
}

impl Zero for Approx {
    fn zero() -> Self {
        Approx(0.0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0.0
    }
}

impl One for Approx {
    fn one() -> Self {
        Approx(1.0)
    }
}

impl Scalar for Approx {
    const EXACT: bool = false;

    fn from_i64(value: i64) -> Self {
        Approx(value as f64)
    }

    fn from_rational(value: &Rational) -> Self {
        Approx(value.to_f64())
    }

    fn to_f64(&self) -> f64 {
        self.0
    }

    fn is_negligible(&self, tol: f64) -> bool {
        self.0.abs() <= tol
    }

    fn default_tolerance() -> f64 {
        1e-10
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_finite() {
        assert!(Approx::new(f64::NAN).is_err());
        assert!(Approx::new(f64::INFINITY).is_err());
        assert_eq!(Approx::new(1.5).unwrap().value(), 1.5);
        let huge = Approx::new(f64::MAX).unwrap();
        assert_eq!(
            huge.checked_mul(Approx::new(2.0).unwrap()),
            Err(ArithError::NonFinite(f64::INFINITY))
        );
        assert_eq!(
            Approx::one().checked_div(Approx::zero()),
            Err(ArithError::DivisionByZero)
        );
        assert!((huge * huge).ensure_finite().is_err());
    }
}
