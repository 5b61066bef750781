use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Rem, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{ArithError, Scalar};

/// Search bound used by [`integer_log`].
pub const DEFAULT_LOG_BOUND: u32 = 4096;

/// Arbitrary precision rational number, always stored in lowest terms with a
/// positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Panics when `den == 0`; see [`Rational::checked_new`].
    pub fn new(num: i64, den: i64) -> Self {
        Self::checked_new(num, den).expect("zero denominator")
    }

    pub fn checked_new(num: i64, den: i64) -> Result<Self, ArithError> {
        if den == 0 {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num.into(), den.into())))
    }

    pub fn integer(value: i64) -> Self {
        Rational(BigRational::from_integer(value.into()))
    }

    pub fn from_bigints(num: BigInt, den: BigInt) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(Rational(BigRational::new(num, den)))
    }

    pub fn from_bigint(value: BigInt) -> Self {
        Rational(BigRational::from_integer(value))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Rational, ArithError> {
        if rhs.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    pub fn inv(&self) -> Result<Rational, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big(&self) -> &BigRational {
        &self.0
    }
}

/// Parses `[-]digits` or `[-]digits/digits` into canonical form.
pub fn rational_parse(text: &str) -> Result<Rational, ArithError> {
    let malformed = || ArithError::MalformedLiteral(text.to_string());
    let (sign, body) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text),
    };
    let digits = |s: &str| -> Result<BigInt, ArithError> {
        if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        s.parse::<BigInt>().map_err(|_| malformed())
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (digits(n)?, digits(d)?),
        None => (digits(body)?, BigInt::one()),
    };
    if den.is_zero() {
        return Err(ArithError::ZeroDenominator);
    }
    Rational::from_bigints(num * sign, den)
}

impl FromStr for Rational {
    type Err = ArithError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        rational_parse(s)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Rational {
    fn from(value: i64) -> Self {
        Rational::integer(value)
    }
}

impl From<BigInt> for Rational {
    fn from(value: BigInt) -> Self {
        Rational::from_bigint(value)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0.$method(rhs.0))
            }
        }

        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational((&self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
// Panics on a zero divisor, like the integer types; use `checked_div` to recover.
forward_binop!(Div, div);
forward_binop!(Rem, rem);

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl Zero for Rational {
    fn zero() -> Self {
        Rational(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
}

impl One for Rational {
    fn one() -> Self {
        Rational(BigRational::one())
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn from_i64(value: i64) -> Self {
        Rational::integer(value)
    }

    fn from_rational(value: &Rational) -> Self {
        value.clone()
    }

    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }

    fn is_negligible(&self, _tol: f64) -> bool {
        self.is_zero()
    }

    fn default_tolerance() -> f64 {
        0.0
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct RationalVisitor;

        impl Visitor<'_> for RationalVisitor {
            type Value = Rational;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a rational literal such as \"-3/4\" or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
                rational_parse(v).map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
                Ok(Rational::integer(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
                Ok(Rational::from_bigint(BigInt::from(v)))
            }
        }

        deserializer.deserialize_any(RationalVisitor)
    }
}

/// Natural `α` with `base^α == value`, searching up to [`DEFAULT_LOG_BOUND`].
pub fn integer_log(value: &Rational, base: &Rational) -> Result<Option<u32>, ArithError> {
    integer_log_bounded(value, base, DEFAULT_LOG_BOUND)
}

/// Returns `Ok(None)` once the powers have provably passed `value` in
/// magnitude, and `BoundExceeded` if the bound is hit first.
pub fn integer_log_bounded(
    value: &Rational,
    base: &Rational,
    bound: u32,
) -> Result<Option<u32>, ArithError> {
    let one = Rational::one();
    if base.is_zero() || base.abs() == one {
        return Err(ArithError::BadBase);
    }
    if value.is_zero() {
        return Ok(None);
    }
    let target = value.abs();
    let growing = base.abs() > one;
    let mut power = Rational::one();
    for alpha in 0..=bound {
        if &power == value {
            return Ok(Some(alpha));
        }
        let mag = power.abs();
        let passed = match mag.cmp(&target) {
            Ordering::Greater => growing,
            Ordering::Less => !growing,
            Ordering::Equal => false,
        };
        if passed {
            return Ok(None);
        }
        power = &power * base;
    }
    Err(ArithError::BoundExceeded(bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn parse_examples() {
        assert_eq!(rational_parse("6/4").unwrap(), r(3, 2));
        let z = rational_parse("-0/7").unwrap();
        assert_eq!(z, Rational::zero());
        assert_eq!(z.denom(), &BigInt::one());
        assert_eq!(z.to_string(), "0");
        assert_eq!(rational_parse("17").unwrap(), r(17, 1));
        assert_eq!(
            rational_parse("-12/-3"),
            Err(ArithError::MalformedLiteral("-12/-3".into()))
        );
    }

    #[test]
    fn parse_errors() {
        assert_eq!(rational_parse("1/0"), Err(ArithError::ZeroDenominator));
        for bad in ["", "-", "1/", "/2", "+3", "1.5", " 1", "1/2/3", "a"] {
            assert!(
                matches!(rational_parse(bad), Err(ArithError::MalformedLiteral(_))),
                "{bad}"
            );
        }
    }

    #[test]
    fn field_examples() {
        assert_eq!(r(1, 2) + r(1, 3), r(5, 6));
        assert_eq!(r(-2, 7).inv().unwrap(), r(-7, 2));
        assert_eq!(r(1, 3) * r(3, 1), Rational::one());
        assert_eq!(Rational::zero().inv(), Err(ArithError::DivisionByZero));
        assert_eq!(
            r(1, 2).checked_div(&Rational::zero()),
            Err(ArithError::DivisionByZero)
        );
        assert!(r(-1, 2) < r(1, 3));
    }

    #[test]
    fn integer_log_examples() {
        assert_eq!(integer_log(&r(8, 1), &r(2, 1)), Ok(Some(3)));
        assert_eq!(integer_log(&r(1, 1), &r(5, 1)), Ok(Some(0)));
        // oracle: repeated exact multiplication
        let mut p = Rational::one();
        for _ in 0..3 {
            p = p * r(1, 3);
        }
        assert_eq!(p, r(1, 27));
        assert_eq!(integer_log(&r(1, 27), &r(1, 3)), Ok(Some(3)));
        assert_eq!(integer_log(&r(-8, 1), &r(-2, 1)), Ok(Some(3)));
        assert_eq!(integer_log(&r(8, 1), &r(-2, 1)), Ok(None));
        assert_eq!(integer_log(&r(9, 1), &r(2, 1)), Ok(None));
        assert_eq!(integer_log(&r(4, 1), &r(1, 1)), Err(ArithError::BadBase));
        assert_eq!(integer_log(&r(4, 1), &r(-1, 1)), Err(ArithError::BadBase));
        assert_eq!(
            integer_log(&r(4, 1), &Rational::zero()),
            Err(ArithError::BadBase)
        );
        let big = Rational::from(2i64).pow_i64(40).unwrap();
        assert_eq!(
            integer_log_bounded(&big, &r(2, 1), 10),
            Err(ArithError::BoundExceeded(10))
        );
    }

    fn small_rational() -> impl Strategy<Value = Rational> {
        (-50i64..50, 1i64..30).prop_map(|(n, d)| r(n, d))
    }

    proptest! {
        #[test]
        fn field_axioms(a in small_rational(), b in small_rational(), c in small_rational()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &(-&a), Rational::zero());
            if !a.is_zero() {
                prop_assert_eq!(&a * &a.inv().unwrap(), Rational::one());
            }
        }

        #[test]
        fn parse_format_identity(a in small_rational()) {
            prop_assert_eq!(rational_parse(&a.to_string()).unwrap(), a);
        }

        #[test]
        fn integer_log_inverts_power(n in -9i64..10, d in 1i64..6, alpha in 0u32..40) {
            let b = r(n, d);
            prop_assume!(!b.is_zero() && b.abs() != Rational::one());
            let v = b.pow_i64(alpha as i64).unwrap();
            prop_assert_eq!(integer_log(&v, &b), Ok(Some(alpha)));
        }
    }
}
