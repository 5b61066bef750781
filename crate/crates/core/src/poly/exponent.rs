use std::fmt;
use std::ops::{Add, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::PolyError;

/// A monomial exponent in ℕⁿ, or a lattice index in ℤⁿ.
///
/// Coordinates are signed so the same type serves both domains; operations
/// that only make sense on ℕⁿ check [`Exponent::is_natural`].
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Exponent(Vec<i64>);

/// Exponent used as an index into ℤⁿ.
pub type LatticeIndex = Exponent;

impl Exponent {
    pub fn new(coords: Vec<i64>) -> Self {
        Exponent(coords)
    }

    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    /// The exponent of the variable `X_{i+1}`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        Exponent(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn is_natural(&self) -> bool {
        self.0.iter().all(|&c| c >= 0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    /// Componentwise `self <= other`, i.e. `X^self` divides `X^other`.
    pub fn divides(&self, other: &Exponent) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn scaled(&self, k: i64) -> Exponent {
        Exponent(self.0.iter().map(|c| c * k).collect())
    }

    pub fn negated(&self) -> Exponent {
        self.scaled(-1)
    }

    pub fn with_coord(&self, i: usize, delta: i64) -> Exponent {
        let mut v = self.0.clone();
        v[i] += delta;
        Exponent(v)
    }

    /// Immediate divisors `self / X_i` that stay in ℕⁿ.
    pub fn predecessors(&self) -> impl Iterator<Item = Exponent> + '_ {
        (0..self.len())
            .filter(|&i| self.0[i] > 0)
            .map(|i| self.with_coord(i, -1))
    }

    pub fn ensure_len(&self, n: usize) -> Result<(), PolyError> {
        if self.len() == n {
            Ok(())
        } else {
            Err(PolyError::DimensionMismatch {
                expected: n,
                found: self.len(),
            })
        }
    }
}

impl Add for &Exponent {
    type Output = Exponent;
    fn add(self, rhs: &Exponent) -> Exponent {
        debug_assert_eq!(self.len(), rhs.len());
        Exponent(self.0.iter().zip(&rhs.0).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &Exponent {
    type Output = Exponent;
    fn sub(self, rhs: &Exponent) -> Exponent {
        debug_assert_eq!(self.len(), rhs.len());
        Exponent(self.0.iter().zip(&rhs.0).map(|(a, b)| a - b).collect())
    }
}

impl From<Vec<i64>> for Exponent {
    fn from(v: Vec<i64>) -> Self {
        Exponent(v)
    }
}

impl<const N: usize> From<[i64; N]> for Exponent {
    fn from(v: [i64; N]) -> Self {
        Exponent(v.to_vec())
    }
}

/// Tuple notation: `(2,0)`; a single coordinate prints as `(3)`.
impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Accepts `(a,b,…)`, a trailing comma as in `(3,)`, and surrounding spaces.
impl FromStr for Exponent {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || PolyError::MalformedExponent(s.to_string());
        let inner = s
            .trim()
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(bad)?;
        let inner = inner.trim();
        let inner = inner.strip_suffix(',').unwrap_or(inner);
        if inner.trim().is_empty() {
            return Ok(Exponent(Vec::new()));
        }
        inner
            .split(',')
            .map(|c| c.trim().parse::<i64>().map_err(|_| bad()))
            .collect::<Result<Vec<_>, _>>()
            .map(Exponent)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_notation() {
        let e: Exponent = "(2,0)".parse().unwrap();
        assert_eq!(e, Exponent::from([2, 0]));
        assert_eq!(e.to_string(), "(2,0)");
        assert_eq!("(1,)".parse::<Exponent>().unwrap(), Exponent::from([1]));
        assert_eq!(
            " ( -1 , 4 ) ".parse::<Exponent>().unwrap(),
            Exponent::from([-1, 4])
        );
        assert!("2,0".parse::<Exponent>().is_err());
        assert!("(a)".parse::<Exponent>().is_err());
    }

    #[test]
    fn divisibility_and_arith() {
        let a = Exponent::from([1, 2]);
        let b = Exponent::from([2, 2]);
        assert!(a.divides(&b));
        assert!(!b.divides(&a));
        assert_eq!(&b - &a, Exponent::from([1, 0]));
        assert!(!(&a - &b).is_natural());
        assert_eq!(
            a.predecessors().collect::<Vec<_>>(),
            vec![Exponent::from([0, 2]), Exponent::from([1, 1])]
        );
    }
}
