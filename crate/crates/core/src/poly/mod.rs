//! Monomials, monomial orders and sparse multivariate polynomials.

mod exponent;
mod family;
mod groebner;
mod order;

pub use self::exponent::{Exponent, LatticeIndex};
pub use self::family::{
    border, is_distinguished, is_order_ideal, minkowski_difference, minkowski_sum, ExponentSet,
    FamilyKind, IndexFamily,
};
pub use self::groebner::{is_groebner_basis, normal_form, s_polynomial};
pub use self::order::{MonomialOrder, OrderKind};

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::arith::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("exponent set is not closed under division")]
    NotOrderIdeal,
    #[error("expected {expected} variables, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("negative exponent {0} where a monomial exponent is required")]
    NegativeExponent(Exponent),
    #[error("malformed exponent {0:?}")]
    MalformedExponent(String),
    #[error("unknown monomial order {0:?}")]
    UnknownOrder(String),
    #[error("unknown index family {0:?}")]
    UnknownFamily(String),
    #[error("variable precedence {0:?} is not a permutation")]
    BadPrecedence(Vec<usize>),
}

/// Sparse polynomial in `n` variables. Zero coefficients are never stored.
#[derive(Clone, PartialEq)]
pub struct Poly<S> {
    n: usize,
    terms: BTreeMap<Exponent, S>,
}

impl<S: Scalar> Poly<S> {
    pub fn zero(n: usize) -> Self {
        Poly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: S) -> Self {
        Self::monomial(Exponent::zero(n), c)
    }

    pub fn monomial(exp: Exponent, c: S) -> Self {
        let mut p = Poly::zero(exp.len());
        p.add_term(exp, c);
        p
    }

    /// The variable `X_{i+1}`.
    pub fn var(n: usize, i: usize) -> Self {
        Self::monomial(Exponent::unit(n, i), S::one())
    }

    /// Sums repeated exponents. Panics if an exponent has the wrong length.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Exponent, S)>) -> Self {
        let mut p = Poly::zero(n);
        for (e, c) in terms {
            assert_eq!(
                e.len(),
                n,
                "exponent {e} in a polynomial with {n} variables"
            );
            p.add_term(e, c);
        }
        p
    }

    /// Univariate polynomial from coefficients in increasing degree.
    pub fn from_coeffs(coeffs: impl IntoIterator<Item = S>) -> Self {
        Self::from_terms(
            1,
            coeffs
                .into_iter()
                .enumerate()
                .map(|(i, c)| (Exponent::new(vec![i as i64]), c)),
        )
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &S)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &Exponent> {
        self.terms.keys()
    }

    pub fn coeff(&self, exp: &Exponent) -> S {
        self.terms.get(exp).cloned().unwrap_or_else(S::zero)
    }

    pub fn add_term(&mut self, exp: Exponent, c: S) {
        debug_assert_eq!(exp.len(), self.n);
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&exp) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(exp, sum);
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn total_degree(&self) -> Option<i64> {
        self.terms.keys().map(Exponent::degree).max()
    }

    /// Degree in the single variable of a univariate polynomial.
    pub fn degree(&self) -> Option<usize> {
        debug_assert_eq!(self.n, 1);
        self.terms.keys().map(|e| e.coords()[0] as usize).max()
    }

    /// Univariate coefficient list, lowest degree first.
    pub fn coeffs(&self) -> Vec<S> {
        debug_assert_eq!(self.n, 1);
        let mut out = vec![S::zero(); self.degree().map_or(0, |d| d + 1)];
        for (e, c) in &self.terms {
            out[e.coords()[0] as usize] = c.clone();
        }
        out
    }

    pub fn leading_term(&self, order: &MonomialOrder) -> Option<(&Exponent, &S)> {
        self.terms.iter().max_by(|a, b| order.compare(a.0, b.0))
    }

    pub fn scale(&self, c: &S) -> Self {
        Poly::from_terms(
            self.n,
            self.terms
                .iter()
                .map(|(e, v)| (e.clone(), v.clone() * c.clone())),
        )
    }

    pub fn mul_term(&self, exp: &Exponent, c: &S) -> Self {
        Poly::from_terms(
            self.n,
            self.terms
                .iter()
                .map(|(e, v)| (e + exp, v.clone() * c.clone())),
        )
    }

    pub fn add(&self, rhs: &Poly<S>) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Poly<S>) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), -c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &Poly<S>) -> Self {
        let mut out = Poly::zero(self.n);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                out.add_term(a + b, x.clone() * y.clone());
            }
        }
        out
    }

    /// Evaluates at `point`. Panics on a dimension mismatch.
    pub fn eval(&self, point: &[S]) -> S {
        assert_eq!(point.len(), self.n, "point dimension");
        self.terms.iter().fold(S::zero(), |acc, (e, c)| {
            acc + c.clone() * monomial_value(e, point)
        })
    }

    /// Converts coefficients to another scalar type.
    pub fn map_coeffs<T: Scalar>(&self, f: impl Fn(&S) -> T) -> Poly<T> {
        Poly::from_terms(self.n, self.terms.iter().map(|(e, c)| (e.clone(), f(c))))
    }
}

/// `x^α` for natural `α`. Panics on a negative coordinate at a zero entry.
pub fn monomial_value<S: Scalar>(exp: &Exponent, point: &[S]) -> S {
    exp.coords()
        .iter()
        .zip(point)
        .fold(S::one(), |acc, (&a, x)| {
            acc * x.pow_i64(a).expect("negative power of zero")
        })
}

impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let order = MonomialOrder::degrevlex(self.n);
        let mut first = true;
        for e in order.sorted(self.terms.keys()).iter().rev() {
            let c = &self.terms[e];
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let vars: Vec<String> = e
                .coords()
                .iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(i, &a)| {
                    if a == 1 {
                        format!("X{}", i + 1)
                    } else {
                        format!("X{}^{}", i + 1, a)
                    }
                })
                .collect();
            if vars.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                f.write_str(&vars.join("*"))?;
            } else {
                write!(f, "{c}*{}", vars.join("*"))?;
            }
        }
        Ok(())
    }
}

impl<S: fmt::Debug> fmt::Debug for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter()).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct PolyDoc<S> {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    terms: BTreeMap<String, S>,
}

/// JSON form `{"n": 2, "terms": {"(2,0)": "1", "(0,0)": "-1"}}`; `n` may be
/// omitted on input when at least one term is present.
impl<S: Scalar + Serialize> Serialize for Poly<S> {
    fn serialize<Z: Serializer>(&self, serializer: Z) -> Result<Z::Ok, Z::Error> {
        PolyDoc {
            n: Some(self.n),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.to_string(), c.clone()))
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de, S: Scalar + Deserialize<'de>> Deserialize<'de> for Poly<S> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = PolyDoc::<S>::deserialize(deserializer)?;
        let terms = doc
            .terms
            .into_iter()
            .map(|(k, c)| k.parse::<Exponent>().map(|e| (e, c)))
            .collect::<Result<Vec<_>, _>>()
            .map_err(D::Error::custom)?;
        let n = match (doc.n, terms.first()) {
            (Some(n), _) => n,
            (None, Some((e, _))) => e.len(),
            (None, None) => {
                return Err(D::Error::custom("empty polynomial needs an explicit \"n\""))
            }
        };
        if let Some((e, _)) = terms.iter().find(|(e, _)| e.len() != n) {
            return Err(D::Error::custom(format!(
                "exponent {e} does not have {n} coordinates"
            )));
        }
        Ok(Poly::from_terms(n, terms))
    }
}
