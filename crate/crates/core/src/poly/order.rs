use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{Exponent, PolyError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Lex,
    Grlex,
    Degrevlex,
}

/// A monomial order on exponents of a fixed length.
///
/// `precedence[0]` is the largest variable, so `lex` with the identity
/// precedence has `X1 > X2 > … > Xn`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialOrder {
    kind: OrderKind,
    precedence: Vec<usize>,
}

impl MonomialOrder {
    pub fn new(kind: OrderKind, n: usize) -> Self {
        MonomialOrder {
            kind,
            precedence: (0..n).collect(),
        }
    }

    pub fn lex(n: usize) -> Self {
        Self::new(OrderKind::Lex, n)
    }

    pub fn grlex(n: usize) -> Self {
        Self::new(OrderKind::Grlex, n)
    }

    pub fn degrevlex(n: usize) -> Self {
        Self::new(OrderKind::Degrevlex, n)
    }

    /// `precedence` must be a permutation of `0..n`.
    pub fn with_precedence(kind: OrderKind, precedence: Vec<usize>) -> Result<Self, PolyError> {
        let mut seen = vec![false; precedence.len()];
        for &p in &precedence {
            if p >= seen.len() || std::mem::replace(&mut seen[p], true) {
                return Err(PolyError::BadPrecedence(precedence));
            }
        }
        Ok(MonomialOrder { kind, precedence })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.precedence.len()
    }

    pub fn precedence(&self) -> &[usize] {
        &self.precedence
    }

    pub fn is_degree_compatible(&self) -> bool {
        !matches!(self.kind, OrderKind::Lex)
    }

    pub fn compare(&self, a: &Exponent, b: &Exponent) -> Ordering {
        debug_assert_eq!(a.len(), b.len());
        let (a, b) = (a.coords(), b.coords());
        let lex = || {
            self.precedence
                .iter()
                .map(|&i| a[i].cmp(&b[i]))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        };
        let degree = || a.iter().sum::<i64>().cmp(&b.iter().sum::<i64>());
        match self.kind {
            OrderKind::Lex => lex(),
            OrderKind::Grlex => degree().then_with(lex),
            OrderKind::Degrevlex => degree().then_with(|| {
                self.precedence
                    .iter()
                    .rev()
                    .map(|&i| b[i].cmp(&a[i]))
                    .find(|o| o.is_ne())
                    .unwrap_or(Ordering::Equal)
            }),
        }
    }

    pub fn sort(&self, exps: &mut [Exponent]) {
        exps.sort_by(|a, b| self.compare(a, b));
    }

    pub fn sorted<'a>(&self, exps: impl IntoIterator<Item = &'a Exponent>) -> Vec<Exponent> {
        let mut v: Vec<Exponent> = exps.into_iter().cloned().collect();
        self.sort(&mut v);
        v
    }

    pub fn max<'a>(&self, exps: impl IntoIterator<Item = &'a Exponent>) -> Option<&'a Exponent> {
        exps.into_iter().max_by(|a, b| self.compare(a, b))
    }

    pub fn min<'a>(&self, exps: impl IntoIterator<Item = &'a Exponent>) -> Option<&'a Exponent> {
        exps.into_iter().min_by(|a, b| self.compare(a, b))
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::Lex => "lex",
            OrderKind::Grlex => "grlex",
            OrderKind::Degrevlex => "degrevlex",
        })
    }
}

impl FromStr for OrderKind {
    type Err = PolyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lex" => Ok(OrderKind::Lex),
            "grlex" => Ok(OrderKind::Grlex),
            "degrevlex" | "grevlex" => Ok(OrderKind::Degrevlex),
            other => Err(PolyError::UnknownOrder(other.to_string())),
        }
    }
}
