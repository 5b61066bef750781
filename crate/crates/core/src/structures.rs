//! Concrete Prony structures and the generators that feed them.
//!
//! Hankel and Toeplitz matrices of samples, the Chebyshev structure with its
//! change of basis, and oracles for exponential sums, sparse polynomials in
//! monomial or Chebyshev form, Gaussian sums and commuting operators.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{integer_log, FloatScalar, Rational, Scalar};
use crate::linalg::Matrix;
use crate::poly::{minkowski_difference, minkowski_sum, Exponent, IndexFamily, MonomialOrder};
use crate::prony::{Domain, Layout, OracleError, PronyError, PronyStructure, SampleOracle};
use crate::vanish::PointSet;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StructureError {
    #[error("invalid generator: {0}")]
    SpecInvalid(String),
    #[error("operators do not commute")]
    NonCommuting,
    #[error("label {0} is not in the image of the labeling map")]
    DecodeFailure(String),
    #[error("projection direction must be nonzero")]
    ZeroDirection,
    #[error("generator kind {0} is only available in float mode")]
    FloatOnly(&'static str),
}

fn spec_invalid(msg: impl Into<String>) -> StructureError {
    StructureError::SpecInvalid(msg.into())
}

fn with_labels<S: Scalar>(m: Matrix<S>, rows: &[Exponent], cols: &[Exponent]) -> Matrix<S> {
    m.with_labels(Some(rows.to_vec()), Some(cols.to_vec()))
        .expect("index families have no duplicates")
}

/// `(f(α+β))` over `rows × cols`.
pub fn hankel_matrix<S: Scalar>(
    rows: &[Exponent],
    cols: &[Exponent],
    oracle: &mut SampleOracle<S>,
) -> Result<Matrix<S>, PronyError> {
    let needed: Vec<Exponent> = minkowski_sum(
        &rows.iter().cloned().collect(),
        &cols.iter().cloned().collect(),
    )
    .into_iter()
    .collect();
    let values: BTreeMap<Exponent, S> =
        needed.iter().cloned().zip(oracle.fetch(&needed)?).collect();
    let m = Matrix::from_fn(rows.len(), cols.len(), |i, j| {
        values[&(&rows[i] + &cols[j])].clone()
    });
    Ok(with_labels(m, rows, cols))
}

/// `(f(β−α))` over `rows × cols`; the oracle must accept negative indices.
pub fn toeplitz_matrix<S: Scalar>(
    rows: &[Exponent],
    cols: &[Exponent],
    oracle: &mut SampleOracle<S>,
) -> Result<Matrix<S>, PronyError> {
    let needed: Vec<Exponent> = minkowski_difference(
        &rows.iter().cloned().collect(),
        &cols.iter().cloned().collect(),
    )
    .into_iter()
    .collect();
    if oracle.domain() == Domain::Nat {
        if let Some(bad) = needed.iter().find(|e| !e.is_natural()) {
            return Err(OracleError::DomainMismatch(bad.clone()).into());
        }
    }
    let values: BTreeMap<Exponent, S> =
        needed.iter().cloned().zip(oracle.fetch(&needed)?).collect();
    let m = Matrix::from_fn(rows.len(), cols.len(), |i, j| {
        values[&(&cols[j] - &rows[i])].clone()
    });
    Ok(with_labels(m, rows, cols))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Hankel {
    pub layout: Layout,
}

impl Hankel {
    pub fn new(layout: Layout) -> Self {
        Hankel { layout }
    }

    pub fn standard(family: IndexFamily) -> Self {
        Hankel::new(Layout::standard(family))
    }
}

impl<S: Scalar> PronyStructure<S> for Hankel {
    fn n(&self) -> usize {
        self.layout.n()
    }

    fn order(&self) -> &MonomialOrder {
        &self.layout.order
    }

    fn columns(&self, d: usize) -> Vec<Exponent> {
        self.layout.columns(d)
    }

    fn build(&self, d: usize, oracle: &mut SampleOracle<S>) -> Result<Matrix<S>, PronyError> {
        hankel_matrix(&self.layout.rows(d), &self.layout.columns(d), oracle)
    }

    fn required_indices(&self, d: usize) -> BTreeSet<Exponent> {
        minkowski_sum(
            &self.layout.rows(d).into_iter().collect(),
            &self.layout.columns(d).into_iter().collect(),
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Toeplitz {
    pub layout: Layout,
}

impl Toeplitz {
    pub fn new(layout: Layout) -> Self {
        Toeplitz { layout }
    }

    pub fn standard(family: IndexFamily) -> Self {
        Toeplitz::new(Layout::standard(family))
    }
}

impl<S: Scalar> PronyStructure<S> for Toeplitz {
    fn n(&self) -> usize {
        self.layout.n()
    }

    fn order(&self) -> &MonomialOrder {
        &self.layout.order
    }

    fn columns(&self, d: usize) -> Vec<Exponent> {
        self.layout.columns(d)
    }

    fn build(&self, d: usize, oracle: &mut SampleOracle<S>) -> Result<Matrix<S>, PronyError> {
        toeplitz_matrix(&self.layout.rows(d), &self.layout.columns(d), oracle)
    }

    fn required_indices(&self, d: usize) -> BTreeSet<Exponent> {
        minkowski_difference(
            &self.layout.rows(d).into_iter().collect(),
            &self.layout.columns(d).into_iter().collect(),
        )
    }
}

/// `T_k(x)` by the three-term recurrence.
pub fn chebyshev_t<S: Scalar>(k: u64, x: &S) -> S {
    let two = S::from_i64(2);
    let (mut prev, mut cur) = (S::one(), x.clone());
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = two.clone() * x.clone() * cur.clone() - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// `T_i·T_j = ½(T_{i+j} + T_{|i−j|})`, with equal indices merged.
pub fn cheb_linearize(i: u64, j: u64) -> Vec<(u64, Rational)> {
    let (a, b) = (i + j, i.abs_diff(j));
    if a == b {
        vec![(a, Rational::integer(1))]
    } else {
        vec![(a, Rational::new(1, 2)), (b, Rational::new(1, 2))]
    }
}

/// `(d+1)×(d+1)` matrix whose column `j` holds the coordinates of `X^j` in `T₀, …, T_d`.
pub fn chebyshev_psi<S: Scalar>(d: usize) -> Matrix<S> {
    let half = S::one() / S::from_i64(2);
    let mut cols: Vec<Vec<S>> = vec![vec![S::zero(); d + 1]];
    cols[0][0] = S::one();
    for j in 1..=d {
        let prev = &cols[j - 1];
        let mut next = vec![S::zero(); d + 1];
        for (k, c) in prev.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // X·T₀ = T₁, X·T_k = (T_{k+1} + T_{k−1}) / 2
            if k == 0 {
                next[1] = next[1].clone() + c.clone();
            } else {
                next[k + 1] = next[k + 1].clone() + half.clone() * c.clone();
                next[k - 1] = next[k - 1].clone() + half.clone() * c.clone();
            }
        }
        cols.push(next);
    }
    Matrix::from_fn(d + 1, d + 1, |i, j| cols[j][i].clone())
}

/// Univariate Chebyshev structure, `P_d = P′_d·ψ` with `P′_d = (f(i+j) + f(|i−j|))`.
#[derive(Debug, Clone, PartialEq)]
pub struct Chebyshev {
    pub layout: Layout,
}

impl Default for Chebyshev {
    fn default() -> Self {
        Chebyshev {
            layout: Layout::standard(IndexFamily::total(1)),
        }
    }
}

impl Chebyshev {
    /// The sum of Hankel and Toeplitz parts before the change of basis.
    pub fn prime<S: Scalar>(
        &self,
        d: usize,
        oracle: &mut SampleOracle<S>,
    ) -> Result<Matrix<S>, PronyError> {
        let rows = self.layout.rows(d);
        let cols = self.layout.columns(d);
        let needed: Vec<Exponent> = self.required(&rows, &cols).into_iter().collect();
        let values: BTreeMap<Exponent, S> =
            needed.iter().cloned().zip(oracle.fetch(&needed)?).collect();
        let at = |k: i64| values[&Exponent::from([k])].clone();
        let m = Matrix::from_fn(rows.len(), cols.len(), |i, j| {
            let (a, b) = (rows[i].coords()[0], cols[j].coords()[0]);
            at(a + b) + at((a - b).abs())
        });
        Ok(with_labels(m, &rows, &cols))
    }

    fn required(&self, rows: &[Exponent], cols: &[Exponent]) -> BTreeSet<Exponent> {
        rows.iter()
            .flat_map(|r| {
                cols.iter().flat_map(move |c| {
                    [
                        r + c,
                        Exponent::from([(r.coords()[0] - c.coords()[0]).abs()]),
                    ]
                })
            })
            .collect()
    }
}

impl<S: Scalar> PronyStructure<S> for Chebyshev {
    fn n(&self) -> usize {
        1
    }

    fn order(&self) -> &MonomialOrder {
        &self.layout.order
    }

    fn columns(&self, d: usize) -> Vec<Exponent> {
        self.layout.columns(d)
    }

    fn build(&self, d: usize, oracle: &mut SampleOracle<S>) -> Result<Matrix<S>, PronyError> {
        let prime = self.prime(d, oracle)?;
        let rows = prime
            .row_labels()
            .map(<[Exponent]>::to_vec)
            .unwrap_or_default();
        let cols = self.layout.columns(d);
        Ok(with_labels(prime.mul(&chebyshev_psi(d))?, &rows, &cols))
    }

    fn basis_value(&self, x: &[S], gamma: &Exponent) -> Option<S> {
        let k = u64::try_from(gamma.coords()[0]).ok()?;
        Some(chebyshev_t(k, &x[0]))
    }

    fn required_indices(&self, d: usize) -> BTreeSet<Exponent> {
        self.required(&self.layout.rows(d), &self.layout.columns(d))
    }
}

/// Univariate oracle `k ↦ f(k·α)`.
pub fn projection_oracle<S: Scalar>(
    mut inner: SampleOracle<S>,
    alpha: &Exponent,
) -> Result<SampleOracle<S>, StructureError> {
    if alpha.is_zero() {
        return Err(StructureError::ZeroDirection);
    }
    if alpha.len() != inner.n() {
        return Err(spec_invalid(format!(
            "direction {alpha} has the wrong length"
        )));
    }
    let domain = inner.domain();
    let alpha = alpha.clone();
    Ok(SampleOracle::from_fn(1, domain, move |k: &Exponent| {
        inner.query(&alpha.scaled(k.coords()[0]))
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpTerm {
    pub coeff: Rational,
    pub base: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChebTerm {
    pub coeff: Rational,
    pub base: Rational,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonoTerm {
    pub coeff: Rational,
    pub exponent: Exponent,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GaussTerm {
    pub coeff: f64,
    pub center: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ChebBasis {
    #[default]
    Monomial,
    Chebyshev,
}

fn default_cheb_base() -> Rational {
    Rational::integer(2)
}

/// A function given by a closed form, sampled through [`GeneratorSpec::exact_oracle`]
/// or [`GeneratorSpec::float_oracle`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GeneratorSpec {
    /// `Σ c·b^α`.
    Expsum {
        n: usize,
        #[serde(default = "nat")]
        domain: Domain,
        terms: Vec<ExpTerm>,
    },
    /// `k ↦ Σ c·T_k(b)`.
    Chebsum { terms: Vec<ChebTerm> },
    /// `α ↦ p(b₁^{α₁}, …, bₙ^{αₙ})`, or `k ↦ p(b^k, b^{kD}, …)` with a Kronecker bound `D`.
    Polynomial {
        n: usize,
        terms: Vec<MonoTerm>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bases: Option<Vec<Rational>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        kronecker: Option<u64>,
    },
    /// `k ↦ p(T_k(b))` for a univariate `p` given by degree-indexed coefficients.
    Chebpoly {
        #[serde(with = "degree_keys")]
        coeffs: BTreeMap<u64, Rational>,
        #[serde(default = "default_cheb_base")]
        base: Rational,
        #[serde(default)]
        basis: ChebBasis,
    },
    /// `α ↦ Σ c·exp(−(α−t)ᵀA(α−t))·exp(αᵀAα)`.
    Gaussian {
        n: usize,
        #[serde(rename = "A")]
        a: Vec<Vec<Rational>>,
        terms: Vec<GaussTerm>,
    },
    /// `α ↦ Δ(φ^α f)`.
    Operator {
        phi: Vec<Vec<Vec<Rational>>>,
        delta: Vec<Rational>,
        f: Vec<Rational>,
    },
}

/// Degree-indexed maps with the degrees written as JSON object keys.
mod degree_keys {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    use crate::arith::Rational;

    pub fn serialize<Z: Serializer>(
        map: &BTreeMap<u64, Rational>,
        s: Z,
    ) -> Result<Z::Ok, Z::Error> {
        map.iter()
            .map(|(k, v)| (k.to_string(), v))
            .collect::<BTreeMap<_, _>>()
            .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> Result<BTreeMap<u64, Rational>, D::Error> {
        BTreeMap::<String, Rational>::deserialize(d)?
            .into_iter()
            .map(|(k, v)| {
                k.trim()
                    .parse::<u64>()
                    .map(|k| (k, v))
                    .map_err(|_| D::Error::custom(format!("bad degree {k:?}")))
            })
            .collect()
    }
}

fn nat() -> Domain {
    Domain::Nat
}

/// First `n` primes.
pub fn first_primes(n: usize) -> Vec<i64> {
    let mut out = Vec::with_capacity(n);
    let mut c = 2i64;
    while out.len() < n {
        if out.iter().all(|p| c % p != 0) {
            out.push(c);
        }
        c += 1;
    }
    out
}

/// Decoded support of a transferred problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Decoded {
    Exponents(Vec<Exponent>),
    Indices(Vec<u64>),
    Centers(Vec<Vec<f64>>),
}

fn rational_pow(b: &Rational, e: i64) -> Result<Rational, OracleError> {
    b.pow_i64(e).ok_or_else(|| OracleError::Arith {
        index: Exponent::from([e]),
        source: crate::arith::ArithError::DivisionByZero,
    })
}

impl GeneratorSpec {
    /// Number of variables of the sample lattice.
    pub fn n(&self) -> usize {
        match self {
            GeneratorSpec::Expsum { n, .. } | GeneratorSpec::Gaussian { n, .. } => *n,
            GeneratorSpec::Polynomial { n, kronecker, .. } => {
                if kronecker.is_some() {
                    1
                } else {
                    *n
                }
            }
            GeneratorSpec::Chebsum { .. } | GeneratorSpec::Chebpoly { .. } => 1,
            GeneratorSpec::Operator { phi, .. } => phi.len(),
        }
    }

    pub fn domain(&self) -> Domain {
        match self {
            GeneratorSpec::Expsum { domain, .. } => *domain,
            _ => Domain::Nat,
        }
    }

    /// Bases used by the monomial adapter: the given ones or the first primes.
    pub fn polynomial_bases(&self) -> Option<Vec<Rational>> {
        match self {
            GeneratorSpec::Polynomial {
                n,
                bases,
                kronecker,
                ..
            } => Some(match (bases, kronecker) {
                (Some(b), _) => b.clone(),
                (None, Some(_)) => vec![Rational::integer(2)],
                (None, None) => first_primes(*n)
                    .into_iter()
                    .map(Rational::integer)
                    .collect(),
            }),
            _ => None,
        }
    }

    pub fn validate(&self) -> Result<(), StructureError> {
        match self {
            GeneratorSpec::Expsum { n, domain, terms } => {
                for t in terms {
                    if t.base.len() != *n {
                        return Err(spec_invalid(format!(
                            "base of length {} for n = {n}",
                            t.base.len()
                        )));
                    }
                    if *domain == Domain::Int && t.base.iter().any(|b| b == &Rational::integer(0)) {
                        return Err(spec_invalid("bases must be nonzero on the integer lattice"));
                    }
                }
            }
            GeneratorSpec::Chebsum { .. } => {}
            GeneratorSpec::Polynomial {
                n,
                terms,
                kronecker,
                ..
            } => {
                let bases = self.polynomial_bases().unwrap_or_default();
                let want = if kronecker.is_some() { 1 } else { *n };
                if bases.len() != want {
                    return Err(spec_invalid(format!(
                        "expected {want} bases, found {}",
                        bases.len()
                    )));
                }
                if bases.iter().any(|b| b.abs() <= Rational::integer(1)) {
                    return Err(spec_invalid(
                        "evaluation bases must exceed 1 in absolute value",
                    ));
                }
                for t in terms {
                    if t.exponent.len() != *n || !t.exponent.is_natural() {
                        return Err(spec_invalid(format!("bad exponent {}", t.exponent)));
                    }
                    if let Some(bound) = kronecker {
                        if t.exponent.coords().iter().any(|&e| e as u64 >= *bound) {
                            return Err(spec_invalid(format!(
                                "exponent {} reaches the Kronecker bound {bound}",
                                t.exponent
                            )));
                        }
                    }
                }
            }
            GeneratorSpec::Chebpoly { base, .. } => {
                if base <= &Rational::integer(1) {
                    return Err(spec_invalid("Chebyshev base must exceed 1"));
                }
            }
            GeneratorSpec::Gaussian { n, a, terms } => {
                if a.len() != *n || a.iter().any(|r| r.len() != *n) {
                    return Err(spec_invalid("A must be n×n"));
                }
                let m = Matrix::from_rows(a.clone()).map_err(|e| spec_invalid(e.to_string()))?;
                if m != m.transpose() {
                    return Err(spec_invalid("A must be symmetric"));
                }
                for k in 1..=*n {
                    let idx: Vec<usize> = (0..k).collect();
                    let minor = m.select_rows(&idx).select_columns(&idx);
                    let chi = minor.char_poly().map_err(|e| spec_invalid(e.to_string()))?;
                    let det = if k % 2 == 0 {
                        chi.coeffs()[0].clone()
                    } else {
                        -chi.coeffs()[0].clone()
                    };
                    if det <= Rational::integer(0) {
                        return Err(spec_invalid("A must be positive definite"));
                    }
                }
                if terms.iter().any(|t| {
                    t.center.len() != *n
                        || !t.coeff.is_finite()
                        || t.center.iter().any(|c| !c.is_finite())
                }) {
                    return Err(spec_invalid(
                        "Gaussian terms need finite coefficients and n-dimensional centers",
                    ));
                }
            }
            GeneratorSpec::Operator { phi, delta, f } => {
                let k = f.len();
                if delta.len() != k || phi.is_empty() {
                    return Err(spec_invalid("operator sizes disagree"));
                }
                let mats = operator_matrices(phi, k)?;
                for i in 0..mats.len() {
                    for j in i + 1..mats.len() {
                        if mats[i].mul(&mats[j]).ok() != mats[j].mul(&mats[i]).ok() {
                            return Err(StructureError::NonCommuting);
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// Memoized exact oracle; Gaussian sums are float only.
    pub fn exact_oracle(&self) -> Result<SampleOracle<Rational>, StructureError> {
        self.validate()?;
        let n = self.n();
        let domain = self.domain();
        Ok(match self.clone() {
            GeneratorSpec::Expsum { terms, .. } => {
                SampleOracle::from_fn(n, domain, move |g: &Exponent| {
                    terms.iter().try_fold(Rational::integer(0), |acc, t| {
                        let v = g
                            .coords()
                            .iter()
                            .zip(&t.base)
                            .try_fold(Rational::integer(1), |a, (&e, b)| {
                                Ok(a * rational_pow(b, e)?)
                            })?;
                        Ok(acc + &t.coeff * &v)
                    })
                })
            }
            GeneratorSpec::Chebsum { terms } => {
                SampleOracle::from_fn(1, Domain::Nat, move |g: &Exponent| {
                    let k = g.coords()[0] as u64;
                    Ok(terms.iter().fold(Rational::integer(0), |acc, t| {
                        acc + &t.coeff * &chebyshev_t(k, &t.base)
                    }))
                })
            }
            spec @ GeneratorSpec::Polynomial { .. } => {
                let bases = spec.polynomial_bases().expect("polynomial generator");
                let GeneratorSpec::Polynomial {
                    n: vars,
                    terms,
                    kronecker,
                    ..
                } = spec
                else {
                    unreachable!()
                };
                SampleOracle::from_fn(n, Domain::Nat, move |g: &Exponent| {
                    let point: Vec<Rational> = match kronecker {
                        Some(bound) => {
                            let k = g.coords()[0];
                            (0..vars)
                                .map(|j| {
                                    bases[0]
                                        .pow_i64(k * (bound as i64).pow(j as u32))
                                        .expect("nonzero base")
                                })
                                .collect()
                        }
                        None => g
                            .coords()
                            .iter()
                            .zip(&bases)
                            .map(|(&a, b)| b.pow_i64(a).expect("nonzero base"))
                            .collect(),
                    };
                    Ok(terms.iter().fold(Rational::integer(0), |acc, t| {
                        acc + &t.coeff * &crate::poly::monomial_value(&t.exponent, &point)
                    }))
                })
            }
            GeneratorSpec::Chebpoly {
                coeffs,
                base,
                basis,
            } => SampleOracle::from_fn(1, Domain::Nat, move |g: &Exponent| {
                let y = chebyshev_t(g.coords()[0] as u64, &base);
                Ok(coeffs.iter().fold(Rational::integer(0), |acc, (&k, c)| {
                    let v = match basis {
                        ChebBasis::Monomial => y.pow_i64(k as i64).expect("nonnegative power"),
                        ChebBasis::Chebyshev => chebyshev_t(k, &y),
                    };
                    acc + c * &v
                }))
            }),
            GeneratorSpec::Gaussian { .. } => return Err(StructureError::FloatOnly("gaussian")),
            GeneratorSpec::Operator { phi, delta, f } => {
                let mats = operator_matrices(&phi, f.len())?;
                SampleOracle::from_fn(n, Domain::Nat, move |g: &Exponent| {
                    let mut v = f.clone();
                    for (m, &e) in mats.iter().zip(g.coords()) {
                        for _ in 0..e {
                            v = m.mul_vec(&v).expect("square operators");
                        }
                    }
                    Ok(delta
                        .iter()
                        .zip(&v)
                        .fold(Rational::integer(0), |acc, (a, b)| acc + a * b))
                })
            }
        })
    }

    /// Float oracle; exact kinds are sampled exactly and rounded.
    pub fn float_oracle<S: FloatScalar>(&self) -> Result<SampleOracle<S>, StructureError> {
        self.validate()?;
        if let GeneratorSpec::Gaussian { n, a, terms } = self.clone() {
            let a: Vec<Vec<f64>> = a
                .iter()
                .map(|r| r.iter().map(Rational::to_f64).collect())
                .collect();
            return Ok(SampleOracle::from_fn(
                n,
                Domain::Nat,
                move |g: &Exponent| {
                    let alpha: Vec<f64> = g.coords().iter().map(|&x| x as f64).collect();
                    let total: f64 = terms
                        .iter()
                        .map(|t| {
                            let at = mat_vec(&a, &t.center);
                            let exponent = 2.0 * dot(&alpha, &at) - dot(&t.center, &at);
                            t.coeff * exponent.exp()
                        })
                        .sum();
                    S::from_f64(total)
                        .filter(|_| total.is_finite())
                        .ok_or(OracleError::Arith {
                            index: g.clone(),
                            source: crate::arith::ArithError::NonFinite(total),
                        })
                },
            ));
        }
        let mut exact = self.exact_oracle()?;
        Ok(SampleOracle::from_fn(
            self.n(),
            self.domain(),
            move |g: &Exponent| {
                let v = exact.query(g)?;
                S::from_f64(v.to_f64()).ok_or(OracleError::Arith {
                    index: g.clone(),
                    source: crate::arith::ArithError::NonFinite(v.to_f64()),
                })
            },
        ))
    }

    /// Maps recovered labels back to the basis elements of the original problem.
    ///
    /// Expsum, chebsum and operator labels are already the answer and give `None`.
    pub fn decode(&self, labels: &PointSet<Rational>) -> Result<Option<Decoded>, StructureError> {
        match self {
            GeneratorSpec::Polynomial { n, kronecker, .. } => {
                let bases = self.polynomial_bases().expect("polynomial generator");
                let exps = match kronecker {
                    Some(bound) => decode_kronecker(labels, &bases[0], *bound, *n)?,
                    None => decode_monomial(labels, &bases)?,
                };
                Ok(Some(Decoded::Exponents(exps)))
            }
            GeneratorSpec::Chebpoly { base, .. } => {
                Ok(Some(Decoded::Indices(decode_chebyshev(labels, base)?)))
            }
            _ => Ok(None),
        }
    }

    /// Decodes Gaussian labels into centers and the original coefficients.
    pub fn decode_gaussian<S: Scalar>(
        &self,
        labels: &PointSet<S>,
        coefficients: &[S],
    ) -> Result<(Vec<Vec<f64>>, Vec<f64>), StructureError> {
        let GeneratorSpec::Gaussian { a, .. } = self else {
            return Err(spec_invalid("not a Gaussian generator"));
        };
        let a: Vec<Vec<f64>> = a
            .iter()
            .map(|r| r.iter().map(Rational::to_f64).collect())
            .collect();
        decode_gaussian(labels, coefficients, &a)
    }

    /// Bases and coefficients of the equivalent exponential sum, when finite and exact.
    pub fn expected_terms(&self) -> Option<(Vec<Vec<Rational>>, Vec<Rational>)> {
        match self {
            GeneratorSpec::Expsum { terms, .. } => Some(
                terms
                    .iter()
                    .map(|t| (t.base.clone(), t.coeff.clone()))
                    .unzip(),
            ),
            GeneratorSpec::Chebsum { terms } => Some(
                terms
                    .iter()
                    .map(|t| (vec![t.base.clone()], t.coeff.clone()))
                    .unzip(),
            ),
            _ => None,
        }
    }
}

fn operator_matrices(
    phi: &[Vec<Vec<Rational>>],
    k: usize,
) -> Result<Vec<Matrix<Rational>>, StructureError> {
    phi.iter()
        .map(|m| {
            if m.len() != k || m.iter().any(|r| r.len() != k) {
                return Err(spec_invalid(format!("operators must be {k}×{k}")));
            }
            Matrix::from_rows(m.clone()).map_err(|e| spec_invalid(e.to_string()))
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn mat_vec(a: &[Vec<f64>], v: &[f64]) -> Vec<f64> {
    a.iter().map(|r| dot(r, v)).collect()
}

/// Exponents `β` with `bⱼ^{βⱼ}` equal to the label coordinates.
pub fn decode_monomial(
    labels: &PointSet<Rational>,
    bases: &[Rational],
) -> Result<Vec<Exponent>, StructureError> {
    labels
        .iter()
        .map(|x| {
            let coords = x
                .iter()
                .zip(bases)
                .map(|(v, b)| {
                    log_exact(v, b).ok_or_else(|| StructureError::DecodeFailure(v.to_string()))
                })
                .collect::<Result<Vec<i64>, _>>()?;
            Ok(Exponent::new(coords))
        })
        .collect()
}

fn log_exact(v: &Rational, b: &Rational) -> Option<i64> {
    integer_log(v, b).ok().flatten().map(i64::from)
}

/// Kronecker labels `b^{Σ βⱼ D^j}` back to `β`.
pub fn decode_kronecker(
    labels: &PointSet<Rational>,
    base: &Rational,
    bound: u64,
    n: usize,
) -> Result<Vec<Exponent>, StructureError> {
    labels
        .iter()
        .map(|x| {
            let mut e = log_exact(&x[0], base)
                .ok_or_else(|| StructureError::DecodeFailure(x[0].to_string()))?;
            let mut coords = Vec::with_capacity(n);
            for _ in 0..n {
                coords.push(e % bound as i64);
                e /= bound as i64;
            }
            if e != 0 {
                return Err(StructureError::DecodeFailure(x[0].to_string()));
            }
            Ok(Exponent::new(coords))
        })
        .collect()
}

/// Indices `i` with `T_i(b)` equal to the labels, for `b > 1`.
pub fn decode_chebyshev(
    labels: &PointSet<Rational>,
    base: &Rational,
) -> Result<Vec<u64>, StructureError> {
    if base <= &Rational::integer(1) {
        return Err(spec_invalid("Chebyshev base must exceed 1"));
    }
    labels
        .iter()
        .map(|x| {
            let target = &x[0];
            let (mut prev, mut cur) = (Rational::integer(1), base.clone());
            if target == &prev {
                return Ok(0);
            }
            let two = Rational::integer(2);
            // T_i(b) increases strictly for b > 1
            for i in 1u64.. {
                if &cur == target {
                    return Ok(i);
                }
                if &cur > target {
                    break;
                }
                let next = &(&(&two * base) * &cur) - &prev;
                prev = cur;
                cur = next;
            }
            Err(StructureError::DecodeFailure(target.to_string()))
        })
        .collect()
}

/// Centers `t = A⁻¹·ln(b)/2` and coefficients `c = c′·e^{tᵀAt}`.
pub fn decode_gaussian<S: Scalar>(
    labels: &PointSet<S>,
    coefficients: &[S],
    a: &[Vec<f64>],
) -> Result<(Vec<Vec<f64>>, Vec<f64>), StructureError> {
    let m = Matrix::from_rows(a.to_vec()).map_err(|e| spec_invalid(e.to_string()))?;
    let mut centers = Vec::new();
    let mut coeffs = Vec::new();
    for (x, c) in labels.iter().zip(coefficients) {
        let logs: Vec<f64> = x
            .iter()
            .map(|v| {
                let v = v.to_f64();
                if v > 0.0 {
                    Ok(v.ln() / 2.0)
                } else {
                    Err(StructureError::DecodeFailure(v.to_string()))
                }
            })
            .collect::<Result<_, _>>()?;
        let t = m
            .solve_square(&logs)
            .map_err(|e| spec_invalid(e.to_string()))?;
        coeffs.push(c.to_f64() * dot(&t, &mat_vec(a, &t)).exp());
        centers.push(t);
    }
    Ok((centers, coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prony::{run_pipeline, Mode, PipelineConfig};
    use crate::vanish::vandermonde;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::integer(n)
    }

    fn mat(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| q(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn strip<S: Scalar>(m: Matrix<S>) -> Matrix<S> {
        Matrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)].clone())
    }

    fn expsum(n: usize, domain: Domain, terms: &[(Rational, Vec<Rational>)]) -> GeneratorSpec {
        GeneratorSpec::Expsum {
            n,
            domain,
            terms: terms
                .iter()
                .map(|(c, b)| ExpTerm {
                    coeff: c.clone(),
                    base: b.clone(),
                })
                .collect(),
        }
    }

    fn cheb_y3() -> GeneratorSpec {
        GeneratorSpec::Chebpoly {
            coeffs: [(3, q(1))].into_iter().collect(),
            base: q(2),
            basis: ChebBasis::Monomial,
        }
    }

    #[test]
    fn hankel_examples() {
        let mut o = expsum(1, Domain::Nat, &[(q(1), vec![q(2)]), (q(1), vec![q(3)])])
            .exact_oracle()
            .unwrap();
        let h =
            PronyStructure::<Rational>::build(&Hankel::standard(IndexFamily::total(1)), 2, &mut o)
                .unwrap();
        assert_eq!(strip(h), mat(&[&[2, 5, 13], &[5, 13, 35]]));

        let mut exp0 = expsum(1, Domain::Nat, &[(q(1), vec![q(0)])])
            .exact_oracle()
            .unwrap();
        let h = PronyStructure::<Rational>::build(
            &Hankel::standard(IndexFamily::total(1)),
            1,
            &mut exp0,
        )
        .unwrap();
        assert_eq!(strip(h), mat(&[&[1, 0]]));

        let mut zero = expsum(2, Domain::Nat, &[]).exact_oracle().unwrap();
        let h = PronyStructure::<Rational>::build(
            &Hankel::standard(IndexFamily::total(2)),
            2,
            &mut zero,
        )
        .unwrap();
        assert!(h.is_zero());
    }

    #[test]
    fn toeplitz_examples() {
        let layout = Layout::standard(IndexFamily::total(1)).with_rows(IndexFamily::total(1), 0);
        let t = Toeplitz::new(layout);
        let mut o = expsum(1, Domain::Int, &[(q(1), vec![q(2)])])
            .exact_oracle()
            .unwrap();
        let m = PronyStructure::<Rational>::build(&t, 1, &mut o).unwrap();
        let want =
            Matrix::from_rows(vec![vec![q(1), q(2)], vec![Rational::new(1, 2), q(1)]]).unwrap();
        assert_eq!(strip(m.clone()), want);
        assert_eq!(m.kernel_basis(), vec![vec![q(-2), q(1)]]);
        let m0 = PronyStructure::<Rational>::build(&t, 0, &mut o).unwrap();
        assert_eq!(strip(m0), mat(&[&[1]]));

        let mut nat = expsum(1, Domain::Nat, &[(q(1), vec![q(2)])])
            .exact_oracle()
            .unwrap();
        let err = PronyStructure::<Rational>::build(&t, 1, &mut nat).unwrap_err();
        assert!(matches!(
            err,
            PronyError::Oracle(OracleError::DomainMismatch(_))
        ));
    }

    #[test]
    fn chebyshev_worked_example() {
        let mut o = cheb_y3().exact_oracle().unwrap();
        let values: Vec<Rational> = (0..4)
            .map(|k| o.query(&Exponent::from([k])).unwrap())
            .collect();
        assert_eq!(values, vec![q(1), q(8), q(343), q(17576)]);
        let s = Chebyshev::default();
        assert_eq!(
            strip(s.prime(2, &mut o).unwrap()),
            mat(&[&[2, 16, 686], &[16, 344, 17584]])
        );
        let half = Rational::new(1, 2);
        assert_eq!(
            chebyshev_psi::<Rational>(2),
            Matrix::from_rows(vec![
                vec![q(1), q(0), half.clone()],
                vec![q(0), q(1), q(0)],
                vec![q(0), q(0), half]
            ])
            .unwrap()
        );
        let p = PronyStructure::<Rational>::build(&s, 2, &mut o).unwrap();
        assert_eq!(strip(p.clone()), mat(&[&[2, 16, 344], &[16, 344, 8800]]));
        assert_eq!(p.kernel_basis(), vec![vec![q(52), q(-28), q(1)]]);

        let out = run_pipeline(
            &s,
            &mut cheb_y3().exact_oracle().unwrap(),
            Mode::RankBound(2),
            &PipelineConfig::exact(),
        )
        .unwrap();
        let labels: Vec<Rational> = out.support.iter().map(|x| x[0].clone()).collect();
        assert_eq!(labels, vec![q(2), q(26)]);
        assert_eq!(
            cheb_y3().decode(&out.support).unwrap(),
            Some(Decoded::Indices(vec![1, 3]))
        );
        // Y³ = (3·T₁ + T₃) / 4
        assert_eq!(
            out.coefficients,
            vec![Rational::new(3, 4), Rational::new(1, 4)]
        );
    }

    #[test]
    fn linearization() {
        assert_eq!(
            cheb_linearize(1, 1),
            vec![(2, Rational::new(1, 2)), (0, Rational::new(1, 2))]
        );
        assert_eq!(
            cheb_linearize(3, 1),
            vec![(4, Rational::new(1, 2)), (2, Rational::new(1, 2))]
        );
        assert_eq!(cheb_linearize(0, 5), vec![(5, q(1))]);
    }

    #[test]
    fn generator_examples() {
        let cube = GeneratorSpec::Polynomial {
            n: 1,
            terms: vec![MonoTerm {
                coeff: q(1),
                exponent: Exponent::from([3]),
            }],
            bases: Some(vec![q(2)]),
            kronecker: None,
        };
        let mut o = cube.exact_oracle().unwrap();
        for k in 0..5 {
            assert_eq!(
                o.query(&Exponent::from([k])).unwrap(),
                q(8).pow_i64(k).unwrap()
            );
        }

        let gauss = GeneratorSpec::Gaussian {
            n: 1,
            a: vec![vec![q(1)]],
            terms: vec![GaussTerm {
                coeff: 1.0,
                center: vec![1.0],
            }],
        };
        let mut o = gauss.float_oracle::<f64>().unwrap();
        for k in 0..5 {
            let want = ((2 * k - 1) as f64).exp();
            assert!((o.query(&Exponent::from([k])).unwrap() - want).abs() < 1e-9 * want);
        }
        assert_eq!(
            gauss.exact_oracle().unwrap_err(),
            StructureError::FloatOnly("gaussian")
        );

        let not_pd = GeneratorSpec::Gaussian {
            n: 2,
            a: vec![vec![q(1), q(2)], vec![q(2), q(1)]],
            terms: vec![],
        };
        assert!(matches!(
            not_pd.validate(),
            Err(StructureError::SpecInvalid(_))
        ));

        let torus = expsum(1, Domain::Int, &[(q(1), vec![q(0)])]);
        assert!(matches!(
            torus.validate(),
            Err(StructureError::SpecInvalid(_))
        ));
    }

    #[test]
    fn decoding() {
        let labels = PointSet::new(1, vec![vec![q(8)]]).unwrap();
        assert_eq!(
            decode_monomial(&labels, &[q(2)]).unwrap(),
            vec![Exponent::from([3])]
        );
        let labels = PointSet::new(1, vec![vec![q(2)], vec![q(26)]]).unwrap();
        assert_eq!(decode_chebyshev(&labels, &q(2)).unwrap(), vec![1, 3]);
        let bad = PointSet::new(1, vec![vec![q(27)]]).unwrap();
        assert!(matches!(
            decode_chebyshev(&bad, &q(2)),
            Err(StructureError::DecodeFailure(_))
        ));
        let e2 = PointSet::new(1, vec![vec![2f64.exp()]]).unwrap();
        let (t, c) = decode_gaussian(&e2, &[(-1f64).exp()], &[vec![1.0]]).unwrap();
        assert!((t[0][0] - 1.0).abs() < 1e-6);
        assert!((c[0] - 1.0).abs() < 1e-9);
        // (2, 1) in Kronecker form with bound 4: 2 + 1·4 = 6
        let k = PointSet::new(1, vec![vec![q(64)]]).unwrap();
        assert_eq!(
            decode_kronecker(&k, &q(2), 4, 2).unwrap(),
            vec![Exponent::from([2, 1])]
        );
    }

    #[test]
    fn projection_examples() {
        let f = expsum(2, Domain::Nat, &[(q(1), vec![q(2), q(3)])])
            .exact_oracle()
            .unwrap();
        let mut p = projection_oracle(f, &Exponent::from([1, 1])).unwrap();
        for k in 0..4 {
            assert_eq!(
                p.query(&Exponent::from([k])).unwrap(),
                q(6).pow_i64(k).unwrap()
            );
        }
        let f = expsum(
            2,
            Domain::Nat,
            &[(q(1), vec![q(2), q(3)]), (q(1), vec![q(3), q(2)])],
        )
        .exact_oracle()
        .unwrap();
        let mut p = projection_oracle(f, &Exponent::from([1, 1])).unwrap();
        let out = run_pipeline(
            &Hankel::standard(IndexFamily::total(1)),
            &mut p,
            Mode::RankBound(2),
            &PipelineConfig::exact(),
        )
        .unwrap();
        assert_eq!(out.support.into_points(), vec![vec![q(6)]]);
        assert_eq!(out.coefficients, vec![q(2)]);

        let f = expsum(2, Domain::Nat, &[(q(1), vec![q(2), q(3)])])
            .exact_oracle()
            .unwrap();
        let mut marginal = projection_oracle(f, &Exponent::from([1, 0])).unwrap();
        assert_eq!(marginal.query(&Exponent::from([3])).unwrap(), q(8));
        let f = expsum(2, Domain::Nat, &[]).exact_oracle().unwrap();
        assert_eq!(
            projection_oracle(f, &Exponent::from([0, 0])).unwrap_err(),
            StructureError::ZeroDirection
        );
    }

    #[test]
    fn operator_examples() {
        let diag = |a: i64, b: i64| vec![vec![q(a), q(0)], vec![q(0), q(b)]];
        let spec = GeneratorSpec::Operator {
            phi: vec![diag(2, 3)],
            delta: vec![q(1), q(1)],
            f: vec![q(1), q(1)],
        };
        let mut o = spec.exact_oracle().unwrap();
        let h =
            PronyStructure::<Rational>::build(&Hankel::standard(IndexFamily::total(1)), 2, &mut o)
                .unwrap();
        assert_eq!(strip(h), mat(&[&[2, 5, 13], &[5, 13, 35]]));

        let identity = GeneratorSpec::Operator {
            phi: vec![vec![vec![q(1)]]],
            delta: vec![q(1)],
            f: vec![q(7)],
        };
        let mut o = identity.exact_oracle().unwrap();
        let h =
            PronyStructure::<Rational>::build(&Hankel::standard(IndexFamily::total(1)), 2, &mut o)
                .unwrap();
        assert!(h.to_rows().iter().flatten().all(|x| x == &q(7)));

        let bivariate = GeneratorSpec::Operator {
            phi: vec![diag(2, 3), diag(5, 7)],
            delta: vec![q(1), q(1)],
            f: vec![q(1), q(1)],
        };
        let out = run_pipeline(
            &Hankel::standard(IndexFamily::total(2)),
            &mut bivariate.exact_oracle().unwrap(),
            Mode::RankBound(2),
            &PipelineConfig::exact(),
        )
        .unwrap();
        assert!(out
            .support
            .same_points(&PointSet::new(2, vec![vec![q(2), q(5)], vec![q(3), q(7)]]).unwrap()));

        let shear = GeneratorSpec::Operator {
            phi: vec![
                vec![vec![q(1), q(1)], vec![q(0), q(1)]],
                vec![vec![q(1), q(0)], vec![q(1), q(1)]],
            ],
            delta: vec![q(1), q(1)],
            f: vec![q(1), q(1)],
        };
        assert_eq!(shear.validate(), Err(StructureError::NonCommuting));
    }

    #[test]
    fn generator_json() {
        let g: GeneratorSpec =
            serde_json::from_str(r#"{"kind":"chebpoly","coeffs":{"3":"1"},"base":"2"}"#).unwrap();
        assert_eq!(g, cheb_y3());
        let g: GeneratorSpec =
            serde_json::from_str(r#"{"kind":"expsum","n":1,"domain":"int","terms":[{"coeff":"1","base":["2"]},{"coeff":"1","base":["3"]}]}"#).unwrap();
        assert_eq!(g.domain(), Domain::Int);
        let g: GeneratorSpec = serde_json::from_str(
            r#"{"kind":"gaussian","n":1,"A":[["1"]],"terms":[{"coeff":1.0,"center":[1.0]}]}"#,
        )
        .unwrap();
        assert!(g.validate().is_ok());
        let g: GeneratorSpec = serde_json::from_str(
            r#"{"kind":"operator","phi":[[["2","0"],["0","3"]]],"delta":["1","1"],"f":["1","1"]}"#,
        )
        .unwrap();
        assert_eq!(g.n(), 1);
        let back: GeneratorSpec =
            serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }

    fn small_nonzero() -> impl Strategy<Value = Rational> {
        (-5i64..=5).prop_filter("nonzero", |x| *x != 0).prop_map(q)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn hankel_and_toeplitz_factor(
            n in 1usize..=2,
            raw in prop::collection::vec((prop::collection::vec(-5i64..=5, 2), -4i64..=4), 1..=3),
            d in 0usize..=2,
        ) {
            let mut bases: Vec<Vec<Rational>> = Vec::new();
            let mut coeffs = Vec::new();
            for (b, c) in raw {
                let b: Vec<Rational> = b[..n].iter().map(|&x| q(if x == 0 { 1 } else { x })).collect();
                if !bases.contains(&b) && c != 0 {
                    bases.push(b);
                    coeffs.push(q(c));
                }
            }
            prop_assume!(!bases.is_empty());
            let terms: Vec<(Rational, Vec<Rational>)> = coeffs.iter().cloned().zip(bases.iter().cloned()).collect();
            let points = PointSet::new(n, bases.clone()).unwrap();
            let layout = Layout::standard(IndexFamily::total(n));
            let (rows, cols) = (layout.rows(d), layout.columns(d));
            let c = Matrix::diagonal(&coeffs);

            let mut o = expsum(n, Domain::Int, &terms).exact_oracle().unwrap();
            let h = hankel_matrix(&rows, &cols, &mut o).unwrap();
            let v_rows = vandermonde(&rows, &points);
            let v_cols = vandermonde(&cols, &points);
            let factored = v_rows.transpose().mul(&c).unwrap().mul(&v_cols).unwrap();
            prop_assert_eq!(strip(h), strip(factored));

            let t = toeplitz_matrix(&rows, &cols, &mut o).unwrap();
            let reciprocal = PointSet::new(n, bases.iter().map(|b| b.iter().map(|x| x.inv().unwrap()).collect()).collect()).unwrap();
            let factored = vandermonde(&rows, &reciprocal).transpose().mul(&c).unwrap().mul(&v_cols).unwrap();
            prop_assert_eq!(strip(t), strip(factored));
        }

        #[test]
        fn projection_is_a_subarray(
            bases in prop::collection::vec(prop::collection::vec(small_nonzero(), 2), 1..=3),
            alpha in prop::collection::vec(0i64..=2, 2),
            d in 1usize..=3,
        ) {
            prop_assume!(alpha.iter().any(|&a| a != 0));
            let alpha = Exponent::new(alpha);
            let terms: Vec<(Rational, Vec<Rational>)> = bases.into_iter().map(|b| (q(1), b)).collect();
            let spec = expsum(2, Domain::Nat, &terms);
            let mut full = spec.exact_oracle().unwrap();
            let mut projected = projection_oracle(spec.exact_oracle().unwrap(), &alpha).unwrap();
            let line: Vec<Exponent> = (0..=d as i64).map(|k| Exponent::from([k])).collect();
            let h1 = hankel_matrix(&line, &line, &mut projected).unwrap();
            let scaled: Vec<Exponent> = (0..=d as i64).map(|k| alpha.scaled(k)).collect();
            let hn = hankel_matrix(&scaled, &scaled, &mut full).unwrap();
            prop_assert_eq!(strip(h1), strip(hn));
        }
    }
}
