//! Rational roots of univariate polynomials over ℚ.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith::Rational;
use crate::poly::Poly;

/// All rational roots of `p`, repeated according to multiplicity, and whether
/// they account for the full degree of `p`.
///
/// Candidates come from floating point approximations of the roots of the
/// square-free part; each candidate is snapped to the lattice `ℤ / a_n` with
/// an exact integer Newton iteration and then confirmed by exact division.
pub fn rational_roots(p: &Poly<Rational>) -> (Vec<Rational>, bool) {
    let coeffs = p.coeffs();
    let Some(degree) = coeffs.iter().rposition(|c| !c.is_zero()) else {
        return (Vec::new(), false);
    };
    let mut rest: Vec<Rational> = coeffs[..=degree].to_vec();
    let mut roots = Vec::new();

    let zeros = rest.iter().position(|c| !c.is_zero()).unwrap_or(0);
    roots.extend(std::iter::repeat_n(Rational::zero(), zeros));
    rest.drain(..zeros);

    // deflating the found roots sharpens the approximations of the others
    loop {
        let before = roots.len();
        let sqf = square_free_part(&rest);
        for r in candidate_roots(&sqf) {
            while let Some(q) = divide_by_root(&rest, &r) {
                rest = q;
                roots.push(r.clone());
            }
        }
        if roots.len() == before || rest.len() <= 1 {
            break;
        }
    }
    roots.sort();
    let split = roots.len() == degree;
    (roots, split)
}

/// Distinct rational roots of `p` (lowest degree first coefficients).
pub(crate) fn distinct_rational_roots(p: &Poly<Rational>) -> (Vec<Rational>, bool) {
    let (mut roots, split) = rational_roots(p);
    roots.dedup();
    (roots, split)
}

fn candidate_roots(sqf: &[Rational]) -> Vec<Rational> {
    let m = sqf.len().saturating_sub(1);
    if m == 0 {
        return Vec::new();
    }
    if m == 1 {
        return vec![-sqf[0].clone() / sqf[1].clone()];
    }
    let ints = primitive_integer_form(sqf);
    let lead = ints[m].clone();
    // monic integer polynomial with roots lead·x
    let mut monic = Vec::with_capacity(m + 1);
    let mut scale = BigInt::one();
    for k in (0..m).rev() {
        monic.push((k, &ints[k] * &scale));
        scale *= &lead;
    }
    let mut q = vec![BigInt::zero(); m + 1];
    for (k, c) in monic {
        q[k] = c;
    }
    q[m] = BigInt::one();

    let approx = approximate_roots(sqf);
    let mut found: Vec<Rational> = Vec::new();
    // complex candidates are tried as well; exact division has the last word
    for (re, _) in approx {
        let Some(start) = float_to_bigint(re * lead.to_f64().unwrap_or(f64::INFINITY)) else {
            continue;
        };
        if let Some(y) = integer_newton(&q, start) {
            let r = Rational::from_bigints(y, lead.clone()).expect("nonzero leading coefficient");
            if !found.contains(&r) {
                found.push(r);
            }
        }
    }
    found
}

fn float_to_bigint(x: f64) -> Option<BigInt> {
    if !x.is_finite() {
        return None;
    }
    num_traits::FromPrimitive::from_f64(x.round())
}

fn eval_int(q: &[BigInt], y: &BigInt) -> BigInt {
    q.iter().rev().fold(BigInt::zero(), |acc, c| acc * y + c)
}

fn eval_int_derivative(q: &[BigInt], y: &BigInt) -> BigInt {
    q.iter()
        .enumerate()
        .skip(1)
        .rev()
        .fold(BigInt::zero(), |acc, (k, c)| acc * y + c * BigInt::from(k))
}

/// Integer root of `q` near `start`, if the rounded Newton iteration lands on one.
fn integer_newton(q: &[BigInt], start: BigInt) -> Option<BigInt> {
    let mut y = start;
    for _ in 0..200 {
        let v = eval_int(q, &y);
        if v.is_zero() {
            return Some(y);
        }
        let dv = eval_int_derivative(q, &y);
        if dv.is_zero() {
            break;
        }
        // nearest integer to v / dv
        let two = BigInt::from(2);
        let step = (&v * &two + &dv * dv.signum()).div_floor(&(&dv * &two));
        if step.is_zero() {
            break;
        }
        y -= step;
    }
    [BigInt::one(), -BigInt::one()]
        .into_iter()
        .map(|d| &y + d)
        .find(|c| eval_int(q, c).is_zero())
}

/// Eigenvalues of the companion matrix of `p(s·z)`, scaled back by `s`.
///
/// `s` is a power of two near the geometric mean of the root magnitudes.
fn approximate_roots(coeffs: &[Rational]) -> Vec<(f64, f64)> {
    let m = coeffs.len() - 1;
    let log2 = |c: &Rational| c.numer().bits() as f64 - c.denom().bits() as f64;
    let shift = if coeffs[0].is_zero() {
        0
    } else {
        ((log2(&coeffs[0]) - log2(&coeffs[m])) / m as f64).round() as i64
    };
    let scaled: Vec<f64> = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let e = -(shift * (m - i) as i64);
            scaled_to_f64(c, e)
        })
        .collect();
    let lead = scaled[m];
    let companion = DMatrix::from_fn(m, m, |i, j| {
        if j == m - 1 {
            -scaled[i] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    if companion.iter().any(|x| !x.is_finite()) {
        return Vec::new();
    }
    match nalgebra::linalg::Schur::try_new(companion, f64::EPSILON, 10_000) {
        Some(schur) => {
            let s = 2f64.powi(shift as i32);
            schur
                .complex_eigenvalues()
                .iter()
                .map(|z| (z.re * s, z.im * s))
                .collect()
        }
        None => Vec::new(),
    }
}

/// `c·2^e` as a float, without overflowing on the way.
fn scaled_to_f64(c: &Rational, e: i64) -> f64 {
    let shifted = if e >= 0 {
        Rational::from_bigints(c.numer() << e as usize, c.denom().clone())
    } else {
        Rational::from_bigints(c.numer().clone(), c.denom() << (-e) as usize)
    };
    shifted.map_or(f64::NAN, |r| r.to_f64())
}

fn primitive_integer_form(coeffs: &[Rational]) -> Vec<BigInt> {
    let lcm = coeffs
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| c.numer() * (&lcm / c.denom()))
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if ints.last().is_some_and(|c| c.is_negative()) {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    ints.into_iter().map(|c| c / &g * &sign).collect()
}

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn derivative(p: &[Rational]) -> Vec<Rational> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c * &Rational::integer(k as i64))
            .collect(),
    )
}

/// Quotient and remainder of polynomial division, coefficients lowest first.
fn div_rem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let mut r = trim(a.to_vec());
    let db = b.len() - 1;
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    let lead = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let f = r.last().unwrap().clone() / lead.clone();
        for (k, c) in b.iter().enumerate() {
            r[shift + k] = &r[shift + k] - &(&f * c);
        }
        q[shift] = f;
        r.pop();
        r = trim(r);
    }
    (q, r)
}

fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let (mut a, mut b) = (trim(a.to_vec()), trim(b.to_vec()));
    while !b.is_empty() {
        let (_, r) = div_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn square_free_part(p: &[Rational]) -> Vec<Rational> {
    let d = derivative(p);
    if d.is_empty() {
        return p.to_vec();
    }
    let g = gcd(p, &d);
    div_rem(p, &g).0
}

fn divide_by_root(p: &[Rational], r: &Rational) -> Option<Vec<Rational>> {
    if p.len() < 2 {
        return None;
    }
    let (q, rem) = div_rem(p, &[-r.clone(), Rational::one()]);
    rem.is_empty().then_some(q)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::integer(n)
    }

    fn from_roots(roots: &[Rational]) -> Poly<Rational> {
        roots.iter().fold(Poly::from_coeffs([q(1)]), |acc, r| {
            acc.mul(&Poly::from_coeffs([-r.clone(), q(1)]))
        })
    }

    #[test]
    fn examples() {
        assert_eq!(
            rational_roots(&Poly::from_coeffs([q(52), q(-28), q(1)])),
            (vec![q(2), q(26)], true)
        );
        assert_eq!(
            rational_roots(&Poly::from_coeffs([q(6), q(-5), q(1)])),
            (vec![q(2), q(3)], true)
        );
        assert_eq!(
            rational_roots(&Poly::from_coeffs([q(-2), q(0), q(1)])),
            (vec![], false)
        );
    }

    #[test]
    fn multiplicities_and_fractions() {
        let roots = vec![
            Rational::new(-3, 5),
            q(0),
            q(0),
            Rational::new(4, 7),
            Rational::new(4, 7),
            q(11),
        ];
        let p = from_roots(&roots).scale(&Rational::new(35, 3));
        let (mut got, split) = rational_roots(&p);
        let mut want = roots.clone();
        want.sort();
        got.sort();
        assert_eq!(got, want);
        assert!(split);
        // (x - 1/2)(x^2 + 1)
        let partial =
            from_roots(&[Rational::new(1, 2)]).mul(&Poly::from_coeffs([q(1), q(0), q(1)]));
        assert_eq!(rational_roots(&partial), (vec![Rational::new(1, 2)], false));
    }

    #[test]
    fn large_roots() {
        let roots: Vec<Rational> = [123456789012i64, -98765432109, 5]
            .iter()
            .map(|&x| q(x))
            .collect();
        let (got, split) = rational_roots(&from_roots(&roots));
        assert!(split);
        assert_eq!(got.len(), 3);
        for r in &roots {
            assert!(got.contains(r));
        }
    }

    #[test]
    fn clustered_large_roots() {
        // labels 517·2^k + 33 from a monomial transfer, two of them 5% apart
        let roots: Vec<Rational> = [138781130785i64, 263467310931, 277562261537, 555124523041]
            .iter()
            .map(|&x| q(x))
            .collect();
        let p = from_roots(&roots).scale(&Rational::new(7, 13));
        let (mut got, split) = rational_roots(&p);
        got.sort();
        assert!(split);
        assert_eq!(got, roots);
    }
}
