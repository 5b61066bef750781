use crate::arith::Scalar;

use super::{Exponent, MonomialOrder, Poly};

/// Remainder of multivariate division of `p` by `basis`.
///
/// No term of the result is divisible by a leading term of `basis`. The
/// remainder is unique when `basis` is a Gröbner basis for `order`.
pub fn normal_form<S: Scalar>(p: &Poly<S>, basis: &[Poly<S>], order: &MonomialOrder) -> Poly<S> {
    let leads: Vec<(Exponent, S)> = basis
        .iter()
        .filter_map(|g| g.leading_term(order).map(|(e, c)| (e.clone(), c.clone())))
        .collect();
    let mut rest = p.clone();
    let mut remainder = Poly::zero(p.n());
    while let Some((lt, lc)) = rest
        .leading_term(order)
        .map(|(e, c)| (e.clone(), c.clone()))
    {
        // the largest dividing leading term keeps the reduction chains short
        let divisor = leads
            .iter()
            .zip(basis)
            .filter(|((e, _), _)| e.divides(&lt))
            .max_by(|((a, _), _), ((b, _), _)| order.compare(a, b));
        match divisor {
            Some(((ge, gc), g)) => {
                let factor = lc / gc.clone();
                let shift = &lt - ge;
                for (e, c) in g.terms() {
                    rest.add_term(e + &shift, -(c.clone() * factor.clone()));
                }
                // rounding may leave a residue at the cancelled term
                let left = rest.coeff(&lt);
                rest.add_term(lt, -left);
            }
            None => {
                remainder.add_term(lt.clone(), lc.clone());
                rest.add_term(lt, -lc);
            }
        }
    }
    remainder
}

pub fn s_polynomial<S: Scalar>(f: &Poly<S>, g: &Poly<S>, order: &MonomialOrder) -> Poly<S> {
    let (Some((fe, fc)), Some((ge, gc))) = (f.leading_term(order), g.leading_term(order)) else {
        return Poly::zero(f.n());
    };
    let lcm = Exponent::new(
        fe.coords()
            .iter()
            .zip(ge.coords())
            .map(|(a, b)| *a.max(b))
            .collect(),
    );
    let left = f.mul_term(&(&lcm - fe), &(S::one() / fc.clone()));
    let right = g.mul_term(&(&lcm - ge), &(S::one() / gc.clone()));
    left.sub(&right)
}

/// Buchberger's criterion: every S-polynomial reduces to zero.
pub fn is_groebner_basis<S: Scalar>(basis: &[Poly<S>], order: &MonomialOrder) -> bool {
    basis.iter().enumerate().all(|(i, f)| {
        basis[i + 1..]
            .iter()
            .all(|g| normal_form(&s_polynomial(f, g, order), basis, order).is_zero())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;

    fn q(n: i64) -> Rational {
        Rational::integer(n)
    }

    fn p2(terms: &[([i64; 2], i64)]) -> Poly<Rational> {
        Poly::from_terms(2, terms.iter().map(|(e, c)| (Exponent::from(*e), q(*c))))
    }

    #[test]
    fn reduces_against_point_ideal() {
        let ord = MonomialOrder::degrevlex(2);
        let g = vec![
            p2(&[([2, 0], 1), ([1, 0], -1)]),
            p2(&[([1, 1], 1)]),
            p2(&[([0, 2], 1), ([0, 1], -1)]),
        ];
        assert!(is_groebner_basis(&g, &ord));
        assert!(normal_form(&g[0], &g, &ord).is_zero());
        assert_eq!(
            normal_form(&p2(&[([1, 0], 1)]), &g, &ord),
            p2(&[([1, 0], 1)])
        );
        assert_eq!(
            normal_form(&p2(&[([3, 0], 1)]), &g, &ord),
            p2(&[([1, 0], 1)])
        );
        assert!(normal_form(&Poly::zero(2), &g, &ord).is_zero());
    }

    #[test]
    fn detects_non_groebner() {
        // {X1^2 - X2, X1*X2 - 1} under degrevlex is not a Gröbner basis
        let ord = MonomialOrder::degrevlex(2);
        let g = vec![
            p2(&[([2, 0], 1), ([0, 1], -1)]),
            p2(&[([1, 1], 1), ([0, 0], -1)]),
        ];
        assert!(!is_groebner_basis(&g, &ord));
    }
}
