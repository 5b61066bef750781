//! Evaluation maps at finite point sets, their kernels, and the Möller
//! construction of a Gröbner basis for the vanishing ideal of the points.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::arith::Scalar;
use crate::linalg::Matrix;
use crate::poly::{
    border, is_distinguished, monomial_value, normal_form, Exponent, ExponentSet, MonomialOrder,
    Poly, PolyError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VanishError {
    #[error("point {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("point {0} occurs twice")]
    DuplicatePoint(usize),
    #[error("degree set is not a distinguished order ideal for the monomial order")]
    NotDistinguished,
    #[error("evaluation map is not surjective: rank {rank} < {points} points")]
    NotSurjective { rank: usize, points: usize },
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Pairwise distinct points of Kⁿ.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet<S> {
    n: usize,
    points: Vec<Vec<S>>,
}

impl<S: Scalar> PointSet<S> {
    pub fn new(n: usize, points: Vec<Vec<S>>) -> Result<Self, VanishError> {
        for (index, p) in points.iter().enumerate() {
            if p.len() != n {
                return Err(VanishError::DimensionMismatch {
                    index,
                    expected: n,
                    found: p.len(),
                });
            }
            if points[..index].contains(p) {
                return Err(VanishError::DuplicatePoint(index));
            }
        }
        Ok(PointSet { n, points })
    }

    pub fn empty(n: usize) -> Self {
        PointSet {
            n,
            points: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<S>] {
        &self.points
    }

    pub fn iter(&self) -> impl Iterator<Item = &Vec<S>> {
        self.points.iter()
    }

    pub fn contains(&self, p: &[S]) -> bool {
        self.points.iter().any(|q| q.as_slice() == p)
    }

    /// Equality as sets, ignoring the order of the points.
    pub fn same_points(&self, other: &PointSet<S>) -> bool {
        self.n == other.n
            && self.len() == other.len()
            && self.points.iter().all(|p| other.contains(p))
    }

    pub fn into_points(self) -> Vec<Vec<S>> {
        self.points
    }
}

/// Rows indexed by the points, columns by `degrees` in the given order.
pub fn vandermonde<S: Scalar>(degrees: &[Exponent], points: &PointSet<S>) -> Matrix<S> {
    let m = Matrix::from_fn(points.len(), degrees.len(), |i, j| {
        monomial_value(&degrees[j], &points.points[i])
    });
    m.with_labels(None, Some(degrees.to_vec()))
        .expect("degree list must be duplicate free")
}

/// The kernel of an evaluation map, as polynomials supported on `support`.
#[derive(Debug, Clone, PartialEq)]
pub struct VanishingSpace<S> {
    pub n: usize,
    pub support: Vec<Exponent>,
    pub basis: Vec<Poly<S>>,
}

impl<S: Scalar> VanishingSpace<S> {
    /// Wraps kernel vectors whose coordinates are indexed by `support`.
    pub fn from_vectors(n: usize, support: Vec<Exponent>, vectors: &[Vec<S>]) -> Self {
        let basis = vectors
            .iter()
            .map(|v| Poly::from_terms(n, support.iter().cloned().zip(v.iter().cloned())))
            .collect();
        VanishingSpace { n, support, basis }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn vanishing_space<S: Scalar>(degrees: &[Exponent], points: &PointSet<S>) -> VanishingSpace<S> {
    let kernel = vandermonde(degrees, points).kernel_basis();
    VanishingSpace::from_vectors(points.n(), degrees.to_vec(), &kernel)
}

/// The Gröbner basis of `I(X)` produced by [`moeller_basis`].
#[derive(Debug, Clone, PartialEq)]
pub struct MoellerBasis<S> {
    pub groebner: Vec<Poly<S>>,
    /// The normal set `𝒩(I(X))`, ascending in `order`.
    pub normal_set: Vec<Exponent>,
    pub order: MonomialOrder,
    pub degree_set: Vec<Exponent>,
    pub border: Vec<Exponent>,
}

/// Gröbner basis of the vanishing ideal of `points` supported on `D ∪ ∂D`.
///
/// The normal set is chosen greedily in ascending order among the members of
/// `D` whose evaluation vectors are independent of the earlier choices; every
/// other monomial `t` of `D ∪ ∂D` yields `t − p_t`, where `p_t` is the unique
/// combination of normal monomials agreeing with `t` on the points.
pub fn moeller_basis<S: Scalar>(
    points: &PointSet<S>,
    degrees: &ExponentSet,
    order: &MonomialOrder,
) -> Result<MoellerBasis<S>, VanishError> {
    let n = points.n();
    if !is_distinguished(degrees, order) {
        return Err(VanishError::NotDistinguished);
    }
    let sorted = order.sorted(degrees);
    let rank = vandermonde(&sorted, points).rank();
    if rank < points.len() {
        return Err(VanishError::NotSurjective {
            rank,
            points: points.len(),
        });
    }
    let border_set = border(degrees, n)?;
    let eval = |t: &Exponent| -> Vec<S> { points.iter().map(|x| monomial_value(t, x)).collect() };

    // greedy independent columns
    let mut normal_set = Vec::new();
    let mut echelon: Vec<(usize, Vec<S>)> = Vec::new();
    for t in &sorted {
        if normal_set.len() == points.len() {
            break;
        }
        let mut v = eval(t);
        for (p, row) in &echelon {
            let f = v[*p].clone();
            if !f.is_zero() {
                for (a, b) in v.iter_mut().zip(row) {
                    *a = a.clone() - f.clone() * b.clone();
                }
            }
        }
        if let Some(p) = v
            .iter()
            .position(|a| !a.is_negligible(S::default_tolerance()))
        {
            let inv = S::one() / v[p].clone();
            let v: Vec<S> = v.into_iter().map(|a| a * inv.clone()).collect();
            for (_, row) in echelon.iter_mut() {
                let f = row[p].clone();
                if !f.is_zero() {
                    for (a, b) in row.iter_mut().zip(&v) {
                        *a = a.clone() - f.clone() * b.clone();
                    }
                }
            }
            echelon.push((p, v));
            normal_set.push(t.clone());
        }
    }

    let basis_matrix = vandermonde(&normal_set, points);
    let normal_lookup: BTreeSet<&Exponent> = normal_set.iter().collect();
    let mut groebner = Vec::new();
    let mut candidates: Vec<Exponent> = sorted.iter().chain(&border_set).cloned().collect();
    order.sort(&mut candidates);
    for t in candidates.iter().filter(|t| !normal_lookup.contains(t)) {
        let coeffs = if normal_set.is_empty() {
            Vec::new()
        } else {
            basis_matrix
                .solve_square(&eval(t))
                .expect("normal set evaluation is bijective")
        };
        let mut q = Poly::monomial(t.clone(), S::one());
        for (c, a) in normal_set.iter().zip(coeffs) {
            q.add_term(c.clone(), -a);
        }
        groebner.push(q);
    }
    Ok(MoellerBasis {
        groebner,
        normal_set,
        order: order.clone(),
        degree_set: sorted,
        border: order.sorted(&border_set),
    })
}

/// `⟨I_{≤d}(X)⟩ = I(X)` holds from `d = |X|` on.
pub fn stabilization_bound<S: Scalar>(points: &PointSet<S>) -> usize {
    points.len()
}

pub fn ideal_membership<S: Scalar>(p: &Poly<S>, basis: &MoellerBasis<S>) -> bool {
    normal_form(p, &basis.groebner, &basis.order).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::Rational;
    use crate::poly::{is_groebner_basis, IndexFamily};
    use num_traits::Zero;

    fn q(n: i64) -> Rational {
        Rational::integer(n)
    }

    fn pts(v: &[&[i64]]) -> PointSet<Rational> {
        let n = v.first().map_or(1, |p| p.len());
        PointSet::new(
            n,
            v.iter()
                .map(|p| p.iter().map(|&x| q(x)).collect())
                .collect(),
        )
        .unwrap()
    }

    fn p2(terms: &[([i64; 2], i64)]) -> Poly<Rational> {
        Poly::from_terms(2, terms.iter().map(|(e, c)| (Exponent::from(*e), q(*c))))
    }

    fn three_points() -> PointSet<Rational> {
        pts(&[&[0, 0], &[1, 0], &[0, 1]])
    }

    fn t(n: usize, d: usize) -> Vec<Exponent> {
        IndexFamily::total(n).members_sorted(d, &MonomialOrder::degrevlex(n))
    }

    #[test]
    fn point_set_validation() {
        assert_eq!(
            PointSet::new(2, vec![vec![q(1), q(2)], vec![q(1), q(2)]]),
            Err(VanishError::DuplicatePoint(1))
        );
        assert!(matches!(
            PointSet::new(2, vec![vec![q(1)]]),
            Err(VanishError::DimensionMismatch { .. })
        ));
        assert!(three_points().same_points(&pts(&[&[0, 1], &[0, 0], &[1, 0]])));
    }

    #[test]
    fn vandermonde_examples() {
        let d = vec![
            Exponent::from([0, 0]),
            Exponent::from([1, 0]),
            Exponent::from([0, 1]),
        ];
        let v = vandermonde(&d, &three_points());
        assert_eq!(
            v.to_rows(),
            vec![
                vec![q(1), q(0), q(0)],
                vec![q(1), q(1), q(0)],
                vec![q(1), q(0), q(1)]
            ]
        );
        let v1 = vandermonde(&t(1, 1), &pts(&[&[2], &[26]]));
        assert_eq!(v1.to_rows(), vec![vec![q(1), q(2)], vec![q(1), q(26)]]);
        let v0 = vandermonde(&d, &PointSet::<Rational>::empty(2));
        assert_eq!((v0.rows(), v0.cols()), (0, 3));
    }

    #[test]
    fn vanishing_space_examples() {
        assert_eq!(vanishing_space(&t(2, 1), &three_points()).dim(), 0);
        let v = vanishing_space(&t(2, 2), &three_points());
        assert_eq!(v.dim(), 3);
        let expected = [
            p2(&[([2, 0], 1), ([1, 0], -1)]),
            p2(&[([0, 2], 1), ([0, 1], -1)]),
            p2(&[([1, 1], 1)]),
        ];
        // same span: each expected generator lies in the span and dimensions agree
        let rows: Vec<Vec<Rational>> = v
            .basis
            .iter()
            .chain(&expected)
            .map(|p| v.support.iter().map(|e| p.coeff(e)).collect())
            .collect();
        assert_eq!(Matrix::from_rows(rows).unwrap().rank(), 3);
        let uni = vanishing_space(&t(1, 2), &pts(&[&[2], &[26]]));
        assert_eq!(uni.basis, vec![Poly::from_coeffs([q(52), q(-28), q(1)])]);
    }

    #[test]
    fn moeller_examples() {
        let ord = MonomialOrder::degrevlex(2);
        let mb = moeller_basis(&three_points(), &IndexFamily::total(2).members(1), &ord).unwrap();
        assert_eq!(mb.normal_set, t(2, 1));
        assert_eq!(mb.groebner.len(), 3 + 3 - 3);
        for g in [
            p2(&[([2, 0], 1), ([1, 0], -1)]),
            p2(&[([1, 1], 1)]),
            p2(&[([0, 2], 1), ([0, 1], -1)]),
        ] {
            assert!(mb.groebner.contains(&g), "{g}");
        }

        let uni = moeller_basis(
            &pts(&[&[2], &[26]]),
            &IndexFamily::total(1).members(1),
            &MonomialOrder::lex(1),
        )
        .unwrap();
        assert_eq!(uni.groebner, vec![Poly::from_coeffs([q(52), q(-28), q(1)])]);
        for x in [2, 26] {
            assert_eq!(uni.groebner[0].eval(&[q(x)]), q(0));
        }

        let empty =
            moeller_basis(&PointSet::<Rational>::empty(2), &ExponentSet::new(), &ord).unwrap();
        assert_eq!(empty.groebner, vec![Poly::constant(2, q(1))]);
        assert!(empty.normal_set.is_empty());
    }

    #[test]
    fn moeller_errors() {
        let ord = MonomialOrder::degrevlex(2);
        assert_eq!(
            moeller_basis(&three_points(), &IndexFamily::max(2).members(1), &ord),
            Err(VanishError::NotDistinguished)
        );
        assert_eq!(
            moeller_basis(&three_points(), &IndexFamily::total(2).members(0), &ord),
            Err(VanishError::NotSurjective { rank: 1, points: 3 })
        );
    }

    #[test]
    fn membership_examples() {
        let ord = MonomialOrder::degrevlex(2);
        let mb = moeller_basis(&three_points(), &IndexFamily::total(2).members(1), &ord).unwrap();
        assert!(ideal_membership(&p2(&[([2, 0], 1), ([1, 0], -1)]), &mb));
        assert!(!ideal_membership(&p2(&[([1, 0], 1)]), &mb));
        assert!(ideal_membership(&Poly::zero(2), &mb));
        assert!(is_groebner_basis(&mb.groebner, &ord));
        assert_eq!(stabilization_bound(&three_points()), 3);
        assert_eq!(stabilization_bound(&PointSet::<Rational>::empty(1)), 0);
    }

    #[test]
    fn collinear_points_need_full_degree() {
        // three points on the X1-axis: I_{≤2} generates only ⟨X2⟩
        let x = pts(&[&[0, 0], &[1, 0], &[2, 0]]);
        let ord = MonomialOrder::degrevlex(2);
        let low = vanishing_space(&t(2, 2), &x);
        let mb = moeller_basis(&x, &IndexFamily::total(2).members(3), &ord).unwrap();
        let cubic = p2(&[([3, 0], 1), ([2, 0], -3), ([1, 0], 2)]);
        assert!(ideal_membership(&cubic, &mb));
        assert!(low
            .basis
            .iter()
            .all(|p| p.coeff(&Exponent::from([3, 0])).is_zero()));
        let generated_by_low = moeller_basis(&x, &IndexFamily::total(2).members(2), &ord).unwrap();
        assert!(ideal_membership(&cubic, &generated_by_low));
    }
}
