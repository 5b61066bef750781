//! Prony structures relative to an algebraic set `Y` known to contain the
//! support: columns are restricted to monomials that stay independent
//! modulo `I(Y)`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::Scalar;
use crate::linalg::Matrix;
use crate::poly::{
    is_groebner_basis, normal_form, Exponent, MonomialOrder, OrderKind, Poly, PolyError,
};
use crate::prony::{Layout, PronyError, PronyStructure, SampleOracle};
use crate::structures::hankel_matrix;
use crate::vanish::{PointSet, VanishingSpace};
use crate::zerodim::{common_zeros, ZeroDimError, ZeroLocusSolver};

/// Buchberger's criterion is only run for this many generators or fewer.
const GROEBNER_CHECK_LIMIT: usize = 4;

/// Extra degrees tried when intersecting a kernel with `Y`.
const ZERO_SET_EXTENSION: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RelativeError {
    #[error("generators are not a Gröbner basis for the given order")]
    NotGroebner,
    #[error("normal form of X^{0} leaves the column set")]
    DegreeLeak(Exponent),
    #[error("the zero set is not finite within the searched degrees")]
    NotFinite,
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    ZeroDim(#[from] ZeroDimError),
}

impl From<RelativeError> for PronyError {
    fn from(e: RelativeError) -> Self {
        match e {
            RelativeError::ZeroDim(z) => z.into(),
            other => PronyError::Structure(other.to_string()),
        }
    }
}

/// `Y = ZL(I)` given by a Gröbner basis of `I`.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicSet<S> {
    n: usize,
    order: MonomialOrder,
    generators: Vec<Poly<S>>,
}

impl<S: Scalar> AlgebraicSet<S> {
    pub fn new(
        n: usize,
        order: MonomialOrder,
        generators: Vec<Poly<S>>,
    ) -> Result<Self, RelativeError> {
        if order.n() != n {
            return Err(PolyError::DimensionMismatch {
                expected: n,
                found: order.n(),
            }
            .into());
        }
        let generators: Vec<Poly<S>> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        if let Some(g) = generators.iter().find(|g| g.n() != n) {
            return Err(PolyError::DimensionMismatch {
                expected: n,
                found: g.n(),
            }
            .into());
        }
        let leads: Vec<&Exponent> = generators
            .iter()
            .filter_map(|g| g.leading_term(&order).map(|(e, _)| e))
            .collect();
        for (i, a) in leads.iter().enumerate() {
            for (j, b) in leads.iter().enumerate() {
                if i != j && a.divides(b) {
                    return Err(RelativeError::NotGroebner);
                }
            }
        }
        if generators.len() <= GROEBNER_CHECK_LIMIT && !is_groebner_basis(&generators, &order) {
            return Err(RelativeError::NotGroebner);
        }
        Ok(AlgebraicSet {
            n,
            order,
            generators,
        })
    }

    /// All of `Kⁿ`.
    pub fn whole_space(n: usize, order: MonomialOrder) -> Self {
        AlgebraicSet {
            n,
            order,
            generators: Vec::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn generators(&self) -> &[Poly<S>] {
        &self.generators
    }

    pub fn reduce(&self, p: &Poly<S>) -> Poly<S> {
        normal_form(p, &self.generators, &self.order)
    }

    pub fn contains(&self, x: &[S]) -> bool {
        self.generators.iter().all(|g| g.eval(x).is_zero())
    }

    /// Multiples `X^β·g` of the generators supported inside `support`.
    pub fn relations_within(&self, support: &[Exponent]) -> Vec<Poly<S>> {
        let inside: BTreeSet<&Exponent> = support.iter().collect();
        let mut out = Vec::new();
        for g in &self.generators {
            for beta in support {
                let shifted = g.mul_term(beta, &S::one());
                if shifted.support().all(|e| inside.contains(e)) {
                    out.push(shifted);
                }
            }
        }
        out
    }
}

/// JSON form of an algebraic set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "S: Scalar + Serialize",
    deserialize = "S: Scalar + Deserialize<'de>"
))]
pub struct AlgebraicSetDoc<S> {
    pub n: usize,
    pub order: OrderKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub precedence: Option<Vec<usize>>,
    pub generators: Vec<Poly<S>>,
}

impl<S: Scalar> AlgebraicSetDoc<S> {
    pub fn into_set(self) -> Result<AlgebraicSet<S>, RelativeError> {
        let order = match self.precedence {
            Some(p) => MonomialOrder::with_precedence(self.order, p)?,
            None => MonomialOrder::new(self.order, self.n),
        };
        let generators = self
            .generators
            .into_iter()
            .map(|g| if g.is_zero() { Poly::zero(self.n) } else { g })
            .collect();
        AlgebraicSet::new(self.n, order, generators)
    }
}

/// Standard monomials `H_d` of a column set and reductions of the others.
#[derive(Debug, Clone, PartialEq)]
pub struct CoordinateBasis<S> {
    /// `H_d`, in the order of the column set.
    pub retained: Vec<Exponent>,
    /// Normal forms of the deleted monomials, supported on `retained`.
    pub reductions: BTreeMap<Exponent, Poly<S>>,
}

pub fn coordinate_basis<S: Scalar>(
    y: &AlgebraicSet<S>,
    columns: &[Exponent],
) -> Result<CoordinateBasis<S>, RelativeError> {
    let inside: BTreeSet<&Exponent> = columns.iter().collect();
    let mut retained = Vec::new();
    let mut reductions = BTreeMap::new();
    for e in columns {
        let mono = Poly::monomial(e.clone(), S::one());
        let nf = y.reduce(&mono);
        if nf == mono {
            retained.push(e.clone());
            continue;
        }
        if !nf.support().all(|m| inside.contains(m)) {
            return Err(RelativeError::DegreeLeak(e.clone()));
        }
        reductions.insert(e.clone(), nf);
    }
    Ok(CoordinateBasis {
        retained,
        reductions,
    })
}

/// Hankel matrices with columns restricted to `H_d`; the square variant
/// restricts the rows to `H_d` as well.
#[derive(Debug, Clone, PartialEq)]
pub struct RelativeHankel<S> {
    pub layout: Layout,
    pub y: AlgebraicSet<S>,
    pub square: bool,
}

impl<S: Scalar> RelativeHankel<S> {
    pub fn new(layout: Layout, y: AlgebraicSet<S>) -> Self {
        let layout = layout.with_order(y.order().clone());
        RelativeHankel {
            layout,
            y,
            square: false,
        }
    }

    pub fn square(layout: Layout, y: AlgebraicSet<S>) -> Self {
        RelativeHankel {
            square: true,
            ..Self::new(layout, y)
        }
    }

    pub fn basis(&self, d: usize) -> Result<CoordinateBasis<S>, RelativeError> {
        coordinate_basis(&self.y, &self.layout.columns(d))
    }
}

impl<S: Scalar> PronyStructure<S> for RelativeHankel<S> {
    fn n(&self) -> usize {
        self.layout.n()
    }

    fn order(&self) -> &MonomialOrder {
        &self.layout.order
    }

    fn columns(&self, d: usize) -> Vec<Exponent> {
        match self.basis(d) {
            Ok(b) => b.retained,
            Err(_) => Vec::new(),
        }
    }

    fn support(&self, d: usize) -> Vec<Exponent> {
        self.layout.columns(d)
    }

    fn build(&self, d: usize, oracle: &mut SampleOracle<S>) -> Result<Matrix<S>, PronyError> {
        let cols = self.basis(d)?.retained;
        let rows = if self.square {
            cols.clone()
        } else {
            self.layout.rows(d)
        };
        hankel_matrix(&rows, &cols, oracle)
    }

    fn extra_relations(&self, d: usize) -> Vec<Poly<S>> {
        self.y.relations_within(&self.layout.columns(d))
    }

    fn column_coordinates(&self, d: usize, p: &Poly<S>) -> Vec<S> {
        let reduced = self.y.reduce(p);
        self.columns(d).iter().map(|e| reduced.coeff(e)).collect()
    }

    fn required_indices(&self, d: usize) -> BTreeSet<Exponent> {
        let cols: BTreeSet<Exponent> = self.columns(d).into_iter().collect();
        let rows: BTreeSet<Exponent> = if self.square {
            cols.clone()
        } else {
            self.layout.rows(d).into_iter().collect()
        };
        crate::poly::minkowski_sum(&rows, &cols)
    }
}

/// `{y ∈ Y : q(y) = 0 for every kernel polynomial q}`.
pub fn relative_zero_locus<S: ZeroLocusSolver>(
    kernel: &[Poly<S>],
    y: &AlgebraicSet<S>,
    tol: f64,
    seed: u64,
) -> Result<PointSet<S>, RelativeError> {
    use rand::SeedableRng;

    let n = y.n();
    let mut basis: Vec<Poly<S>> = kernel.iter().filter(|p| !p.is_zero()).cloned().collect();
    basis.extend(y.generators().iter().cloned());
    let mut support: BTreeSet<Exponent> = basis.iter().flat_map(|p| p.support().cloned()).collect();
    support.insert(Exponent::zero(n));
    let space = VanishingSpace {
        n,
        support: support.into_iter().collect(),
        basis,
    };
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    common_zeros(&space, y.order(), ZERO_SET_EXTENSION, tol, &mut rng)?
        .ok_or(RelativeError::NotFinite)
}
