//! Common zeros of the polynomial spaces produced by Prony kernels.
//!
//! A vanishing space on a finite support is turned into a [`QuotientModel`]:
//! a normal set together with commuting multiplication matrices. Points are
//! recovered from left eigenvectors of a random combination of the matrices,
//! exactly over ℚ or approximately in floating point.

mod roots;

pub use self::roots::rational_roots;

use std::collections::{BTreeMap, BTreeSet};

use nalgebra::DMatrix;
use num_traits::Zero;
use rand::Rng;
use thiserror::Error;

use crate::arith::{Approx, FloatScalar, Rational, Scalar};
use crate::linalg::{LinalgError, Matrix};
use crate::poly::{
    border, is_order_ideal, Exponent, ExponentSet, IndexFamily, MonomialOrder, Poly,
};
use crate::vanish::{PointSet, VanishingSpace};

/// Re-draws of the random combination before giving up on separating eigenvalues.
pub const MAX_REDRAWS: usize = 5;

/// Relative residual accepted by the float solver when `tol` is smaller.
pub const FLOAT_RESIDUAL_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ZeroDimError {
    #[error("degree too small: the border of the normal set is not covered by the support")]
    DegreeInsufficient,
    #[error("multiplication matrices do not commute")]
    NotZeroDimensional,
    #[error("characteristic polynomial has non-rational roots")]
    IrrationalSpectrum,
    #[error("eigenvalues stayed repeated after {0} random combinations")]
    RepeatedEigenvalues(usize),
    #[error("floating point eigen-decomposition failed")]
    EigenFailure,
    #[error("recovered points leave a relative residual of {0:e}")]
    ResidualTooLarge(f64),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exactness {
    Exact,
    Approximate,
}

/// `S/⟨V⟩` presented by a normal set and multiplication matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct QuotientModel<S> {
    pub n: usize,
    pub order: MonomialOrder,
    /// Basis monomials of the quotient, ascending in `order`.
    pub normal_set: Vec<Exponent>,
    /// Coordinates over `normal_set` of every monomial of `N ∪ ∂N`.
    pub reductions: BTreeMap<Exponent, Vec<S>>,
    /// `multiplication[i]` has as column `j` the reduction of `Xᵢ·normal_set[j]`.
    pub multiplication: Vec<Matrix<S>>,
    /// The generators of the ideal, used to check recovered points.
    pub relations: Vec<Poly<S>>,
}

impl<S: Scalar> QuotientModel<S> {
    pub fn dim(&self) -> usize {
        self.normal_set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.normal_set.is_empty()
    }

    fn unit_index(&self) -> Option<usize> {
        self.normal_set.iter().position(Exponent::is_zero)
    }

    /// Coordinate vectors of `X₁, …, Xₙ`.
    fn variable_coordinates(&self) -> Vec<Vec<S>> {
        (0..self.n)
            .map(|i| {
                self.reductions
                    .get(&Exponent::unit(self.n, i))
                    .cloned()
                    .expect("variables lie in N ∪ ∂N")
            })
            .collect()
    }

    pub fn combination(&self, c: &[i64]) -> Matrix<S> {
        let k = self.dim();
        self.multiplication
            .iter()
            .zip(c)
            .fold(Matrix::zeros(k, k), |acc, (m, &ci)| {
                acc.add(&m.scale(&S::from_i64(ci)))
                    .expect("square matrices of equal size")
            })
    }

    /// Largest relative residual `|p(x)| / Σ|c_α x^α|` over relations and points.
    pub fn residual(&self, points: &[Vec<S>]) -> f64 {
        let mut worst: f64 = 0.0;
        for x in points {
            for p in &self.relations {
                let scale: f64 = p
                    .terms()
                    .map(|(e, c)| c.magnitude() * crate::poly::monomial_value(e, x).magnitude())
                    .sum();
                let value = p.eval(x).magnitude();
                if value > 0.0 {
                    worst = worst.max(value / scale.max(f64::MIN_POSITIVE));
                }
            }
        }
        worst
    }

    fn empty(n: usize, order: MonomialOrder, relations: Vec<Poly<S>>) -> Self {
        QuotientModel {
            n,
            order,
            normal_set: Vec::new(),
            reductions: BTreeMap::new(),
            multiplication: vec![Matrix::zeros(0, 0); n],
            relations,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZeroLocus<S> {
    pub points: PointSet<S>,
    pub exactness: Exactness,
    pub residual: f64,
}

pub fn quotient_model<S: Scalar>(
    space: &VanishingSpace<S>,
    order: &MonomialOrder,
) -> Result<QuotientModel<S>, ZeroDimError> {
    quotient_model_with_tol(space, order, S::default_tolerance())
}

/// Builds the quotient model of the ideal generated by `space`.
///
/// Columns are arranged in descending order so the pivots of the reduced
/// echelon form are leading terms; the remaining monomials of the support
/// form the normal set. Relations whose leading term lies beyond the border
/// are reduced through the matrices, and whatever they leave behind is
/// factored out together with its images under multiplication.
pub fn quotient_model_with_tol<S: Scalar>(
    space: &VanishingSpace<S>,
    order: &MonomialOrder,
    tol: f64,
) -> Result<QuotientModel<S>, ZeroDimError> {
    let n = space.n;
    let mut cols = space.support.clone();
    order.sort(&mut cols);
    cols.reverse();
    let col_index: BTreeMap<&Exponent, usize> =
        cols.iter().enumerate().map(|(i, e)| (e, i)).collect();

    let rows: Vec<Vec<S>> = space
        .basis
        .iter()
        .map(|p| cols.iter().map(|e| p.coeff(e)).collect())
        .collect();
    let (reduced, pivots) = if rows.is_empty() {
        (Matrix::zeros(0, cols.len()), Vec::new())
    } else {
        let r = Matrix::from_rows(rows)?.rref_with_tol(tol);
        (r.reduced, r.pivots)
    };
    let relations: Vec<Poly<S>> = (0..pivots.len())
        .map(|r| Poly::from_terms(n, cols.iter().cloned().zip(reduced.row(r).iter().cloned())))
        .collect();
    let leading: BTreeSet<&Exponent> = pivots.iter().map(|&c| &cols[c]).collect();
    if leading.contains(&Exponent::zero(n)) {
        return Ok(QuotientModel::empty(n, order.clone(), relations));
    }

    let normal: ExponentSet = cols
        .iter()
        .filter(|e| !leading.contains(e))
        .cloned()
        .collect();
    if !is_order_ideal(&normal) {
        return Err(ZeroDimError::DegreeInsufficient);
    }
    let edge = border(&normal, n).map_err(|_| ZeroDimError::DegreeInsufficient)?;
    if !edge.iter().all(|e| col_index.contains_key(e)) {
        return Err(ZeroDimError::DegreeInsufficient);
    }
    let normal_set = order.sorted(&normal);
    let pos: BTreeMap<&Exponent, usize> =
        normal_set.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let k = normal_set.len();

    let mut table: BTreeMap<Exponent, Vec<S>> = BTreeMap::new();
    for (i, e) in normal_set.iter().enumerate() {
        let mut v = vec![S::zero(); k];
        v[i] = S::one();
        table.insert(e.clone(), v);
    }
    for (r, &c) in pivots.iter().enumerate() {
        let v = normal_set
            .iter()
            .map(|m| -reduced[(r, col_index[m])].clone())
            .collect();
        table.insert(cols[c].clone(), v);
    }
    let multiplication: Vec<Matrix<S>> = (0..n)
        .map(|i| {
            Matrix::from_fn(k, k, |row, j| {
                table[&normal_set[j].with_coord(i, 1)][row].clone()
            })
        })
        .collect();

    let loose = if S::EXACT { 0.0 } else { tol.sqrt() };
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (&multiplication[i], &multiplication[j]);
            let comm = a.mul(b)?.sub(&b.mul(a)?)?;
            let scale = (a.max_magnitude() * b.max_magnitude() * k as f64).max(1.0);
            if comm.max_magnitude() > loose * scale || (S::EXACT && !comm.is_zero()) {
                return Err(ZeroDimError::NotZeroDimensional);
            }
        }
    }

    // relations beyond the border, reduced through the matrices
    let one = pos[&Exponent::zero(n)];
    let mut extras = Vec::new();
    for t in leading.iter().filter(|t| !edge.contains(*t)) {
        let mut v = vec![S::zero(); k];
        v[one] = S::one();
        for (i, &e) in t.coords().iter().enumerate() {
            for _ in 0..e {
                v = multiplication[i].mul_vec(&v)?;
            }
        }
        let diff: Vec<S> = v
            .iter()
            .zip(&table[*t])
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        let scale = v
            .iter()
            .chain(&table[*t])
            .map(Scalar::magnitude)
            .fold(1.0, f64::max);
        if diff.iter().any(|d| !d.is_negligible(loose * scale)) {
            extras.push(diff);
        }
    }

    let mut reductions: BTreeMap<Exponent, Vec<S>> = table
        .into_iter()
        .filter(|(e, _)| normal.contains(e) || edge.contains(e))
        .collect();
    let model = QuotientModel {
        n,
        order: order.clone(),
        normal_set,
        reductions: BTreeMap::new(),
        multiplication,
        relations,
    };
    if extras.is_empty() {
        return Ok(QuotientModel {
            reductions,
            ..model
        });
    }

    let invariant = krylov_closure(extras, &model.multiplication, tol)?;
    // descending columns put the pivots at the largest normal monomials
    let desc: Vec<usize> = (0..k).rev().collect();
    let w = Matrix::from_rows(
        invariant
            .iter()
            .map(|v| desc.iter().map(|&j| v[j].clone()).collect())
            .collect(),
    )?
    .rref_with_tol(tol);
    let pivot_cols: Vec<usize> = w.pivots.iter().map(|&c| desc[c]).collect();
    if pivot_cols.contains(&one) {
        return Ok(QuotientModel::empty(n, order.clone(), model.relations));
    }
    let keep: Vec<usize> = (0..k).filter(|j| !pivot_cols.contains(j)).collect();
    let project = |v: &[S]| -> Vec<S> {
        let mut out = v.to_vec();
        for (r, &p) in pivot_cols.iter().enumerate() {
            let f = out[p].clone();
            if f.is_zero() {
                continue;
            }
            for (c, &j) in desc.iter().enumerate() {
                out[j] = out[j].clone() - f.clone() * w.reduced[(r, c)].clone();
            }
        }
        keep.iter().map(|&j| out[j].clone()).collect()
    };
    for v in reductions.values_mut() {
        *v = project(v);
    }
    let kk = keep.len();
    let multiplication = model
        .multiplication
        .iter()
        .map(|m| {
            let cols: Vec<Vec<S>> = keep.iter().map(|&j| project(&m.column(j))).collect();
            Matrix::from_fn(kk, kk, |r, c| cols[c][r].clone())
        })
        .collect();
    let normal_set = keep.iter().map(|&j| model.normal_set[j].clone()).collect();
    Ok(QuotientModel {
        normal_set,
        reductions,
        multiplication,
        ..model
    })
}

/// Basis of the smallest subspace containing `seeds` and stable under `mats`.
fn krylov_closure<S: Scalar>(
    seeds: Vec<Vec<S>>,
    mats: &[Matrix<S>],
    tol: f64,
) -> Result<Vec<Vec<S>>, ZeroDimError> {
    let mut basis: Vec<Vec<S>> = Vec::new();
    let mut queue = seeds;
    while let Some(v) = queue.pop() {
        let mut candidate = basis.clone();
        candidate.push(v.clone());
        if Matrix::from_rows(candidate)?.rank_with_tol(tol) > basis.len() {
            basis.push(v.clone());
            for m in mats {
                queue.push(m.mul_vec(&v)?);
            }
        }
    }
    Ok(basis)
}

/// Reduced basis of the span of all `X^β·p` supported on `support`.
fn close_under_multiplication<S: Scalar>(
    gens: Vec<Poly<S>>,
    support: &[Exponent],
    tol: f64,
) -> Result<Vec<Poly<S>>, ZeroDimError> {
    let inside: BTreeSet<&Exponent> = support.iter().collect();
    let mut gens = gens;
    let mut rank = usize::MAX;
    loop {
        let n = support.first().map_or(0, Exponent::len);
        let mut all = gens.clone();
        for p in &gens {
            for i in 0..n {
                let shifted = p.mul_term(&Exponent::unit(n, i), &S::one());
                if shifted.support().all(|e| inside.contains(e)) {
                    all.push(shifted);
                }
            }
        }
        if all.is_empty() {
            return Ok(all);
        }
        let rows: Vec<Vec<S>> = all
            .iter()
            .map(|p| support.iter().map(|e| p.coeff(e)).collect())
            .collect();
        let r = Matrix::from_rows(rows)?.rref_with_tol(tol);
        gens = (0..r.rank)
            .map(|i| {
                Poly::from_terms(
                    n,
                    support
                        .iter()
                        .cloned()
                        .zip(r.reduced.row(i).iter().cloned()),
                )
            })
            .collect();
        if r.rank == rank {
            return Ok(gens);
        }
        rank = r.rank;
    }
}

fn draw<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<i64> {
    if n == 1 {
        return vec![1];
    }
    (0..n).map(|_| rng.random_range(1..=1009)).collect()
}

fn dot<S: Scalar>(a: &[S], b: &[S]) -> S {
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// Exact common zeros via left eigenvectors of a random combination `Σ cᵢMᵢ`.
pub fn zero_locus_exact<R: Rng + ?Sized>(
    model: &QuotientModel<Rational>,
    rng: &mut R,
) -> Result<ZeroLocus<Rational>, ZeroDimError> {
    let n = model.n;
    let Some(one) = model.unit_index() else {
        return Ok(ZeroLocus {
            points: PointSet::empty(n),
            exactness: Exactness::Exact,
            residual: 0.0,
        });
    };
    let coords = model.variable_coordinates();
    for _ in 0..=MAX_REDRAWS {
        let m = model.combination(&draw(rng, n));
        let (roots, split) = rational_roots(&m.char_poly()?);
        if !split {
            return Err(ZeroDimError::IrrationalSpectrum);
        }
        if roots.windows(2).any(|w| w[0] == w[1]) {
            continue;
        }
        let k = model.dim();
        let mut points = Vec::with_capacity(k);
        for lambda in roots {
            let shifted = m.sub(&Matrix::identity(k).scale(&lambda))?.transpose();
            let kernel = shifted.kernel_basis();
            let w = kernel
                .into_iter()
                .next()
                .ok_or(ZeroDimError::EigenFailure)?;
            let s = w[one].clone();
            if s.is_zero() {
                return Err(ZeroDimError::EigenFailure);
            }
            points.push(
                coords
                    .iter()
                    .map(|r| dot(&w, r) / s.clone())
                    .collect::<Vec<_>>(),
            );
        }
        let residual = model.residual(&points);
        let points = PointSet::new(n, points).map_err(|_| ZeroDimError::EigenFailure)?;
        return Ok(ZeroLocus {
            points,
            exactness: Exactness::Exact,
            residual,
        });
    }
    Err(ZeroDimError::RepeatedEigenvalues(MAX_REDRAWS + 1))
}

/// Exact zero set of the ideal, ignoring multiplicities.
///
/// Candidate coordinates are the rational eigenvalues of each `Mᵢ`; a
/// candidate survives when every relation vanishes on it.
pub fn zero_set_exact(model: &QuotientModel<Rational>) -> Result<PointSet<Rational>, ZeroDimError> {
    let n = model.n;
    if model.is_empty() {
        return Ok(PointSet::empty(n));
    }
    let mut candidates: Vec<Vec<Rational>> = vec![Vec::new()];
    for m in &model.multiplication {
        let (values, split) = roots::distinct_rational_roots(&m.char_poly()?);
        if !split {
            return Err(ZeroDimError::IrrationalSpectrum);
        }
        candidates = candidates
            .into_iter()
            .flat_map(|c| {
                values
                    .iter()
                    .map(move |v| [c.clone(), vec![v.clone()]].concat())
            })
            .collect();
    }
    let points = candidates
        .into_iter()
        .filter(|x| model.relations.iter().all(|p| p.eval(x).is_zero()))
        .collect();
    Ok(PointSet::new(n, points).expect("candidates are distinct"))
}

/// Approximate common zeros from a dense nonsymmetric eigen-decomposition.
///
/// Eigenvalues with imaginary part above `tol` (relative to their modulus)
/// are dropped.
pub fn zero_locus_float<S: FloatScalar, R: Rng + ?Sized>(
    model: &QuotientModel<S>,
    tol: f64,
    rng: &mut R,
) -> Result<ZeroLocus<S>, ZeroDimError> {
    let n = model.n;
    let Some(one) = model.unit_index() else {
        return Ok(ZeroLocus {
            points: PointSet::empty(n),
            exactness: Exactness::Approximate,
            residual: 0.0,
        });
    };
    let k = model.dim();
    let coords: Vec<Vec<f64>> = model
        .variable_coordinates()
        .iter()
        .map(|r| r.iter().map(Scalar::to_f64).collect())
        .collect();
    for _ in 0..=MAX_REDRAWS {
        let comb = model.combination(&draw(rng, n));
        let m = DMatrix::from_fn(k, k, |i, j| comb[(i, j)].to_f64());
        let schur = nalgebra::linalg::Schur::try_new(m.clone(), f64::EPSILON, 10_000)
            .ok_or(ZeroDimError::EigenFailure)?;
        let scale = m.amax().max(1.0);
        let mut real: Vec<f64> = schur
            .complex_eigenvalues()
            .iter()
            .filter(|z| z.im.abs() <= tol * z.norm().max(1.0))
            .map(|z| z.re)
            .collect();
        real.sort_by(f64::total_cmp);
        if real
            .windows(2)
            .any(|w| (w[1] - w[0]).abs() <= tol.sqrt() * scale)
        {
            continue;
        }
        let mut points = Vec::with_capacity(real.len());
        for lambda in real {
            let shifted = (&m - DMatrix::identity(k, k) * lambda).transpose();
            let svd = shifted.svd(false, true);
            let v_t = svd.v_t.ok_or(ZeroDimError::EigenFailure)?;
            let (idx, _) = svd.singular_values.argmin();
            let w: Vec<f64> = v_t.row(idx).iter().copied().collect();
            let s = w[one];
            if s.abs() <= f64::EPSILON * w.iter().fold(0.0f64, |a, x| a.max(x.abs())) {
                return Err(ZeroDimError::EigenFailure);
            }
            let x: Option<Vec<S>> = coords
                .iter()
                .map(|r| S::from_f64(r.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>() / s))
                .collect();
            points.push(x.ok_or(ZeroDimError::EigenFailure)?);
        }
        let residual = model.residual(&points);
        if residual > FLOAT_RESIDUAL_LIMIT.max(tol) {
            return Err(ZeroDimError::ResidualTooLarge(residual));
        }
        let points = PointSet::new(n, points).map_err(|_| ZeroDimError::EigenFailure)?;
        return Ok(ZeroLocus {
            points,
            exactness: Exactness::Approximate,
            residual,
        });
    }
    Err(ZeroDimError::RepeatedEigenvalues(MAX_REDRAWS + 1))
}

/// Scalars with a zero-locus solver: exact for [`Rational`], float otherwise.
pub trait ZeroLocusSolver: Scalar {
    /// Simple common zeros, one per basis element of the quotient.
    fn zero_locus<R: Rng + ?Sized>(
        model: &QuotientModel<Self>,
        tol: f64,
        rng: &mut R,
    ) -> Result<ZeroLocus<Self>, ZeroDimError>;

    /// The zero set regardless of multiplicities.
    fn zero_set<R: Rng + ?Sized>(
        model: &QuotientModel<Self>,
        tol: f64,
        rng: &mut R,
    ) -> Result<PointSet<Self>, ZeroDimError>;
}

impl ZeroLocusSolver for Rational {
    fn zero_locus<R: Rng + ?Sized>(
        model: &QuotientModel<Self>,
        _tol: f64,
        rng: &mut R,
    ) -> Result<ZeroLocus<Self>, ZeroDimError> {
        zero_locus_exact(model, rng)
    }

    fn zero_set<R: Rng + ?Sized>(
        model: &QuotientModel<Self>,
        _tol: f64,
        _rng: &mut R,
    ) -> Result<PointSet<Self>, ZeroDimError> {
        zero_set_exact(model)
    }
}

macro_rules! impl_float_solver {
    ($($t:ty),*) => {
        $(
            impl ZeroLocusSolver for $t {
                fn zero_locus<R: Rng + ?Sized>(model: &QuotientModel<Self>, tol: f64, rng: &mut R) -> Result<ZeroLocus<Self>, ZeroDimError> {
                    zero_locus_float(model, tol, rng)
                }

                fn zero_set<R: Rng + ?Sized>(model: &QuotientModel<Self>, tol: f64, rng: &mut R) -> Result<PointSet<Self>, ZeroDimError> {
                    zero_locus_float(model, tol, rng).map(|z| z.points)
                }
            }
        )*
    };
}

impl_float_solver!(Approx, f64);

/// Zero set of the ideal generated by `space`, enlarging the support by
/// multiplying with variables until a quotient model exists.
///
/// Returns `None` when no model appears within `extra` additional degrees,
/// which is what happens for ideals with infinitely many zeros.
pub fn common_zeros<S: ZeroLocusSolver, R: Rng + ?Sized>(
    space: &VanishingSpace<S>,
    order: &MonomialOrder,
    extra: usize,
    tol: f64,
    rng: &mut R,
) -> Result<Option<PointSet<S>>, ZeroDimError> {
    let n = space.n;
    let family = IndexFamily::total(n);
    let start = space
        .support
        .iter()
        .map(|e| e.degree().max(0) as usize)
        .max()
        .unwrap_or(0);
    let mut gens: Vec<Poly<S>> = space
        .basis
        .iter()
        .filter(|p| !p.is_zero())
        .cloned()
        .collect();
    for k in start..=start + extra {
        let support = family.members_sorted(k, order);
        gens = close_under_multiplication(gens, &support, tol)?;
        let current = VanishingSpace {
            n,
            support,
            basis: gens.clone(),
        };
        match quotient_model_with_tol(&current, order, tol) {
            Ok(model) => return S::zero_set(&model, tol, rng).map(Some),
            Err(ZeroDimError::DegreeInsufficient | ZeroDimError::NotZeroDimensional) => {}
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}
