//! The Prony pipeline: matrices built from samples, their kernels, the zero
//! locus of the kernel, and the coefficients of the recovered terms.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{ArithError, Scalar};
use crate::linalg::{LinalgError, Matrix};
use crate::poly::{Exponent, IndexFamily, MonomialOrder, Poly};
use crate::vanish::{vanishing_space, PointSet, VanishingSpace};
use crate::zerodim::{
    common_zeros, quotient_model_with_tol, Exactness, ZeroDimError, ZeroLocusSolver,
};

/// Extra degrees tried when the zero set of a kernel is computed for verification.
const ZERO_SET_EXTENSION: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Domain {
    Nat,
    Int,
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Domain::Nat => "nat",
            Domain::Int => "int",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("index {0} lies outside the oracle domain")]
    DomainMismatch(Exponent),
    #[error("missing samples at {}", format_indices(.0))]
    MissingSample(Vec<Exponent>),
    #[error("index has {found} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("sample at {index} could not be computed: {source}")]
    Arith { index: Exponent, source: ArithError },
}

fn format_indices(indices: &[Exponent]) -> String {
    indices
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

type Source<S> = Box<dyn FnMut(&Exponent) -> Result<S, OracleError> + Send>;

/// Memoized black-box access to `f` on ℕⁿ or ℤⁿ.
///
/// The evaluation count is the number of distinct indices asked for, whether
/// the value came from the source function or from a table of samples.
pub struct SampleOracle<S> {
    n: usize,
    domain: Domain,
    source: Option<Source<S>>,
    cache: BTreeMap<Exponent, S>,
    queried: BTreeSet<Exponent>,
}

impl<S: Scalar> SampleOracle<S> {
    pub fn from_fn(
        n: usize,
        domain: Domain,
        f: impl FnMut(&Exponent) -> Result<S, OracleError> + Send + 'static,
    ) -> Self {
        SampleOracle {
            n,
            domain,
            source: Some(Box::new(f)),
            cache: BTreeMap::new(),
            queried: BTreeSet::new(),
        }
    }

    /// An oracle backed only by recorded samples; other indices are missing.
    pub fn from_table(
        n: usize,
        domain: Domain,
        samples: impl IntoIterator<Item = (Exponent, S)>,
    ) -> Self {
        SampleOracle {
            n,
            domain,
            source: None,
            cache: samples.into_iter().collect(),
            queried: BTreeSet::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// Number of distinct indices queried so far.
    pub fn evaluations(&self) -> usize {
        self.queried.len()
    }

    pub fn queried(&self) -> &BTreeSet<Exponent> {
        &self.queried
    }

    /// Every value known to the oracle, queried or preloaded.
    pub fn known(&self) -> &BTreeMap<Exponent, S> {
        &self.cache
    }

    fn check(&self, index: &Exponent) -> Result<(), OracleError> {
        if index.len() != self.n {
            return Err(OracleError::DimensionMismatch {
                expected: self.n,
                found: index.len(),
            });
        }
        if self.domain == Domain::Nat && !index.is_natural() {
            return Err(OracleError::DomainMismatch(index.clone()));
        }
        Ok(())
    }

    pub fn query(&mut self, index: &Exponent) -> Result<S, OracleError> {
        self.check(index)?;
        if let Some(v) = self.cache.get(index) {
            self.queried.insert(index.clone());
            return Ok(v.clone());
        }
        let source = self
            .source
            .as_mut()
            .ok_or_else(|| OracleError::MissingSample(vec![index.clone()]))?;
        let v = source(index)?;
        self.cache.insert(index.clone(), v.clone());
        self.queried.insert(index.clone());
        Ok(v)
    }

    /// Values at all `indices`; a table oracle reports every missing index at once.
    pub fn fetch(&mut self, indices: &[Exponent]) -> Result<Vec<S>, OracleError> {
        for index in indices {
            self.check(index)?;
        }
        if self.source.is_none() {
            let missing: BTreeSet<&Exponent> = indices
                .iter()
                .filter(|i| !self.cache.contains_key(*i))
                .collect();
            if !missing.is_empty() {
                return Err(OracleError::MissingSample(
                    missing.into_iter().cloned().collect(),
                ));
            }
        }
        indices.iter().map(|i| self.query(i)).collect()
    }

    /// Value at `index` if it can be obtained, without recording a query.
    fn peek(&mut self, index: &Exponent) -> Option<S> {
        if self.check(index).is_err() {
            return None;
        }
        if let Some(v) = self.cache.get(index) {
            return Some(v.clone());
        }
        let v = (self.source.as_mut()?)(index).ok()?;
        self.cache.insert(index.clone(), v.clone());
        Some(v)
    }
}

impl<S: fmt::Debug> fmt::Debug for SampleOracle<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SampleOracle")
            .field("n", &self.n)
            .field("domain", &self.domain)
            .field("has_source", &self.source.is_some())
            .field("cached", &self.cache.len())
            .field("queried", &self.queried.len())
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PronyError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    ZeroDim(ZeroDimError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error("support labels are not rational; retry in float mode")]
    IrrationalSupport,
    #[error("no admissible degree up to {max_d}")]
    DegreeExhausted { max_d: usize },
    #[error("reconstruction at degree {degree} disagrees with the samples at {index}")]
    VerificationFailed { degree: usize, index: Exponent },
    #[error("coefficient system on the normal set is singular")]
    SingularCoefficientSystem,
    #[error("structure expects {expected} variables, oracle has {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("{0}")]
    Structure(String),
}

impl From<ZeroDimError> for PronyError {
    fn from(e: ZeroDimError) -> Self {
        match e {
            ZeroDimError::IrrationalSpectrum => PronyError::IrrationalSupport,
            other => PronyError::ZeroDim(other),
        }
    }
}

impl PronyError {
    /// Failures that a larger degree may cure.
    fn is_recoverable(&self) -> bool {
        matches!(
            self,
            PronyError::ZeroDim(
                ZeroDimError::DegreeInsufficient
                    | ZeroDimError::NotZeroDimensional
                    | ZeroDimError::RepeatedEigenvalues(_)
                    | ZeroDimError::ResidualTooLarge(_)
                    | ZeroDimError::EigenFailure
            ) | PronyError::IrrationalSupport
                | PronyError::SingularCoefficientSystem
        )
    }
}

/// How the row family depends on the degree: `ℐ_d = rows_{max(d − lag, 0)}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layout {
    pub rows: IndexFamily,
    pub cols: IndexFamily,
    pub lag: usize,
    pub order: MonomialOrder,
}

impl Layout {
    /// `ℐ = 𝒥 = family`, `ℐ_d = 𝒥_{d−1}`, graded reverse lexicographic order.
    pub fn standard(family: IndexFamily) -> Self {
        let n = family.n;
        Layout {
            rows: family,
            cols: family,
            lag: 1,
            order: MonomialOrder::degrevlex(n),
        }
    }

    pub fn with_rows(mut self, rows: IndexFamily, lag: usize) -> Self {
        self.rows = rows;
        self.lag = lag;
        self
    }

    pub fn with_order(mut self, order: MonomialOrder) -> Self {
        self.order = order;
        self
    }

    pub fn n(&self) -> usize {
        self.cols.n
    }

    pub fn rows(&self, d: usize) -> Vec<Exponent> {
        self.rows
            .members_sorted(d.saturating_sub(self.lag), &self.order)
    }

    pub fn columns(&self, d: usize) -> Vec<Exponent> {
        self.cols.members_sorted(d, &self.order)
    }
}

/// A family of matrices `P_d(f)` whose kernels cut out the support labels.
pub trait PronyStructure<S: Scalar> {
    fn n(&self) -> usize;

    fn order(&self) -> &MonomialOrder;

    /// Column labels of `build(d, ·)`.
    fn columns(&self, d: usize) -> Vec<Exponent>;

    fn build(&self, d: usize, oracle: &mut SampleOracle<S>) -> Result<Matrix<S>, PronyError>;

    /// Monomial support on which kernel polynomials live; usually the columns.
    fn support(&self, d: usize) -> Vec<Exponent> {
        self.columns(d)
    }

    /// Polynomials known to vanish on every admissible label, added to the kernel.
    fn extra_relations(&self, _d: usize) -> Vec<Poly<S>> {
        Vec::new()
    }

    /// Column coordinates of a polynomial on `support(d)`.
    fn column_coordinates(&self, d: usize, p: &Poly<S>) -> Vec<S> {
        self.columns(d).iter().map(|e| p.coeff(e)).collect()
    }

    /// Value at `gamma` of the basis element with label `x`: `x^γ` by default.
    fn basis_value(&self, x: &[S], gamma: &Exponent) -> Option<S> {
        gamma
            .coords()
            .iter()
            .zip(x)
            .try_fold(S::one(), |acc, (&g, xi)| Some(acc * xi.pow_i64(g)?))
    }

    /// Indices the oracle must answer to build `P_d`.
    fn required_indices(&self, d: usize) -> BTreeSet<Exponent>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    RankBound(usize),
    Auto { max_d: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ModeTag {
    RankBound,
    Stabilized,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub tol: f64,
    pub seed: u64,
    /// Pseudo-random lattice points checked on top of the columns.
    pub verify_extra: usize,
    /// Relative agreement required during verification in float mode.
    pub verify_tol: f64,
}

impl PipelineConfig {
    pub fn exact() -> Self {
        PipelineConfig {
            tol: 0.0,
            seed: 0,
            verify_extra: 10,
            verify_tol: 0.0,
        }
    }

    pub fn float(tol: f64) -> Self {
        PipelineConfig {
            tol,
            seed: 0,
            verify_extra: 10,
            verify_tol: 1e-6,
        }
    }

    pub fn for_scalar<S: Scalar>() -> Self {
        if S::EXACT {
            Self::exact()
        } else {
            Self::float(S::default_tolerance())
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PronyOutcome<S> {
    pub support: PointSet<S>,
    pub coefficients: Vec<S>,
    pub degree_used: usize,
    pub mode: ModeTag,
    pub exactness: Exactness,
    /// Distinct samples used for the reconstruction, verification excluded.
    pub evaluations: usize,
    pub normal_set: Vec<Exponent>,
}

impl<S: Scalar> PronyOutcome<S> {
    /// `Σ cₓ·basis(x, γ)` for the recovered terms.
    pub fn evaluate<P: PronyStructure<S> + ?Sized>(
        &self,
        structure: &P,
        gamma: &Exponent,
    ) -> Option<S> {
        self.support
            .iter()
            .zip(&self.coefficients)
            .try_fold(S::zero(), |acc, (x, c)| {
                Some(acc + c.clone() * structure.basis_value(x, gamma)?)
            })
    }
}

/// The kernel of `P_d` together with the structure's extra relations.
pub fn kernel_space<S: Scalar, P: PronyStructure<S> + ?Sized>(
    structure: &P,
    d: usize,
    matrix: &Matrix<S>,
    tol: f64,
) -> VanishingSpace<S> {
    let n = structure.n();
    let columns = structure.columns(d);
    let mut basis: Vec<Poly<S>> = matrix
        .kernel_basis_with_tol(tol)
        .iter()
        .map(|v| Poly::from_terms(n, columns.iter().cloned().zip(v.iter().cloned())))
        .collect();
    basis.extend(structure.extra_relations(d));
    VanishingSpace {
        n,
        support: structure.support(d),
        basis,
    }
}

/// Least `d` with `𝒯_r ⊆ columns(d)`.
pub fn rank_bound_degree<S: Scalar, P: PronyStructure<S> + ?Sized>(
    structure: &P,
    r: usize,
) -> usize {
    let needed = IndexFamily::total(structure.n()).members(r);
    (0..)
        .find(|&d| {
            let cols: BTreeSet<Exponent> = structure.support(d).into_iter().collect();
            needed.iter().all(|e| cols.contains(e))
        })
        .expect("column families exhaust the simplex")
}

fn check_dims<S: Scalar, P: PronyStructure<S> + ?Sized>(
    structure: &P,
    oracle: &SampleOracle<S>,
) -> Result<(), PronyError> {
    if structure.n() != oracle.n() {
        return Err(PronyError::DimensionMismatch {
            expected: structure.n(),
            found: oracle.n(),
        });
    }
    Ok(())
}

struct Candidate<S> {
    support: PointSet<S>,
    coefficients: Vec<S>,
    exactness: Exactness,
    normal_set: Vec<Exponent>,
}

fn attempt<S: ZeroLocusSolver, P: PronyStructure<S> + ?Sized>(
    structure: &P,
    oracle: &mut SampleOracle<S>,
    d: usize,
    cfg: &PipelineConfig,
    rng: &mut ChaCha8Rng,
) -> Result<Candidate<S>, PronyError> {
    let matrix = structure.build(d, oracle)?;
    let space = kernel_space(structure, d, &matrix, cfg.tol);
    let model = quotient_model_with_tol(&space, structure.order(), cfg.tol)?;
    let locus = S::zero_locus(&model, cfg.tol, rng)?;
    let coefficients = coefficient_solve(structure, &locus.points, oracle, &model.normal_set)?;
    let threshold = if S::EXACT {
        0.0
    } else {
        cfg.tol
            * coefficients
                .iter()
                .map(Scalar::magnitude)
                .fold(1.0, f64::max)
    };
    let (points, coefficients): (Vec<Vec<S>>, Vec<S>) = locus
        .points
        .into_points()
        .into_iter()
        .zip(coefficients)
        .filter(|(_, c)| !c.is_negligible(threshold))
        .unzip();
    let support = PointSet::new(structure.n(), points).expect("subset of distinct points");
    Ok(Candidate {
        support,
        coefficients,
        exactness: locus.exactness,
        normal_set: model.normal_set,
    })
}

/// Unique `c` with `Σₓ cₓ·basis(x, γ) = f(γ)` for every `γ` in the normal set.
pub fn coefficient_solve<S: Scalar, P: PronyStructure<S> + ?Sized>(
    structure: &P,
    support: &PointSet<S>,
    oracle: &mut SampleOracle<S>,
    normal_set: &[Exponent],
) -> Result<Vec<S>, PronyError> {
    if normal_set.len() != support.len() {
        return Err(PronyError::SingularCoefficientSystem);
    }
    if support.is_empty() {
        return Ok(Vec::new());
    }
    let rhs = oracle.fetch(normal_set)?;
    let k = support.len();
    let mut a = Matrix::zeros(k, k);
    for (i, gamma) in normal_set.iter().enumerate() {
        for (j, x) in support.iter().enumerate() {
            a[(i, j)] = structure
                .basis_value(x, gamma)
                .ok_or(PronyError::SingularCoefficientSystem)?;
        }
    }
    a.solve_square(&rhs).map_err(|e| match e {
        LinalgError::Singular => PronyError::SingularCoefficientSystem,
        other => other.into(),
    })
}

fn verification_grid<S: Scalar, P: PronyStructure<S> + ?Sized>(
    structure: &P,
    domain: Domain,
    d: usize,
    extra: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<Exponent> {
    let n = structure.n();
    let mut grid: Vec<Exponent> = structure.columns(d);
    let reach = 2 * d as i64 + 1;
    let low = if domain == Domain::Int { -reach } else { 0 };
    for _ in 0..extra {
        grid.push(Exponent::new(
            (0..n).map(|_| rng.random_range(low..=reach)).collect(),
        ));
    }
    grid
}

fn agrees<S: Scalar>(model: &S, sample: &S, tol: f64) -> bool {
    if S::EXACT {
        model == sample
    } else {
        (model.clone() - sample.clone()).magnitude()
            <= tol * model.magnitude().max(sample.magnitude()).max(1.0)
    }
}

/// First grid index where the outcome disagrees with the oracle; indices the
/// oracle cannot answer are skipped.
pub fn check_outcome<S: Scalar, P: PronyStructure<S> + ?Sized>(
    structure: &P,
    oracle: &mut SampleOracle<S>,
    outcome: &PronyOutcome<S>,
    cfg: &PipelineConfig,
) -> Option<Exponent> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    verify_outcome(structure, oracle, outcome, cfg, &mut rng)
}

fn verify_outcome<S: Scalar, P: PronyStructure<S> + ?Sized>(
    structure: &P,
    oracle: &mut SampleOracle<S>,
    outcome: &PronyOutcome<S>,
    cfg: &PipelineConfig,
    rng: &mut ChaCha8Rng,
) -> Option<Exponent> {
    let grid = verification_grid(
        structure,
        oracle.domain(),
        outcome.degree_used,
        cfg.verify_extra,
        rng,
    );
    grid.into_iter().find(|gamma| {
        let Some(sample) = oracle.peek(gamma) else {
            return false;
        };
        match outcome.evaluate(structure, gamma) {
            Some(value) => !agrees(&value, &sample, cfg.verify_tol),
            None => !sample.is_negligible(cfg.verify_tol),
        }
    })
}

/// Degree used by [`run_pipeline`] for `mode`.
pub fn estimate_degree<S: ZeroLocusSolver, P: PronyStructure<S> + ?Sized>(
    structure: &P,
    oracle: &mut SampleOracle<S>,
    mode: Mode,
    cfg: &PipelineConfig,
) -> Result<usize, PronyError> {
    check_dims(structure, oracle)?;
    match mode {
        Mode::RankBound(r) => Ok(rank_bound_degree(structure, r)),
        Mode::Auto { max_d } => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            for d in 0..=max_d {
                if !ranks_stable(structure, oracle, d, cfg.tol)? {
                    continue;
                }
                match attempt(structure, oracle, d, cfg, &mut rng) {
                    Ok(_) => return Ok(d),
                    Err(e) if e.is_recoverable() => continue,
                    Err(e) => return Err(e),
                }
            }
            Err(PronyError::DegreeExhausted { max_d })
        }
    }
}

fn ranks_stable<S: Scalar, P: PronyStructure<S> + ?Sized>(
    structure: &P,
    oracle: &mut SampleOracle<S>,
    d: usize,
    tol: f64,
) -> Result<bool, PronyError> {
    let here = structure.build(d, oracle)?.rank_with_tol(tol);
    let next = structure.build(d + 1, oracle)?.rank_with_tol(tol);
    Ok(here == next)
}

/// Reconstructs the support and coefficients of the function behind `oracle`.
///
/// With a rank bound the degree is fixed in advance. In auto mode the degrees
/// are scanned upwards; a degree is accepted once `rank P_d = rank P_{d+1}`,
/// its zero locus can be computed, and the reconstruction matches the samples.
pub fn run_pipeline<S: ZeroLocusSolver, P: PronyStructure<S> + ?Sized>(
    structure: &P,
    oracle: &mut SampleOracle<S>,
    mode: Mode,
    cfg: &PipelineConfig,
) -> Result<PronyOutcome<S>, PronyError> {
    check_dims(structure, oracle)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let finish =
        |candidate: Candidate<S>, d: usize, tag: ModeTag, oracle: &SampleOracle<S>| PronyOutcome {
            support: candidate.support,
            coefficients: candidate.coefficients,
            degree_used: d,
            mode: tag,
            exactness: candidate.exactness,
            evaluations: oracle.evaluations(),
            normal_set: candidate.normal_set,
        };
    match mode {
        Mode::RankBound(r) => {
            let d = rank_bound_degree(structure, r);
            let candidate = attempt(structure, oracle, d, cfg, &mut rng)?;
            let outcome = finish(candidate, d, ModeTag::RankBound, oracle);
            match verify_outcome(structure, oracle, &outcome, cfg, &mut rng) {
                None => Ok(outcome),
                Some(index) => Err(PronyError::VerificationFailed { degree: d, index }),
            }
        }
        Mode::Auto { max_d } => {
            let mut failed = None;
            for d in 0..=max_d {
                if !ranks_stable(structure, oracle, d, cfg.tol)? {
                    continue;
                }
                let candidate = match attempt(structure, oracle, d, cfg, &mut rng) {
                    Ok(c) => c,
                    Err(e) if e.is_recoverable() => continue,
                    Err(e) => return Err(e),
                };
                let outcome = finish(candidate, d, ModeTag::Stabilized, oracle);
                match verify_outcome(structure, oracle, &outcome, cfg, &mut rng) {
                    None => return Ok(outcome),
                    Some(index) => {
                        failed = Some(PronyError::VerificationFailed { degree: d, index })
                    }
                }
            }
            Err(failed.unwrap_or(PronyError::DegreeExhausted { max_d }))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Ok,
    ZlMismatch,
    VanishingViolation,
}

/// Outcome of checking both defining conditions at one degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Conditions {
    /// `ZL(ker P_d) = X`.
    pub zero_locus: bool,
    /// `I_{𝒥_d}(X) ⊆ ker P_d`.
    pub vanishing: bool,
}

impl Conditions {
    pub fn verdict(&self) -> Verdict {
        if !self.zero_locus {
            Verdict::ZlMismatch
        } else if !self.vanishing {
            Verdict::VanishingViolation
        } else {
            Verdict::Ok
        }
    }
}

fn same_points_tol<S: Scalar>(a: &PointSet<S>, b: &PointSet<S>, tol: f64) -> bool {
    if S::EXACT {
        return a.same_points(b);
    }
    let close = |p: &Vec<S>, q: &Vec<S>| p.iter().zip(q).all(|(x, y)| agrees(x, y, tol));
    a.len() == b.len() && a.iter().all(|p| b.iter().any(|q| close(p, q)))
}

/// Zero set of `ker P_d` plus the structure relations, `None` if it is not finite.
pub fn kernel_zero_set<S: ZeroLocusSolver, P: PronyStructure<S> + ?Sized>(
    structure: &P,
    oracle: &mut SampleOracle<S>,
    d: usize,
    cfg: &PipelineConfig,
) -> Result<Option<PointSet<S>>, PronyError> {
    let matrix = structure.build(d, oracle)?;
    let space = kernel_space(structure, d, &matrix, cfg.tol);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match quotient_model_with_tol(&space, structure.order(), cfg.tol) {
        Ok(model) => Ok(Some(S::zero_set(&model, cfg.tol, &mut rng)?)),
        Err(ZeroDimError::DegreeInsufficient | ZeroDimError::NotZeroDimensional) => {
            Ok(common_zeros(
                &space,
                structure.order(),
                ZERO_SET_EXTENSION,
                cfg.tol,
                &mut rng,
            )?)
        }
        Err(e) => Err(e.into()),
    }
}

/// Checks `ZL(ker P_d) = X` and `I_{𝒥_d}(X) ⊆ ker P_d` independently.
pub fn verify_prony_conditions<S: ZeroLocusSolver, P: PronyStructure<S> + ?Sized>(
    structure: &P,
    oracle: &mut SampleOracle<S>,
    known_support: &PointSet<S>,
    d: usize,
    cfg: &PipelineConfig,
) -> Result<Conditions, PronyError> {
    let zero_locus = match kernel_zero_set(structure, oracle, d, cfg) {
        Ok(Some(z)) => same_points_tol(&z, known_support, cfg.verify_tol.max(cfg.tol)),
        Ok(None) => false,
        Err(PronyError::IrrationalSupport) => false,
        Err(e) => return Err(e),
    };
    let matrix = structure.build(d, oracle)?;
    let ideal = vanishing_space(&structure.support(d), known_support);
    let scale = matrix.max_magnitude().max(1.0);
    let mut vanishing = true;
    for p in &ideal.basis {
        let v = structure.column_coordinates(d, p);
        let image = matrix.mul_vec(&v)?;
        let size = v.iter().map(Scalar::magnitude).fold(1.0, f64::max);
        if image
            .iter()
            .any(|x| !x.is_negligible(cfg.tol.sqrt() * scale * size))
        {
            vanishing = false;
            break;
        }
    }
    Ok(Conditions {
        zero_locus,
        vanishing,
    })
}

/// A structure given by one fixed matrix, independent of the samples.
///
/// Used to exhibit families that satisfy only one of the two conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedStructure<S> {
    pub matrix: Matrix<S>,
    pub columns: Vec<Exponent>,
    pub order: MonomialOrder,
}

impl<S: Scalar> FixedStructure<S> {
    pub fn new(matrix: Matrix<S>, columns: Vec<Exponent>) -> Result<Self, PronyError> {
        if matrix.cols() != columns.len() {
            return Err(PronyError::Structure(format!(
                "{} columns but {} labels",
                matrix.cols(),
                columns.len()
            )));
        }
        let n = columns.first().map_or(1, Exponent::len);
        Ok(FixedStructure {
            matrix,
            columns,
            order: MonomialOrder::degrevlex(n),
        })
    }
}

impl<S: Scalar> PronyStructure<S> for FixedStructure<S> {
    fn n(&self) -> usize {
        self.order.n()
    }

    fn order(&self) -> &MonomialOrder {
        &self.order
    }

    fn columns(&self, _d: usize) -> Vec<Exponent> {
        self.columns.clone()
    }

    fn build(&self, _d: usize, _oracle: &mut SampleOracle<S>) -> Result<Matrix<S>, PronyError> {
        Ok(self.matrix.clone())
    }

    fn required_indices(&self, _d: usize) -> BTreeSet<Exponent> {
        BTreeSet::new()
    }
}
