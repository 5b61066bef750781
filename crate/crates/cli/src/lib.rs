//! Command-line front end for the `prony` library.
//!
//! Every subcommand reads JSON files and writes one JSON document, to standard
//! output or to `--output`. Exit code 0 means success, 1 an input problem
//! (unreadable or malformed files, missing samples, bad arguments) and 2 a
//! reconstruction that did not go through.

pub mod docs;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use prony::arith::{Approx, Rational};
use prony::poly::{minkowski_difference, minkowski_sum, FamilyKind, IndexFamily, OrderKind};
use prony::prony::{
    check_outcome, run_pipeline, verify_prony_conditions, Domain, FixedStructure, Layout, Mode,
    OracleError, PipelineConfig, PronyError, PronyOutcome, PronyStructure, SampleOracle, Verdict,
};
use prony::relative::{relative_zero_locus, AlgebraicSet, AlgebraicSetDoc, RelativeHankel};
use prony::structures::{
    projection_oracle, Chebyshev, Decoded, GeneratorSpec, Hankel, StructureError, Toeplitz,
};
use prony::vanish::{moeller_basis, vanishing_space, VanishError};
use prony::zerodim::ZeroLocusSolver;
use prony::{Exponent, MonomialOrder};

use crate::docs::{
    rational_samples_as_float, read_json, Field, MatrixDoc, PointsDoc, ResultDoc, SampleEntry,
    SamplesDoc,
};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Failed(_) => 2,
        }
    }
}

impl From<PronyError> for CliError {
    fn from(e: PronyError) -> Self {
        match e {
            PronyError::Oracle(_)
            | PronyError::DimensionMismatch { .. }
            | PronyError::Structure(_) => CliError::Input(e.to_string()),
            other => CliError::Failed(other.to_string()),
        }
    }
}

impl From<StructureError> for CliError {
    fn from(e: StructureError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "prony",
    version,
    about = "Sparse reconstruction from structured samples"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Recover support and coefficients from samples or a generator.
    Reconstruct(ReconstructArgs),
    /// Gröbner basis of the vanishing ideal of a point set.
    Moeller(MoellerArgs),
    /// Number of samples needed by the Hankel and Toeplitz matrices at one degree.
    Evalcount(EvalcountArgs),
    /// Univariate samples `k ↦ f(k·α)` along a direction.
    Project(ProjectArgs),
    /// Check a result against the samples and the two kernel conditions.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StructureKind {
    Hankel,
    Toeplitz,
    Chebyshev,
    Operator,
    Relative,
    RelativeSquare,
    /// A fixed matrix read from `--matrix`; only meaningful for `verify`.
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FieldMode {
    Exact,
    Float,
}

#[derive(Debug, Clone, Args)]
#[group(required = false, multiple = false)]
pub struct Input {
    /// Sample file.
    #[arg(long)]
    pub samples: Option<PathBuf>,
    /// Generator specification.
    #[arg(long)]
    pub generator: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct StructureArgs {
    #[arg(long, value_enum, default_value = "hankel")]
    pub structure: StructureKind,
    /// Row family `ℐ`.
    #[arg(long, default_value = "total")]
    pub rows: FamilyKind,
    /// Column family `𝒥`.
    #[arg(long, default_value = "total")]
    pub cols: FamilyKind,
    /// Rows at degree `d` are `ℐ_{d − lag}`.
    #[arg(long, default_value_t = 1)]
    pub row_lag: usize,
    #[arg(long, default_value = "degrevlex")]
    pub order: OrderKind,
    /// Algebraic set for the relative structures.
    #[arg(long)]
    pub variety: Option<PathBuf>,
    /// Matrix for the fixed structure.
    #[arg(long)]
    pub matrix: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct FieldArgs {
    #[arg(long, value_enum, default_value = "exact")]
    pub field: FieldMode,
    /// Rank tolerance; float mode only.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct ReconstructArgs {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub structure: StructureArgs,
    #[command(flatten)]
    pub field: FieldArgs,
    /// Upper bound on the number of terms.
    #[arg(long, conflicts_with = "auto")]
    pub rank_bound: Option<usize>,
    /// Scan degrees until the rank stabilizes.
    #[arg(long)]
    pub auto: bool,
    #[arg(long, default_value_t = 10)]
    pub max_d: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct MoellerArgs {
    #[arg(long)]
    pub points: PathBuf,
    #[arg(long, default_value = "degrevlex")]
    pub order: OrderKind,
    #[arg(long, default_value = "total")]
    pub family: FamilyKind,
    /// Degree of the family member used as `D`; defaults to the number of points.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct EvalcountArgs {
    #[arg(long, default_value = "total")]
    pub rows: FamilyKind,
    #[arg(long, default_value = "total")]
    pub cols: FamilyKind,
    #[arg(long)]
    pub d: usize,
    #[arg(long)]
    pub n: usize,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct ProjectArgs {
    #[command(flatten)]
    pub input: Input,
    /// Direction `α`, written `1,1` or `(1,1)`.
    #[arg(long)]
    pub direction: String,
    /// Number of nonnegative multiples `k` to emit; integer domains also get `−k`.
    #[arg(long, default_value_t = 16)]
    pub length: usize,
    #[arg(long, value_enum, default_value = "exact")]
    pub field: FieldMode,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub input: Input,
    #[command(flatten)]
    pub structure: StructureArgs,
    #[command(flatten)]
    pub field: FieldArgs,
    /// Result document to re-evaluate.
    #[arg(long)]
    pub result: Option<PathBuf>,
    /// Known support as a points document; defaults to the result's support.
    #[arg(long)]
    pub support: Option<PathBuf>,
    /// Degree at which the kernel conditions are checked; defaults to the result's.
    #[arg(long)]
    pub degree: Option<usize>,
    #[arg(long)]
    pub output: Option<PathBuf>,
}

/// Scalars the tool can run on.
pub trait CliScalar: ZeroLocusSolver + Serialize + DeserializeOwned {
    const FIELD: Field;

    fn generator_oracle(spec: &GeneratorSpec) -> Result<SampleOracle<Self>, StructureError>;

    fn load_samples(path: &Path) -> Result<SamplesDoc<Self>, CliError>;

    /// Maps recovered labels back to the original basis when the generator says how.
    fn decode(
        spec: &GeneratorSpec,
        outcome: &PronyOutcome<Self>,
    ) -> Result<(Option<Decoded>, Option<Vec<f64>>), CliError>;
}

impl CliScalar for Rational {
    const FIELD: Field = Field::Rational;

    fn generator_oracle(spec: &GeneratorSpec) -> Result<SampleOracle<Self>, StructureError> {
        spec.exact_oracle()
    }

    fn load_samples(path: &Path) -> Result<SamplesDoc<Self>, CliError> {
        if docs::samples_field(path)? == Field::Float {
            return Err(CliError::Input(format!(
                "{}: float samples need --field float",
                path.display()
            )));
        }
        read_json(path)
    }

    fn decode(
        spec: &GeneratorSpec,
        outcome: &PronyOutcome<Self>,
    ) -> Result<(Option<Decoded>, Option<Vec<f64>>), CliError> {
        Ok((
            spec.decode(&outcome.support)
                .map_err(|e| CliError::Failed(e.to_string()))?,
            None,
        ))
    }
}

impl CliScalar for Approx {
    const FIELD: Field = Field::Float;

    fn generator_oracle(spec: &GeneratorSpec) -> Result<SampleOracle<Self>, StructureError> {
        spec.float_oracle()
    }

    fn load_samples(path: &Path) -> Result<SamplesDoc<Self>, CliError> {
        match docs::samples_field(path)? {
            Field::Float => read_json(path),
            Field::Rational => rational_samples_as_float(read_json(path)?),
        }
    }

    fn decode(
        spec: &GeneratorSpec,
        outcome: &PronyOutcome<Self>,
    ) -> Result<(Option<Decoded>, Option<Vec<f64>>), CliError> {
        if !matches!(spec, GeneratorSpec::Gaussian { .. }) {
            return Ok((None, None));
        }
        let (centers, coeffs) = spec
            .decode_gaussian(&outcome.support, &outcome.coefficients)
            .map_err(|e| CliError::Failed(e.to_string()))?;
        Ok((Some(Decoded::Centers(centers)), Some(coeffs)))
    }
}

/// Parses the arguments, runs the command and writes its document.
///
/// Returns the exit code; diagnostics go to `stderr`.
pub fn run_from<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = write!(stderr, "{e}");
            return code;
        }
    };
    match execute(&cli.command) {
        Ok((doc, output)) => match emit(&doc, output.as_deref(), stdout) {
            Ok(()) => 0,
            Err(e) => {
                let _ = writeln!(stderr, "error: {e}");
                e.exit_code()
            }
        },
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit(
    doc: &serde_json::Value,
    output: Option<&Path>,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let mut text =
        serde_json::to_string_pretty(doc).map_err(|e| CliError::Failed(e.to_string()))?;
    text.push('\n');
    match output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display()))),
        None => stdout
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Input(e.to_string())),
    }
}

/// Runs one command and returns its JSON document and destination.
pub fn execute(command: &Command) -> Result<(serde_json::Value, Option<PathBuf>), CliError> {
    match command {
        Command::Reconstruct(a) => {
            let doc = match a.field.field {
                FieldMode::Exact => reconstruct::<Rational>(a)?,
                FieldMode::Float => reconstruct::<Approx>(a)?,
            };
            Ok((doc, a.output.clone()))
        }
        Command::Moeller(a) => Ok((moeller(a)?, a.output.clone())),
        Command::Evalcount(a) => Ok((evalcount(a), a.output.clone())),
        Command::Project(a) => {
            let doc = match a.field {
                FieldMode::Exact => project::<Rational>(a)?,
                FieldMode::Float => project::<Approx>(a)?,
            };
            Ok((doc, a.output.clone()))
        }
        Command::Verify(a) => {
            let doc = match a.field.field {
                FieldMode::Exact => verify::<Rational>(a)?,
                FieldMode::Float => verify::<Approx>(a)?,
            };
            Ok((doc, a.output.clone()))
        }
    }
}

fn to_value<T: Serialize>(x: &T) -> Result<serde_json::Value, CliError> {
    serde_json::to_value(x).map_err(|e| CliError::Failed(e.to_string()))
}

fn pipeline_config<S: CliScalar>(f: &FieldArgs) -> Result<PipelineConfig, CliError> {
    let cfg = match (f.field, f.tol) {
        (FieldMode::Exact, Some(_)) => {
            return Err(CliError::Input(
                "--tol is only allowed with --field float".into(),
            ))
        }
        (FieldMode::Exact, None) => PipelineConfig::exact(),
        (FieldMode::Float, Some(t)) if !(t.is_finite() && t >= 0.0) => {
            return Err(CliError::Input(format!("invalid tolerance {t}")))
        }
        (FieldMode::Float, Some(t)) => PipelineConfig::float(t),
        (FieldMode::Float, None) => PipelineConfig::for_scalar::<S>(),
    };
    Ok(cfg.with_seed(f.seed))
}

/// The oracle of `--samples` or `--generator`, and the generator when given.
fn load_oracle<S: CliScalar>(
    input: &Input,
) -> Result<(SampleOracle<S>, Option<GeneratorSpec>), CliError> {
    match (&input.samples, &input.generator) {
        (Some(path), None) => Ok((S::load_samples(path)?.into_oracle(), None)),
        (None, Some(path)) => {
            let spec: GeneratorSpec = read_json(path)?;
            Ok((S::generator_oracle(&spec)?, Some(spec)))
        }
        _ => Err(CliError::Input(
            "exactly one of --samples and --generator is required".into(),
        )),
    }
}

fn layout(a: &StructureArgs, n: usize) -> Layout {
    Layout::standard(IndexFamily::new(a.cols, n))
        .with_rows(IndexFamily::new(a.rows, n), a.row_lag)
        .with_order(MonomialOrder::new(a.order, n))
}

fn variety<S: CliScalar>(a: &StructureArgs, n: usize) -> Result<AlgebraicSet<S>, CliError> {
    let path = a
        .variety
        .as_ref()
        .ok_or_else(|| CliError::Input("relative structures need --variety".into()))?;
    let doc: AlgebraicSetDoc<S> = read_json(path)?;
    if doc.n != n {
        return Err(CliError::Input(format!(
            "variety has n = {}, samples have n = {n}",
            doc.n
        )));
    }
    doc.into_set().map_err(|e| CliError::Input(e.to_string()))
}

fn build_structure<S: CliScalar>(
    a: &StructureArgs,
    n: usize,
) -> Result<Box<dyn PronyStructure<S>>, CliError> {
    Ok(match a.structure {
        StructureKind::Hankel | StructureKind::Operator => Box::new(Hankel::new(layout(a, n))),
        StructureKind::Toeplitz => Box::new(Toeplitz::new(layout(a, n))),
        StructureKind::Chebyshev => {
            if n != 1 {
                return Err(CliError::Input(
                    "the Chebyshev structure is univariate".into(),
                ));
            }
            Box::new(Chebyshev {
                layout: layout(a, 1),
            })
        }
        StructureKind::Relative => Box::new(RelativeHankel::new(layout(a, n), variety(a, n)?)),
        StructureKind::RelativeSquare => {
            Box::new(RelativeHankel::square(layout(a, n), variety(a, n)?))
        }
        StructureKind::Fixed => {
            let path = a
                .matrix
                .as_ref()
                .ok_or_else(|| CliError::Input("the fixed structure needs --matrix".into()))?;
            let doc: MatrixDoc<S> = read_json(path)?;
            let matrix = prony::linalg::Matrix::from_rows(doc.rows)
                .map_err(|e| CliError::Input(e.to_string()))?;
            Box::new(FixedStructure::new(matrix, doc.columns)?)
        }
    })
}

fn reconstruct<S: CliScalar>(a: &ReconstructArgs) -> Result<serde_json::Value, CliError> {
    let cfg = pipeline_config::<S>(&a.field)?;
    let (mut oracle, spec) = load_oracle::<S>(&a.input)?;
    if a.structure.structure == StructureKind::Fixed {
        return Err(CliError::Input(
            "the fixed structure is only available for verify".into(),
        ));
    }
    if a.structure.structure == StructureKind::Operator
        && !matches!(spec, Some(GeneratorSpec::Operator { .. }) | None)
    {
        return Err(CliError::Input(
            "the operator structure needs an operator generator".into(),
        ));
    }
    let structure = build_structure::<S>(&a.structure, oracle.n())?;
    let mode = match (a.rank_bound, a.auto) {
        (Some(r), false) => Mode::RankBound(r),
        (None, true) => Mode::Auto { max_d: a.max_d },
        _ => {
            return Err(CliError::Input(
                "exactly one of --rank-bound and --auto is required".into(),
            ))
        }
    };
    let outcome = run_pipeline(structure.as_ref(), &mut oracle, mode, &cfg)?;
    let mut doc = ResultDoc::from_outcome(&outcome);
    if let Some(spec) = &spec {
        let (decoded, coeffs) = S::decode(spec, &outcome)?;
        doc.decoded = decoded;
        doc.decoded_coefficients = coeffs;
    }
    to_value(&doc)
}

fn moeller(a: &MoellerArgs) -> Result<serde_json::Value, CliError> {
    let doc: PointsDoc<Rational> = read_json(&a.points)?;
    let points = doc.into_points()?;
    let n = points.n();
    let order = MonomialOrder::new(a.order, n);
    let degree = a.degree.unwrap_or(points.len());
    let degree_set = IndexFamily::new(a.family, n).members(degree);
    let basis = moeller_basis(&points, &degree_set, &order).map_err(|e| match e {
        VanishError::NotDistinguished | VanishError::NotSurjective { .. } => {
            CliError::Failed(e.to_string())
        }
        other => CliError::Input(other.to_string()),
    })?;
    let (g, d, b, x) = (
        basis.groebner.len(),
        basis.degree_set.len(),
        basis.border.len(),
        points.len(),
    );

    // common zeros of the polynomials of degree set `D` vanishing on X
    let low = vanishing_space(&basis.degree_set, &points);
    let whole = AlgebraicSet::whole_space(n, order.clone());
    let zl_mismatch = match relative_zero_locus(&low.basis, &whole, 0.0, a.seed) {
        Ok(z) => !z.same_points(&points),
        Err(_) => true,
    };
    // generators whose leading term is not a proper multiple of another one
    let leads: Vec<&Exponent> = basis
        .groebner
        .iter()
        .filter_map(|g| g.leading_term(&order).map(|(e, _)| e))
        .collect();
    let minimal: Vec<_> = basis
        .groebner
        .iter()
        .zip(&leads)
        .filter(|(_, e)| !leads.iter().any(|f| f != *e && f.divides(e)))
        .map(|(g, _)| g.clone())
        .collect();
    Ok(json!({
        "generators": to_value(&basis.groebner)?,
        "minimal_generators": to_value(&minimal)?,
        "normal_set": basis.normal_set,
        "counts": {"generators": g, "degree_set": d, "border": b, "points": x},
        "identity_holds": g + x == d + b,
        "zl_mismatch": zl_mismatch,
    }))
}

/// `card(ℐ_d + 𝒥_d)` and `card(𝒥_d − ℐ_d)`.
pub fn eval_counts(rows: IndexFamily, cols: IndexFamily, d: usize) -> (usize, usize) {
    let (r, c) = (rows.members(d), cols.members(d));
    (
        minkowski_sum(&r, &c).len(),
        minkowski_difference(&r, &c).len(),
    )
}

fn evalcount(a: &EvalcountArgs) -> serde_json::Value {
    let (hankel, toeplitz) = eval_counts(
        IndexFamily::new(a.rows, a.n),
        IndexFamily::new(a.cols, a.n),
        a.d,
    );
    json!({
        "n": a.n,
        "d": a.d,
        "rows": a.rows.to_string(),
        "cols": a.cols.to_string(),
        "hankel": hankel,
        "toeplitz": toeplitz,
    })
}

/// Accepts `1,1` as well as `(1,1)`.
pub fn parse_direction(text: &str) -> Result<Exponent, CliError> {
    let t = text.trim();
    let wrapped = if t.starts_with('(') {
        t.to_string()
    } else {
        format!("({t})")
    };
    wrapped
        .parse()
        .map_err(|e: prony::poly::PolyError| CliError::Input(e.to_string()))
}

fn project<S: CliScalar>(a: &ProjectArgs) -> Result<serde_json::Value, CliError> {
    let (oracle, _) = load_oracle::<S>(&a.input)?;
    let domain = oracle.domain();
    let alpha = parse_direction(&a.direction)?;
    let mut projected = projection_oracle(oracle, &alpha)?;
    let len = a.length as i64;
    let ks: Vec<i64> = match domain {
        Domain::Nat => (0..len).collect(),
        Domain::Int => (1 - len..len).collect(),
    };
    let indices: Vec<Exponent> = ks.into_iter().map(|k| Exponent::from([k])).collect();
    let values = projected.fetch(&indices).map_err(|e| match e {
        OracleError::MissingSample(missing) => CliError::Input(format!(
            "samples missing at {}",
            missing
                .iter()
                .map(|m| alpha.scaled(m.coords()[0]).to_string())
                .collect::<Vec<_>>()
                .join(" ")
        )),
        other => CliError::Input(other.to_string()),
    })?;
    let doc = SamplesDoc {
        n: 1,
        domain,
        field: S::FIELD,
        samples: indices
            .into_iter()
            .zip(values)
            .map(|(index, value)| SampleEntry { index, value })
            .collect(),
    };
    to_value(&doc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyVerdict {
    Ok,
    ZlMismatch,
    VanishingViolation,
    VerificationFailed,
}

fn verify<S: CliScalar>(a: &VerifyArgs) -> Result<serde_json::Value, CliError> {
    let cfg = pipeline_config::<S>(&a.field)?;
    let result: Option<ResultDoc<S>> = a.result.as_deref().map(read_json).transpose()?;
    let (mut oracle, _) = match (&a.input.samples, &a.input.generator, a.structure.structure) {
        (None, None, StructureKind::Fixed) => {
            let doc: MatrixDoc<S> =
                read_json(a.structure.matrix.as_deref().ok_or_else(|| {
                    CliError::Input("the fixed structure needs --matrix".into())
                })?)?;
            let n = doc.columns.first().map_or(1, Exponent::len);
            (SampleOracle::from_table(n, Domain::Nat, []), None)
        }
        _ => load_oracle::<S>(&a.input)?,
    };
    let n = oracle.n();
    let structure = build_structure::<S>(&a.structure, n)?;
    let support = match (&a.support, &result) {
        (Some(path), _) => read_json::<PointsDoc<S>>(path)?.into_points()?,
        (None, Some(r)) => r.to_outcome(n)?.support,
        (None, None) => return Err(CliError::Input("verify needs --support or --result".into())),
    };
    let degree = match (a.degree, &result) {
        (Some(d), _) => d,
        (None, Some(r)) => r.degree_used,
        (None, None) => return Err(CliError::Input("verify needs --degree or --result".into())),
    };
    let conditions =
        verify_prony_conditions(structure.as_ref(), &mut oracle, &support, degree, &cfg)?;
    let mut verdict = match conditions.verdict() {
        Verdict::Ok => VerifyVerdict::Ok,
        Verdict::ZlMismatch => VerifyVerdict::ZlMismatch,
        Verdict::VanishingViolation => VerifyVerdict::VanishingViolation,
    };
    let mut mismatch = None;
    if let Some(r) = &result {
        let outcome = r.to_outcome(n)?;
        mismatch = check_outcome(structure.as_ref(), &mut oracle, &outcome, &cfg);
        if mismatch.is_some() && verdict == VerifyVerdict::Ok {
            verdict = VerifyVerdict::VerificationFailed;
        }
    }
    let mut doc = json!({
        "verdict": verdict,
        "degree": degree,
        "zero_locus": conditions.zero_locus,
        "vanishing": conditions.vanishing,
    });
    if let Some(index) = mismatch {
        doc["mismatch_index"] = to_value(&index)?;
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hankel_and_toeplitz_counts() {
        assert_eq!(
            eval_counts(IndexFamily::total(2), IndexFamily::total(2), 2),
            (15, 19)
        );
        for d in 1..=3 {
            let (h, t) = eval_counts(IndexFamily::max(2), IndexFamily::max(2), d);
            assert_eq!(h, t);
        }
    }

    #[test]
    fn direction_syntax() {
        assert_eq!(parse_direction("1,1").unwrap(), Exponent::from([1, 1]));
        assert_eq!(parse_direction(" (2, 0) ").unwrap(), Exponent::from([2, 0]));
        assert!(parse_direction("a,b").is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(CliError::Input(String::new()).exit_code(), 1);
        let e: CliError = PronyError::DegreeExhausted { max_d: 3 }.into();
        assert_eq!(e.exit_code(), 2);
        let e: CliError = PronyError::Oracle(OracleError::MissingSample(vec![])).into();
        assert_eq!(e.exit_code(), 1);
    }
}
