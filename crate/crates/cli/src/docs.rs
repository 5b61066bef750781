//! JSON documents read and written by the command-line tool.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use prony::arith::{Approx, Rational, Scalar};
use prony::prony::{Domain, ModeTag, PronyOutcome, SampleOracle};
use prony::structures::Decoded;
use prony::vanish::PointSet;
use prony::zerodim::Exactness;
use prony::Exponent;

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Rational,
    Float,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleEntry<S> {
    pub index: Exponent,
    pub value: S,
}

/// `{"n":1,"domain":"nat","field":"rational","samples":[{"index":[0],"value":"2"}]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SamplesDoc<S> {
    pub n: usize,
    pub domain: Domain,
    pub field: Field,
    pub samples: Vec<SampleEntry<S>>,
}

impl<S: Scalar> SamplesDoc<S> {
    pub fn into_oracle(self) -> SampleOracle<S> {
        SampleOracle::from_table(
            self.n,
            self.domain,
            self.samples.into_iter().map(|e| (e.index, e.value)),
        )
    }
}

/// `{"support":[["2"],["3"]],"coefficients":["1","1"],"degree_used":2,"mode":"rank_bound","exact":true,"evaluations":4}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultDoc<S> {
    pub support: Vec<Vec<S>>,
    pub coefficients: Vec<S>,
    pub degree_used: usize,
    pub mode: ModeTag,
    pub exact: bool,
    pub evaluations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoded: Option<Decoded>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub decoded_coefficients: Option<Vec<f64>>,
}

impl<S: Scalar> ResultDoc<S> {
    pub fn from_outcome(outcome: &PronyOutcome<S>) -> Self {
        ResultDoc {
            support: outcome.support.points().to_vec(),
            coefficients: outcome.coefficients.clone(),
            degree_used: outcome.degree_used,
            mode: outcome.mode,
            exact: outcome.exactness == Exactness::Exact,
            evaluations: outcome.evaluations,
            decoded: None,
            decoded_coefficients: None,
        }
    }

    pub fn to_outcome(&self, n: usize) -> Result<PronyOutcome<S>, CliError> {
        if self.support.len() != self.coefficients.len() {
            return Err(CliError::Input(
                "support and coefficients differ in length".into(),
            ));
        }
        let support =
            PointSet::new(n, self.support.clone()).map_err(|e| CliError::Input(e.to_string()))?;
        Ok(PronyOutcome {
            support,
            coefficients: self.coefficients.clone(),
            degree_used: self.degree_used,
            mode: self.mode,
            exactness: if self.exact {
                Exactness::Exact
            } else {
                Exactness::Approximate
            },
            evaluations: self.evaluations,
            normal_set: Vec::new(),
        })
    }
}

/// `{"n":2,"points":[["0","0"],["1","0"]]}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointsDoc<S> {
    pub n: usize,
    pub points: Vec<Vec<S>>,
}

impl<S: Scalar> PointsDoc<S> {
    pub fn into_points(self) -> Result<PointSet<S>, CliError> {
        PointSet::new(self.n, self.points).map_err(|e| CliError::Input(e.to_string()))
    }
}

/// A fixed matrix with its column labels, for structures that ignore the samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDoc<S> {
    pub columns: Vec<Exponent>,
    pub rows: Vec<Vec<S>>,
}

pub fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    parse_json(&read_text(path)?, path)
}

pub fn parse_json<T: DeserializeOwned>(text: &str, path: &Path) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

/// The `field` of a samples document.
pub fn samples_field(path: &Path) -> Result<Field, CliError> {
    #[derive(Deserialize)]
    struct Probe {
        field: Field,
    }
    Ok(read_json::<Probe>(path)?.field)
}

pub fn rational_samples_as_float(
    doc: SamplesDoc<Rational>,
) -> Result<SamplesDoc<Approx>, CliError> {
    let samples = doc
        .samples
        .into_iter()
        .map(|e| {
            Approx::new(e.value.to_f64())
                .map(|value| SampleEntry {
                    index: e.index,
                    value,
                })
                .map_err(|err| CliError::Input(err.to_string()))
        })
        .collect::<Result<_, _>>()?;
    Ok(SamplesDoc {
        n: doc.n,
        domain: doc.domain,
        field: Field::Float,
        samples,
    })
}
