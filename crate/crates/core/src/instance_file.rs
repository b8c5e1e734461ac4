//! JSON instance format. Rationals are strings (`"3"`, `"-2/5"`, `"1.01"`)
//! so no value ever passes through binary floating point.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decide::{Instance, InstanceError, Mode};
use crate::lp::{LpError, Polytope};
use crate::matrix::{RatMatrix, RatVector};
use crate::rational::{parse_rational, ParseRationalError, Rational};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    #[serde(rename = "A")]
    pub a: Vec<Vec<String>>,
    #[serde(rename = "a", default, skip_serializing_if = "Option::is_none")]
    pub affine: Option<Vec<String>>,
    #[serde(rename = "B")]
    pub b: Vec<Vec<String>>,
    pub c: Vec<String>,
    #[serde(default = "default_mode")]
    pub mode: Mode,
}

fn default_mode() -> Mode {
    Mode::Continuous
}

#[derive(Debug, Error)]
pub enum InstanceFileError {
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{field}: {source}")]
    Rational { field: String, source: ParseRationalError },
    #[error("{0} has rows of different lengths")]
    Ragged(&'static str),
    #[error(transparent)]
    Polytope(#[from] LpError),
    #[error(transparent)]
    Instance(#[from] InstanceError),
}

fn parse_vec(field: &str, xs: &[String]) -> Result<Vec<Rational>, InstanceFileError> {
    xs.iter()
        .enumerate()
        .map(|(i, s)| parse_rational(s).map_err(|source| InstanceFileError::Rational { field: format!("{field}[{i}]"), source }))
        .collect()
}

fn parse_matrix(field: &'static str, rows: &[Vec<String>]) -> Result<RatMatrix, InstanceFileError> {
    let parsed = rows.iter().enumerate().map(|(i, r)| parse_vec(&format!("{field}[{i}]"), r)).collect::<Result<Vec<_>, _>>()?;
    RatMatrix::from_rows(parsed).map_err(|_| InstanceFileError::Ragged(field))
}

impl InstanceFile {
    pub fn from_json(text: &str) -> Result<Self, InstanceFileError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_instance(&self) -> Result<Instance, InstanceFileError> {
        let a = parse_matrix("A", &self.a)?;
        let b = parse_matrix("B", &self.b)?;
        let c = RatVector(parse_vec("c", &self.c)?);
        let p = Polytope::new(b, c)?;
        Ok(match &self.affine {
            Some(v) => Instance::with_affine(a, &RatVector(parse_vec("a", v)?), p, self.mode)?,
            None => Instance::new(a, p, self.mode)?,
        })
    }

    /// The file form of an instance, with rationals written as `p/q`.
    pub fn from_instance(inst: &Instance) -> Self {
        let m = |x: &RatMatrix| x.to_rows().iter().map(|r| r.iter().map(ToString::to_string).collect()).collect();
        InstanceFile {
            a: m(&inst.a),
            affine: None,
            b: m(&inst.polytope.b),
            c: inst.polytope.c.iter().map(ToString::to_string).collect(),
            mode: inst.mode,
        }
    }
}
