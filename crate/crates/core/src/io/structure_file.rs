//! The `jacobi/1` JSON format for a pair `(Λ, R)`.
//!
//! ```json
//! {"format": "jacobi/1", "base": ["x", "y"],
//!  "lambda": [{"coeff": "x", "i": 0, "j": 1}],
//!  "r": [{"coeff": "1", "i": 1}]}
//! ```
//!
//! `lambda` entries are coefficients of `p_i p_j` and `r` entries of `p_i`,
//! indices counting base coordinates. An entry with `i > j` is stored as
//! `−coeff` at `(j, i)`.

use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::expr::{parse_polynomial, ExprError};
use crate::graded::{make_chart, Chart, CoordinateKind, CoordinateSpec, GradedPolynomial};
use crate::jacobi::JacobiStructure;
use crate::structures::MultivectorAlgebra;

pub const FORMAT: &str = "jacobi/1";

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("schema error: {0}")]
    Schema(String),
    #[error("index {index} out of range for {dim} base coordinates")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("in coefficient `{coeff}`: {source}")]
    Expression {
        coeff: String,
        #[source]
        source: ExprError,
    },
    #[error(transparent)]
    Algebra(#[from] crate::error::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LambdaTerm {
    pub coeff: String,
    pub i: usize,
    pub j: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RTerm {
    pub coeff: String,
    pub i: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StructureFile {
    pub format: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub base: Vec<String>,
    #[serde(default)]
    pub lambda: Vec<LambdaTerm>,
    #[serde(default)]
    pub r: Vec<RTerm>,
}

fn base_chart(names: &[String]) -> Result<Arc<Chart>, LoadError> {
    let specs: Vec<CoordinateSpec> = names
        .iter()
        .map(|n| CoordinateSpec::new(n.as_str(), 0, CoordinateKind::Base))
        .collect();
    make_chart(&specs).map_err(|e| LoadError::Schema(e.to_string()))
}

fn coefficient(text: &str, base: &Arc<Chart>, target: &Arc<Chart>) -> Result<GradedPolynomial, LoadError> {
    let p = parse_polynomial(text, base).map_err(|source| LoadError::Expression {
        coeff: text.to_string(),
        source,
    })?;
    if p.terms().any(|(m, _)| m.exp_power() != 0) {
        return Err(LoadError::Schema(format!("coefficient `{text}` uses E1")));
    }
    Ok(p.transport(target)?)
}

impl StructureFile {
    pub fn parse(text: &str) -> Result<Self, LoadError> {
        let file: StructureFile = serde_json::from_str(text).map_err(|e| LoadError::Schema(e.to_string()))?;
        if file.format != FORMAT {
            return Err(LoadError::Schema(format!(
                "format `{}` is not `{FORMAT}`",
                file.format
            )));
        }
        if file.base.is_empty() {
            return Err(LoadError::Schema("base must name at least one coordinate".into()));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    pub fn to_structure(&self) -> Result<JacobiStructure, LoadError> {
        let base = base_chart(&self.base)?;
        let names: Vec<&str> = self.base.iter().map(String::as_str).collect();
        let algebra = MultivectorAlgebra::cotangent(&names).map_err(|e| LoadError::Schema(e.to_string()))?;
        let chart = algebra.chart().clone();
        let momenta: Vec<GradedPolynomial> = algebra
            .momentum_names()
            .iter()
            .map(|p| GradedPolynomial::generator(&chart, p))
            .collect::<Result<_, _>>()?;
        let dim = momenta.len();
        let check = |index: usize| {
            if index < dim {
                Ok(())
            } else {
                Err(LoadError::IndexOutOfRange { index, dim })
            }
        };

        let mut lambda = GradedPolynomial::zero(&chart);
        for t in &self.lambda {
            check(t.i)?;
            check(t.j)?;
            if t.i == t.j {
                return Err(LoadError::Schema(format!("lambda entry with i = j = {}", t.i)));
            }
            let c = coefficient(&t.coeff, &base, &chart)?;
            let (i, j, c) = if t.i < t.j { (t.i, t.j, c) } else { (t.j, t.i, -c) };
            lambda = &lambda + &(&c * &(&momenta[i] * &momenta[j]));
        }
        let mut r = GradedPolynomial::zero(&chart);
        for t in &self.r {
            check(t.i)?;
            r = &r + &(&coefficient(&t.coeff, &base, &chart)? * &momenta[t.i]);
        }
        Ok(JacobiStructure::new(algebra, &lambda, &r)?)
    }

    /// Normalised file form of a structure: `i < j`, one entry per index.
    pub fn from_structure(j: &JacobiStructure, name: Option<String>) -> Result<Self, LoadError> {
        let algebra = j.algebra();
        let chart = algebra.chart();
        let base_names: Vec<String> = algebra.base_names().iter().map(|s| s.to_string()).collect();
        let base = base_chart(&base_names)?;
        let momenta: Vec<usize> = algebra
            .momentum_names()
            .iter()
            .map(|p| chart.require(p))
            .collect::<Result<_, _>>()?;
        let printed = |p: GradedPolynomial| -> Result<Option<String>, LoadError> {
            if p.is_zero() {
                Ok(None)
            } else {
                Ok(Some(p.transport(&base)?.to_string()))
            }
        };
        let mut lambda = Vec::new();
        let mut r = Vec::new();
        for (i, &pi) in momenta.iter().enumerate() {
            let first = j.lambda().derivative_at(pi);
            for (k, &pk) in momenta.iter().enumerate().skip(i + 1) {
                if let Some(coeff) = printed(first.derivative_at(pk))? {
                    lambda.push(LambdaTerm { coeff, i, j: k });
                }
            }
            if let Some(coeff) = printed(j.r().derivative_at(pi))? {
                r.push(RTerm { coeff, i });
            }
        }
        Ok(StructureFile {
            format: FORMAT.to_string(),
            name,
            base: base_names,
            lambda,
            r,
        })
    }
}

pub fn parse_structure(text: &str) -> Result<JacobiStructure, LoadError> {
    StructureFile::parse(text)?.to_structure()
}

pub fn load_structure(path: impl AsRef<Path>) -> Result<JacobiStructure, LoadError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| LoadError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_structure(&text)
}
