//! JSON file format for vector fields. All numbers are exact rational strings.

use std::collections::BTreeMap;

use num::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jets::{JetError, UJet};
use crate::normalform::{unit_vector, NormalFormError, PolyVectorField};
use crate::ring::{parse_rational, rational_to_string, ParseError, Q};

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("JSON error at line {line}, column {column}: {msg}")]
    Json {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("term {term}: {msg}")]
    Term { term: usize, msg: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Field(#[from] NormalFormError),
}

impl From<serde_json::Error> for SpecError {
    fn from(e: serde_json::Error) -> Self {
        SpecError::Json {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Eigenvalues {
    pub alpha: String,
    /// absent for planar fields
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermSpec {
    pub component: String,
    pub exponents: Vec<u32>,
    /// centre multi-index such as `"(1,0)"` → rational string
    pub coeff: BTreeMap<String, String>,
}

/// On-disk vector field. The diagonal linear part `x ∂x - α y ∂y - β z ∂z`
/// comes from `eigenvalues`; `terms` are added on top of it (so a linear
/// diagonal term there carries the `u`-dependence of an eigenvalue).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VectorFieldSpec {
    pub eigenvalues: Eigenvalues,
    pub centre_dim: usize,
    pub jet_order: u32,
    pub degree: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normal_dim: Option<usize>,
    #[serde(default)]
    pub terms: Vec<TermSpec>,
}

fn rational(s: &str, what: &str) -> Result<Q, SpecError> {
    parse_rational(s).map_err(|e: ParseError| SpecError::Invalid(format!("{what}: {e}")))
}

impl VectorFieldSpec {
    pub fn from_json(s: &str) -> Result<Self, SpecError> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn to_field(&self) -> Result<PolyVectorField, SpecError> {
        let n = self.normal_dim.unwrap_or(3);
        if n != 2 && n != 3 {
            return Err(SpecError::Invalid(format!(
                "normal_dim must be 2 or 3, got {n}"
            )));
        }
        let alpha = rational(&self.eigenvalues.alpha, "alpha")?;
        let beta = match (&self.eigenvalues.beta, n) {
            (Some(b), 3) => rational(b, "beta")?,
            (None, 3) => {
                return Err(SpecError::Invalid(
                    "beta is required when normal_dim is 3".into(),
                ))
            }
            _ => alpha.clone(),
        };
        let (k, j) = (self.centre_dim, self.jet_order);
        let mut f = PolyVectorField::diagonal(n, k, j, self.degree, &alpha, &beta);
        for (idx, t) in self.terms.iter().enumerate() {
            let err = |msg: String| SpecError::Term { term: idx, msg };
            let comp = f
                .component_index(&t.component)
                .ok_or_else(|| err(format!("unknown component {:?}", t.component)))?;
            if t.exponents.len() != n {
                return Err(err(format!(
                    "expected {n} exponents, got {}",
                    t.exponents.len()
                )));
            }
            let deg: u32 = t.exponents.iter().sum();
            if deg > self.degree + 1 {
                return Err(err(format!(
                    "normal degree {deg} exceeds degree + 1 = {}",
                    self.degree + 1
                )));
            }
            let c =
                UJet::from_json_map(k, j, &t.coeff).map_err(|e: JetError| err(e.to_string()))?;
            f.add_term(comp, t.exponents.clone(), c);
        }
        f.validate()?;
        Ok(f)
    }

    pub fn from_field(f: &PolyVectorField) -> Self {
        let n = f.normal_dim();
        let alpha = -f.lambda(1).constant_term();
        let beta = if n == 3 {
            Some(rational_to_string(&-f.lambda(2).constant_term()))
        } else {
            None
        };
        let terms = term_specs(f);
        VectorFieldSpec {
            eigenvalues: Eigenvalues {
                alpha: rational_to_string(&alpha),
                beta,
            },
            centre_dim: f.centre_dim(),
            jet_order: f.jet_order(),
            degree: f.degree(),
            normal_dim: if n == 3 { None } else { Some(n) },
            terms,
        }
    }
}

/// Terms of `f` in file form, leaving out the constant part of the diagonal.
pub fn term_specs(f: &PolyVectorField) -> Vec<TermSpec> {
    let n = f.normal_dim();
    let mut terms = Vec::new();
    for (i, e, c) in f.all_terms() {
        let mut c = c.clone();
        if i < n && *e == unit_vector(n, i) {
            let c0 = c.constant_term();
            c = c.sub(&c.like_constant(c0));
        }
        if c.is_zero() {
            continue;
        }
        terms.push(TermSpec {
            component: f.component_name(i),
            exponents: e.clone(),
            coeff: c.to_json_map(),
        });
    }
    terms
}

/// Comma-separated exact centre point, e.g. `"0,1/3"`; empty means the origin.
pub fn parse_point(s: &str, k: usize) -> Result<Vec<Q>, SpecError> {
    if s.trim().is_empty() {
        return Ok(vec![Q::zero(); k]);
    }
    let v = s
        .split(',')
        .map(|p| rational(p.trim(), "u0"))
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != k {
        return Err(SpecError::Invalid(format!(
            "u0 has {} entries, expected {k}",
            v.len()
        )));
    }
    Ok(v)
}
