//! JSON forms of exp-polynomials and Ω-polynomials.
//!
//! Keys are integer tuples and coefficients are rational-function strings
//! in the `Display` format, e.g. `{"terms":[{"key":[0,1,-2],"coeff":"(1)/(a - 2*b)"}]}`.

use serde::{Deserialize, Serialize};

use super::exppoly::{ExpKey, ExpPoly};
use super::omega::OmegaPoly;
use super::parse::{parse_ratfunc, ParseError};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ExpTermJson {
    pub key: (u32, i32, i32),
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct ExpPolyJson {
    pub terms: Vec<ExpTermJson>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct OmegaTermJson {
    pub powers: [u32; 5],
    pub coeff: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
pub struct OmegaPolyJson {
    pub terms: Vec<OmegaTermJson>,
}

impl From<&ExpPoly> for ExpPolyJson {
    fn from(p: &ExpPoly) -> Self {
        ExpPolyJson {
            terms: p
                .terms()
                .map(|(k, c)| ExpTermJson {
                    key: (k.j, k.n1, k.n2),
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&ExpPolyJson> for ExpPoly {
    type Error = ParseError;
    fn try_from(j: &ExpPolyJson) -> Result<Self, ParseError> {
        let mut p = ExpPoly::zero();
        for t in &j.terms {
            p.add_term(
                ExpKey::new(t.key.0, t.key.1, t.key.2),
                parse_ratfunc(&t.coeff)?,
            );
        }
        Ok(p)
    }
}

impl From<&OmegaPoly> for OmegaPolyJson {
    fn from(p: &OmegaPoly) -> Self {
        OmegaPolyJson {
            terms: p
                .terms()
                .map(|(e, c)| OmegaTermJson {
                    powers: *e,
                    coeff: c.to_string(),
                })
                .collect(),
        }
    }
}

impl TryFrom<&OmegaPolyJson> for OmegaPoly {
    type Error = ParseError;
    fn try_from(j: &OmegaPolyJson) -> Result<Self, ParseError> {
        let mut p = OmegaPoly::zero();
        for t in &j.terms {
            p.add_term(t.powers, parse_ratfunc(&t.coeff)?);
        }
        Ok(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::omega::omega_basis;

    #[test]
    fn exppoly_json_round_trip() {
        let p = ExpPoly::omega(1, -2)
            .mul(&ExpPoly::t())
            .add(&ExpPoly::exp(0, 3));
        let j = ExpPolyJson::from(&p);
        let s = serde_json::to_string(&j).unwrap();
        let back: ExpPolyJson = serde_json::from_str(&s).unwrap();
        assert_eq!(ExpPoly::try_from(&back).unwrap(), p);
        let w = omega_basis(&p);
        let wj = OmegaPolyJson::from(&w);
        assert_eq!(OmegaPoly::try_from(&wj).unwrap(), w);
    }
}
