use std::collections::BTreeMap;

use num::{Integer, Zero};

use super::series::Output;
use super::DulacError;
use crate::jets::UJet;
use crate::normalform::{normal_degree, only_resonant_terms, unit_vector, PolyVectorField};
use crate::resonance::{Case, EigenData};
use crate::ring::Q;

/// `c · Uy^i · Uz^j` on the right-hand side of one equation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WTerm {
    pub i: u32,
    pub j: u32,
    pub c: Q,
}

/// Normal-form coefficients frozen at a base point `u0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NFCoeffs {
    pub eig: EigenData,
    pub centre_dim: usize,
    pub u0: Vec<Q>,
    /// `α(u0) - α0`, the value of the symbol `a` on this orbit
    pub a0: Q,
    /// `β(u0) - β0`, the value of `b`
    pub b0: Q,
    pub y: Vec<WTerm>,
    pub z: Vec<WTerm>,
    pub u: Vec<Vec<WTerm>>,
}

fn div_exact(n: i64, d: i64) -> Option<i64> {
    if d != 0 && n.mod_floor(&d) == 0 {
        Some(n / d)
    } else {
        None
    }
}

/// Index pair `(n1, n2)` labelling the coefficient of `Uy0^i Uz0^j`.
pub fn label_for(eig: &EigenData, out: Output, i: u32, j: u32) -> Option<(i64, i64)> {
    let (i, j) = (i as i64, j as i64);
    match eig.case {
        Case::Case1 { q1, q2, .. } => {
            let (q1, q2) = (q1 as i64, q2 as i64);
            let (ei, ej) = match out {
                Output::Y => (i - 1, j),
                Output::Z => (i, j - 1),
                Output::U(_) => (i, j),
            };
            if ei < 0 || ej < 0 {
                return None;
            }
            Some((div_exact(ei, q1)?, div_exact(ej, q2)?))
        }
        Case::Case2 { m, q, .. } => {
            let (m, q) = (m as i64, q as i64);
            let (n1, w) = match out {
                Output::Y => (i - 1, j),
                Output::Z => (i, j - 1),
                Output::U(_) => (i, j),
            };
            // w = q n2 - m n1
            let n2 = div_exact(w + m * n1, q)?;
            Some((n1, n2))
        }
    }
}

/// Inverse of [`label_for`].
pub fn monomial_for(eig: &EigenData, out: Output, n1: i64, n2: i64) -> Option<(u32, u32)> {
    let (i, j) = match eig.case {
        Case::Case1 { q1, q2, .. } => {
            let (a, b) = (q1 as i64 * n1, q2 as i64 * n2);
            match out {
                Output::Y => (1 + a, b),
                Output::Z => (a, 1 + b),
                Output::U(_) => (a, b),
            }
        }
        Case::Case2 { m, q, .. } => {
            let w = q as i64 * n2 - m as i64 * n1;
            match out {
                Output::Y => (1 + n1, w),
                Output::Z => (n1, 1 + w),
                Output::U(_) => (n1, w),
            }
        }
    };
    if i < 0 || j < 0 {
        None
    } else {
        Some((i as u32, j as u32))
    }
}

impl NFCoeffs {
    /// Read the coefficient tables off a normal form at the base point `u0`.
    pub fn from_field(x: &PolyVectorField, u0: &[Q]) -> Result<NFCoeffs, DulacError> {
        if x.normal_dim() != 3 {
            return Err(DulacError::Unsupported(
                "the Dulac series needs three normal variables (x, y, z)".into(),
            ));
        }
        if u0.len() != x.centre_dim() {
            return Err(DulacError::Unsupported(format!(
                "base point has {} coordinates, field has {} centre variables",
                u0.len(),
                x.centre_dim()
            )));
        }
        let eig = x
            .eigen()
            .map_err(|e| DulacError::NotInNormalForm(e.to_string()))?;
        let x_comp = x.comp(0);
        let unit = UJet::one(x.centre_dim(), x.jet_order());
        if x_comp.len() != 1 || x_comp.coeff(&unit_vector(3, 0)) != unit {
            return Err(DulacError::NotInNormalForm(
                "x-component must be exactly x; run normalize first".into(),
            ));
        }
        if !only_resonant_terms(x) {
            return Err(DulacError::NotInNormalForm(
                "non-resonant terms present; run normalize first".into(),
            ));
        }
        let a0 = -x.lambda(1).eval_exact(u0) - &eig.alpha0;
        let b0 = -x.lambda(2).eval_exact(u0) - &eig.beta0;
        let collect = |comp: usize| -> Vec<WTerm> {
            x.comp(comp)
                .terms()
                .filter(|(e, _)| normal_degree(e) >= 2)
                .filter_map(|(e, jet)| {
                    let c = jet.eval_exact(u0);
                    (!c.is_zero()).then(|| WTerm {
                        i: e[1],
                        j: e[2],
                        c,
                    })
                })
                .collect()
        };
        let y = collect(1);
        let z = collect(2);
        let u = (0..x.centre_dim()).map(|k| collect(3 + k)).collect();
        Ok(NFCoeffs {
            eig,
            centre_dim: x.centre_dim(),
            u0: u0.to_vec(),
            a0,
            b0,
            y,
            z,
            u,
        })
    }

    /// Build from index-labelled tables (`α_{n1,n2}`, `β_{n1,n2}`, `δ^i_{n1,n2}`).
    pub fn from_tables(
        eig: EigenData,
        alpha: &BTreeMap<(i64, i64), Q>,
        beta: &BTreeMap<(i64, i64), Q>,
        delta: &[BTreeMap<(i64, i64), Q>],
    ) -> Result<NFCoeffs, DulacError> {
        let conv = |out: Output, t: &BTreeMap<(i64, i64), Q>| -> Result<Vec<WTerm>, DulacError> {
            let mut v = Vec::new();
            for (&(n1, n2), c) in t {
                let (i, j) = monomial_for(&eig, out, n1, n2).ok_or_else(|| {
                    DulacError::Unsupported(format!("index ({n1}, {n2}) outside its family"))
                })?;
                if i + j < 2 {
                    return Err(DulacError::Unsupported(format!(
                        "index ({n1}, {n2}) gives a linear term"
                    )));
                }
                if !c.is_zero() {
                    v.push(WTerm { i, j, c: c.clone() });
                }
            }
            Ok(v)
        };
        let y = conv(Output::Y, alpha)?;
        let z = conv(Output::Z, beta)?;
        let u = delta
            .iter()
            .enumerate()
            .map(|(k, t)| conv(Output::U(k), t))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(NFCoeffs {
            eig,
            centre_dim: delta.len(),
            u0: vec![Q::zero(); delta.len()],
            a0: Q::zero(),
            b0: Q::zero(),
            y,
            z,
            u,
        })
    }

    pub fn terms(&self, out: Output) -> &[WTerm] {
        match out {
            Output::Y => &self.y,
            Output::Z => &self.z,
            Output::U(k) => &self.u[k],
        }
    }

    /// Index-labelled view of one table.
    pub fn table(&self, out: Output) -> BTreeMap<(i64, i64), Q> {
        self.terms(out)
            .iter()
            .filter_map(|t| label_for(&self.eig, out, t.i, t.j).map(|l| (l, t.c.clone())))
            .collect()
    }

    /// Largest total power of `(Uy, Uz)` among the nonlinear terms.
    pub fn max_term_degree(&self) -> u32 {
        self.y
            .iter()
            .chain(&self.z)
            .chain(self.u.iter().flatten())
            .map(|t| t.i + t.j)
            .max()
            .unwrap_or(0)
    }

    pub fn has_constant_eigenvalues(&self) -> bool {
        self.a0.is_zero() && self.b0.is_zero()
    }
}
