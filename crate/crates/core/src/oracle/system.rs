use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num::Zero;

use crate::normalform::{JetPoly, PolyVectorField};
use crate::real::Real;
use crate::ring::Q;

/// Polynomial over `Q` in all state variables (normal, then centre).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QPoly {
    pub terms: BTreeMap<Vec<u32>, Q>,
}

impl QPoly {
    pub fn add_term(&mut self, e: Vec<u32>, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Expand the jet coefficients of a [`JetPoly`] into full monomials.
    pub fn from_jetpoly(p: &JetPoly) -> QPoly {
        let mut out = QPoly::default();
        for (e, jet) in p.terms() {
            for (f, c) in jet.terms() {
                let mut g = e.clone();
                g.extend_from_slice(f);
                out.add_term(g, c.clone());
            }
        }
        out
    }

    pub fn mul(&self, o: &QPoly) -> QPoly {
        let mut out = QPoly::default();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn add(&self, o: &QPoly) -> QPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn deriv(&self, i: usize) -> QPoly {
        let mut out = QPoly::default();
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * Q::from_integer(e[i].into()));
            }
        }
        out
    }

    /// Append `extra` zero exponents (new trailing variables).
    pub fn widen(&self, extra: usize) -> QPoly {
        QPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = e.clone();
                    f.resize(e.len() + extra, 0);
                    (f, c.clone())
                })
                .collect(),
        }
    }

    /// Multiply by a single variable power.
    pub fn mul_var(&self, i: usize, p: u32) -> QPoly {
        QPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut f = e.clone();
                    f[i] += p;
                    (f, c.clone())
                })
                .collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> QPoly {
        let mut out = QPoly::default();
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }
}

/// Autonomous polynomial ODE with real coefficients.
#[derive(Clone, Debug)]
pub struct PolySystem<R> {
    pub dim: usize,
    pub comps: Vec<Vec<(Vec<u32>, R)>>,
}

impl<R: Real> PolySystem<R> {
    pub fn from_qpolys(dim: usize, comps: &[QPoly]) -> Self {
        PolySystem {
            dim,
            comps: comps
                .iter()
                .map(|p| {
                    p.terms
                        .iter()
                        .map(|(e, c)| (e.clone(), R::from_rational(c)))
                        .collect()
                })
                .collect(),
        }
    }

    /// Flatten a field over its normal and centre variables.
    pub fn from_field(x: &PolyVectorField) -> Self {
        PolySystem::from_qpolys(x.dim(), &field_qpolys(x))
    }

    pub fn eval(&self, s: &[R], out: &mut [R]) {
        for (o, comp) in out.iter_mut().zip(&self.comps) {
            let mut acc = R::zero();
            for (e, c) in comp {
                let mut m = *c;
                for (v, &p) in s.iter().zip(e) {
                    if p > 0 {
                        m *= v.powi(p as i32);
                    }
                }
                acc += m;
            }
            *o = acc;
        }
    }
}

pub fn field_qpolys(x: &PolyVectorField) -> Vec<QPoly> {
    x.comps().iter().map(QPoly::from_jetpoly).collect()
}
