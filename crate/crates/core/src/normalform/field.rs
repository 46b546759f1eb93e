use std::fmt;

use num::One;

use super::jetpoly::{normal_degree, JetPoly};
use super::NormalFormError;
use crate::jets::UJet;
use crate::real::Real;
use crate::resonance::{classify, EigenData};
use crate::ring::{rational_to_string, Q};

/// Polynomial vector field in normal variables `x, y[, z]` and centre
/// variables `u1..uk`, with jet coefficients.
///
/// Components are stored in the order `x, y, [z,] u1, ..., uk`; each keeps
/// monomials of normal degree at most `degree + 1`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyVectorField {
    n: usize,
    k: usize,
    jet_order: u32,
    degree: u32,
    comps: Vec<JetPoly>,
}

pub fn unit_vector(n: usize, i: usize) -> Vec<u32> {
    let mut e = vec![0; n];
    e[i] = 1;
    e
}

impl PolyVectorField {
    pub fn zero(n: usize, k: usize, jet_order: u32, degree: u32) -> Self {
        assert!(n == 2 || n == 3, "normal dimension must be 2 or 3");
        PolyVectorField {
            n,
            k,
            jet_order,
            degree,
            comps: (0..n + k)
                .map(|_| JetPoly::zero(n, k, jet_order, degree + 1))
                .collect(),
        }
    }

    pub fn like_zero(&self) -> Self {
        PolyVectorField::zero(self.n, self.k, self.jet_order, self.degree)
    }

    /// `x ∂x - α0 y ∂y [- β0 z ∂z]` with constant coefficients.
    pub fn diagonal(
        n: usize,
        k: usize,
        jet_order: u32,
        degree: u32,
        alpha0: &Q,
        beta0: &Q,
    ) -> Self {
        let mut f = PolyVectorField::zero(n, k, jet_order, degree);
        let lam = [Q::one(), -alpha0.clone(), -beta0.clone()];
        for (i, l) in lam.iter().enumerate().take(n) {
            f.add_term(
                i,
                unit_vector(n, i),
                UJet::constant(k, jet_order, l.clone()),
            );
        }
        f
    }

    pub fn normal_dim(&self) -> usize {
        self.n
    }

    pub fn centre_dim(&self) -> usize {
        self.k
    }

    pub fn jet_order(&self) -> u32 {
        self.jet_order
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.n + self.k
    }

    pub fn comp(&self, i: usize) -> &JetPoly {
        &self.comps[i]
    }

    pub fn comp_mut(&mut self, i: usize) -> &mut JetPoly {
        &mut self.comps[i]
    }

    pub fn comps(&self) -> &[JetPoly] {
        &self.comps
    }

    pub fn set_comp(&mut self, i: usize, p: JetPoly) {
        self.comps[i] = p.with_max_deg(self.degree + 1);
    }

    pub fn component_name(&self, i: usize) -> String {
        component_name(self.n, i)
    }

    pub fn component_index(&self, name: &str) -> Option<usize> {
        (0..self.dim()).find(|&i| self.component_name(i) == name)
    }

    pub fn add_term(&mut self, comp: usize, e: Vec<u32>, c: UJet) {
        self.comps[comp].add_term(e, c);
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(JetPoly::is_zero)
    }

    pub fn term_count(&self) -> usize {
        self.comps.iter().map(JetPoly::len).sum()
    }

    pub fn zero_jet(&self) -> UJet {
        UJet::zero(self.k, self.jet_order)
    }

    /// Linear coefficient `λ_i(u)` of `x_i` in component `i`, for normal `i`.
    pub fn lambda(&self, i: usize) -> UJet {
        self.comps[i].coeff(&unit_vector(self.n, i))
    }

    pub fn lambdas(&self) -> Vec<UJet> {
        (0..self.n).map(|i| self.lambda(i)).collect()
    }

    /// Eigenvalue data read off `λ(0) = (1, -α0, -β0)`. A planar field uses `β0 = α0`.
    pub fn eigen(&self) -> Result<EigenData, NormalFormError> {
        let alpha0 = -self.lambda(1).constant_term();
        let beta0 = if self.n == 3 {
            -self.lambda(2).constant_term()
        } else {
            alpha0.clone()
        };
        Ok(classify(&alpha0, &beta0)?)
    }

    /// Check the pre-normal-form invariants; returns the eigenvalue data.
    pub fn validate(&self) -> Result<EigenData, NormalFormError> {
        let bad = |m: String| Err(NormalFormError::InvalidField(m));
        if self.lambda(0) != UJet::one(self.k, self.jet_order) {
            return bad("x-component linear coefficient must be exactly 1".into());
        }
        for (i, c) in self.comps.iter().enumerate() {
            let name = self.component_name(i);
            for (e, _) in c.terms() {
                let d = normal_degree(e);
                if d == 0 {
                    return bad(format!(
                        "{name}-component has a term not vanishing at the centre manifold"
                    ));
                }
                if d == 1 {
                    if i >= self.n {
                        return bad(format!(
                            "{name}-component has a term linear in the normal variables"
                        ));
                    }
                    if e[i] != 1 {
                        return bad(format!("{name}-component has an off-diagonal linear term"));
                    }
                }
            }
        }
        self.eigen()
    }

    /// Partition by normal degree: entry `d` holds the degree-`d+1` terms.
    pub fn grade(&self) -> Vec<PolyVectorField> {
        (0..=self.degree).map(|d| self.slice(d)).collect()
    }

    /// Degree-`d` slice (terms of normal degree `d + 1`).
    pub fn slice(&self, d: u32) -> PolyVectorField {
        let mut out = self.like_zero();
        for (i, c) in self.comps.iter().enumerate() {
            out.comps[i] = c.homogeneous(d + 1);
        }
        out
    }

    pub fn add(&self, o: &PolyVectorField) -> PolyVectorField {
        let mut out = self.clone();
        for (a, b) in out.comps.iter_mut().zip(&o.comps) {
            *a = a.add(b);
        }
        out
    }

    pub fn sub(&self, o: &PolyVectorField) -> PolyVectorField {
        let mut out = self.clone();
        for (a, b) in out.comps.iter_mut().zip(&o.comps) {
            *a = a.sub(b);
        }
        out
    }

    pub fn scale_q(&self, c: &Q) -> PolyVectorField {
        let mut out = self.clone();
        for a in out.comps.iter_mut() {
            *a = a.scale_q(c);
        }
        out
    }

    /// Multiply every component by a scalar polynomial.
    pub fn mul_scalar(&self, s: &JetPoly) -> PolyVectorField {
        let mut out = self.clone();
        for a in out.comps.iter_mut() {
            *a = a.mul(s);
        }
        out
    }

    /// The derivation `Σ_i X^i ∂_i p`, over normal and centre variables.
    pub fn derive(&self, p: &JetPoly) -> JetPoly {
        let mut acc = p.like_zero().with_max_deg(self.degree + 1);
        for i in 0..self.n {
            if self.comps[i].is_zero() {
                continue;
            }
            let dp = p.d_normal(i);
            if !dp.is_zero() {
                acc = acc.add(&self.comps[i].mul(&dp));
            }
        }
        for j in 0..self.k {
            let c = &self.comps[self.n + j];
            if c.is_zero() {
                continue;
            }
            let dp = p.d_centre(j);
            if !dp.is_zero() {
                acc = acc.add(&c.mul(&dp));
            }
        }
        acc.with_max_deg(p.max_deg())
    }

    /// Lie bracket `[self, o]^i = self(o^i) - o(self^i)`.
    pub fn bracket(&self, o: &PolyVectorField) -> PolyVectorField {
        let mut out = self.like_zero();
        for i in 0..self.dim() {
            let v = self.derive(&o.comps[i]).sub(&o.derive(&self.comps[i]));
            out.comps[i] = v.with_max_deg(self.degree + 1);
        }
        out
    }

    pub fn eval<R: Real>(&self, state: &[R]) -> Vec<R> {
        let (x, u) = state.split_at(self.n);
        self.comps.iter().map(|c| c.eval(x, u)).collect()
    }

    /// Same terms with a different truncation degree.
    pub fn with_degree(&self, degree: u32) -> PolyVectorField {
        let mut out = PolyVectorField::zero(self.n, self.k, self.jet_order, degree);
        for (i, c) in self.comps.iter().enumerate() {
            out.comps[i] = c.with_max_deg(degree + 1);
        }
        out
    }

    /// Iterator over `(component, exponents, coefficient)`.
    pub fn all_terms(&self) -> impl Iterator<Item = (usize, &Vec<u32>, &UJet)> {
        self.comps
            .iter()
            .enumerate()
            .flat_map(|(i, c)| c.terms().map(move |(e, j)| (i, e, j)))
    }
}

pub fn component_name(n: usize, i: usize) -> String {
    const NORMAL: [&str; 3] = ["x", "y", "z"];
    if i < n {
        NORMAL[i].to_string()
    } else {
        format!("u{}", i - n + 1)
    }
}

fn monomial_string(n: usize, e: &[u32]) -> String {
    const NORMAL: [&str; 3] = ["x", "y", "z"];
    let mut parts = Vec::new();
    for (i, &p) in e.iter().enumerate().take(n) {
        match p {
            0 => {}
            1 => parts.push(NORMAL[i].to_string()),
            _ => parts.push(format!("{}^{}", NORMAL[i], p)),
        }
    }
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for PolyVectorField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.comps.iter().enumerate() {
            let mut parts = Vec::new();
            for (e, j) in c.terms() {
                let coeff = if j.is_constant() {
                    rational_to_string(&j.constant_term())
                } else {
                    format!("({j})")
                };
                parts.push(format!("{coeff}*{}", monomial_string(self.n, e)));
            }
            let rhs = if parts.is_empty() {
                "0".to_string()
            } else {
                parts.join(" + ")
            };
            writeln!(f, "d{}/dt = {}", self.component_name(i), rhs)?;
        }
        Ok(())
    }
}
