use std::collections::BTreeMap;

use num::{One, Zero};

use crate::jets::UJet;
use crate::real::Real;
use crate::ring::Q;

/// Polynomial in the normal variables with jet coefficients in `u`,
/// truncated above normal degree `max_deg`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct JetPoly {
    n: usize,
    k: usize,
    order: u32,
    max_deg: u32,
    terms: BTreeMap<Vec<u32>, UJet>,
}

pub fn normal_degree(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl JetPoly {
    pub fn zero(n: usize, k: usize, order: u32, max_deg: u32) -> Self {
        JetPoly {
            n,
            k,
            order,
            max_deg,
            terms: BTreeMap::new(),
        }
    }

    pub fn like_zero(&self) -> Self {
        JetPoly::zero(self.n, self.k, self.order, self.max_deg)
    }

    pub fn one_like(&self) -> Self {
        let mut p = self.like_zero();
        p.add_term(vec![0; self.n], UJet::one(self.k, self.order));
        p
    }

    pub fn normal_dim(&self) -> usize {
        self.n
    }

    pub fn centre_dim(&self) -> usize {
        self.k
    }

    pub fn jet_order(&self) -> u32 {
        self.order
    }

    pub fn max_deg(&self) -> u32 {
        self.max_deg
    }

    pub fn zero_jet(&self) -> UJet {
        UJet::zero(self.k, self.order)
    }

    pub fn add_term(&mut self, e: Vec<u32>, c: UJet) {
        debug_assert_eq!(e.len(), self.n);
        if c.is_zero() || normal_degree(&e) > self.max_deg {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(slot) => {
                let s = slot.add(&c);
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *slot = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn set_term(&mut self, e: Vec<u32>, c: UJet) {
        if c.is_zero() {
            self.terms.remove(&e);
        } else if normal_degree(&e) <= self.max_deg {
            self.terms.insert(e, c);
        }
    }

    pub fn remove_term(&mut self, e: &[u32]) -> Option<UJet> {
        self.terms.remove(e)
    }

    pub fn coeff(&self, e: &[u32]) -> UJet {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| self.zero_jet())
    }

    pub fn get(&self, e: &[u32]) -> Option<&UJet> {
        self.terms.get(e)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &UJet)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &JetPoly) -> JetPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &JetPoly) -> JetPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> JetPoly {
        let mut out = self.like_zero();
        for (e, c) in &self.terms {
            out.terms.insert(e.clone(), c.neg());
        }
        out
    }

    pub fn scale_q(&self, c: &Q) -> JetPoly {
        let mut out = self.like_zero();
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.terms.insert(e.clone(), v.scale(c));
        }
        out
    }

    pub fn mul(&self, o: &JetPoly) -> JetPoly {
        let mut out = self.like_zero();
        for (e1, c1) in &self.terms {
            let d1 = normal_degree(e1);
            for (e2, c2) in &o.terms {
                if d1 + normal_degree(e2) > self.max_deg {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1.mul(c2));
            }
        }
        out
    }

    /// `∂/∂x_i` in a normal variable.
    pub fn d_normal(&self, i: usize) -> JetPoly {
        let mut out = self.like_zero();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, c.scale(&Q::from_integer(e[i].into())));
        }
        out
    }

    /// `∂/∂u_j` of every coefficient.
    pub fn d_centre(&self, j: usize) -> JetPoly {
        let mut out = self.like_zero();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.derivative(j));
        }
        out
    }

    /// Terms of normal degree exactly `d`.
    pub fn homogeneous(&self, d: u32) -> JetPoly {
        let mut out = self.like_zero();
        for (e, c) in &self.terms {
            if normal_degree(e) == d {
                out.terms.insert(e.clone(), c.clone());
            }
        }
        out
    }

    pub fn with_max_deg(&self, max_deg: u32) -> JetPoly {
        let mut out = JetPoly::zero(self.n, self.k, self.order, max_deg);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// No term below normal degree `d`.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| normal_degree(e)).min()
    }

    pub fn eval<R: Real>(&self, x: &[R], u: &[R]) -> R {
        let mut acc = R::zero();
        for (e, c) in &self.terms {
            let mut m = c.eval(u);
            for (xi, &n) in x.iter().zip(e) {
                if n > 0 {
                    m *= xi.powi(n as i32);
                }
            }
            acc += m;
        }
        acc
    }

    /// `1 / self` for `self = 1 + (terms of positive normal degree)`.
    pub fn inverse_one_plus(&self) -> Option<JetPoly> {
        let c0 = self.coeff(&vec![0; self.n]);
        if c0 != UJet::one(self.k, self.order)
            || self
                .terms
                .iter()
                .any(|(e, c)| normal_degree(e) == 0 && !c.is_constant())
        {
            return None;
        }
        let h = self.sub(&self.one_like());
        let mh = h.neg();
        let mut acc = self.one_like();
        let mut p = self.one_like();
        for _ in 0..self.max_deg {
            p = p.mul(&mh);
            if p.is_zero() {
                break;
            }
            acc = acc.add(&p);
        }
        Some(acc)
    }

    /// Divide by the normal variable `x_i`, if every term contains it.
    pub fn div_var(&self, i: usize) -> Option<JetPoly> {
        let mut out = self.like_zero();
        for (e, c) in &self.terms {
            if e[i] == 0 {
                return None;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.terms.insert(f, c.clone());
        }
        Some(out)
    }

    /// Multiply by the monomial `x^e`.
    pub fn mul_monomial(&self, e: &[u32]) -> JetPoly {
        let mut out = self.like_zero();
        for (f, c) in &self.terms {
            let g: Vec<u32> = f.iter().zip(e).map(|(a, b)| a + b).collect();
            out.add_term(g, c.clone());
        }
        out
    }

    pub fn mul_jet(&self, j: &UJet) -> JetPoly {
        let mut out = self.like_zero();
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.mul(j));
        }
        out
    }

    pub fn constant_q(&self, c: Q) -> JetPoly {
        let mut p = self.like_zero();
        p.add_term(vec![0; self.n], UJet::constant(self.k, self.order, c));
        p
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self.coeff(&vec![0; self.n]) == UJet::constant(self.k, self.order, Q::one())
    }
}
