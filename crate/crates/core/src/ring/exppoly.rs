use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};

use super::poly2::{qi, Poly2, Q};
use super::ratfunc::{Pole, RatFunc};
use crate::real::Real;

/// Exponent key `(j, n1, n2)` of the basis function `t^j e^{(n1 a + n2 b) t}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExpKey {
    pub j: u32,
    pub n1: i32,
    pub n2: i32,
}

impl ExpKey {
    pub const fn new(j: u32, n1: i32, n2: i32) -> Self {
        ExpKey { j, n1, n2 }
    }

    pub fn rate(&self) -> Poly2 {
        Poly2::linear(self.n1 as i64, self.n2 as i64)
    }

    pub fn has_zero_rate(&self) -> bool {
        self.n1 == 0 && self.n2 == 0
    }
}

/// Finite sum `Σ c_{j,n1,n2}(a,b) t^j e^{(n1 a + n2 b) t}` with
/// rational-function coefficients. No zero coefficient is ever stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct ExpPoly {
    terms: BTreeMap<ExpKey, RatFunc>,
}

impl ExpPoly {
    pub fn zero() -> Self {
        ExpPoly::default()
    }

    pub fn one() -> Self {
        ExpPoly::term(ExpKey::new(0, 0, 0), RatFunc::one())
    }

    pub fn constant(c: RatFunc) -> Self {
        ExpPoly::term(ExpKey::new(0, 0, 0), c)
    }

    pub fn term(key: ExpKey, c: RatFunc) -> Self {
        let mut p = ExpPoly::zero();
        p.add_term(key, c);
        p
    }

    /// `t`.
    pub fn t() -> Self {
        ExpPoly::term(ExpKey::new(1, 0, 0), RatFunc::one())
    }

    /// `e^{(n1 a + n2 b) t}`.
    pub fn exp(n1: i32, n2: i32) -> Self {
        ExpPoly::term(ExpKey::new(0, n1, n2), RatFunc::one())
    }

    /// `Ω(n1 a + n2 b, t) = (e^{κt} - 1)/κ`, or `t` when the rate is zero.
    pub fn omega(n1: i32, n2: i32) -> Self {
        if n1 == 0 && n2 == 0 {
            return ExpPoly::t();
        }
        let inv = RatFunc::new(Poly2::one(), Poly2::linear(n1 as i64, n2 as i64));
        ExpPoly::exp(n1, n2).sub(&ExpPoly::one()).scale(&inv)
    }

    pub fn from_terms<I: IntoIterator<Item = (ExpKey, RatFunc)>>(it: I) -> Self {
        let mut p = ExpPoly::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    pub fn add_term(&mut self, key: ExpKey, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(slot) => {
                let s = slot.add(&c);
                if s.is_zero() {
                    self.terms.remove(&key);
                } else {
                    *slot = s;
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpKey, &RatFunc)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: ExpKey) -> Option<&RatFunc> {
        self.terms.get(&key)
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

    pub fn max_t_degree(&self) -> u32 {
        self.terms.keys().map(|k| k.j).max().unwrap_or(0)
    }

    pub fn max_pole_order(&self) -> i64 {
        self.terms
            .values()
            .map(RatFunc::pole_order)
            .max()
            .unwrap_or(0)
            .max(0)
    }

    pub fn add(&self, o: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &ExpPoly) -> ExpPoly {
        let mut out = self.clone();
        for (k, c) in &o.terms {
            out.add_term(*k, c.neg());
        }
        out
    }

    pub fn neg(&self) -> ExpPoly {
        ExpPoly {
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn mul(&self, o: &ExpPoly) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (k1, c1) in &self.terms {
            for (k2, c2) in &o.terms {
                out.add_term(
                    ExpKey::new(k1.j + k2.j, k1.n1 + k2.n1, k1.n2 + k2.n2),
                    c1.mul(c2),
                );
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> ExpPoly {
        let mut acc = ExpPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn scale(&self, c: &RatFunc) -> ExpPoly {
        if c.is_zero() {
            return ExpPoly::zero();
        }
        ExpPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v.mul(c))).collect(),
        }
    }

    pub fn scale_q(&self, c: &Q) -> ExpPoly {
        if c.is_zero() {
            return ExpPoly::zero();
        }
        ExpPoly {
            terms: self.terms.iter().map(|(k, v)| (*k, v.scale(c))).collect(),
        }
    }

    /// Multiply by `e^{(n1 a + n2 b) t}`: a pure key shift.
    pub fn shift_exp(&self, n1: i32, n2: i32) -> ExpPoly {
        ExpPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (ExpKey::new(k.j, k.n1 + n1, k.n2 + n2), c.clone()))
                .collect(),
        }
    }

    /// `d/dt`, term by term.
    pub fn differentiate(&self) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (k, c) in &self.terms {
            if k.j > 0 {
                out.add_term(ExpKey::new(k.j - 1, k.n1, k.n2), c.scale(&qi(k.j as i64)));
            }
            if !k.has_zero_rate() {
                out.add_term(*k, c.mul_poly(&k.rate()));
            }
        }
        out
    }

    /// `∫_0^t`, via the recurrence for `∫_0^t τ^j e^{κτ} dτ`.
    pub fn integrate(&self) -> ExpPoly {
        let mut out = ExpPoly::zero();
        for (k, c) in &self.terms {
            if k.has_zero_rate() {
                out.add_term(
                    ExpKey::new(k.j + 1, 0, 0),
                    c.scale(&(Q::one() / qi(k.j as i64 + 1))),
                );
                continue;
            }
            let inv = RatFunc::new(Poly2::one(), k.rate());
            // K_j = Σ_i e[i] t^i e^{κt} + konst
            let mut e = vec![inv.clone()];
            let mut konst = inv.neg();
            for j in 1..=k.j {
                let f = inv.scale(&qi(j as i64)).neg();
                for ei in e.iter_mut() {
                    *ei = ei.mul(&f);
                }
                konst = konst.mul(&f);
                e.push(inv.clone());
            }
            for (i, ei) in e.into_iter().enumerate() {
                out.add_term(ExpKey::new(i as u32, k.n1, k.n2), ei.mul(c));
            }
            out.add_term(ExpKey::new(0, 0, 0), konst.mul(c));
        }
        out
    }

    /// Value at `t = 0` as a rational function.
    pub fn at_t_zero(&self) -> RatFunc {
        let mut acc = RatFunc::zero();
        for (k, c) in &self.terms {
            if k.j == 0 {
                acc = acc.add(c);
            }
        }
        acc
    }

    /// Direct evaluation of the exp-monomial sum.
    pub fn eval_direct<R: Real>(&self, a: R, b: R, t: R) -> Result<R, Pole> {
        let mut acc = R::zero();
        for (k, c) in &self.terms {
            let rate = R::from_i64(k.n1 as i64) * a + R::from_i64(k.n2 as i64) * b;
            acc += c.eval(a, b)? * t.powi(k.j as i32) * (rate * t).exp();
        }
        Ok(acc)
    }

    pub fn map_coeffs<F: Fn(&RatFunc) -> RatFunc>(&self, f: F) -> ExpPoly {
        ExpPoly::from_terms(self.terms.iter().map(|(k, c)| (*k, f(c))))
    }
}

impl fmt::Display for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let mut s = c.to_string();
                if k.j > 0 {
                    s.push_str(&if k.j == 1 {
                        "*t".to_string()
                    } else {
                        format!("*t^{}", k.j)
                    });
                }
                if !k.has_zero_rate() {
                    s.push_str(&format!("*e^(({})*t)", k.rate()));
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for ExpPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExpPoly[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::super::poly2::q;
    use super::*;

    #[test]
    fn exponent_keys_add_under_product() {
        let p = ExpPoly::exp(1, 0).mul(&ExpPoly::exp(0, 1));
        assert_eq!(p, ExpPoly::exp(1, 1));
        assert_eq!(
            ExpPoly::t().mul(&ExpPoly::t()),
            ExpPoly::term(ExpKey::new(2, 0, 0), RatFunc::one())
        );
    }

    #[test]
    fn mixed_sum_has_three_keys() {
        let inv_a = RatFunc::new(Poly2::one(), Poly2::a());
        let p = ExpPoly::exp(1, 0)
            .sub(&ExpPoly::one())
            .scale(&inv_a)
            .add(&ExpPoly::t().shift_exp(0, 1));
        let keys: Vec<ExpKey> = p.terms().map(|(k, _)| *k).collect();
        assert_eq!(
            keys,
            vec![
                ExpKey::new(0, 0, 0),
                ExpKey::new(0, 1, 0),
                ExpKey::new(1, 0, 1)
            ]
        );
        for &(a, b, t) in &[(0.3, -0.7, 1.2), (1.1, 0.4, 0.25), (-0.8, 2.0, 3.0)] {
            let lhs = p.eval_direct(a, b, t).unwrap();
            let rhs = ((a * t).exp() - 1.0) / a + t * (b * t).exp();
            assert!((lhs - rhs).abs() < 1e-12 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn integrate_basic_cases() {
        assert_eq!(ExpPoly::one().integrate(), ExpPoly::t());
        assert_eq!(ExpPoly::exp(1, 0).integrate(), ExpPoly::omega(1, 0));
        // t e^{at} -> (1/a) t e^{at} - (1/a^2)(e^{at} - 1)
        let p = ExpPoly::t().shift_exp(1, 0);
        let ia = RatFunc::new(Poly2::one(), Poly2::a());
        let ia2 = ia.mul(&ia);
        let expected = p
            .scale(&ia)
            .sub(&ExpPoly::exp(1, 0).sub(&ExpPoly::one()).scale(&ia2));
        assert_eq!(p.integrate(), expected);
        assert_eq!(expected.differentiate(), p);
    }

    #[test]
    fn differentiate_matches_closed_form() {
        // t^2 e^{(a+2b)t} -> (2t + (a+2b) t^2) e^{(a+2b)t}
        let p = ExpPoly::term(ExpKey::new(2, 1, 2), RatFunc::one());
        let expected =
            ExpPoly::term(ExpKey::new(1, 1, 2), RatFunc::constant(q(2, 1))).add(&ExpPoly::term(
                ExpKey::new(2, 1, 2),
                RatFunc::from_poly(Poly2::linear(1, 2)),
            ));
        assert_eq!(p.differentiate(), expected);
        assert_eq!(ExpPoly::t().differentiate(), ExpPoly::one());
    }

    #[test]
    fn integral_vanishes_at_zero() {
        let p = ExpPoly::term(ExpKey::new(3, 2, -1), RatFunc::constant(q(5, 3))).add(
            &ExpPoly::term(ExpKey::new(1, 0, 0), RatFunc::from_poly(Poly2::b())),
        );
        assert!(p.integrate().at_t_zero().is_zero());
    }
}
