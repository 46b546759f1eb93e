//! Truncated power series in the centre variables `u = (u1, ..., uk)`.
//!
//! A [`UJet`] is exact modulo total degree `> J`. This is the finite model of
//! the coefficient ring: units are jets with nonzero constant term, and
//! [`weierstrass_divide`] gives the remainder/quotient decomposition used by
//! the cohomological equation when a coefficient is not a unit.

use std::collections::BTreeMap;
use std::fmt;

use num::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::real::Real;
use crate::ring::{parse_rational, rational_to_string, ParseError, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error("jets have different shapes: (k={0}, J={1}) vs (k={2}, J={3})")]
    DimensionMismatch(usize, u32, usize, u32),
    #[error("jet has zero constant term and is not invertible")]
    NotAUnit,
    #[error("divisor vanishes to the truncation order")]
    ZeroJet,
    #[error("divisor vanishes on the u1 axis; a linear change of u is needed")]
    NeedsLinearChange,
    #[error("bad multi-index {0:?}")]
    BadIndex(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct UJet {
    k: usize,
    order: u32,
    coeffs: BTreeMap<Vec<u32>, Q>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JetOp {
    Add,
    Mul,
}

/// Checked arithmetic: refuses jets of different shape.
pub fn jet_arith(p: &UJet, q: &UJet, op: JetOp) -> Result<UJet, JetError> {
    if p.k != q.k || p.order != q.order {
        return Err(JetError::DimensionMismatch(p.k, p.order, q.k, q.order));
    }
    Ok(match op {
        JetOp::Add => p.add(q),
        JetOp::Mul => p.mul(q),
    })
}

fn deg(e: &[u32]) -> u32 {
    e.iter().sum()
}

impl UJet {
    pub fn zero(k: usize, order: u32) -> Self {
        UJet {
            k,
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(k: usize, order: u32, c: Q) -> Self {
        let mut j = UJet::zero(k, order);
        j.add_term(vec![0; k], c);
        j
    }

    pub fn one(k: usize, order: u32) -> Self {
        UJet::constant(k, order, Q::one())
    }

    /// The coordinate `u_{i+1}` (zero-based `i`).
    pub fn var(k: usize, order: u32, i: usize) -> Self {
        assert!(i < k, "variable index out of range");
        let mut e = vec![0; k];
        e[i] = 1;
        let mut j = UJet::zero(k, order);
        j.add_term(e, Q::one());
        j
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<u32>, Q)>>(k: usize, order: u32, it: I) -> Self {
        let mut j = UJet::zero(k, order);
        for (e, c) in it {
            j.add_term(e, c);
        }
        j
    }

    /// Same shape, constant value.
    pub fn like_constant(&self, c: Q) -> Self {
        UJet::constant(self.k, self.order, c)
    }

    pub fn like_zero(&self) -> Self {
        UJet::zero(self.k, self.order)
    }

    /// Adds `c u^e`; terms above the truncation are dropped.
    pub fn add_term(&mut self, e: Vec<u32>, c: Q) {
        assert_eq!(e.len(), self.k, "multi-index length");
        if c.is_zero() || deg(&e) > self.order {
            return;
        }
        match self.coeffs.get_mut(&e) {
            Some(slot) => {
                *slot += c;
                if slot.is_zero() {
                    self.coeffs.remove(&e);
                }
            }
            None => {
                self.coeffs.insert(e, c);
            }
        }
    }

    pub fn centre_dim(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &Q)> {
        self.coeffs.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> Q {
        self.coeffs.get(e).cloned().unwrap_or_else(Q::zero)
    }

    pub fn constant_term(&self) -> Q {
        self.coeff(&vec![0; self.k])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.keys().all(|e| deg(e) == 0)
    }

    pub fn is_unit(&self) -> bool {
        !self.constant_term().is_zero()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn check_shape(&self, o: &UJet) {
        assert!(
            self.k == o.k && self.order == o.order,
            "jet shape mismatch: (k={}, J={}) vs (k={}, J={})",
            self.k,
            self.order,
            o.k,
            o.order
        );
    }

    pub fn add(&self, o: &UJet) -> UJet {
        self.check_shape(o);
        let mut out = self.clone();
        for (e, c) in &o.coeffs {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &UJet) -> UJet {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> UJet {
        UJet {
            k: self.k,
            order: self.order,
            coeffs: self.coeffs.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Q) -> UJet {
        if c.is_zero() {
            return self.like_zero();
        }
        UJet {
            k: self.k,
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|(e, v)| (e.clone(), v * c))
                .collect(),
        }
    }

    /// Truncated product.
    pub fn mul(&self, o: &UJet) -> UJet {
        self.check_shape(o);
        let mut out = self.like_zero();
        for (e1, c1) in &self.coeffs {
            let d1 = deg(e1);
            for (e2, c2) in &o.coeffs {
                if d1 + deg(e2) > self.order {
                    continue;
                }
                let e: Vec<u32> = e1.iter().zip(e2).map(|(x, y)| x + y).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> UJet {
        let mut acc = UJet::one(self.k, self.order);
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// `∂/∂u_{i+1}`. The result is exact up to degree `J - 1`.
    pub fn derivative(&self, i: usize) -> UJet {
        let mut out = self.like_zero();
        for (e, c) in &self.coeffs {
            if e[i] == 0 {
                continue;
            }
            let mut f = e.clone();
            f[i] -= 1;
            out.add_term(f, c * Q::from_integer(e[i].into()));
        }
        out
    }

    /// Multiply by `u_{i+1}^n`.
    pub fn shift(&self, i: usize, n: u32) -> UJet {
        let mut out = self.like_zero();
        for (e, c) in &self.coeffs {
            let mut f = e.clone();
            f[i] += n;
            out.add_term(f, c.clone());
        }
        out
    }

    pub fn eval<R: Real>(&self, u: &[R]) -> R {
        assert_eq!(u.len(), self.k, "point dimension");
        let mut acc = R::zero();
        for (e, c) in &self.coeffs {
            let mut m = R::from_rational(c);
            for (x, &n) in u.iter().zip(e) {
                if n > 0 {
                    m *= x.powi(n as i32);
                }
            }
            acc += m;
        }
        acc
    }

    pub fn eval_exact(&self, u: &[Q]) -> Q {
        let mut acc = Q::zero();
        for (e, c) in &self.coeffs {
            let mut m = c.clone();
            for (x, &n) in u.iter().zip(e) {
                for _ in 0..n {
                    m *= x;
                }
            }
            acc += m;
        }
        acc
    }

    /// Drop every term of total degree above `d`, keeping the shape.
    pub fn truncated(&self, d: u32) -> UJet {
        UJet {
            k: self.k,
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(e, _)| deg(e) <= d)
                .map(|(e, c)| (e.clone(), c.clone()))
                .collect(),
        }
    }

    /// Same coefficients with a different truncation order.
    pub fn retruncate(&self, order: u32) -> UJet {
        UJet::from_terms(self.k, order, self.coeffs.clone())
    }

    pub fn to_json_map(&self) -> BTreeMap<String, String> {
        self.coeffs
            .iter()
            .map(|(e, c)| (index_to_string(e), rational_to_string(c)))
            .collect()
    }

    pub fn from_json_map(
        k: usize,
        order: u32,
        m: &BTreeMap<String, String>,
    ) -> Result<UJet, JetError> {
        let mut j = UJet::zero(k, order);
        for (key, val) in m {
            let e = parse_index(key)?;
            if e.len() != k {
                return Err(JetError::BadIndex(key.clone()));
            }
            j.add_term(e, parse_rational(val)?);
        }
        Ok(j)
    }
}

pub fn index_to_string(e: &[u32]) -> String {
    let parts: Vec<String> = e.iter().map(|n| n.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn parse_index(s: &str) -> Result<Vec<u32>, JetError> {
    let t = s.trim();
    let inner = t
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .ok_or_else(|| JetError::BadIndex(s.to_string()))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .map(|p| {
            p.trim()
                .parse::<u32>()
                .map_err(|_| JetError::BadIndex(s.to_string()))
        })
        .collect()
}

/// Serialized shape of a jet: `{"(2,0,1)": "3/7", ...}`.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Default)]
#[serde(transparent)]
pub struct UJetJson(pub BTreeMap<String, String>);

pub fn invert_unit(f: &UJet) -> Result<UJet, JetError> {
    let c0 = f.constant_term();
    if c0.is_zero() {
        return Err(JetError::NotAUnit);
    }
    // f = c0 (1 + h), f^{-1} = c0^{-1} Σ (-h)^n
    let inv0 = Q::one() / &c0;
    let h = f.scale(&inv0).sub(&UJet::one(f.k, f.order));
    let mh = h.neg();
    let mut acc = UJet::one(f.k, f.order);
    let mut p = UJet::one(f.k, f.order);
    for _ in 0..f.order {
        p = p.mul(&mh);
        if p.is_zero() {
            break;
        }
        acc = acc.add(&p);
    }
    Ok(acc.scale(&inv0))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Division {
    pub q: UJet,
    pub r: UJet,
    pub m: u32,
}

/// `F = r + q f` modulo degree `> J`, with `deg_{u1} r < m` where `u1^m` is
/// the first nonzero power of `f(u1, 0, ..., 0)`.
pub fn weierstrass_divide(big_f: &UJet, f: &UJet) -> Result<Division, JetError> {
    if big_f.k != f.k || big_f.order != f.order {
        return Err(JetError::DimensionMismatch(
            big_f.k,
            big_f.order,
            f.k,
            f.order,
        ));
    }
    if f.is_zero() {
        return Err(JetError::ZeroJet);
    }
    let k = f.k;
    let order = f.order;
    let m = if k == 0 {
        0
    } else {
        f.coeffs
            .keys()
            .filter(|e| e[1..].iter().all(|&n| n == 0))
            .map(|e| e[0])
            .min()
            .ok_or(JetError::NeedsLinearChange)?
    };
    if m > order {
        return Err(JetError::NeedsLinearChange);
    }
    if m == 0 {
        let inv = invert_unit(f)?;
        return Ok(Division {
            q: big_f.mul(&inv),
            r: f.like_zero(),
            m: 0,
        });
    }
    // f = u1^m e + tail, deg_{u1} tail < m
    let split = |g: &UJet| -> (UJet, UJet) {
        let mut hi = g.like_zero();
        let mut lo = g.like_zero();
        for (e, c) in &g.coeffs {
            if e[0] >= m {
                let mut d = e.clone();
                d[0] -= m;
                hi.add_term(d, c.clone());
            } else {
                lo.add_term(e.clone(), c.clone());
            }
        }
        (hi, lo)
    };
    let (e, tail) = split(f);
    // e is only known to degree J - m, so the quotient is kept to that
    // degree; this also fixes the otherwise ambiguous high part of q
    let e_inv = invert_unit(&e)?;
    let mut q = f.like_zero();
    let mut r = f.like_zero();
    let mut g = big_f.clone();
    for _ in 0..=order + 1 {
        if g.is_zero() {
            break;
        }
        let (hi, lo) = split(&g);
        r = r.add(&lo);
        let step = hi.mul(&e_inv).truncated(order - m);
        q = q.add(&step);
        g = step.mul(&tail).neg();
    }
    debug_assert!(g.is_zero(), "division did not terminate");
    Ok(Division { q, r, m })
}

impl fmt::Display for UJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(e, c)| {
                let mut s = rational_to_string(c);
                for (i, &n) in e.iter().enumerate() {
                    match n {
                        0 => {}
                        1 => s.push_str(&format!("*u{}", i + 1)),
                        _ => s.push_str(&format!("*u{}^{}", i + 1, n)),
                    }
                }
                s
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for UJet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "UJet[k={}, J={}: {}]", self.k, self.order, self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::q;

    fn u(k: usize, j: u32, i: usize) -> UJet {
        UJet::var(k, j, i)
    }

    #[test]
    fn truncated_products() {
        let one = UJet::one(1, 2);
        let u1 = u(1, 2, 0);
        let p = one.add(&u1).mul(&one.sub(&u1));
        assert_eq!(p, one.sub(&u1.mul(&u1)));
        let s = u(2, 2, 0).add(&u(2, 2, 1));
        let sq = s.mul(&s);
        assert_eq!(sq.len(), 3);
        assert_eq!(sq.coeff(&[1, 1]), q(2, 1));
        assert!(s.mul(&sq).is_zero());
    }

    #[test]
    fn inverse_of_one_plus_u() {
        let f = UJet::one(1, 3).add(&u(1, 3, 0));
        let inv = invert_unit(&f).unwrap();
        let expected = UJet::from_terms(
            1,
            3,
            [
                (vec![0], q(1, 1)),
                (vec![1], q(-1, 1)),
                (vec![2], q(1, 1)),
                (vec![3], q(-1, 1)),
            ],
        );
        assert_eq!(inv, expected);
        assert!(invert_unit(&u(1, 3, 0)).is_err());
    }

    #[test]
    fn inverse_of_two_plus_u1u2() {
        let f = UJet::constant(2, 2, q(2, 1)).add(&u(2, 2, 0).mul(&u(2, 2, 1)));
        let inv = invert_unit(&f).unwrap();
        assert_eq!(inv.coeff(&[0, 0]), q(1, 2));
        assert_eq!(inv.coeff(&[1, 1]), q(-1, 4));
        assert_eq!(f.mul(&inv), UJet::one(2, 2));
    }

    #[test]
    fn divide_by_itself() {
        let f = u(2, 4, 0).mul(&u(2, 4, 0)).add(&u(2, 4, 1));
        let d = weierstrass_divide(&f, &f).unwrap();
        assert_eq!(d.q, UJet::one(2, 4));
        assert!(d.r.is_zero());
    }

    #[test]
    fn cubic_by_u1_squared_minus_u2() {
        let u1 = u(2, 3, 0);
        let u2 = u(2, 3, 1);
        let f = u1.mul(&u1).sub(&u2);
        let big_f = u1.pow(3);
        let d = weierstrass_divide(&big_f, &f).unwrap();
        assert_eq!(d.m, 2);
        assert_eq!(d.q, u1);
        assert_eq!(d.r, u1.mul(&u2));
    }

    #[test]
    fn division_errors() {
        let z = UJet::zero(2, 3);
        assert_eq!(weierstrass_divide(&u(2, 3, 0), &z), Err(JetError::ZeroJet));
        assert_eq!(
            weierstrass_divide(&u(2, 3, 0), &u(2, 3, 1)),
            Err(JetError::NeedsLinearChange)
        );
        assert!(matches!(
            jet_arith(&u(2, 3, 0), &u(2, 4, 0), JetOp::Add),
            Err(JetError::DimensionMismatch(..))
        ));
    }

    #[test]
    fn json_round_trip() {
        let f = UJet::from_terms(3, 4, [(vec![2, 0, 1], q(3, 7)), (vec![0, 0, 0], q(-1, 1))]);
        let m = f.to_json_map();
        assert_eq!(m.get("(2,0,1)").map(String::as_str), Some("3/7"));
        assert_eq!(UJet::from_json_map(3, 4, &m).unwrap(), f);
    }
}
