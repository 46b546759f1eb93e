//! Polynomials in the two formal parameters `a`, `b` over the rationals.

use std::collections::BTreeMap;
use std::fmt;

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::real::Real;

pub type Q = BigRational;

pub fn q(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn qi(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

/// Sparse polynomial in `a`, `b`; keys are `(deg_a, deg_b)`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly2 {
    terms: BTreeMap<(u32, u32), Q>,
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn one() -> Self {
        Poly2::constant(Q::one())
    }

    pub fn constant(c: Q) -> Self {
        Poly2::monomial(c, 0, 0)
    }

    pub fn monomial(c: Q, da: u32, db: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((da, db), c);
        }
        Poly2 { terms }
    }

    pub fn a() -> Self {
        Poly2::monomial(Q::one(), 1, 0)
    }

    pub fn b() -> Self {
        Poly2::monomial(Q::one(), 0, 1)
    }

    /// `n1*a + n2*b`.
    pub fn linear(n1: i64, n2: i64) -> Self {
        let mut p = Poly2::monomial(qi(n1), 1, 0);
        p.add_term((0, 1), qi(n2));
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), Q)>>(it: I) -> Self {
        let mut p = Poly2::zero();
        for (k, c) in it {
            p.add_term(k, c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &Q)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: (u32, u32), c: Q) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key).or_insert_with(Q::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    pub fn constant_value(&self) -> Option<Q> {
        if self.is_constant() {
            Some(self.terms.get(&(0, 0)).cloned().unwrap_or_else(Q::zero))
        } else {
            None
        }
    }

    pub fn coeff(&self, da: u32, db: u32) -> Q {
        self.terms.get(&(da, db)).cloned().unwrap_or_else(Q::zero)
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// Lowest total degree of a nonzero term.
    pub fn low_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    pub fn homogeneous_part(&self, deg: u32) -> Poly2 {
        Poly2 {
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| i + j == deg)
                .map(|(k, c)| (*k, c.clone()))
                .collect(),
        }
    }

    /// Leading term in graded-lex order (total degree, then degree in `a`).
    pub fn leading(&self) -> Option<((u32, u32), &Q)> {
        self.terms
            .iter()
            .max_by_key(|(&(i, j), _)| (i + j, i))
            .map(|(k, c)| (*k, c))
    }

    /// Image under `a = 1`. Injective on homogeneous polynomials of a fixed
    /// degree.
    pub fn at_a_one(&self) -> Poly2 {
        let mut p = Poly2::zero();
        for (&(_, j), c) in &self.terms {
            p.add_term((0, j), c.clone());
        }
        p
    }

    pub fn scale(&self, c: &Q) -> Poly2 {
        if c.is_zero() {
            return Poly2::zero();
        }
        Poly2 {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn neg(&self) -> Poly2 {
        self.scale(&-Q::one())
    }

    pub fn add(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(*k, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero();
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &other.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> Poly2 {
        let mut acc = Poly2::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn eval<R: Real>(&self, a: R, b: R) -> R {
        let mut acc = R::zero();
        for (&(i, j), c) in &self.terms {
            acc += R::from_rational(c) * a.powi(i as i32) * b.powi(j as i32);
        }
        acc
    }

    /// Sum of absolute term values at `(a, b)`: the scale against which a
    /// vanishing value is judged.
    pub fn eval_abs_scale(&self, a: f64, b: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&(i, j), c)| {
                crate::real::rational_abs_f64(c) * a.abs().powi(i as i32) * b.abs().powi(j as i32)
            })
            .sum()
    }

    pub fn eval_exact(&self, a: &Q, b: &Q) -> Q {
        let mut acc = Q::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * num::pow(a.clone(), i as usize) * num::pow(b.clone(), j as usize);
        }
        acc
    }

    fn to_rec(&self) -> Rec {
        let db = self.terms.keys().map(|k| k.1).max().unwrap_or(0) as usize;
        let mut rec: Vec<UPoly> = vec![UPoly::default(); db + 1];
        for (&(i, j), c) in &self.terms {
            let u = &mut rec[j as usize];
            if u.0.len() <= i as usize {
                u.0.resize(i as usize + 1, Q::zero());
            }
            u.0[i as usize] = c.clone();
        }
        for u in rec.iter_mut() {
            u.trim();
        }
        let mut r = Rec(rec);
        r.trim();
        r
    }

    fn from_rec(r: &Rec) -> Poly2 {
        let mut p = Poly2::zero();
        for (j, u) in r.0.iter().enumerate() {
            for (i, c) in u.0.iter().enumerate() {
                p.add_term((i as u32, j as u32), c.clone());
            }
        }
        p
    }

    /// Greatest common divisor; the result is only defined up to a unit.
    pub fn gcd(&self, other: &Poly2) -> Poly2 {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.is_constant() || other.is_constant() || self.surely_coprime(other) {
            return Poly2::one();
        }
        let (x, y) = (self.to_rec(), other.to_rec());
        let g = interp_gcd(&x, &y).unwrap_or_else(|| rec_gcd(&x, &y));
        Poly2::from_rec(&g)
    }

    fn degree_in(&self, var: usize) -> usize {
        self.terms
            .keys()
            .map(|&(i, j)| if var == 0 { i } else { j } as usize)
            .max()
            .unwrap_or(0)
    }

    /// Univariate image in variable `var` (0 = `a`, 1 = `b`) with the other
    /// variable set to `r`.
    fn specialize(&self, var: usize, r: &Q) -> UPoly {
        let mut v: Vec<Q> = Vec::new();
        for (&(i, j), c) in &self.terms {
            let (keep, fix) = if var == 0 { (i, j) } else { (j, i) };
            let k = keep as usize;
            if v.len() <= k {
                v.resize(k + 1, Q::zero());
            }
            v[k] += c * num::pow(r.clone(), fix as usize);
        }
        let mut u = UPoly(v);
        u.trim();
        u
    }

    /// Sufficient test for a trivial gcd. A common factor of positive degree
    /// in `a` survives any substitution `b = r` that keeps both degrees in
    /// `a`, and likewise with the roles swapped; so coprime images in both
    /// directions prove coprimality.
    fn surely_coprime(&self, o: &Poly2) -> bool {
        const POINTS: [i64; 3] = [2, -3, 7];
        (0..2).all(|var| {
            POINTS.iter().any(|&r| {
                let r = qi(r);
                let (x, y) = (self.specialize(var, &r), o.specialize(var, &r));
                !x.is_zero()
                    && !y.is_zero()
                    && x.deg() == self.degree_in(var)
                    && y.deg() == o.degree_in(var)
                    && x.gcd(&y).deg() == 0
            })
        })
    }

    /// `self / d` when the division is exact.
    pub fn exact_div(&self, d: &Poly2) -> Option<Poly2> {
        if d.is_zero() {
            return None;
        }
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&(Q::one() / c)));
        }
        rec_exact_div(&self.to_rec(), &d.to_rec()).map(|r| Poly2::from_rec(&r))
    }
}

/// Univariate polynomial in `a`, dense, lowest degree first.
#[derive(Clone, Default, PartialEq, Debug)]
struct UPoly(Vec<Q>);

impl UPoly {
    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn deg(&self) -> usize {
        self.0.len().saturating_sub(1)
    }
    fn lc(&self) -> &Q {
        self.0.last().expect("lc of zero polynomial")
    }
    fn add(&self, o: &UPoly) -> UPoly {
        let n = self.0.len().max(o.0.len());
        let mut v = vec![Q::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in o.0.iter().enumerate() {
            v[i] += c;
        }
        let mut u = UPoly(v);
        u.trim();
        u
    }
    fn neg(&self) -> UPoly {
        UPoly(self.0.iter().map(|c| -c.clone()).collect())
    }
    fn sub(&self, o: &UPoly) -> UPoly {
        self.add(&o.neg())
    }
    fn mul(&self, o: &UPoly) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::default();
        }
        let mut v = vec![Q::zero(); self.0.len() + o.0.len() - 1];
        for (i, c1) in self.0.iter().enumerate() {
            if c1.is_zero() {
                continue;
            }
            for (j, c2) in o.0.iter().enumerate() {
                v[i + j] += c1 * c2;
            }
        }
        let mut u = UPoly(v);
        u.trim();
        u
    }
    fn shift_scale(&self, k: usize, c: &Q) -> UPoly {
        let mut v = vec![Q::zero(); k];
        v.extend(self.0.iter().map(|x| x * c));
        let mut u = UPoly(v);
        u.trim();
        u
    }
    fn divrem(&self, d: &UPoly) -> (UPoly, UPoly) {
        let mut r = self.clone();
        if r.0.len() < d.0.len() {
            return (UPoly::default(), r);
        }
        let mut qv = vec![Q::zero(); r.0.len() - d.0.len() + 1];
        let lc = d.lc().clone();
        while !r.is_zero() && r.0.len() >= d.0.len() {
            let k = r.deg() - d.deg();
            let c = r.lc() / &lc;
            r = r.sub(&d.shift_scale(k, &c));
            qv[k] = c;
        }
        let mut q = UPoly(qv);
        q.trim();
        (q, r)
    }
    fn monic(&self) -> UPoly {
        if self.is_zero() {
            return self.clone();
        }
        let lc = self.lc().clone();
        UPoly(self.0.iter().map(|c| c / &lc).collect())
    }
    fn eval(&self, r: &Q) -> Q {
        self.0.iter().rev().fold(Q::zero(), |acc, c| acc * r + c)
    }
    /// Newton interpolation through `(xs[k], ys[k])`.
    fn interpolate(xs: &[Q], ys: &[Q]) -> UPoly {
        let n = xs.len();
        let mut dd = ys.to_vec();
        for k in 1..n {
            for i in (k..n).rev() {
                dd[i] = (&dd[i] - &dd[i - 1]) / (&xs[i] - &xs[i - k]);
            }
        }
        let mut p = UPoly::default();
        for i in (0..n).rev() {
            // p = p (t - xs[i]) + dd[i]
            p = p.shift_scale(1, &Q::one()).sub(&p.shift_scale(0, &xs[i]));
            p = p.add(&UPoly(vec![dd[i].clone()]));
        }
        p
    }
    fn gcd(&self, o: &UPoly) -> UPoly {
        if self.is_zero() {
            return o.monic();
        }
        if o.is_zero() {
            return self.monic();
        }
        if self.deg() == 0 || o.deg() == 0 {
            return UPoly(vec![Q::one()]);
        }
        let g = super::modgcd::gcd_int(
            &super::modgcd::primitive_int(&self.0),
            &super::modgcd::primitive_int(&o.0),
        );
        UPoly(g.into_iter().map(Q::from_integer).collect()).monic()
    }
}

/// Polynomial in `b` with coefficients in `Q[a]`, lowest degree first.
#[derive(Clone, Debug)]
struct Rec(Vec<UPoly>);

impl Rec {
    fn trim(&mut self) {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
    }
    fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    fn deg(&self) -> usize {
        self.0.len().saturating_sub(1)
    }
    fn lc(&self) -> &UPoly {
        self.0.last().expect("lc of zero")
    }
    fn content(&self) -> UPoly {
        let mut g = UPoly::default();
        for c in &self.0 {
            g = g.gcd(c);
        }
        g
    }
    fn div_by_upoly(&self, c: &UPoly) -> Rec {
        Rec(self
            .0
            .iter()
            .map(|x| {
                let (q, r) = x.divrem(c);
                debug_assert!(r.is_zero());
                q
            })
            .collect())
    }
    fn mul_upoly(&self, c: &UPoly) -> Rec {
        let mut r = Rec(self.0.iter().map(|x| x.mul(c)).collect());
        r.trim();
        r
    }
    fn primitive(&self) -> Rec {
        if self.is_zero() {
            return self.clone();
        }
        self.div_by_upoly(&self.content())
    }
    fn sub_shifted(&self, o: &Rec, k: usize, c: &UPoly) -> Rec {
        let n = self.0.len().max(o.0.len() + k);
        let mut v = self.0.clone();
        v.resize(n, UPoly::default());
        for (i, x) in o.0.iter().enumerate() {
            v[i + k] = v[i + k].sub(&x.mul(c));
        }
        let mut r = Rec(v);
        r.trim();
        r
    }
    fn prem(&self, d: &Rec) -> Rec {
        let mut r = self.clone();
        let lc = d.lc().clone();
        while !r.is_zero() && r.deg() >= d.deg() {
            let k = r.deg() - d.deg();
            let rl = r.lc().clone();
            r = r.mul_upoly(&lc).sub_shifted(d, k, &rl);
        }
        r
    }
}

fn rec_gcd(x: &Rec, y: &Rec) -> Rec {
    let (mut a, mut b) = if x.deg() >= y.deg() {
        (x.clone(), y.clone())
    } else {
        (y.clone(), x.clone())
    };
    let c = a.content().gcd(&b.content());
    a = a.primitive();
    b = b.primitive();
    let g = loop {
        if b.is_zero() {
            break a;
        }
        if b.deg() == 0 {
            break Rec(vec![UPoly(vec![Q::one()])]);
        }
        let r = a.prem(&b);
        a = b;
        b = r.primitive();
    };
    g.primitive().mul_upoly(&c)
}

impl Rec {
    fn deg_a(&self) -> usize {
        self.0.iter().map(UPoly::deg).max().unwrap_or(0)
    }
    /// Univariate image in `b` at `a = r`.
    fn at_a(&self, r: &Q) -> UPoly {
        let mut u = UPoly(self.0.iter().map(|c| c.eval(r)).collect());
        u.trim();
        u
    }
}

/// Gcd by evaluation at `a = r` and interpolation in `a`, verified by trial
/// division. `None` when no verified candidate turns up within the point
/// budget, in which case the caller falls back to the primitive PRS.
fn interp_gcd(x: &Rec, y: &Rec) -> Option<Rec> {
    let c = x.content().gcd(&y.content());
    let (px, py) = (x.primitive(), y.primitive());
    let gamma = px.lc().gcd(py.lc());
    let need = px.deg_a().min(py.deg_a()) + gamma.deg() + 1;
    let mut pts: Vec<(Q, UPoly)> = Vec::new();
    let mut best = usize::MAX;
    let mut tried_after_fail = 0;
    for k in 1..=(4 * need as i64 + 40) {
        let r = if k % 2 == 1 {
            qi(k / 2 + 1)
        } else {
            qi(-(k / 2))
        };
        if px.lc().eval(&r).is_zero() || py.lc().eval(&r).is_zero() {
            continue;
        }
        let g = px.at_a(&r).gcd(&py.at_a(&r));
        let d = g.deg();
        if d == 0 {
            return Some(Rec(vec![c]));
        }
        if d < best {
            best = d;
            pts.clear();
        } else if d > best {
            continue;
        }
        let s = gamma.eval(&r);
        pts.push((r, UPoly(g.0.iter().map(|v| v * &s).collect())));
        if pts.len() < need + tried_after_fail {
            continue;
        }
        let xs: Vec<Q> = pts.iter().map(|p| p.0.clone()).collect();
        let mut cand = Rec((0..=best)
            .map(|j| {
                let ys: Vec<Q> = pts.iter().map(|p| p.1 .0[j].clone()).collect();
                UPoly::interpolate(&xs, &ys)
            })
            .collect());
        cand.trim();
        let cand = cand.primitive();
        if rec_exact_div(&px, &cand).is_some() && rec_exact_div(&py, &cand).is_some() {
            return Some(cand.mul_upoly(&c));
        }
        tried_after_fail += 1;
    }
    None
}

fn rec_exact_div(x: &Rec, d: &Rec) -> Option<Rec> {
    let mut r = x.clone();
    if r.is_zero() {
        return Some(r);
    }
    if r.deg() < d.deg() {
        return None;
    }
    let mut quot = vec![UPoly::default(); r.deg() - d.deg() + 1];
    while !r.is_zero() && r.deg() >= d.deg() {
        let k = r.deg() - d.deg();
        let (c, rem) = r.lc().divrem(d.lc());
        if !rem.is_zero() {
            return None;
        }
        r = r.sub_shifted(d, k, &c);
        quot[k] = c;
    }
    if !r.is_zero() {
        return None;
    }
    let mut q = Rec(quot);
    q.trim();
    Some(q)
}

fn fmt_rational(c: &Q) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut keys: Vec<_> = self.terms.iter().collect();
        keys.sort_by_key(|(&(i, j), _)| std::cmp::Reverse((i + j, i)));
        for (n, (&(i, j), c)) in keys.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if n == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            let mut factors = Vec::new();
            if !mag.is_one() || (i == 0 && j == 0) {
                factors.push(fmt_rational(&mag));
            }
            for (name, e) in [("a", i), ("b", j)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Poly2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly2({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lin(n1: i64, n2: i64) -> Poly2 {
        Poly2::linear(n1, n2)
    }

    #[test]
    fn gcd_of_products_of_linear_forms() {
        let f = lin(1, -2).mul(&lin(1, 1)).mul(&lin(2, 3));
        let g = lin(1, 1).mul(&lin(0, 1)).mul(&lin(2, 3));
        let d = f.gcd(&g);
        let expected = lin(1, 1).mul(&lin(2, 3));
        // equal up to a rational unit
        let ratio = d.exact_div(&expected).expect("divisible");
        assert!(ratio.is_constant() && !ratio.is_zero());
    }

    #[test]
    fn gcd_coprime_is_unit() {
        let f = Poly2::a().mul(&Poly2::a()).add(&Poly2::b());
        let g = lin(1, -1);
        assert!(f.gcd(&g).is_constant());
    }

    #[test]
    fn gcd_pure_a_content() {
        let f = Poly2::a().mul(&lin(1, 1));
        let g = Poly2::a().mul(&Poly2::a());
        let d = f.gcd(&g);
        assert!(d.exact_div(&Poly2::a()).unwrap().is_constant());
    }

    #[test]
    fn exact_div_rejects_non_divisor() {
        let f = Poly2::a().add(&Poly2::one());
        assert!(f.exact_div(&Poly2::b()).is_none());
        let g = lin(1, 2).mul(&lin(3, -1));
        assert_eq!(g.exact_div(&lin(3, -1)).unwrap(), lin(1, 2));
    }

    #[test]
    fn display_is_graded() {
        let p = Poly2::from_terms([((2, 1), q(3, 7)), ((0, 1), q(-1, 2)), ((0, 0), qi(1))]);
        assert_eq!(p.to_string(), "3/7*a^2*b - 1/2*b + 1");
    }
}
