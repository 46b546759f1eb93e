//! Floating-point scalars used by the numerical side of the toolkit.
//!
//! Everything symbolic is exact; evaluation and the numerical oracles are
//! generic over [`Real`] so the same code runs in `f64` and in
//! double-double precision ([`Dd`], roughly 32 significant digits).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num::{BigInt, BigRational, FromPrimitive, Signed, ToPrimitive, Zero};

pub trait Real:
    Copy
    + fmt::Debug
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + AddAssign
    + SubAssign
    + MulAssign
    + Send
    + Sync
{
    fn from_f64(x: f64) -> Self;
    fn from_rational(q: &BigRational) -> Self;
    fn to_f64(self) -> f64;
    fn exp(self) -> Self;
    fn ln(self) -> Self;
    fn abs(self) -> Self;
    /// Unit roundoff of the format.
    fn epsilon() -> f64;

    fn zero() -> Self {
        Self::from_f64(0.0)
    }
    fn one() -> Self {
        Self::from_f64(1.0)
    }
    fn from_i64(n: i64) -> Self {
        Self::from_rational(&BigRational::from_integer(BigInt::from(n)))
    }
    fn powi(self, n: i32) -> Self {
        if n < 0 {
            return Self::one() / self.powi(-n);
        }
        let mut base = self;
        let mut acc = Self::one();
        let mut e = n as u32;
        while e > 0 {
            if e & 1 == 1 {
                acc *= base;
            }
            base *= base;
            e >>= 1;
        }
        acc
    }
    /// `self^e` for a positive base.
    fn powr(self, e: &BigRational) -> Self {
        if e.is_zero() {
            return Self::one();
        }
        if e.is_integer() {
            if let Some(n) = e.to_integer().to_i32() {
                return self.powi(n);
            }
        }
        (Self::from_rational(e) * self.ln()).exp()
    }
    fn max_abs(self, other: Self) -> Self {
        let (a, b) = (self.abs(), other.abs());
        if a > b {
            a
        } else {
            b
        }
    }
    fn is_finite(self) -> bool {
        self.to_f64().is_finite()
    }
}

impl Real for f64 {
    fn from_f64(x: f64) -> Self {
        x
    }
    fn from_rational(q: &BigRational) -> Self {
        q.to_f64().unwrap_or(f64::NAN)
    }
    fn to_f64(self) -> f64 {
        self
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn ln(self) -> Self {
        f64::ln(self)
    }
    fn abs(self) -> Self {
        f64::abs(self)
    }
    fn epsilon() -> f64 {
        f64::EPSILON
    }
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi)/2`.
#[derive(Clone, Copy, Default, PartialEq)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

const LN2: Dd = Dd {
    hi: std::f64::consts::LN_2,
    lo: 2.319_046_813_846_299_6e-17,
};

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

impl Dd {
    pub const fn new(hi: f64) -> Self {
        Dd { hi, lo: 0.0 }
    }

    fn ldexp(self, e: i32) -> Self {
        let s = 2f64.powi(e);
        Dd {
            hi: self.hi * s,
            lo: self.lo * s,
        }
    }

    fn from_bigint(n: &BigInt) -> Self {
        let hi = n.to_f64().unwrap_or(f64::NAN);
        if !hi.is_finite() {
            return Dd::new(hi);
        }
        let rem = n - BigInt::from_f64(hi).unwrap_or_default();
        let lo = rem.to_f64().unwrap_or(0.0);
        let (h, l) = quick_two_sum(hi, lo);
        Dd { hi: h, lo: l }
    }
}

impl fmt::Debug for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Dd({:e} + {:e})", self.hi, self.lo)
    }
}

impl fmt::Display for Dd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:e}", self.hi + self.lo)
    }
}

impl PartialOrd for Dd {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        match self.hi.partial_cmp(&other.hi) {
            Some(std::cmp::Ordering::Equal) => self.lo.partial_cmp(&other.lo),
            o => o,
        }
    }
}

impl Add for Dd {
    type Output = Dd;
    fn add(self, o: Dd) -> Dd {
        let (s1, s2) = two_sum(self.hi, o.hi);
        let (t1, t2) = two_sum(self.lo, o.lo);
        let s2 = s2 + t1;
        let (s1, s2) = quick_two_sum(s1, s2);
        let s2 = s2 + t2;
        let (hi, lo) = quick_two_sum(s1, s2);
        Dd { hi, lo }
    }
}

impl Neg for Dd {
    type Output = Dd;
    fn neg(self) -> Dd {
        Dd {
            hi: -self.hi,
            lo: -self.lo,
        }
    }
}

impl Sub for Dd {
    type Output = Dd;
    fn sub(self, o: Dd) -> Dd {
        self + (-o)
    }
}

impl Mul for Dd {
    type Output = Dd;
    fn mul(self, o: Dd) -> Dd {
        let (p1, p2) = two_prod(self.hi, o.hi);
        let p2 = p2 + (self.hi * o.lo + self.lo * o.hi);
        let (hi, lo) = quick_two_sum(p1, p2);
        Dd { hi, lo }
    }
}

impl Div for Dd {
    type Output = Dd;
    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self - o * Dd::new(q1);
        let q2 = r.hi / o.hi;
        let r = r - o * Dd::new(q2);
        let q3 = r.hi / o.hi;
        let (hi, lo) = quick_two_sum(q1, q2);
        Dd { hi, lo } + Dd::new(q3)
    }
}

impl AddAssign for Dd {
    fn add_assign(&mut self, o: Dd) {
        *self = *self + o;
    }
}
impl SubAssign for Dd {
    fn sub_assign(&mut self, o: Dd) {
        *self = *self - o;
    }
}
impl MulAssign for Dd {
    fn mul_assign(&mut self, o: Dd) {
        *self = *self * o;
    }
}

impl Real for Dd {
    fn from_f64(x: f64) -> Self {
        Dd::new(x)
    }

    fn from_rational(q: &BigRational) -> Self {
        // Scale huge numerators/denominators down so both fit in f64 range.
        let (n, d) = (q.numer(), q.denom());
        let nb = n.bits() as i64;
        let db = d.bits() as i64;
        let shift = |x: &BigInt, bits: i64| -> (Dd, i32) {
            if bits > 1000 {
                let s = (bits - 900) as usize;
                (Dd::from_bigint(&(x >> s)), s as i32)
            } else {
                (Dd::from_bigint(x), 0)
            }
        };
        let (nd, ns) = shift(n, nb);
        let (dd, ds) = shift(d, db);
        (nd / dd).ldexp(ns - ds)
    }

    fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    fn exp(self) -> Self {
        if self.hi > 709.0 {
            return Dd::new(f64::INFINITY);
        }
        if self.hi < -745.0 {
            return Dd::new(0.0);
        }
        let k = (self.hi / LN2.hi).round();
        let r = self - LN2 * Dd::new(k);
        // exp(r) = (exp(r / 2^10))^(2^10)
        let r = r.ldexp(-10);
        let mut term = Dd::new(1.0);
        let mut sum = Dd::new(1.0);
        for i in 1..=14 {
            term = term * r / Dd::new(i as f64);
            sum += term;
            if term.hi.abs() < 1e-36 {
                break;
            }
        }
        for _ in 0..10 {
            sum = sum * sum;
        }
        sum.ldexp(k as i32)
    }

    fn ln(self) -> Self {
        if self.hi <= 0.0 {
            return Dd::new(f64::NAN);
        }
        let mut y = Dd::new(self.hi.ln());
        for _ in 0..2 {
            y = y + self * (-y).exp() - Dd::new(1.0);
        }
        y
    }

    fn abs(self) -> Self {
        if self.hi < 0.0 {
            -self
        } else {
            self
        }
    }

    fn epsilon() -> f64 {
        4.93e-32
    }
}

/// `|x|` of a rational as f64, for magnitude checks.
pub(crate) fn rational_abs_f64(q: &BigRational) -> f64 {
    q.abs().to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dd_close(a: Dd, b: f64, tol: f64) -> bool {
        ((a - Dd::new(b)).to_f64()).abs() <= tol * b.abs().max(1.0)
    }

    #[test]
    fn dd_arithmetic_beats_f64() {
        let third = Dd::new(1.0) / Dd::new(3.0);
        let back = third * Dd::new(3.0) - Dd::new(1.0);
        assert!(back.to_f64().abs() < 1e-31);
    }

    #[test]
    fn dd_exp_ln_roundtrip() {
        for &x in &[1e-3, 0.5, 1.0, 2.0, 10.0, 123.25] {
            let v = Dd::new(x);
            let r = v.ln().exp() - v;
            assert!(r.to_f64().abs() < 1e-29 * x, "x={x} r={r:?}");
        }
        assert!(dd_close(Dd::new(1.0).exp(), std::f64::consts::E, 1e-15));
        // ln 100 to 30 digits
        let ln100 = Dd::new(100.0).ln();
        let expected = Dd {
            hi: 4.605_170_185_988_092,
            lo: 0.0,
        };
        assert!((ln100 - expected).to_f64().abs() < 1e-15);
    }

    #[test]
    fn dd_from_rational_exact_tenth() {
        let q = BigRational::new(BigInt::from(1), BigInt::from(10));
        let v = Dd::from_rational(&q) * Dd::new(10.0) - Dd::new(1.0);
        assert!(v.to_f64().abs() < 1e-31);
    }

    #[test]
    fn powr_matches_f64() {
        let e = BigRational::new(BigInt::from(2), BigInt::from(3));
        let v = 0.1f64.powr(&e);
        assert!((v - 0.1f64.powf(2.0 / 3.0)).abs() < 1e-15);
        let w = Dd::new(0.1).powr(&e).to_f64();
        assert!((w - 0.1f64.powf(2.0 / 3.0)).abs() < 1e-15);
    }
}
