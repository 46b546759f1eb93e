use std::fmt;

use num::{One, Zero};

use super::poly2::{Poly2, Q};
use crate::real::Real;

/// Reduced fraction of polynomials in `a`, `b`.
///
/// The denominator is normalized so that its graded-lex leading
/// coefficient is 1, which makes structural equality canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly2,
    den: Poly2,
}

/// A denominator vanished at the evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pole;

impl RatFunc {
    pub fn new(num: Poly2, den: Poly2) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let (num, den) = if den.is_constant() || num.is_constant() {
            (num, den)
        } else {
            let g = num.gcd(&den);
            if g.is_constant() {
                (num, den)
            } else {
                (
                    num.exact_div(&g).expect("gcd divides numerator"),
                    den.exact_div(&g).expect("gcd divides denominator"),
                )
            }
        };
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        let inv = Q::one() / lc;
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn zero() -> Self {
        RatFunc {
            num: Poly2::zero(),
            den: Poly2::one(),
        }
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly2::one())
    }

    pub fn from_poly(p: Poly2) -> Self {
        RatFunc {
            num: p,
            den: Poly2::one(),
        }
        .renormalized()
    }

    pub fn constant(c: Q) -> Self {
        RatFunc::from_poly(Poly2::constant(c))
    }

    fn renormalized(self) -> Self {
        if self.den.is_one() {
            self
        } else {
            RatFunc::new(self.num, self.den)
        }
    }

    pub fn numer(&self) -> &Poly2 {
        &self.num
    }

    pub fn denom(&self) -> &Poly2 {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<Q> {
        match (self.num.constant_value(), self.den.constant_value()) {
            (Some(n), Some(d)) => Some(n / d),
            _ => None,
        }
    }

    /// `num / den` already in lowest terms; only the denominator is scaled.
    fn from_reduced(num: Poly2, den: Poly2) -> Self {
        if num.is_zero() {
            return RatFunc::zero();
        }
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        let inv = Q::one() / lc;
        RatFunc {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn add(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        if self.den == o.den {
            return RatFunc::new(self.num.add(&o.num), self.den.clone());
        }
        // Henrici: only the common part of the denominators can cancel
        let g = self.den.gcd(&o.den);
        if g.is_constant() {
            return RatFunc::from_reduced(
                self.num.mul(&o.den).add(&o.num.mul(&self.den)),
                self.den.mul(&o.den),
            );
        }
        let d1 = self.den.exact_div(&g).expect("gcd divides");
        let d2 = o.den.exact_div(&g).expect("gcd divides");
        let num = self.num.mul(&d2).add(&o.num.mul(&d1));
        let den = self.den.mul(&d2);
        if num.is_zero() {
            return RatFunc::zero();
        }
        let h = num.gcd(&g);
        if h.is_constant() {
            RatFunc::from_reduced(num, den)
        } else {
            RatFunc::from_reduced(
                num.exact_div(&h).expect("gcd divides"),
                den.exact_div(&h).expect("gcd divides"),
            )
        }
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, o: &RatFunc) -> RatFunc {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return RatFunc {
                num: self.num.mul(&o.num),
                den: Poly2::one(),
            };
        }
        // cross-cancel, then the product of reduced parts is reduced
        let cancel = |n: &Poly2, d: &Poly2| -> (Poly2, Poly2) {
            let g = n.gcd(d);
            if g.is_constant() {
                (n.clone(), d.clone())
            } else {
                (
                    n.exact_div(&g).expect("gcd divides"),
                    d.exact_div(&g).expect("gcd divides"),
                )
            }
        };
        let (n1, d2) = cancel(&self.num, &o.den);
        let (n2, d1) = cancel(&o.num, &self.den);
        RatFunc::from_reduced(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn mul_poly(&self, p: &Poly2) -> RatFunc {
        self.mul(&RatFunc::from_poly(p.clone()))
    }

    pub fn scale(&self, c: &Q) -> RatFunc {
        if c.is_zero() {
            return RatFunc::zero();
        }
        RatFunc {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    pub fn inv(&self) -> RatFunc {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, o: &RatFunc) -> RatFunc {
        self.mul(&o.inv())
    }

    pub fn div_poly(&self, p: &Poly2) -> RatFunc {
        RatFunc::new(self.num.clone(), self.den.mul(p))
    }

    /// Order of the pole at the origin along a generic ray: lowest degree
    /// of the denominator minus lowest degree of the numerator.
    pub fn pole_order(&self) -> i64 {
        if self.is_zero() {
            return 0;
        }
        self.den.low_degree().unwrap_or(0) as i64 - self.num.low_degree().unwrap_or(0) as i64
    }

    /// Numerical value; `Err(Pole)` when the denominator is zero at the
    /// point relative to the size of its terms.
    pub fn eval<R: Real>(&self, a: R, b: R) -> Result<R, Pole> {
        let d = self.den.eval(a, b);
        let scale = self.den.eval_abs_scale(a.to_f64(), b.to_f64());
        if d.to_f64().abs() <= 64.0 * f64::EPSILON * scale || d.to_f64() == 0.0 {
            return Err(Pole);
        }
        Ok(self.num.eval(a, b) / d)
    }

    pub fn eval_exact(&self, a: &Q, b: &Q) -> Result<Q, Pole> {
        let d = self.den.eval_exact(a, b);
        if d.is_zero() {
            return Err(Pole);
        }
        Ok(self.num.eval_exact(a, b) / d)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            if self.num.len() > 1 {
                write!(f, "({})", self.num)
            } else {
                write!(f, "{}", self.num)
            }
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc[{self}]")
    }
}

#[cfg(test)]
mod tests {
    use super::super::poly2::{q, qi};
    use super::*;

    #[test]
    fn reduces_common_factor() {
        let num = Poly2::linear(1, 1).mul(&Poly2::a());
        let den = Poly2::linear(1, 1).mul(&Poly2::b()).scale(&qi(3));
        let r = RatFunc::new(num, den);
        assert_eq!(r.numer(), &Poly2::a().scale(&q(1, 3)));
        assert_eq!(r.denom(), &Poly2::b());
    }

    #[test]
    fn sum_cancels_to_canonical_zero() {
        let x = RatFunc::new(Poly2::one(), Poly2::linear(1, -2));
        let y = RatFunc::new(Poly2::one().neg(), Poly2::linear(2, -4)).scale(&qi(2));
        assert!(x.add(&y).is_zero());
    }

    #[test]
    fn eval_detects_pole() {
        let r = RatFunc::new(Poly2::one(), Poly2::a());
        assert!(r.eval(0.0f64, 1.0).is_err());
        assert!((r.eval(0.5f64, 1.0).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn pole_order_along_ray() {
        let r = RatFunc::new(Poly2::b(), Poly2::a().mul(&Poly2::a()));
        assert_eq!(r.pole_order(), 1);
    }
}
