//! The Ω view of exp-polynomials, and its logarithmic form in `x0`.

use std::collections::BTreeMap;
use std::fmt;

use super::exppoly::{ExpKey, ExpPoly};
use super::poly2::{qi, Poly2};
use super::ratfunc::{Pole, RatFunc};
use crate::real::Real;

/// Below this `|κ t|` the Ω function is summed as a Taylor series.
pub const OMEGA_SERIES_THRESHOLD: f64 = 1e-4;

/// `Ω(κ,t) = (e^{κt} - 1)/κ`, continuous through `κ = 0` where it equals `t`.
pub fn omega_fn<R: Real>(kappa: R, t: R) -> R {
    let z = kappa * t;
    if z.to_f64().abs() < OMEGA_SERIES_THRESHOLD {
        // t Σ z^n/(n+1)!, at least six terms, more when the format needs them
        let mut term = R::one();
        let mut sum = R::one();
        let mut n = 1;
        loop {
            term = term * z / R::from_i64(n + 1);
            sum += term;
            n += 1;
            if n >= 6 && term.to_f64().abs() < R::epsilon() {
                break;
            }
        }
        t * sum
    } else {
        (z.exp() - R::one()) / kappa
    }
}

/// `ω(κ,x) = Ω(κ,-ln x) = (x^{-κ} - 1)/κ`.
pub fn omega_x<R: Real>(kappa: R, x: R) -> R {
    omega_fn(kappa, -x.ln())
}

/// Indeterminates, in exponent-vector order.
pub const OMEGA_VARS: [&str; 5] = ["Omega(a)", "Omega(-a)", "Omega(b)", "Omega(-b)", "T"];

/// Polynomial in `Ω(a), Ω(-a), Ω(b), Ω(-b), T` with rational-function coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct OmegaPoly {
    terms: BTreeMap<[u32; 5], RatFunc>,
}

impl OmegaPoly {
    pub fn zero() -> Self {
        OmegaPoly::default()
    }

    pub fn one() -> Self {
        OmegaPoly::var_pow(5, 0)
    }

    fn var_pow(var: usize, n: u32) -> Self {
        let mut e = [0u32; 5];
        if var < 5 {
            e[var] = n;
        }
        let mut p = OmegaPoly::zero();
        p.add_term(e, RatFunc::one());
        p
    }

    pub fn add_term(&mut self, e: [u32; 5], c: RatFunc) {
        if c.is_zero() {
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

    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 5], &RatFunc)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &OmegaPoly) -> OmegaPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn mul(&self, o: &OmegaPoly) -> OmegaPoly {
        let mut out = OmegaPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let mut e = [0u32; 5];
                for i in 0..5 {
                    e[i] = e1[i] + e2[i];
                }
                out.add_term(e, c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &RatFunc) -> OmegaPoly {
        let mut out = OmegaPoly::zero();
        for (e, v) in &self.terms {
            out.add_term(*e, v.mul(c));
        }
        out
    }

    /// Rewrite an exp-polynomial with `e^{±at} = 1 ± aΩ(±a)`, same for `b`, `t = T`.
    pub fn from_exppoly(p: &ExpPoly) -> OmegaPoly {
        // (1 + aΩ(a)), (1 - aΩ(-a)), (1 + bΩ(b)), (1 - bΩ(-b))
        let factor = |var: usize| -> OmegaPoly {
            let sign = if var.is_multiple_of(2) { 1 } else { -1 };
            let param = if var < 2 { Poly2::a() } else { Poly2::b() };
            let mut f = OmegaPoly::one();
            let mut e = [0u32; 5];
            e[var] = 1;
            f.add_term(e, RatFunc::from_poly(param.scale(&qi(sign))));
            f
        };
        let base: Vec<OmegaPoly> = (0..4).map(factor).collect();
        let pow = |p: &OmegaPoly, n: u32| {
            let mut acc = OmegaPoly::one();
            for _ in 0..n {
                acc = acc.mul(p);
            }
            acc
        };
        let mut out = OmegaPoly::zero();
        for (k, c) in p.terms() {
            let ea = if k.n1 >= 0 {
                pow(&base[0], k.n1 as u32)
            } else {
                pow(&base[1], (-k.n1) as u32)
            };
            let eb = if k.n2 >= 0 {
                pow(&base[2], k.n2 as u32)
            } else {
                pow(&base[3], (-k.n2) as u32)
            };
            let t = OmegaPoly::var_pow(4, k.j);
            out = out.add(&ea.mul(&eb).mul(&t).scale(c));
        }
        out
    }

    /// Expand back to exp-monomial form.
    pub fn to_exppoly(&self) -> ExpPoly {
        let basis = [
            ExpPoly::omega(1, 0),
            ExpPoly::omega(-1, 0),
            ExpPoly::omega(0, 1),
            ExpPoly::omega(0, -1),
            ExpPoly::t(),
        ];
        let mut out = ExpPoly::zero();
        for (e, c) in &self.terms {
            let mut m = ExpPoly::constant(c.clone());
            for i in 0..5 {
                m = m.mul(&basis[i].pow(e[i]));
            }
            out = out.add(&m);
        }
        out
    }

    /// Evaluate with the two-branch Ω formula.
    pub fn eval<R: Real>(&self, a: R, b: R, t: R) -> Result<R, Pole> {
        let vals = [
            omega_fn(a, t),
            omega_fn(-a, t),
            omega_fn(b, t),
            omega_fn(-b, t),
            t,
        ];
        self.eval_with(a, b, &vals)
    }

    fn eval_with<R: Real>(&self, a: R, b: R, vals: &[R; 5]) -> Result<R, Pole> {
        let mut acc = R::zero();
        for (e, c) in &self.terms {
            let mut m = c.eval(a, b)?;
            for i in 0..5 {
                if e[i] > 0 {
                    m *= vals[i].powi(e[i] as i32);
                }
            }
            acc += m;
        }
        Ok(acc)
    }
}

/// Shorthand for [`OmegaPoly::from_exppoly`].
pub fn omega_basis(p: &ExpPoly) -> OmegaPoly {
    OmegaPoly::from_exppoly(p)
}

impl ExpPoly {
    /// Numerically stable evaluation through the Ω view.
    pub fn eval<R: Real>(&self, a: R, b: R, t: R) -> Result<R, Pole> {
        OmegaPoly::from_exppoly(self).eval(a, b, t)
    }
}

impl fmt::Display for OmegaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_monomials(f, &self.terms, &OMEGA_VARS)
    }
}

impl fmt::Debug for OmegaPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OmegaPoly[{self}]")
    }
}

fn fmt_monomials(
    f: &mut fmt::Formatter<'_>,
    terms: &BTreeMap<[u32; 5], RatFunc>,
    names: &[&str; 5],
) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    let parts: Vec<String> = terms
        .iter()
        .map(|(e, c)| {
            let mut s = c.to_string();
            for i in 0..5 {
                match e[i] {
                    0 => {}
                    1 => s.push_str(&format!("*{}", names[i])),
                    n => s.push_str(&format!("*{}^{}", names[i], n)),
                }
            }
            s
        })
        .collect();
    write!(f, "{}", parts.join(" + "))
}

/// An Ω-polynomial read in the variable `x0 = e^{-t}`: every `Ω(κ,t)`
/// becomes `ω(κ,x0)` and `T` becomes `-ln x0`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct OmegaXExpr {
    poly: OmegaPoly,
}

pub const OMEGA_X_VARS: [&str; 5] = [
    "omega(a, x0)",
    "omega(-a, x0)",
    "omega(b, x0)",
    "omega(-b, x0)",
    "(-ln x0)",
];

impl OmegaXExpr {
    pub fn poly(&self) -> &OmegaPoly {
        &self.poly
    }

    pub fn eval<R: Real>(&self, a: R, b: R, x0: R) -> Result<R, Pole> {
        self.poly.eval(a, b, -x0.ln())
    }
}

pub fn subst_neg_log(p: &ExpPoly) -> OmegaXExpr {
    OmegaXExpr {
        poly: OmegaPoly::from_exppoly(p),
    }
}

impl fmt::Display for OmegaXExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_monomials(f, &self.poly.terms, &OMEGA_X_VARS)
    }
}

impl fmt::Debug for OmegaXExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "OmegaXExpr[{self}]")
    }
}

/// Presentation with one Ω per exponential rate:
/// `Σ c · T^j · (1 + κ Ω(κ))` collected so that every pure exponential
/// `c e^{κt}` reads `c + cκ Ω(κ,t)`. Keys are `(j, n1, n2)`; the zero rate
/// holds the polynomial part.
#[derive(Clone, PartialEq, Eq, Default, Debug)]
pub struct RateOmegaView {
    /// `(j, n1, n2) -> c` standing for `c T^j Ω(n1 a + n2 b)` (or `c T^j` at zero rate)
    pub terms: BTreeMap<ExpKey, RatFunc>,
}

impl RateOmegaView {
    pub fn from_exppoly(p: &ExpPoly) -> Self {
        let mut v = RateOmegaView::default();
        let mut add = |k: ExpKey, c: RatFunc| {
            if c.is_zero() {
                return;
            }
            let s = v
                .terms
                .get(&k)
                .cloned()
                .unwrap_or_else(RatFunc::zero)
                .add(&c);
            if s.is_zero() {
                v.terms.remove(&k);
            } else {
                v.terms.insert(k, s);
            }
        };
        for (k, c) in p.terms() {
            if k.has_zero_rate() {
                add(*k, c.clone());
            } else {
                // c t^j e^{κt} = c t^j + cκ t^j Ω(κ)
                add(ExpKey::new(k.j, 0, 0), c.clone());
                add(*k, c.mul_poly(&k.rate()));
            }
        }
        v
    }

    pub fn eval<R: Real>(&self, a: R, b: R, t: R) -> Result<R, Pole> {
        let mut acc = R::zero();
        for (k, c) in &self.terms {
            let mut m = c.eval(a, b)? * t.powi(k.j as i32);
            if !k.has_zero_rate() {
                let kappa = R::from_i64(k.n1 as i64) * a + R::from_i64(k.n2 as i64) * b;
                m *= omega_fn(kappa, t);
            }
            acc += m;
        }
        Ok(acc)
    }

    /// Render with `Ω(κ, t)` or, when `in_x0`, `ω(κ, x0)` and `-ln x0`.
    /// `rate_name` renders a rate key; the default prints `n1*a + n2*b`.
    pub fn render(&self, in_x0: bool, rate_name: &dyn Fn(i32, i32) -> String) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let (om, tv) = if in_x0 {
            ("omega", "(-ln x0)")
        } else {
            ("Omega", "t")
        };
        let arg = if in_x0 { "x0" } else { "t" };
        let mut parts = Vec::new();
        for (k, c) in &self.terms {
            let mut s = c.to_string();
            match k.j {
                0 => {}
                1 => s.push_str(&format!("*{tv}")),
                j => s.push_str(&format!("*{tv}^{j}")),
            }
            if !k.has_zero_rate() {
                s.push_str(&format!("*{om}({}, {arg})", rate_name(k.n1, k.n2)));
            }
            parts.push(s);
        }
        parts.join(" + ")
    }
}

pub fn default_rate_name(n1: i32, n2: i32) -> String {
    Poly2::linear(n1 as i64, n2 as i64).to_string()
}

impl fmt::Display for RateOmegaView {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(false, &default_rate_name))
    }
}

#[cfg(test)]
mod tests {
    use super::super::poly2::q;
    use super::*;

    #[test]
    fn omega_values() {
        let o = ExpPoly::omega(1, 0);
        let v = o.eval(1.0f64, 0.3, 1.0).unwrap();
        assert!((v - (std::f64::consts::E - 1.0)).abs() < 1e-12);
        let v0 = o.eval(0.0f64, 0.3, 3.0).unwrap();
        assert!((v0 - 3.0).abs() < 1e-15);
    }

    #[test]
    fn exp_a_rewrites_to_one_plus_a_omega() {
        let w = omega_basis(&ExpPoly::exp(1, 0));
        let mut expected = OmegaPoly::one();
        expected.add_term([1, 0, 0, 0, 0], RatFunc::from_poly(Poly2::a()));
        assert_eq!(w, expected);
        let t = omega_basis(&ExpPoly::t());
        assert_eq!(t, OmegaPoly::var_pow(4, 1));
    }

    #[test]
    fn mixed_rate_round_trip() {
        let p = ExpPoly::exp(1, -1);
        let w = omega_basis(&p);
        // (1 + aΩ(a))(1 - bΩ(-b))
        assert_eq!(w.len(), 4);
        assert_eq!(w.to_exppoly(), p);
        for &(a, b, t) in &[(0.37, -1.2, 0.8), (2.0, 0.5, 1.5)] {
            let x = w.eval(a, b, t).unwrap();
            let y = p.eval_direct(a, b, t).unwrap();
            assert!((x - y).abs() < 1e-11 * y.abs());
        }
    }

    #[test]
    fn divided_difference_evaluates_at_tiny_a() {
        // a^{-1}(Ω(a,t) - t) near a = 0
        let ia = RatFunc::new(Poly2::one(), Poly2::a());
        let p = ExpPoly::omega(1, 0).sub(&ExpPoly::t()).scale(&ia);
        let v = p.eval(1e-9f64, 0.7, 2.0).unwrap();
        assert!((v - 2.0).abs() < 1e-5, "{v}");
        let d = p
            .eval(
                crate::real::Dd::new(1e-9),
                crate::real::Dd::new(0.7),
                crate::real::Dd::new(2.0),
            )
            .unwrap();
        assert!((d.to_f64() - 2.0).abs() < 1e-8);
    }

    #[test]
    fn neg_log_substitution() {
        let x = subst_neg_log(&ExpPoly::exp(-1, 0));
        for &(a, x0) in &[(0.3, 0.2), (1.7, 0.9), (-0.4, 0.05)] {
            let v = x.eval(a, 0.1f64, x0).unwrap();
            assert!((v - f64::powf(x0, a)).abs() < 1e-12);
        }
        let o = subst_neg_log(&ExpPoly::omega(1, 0));
        let v = o.eval(0.5f64, 0.0, 0.25).unwrap();
        assert!((v - (0.25f64.powf(-0.5) - 1.0) / 0.5).abs() < 1e-12);
    }

    #[test]
    fn rate_view_collects_single_omega() {
        let c = RatFunc::constant(q(3, 2));
        let p = ExpPoly::omega(1, -2).scale(&c);
        let v = RateOmegaView::from_exppoly(&p);
        assert_eq!(v.terms.len(), 1);
        assert_eq!(v.terms.get(&ExpKey::new(0, 1, -2)), Some(&c));
        assert_eq!(v.render(true, &default_rate_name), "3/2*omega(a - 2*b, x0)");
        let x = v.eval(0.3f64, 0.4, 1.1).unwrap();
        let y = p.eval_direct(0.3f64, 0.4, 1.1).unwrap();
        assert!((x - y).abs() < 1e-12);
    }
}
