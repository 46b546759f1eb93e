//! Limit of an exp-polynomial as both parameters go to zero.
//!
//! Each coefficient is split into pieces that are homogeneous in `(a, b)`
//! and each exponential is expanded in its rate; collecting by total grade,
//! the limit exists when every negative-grade piece cancels and the grade-0
//! piece is a constant (a polynomial in `t` with rational coefficients).
//!
//! Pieces are kept under the substitution `a = 1`: it is a ring map, and on
//! a single grade it loses nothing, so cancellation and constancy can be
//! decided with univariate gcds.

use std::collections::BTreeMap;

use thiserror::Error;

use super::exppoly::ExpPoly;
use super::poly2::{qi, Poly2, Q};
use super::ratfunc::RatFunc;
use super::tpoly::TPoly;
use num::{One, Zero};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LimitError {
    #[error("expression has no limit as (a, b) -> 0")]
    NotInRbar,
    #[error("expansion order {given} is below the pole order {needed}")]
    InsufficientOrder { needed: u32, given: u32 },
}

/// Default truncation: largest pole order + largest power of `t` + 2.
pub fn default_limit_order(p: &ExpPoly) -> u32 {
    (p.max_pole_order() as u32) + p.max_t_degree() + 2
}

pub fn limit_params_zero(p: &ExpPoly, order: u32) -> Result<TPoly, LimitError> {
    let needed = p.max_pole_order() as u32;
    if order < needed {
        return Err(LimitError::InsufficientOrder {
            needed,
            given: order,
        });
    }
    // grade -> t power -> homogeneous rational function of that grade
    let mut acc: BTreeMap<i64, BTreeMap<u32, RatFunc>> = BTreeMap::new();
    let mut push = |g: i64, tp: u32, c: RatFunc| {
        if c.is_zero() {
            return;
        }
        let slot = acc
            .entry(g)
            .or_default()
            .entry(tp)
            .or_insert_with(RatFunc::zero);
        *slot = slot.add(&c);
    };

    for (k, c) in p.terms() {
        let pole = c.pole_order();
        if pole < 0 {
            continue;
        }
        let pieces = graded_pieces(c, pole as u32);
        let rate = k.rate();
        // κ^i t^i / i!
        let mut kpow = Poly2::one();
        let mut fact = Q::one();
        for i in 0..=order.min(pole as u32) {
            if i > 0 {
                kpow = kpow.mul(&rate);
                fact *= qi(i as i64);
                if kpow.is_zero() {
                    break;
                }
            }
            let e_i = RatFunc::from_poly(kpow.at_a_one().scale(&(Q::one() / fact.clone())));
            for (m, piece) in pieces.iter().enumerate() {
                let g = -pole + m as i64 + i as i64;
                if g > 0 {
                    break;
                }
                push(g, k.j + i, piece.mul(&e_i));
            }
        }
    }

    let mut out = Vec::new();
    for (g, by_t) in acc {
        for (tp, c) in by_t {
            if c.is_zero() {
                continue;
            }
            if g < 0 {
                return Err(LimitError::NotInRbar);
            }
            let v = c.constant_value().ok_or(LimitError::NotInRbar)?;
            if out.len() <= tp as usize {
                out.resize(tp as usize + 1, Q::zero());
            }
            out[tp as usize] += v;
        }
    }
    Ok(TPoly::new(out))
}

/// Homogeneous pieces of `c` of grade `-pole, -pole+1, ..., 0`, at `a = 1`.
///
/// With `D = D_low (1 + E)`, the grade-`m` piece is `P_m / D_low^{m+1}` for
/// a polynomial `P_m`, so everything stays polynomial until the final
/// division.
fn graded_pieces(c: &RatFunc, pole: u32) -> Vec<RatFunc> {
    let num = c.numer();
    let den = c.denom();
    let nl = num.low_degree().unwrap_or(0);
    let dl = den.low_degree().unwrap_or(0);
    let d_low = den.homogeneous_part(dl).at_a_one();
    let n = pole as usize + 1;
    let dh: Vec<Poly2> = (0..n)
        .map(|g| den.homogeneous_part(dl + g as u32).at_a_one())
        .collect();
    let nh: Vec<Poly2> = (0..n)
        .map(|i| num.homogeneous_part(nl + i as u32).at_a_one())
        .collect();
    let mut low_pow = vec![Poly2::one()];
    for k in 1..n {
        low_pow.push(low_pow[k - 1].mul(&d_low));
    }
    // 1/(1+E) = Σ S_g / D_low^g
    let mut s = vec![Poly2::one()];
    for g in 1..n {
        let mut v = Poly2::zero();
        for h in 1..=g {
            if dh[h].is_zero() {
                continue;
            }
            v = v.sub(&dh[h].mul(&s[g - h]).mul(&low_pow[h - 1]));
        }
        s.push(v);
    }
    (0..n)
        .map(|m| {
            let mut v = Poly2::zero();
            for i in 0..=m {
                if nh[i].is_zero() {
                    continue;
                }
                v = v.add(&nh[i].mul(&s[m - i]).mul(&low_pow[i]));
            }
            RatFunc::new(v, low_pow[m].mul(&d_low))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::poly2::q;
    use super::*;

    fn inv_a() -> RatFunc {
        RatFunc::new(Poly2::one(), Poly2::a())
    }

    #[test]
    fn omega_tends_to_t() {
        let p = ExpPoly::omega(1, 0);
        let l = limit_params_zero(&p, default_limit_order(&p)).unwrap();
        assert_eq!(l, TPoly::new(vec![q(0, 1), q(1, 1)]));
    }

    #[test]
    fn omega_over_a_has_no_limit() {
        let p = ExpPoly::omega(1, 0).scale(&inv_a());
        assert_eq!(
            limit_params_zero(&p, default_limit_order(&p)),
            Err(LimitError::NotInRbar)
        );
    }

    #[test]
    fn divided_difference_tends_to_half_t_squared() {
        let p = ExpPoly::omega(1, 0).sub(&ExpPoly::t()).scale(&inv_a());
        let l = limit_params_zero(&p, default_limit_order(&p)).unwrap();
        assert_eq!(l, TPoly::new(vec![q(0, 1), q(0, 1), q(1, 2)]));
    }

    #[test]
    fn ratio_direction_dependent_is_rejected() {
        // a/(a+b) depends on the ray
        let p = ExpPoly::constant(RatFunc::new(Poly2::a(), Poly2::linear(1, 1)));
        assert_eq!(limit_params_zero(&p, 4), Err(LimitError::NotInRbar));
    }

    #[test]
    fn order_below_pole_is_reported() {
        let p = ExpPoly::omega(1, 0).sub(&ExpPoly::t()).scale(&inv_a());
        assert!(matches!(
            limit_params_zero(&p, 1),
            Err(LimitError::InsufficientOrder { .. })
        ));
    }

    #[test]
    fn mixed_rate_omega() {
        // Ω(a - 2b, t) -> t
        let p = ExpPoly::omega(1, -2);
        let l = limit_params_zero(&p, default_limit_order(&p)).unwrap();
        assert_eq!(l, TPoly::new(vec![q(0, 1), q(1, 1)]));
    }
}
