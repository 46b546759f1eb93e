mod common;

use dulac::ring::{
    default_limit_order, limit_params_zero, omega_basis, omega_fn, q, ExpPoly, OmegaPoly, Q,
};
use num::Zero;
use proptest::prelude::*;

use common::exppoly_strategy;

fn rel(x: f64, y: f64) -> f64 {
    (x - y).abs() / y.abs().max(1.0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn differentiate_inverts_integrate(p in exppoly_strategy()) {
        prop_assert_eq!(p.integrate().differentiate(), p);
    }

    #[test]
    fn integral_vanishes_at_zero(p in exppoly_strategy(), an in 1..40i64, bn in 1..40i64) {
        // at t = 0 every exponential is 1, so the value is exact in Q
        let i = p.integrate();
        prop_assert!(i.at_t_zero().is_zero());
        let (a, b) = (q(an, 41), q(bn, 43));
        let mut v = Q::zero();
        for (k, c) in i.terms() {
            if k.j == 0 {
                match c.eval_exact(&a, &b) {
                    Ok(x) => v += x,
                    Err(_) => return Ok(()),
                }
            }
        }
        prop_assert!(v.is_zero());
    }

    #[test]
    fn omega_basis_round_trip(p in exppoly_strategy(), a in 0.1f64..0.9, b in 0.1f64..0.9, t in 0.0f64..3.0) {
        let w = omega_basis(&p);
        prop_assert_eq!(OmegaPoly::to_exppoly(&w), p.clone());
        if let (Ok(x), Ok(y)) = (p.eval_direct(a, b, t), w.eval(a, b, t)) {
            let scale: f64 = p.terms().filter_map(|(_, c)| c.eval(a, b).ok()).map(f64::abs).sum();
            prop_assert!((x - y).abs() <= 1e-10 * (x.abs().max(scale * (6.0 * t).exp())), "{x} vs {y}");
        }
    }

    #[test]
    fn closure_under_calculus(p in exppoly_strategy()) {
        // stays an ExpPoly by construction; make sure repeated use is well formed
        let i2 = p.integrate().integrate();
        prop_assert_eq!(i2.differentiate().differentiate(), p.clone());
        prop_assert_eq!(p.mul(&ExpPoly::one()), p);
    }

    #[test]
    fn limit_survives_integration(p in exppoly_strategy()) {
        if limit_params_zero(&p, default_limit_order(&p)).is_ok() {
            let i = p.integrate();
            prop_assert!(limit_params_zero(&i, default_limit_order(&i)).is_ok());
        }
    }

    #[test]
    fn omega_continuous_at_branch(k in -1e-6f64..1e-6, t in 0.0f64..10.0) {
        // |Ω(κ,t) - t| ≤ C |κ| with C = t²/2 · e^{|κ| t}
        let c = 0.5 * t * t * (k.abs() * t).exp() * 1.01;
        prop_assert!((omega_fn(k, t) - t).abs() <= c * k.abs() + 1e-15 * t);
    }
}

#[test]
fn round_trip_on_fixed_elements() {
    use dulac::ring::{ExpKey, Poly2, RatFunc};
    let mut p = ExpPoly::zero();
    p.add_term(
        ExpKey::new(2, 1, -1),
        RatFunc::from_poly(Poly2::constant(q(3, 2))),
    );
    p.add_term(ExpKey::new(0, 0, 2), RatFunc::from_poly(Poly2::a()));
    let w = omega_basis(&p);
    for (a, b, t) in [(0.3, 0.7, 1.0), (0.5, 0.2, 2.5)] {
        let x = p.eval_direct(a, b, t).unwrap();
        let y = w.eval(a, b, t).unwrap();
        assert!(rel(x, y) < 1e-12);
    }
}
