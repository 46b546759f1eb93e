#![allow(dead_code)]

use std::path::PathBuf;

use dulac::jets::UJet;
use dulac::normalform::PolyVectorField;
use dulac::ring::{q, ExpKey, ExpPoly, Poly2, RatFunc, Q};
use proptest::prelude::*;
use rand::Rng;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

pub fn jc(k: usize, order: u32, c: Q) -> UJet {
    UJet::constant(k, order, c)
}

pub fn rand_q<R: Rng>(rng: &mut R, num: i64, den: i64) -> Q {
    let n = rng.gen_range(-num..=num);
    let d = rng.gen_range(1..=den);
    q(n, d)
}

/// Coefficient `c0 + c1 a + c2 b`, sometimes divided by `(1 + a - 2b)`.
pub fn rand_coeff<R: Rng>(rng: &mut R) -> RatFunc {
    let mut p = Poly2::constant(rand_q(rng, 5, 4));
    if rng.gen_bool(0.5) {
        p = p.add(&Poly2::monomial(rand_q(rng, 3, 3), 1, 0));
    }
    if rng.gen_bool(0.3) {
        p = p.add(&Poly2::monomial(rand_q(rng, 3, 3), 0, 1));
    }
    let c = RatFunc::from_poly(p);
    if rng.gen_bool(0.25) {
        let den = Poly2::one()
            .add(&Poly2::a())
            .sub(&Poly2::b().scale(&q(2, 1)));
        c.div(&RatFunc::from_poly(den))
    } else {
        c
    }
}

/// Random element with `t`-degree `<= 4` and `|n1|, |n2| <= 3`.
pub fn rand_exppoly<R: Rng>(rng: &mut R) -> ExpPoly {
    let n = rng.gen_range(1..=4);
    let mut p = ExpPoly::zero();
    for _ in 0..n {
        let key = ExpKey::new(
            rng.gen_range(0..=4),
            rng.gen_range(-3..=3),
            rng.gen_range(-3..=3),
        );
        p.add_term(key, rand_coeff(rng));
    }
    p
}

/// Element of the barred subring: polynomial coefficients, and rates with
/// `n1 + n2 > 0` unless both vanish. Sums of such rates keep the property, so
/// products and integrals never acquire a pole on `a = b`.
pub fn rand_rbar_seed<R: Rng>(rng: &mut R) -> ExpPoly {
    let n = rng.gen_range(1..=3);
    let mut p = ExpPoly::zero();
    for _ in 0..n {
        let (n1, n2) = loop {
            let r = (rng.gen_range(-2..=2), rng.gen_range(-2..=2));
            if r == (0, 0) || r.0 + r.1 > 0 {
                break r;
            }
        };
        let c = RatFunc::from_poly(Poly2::constant(rand_q(rng, 4, 3)));
        p.add_term(ExpKey::new(rng.gen_range(0..=2), n1, n2), c);
    }
    p
}

/// Proptest strategy for the same family as [`rand_exppoly`] with constant
/// or linear coefficients.
pub fn exppoly_strategy() -> impl Strategy<Value = ExpPoly> {
    prop::collection::vec(
        (
            0..=4u32,
            -3..=3i32,
            -3..=3i32,
            -6..=6i64,
            1..=4i64,
            -2..=2i64,
        ),
        1..5,
    )
    .prop_map(|ts| {
        let mut p = ExpPoly::zero();
        for (j, n1, n2, c, d, ca) in ts {
            let poly = Poly2::constant(q(c, d)).add(&Poly2::monomial(q(ca, 1), 1, 0));
            p.add_term(ExpKey::new(j, n1, n2), RatFunc::from_poly(poly));
        }
        p
    })
}

/// Diagonal field with eigenvalues `(1, -2/3, -1/2)`, one centre variable
/// and random coefficients on every monomial of normal degree `2..=deg+1`.
pub fn random_case1_field<R: Rng>(rng: &mut R, degree: u32, jet_order: u32) -> PolyVectorField {
    let mut x = PolyVectorField::diagonal(3, 1, jet_order, degree, &q(2, 3), &q(1, 2));
    for total in 2..=degree + 1 {
        for n1 in 0..=total {
            for n2 in 0..=total - n1 {
                let e = vec![n1, n2, total - n1 - n2];
                for comp in 0..4 {
                    if rng.gen_bool(0.3) {
                        let mut c = UJet::zero(1, jet_order);
                        for p in 0..=jet_order {
                            if rng.gen_bool(0.5) {
                                c.add_term(vec![p], rand_q(rng, 3, 4));
                            }
                        }
                        x.add_term(comp, e.clone(), c);
                    }
                }
            }
        }
    }
    x
}
