use dulac::jets::{invert_unit, weierstrass_divide, UJet};
use dulac::ring::q;
use proptest::prelude::*;

const K: usize = 2;
const J: u32 = 5;

fn jet_strategy() -> impl Strategy<Value = UJet> {
    prop::collection::vec((0..=J, 0..=J, -5..=5i64, 1..=3i64), 0..10).prop_map(|ts| {
        let mut u = UJet::zero(K, J);
        for (e1, e2, n, d) in ts {
            if e1 + e2 <= J {
                u.add_term(vec![e1, e2], q(n, d));
            }
        }
        u
    })
}

/// `c u1^m + (terms of the form u1^i u2^j with j >= 1 or i > m)`
fn divisor_strategy() -> impl Strategy<Value = (UJet, u32)> {
    (0..=3u32, 1..=4i64, jet_strategy()).prop_map(|(m, c, tail)| {
        let mut f = UJet::zero(K, J);
        f.add_term(vec![m, 0], q(c, 1));
        for (e, v) in tail.terms() {
            if e[1] >= 1 || e[0] > m {
                f.add_term(e.clone(), v.clone());
            }
        }
        (f, m)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn division_identity((f, m) in divisor_strategy(), big in jet_strategy()) {
        let d = weierstrass_divide(&big, &f).unwrap();
        prop_assert_eq!(d.m, m);
        let back = d.r.add(&d.q.mul(&f));
        prop_assert!(big.sub(&back).is_zero());
        for (e, _) in d.r.terms() {
            prop_assert!(e[0] < m);
        }
        // deterministic
        prop_assert_eq!(weierstrass_divide(&big, &f).unwrap(), d);
    }

    #[test]
    fn unit_inverse(mut f in jet_strategy(), c in 1..=7i64) {
        let c0 = f.constant_term();
        f.add_term(vec![0, 0], q(c, 2) - c0);
        let g = invert_unit(&f).unwrap();
        prop_assert!(f.mul(&g).sub(&UJet::one(K, J)).is_zero());
    }
}

#[test]
fn non_units_are_rejected() {
    let f = UJet::var(K, J, 0);
    assert!(invert_unit(&f).is_err());
    let z = UJet::zero(K, J);
    assert!(weierstrass_divide(&f, &z).is_err());
}
