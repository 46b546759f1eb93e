use std::collections::BTreeSet;

use num::ToPrimitive;

use crate::resonance::{Component, EigenData, ResonantMonomial};

/// Exhaustive scan of the cube `[0, D]^3` for resonant monomials of total
/// degree `2..=D`, in integer arithmetic after clearing denominators.
pub fn brute_resonance(eig: &EigenData, d: u32) -> BTreeSet<ResonantMonomial> {
    assert!(d <= 20, "brute-force scan is limited to D <= 20");
    let parts = |q: &crate::ring::Q| {
        (
            q.numer().to_i64().expect("small numerator"),
            q.denom().to_i64().expect("small denominator"),
        )
    };
    let (a1, a2) = parts(&eig.alpha0);
    let (b1, b2) = parts(&eig.beta0);
    let l = a2 * b2;
    // L·λ(0) = (L, -a1 b2, -b1 a2)
    let lam = [l, -a1 * b2, -b1 * a2];
    let mut out = BTreeSet::new();
    for n0 in 0..=d {
        for n1 in 0..=d {
            for n2 in 0..=d {
                let total = n0 + n1 + n2;
                if !(2..=d).contains(&total) {
                    continue;
                }
                let dot = lam[0] * n0 as i64 + lam[1] * n1 as i64 + lam[2] * n2 as i64;
                let comps = [
                    (Component::X, lam[0]),
                    (Component::Y, lam[1]),
                    (Component::Z, lam[2]),
                    (Component::U, 0),
                ];
                for (c, li) in comps {
                    if dot == li {
                        out.insert(ResonantMonomial {
                            component: c,
                            exponents: [n0, n1, n2],
                        });
                    }
                }
            }
        }
    }
    out
}
