//! Resonant monomials for the eigenvalues `(1, -α0, -β0)`.

use std::collections::BTreeSet;
use std::fmt;

use num::{BigInt, One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ring::{rational_to_string, Q};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResonanceError {
    #[error("eigenvalues must satisfy alpha0 >= beta0 > 0 (got {0}, {1})")]
    InvalidOrdering(String, String),
    #[error("index families are defined only when alpha0/beta0 is an integer")]
    WrongCase,
    #[error("eigenvalue data too large for this computation")]
    Overflow,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Case {
    /// `α0/β0 ∉ ℕ`; `α0 = p1/q1`, `β0 = p2/q2` in lowest terms.
    Case1 { p1: u64, q1: u64, p2: u64, q2: u64 },
    /// `α0 = m p/q`, `β0 = p/q`.
    Case2 { m: u64, p: u64, q: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EigenData {
    pub alpha0: Q,
    pub beta0: Q,
    pub case: Case,
}

impl EigenData {
    pub fn is_case2(&self) -> bool {
        matches!(self.case, Case::Case2 { .. })
    }
}

fn to_u64(n: &BigInt) -> Result<u64, ResonanceError> {
    n.to_u64().ok_or(ResonanceError::Overflow)
}

pub fn classify(alpha0: &Q, beta0: &Q) -> Result<EigenData, ResonanceError> {
    if !beta0.is_positive() || alpha0 < beta0 {
        return Err(ResonanceError::InvalidOrdering(
            rational_to_string(alpha0),
            rational_to_string(beta0),
        ));
    }
    let ratio = alpha0 / beta0;
    let case = if ratio.is_integer() {
        Case::Case2 {
            m: to_u64(&ratio.to_integer())?,
            p: to_u64(beta0.numer())?,
            q: to_u64(beta0.denom())?,
        }
    } else {
        Case::Case1 {
            p1: to_u64(alpha0.numer())?,
            q1: to_u64(alpha0.denom())?,
            p2: to_u64(beta0.numer())?,
            q2: to_u64(beta0.denom())?,
        }
    };
    Ok(EigenData {
        alpha0: alpha0.clone(),
        beta0: beta0.clone(),
        case,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Component {
    X,
    Y,
    Z,
    U,
}

impl Component {
    pub fn name(self) -> &'static str {
        match self {
            Component::X => "x",
            Component::Y => "y",
            Component::Z => "z",
            Component::U => "u",
        }
    }
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ResonantMonomial {
    pub component: Component,
    pub exponents: [u32; 3],
}

/// `⟨λ(0), n⟩ - λ_i(0)` for `λ(0) = (1, -α0, -β0)`; `U` uses `λ_i = 0`.
pub fn resonance_defect(alpha0: &Q, beta0: &Q, n: [u32; 3], comp: Component) -> Q {
    let dot = Q::from_integer(n[0].into())
        - alpha0 * Q::from_integer(n[1].into())
        - beta0 * Q::from_integer(n[2].into());
    match comp {
        Component::X => dot - Q::one(),
        Component::Y => dot + alpha0,
        Component::Z => dot + beta0,
        Component::U => dot,
    }
}

pub fn is_resonant(eig: &EigenData, n: [u32; 3], comp: Component) -> bool {
    resonance_defect(&eig.alpha0, &eig.beta0, n, comp).is_zero()
}

/// All resonant monomials of total degree `2..=d`, by a scan of the simplex.
pub fn enumerate_resonances(eig: &EigenData, d: u32) -> BTreeSet<ResonantMonomial> {
    let mut out = BTreeSet::new();
    for total in 2..=d {
        for n1 in 0..=total {
            for n2 in 0..=total - n1 {
                let n = [n1, n2, total - n1 - n2];
                for comp in [Component::X, Component::Y, Component::Z, Component::U] {
                    if is_resonant(eig, n, comp) {
                        out.insert(ResonantMonomial {
                            component: comp,
                            exponents: n,
                        });
                    }
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IndexFamilies {
    /// `n1 >= -1`, `q n2 - m n1 >= 0`: terms of the `y` equation
    pub n1: BTreeSet<(i64, i64)>,
    /// `n1 >= 0`, `q n2 - m n1 >= -1`: terms of the `z` equation
    pub n2: BTreeSet<(i64, i64)>,
    /// `n1 >= 0`, `q n2 - m n1 >= 0`: terms of the `u` equation
    pub n3: BTreeSet<(i64, i64)>,
}

/// Monomial exponents `(x, y, z)` induced by an index pair in the given family
/// (1, 2 or 3), or `None` if the pair is outside the family.
pub fn family_monomial(m: i64, p: i64, q: i64, family: u8, n1: i64, n2: i64) -> Option<[u32; 3]> {
    if (n1, n2) == (0, 0) || n2 < 0 {
        return None;
    }
    let w = q * n2 - m * n1;
    let (ey, ez) = match family {
        1 if n1 >= -1 && w >= 0 => (1 + n1, w),
        2 if n1 >= 0 && w >= -1 => (n1, 1 + w),
        3 if n1 >= 0 && w >= 0 => (n1, w),
        _ => return None,
    };
    Some([(p * n2) as u32, ey as u32, ez as u32])
}

pub fn index_families(eig: &EigenData, d: u32) -> Result<IndexFamilies, ResonanceError> {
    let Case::Case2 { m, p, q } = eig.case else {
        return Err(ResonanceError::WrongCase);
    };
    let (m, p, q) = (m as i64, p as i64, q as i64);
    let mut fam = IndexFamilies::default();
    let d = d as i64;
    for n2 in 0..=d {
        for n1 in -1..=d {
            for f in 1..=3u8 {
                if let Some(e) = family_monomial(m, p, q, f, n1, n2) {
                    let deg = e.iter().map(|&v| v as i64).sum::<i64>();
                    if (2..=d).contains(&deg) {
                        match f {
                            1 => fam.n1.insert((n1, n2)),
                            2 => fam.n2.insert((n1, n2)),
                            _ => fam.n3.insert((n1, n2)),
                        };
                    }
                }
            }
        }
    }
    Ok(fam)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::q;

    fn mono(c: Component, e: [u32; 3]) -> ResonantMonomial {
        ResonantMonomial {
            component: c,
            exponents: e,
        }
    }

    #[test]
    fn classification() {
        let e = classify(&q(2, 3), &q(1, 2)).unwrap();
        assert_eq!(
            e.case,
            Case::Case1 {
                p1: 2,
                q1: 3,
                p2: 1,
                q2: 2
            }
        );
        let e = classify(&q(1, 1), &q(1, 2)).unwrap();
        assert_eq!(e.case, Case::Case2 { m: 2, p: 1, q: 2 });
        let e = classify(&q(3, 1), &q(3, 1)).unwrap();
        assert_eq!(e.case, Case::Case2 { m: 1, p: 3, q: 1 });
        assert!(classify(&q(1, 3), &q(1, 2)).is_err());
        assert!(classify(&q(1, 1), &q(0, 1)).is_err());
    }

    #[test]
    fn case1_y_resonances() {
        let e = classify(&q(2, 3), &q(1, 2)).unwrap();
        let r = enumerate_resonances(&e, 6);
        assert!(r.contains(&mono(Component::Y, [2, 4, 0])));
        assert!(r.contains(&mono(Component::Y, [1, 1, 2])));
        assert!(enumerate_resonances(&e, 1).is_empty());
        for m in &r {
            assert!(resonance_defect(&e.alpha0, &e.beta0, m.exponents, m.component).is_zero());
        }
    }

    #[test]
    fn case2_z_power_in_y_equation() {
        let e = classify(&q(1, 1), &q(1, 2)).unwrap();
        let r = enumerate_resonances(&e, 4);
        assert!(r.contains(&mono(Component::Y, [0, 0, 2])));
    }

    #[test]
    fn families() {
        let e = classify(&q(1, 1), &q(1, 2)).unwrap();
        let f = index_families(&e, 4).unwrap();
        assert!(f.n1.contains(&(-1, 0)));
        for s in [&f.n1, &f.n2, &f.n3] {
            assert!(!s.contains(&(0, 0)));
        }
        let e = classify(&q(1, 1), &q(1, 1)).unwrap();
        let f = index_families(&e, 4).unwrap();
        assert!(f.n3.contains(&(1, 1)));
        let c1 = classify(&q(2, 3), &q(1, 2)).unwrap();
        assert_eq!(index_families(&c1, 4), Err(ResonanceError::WrongCase));
    }

    #[test]
    fn families_match_resonances() {
        let e = classify(&q(3, 2), &q(1, 2)).unwrap();
        let Case::Case2 { m, p, q: qq } = e.case else {
            panic!()
        };
        let d = 8;
        let fam = index_families(&e, d).unwrap();
        let res = enumerate_resonances(&e, d);
        for (f, set, comp) in [
            (1u8, &fam.n1, Component::Y),
            (2, &fam.n2, Component::Z),
            (3, &fam.n3, Component::U),
        ] {
            let from_fam: BTreeSet<[u32; 3]> = set
                .iter()
                .map(|&(a, b)| family_monomial(m as i64, p as i64, qq as i64, f, a, b).unwrap())
                .collect();
            let direct: BTreeSet<[u32; 3]> = res
                .iter()
                .filter(|r| r.component == comp)
                .map(|r| r.exponents)
                .collect();
            assert_eq!(from_fam, direct, "family {f}");
        }
    }
}
