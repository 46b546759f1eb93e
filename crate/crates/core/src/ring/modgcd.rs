//! Univariate gcd over the rationals by images modulo word-size primes.
//!
//! Each image gcd is scaled by `gcd(lc f, lc g)`, the images are combined by
//! Chinese remaindering and a candidate is accepted only after it divides
//! both inputs exactly, so the result never depends on luck with primes.

use num::{BigInt, Integer, One, Signed, ToPrimitive, Zero};

/// Primitive integer polynomial (lowest degree first) proportional to the
/// rational one.
pub(crate) fn primitive_int(c: &[super::Q]) -> Vec<BigInt> {
    let mut l = BigInt::one();
    for x in c {
        l = l.lcm(x.denom());
    }
    let v: Vec<BigInt> = c.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = v.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn primes() -> impl Iterator<Item = u64> {
    static SMALL: std::sync::OnceLock<Vec<u64>> = std::sync::OnceLock::new();
    let first = SMALL.get_or_init(|| {
        (1u64 << 30..1u64 << 31)
            .rev()
            .filter(|&n| is_prime(n))
            .take(64)
            .collect()
    });
    let tail = first.last().copied().unwrap_or(1 << 31);
    first
        .clone()
        .into_iter()
        .chain((1u64 << 29..tail).rev().filter(|&n| is_prime(n)))
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn reduce(c: &BigInt, p: u64) -> u64 {
    c.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

/// Monic gcd in `F_p[x]`.
fn gcd_mod(f: &[u64], g: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (f.to_vec(), g.to_vec());
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let inv = inv_mod(*b.last().unwrap(), p);
        while a.len() >= b.len() {
            let k = a.len() - b.len();
            let c = a.last().unwrap() * inv % p;
            for (i, &x) in b.iter().enumerate() {
                a[i + k] = (a[i + k] + p - c * x % p) % p;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    if let Some(&l) = a.last() {
        let inv = inv_mod(l, p);
        for x in a.iter_mut() {
            *x = *x * inv % p;
        }
    }
    a
}

/// Exact division test in `Z[x]`.
fn divides(h: &[BigInt], f: &[BigInt]) -> bool {
    let mut r = f.to_vec();
    let lc = h.last().unwrap();
    while r.len() >= h.len() {
        let top = r.last().unwrap();
        if top.is_zero() {
            r.pop();
            continue;
        }
        let (qt, rem) = top.div_rem(lc);
        if !rem.is_zero() {
            return false;
        }
        let k = r.len() - h.len();
        for (i, x) in h.iter().enumerate() {
            r[i + k] -= &qt * x;
        }
        r.pop();
    }
    r.iter().all(Zero::is_zero)
}

/// Primitive gcd (positive leading coefficient) of two nonzero primitive
/// integer polynomials.
pub(crate) fn gcd_int(f: &[BigInt], g: &[BigInt]) -> Vec<BigInt> {
    let gamma = f.last().unwrap().gcd(g.last().unwrap());
    let mut modulus = BigInt::one();
    let mut acc: Vec<BigInt> = Vec::new();
    let mut deg = usize::MAX;
    let mut last: Option<Vec<BigInt>> = None;
    for p in primes() {
        let (lf, lg) = (reduce(f.last().unwrap(), p), reduce(g.last().unwrap(), p));
        if lf == 0 || lg == 0 {
            continue;
        }
        let fp: Vec<u64> = f.iter().map(|c| reduce(c, p)).collect();
        let gp: Vec<u64> = g.iter().map(|c| reduce(c, p)).collect();
        let h = gcd_mod(&fp, &gp, p);
        let d = h.len() - 1;
        if d == 0 {
            return vec![BigInt::one()];
        }
        if d > deg {
            continue;
        }
        let s = reduce(&gamma, p);
        let h: Vec<u64> = h.iter().map(|&x| x * s % p).collect();
        let bp = BigInt::from(p);
        if d < deg {
            deg = d;
            modulus = bp;
            acc = h.into_iter().map(BigInt::from).collect();
            last = None;
        } else {
            // x ≡ acc (mod M), x ≡ h (mod p)
            let m_inv = BigInt::from(inv_mod(reduce(&modulus, p), p));
            for (c, &r) in acc.iter_mut().zip(&h) {
                let diff = (BigInt::from(r) - &*c).mod_floor(&bp);
                *c += &modulus * ((diff * &m_inv).mod_floor(&bp));
            }
            modulus *= bp;
        }
        let half: BigInt = &modulus >> 1;
        let sym: Vec<BigInt> = acc
            .iter()
            .map(|c| if c > &half { c - &modulus } else { c.clone() })
            .collect();
        if last.as_ref() == Some(&sym) {
            let cont = sym.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
            let mut cand: Vec<BigInt> = sym.iter().map(|x| x / &cont).collect();
            if cand.last().unwrap().is_negative() {
                cand = cand.into_iter().map(|x| -x).collect();
            }
            if divides(&cand, f) && divides(&cand, g) {
                return cand;
            }
        }
        last = Some(sym);
    }
    unreachable!("ran out of primes")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn common_factor_recovered() {
        // (x + 3)(2x - 5) and (x + 3)(x^2 + 7)
        let f = z(&[-15, 1, 2]);
        let g = z(&[21, 7, 3, 1]);
        assert_eq!(gcd_int(&f, &g), z(&[3, 1]));
    }

    #[test]
    fn coprime_is_one() {
        assert_eq!(gcd_int(&z(&[1, 0, 1]), &z(&[-1, 1])), z(&[1]));
    }

    #[test]
    fn large_coefficients() {
        // the square of a linear form with large coefficients as the common factor
        let l = z(&[-999_999_937, 1_000_003]);
        let mul = |a: &[BigInt], b: &[BigInt]| {
            let mut v = vec![BigInt::zero(); a.len() + b.len() - 1];
            for (i, x) in a.iter().enumerate() {
                for (j, y) in b.iter().enumerate() {
                    v[i + j] += x * y;
                }
            }
            v
        };
        let l2 = mul(&l, &l);
        let f = mul(&l2, &z(&[1, 1]));
        let g = mul(&l2, &z(&[5, 0, 1]));
        assert_eq!(gcd_int(&f, &g), l2);
    }
}
