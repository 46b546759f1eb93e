//! Degree-by-degree normal form of a pre-normal-form field
//! `ẋ = A(u)x + f(x,u)`, `u̇ = g(x,u)` with `A(u) = diag(1, -α(u), -β(u))`.
//!
//! At each degree the modified homological operator is diagonal on
//! monomials, with divisor `⟨λ(u), α⟩ - λ_i(u)`. A unit divisor removes the
//! term; otherwise the Weierstrass remainder stays in the normal form. The
//! resonant part of the `x` equation is then removed by a time rescaling.

mod field;
mod jetpoly;

pub use field::{component_name, unit_vector, PolyVectorField};
pub use jetpoly::{normal_degree, JetPoly};

use num::{One, Zero};
use thiserror::Error;

use crate::jets::{invert_unit, weierstrass_divide, JetError, UJet};
use crate::resonance::ResonanceError;
use crate::ring::Q;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NormalFormError {
    #[error("invalid vector field: {0}")]
    InvalidField(String),
    #[error("x-component is not of the form x(1 + h) with h vanishing at the origin")]
    NonUnitTimeFactor,
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Resonance(#[from] ResonanceError),
}

/// Homogeneous generator of normal degree `degree + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub degree: u32,
    pub field: PolyVectorField,
}

/// Divisor `⟨λ(u), e⟩ - λ_i(u)` of the homological operator on `x^e ∂_i`
/// (`λ_i = 0` for a centre component).
pub fn divisor(lambdas: &[UJet], e: &[u32], comp: usize) -> UJet {
    let mut f = lambdas[0].like_zero();
    for (l, &n) in lambdas.iter().zip(e) {
        if n > 0 {
            f = f.add(&l.scale(&Q::from_integer(n.into())));
        }
    }
    if comp < lambdas.len() {
        f = f.sub(&lambdas[comp]);
    }
    f
}

/// Solve the homological equation on the degree-`d` slice of `x`.
///
/// Returns the generator and the part of the slice that stays.
pub fn cohom_solve(
    x: &PolyVectorField,
    d: u32,
) -> Result<(Generator, PolyVectorField), NormalFormError> {
    let lambdas = x.lambdas();
    let slice = x.slice(d);
    let mut u = slice.like_zero();
    let mut kept = slice.like_zero();
    for i in 0..slice.dim() {
        for (e, big_f) in slice.comp(i).terms() {
            let f = divisor(&lambdas, e, i);
            if f.is_unit() {
                u.add_term(i, e.clone(), big_f.mul(&invert_unit(&f)?));
                continue;
            }
            match weierstrass_divide(big_f, &f) {
                Ok(div) => {
                    u.add_term(i, e.clone(), div.q);
                    kept.add_term(i, e.clone(), div.r);
                }
                Err(JetError::ZeroJet) => kept.add_term(i, e.clone(), big_f.clone()),
                Err(err) => return Err(err.into()),
            }
        }
    }
    Ok((
        Generator {
            degree: d,
            field: u,
        },
        kept,
    ))
}

/// Truncated Lie series `exp(L_U) X = Σ_j ad_U^j X / j!`.
pub fn apply_generator(x: &PolyVectorField, u: &Generator) -> PolyVectorField {
    let mut acc = x.clone();
    let mut term = x.clone();
    let mut j = 1i64;
    loop {
        term = u
            .field
            .bracket(&term)
            .scale_q(&(Q::one() / Q::from_integer(j.into())));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
        j += 1;
    }
    acc
}

/// `exp(U) s = Σ_j U^j(s) / j!`: the pull-back of a scalar by the time-1 flow.
pub fn apply_generator_scalar(s: &JetPoly, u: &Generator) -> JetPoly {
    let mut acc = s.clone();
    let mut term = s.clone();
    let mut j = 1i64;
    loop {
        term = u
            .field
            .derive(&term)
            .scale_q(&(Q::one() / Q::from_integer(j.into())));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
        j += 1;
    }
    acc
}

/// Divide the field by `1 + h` where the `x` component is `x (1 + h)`.
pub fn rescale_time(x: &PolyVectorField) -> Result<PolyVectorField, NormalFormError> {
    let one_plus_h = x
        .comp(0)
        .div_var(0)
        .ok_or(NormalFormError::NonUnitTimeFactor)?;
    let inv = one_plus_h
        .inverse_one_plus()
        .ok_or(NormalFormError::NonUnitTimeFactor)?;
    Ok(x.mul_scalar(&inv))
}

/// Output of [`normalize`]: `field = time_factor · Φ^* X` where `Φ` is the
/// composition `φ_1 ∘ φ_2 ∘ ...` of the time-one flows of the generators.
#[derive(Clone, Debug)]
pub struct NormalForm {
    pub field: PolyVectorField,
    pub generators: Vec<Generator>,
    pub time_factor: JetPoly,
}

pub fn normalize(x: &PolyVectorField, degree: u32) -> Result<NormalForm, NormalFormError> {
    x.validate()?;
    let mut x = x.with_degree(degree);
    let n = x.normal_dim();
    let mut s = JetPoly::zero(n, x.centre_dim(), x.jet_order(), degree).one_like();
    let mut gens = Vec::new();

    let mut step =
        |x: &mut PolyVectorField, s: &mut JetPoly, d: u32| -> Result<(), NormalFormError> {
            let (u, _kept) = cohom_solve(x, d)?;
            if !u.field.is_zero() {
                *x = apply_generator(x, &u);
                *s = apply_generator_scalar(s, &u);
                gens.push(u);
            }
            Ok(())
        };

    for d in 1..=degree {
        step(&mut x, &mut s, d)?;
        let xd = x.comp(0).homogeneous(d + 1);
        if xd.is_zero() {
            continue;
        }
        let h = xd.div_var(0).ok_or(NormalFormError::NonUnitTimeFactor)?;
        let inv = h
            .add(&h.one_like())
            .inverse_one_plus()
            .ok_or(NormalFormError::NonUnitTimeFactor)?;
        x = x.mul_scalar(&inv);
        s = s.mul(&inv.with_max_deg(degree));
        // the rescaling feeds new resonant terms into degree d through A(u)
        step(&mut x, &mut s, d)?;
    }
    Ok(NormalForm {
        field: x,
        generators: gens,
        time_factor: s,
    })
}

/// True when every term is either linear or an exact resonance at `u = 0`.
pub fn only_resonant_terms(x: &PolyVectorField) -> bool {
    let lambdas: Vec<UJet> = x.lambdas();
    let lam0: Vec<UJet> = lambdas
        .iter()
        .map(|l| l.like_constant(l.constant_term()))
        .collect();
    x.all_terms()
        .all(|(i, e, _)| normal_degree(e) == 1 || divisor(&lam0, e, i).constant_term().is_zero())
}
