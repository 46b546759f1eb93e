use num::One;

use super::fit::{fit_slope, SlopeFit, MIN_SAMPLES};
use super::system::{field_qpolys, PolySystem, QPoly};
use super::taylor::integrate_taylor;
use super::OracleError;
use crate::normalform::{Generator, NormalForm, PolyVectorField};
use crate::real::Real;
use crate::ring::Q;

/// `ṡ = w NF(s)`, `ẇ = -w³ ∇S·NF(s)`: the flow of `NF / S` written as a
/// polynomial system, with `w = 1/S` carried along.
fn rescaled_system<R: Real>(nf: &NormalForm) -> PolySystem<R> {
    let f = field_qpolys(&nf.field);
    let dim = f.len();
    let s = QPoly::from_jetpoly(&nf.time_factor);
    let mut ds_f = QPoly::default();
    for (i, fi) in f.iter().enumerate() {
        ds_f = ds_f.add(&s.deriv(i).mul(fi));
    }
    let mut comps: Vec<QPoly> = f.iter().map(|fi| fi.widen(1).mul_var(dim, 1)).collect();
    comps.push(ds_f.widen(1).mul_var(dim, 3).scale(&-Q::one()));
    PolySystem::from_qpolys(dim + 1, &comps)
}

fn flow<R: Real>(sys: &PolySystem<R>, s: &[R], t: R, tol: f64) -> Result<Vec<R>, OracleError> {
    Ok(integrate_taylor(sys, s, t, tol)?.state)
}

/// `Φ = φ_1 ∘ φ_2 ∘ ...`, each `φ_j` the time-one flow of generator `j`.
pub fn apply_transform<R: Real>(
    generators: &[Generator],
    p: &[R],
    tol: f64,
) -> Result<Vec<R>, OracleError> {
    let mut q = p.to_vec();
    for g in generators.iter().rev() {
        let sys = PolySystem::<R>::from_field(&g.field);
        q = flow(&sys, &q, R::one(), tol)?;
    }
    Ok(q)
}

/// Compare `Φ(flow_{NF/S}(p, T))` with `flow_X(Φ(p), T)` at `p = ε·dir`
/// (centre coordinates scaled by `ε²`) for each amplitude, and fit the
/// error slope in `ε`.
pub fn conjugacy_check<R: Real>(
    x: &PolyVectorField,
    nf: &NormalForm,
    dir: &[f64],
    amplitudes: &[f64],
    t: f64,
    tol: f64,
) -> Result<SlopeFit, OracleError> {
    let n = x.normal_dim();
    if dir.len() != x.dim() {
        return Err(OracleError::InvalidInput(format!(
            "direction has {} entries, field has {} variables",
            dir.len(),
            x.dim()
        )));
    }
    let sx = PolySystem::<R>::from_field(x);
    let snf = rescaled_system::<R>(nf);
    let s_poly = &nf.time_factor;
    let tr = R::from_f64(t);
    let mut samples = Vec::new();
    let mut floor = 0.0f64;
    for &eps in amplitudes {
        let e = R::from_f64(eps);
        let p: Vec<R> = dir
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                if i < n {
                    e * R::from_f64(d)
                } else {
                    e * e * R::from_f64(d)
                }
            })
            .collect();
        let (xs, us) = p.split_at(n);
        let w0 = R::one() / s_poly.eval(xs, us);
        let mut aug = p.clone();
        aug.push(w0);
        let end_nf = flow(&snf, &aug, tr, tol)?;
        let lhs = apply_transform(&nf.generators, &end_nf[..p.len()], tol)?;
        let start = apply_transform(&nf.generators, &p, tol)?;
        let rhs = flow(&sx, &start, tr, tol)?;
        let err = lhs
            .iter()
            .zip(&rhs)
            .map(|(a, b)| (*a - *b).abs().to_f64())
            .fold(0.0, f64::max);
        let fl = 1e3 * R::epsilon() * eps;
        floor = floor.max(fl);
        if err > fl {
            samples.push((eps.ln(), err.ln()));
        }
    }
    if samples.len() < MIN_SAMPLES {
        return Err(OracleError::DegenerateFit { floor });
    }
    fit_slope(&samples)
}
