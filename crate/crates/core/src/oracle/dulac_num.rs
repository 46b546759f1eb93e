use num::Zero;

use super::fit::{fit_slope, SlopeFit};
use super::rk::dopri5;
use super::system::PolySystem;
use super::taylor::integrate_taylor;
use super::OracleError;
use crate::dulac::{dulac_series, eval_dulac, DulacSeries, DulacValue, NFCoeffs, Output};
use crate::jets::UJet;
use crate::normalform::{normal_degree, unit_vector, PolyVectorField};
use crate::real::Real;
use crate::ring::{omega_x, Q};

fn check_dulac_input(x: &PolyVectorField) -> Result<(), OracleError> {
    if x.normal_dim() != 3 {
        return Err(OracleError::InvalidInput(
            "need normal variables x, y, z".into(),
        ));
    }
    let c = x.comp(0);
    if c.len() != 1 || c.coeff(&unit_vector(3, 0)) != UJet::one(x.centre_dim(), x.jet_order()) {
        return Err(OracleError::InvalidInput(
            "x-component must be exactly x (rescale time first)".into(),
        ));
    }
    Ok(())
}

fn unpack<R: Real>(s: &[R], k: usize) -> DulacValue<R> {
    DulacValue {
        y: s[1],
        z: s[2],
        u: s[3..3 + k].to_vec(),
    }
}

/// Exit point on `{x = 1}` of the orbit through `(x0, y0, z0, u0)`, by
/// integrating the full system for the exact transit time `-ln x0`.
pub fn numerical_dulac(
    x: &PolyVectorField,
    x0: f64,
    y0: f64,
    z0: f64,
    u0: &[f64],
    tol: f64,
) -> Result<DulacValue<f64>, OracleError> {
    check_dulac_input(x)?;
    if !(x0 > 0.0 && x0 < 1.0) {
        return Err(OracleError::InvalidInput("x0 must lie in (0, 1)".into()));
    }
    let sys = PolySystem::<f64>::from_field(x);
    let mut init = vec![x0, y0, z0];
    init.extend_from_slice(u0);
    let r = dopri5(|_, s, out| sys.eval(s, out), &init, -x0.ln(), tol)?;
    Ok(unpack(&r.state, x.centre_dim()))
}

/// Same exit point with `x(t) = x0 e^t` substituted, integrating only
/// `(y, z, u)`.
pub fn numerical_dulac_decoupled(
    x: &PolyVectorField,
    x0: f64,
    y0: f64,
    z0: f64,
    u0: &[f64],
    tol: f64,
) -> Result<DulacValue<f64>, OracleError> {
    check_dulac_input(x)?;
    if !(x0 > 0.0 && x0 < 1.0) {
        return Err(OracleError::InvalidInput("x0 must lie in (0, 1)".into()));
    }
    let sys = PolySystem::<f64>::from_field(x);
    let n = x.dim();
    let mut init = vec![y0, z0];
    init.extend_from_slice(u0);
    let mut full = vec![0.0; n];
    let mut rhs = vec![0.0; n];
    let r = dopri5(
        |t, s, out| {
            full[0] = x0 * t.exp();
            full[1..].copy_from_slice(s);
            sys.eval(&full, &mut rhs);
            out.copy_from_slice(&rhs[1..]);
        },
        &init,
        -x0.ln(),
        tol,
    )?;
    let mut s = vec![1.0];
    s.extend_from_slice(&r.state);
    Ok(unpack(&s, x.centre_dim()))
}

/// High-precision exit point via the Taylor integrator (use with `Dd`).
pub fn numerical_dulac_taylor<R: Real>(
    x: &PolyVectorField,
    x0: R,
    y0: R,
    z0: R,
    u0: &[R],
    tol: f64,
) -> Result<DulacValue<R>, OracleError> {
    check_dulac_input(x)?;
    if !(x0 > R::zero() && x0 < R::one()) {
        return Err(OracleError::InvalidInput("x0 must lie in (0, 1)".into()));
    }
    let sys = PolySystem::<R>::from_field(x);
    let mut init = vec![x0, y0, z0];
    init.extend_from_slice(u0);
    let r = integrate_taylor(&sys, &init, -x0.ln(), tol)?;
    Ok(unpack(&r.state, x.centre_dim()))
}

/// Closed-form exit point for a constant-coefficient linear diagonal field,
/// or one with a single `c z^m ∂y` term, when the centre equations vanish.
pub fn closed_form_dulac<R: Real>(
    x: &PolyVectorField,
    x0: R,
    y0: R,
    z0: R,
    u0: &[R],
) -> Option<DulacValue<R>> {
    if check_dulac_input(x).is_err() || (3..x.dim()).any(|i| !x.comp(i).is_zero()) {
        return None;
    }
    let lam = |i: usize| x.lambda(i).eval(u0);
    let alpha = -lam(1);
    let beta = -lam(2);
    let linear_only = |i: usize| x.comp(i).len() == 1;
    if !linear_only(2) {
        return None;
    }
    let z1 = (beta * x0.ln()).exp() * z0;
    let lead = (alpha * x0.ln()).exp();
    let nonlinear: Vec<_> = x
        .comp(1)
        .terms()
        .filter(|(e, _)| normal_degree(e) >= 2)
        .collect();
    let y1 = match nonlinear.as_slice() {
        [] => lead * y0,
        [(e, c)] if e[0] == 0 && e[1] == 0 => {
            let m = e[2];
            let kappa = alpha - R::from_i64(m as i64) * beta;
            lead * (y0 + c.eval(u0) * z0.powi(m as i32) * omega_x(kappa, x0))
        }
        _ => return None,
    };
    Some(DulacValue {
        y: y1,
        z: z1,
        u: u0.to_vec(),
    })
}

fn output_value<R: Copy>(v: &DulacValue<R>, out: Output) -> R {
    match out {
        Output::Y => v.y,
        Output::Z => v.z,
        Output::U(k) => v.u[k],
    }
}

/// Initial data and integration settings for [`convergence_order`].
#[derive(Clone, Debug)]
pub struct ConvergenceConfig {
    pub y0: f64,
    pub z0: f64,
    pub u0: Vec<f64>,
    /// Taylor per-step tolerance
    pub tol: f64,
    /// Power `p` in an expected error `C x0^e (-ln x0)^p`; the fit uses
    /// `ln|err| - p ln(-ln x0)`.
    pub log_power: u32,
}

/// Slope of `ln|numerical - series|` against `ln x0`, computed in `R`.
pub fn convergence_order<R: Real>(
    series: &DulacSeries,
    x: &PolyVectorField,
    grid: &[f64],
    out: Output,
    cfg: &ConvergenceConfig,
) -> Result<SlopeFit, OracleError> {
    if grid.len() < 2 {
        return Err(OracleError::InvalidInput(
            "grid needs at least two points".into(),
        ));
    }
    let (lo, hi) = grid
        .iter()
        .fold((f64::INFINITY, 0.0f64), |(l, h), &g| (l.min(g), h.max(g)));
    if hi / lo < 99.999 {
        return Err(OracleError::InvalidInput(
            "grid must span two decades".into(),
        ));
    }
    let u0: Vec<R> = cfg.u0.iter().map(|&v| R::from_f64(v)).collect();
    let (a, b) = (R::from_rational(&series.a0), R::from_rational(&series.b0));
    let mut samples = Vec::new();
    let mut floor_hits = 0usize;
    let mut floor = 0.0f64;
    for &g in grid {
        let x0 = R::from_f64(g);
        let (y0, z0) = (R::from_f64(cfg.y0), R::from_f64(cfg.z0));
        let num = numerical_dulac_taylor(x, x0, y0, z0, &u0, cfg.tol)?;
        let ser = eval_dulac(series, x0, y0, z0, a, b)?;
        let (n, s) = (output_value(&num, out), output_value(&ser, out));
        let err = (n - s).abs().to_f64();
        let fl = 1e3 * R::epsilon() * n.abs().to_f64().max(f64::MIN_POSITIVE);
        floor = floor.max(fl);
        if err <= fl {
            floor_hits += 1;
            continue;
        }
        let lx = g.ln();
        samples.push((lx, err.ln() - cfg.log_power as f64 * (-lx).ln()));
    }
    if floor_hits == grid.len() || samples.len() < super::fit::MIN_SAMPLES {
        return Err(OracleError::DegenerateFit { floor });
    }
    fit_slope(&samples)
}

/// Smallest `x0` exponent (with the leading factor included) among the
/// entries of `out` left out at index order `order`, and the largest power of
/// `ln x0` carried by the limit coefficients at that exponent. Found by
/// building the series `extra` orders higher.
pub fn omitted_exponent(
    nf: &NFCoeffs,
    order: u32,
    extra: u32,
    out: Output,
) -> Result<Option<(Q, u32)>, OracleError> {
    let hi = dulac_series(nf, order + extra)?;
    let lead = match out {
        Output::Y => nf.eig.alpha0.clone(),
        Output::Z => nf.eig.beta0.clone(),
        Output::U(_) => Q::zero(),
    };
    let mut best: Option<(Q, u32)> = None;
    for e in hi.entries_for(out) {
        if e.order <= order as i64 {
            continue;
        }
        let Some(l) = &e.limit else { continue };
        if l.is_zero() {
            continue;
        }
        let ex = &lead + &e.x0_exponent;
        let p = l.degree() as u32;
        best = match best {
            Some((b, bp)) if b < ex => Some((b, bp)),
            Some((b, bp)) if b == ex => Some((b, bp.max(p))),
            _ => Some((ex, p)),
        };
    }
    Ok(best)
}

/// `(x0, |x0 g'(x0)|)` for the correction sum `g` of the `y` output, by a
/// central difference in `ln x0`.
pub fn derivative_decay_proxy(
    series: &DulacSeries,
    grid: &[f64],
    y0: f64,
    z0: f64,
    a: f64,
    b: f64,
) -> Result<Vec<(f64, f64)>, OracleError> {
    let g = |x0: f64| crate::dulac::eval_component(series, Output::Y, x0, y0, z0, a, b, &[(1, 0)]);
    let h = 1e-4;
    grid.iter()
        .map(|&x0| {
            let d = (g(x0 * h.exp())? - g(x0 * (-h).exp())?) / (2.0 * h);
            Ok((x0, d.abs()))
        })
        .collect()
}
