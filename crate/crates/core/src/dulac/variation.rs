use std::collections::BTreeMap;

use super::coeffs::NFCoeffs;
use super::series::Output;
use super::DulacError;
use crate::resonance::Case;
use crate::ring::{default_limit_order, limit_params_zero, ExpPoly};

/// Power series in the initial data `(Uy0, Uz0)` with exp-polynomial
/// coefficients in `t`. The level of `(i, j)` is `i + j`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WSeries {
    terms: BTreeMap<(u32, u32), ExpPoly>,
}

impl WSeries {
    pub fn new() -> Self {
        WSeries::default()
    }

    pub fn one() -> Self {
        let mut s = WSeries::new();
        s.insert(0, 0, ExpPoly::one());
        s
    }

    pub fn get(&self, i: u32, j: u32) -> Option<&ExpPoly> {
        self.terms.get(&(i, j))
    }

    pub fn insert(&mut self, i: u32, j: u32, p: ExpPoly) {
        if p.is_zero() {
            self.terms.remove(&(i, j));
        } else {
            self.terms.insert((i, j), p);
        }
    }

    fn accumulate(&mut self, i: u32, j: u32, p: ExpPoly) {
        let s = match self.terms.get(&(i, j)) {
            Some(q) => q.add(&p),
            None => p,
        };
        self.insert(i, j, s);
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ExpPoly)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn truncated(&self, level: u32) -> WSeries {
        WSeries {
            terms: self
                .terms
                .iter()
                .filter(|((i, j), _)| i + j <= level)
                .map(|(k, v)| (*k, v.clone()))
                .collect(),
        }
    }

    /// Product with all terms above `level` dropped.
    pub fn mul_trunc(&self, o: &WSeries, level: u32) -> WSeries {
        let mut out = WSeries::new();
        for (&(i1, j1), p1) in &self.terms {
            for (&(i2, j2), p2) in &o.terms {
                if i1 + j1 + i2 + j2 <= level {
                    out.accumulate(i1 + i2, j1 + j2, p1.mul(p2));
                }
            }
        }
        out
    }

    /// Only the level-`level` part of the product.
    pub fn mul_level(&self, o: &WSeries, level: u32) -> WSeries {
        let mut out = WSeries::new();
        for (&(i1, j1), p1) in &self.terms {
            for (&(i2, j2), p2) in &o.terms {
                if i1 + j1 + i2 + j2 == level {
                    out.accumulate(i1 + i2, j1 + j2, p1.mul(p2));
                }
            }
        }
        out
    }
}

/// Variation coefficients of `Uy`, `Uz`, `u_k`, complete through `max_level`.
#[derive(Clone, Debug)]
pub struct VariationSeries {
    pub max_level: u32,
    pub y: WSeries,
    pub z: WSeries,
    pub u: Vec<WSeries>,
}

impl VariationSeries {
    /// Just the first-order factors `e^{-at}` and `e^{-bt}`.
    pub fn first_order(centre_dim: usize) -> Self {
        let mut y = WSeries::new();
        y.insert(1, 0, ExpPoly::exp(-1, 0));
        let mut z = WSeries::new();
        z.insert(0, 1, ExpPoly::exp(0, -1));
        VariationSeries {
            max_level: 1,
            y,
            z,
            u: vec![WSeries::new(); centre_dim],
        }
    }

    pub fn component(&self, out: Output) -> &WSeries {
        match out {
            Output::Y => &self.y,
            Output::Z => &self.z,
            Output::U(k) => &self.u[k],
        }
    }

    pub fn first_order_y(&self) -> &ExpPoly {
        self.y.get(1, 0).expect("first-order factor")
    }

    pub fn first_order_z(&self) -> &ExpPoly {
        self.z.get(0, 1).expect("first-order factor")
    }

    /// Coefficient with its exponential prefactor removed: `e^{at} C` for
    /// `Uy`, `e^{bt} C` for `Uz`, `C` itself for a centre variable.
    pub fn stripped(&self, out: Output, i: u32, j: u32) -> Option<ExpPoly> {
        let c = self.component(out).get(i, j)?;
        Some(strip(out, c))
    }
}

fn strip(out: Output, c: &ExpPoly) -> ExpPoly {
    match out {
        Output::Y => c.shift_exp(1, 0),
        Output::Z => c.shift_exp(0, 1),
        Output::U(_) => c.clone(),
    }
}

/// Right-hand sides of the variational equations for one index pair.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rhs {
    pub y: ExpPoly,
    pub z: ExpPoly,
    pub u: Vec<ExpPoly>,
}

struct Powers {
    y: Vec<WSeries>,
    z: Vec<WSeries>,
}

impl Powers {
    /// Powers of the series truncated below `level`, kept through `level`.
    fn new(series: &VariationSeries, kmax: u32, level: u32) -> Powers {
        let build = |s: &WSeries| {
            let base = s.truncated(level - 1);
            let mut p = vec![WSeries::one()];
            for k in 1..=kmax as usize {
                let next = p[k - 1].mul_trunc(&base, level);
                p.push(next);
            }
            p
        };
        Powers {
            y: build(&series.y),
            z: build(&series.z),
        }
    }
}

/// Level-`level` contributions of the nonlinear terms of one equation.
fn nonlinear_level(nf: &NFCoeffs, pw: &Powers, out: Output, level: u32) -> WSeries {
    let mut acc = WSeries::new();
    for t in nf.terms(out) {
        if t.i + t.j < 2 || t.i + t.j > level {
            continue;
        }
        let prod = pw.y[t.i as usize].mul_level(&pw.z[t.j as usize], level);
        for (&(i, j), p) in prod.terms() {
            acc.accumulate(i, j, p.scale_q(&t.c));
        }
    }
    acc
}

/// Level-`level` contributions of the centre-equation terms linear in `Uy`,
/// `Uz`; those need the current level of the normal coefficients.
fn linear_level(nf: &NFCoeffs, series: &VariationSeries, k: usize, level: u32, acc: &mut WSeries) {
    for t in nf.terms(Output::U(k)) {
        if t.i + t.j != 1 {
            continue;
        }
        let src = if t.i == 1 { &series.y } else { &series.z };
        for (&(i, j), p) in src.terms() {
            if i + j == level {
                acc.accumulate(i, j, p.scale_q(&t.c));
            }
        }
    }
}

fn has_linear_centre_terms(nf: &NFCoeffs) -> bool {
    nf.u.iter().flatten().any(|t| t.i + t.j == 1)
}

/// Right-hand sides `R_y, R_z, R_u` at the index `(n1, n2)`: the coefficient
/// of the matching initial-data monomial after substituting the lower-order
/// series into the nonlinear terms. Outputs with no monomial for this index
/// get zero.
pub fn build_variational_rhs(
    nf: &NFCoeffs,
    series: &VariationSeries,
    n1: i64,
    n2: i64,
) -> Result<Rhs, DulacError> {
    let kmax = nf.max_term_degree();
    let pick = |out: Output| -> Result<ExpPoly, DulacError> {
        let Some((i, j)) = super::coeffs::monomial_for(&nf.eig, out, n1, n2) else {
            return Ok(ExpPoly::zero());
        };
        let level = i + j;
        if level == 0 {
            return Ok(ExpPoly::zero());
        }
        let needs_current = matches!(out, Output::U(_)) && has_linear_centre_terms(nf);
        let required = if needs_current { level } else { level - 1 };
        if series.max_level < required {
            return Err(DulacError::MissingLowerOrder(required));
        }
        let pw = Powers::new(series, kmax, level);
        let mut r = nonlinear_level(nf, &pw, out, level);
        if let Output::U(k) = out {
            linear_level(nf, series, k, level, &mut r);
        }
        Ok(r.get(i, j).cloned().unwrap_or_else(ExpPoly::zero))
    };
    let y = pick(Output::Y)?;
    let z = pick(Output::Z)?;
    let u = (0..nf.centre_dim)
        .map(|k| pick(Output::U(k)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Rhs { y, z, u })
}

/// Highest initial-data level needed for index order `order`.
pub fn level_for_order(nf: &NFCoeffs, order: u32) -> u32 {
    match nf.eig.case {
        Case::Case1 { q1, q2, .. } => 1 + q1.max(q2) as u32 * order,
        Case::Case2 { .. } => order + 1,
    }
}

fn check_rbar(out: Output, i: u32, j: u32, c: &ExpPoly) -> Result<(), DulacError> {
    let s = strip(out, c);
    limit_params_zero(&s, default_limit_order(&s))
        .map(|_| ())
        .map_err(|_| DulacError::NotInRbar {
            component: out.name(),
            i,
            j,
        })
}

/// Solve the variational equations level by level through index order `order`.
pub fn variation_coeffs(nf: &NFCoeffs, order: u32) -> Result<VariationSeries, DulacError> {
    variation_coeffs_to_level(nf, level_for_order(nf, order))
}

/// Same, with the initial-data level given directly.
pub fn variation_coeffs_to_level(
    nf: &NFCoeffs,
    max_level: u32,
) -> Result<VariationSeries, DulacError> {
    let mut series = VariationSeries::first_order(nf.centre_dim);
    for k in 0..nf.centre_dim {
        let mut acc = WSeries::new();
        linear_level(nf, &series, k, 1, &mut acc);
        series.u[k] = integrate_all(Output::U(k), &acc)?;
    }
    let kmax = nf.max_term_degree();
    for level in 2..=max_level {
        let pw = Powers::new(&series, kmax, level);
        let ry = nonlinear_level(nf, &pw, Output::Y, level);
        let rz = nonlinear_level(nf, &pw, Output::Z, level);
        let mut ru: Vec<WSeries> = (0..nf.centre_dim)
            .map(|k| nonlinear_level(nf, &pw, Output::U(k), level))
            .collect();
        for (&(i, j), c) in integrate_all(Output::Y, &ry)?.terms() {
            series.y.insert(i, j, c.clone());
        }
        for (&(i, j), c) in integrate_all(Output::Z, &rz)?.terms() {
            series.z.insert(i, j, c.clone());
        }
        series.max_level = level;
        for (k, r) in ru.iter_mut().enumerate() {
            linear_level(nf, &series, k, level, r);
            for (&(i, j), c) in integrate_all(Output::U(k), r)?.terms() {
                series.u[k].insert(i, j, c.clone());
            }
        }
    }
    series.max_level = max_level.max(1);
    Ok(series)
}

/// `C = e^{-κt} ∫_0^t e^{κτ} R dτ` with `κ = a, b, 0` for `Uy, Uz, u`.
fn integrate_all(out: Output, r: &WSeries) -> Result<WSeries, DulacError> {
    let (n1, n2) = match out {
        Output::Y => (1, 0),
        Output::Z => (0, 1),
        Output::U(_) => (0, 0),
    };
    let mut res = WSeries::new();
    for (&(i, j), p) in r.terms() {
        let c = p.shift_exp(n1, n2).integrate().shift_exp(-n1, -n2);
        check_rbar(out, i, j, &c)?;
        res.insert(i, j, c);
    }
    Ok(res)
}
