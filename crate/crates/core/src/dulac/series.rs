use std::fmt;

use num::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::coeffs::{label_for, NFCoeffs};
use super::variation::{variation_coeffs, VariationSeries};
use super::DulacError;
use crate::real::Real;
use crate::resonance::{classify, Case, EigenData};
use crate::ring::json::{ExpPolyJson, OmegaPolyJson};
use crate::ring::omega::default_rate_name;
use crate::ring::{
    default_limit_order, limit_params_zero, parse_rational, rational_to_string, ExpPoly, OmegaPoly,
    RateOmegaView, TPoly, Q,
};

/// Which coordinate of the exit point an entry belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Output {
    Y,
    Z,
    U(usize),
}

impl Output {
    pub fn name(&self) -> String {
        match self {
            Output::Y => "y".into(),
            Output::Z => "z".into(),
            Output::U(k) => format!("u{}", k + 1),
        }
    }

    pub fn parse(s: &str) -> Option<Output> {
        match s {
            "y" => Some(Output::Y),
            "z" => Some(Output::Z),
            _ => {
                let k: usize = s.strip_prefix('u')?.parse().ok()?;
                (k >= 1).then(|| Output::U(k - 1))
            }
        }
    }
}

impl fmt::Display for Output {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// One term `coeff(-ln x0) · x0^{x0_exponent} · y0^i · z0^j` of an output,
/// relative to the leading factor of that output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DulacEntry {
    pub output: Output,
    pub i: u32,
    pub j: u32,
    pub n1: i64,
    pub n2: i64,
    /// Index order: `n1 + n2` (Case 1) or the weight `n1 + q n2 - m n1` (Case 2).
    pub order: i64,
    pub x0_exponent: Q,
    /// Coefficient in `t = -ln x0` with the leading exponential removed.
    pub coeff: ExpPoly,
    /// Value of `coeff` at `a = b = 0`, a polynomial in `t`.
    pub limit: Option<TPoly>,
    /// The Case-2 term `α_{-1,0} z0^m ω(γ1, x0)`.
    pub special: bool,
    /// `coeff` with one Ω per rate, used for evaluation
    view: RateOmegaView,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DulacSeries {
    pub eig: EigenData,
    pub order: u32,
    pub centre_dim: usize,
    pub u0: Vec<Q>,
    pub a0: Q,
    pub b0: Q,
    /// `α_{-1,0}` in Case 2
    pub special_coeff: Option<Q>,
    pub entries: Vec<DulacEntry>,
}

/// Numerical exit point.
#[derive(Clone, Debug, PartialEq)]
pub struct DulacValue<R> {
    pub y: R,
    pub z: R,
    pub u: Vec<R>,
}

fn weight(eig: &EigenData, n1: i64, n2: i64) -> i64 {
    match eig.case {
        Case::Case1 { .. } => n1 + n2,
        Case::Case2 { m, q, .. } => n1 + q as i64 * n2 - m as i64 * n1,
    }
}

fn relative_x0_exponent(eig: &EigenData, out: Output, i: u32, j: u32) -> Q {
    let (i, j) = (Q::from_integer(i.into()), Q::from_integer(j.into()));
    match out {
        Output::Y => (i - Q::one()) * &eig.alpha0 + j * &eig.beta0,
        Output::Z => i * &eig.alpha0 + (j - Q::one()) * &eig.beta0,
        Output::U(_) => i * &eig.alpha0 + j * &eig.beta0,
    }
}

/// Assemble the Dulac series through index order `order`.
pub fn dulac_series(nf: &NFCoeffs, order: u32) -> Result<DulacSeries, DulacError> {
    let vs = variation_coeffs(nf, order)?;
    assemble(nf, &vs, order)
}

/// Assemble from an already computed variation series.
pub fn assemble(
    nf: &NFCoeffs,
    vs: &VariationSeries,
    order: u32,
) -> Result<DulacSeries, DulacError> {
    let eig = &nf.eig;
    let special_m = match eig.case {
        Case::Case2 { m, .. } => Some(m as u32),
        Case::Case1 { .. } => None,
    };
    let mut outputs = vec![Output::Y, Output::Z];
    outputs.extend((0..nf.centre_dim).map(Output::U));
    let mut entries = Vec::new();
    for out in outputs {
        for (&(i, j), _) in vs.component(out).terms() {
            let (n1, n2) = label_for(eig, out, i, j).ok_or_else(|| DulacError::Label {
                component: out.name(),
                i,
                j,
            })?;
            let w = weight(eig, n1, n2);
            if w > order as i64 {
                continue;
            }
            let coeff = vs.stripped(out, i, j).expect("entry present");
            let limit = limit_params_zero(&coeff, default_limit_order(&coeff)).map_err(|_| {
                DulacError::NotInRbar {
                    component: out.name(),
                    i,
                    j,
                }
            })?;
            entries.push(DulacEntry {
                output: out,
                i,
                j,
                n1,
                n2,
                order: w,
                x0_exponent: relative_x0_exponent(eig, out, i, j),
                view: RateOmegaView::from_exppoly(&coeff),
                coeff,
                limit: Some(limit),
                special: out == Output::Y && i == 0 && Some(j) == special_m,
            });
        }
    }
    let special_coeff = special_m.and_then(|m| {
        nf.y.iter()
            .find(|t| t.i == 0 && t.j == m)
            .map(|t| t.c.clone())
    });
    Ok(DulacSeries {
        eig: eig.clone(),
        order,
        centre_dim: nf.centre_dim,
        u0: nf.u0.clone(),
        a0: nf.a0.clone(),
        b0: nf.b0.clone(),
        special_coeff,
        entries,
    })
}

/// Evaluate one stripped coefficient at `(a, b, t)`, using the exact limit
/// when both parameters vanish and a symmetric perturbation of `b` when the
/// point sits on a removable pole.
fn eval_coeff<R: Real>(e: &DulacEntry, a: R, b: R, t: R) -> Result<R, DulacError> {
    let zero = R::zero();
    if a == zero && b == zero {
        if let Some(l) = &e.limit {
            return Ok(l.eval(t));
        }
    }
    // grouping by rate turns c e^{κt} - c into cκ Ω(κ), removing the
    // single-rate poles exactly
    if let Ok(v) = e.view.eval(a, b, t) {
        if v.is_finite() {
            return Ok(v);
        }
    }
    let scale = a.abs().max_abs(b);
    let delta = if scale == zero {
        R::from_f64(1e-8)
    } else {
        scale * R::from_f64(1e-8)
    };
    let lo = e.view.eval(a, b - delta, t);
    let hi = e.view.eval(a, b + delta, t);
    match (lo, hi) {
        (Ok(l), Ok(h)) if l.is_finite() && h.is_finite() => Ok((l + h) * R::from_f64(0.5)),
        _ => Err(DulacError::PoleAtPoint),
    }
}

/// Evaluate the truncated series at `x0 ∈ (0, 1]` with rate offsets `a`, `b`.
pub fn eval_dulac<R: Real>(
    d: &DulacSeries,
    x0: R,
    y0: R,
    z0: R,
    a: R,
    b: R,
) -> Result<DulacValue<R>, DulacError> {
    if !(x0 > R::zero()) || x0 > R::one() {
        return Err(DulacError::Unsupported("x0 must lie in (0, 1]".into()));
    }
    let lnx = x0.ln();
    let t = -lnx;
    let mut sy = R::zero();
    let mut sz = R::zero();
    let mut su = vec![R::zero(); d.centre_dim];
    for e in &d.entries {
        let c = eval_coeff(e, a, b, t)?;
        let v = c * x0.powr(&e.x0_exponent) * y0.powi(e.i as i32) * z0.powi(e.j as i32);
        match e.output {
            Output::Y => sy += v,
            Output::Z => sz += v,
            Output::U(k) => su[k] += v,
        }
    }
    let lead_y = x0.powr(&d.eig.alpha0) * (a * lnx).exp();
    let lead_z = x0.powr(&d.eig.beta0) * (b * lnx).exp();
    let u = su
        .into_iter()
        .zip(&d.u0)
        .map(|(s, u0)| R::from_rational(u0) + s)
        .collect();
    Ok(DulacValue {
        y: lead_y * sy,
        z: lead_z * sz,
        u,
    })
}

/// Sum of the entries of one output without its leading factor, leaving
/// out the initial-data monomials listed in `skip`.
#[allow(clippy::too_many_arguments)]
pub fn eval_component<R: Real>(
    d: &DulacSeries,
    out: Output,
    x0: R,
    y0: R,
    z0: R,
    a: R,
    b: R,
    skip: &[(u32, u32)],
) -> Result<R, DulacError> {
    let t = -x0.ln();
    let mut acc = R::zero();
    for e in d.entries_for(out) {
        if skip.contains(&(e.i, e.j)) {
            continue;
        }
        let c = eval_coeff(e, a, b, t)?;
        acc += c * x0.powr(&e.x0_exponent) * y0.powi(e.i as i32) * z0.powi(e.j as i32);
    }
    Ok(acc)
}

impl DulacSeries {
    pub fn entries_for(&self, out: Output) -> impl Iterator<Item = &DulacEntry> {
        self.entries.iter().filter(move |e| e.output == out)
    }

    pub fn entry(&self, out: Output, i: u32, j: u32) -> Option<&DulacEntry> {
        self.entries
            .iter()
            .find(|e| e.output == out && e.i == i && e.j == j)
    }

    /// `γ1 = a - m b` (Case 2)
    pub fn gamma1_rate(&self) -> Option<(i32, i32)> {
        match self.eig.case {
            Case::Case2 { m, .. } => Some((1, -(m as i32))),
            Case::Case1 { .. } => None,
        }
    }

    pub fn is_linear(&self) -> bool {
        self.entries.iter().all(|e| {
            matches!((e.output, e.i, e.j), (Output::Y, 1, 0) | (Output::Z, 0, 1))
                && e.coeff == ExpPoly::one()
        })
    }

    fn rate_name(&self) -> impl Fn(i32, i32) -> String + '_ {
        move |n1, n2| match self.gamma1_rate() {
            Some(g) if g == (n1, n2) => "gamma1".to_string(),
            _ => default_rate_name(n1, n2),
        }
    }

    /// Human-readable listing in `ω(κ, x0)` form.
    pub fn render(&self) -> String {
        let mut s = String::new();
        let case = match self.eig.case {
            Case::Case1 { .. } => "Case 1 (alpha/beta not an integer)".to_string(),
            Case::Case2 { m, .. } => format!("Case 2 (alpha = {m}*beta)"),
        };
        s.push_str(&format!(
            "# {case}, alpha0 = {}, beta0 = {}, order {}\n",
            rational_to_string(&self.eig.alpha0),
            rational_to_string(&self.eig.beta0),
            self.order
        ));
        s.push_str("# convention: y1 carries x0^alpha, z1 carries x0^beta\n");
        s.push_str("# alpha = alpha0 + a, beta = beta0 + b\n");
        if self.is_linear() {
            s.push_str("y1 ~ x0^alpha * y0\n");
            s.push_str("z1 ~ x0^beta * z0\n");
            for k in 0..self.centre_dim {
                s.push_str(&format!("u{0}_1 ~ u{0}_0\n", k + 1));
            }
            return s;
        }
        let name = self.rate_name();
        for out in [Output::Y, Output::Z]
            .into_iter()
            .chain((0..self.centre_dim).map(Output::U))
        {
            let lead = match out {
                Output::Y => "x0^alpha * ",
                Output::Z => "x0^beta * ",
                Output::U(_) => "",
            };
            let mut parts: Vec<String> = Vec::new();
            if let Output::U(k) = out {
                parts.push(format!("u{}_0", k + 1));
            }
            for e in self.entries_for(out) {
                parts.push(self.render_entry(e, &name));
            }
            if parts.is_empty() {
                parts.push("0".into());
            }
            let body = parts.join(" + ");
            match out {
                Output::U(k) => s.push_str(&format!("u{}_1 ~ {body}\n", k + 1)),
                _ => s.push_str(&format!("{}1 ~ {lead}({body})\n", out.name())),
            }
        }
        if let (Some(c), Some(_)) = (&self.special_coeff, self.gamma1_rate()) {
            let m = match self.eig.case {
                Case::Case2 { m, .. } => m,
                Case::Case1 { .. } => unreachable!(),
            };
            s.push_str(&format!("# alpha_{{-1,0}} = {}\n", rational_to_string(c)));
            s.push_str(&format!("# gamma1 = a - {m}*b\n"));
        }
        s
    }

    fn render_entry(&self, e: &DulacEntry, name: &dyn Fn(i32, i32) -> String) -> String {
        let mut factors = Vec::new();
        let monomial = |factors: &mut Vec<String>| {
            if !e.x0_exponent.is_zero() {
                factors.push(format!("x0^({})", rational_to_string(&e.x0_exponent)));
            }
            for (v, p) in [("y0", e.i), ("z0", e.j)] {
                match p {
                    0 => {}
                    1 => factors.push(v.to_string()),
                    _ => factors.push(format!("{v}^{p}")),
                }
            }
        };
        if e.special {
            if let Some(c) = &self.special_coeff {
                let rest = e.coeff.sub(&ExpPoly::omega(1, -(e.j as i32)).scale_q(c));
                factors.push("alpha_{-1,0}".into());
                monomial(&mut factors);
                factors.push("omega(gamma1, x0)".into());
                let mut s = factors.join(" * ");
                if !rest.is_zero() {
                    s.push_str(&format!(
                        " + ({}) * z0^{}",
                        RateOmegaView::from_exppoly(&rest).render(true, name),
                        e.j
                    ));
                }
                return s;
            }
        }
        let view = RateOmegaView::from_exppoly(&e.coeff);
        let c = view.render(true, name);
        let mut m = Vec::new();
        monomial(&mut m);
        if m.is_empty() {
            return if view.terms.len() == 1 {
                c
            } else {
                format!("({c})")
            };
        }
        if c != "1" {
            factors.push(if view.terms.len() == 1 {
                c
            } else {
                format!("({c})")
            });
        }
        factors.extend(m);
        factors.join(" * ")
    }
}

impl fmt::Display for DulacSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DulacEntryJson {
    pub component: String,
    pub n1: i64,
    pub n2: i64,
    pub order: i64,
    pub x0_exponent: String,
    pub y0_exponent: u32,
    pub z0_exponent: u32,
    pub special: bool,
    pub coefficient: OmegaPolyJson,
    pub exp_form: ExpPolyJson,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<Vec<String>>,
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq)]
pub struct DulacSeriesJson {
    pub case: String,
    pub convention: String,
    pub alpha0: String,
    pub beta0: String,
    pub a0: String,
    pub b0: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma1: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub special_coeff: Option<String>,
    pub order: u32,
    pub u0: Vec<String>,
    pub entries: Vec<DulacEntryJson>,
}

impl From<&DulacSeries> for DulacSeriesJson {
    fn from(d: &DulacSeries) -> Self {
        let gamma1 = d.gamma1_rate().map(|(n1, n2)| default_rate_name(n1, n2));
        DulacSeriesJson {
            case: if d.eig.is_case2() { "case2" } else { "case1" }.into(),
            convention: "y1 carries x0^alpha, z1 carries x0^beta".into(),
            alpha0: rational_to_string(&d.eig.alpha0),
            beta0: rational_to_string(&d.eig.beta0),
            a0: rational_to_string(&d.a0),
            b0: rational_to_string(&d.b0),
            gamma1,
            special_coeff: d.special_coeff.as_ref().map(rational_to_string),
            order: d.order,
            u0: d.u0.iter().map(rational_to_string).collect(),
            entries: d
                .entries
                .iter()
                .map(|e| DulacEntryJson {
                    component: e.output.name(),
                    n1: e.n1,
                    n2: e.n2,
                    order: e.order,
                    x0_exponent: rational_to_string(&e.x0_exponent),
                    y0_exponent: e.i,
                    z0_exponent: e.j,
                    special: e.special,
                    coefficient: OmegaPolyJson::from(&OmegaPoly::from_exppoly(&e.coeff)),
                    exp_form: ExpPolyJson::from(&e.coeff),
                    limit: e
                        .limit
                        .as_ref()
                        .map(|l| l.coeffs().iter().map(rational_to_string).collect()),
                })
                .collect(),
        }
    }
}

impl TryFrom<&DulacSeriesJson> for DulacSeries {
    type Error = DulacError;
    fn try_from(j: &DulacSeriesJson) -> Result<Self, DulacError> {
        let bad = |m: String| DulacError::Unsupported(m);
        let rat = |s: &str| parse_rational(s).map_err(|e| bad(format!("{s}: {e}")));
        let eig = classify(&rat(&j.alpha0)?, &rat(&j.beta0)?).map_err(|e| bad(e.to_string()))?;
        let u0 = j.u0.iter().map(|s| rat(s)).collect::<Result<Vec<_>, _>>()?;
        let mut entries = Vec::new();
        for e in &j.entries {
            let output = Output::parse(&e.component)
                .ok_or_else(|| bad(format!("unknown component {}", e.component)))?;
            if let Output::U(k) = output {
                if k >= u0.len() {
                    return Err(bad(format!("component {} has no base point", e.component)));
                }
            }
            let coeff = ExpPoly::try_from(&e.exp_form).map_err(|err| bad(err.to_string()))?;
            let limit = match &e.limit {
                Some(v) => Some(TPoly::new(
                    v.iter().map(|s| rat(s)).collect::<Result<_, _>>()?,
                )),
                None => None,
            };
            entries.push(DulacEntry {
                output,
                i: e.y0_exponent,
                j: e.z0_exponent,
                n1: e.n1,
                n2: e.n2,
                order: e.order,
                x0_exponent: rat(&e.x0_exponent)?,
                view: RateOmegaView::from_exppoly(&coeff),
                coeff,
                limit,
                special: e.special,
            });
        }
        let special_coeff = match &j.special_coeff {
            Some(s) => Some(rat(s)?),
            None => None,
        };
        if entries.iter().any(|e| e.x0_exponent.is_negative()) {
            return Err(bad("negative x0 exponent".into()));
        }
        Ok(DulacSeries {
            eig,
            order: j.order,
            centre_dim: u0.len(),
            u0,
            a0: rat(&j.a0)?,
            b0: rat(&j.b0)?,
            special_coeff,
            entries,
        })
    }
}
