use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::spec::{parse_point, term_specs, TermSpec, VectorFieldSpec};
use super::{
    read, write, CliError, DulacArgs, EvalArgs, NormalizeArgs, ResonancesArgs, ValidateArgs,
};
use crate::dulac::{
    dulac_series, eval_dulac, DulacSeries, DulacSeriesJson, DulacValue, NFCoeffs, Output,
};
use crate::normalform::{normal_degree, normalize, PolyVectorField};
use crate::oracle::{
    conjugacy_check, convergence_order, log_grid, numerical_dulac, omitted_exponent, to_csv,
    CheckReport, ConvergenceConfig, OracleError, SlopeFit, ValidationReport,
};
use crate::real::{Dd, Real};
use crate::resonance::{classify, enumerate_resonances, index_families, Case, Component};
use crate::ring::{parse_rational, rational_to_string, Q};

fn emit(out: &mut dyn Write, s: &str) -> Result<(), CliError> {
    out.write_all(s.as_bytes()).map_err(|source| CliError::Io {
        path: "<stdout>".into(),
        source,
    })
}

fn monomial(e: &[u32]) -> String {
    const V: [&str; 3] = ["x", "y", "z"];
    let parts: Vec<String> = e
        .iter()
        .zip(V)
        .filter(|(p, _)| **p > 0)
        .map(|(p, v)| {
            if *p == 1 {
                v.to_string()
            } else {
                format!("{v}^{p}")
            }
        })
        .collect();
    if parts.is_empty() {
        "1".into()
    } else {
        parts.join("*")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResonanceReport {
    pub alpha: String,
    pub beta: String,
    pub case: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    pub max_degree: u32,
    /// component name → exponent triples
    pub monomials: BTreeMap<String, Vec<[u32; 3]>>,
    /// Case 2 only: index pairs `(n1, n2)` of the three families
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub families: Option<BTreeMap<String, Vec<(i64, i64)>>>,
}

pub fn cmd_resonances(
    a: &ResonancesArgs,
    out: &mut dyn Write,
) -> Result<ResonanceReport, CliError> {
    let alpha = parse_rational(&a.alpha)?;
    let beta = parse_rational(&a.beta)?;
    let eig = classify(&alpha, &beta)?;
    let set = enumerate_resonances(&eig, a.max_degree);
    let mut text = String::new();
    let (case, m) = match eig.case {
        Case::Case1 { .. } => {
            text.push_str(&format!(
                "Case 1: alpha0 = {}, beta0 = {} (alpha0/beta0 not an integer)\n",
                a.alpha, a.beta
            ));
            ("case1", None)
        }
        Case::Case2 { m, .. } => {
            text.push_str(&format!(
                "Case 2: alpha0 = {}, beta0 = {}, m = {m}, gamma1 = a - {m}*b\n",
                a.alpha, a.beta
            ));
            ("case2", Some(m))
        }
    };
    let mut monomials: BTreeMap<String, Vec<[u32; 3]>> = BTreeMap::new();
    for r in &set {
        monomials
            .entry(r.component.name().into())
            .or_default()
            .push(r.exponents);
    }
    if set.is_empty() {
        text.push_str(&format!(
            "no resonant monomials of degree 2..={}\n",
            a.max_degree
        ));
    }
    for c in [Component::X, Component::Y, Component::Z, Component::U] {
        if let Some(v) = monomials.get(c.name()) {
            let list: Vec<String> = v.iter().map(|e| monomial(e)).collect();
            text.push_str(&format!("{c}: {}  (d/d{c})\n", list.join(", ")));
        }
    }
    let families = if m.is_some() {
        let f = index_families(&eig, a.max_degree)?;
        let mut map = BTreeMap::new();
        for (name, set) in [("n1", &f.n1), ("n2", &f.n2), ("n3", &f.n3)] {
            let v: Vec<(i64, i64)> = set.iter().copied().collect();
            let shown: Vec<String> = v.iter().map(|(a, b)| format!("({a},{b})")).collect();
            let shown = if shown.is_empty() {
                "(none)".to_string()
            } else {
                shown.join(" ")
            };
            text.push_str(&format!("family {name}: {shown}\n"));
            map.insert(name.to_string(), v);
        }
        Some(map)
    } else {
        None
    };
    emit(out, &text)?;
    let report = ResonanceReport {
        alpha: a.alpha.clone(),
        beta: a.beta.clone(),
        case: case.into(),
        m,
        max_degree: a.max_degree,
        monomials,
        families,
    };
    if let Some(p) = &a.json {
        write(p, &serde_json::to_string_pretty(&report)?)?;
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TermRef {
    pub degree: u32,
    pub component: String,
    pub exponents: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorJson {
    pub degree: u32,
    pub terms: Vec<TermSpec>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizeReport {
    pub normal_form: VectorFieldSpec,
    /// `S` in `NF = S · Φ^* X`, as `(exponents, coefficient jet)` pairs
    pub time_factor: Vec<(Vec<u32>, BTreeMap<String, String>)>,
    pub generators: Vec<GeneratorJson>,
    pub removed: Vec<TermRef>,
    pub kept: Vec<TermRef>,
}

fn load_field(
    path: &std::path::PathBuf,
    jet_order: Option<u32>,
) -> Result<PolyVectorField, CliError> {
    let mut spec = VectorFieldSpec::from_json(&read(path)?)?;
    if let Some(j) = jet_order {
        spec.jet_order = j;
    }
    Ok(spec.to_field()?)
}

pub fn cmd_normalize(a: &NormalizeArgs, out: &mut dyn Write) -> Result<NormalizeReport, CliError> {
    let x = load_field(&a.input, a.jet_order)?;
    let degree = a.degree.unwrap_or(x.degree());
    let nf = normalize(&x, degree)?;
    let mut removed = Vec::new();
    for g in &nf.generators {
        for (i, e, _) in g.field.all_terms() {
            removed.push(TermRef {
                degree: g.degree,
                component: g.field.component_name(i),
                exponents: e.clone(),
            });
        }
    }
    let n = nf.field.normal_dim();
    let kept: Vec<TermRef> = nf
        .field
        .all_terms()
        .filter(|(_, e, _)| normal_degree(e) >= 2)
        .map(|(i, e, _)| TermRef {
            degree: normal_degree(e) - 1,
            component: nf.field.component_name(i),
            exponents: e.clone(),
        })
        .collect();
    let mut text = String::new();
    if removed.is_empty() {
        text.push_str("0 terms removed\n");
    }
    for d in 1..=degree {
        let c = removed.iter().filter(|r| r.degree == d).count();
        if c > 0 {
            let s = if c == 1 { "" } else { "s" };
            text.push_str(&format!("{c} term{s} removed at degree {d}\n"));
        }
    }
    if !nf.time_factor.is_one() {
        text.push_str("time rescaled to remove the resonant part of the x equation\n");
    }
    for k in &kept {
        let e: Vec<String> = k.exponents.iter().take(n).map(|v| v.to_string()).collect();
        text.push_str(&format!("kept: ({}) d/d{}\n", e.join(","), k.component));
    }
    text.push_str(&format!(
        "normal form through degree {degree}:\n{}",
        nf.field
    ));
    emit(out, &text)?;
    let report = NormalizeReport {
        normal_form: VectorFieldSpec::from_field(&nf.field),
        time_factor: nf
            .time_factor
            .terms()
            .map(|(e, c)| (e.clone(), c.to_json_map()))
            .collect(),
        generators: nf
            .generators
            .iter()
            .map(|g| GeneratorJson {
                degree: g.degree,
                terms: term_specs(&g.field),
            })
            .collect(),
        removed,
        kept,
    };
    if let Some(p) = &a.output {
        write(p, &serde_json::to_string_pretty(&report)?)?;
    }
    Ok(report)
}

/// Smallest `x0` exponent among the correction terms of `out`, relative to
/// the leading factor.
fn leading_correction(d: &DulacSeries, out: Output) -> Option<Q> {
    let skip = match out {
        Output::Y => (1, 0),
        Output::Z => (0, 1),
        Output::U(_) => (0, 0),
    };
    d.entries_for(out)
        .filter(|e| (e.i, e.j) != skip && !e.coeff.is_zero())
        .map(|e| e.x0_exponent.clone())
        .min()
}

pub fn cmd_dulac(a: &DulacArgs, out: &mut dyn Write) -> Result<DulacSeries, CliError> {
    let x = load_field(&a.input, None)?;
    let u0 = parse_point(&a.u0, x.centre_dim())?;
    let nf = NFCoeffs::from_field(&x, &u0)?;
    let d = dulac_series(&nf, a.order)?;
    let mut text = d.render();
    let outs = [Output::Y, Output::Z]
        .into_iter()
        .chain((0..d.centre_dim).map(Output::U));
    for o in outs {
        if let Some(e) = leading_correction(&d, o) {
            let label = match o {
                Output::U(k) => format!("u{}_1", k + 1),
                _ => format!("{}1", o.name()),
            };
            text.push_str(&format!(
                "# leading correction exponent of {label}: {}\n",
                rational_to_string(&e)
            ));
        }
    }
    emit(out, &text)?;
    if let Some(p) = &a.output {
        write(
            p,
            &serde_json::to_string_pretty(&DulacSeriesJson::from(&d))?,
        )?;
    }
    Ok(d)
}

/// `"lo:hi:n"` (log-spaced, inclusive) or a comma-separated list; every
/// point must lie in `(0, 1)` and there must be at least two.
pub fn parse_grid(s: &str) -> Result<Vec<f64>, CliError> {
    let bad = |m: &str| CliError::Usage(format!("grid {s:?}: {m}"));
    let num = |p: &str| p.trim().parse::<f64>().map_err(|_| bad("not a number"));
    let g = if s.contains(':') {
        let p: Vec<&str> = s.split(':').collect();
        if p.len() != 3 {
            return Err(bad("expected lo:hi:n"));
        }
        let n: usize = p[2]
            .trim()
            .parse()
            .map_err(|_| bad("point count must be an integer"))?;
        if n < 2 {
            return Err(bad("need at least two points"));
        }
        log_grid(num(p[0])?, num(p[1])?, n)
    } else {
        s.split(',').map(num).collect::<Result<Vec<_>, _>>()?
    };
    if g.len() < 2 {
        return Err(bad("need at least two points"));
    }
    if g.iter().any(|&v| !(v > 0.0 && v < 1.0)) {
        return Err(bad("points must lie in (0, 1)"));
    }
    Ok(g)
}

fn direction(dim: usize) -> Vec<f64> {
    (0..dim).map(|i| (1.3 * i as f64 + 0.4).cos()).collect()
}

pub fn cmd_validate(a: &ValidateArgs, out: &mut dyn Write) -> Result<ValidationReport, CliError> {
    let grid = parse_grid(&a.grid)?;
    let x = load_field(&a.input, None)?;
    let mut report = ValidationReport::default();
    let mut fit: Option<SlopeFit> = None;
    if a.conjugacy {
        let k = a.degree.unwrap_or(x.degree());
        let nf = normalize(&x, k)?;
        let expected = (k + 2) as f64;
        let tol = a.slope_tol.unwrap_or(0.3);
        let name = format!("conjugacy slope (degree {k})");
        let check = match conjugacy_check::<Dd>(&x, &nf, &direction(x.dim()), &grid, a.time, a.tol)
        {
            Ok(f) => {
                let c = CheckReport::within(&name, expected, f.slope, tol);
                fit = Some(f);
                c
            }
            Err(OracleError::DegenerateFit { floor }) => {
                let exact = nf.generators.is_empty() && nf.time_factor.is_one();
                CheckReport {
                    name,
                    expected: Some(expected),
                    measured: None,
                    tolerance: tol,
                    pass: exact,
                    note: Some(format!("errors at rounding floor {floor:e}")),
                }
            }
            Err(e) => return Err(e.into()),
        };
        report.push(check);
    } else {
        let out_c = Output::parse(&a.component)
            .ok_or_else(|| CliError::Usage(format!("unknown component {:?}", a.component)))?;
        let u0q = parse_point(&a.u0, x.centre_dim())?;
        let nf = NFCoeffs::from_field(&x, &u0q)?;
        let series = dulac_series(&nf, a.order)?;
        let omitted = omitted_exponent(&nf, a.order, 2, out_c)?;
        let cfg = ConvergenceConfig {
            y0: a.y0,
            z0: a.z0,
            u0: u0q.iter().map(f64::from_rational).collect(),
            tol: a.tol,
            log_power: omitted.as_ref().map_or(0, |o| o.1),
        };
        let tol = a.slope_tol.unwrap_or(0.2);
        let name = format!(
            "convergence order of {}1 at order {}",
            out_c.name(),
            a.order
        );
        let expected = omitted.as_ref().map(|o| f64::from_rational(&o.0));
        let mut check = match convergence_order::<Dd>(&series, &x, &grid, out_c, &cfg) {
            Ok(f) => {
                let c = match expected {
                    Some(e) => CheckReport::within(&name, e, f.slope, tol),
                    None => CheckReport {
                        name,
                        expected: None,
                        measured: Some(f.slope),
                        tolerance: tol,
                        pass: false,
                        note: Some("series predicted exact but the error is measurable".into()),
                    },
                };
                fit = Some(f);
                c
            }
            Err(OracleError::DegenerateFit { floor }) => CheckReport {
                name,
                expected,
                measured: None,
                tolerance: tol,
                // an exact series leaves nothing to measure
                pass: omitted.is_none(),
                note: Some(format!("errors at rounding floor {floor:e}")),
            },
            Err(e) => return Err(e.into()),
        };
        if !nf.has_constant_eigenvalues() {
            let n = "eigenvalues depend on u; the expected exponent ignores the shift by a0, b0";
            let note = match check.note.take() {
                Some(prev) => format!("{prev}; {n}"),
                None => n.into(),
            };
            check = check.with_note(note);
        }
        report.push(check);
    }
    let mut text = String::new();
    for c in &report.checks {
        let show = |v: Option<f64>| v.map_or("n/a".to_string(), |v| v.to_string());
        text.push_str(&format!(
            "{}: {} (expected {}, measured {}, tolerance {}){}\n",
            c.name,
            if c.pass { "PASS" } else { "FAIL" },
            show(c.expected),
            show(c.measured),
            c.tolerance,
            c.note
                .as_ref()
                .map(|n| format!(" [{n}]"))
                .unwrap_or_default()
        ));
    }
    emit(out, &text)?;
    if let Some(p) = &a.report {
        write(p, &serde_json::to_string_pretty(&report)?)?;
    }
    if let (Some(p), Some(f)) = (&a.csv, &fit) {
        write(p, &to_csv(f))?;
    }
    Ok(report)
}

pub fn cmd_eval(a: &EvalArgs, out: &mut dyn Write) -> Result<DulacValue<f64>, CliError> {
    let j: DulacSeriesJson = serde_json::from_str(&read(&a.series)?)?;
    let d = DulacSeries::try_from(&j)?;
    if !(a.x0 > 0.0 && a.x0 < 1.0) {
        return Err(CliError::Usage("x0 must lie in (0, 1)".into()));
    }
    let ra = a.a.unwrap_or_else(|| f64::from_rational(&d.a0));
    let rb = a.b.unwrap_or_else(|| f64::from_rational(&d.b0));
    let v = eval_dulac(&d, a.x0, a.y0, a.z0, ra, rb)?;
    let mut text = format!("y1 = {:.17e}\nz1 = {:.17e}\n", v.y, v.z);
    for (k, u) in v.u.iter().enumerate() {
        text.push_str(&format!("u{}_1 = {u:.17e}\n", k + 1));
    }
    if let Some(p) = &a.compare {
        let x = load_field(p, None)?;
        let u0: Vec<f64> = d.u0.iter().map(f64::from_rational).collect();
        let n = numerical_dulac(&x, a.x0, a.y0, a.z0, &u0, a.tol)?;
        text.push_str(&format!(
            "numerical: y1 = {:.17e}, z1 = {:.17e}\ndifference: y1 {:e}, z1 {:e}\n",
            n.y,
            n.z,
            (v.y - n.y).abs(),
            (v.z - n.z).abs()
        ));
    }
    emit(out, &text)?;
    Ok(v)
}
