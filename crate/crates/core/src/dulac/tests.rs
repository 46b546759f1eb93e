use std::collections::BTreeMap;

use super::*;
use crate::jets::UJet;
use crate::normalform::{normalize, PolyVectorField};
use crate::resonance::classify;
use crate::ring::{q, ExpPoly, Q};

fn jc(c: Q) -> UJet {
    UJet::constant(1, 2, c)
}

/// ẏ = -y + z², ż = -z/2, u̇ = 0
fn case2_example() -> PolyVectorField {
    let mut x = PolyVectorField::diagonal(3, 1, 2, 3, &q(1, 1), &q(1, 2));
    x.add_term(1, vec![0, 0, 2], jc(q(1, 1)));
    x
}

fn coeffs_of(x: &PolyVectorField) -> NFCoeffs {
    let nf = normalize(x, x.degree()).unwrap();
    NFCoeffs::from_field(&nf.field, &[q(0, 1)]).unwrap()
}

#[test]
fn case2_special_term() {
    let nf = coeffs_of(&case2_example());
    assert_eq!(nf.table(Output::Y).get(&(-1, 0)), Some(&q(1, 1)));
    let d = dulac_series(&nf, 2).unwrap();
    assert_eq!(d.entry(Output::Y, 1, 0).unwrap().coeff, ExpPoly::one());
    let sp = d.entry(Output::Y, 0, 2).unwrap();
    assert!(sp.special);
    assert_eq!((sp.n1, sp.n2), (-1, 0));
    assert_eq!(sp.coeff, ExpPoly::omega(1, -2));
    assert_eq!(sp.x0_exponent, q(0, 1));
    assert_eq!(d.entry(Output::Z, 0, 1).unwrap().coeff, ExpPoly::one());
    assert_eq!(d.entries.len(), 3);
    let text = d.render();
    assert!(
        text.contains("alpha_{-1,0} * z0^2 * omega(gamma1, x0)"),
        "{text}"
    );
    assert!(text.contains("gamma1 = a - 2*b"));
    assert!(text.contains("y1 carries x0^alpha"));
}

#[test]
fn case2_evaluates_to_closed_form() {
    let d = dulac_series(&coeffs_of(&case2_example()), 2).unwrap();
    let v = eval_dulac(&d, 0.01, 1.0, 1.0, 0.0, 0.0).unwrap();
    let exact = 0.01 * (1.0 + 100f64.ln());
    assert!((v.y - exact).abs() < 1e-14, "{} vs {exact}", v.y);
    assert!((v.z - 0.1).abs() < 1e-15);
    assert_eq!(v.u, vec![0.0]);
    // with rate offsets: Uy = e^{-at}(y0 + z0² Ω(a - 2b, t))
    let (a, b, x0) = (0.01f64, 0.02f64, 0.05f64);
    let t = -x0.ln();
    let g = a - 2.0 * b;
    let y = x0.powf(1.0 + a) * (0.3 + 0.25 * ((g * t).exp() - 1.0) / g);
    let v = eval_dulac(&d, x0, 0.3, 0.5, a, b).unwrap();
    assert!((v.y - y).abs() < 1e-14, "{} vs {y}", v.y);
    // on the pole a = 2b the perturbation fallback gives the t-limit
    let v = eval_dulac(&d, x0, 0.0, 1.0, 0.02, 0.01).unwrap();
    let y = x0.powf(1.02) * t;
    assert!((v.y - y).abs() < 1e-9, "{} vs {y}", v.y);
}

#[test]
fn linear_field_is_trivial() {
    let x = PolyVectorField::diagonal(3, 1, 2, 3, &q(2, 3), &q(1, 2));
    let d = dulac_series(&coeffs_of(&x), 3).unwrap();
    assert!(d.is_linear());
    assert!(d.render().contains("y1 ~ x0^alpha * y0"));
    let v = eval_dulac(&d, 0.1, 1.0, 1.0, 0.0, 0.0).unwrap();
    assert!((v.y - 0.1f64.powf(2.0 / 3.0)).abs() < 1e-15);
    assert!((v.z - 0.1f64.sqrt()).abs() < 1e-15);
}

#[test]
fn variational_rhs_case2_lowest() {
    let nf = coeffs_of(&case2_example());
    let first = VariationSeries::first_order(1);
    let r = build_variational_rhs(&nf, &first, -1, 0).unwrap();
    assert_eq!(r.y, ExpPoly::exp(0, -2));
    assert!(r.z.is_zero());
    assert!(r.u[0].is_zero());
    let vs = variation_coeffs(&nf, 1).unwrap();
    assert_eq!(
        vs.y.get(0, 2).unwrap(),
        &ExpPoly::omega(1, -2).shift_exp(-1, 0)
    );
    assert_eq!(vs.first_order_y(), &ExpPoly::exp(-1, 0));
    assert_eq!(vs.first_order_z(), &ExpPoly::exp(0, -1));
}

#[test]
fn missing_lower_order_is_reported() {
    let mut x = PolyVectorField::diagonal(3, 1, 2, 4, &q(1, 1), &q(1, 2));
    x.add_term(1, vec![0, 0, 2], jc(q(1, 1)));
    x.add_term(2, vec![1, 0, 3], jc(q(1, 1)));
    let nf = coeffs_of(&x);
    let first = VariationSeries::first_order(1);
    // z at (n1, n2) = (0, 2): z0^5 needs levels up to 4
    assert_eq!(
        build_variational_rhs(&nf, &first, 0, 2),
        Err(DulacError::MissingLowerOrder(4))
    );
}

#[test]
fn zero_tables_give_zero_rhs() {
    let eig = classify(&q(2, 3), &q(1, 2)).unwrap();
    let empty = BTreeMap::new();
    let nf = NFCoeffs::from_tables(eig, &empty, &empty, std::slice::from_ref(&empty)).unwrap();
    let vs = variation_coeffs(&nf, 3).unwrap();
    let r = build_variational_rhs(&nf, &vs, 1, 1).unwrap();
    assert!(r.y.is_zero() && r.z.is_zero() && r.u[0].is_zero());
    assert_eq!(vs.y.len() + vs.z.len() + vs.u[0].len(), 2);
}

fn case1_example() -> PolyVectorField {
    // α0 = 2/3, β0 = 1/2: x^2 y^4 ∂y is resonant, index (1, 0)
    let mut x = PolyVectorField::diagonal(3, 1, 2, 5, &q(2, 3), &q(1, 2));
    x.add_term(1, vec![2, 4, 0], jc(q(3, 10)));
    x.add_term(2, vec![1, 0, 3], jc(q(-1, 5)));
    x
}

#[test]
fn case1_labels_and_exponents() {
    let nf = coeffs_of(&case1_example());
    assert_eq!(nf.table(Output::Y).get(&(1, 0)), Some(&q(3, 10)));
    assert_eq!(nf.table(Output::Z).get(&(0, 1)), Some(&q(-1, 5)));
    let d = dulac_series(&nf, 2).unwrap();
    for e in &d.entries {
        let (p1, p2) = (q(2, 1), q(1, 1));
        let expect = p1 * Q::from_integer(e.n1.into()) + p2 * Q::from_integer(e.n2.into());
        assert_eq!(e.x0_exponent, expect, "{e:?}");
        assert_eq!(e.order, e.n1 + e.n2);
        assert!(e.order <= 2);
    }
    let e = d.entry(Output::Y, 4, 0).unwrap();
    assert_eq!((e.n1, e.n2), (1, 0));
}

#[test]
fn truncation_consistency() {
    let nf = coeffs_of(&case1_example());
    let d2 = dulac_series(&nf, 2).unwrap();
    let d3 = dulac_series(&nf, 3).unwrap();
    for e in &d2.entries {
        let f = d3.entry(e.output, e.i, e.j).unwrap();
        assert_eq!(e, f);
    }
    assert!(d3.entries.len() >= d2.entries.len());
}

#[test]
fn centre_variable_linear_in_uy() {
    // α0 = 1: x y ∂u is resonant, u1 = u0 + c y0 x0 (-ln x0) at a = 0
    let mut x = PolyVectorField::diagonal(3, 1, 2, 3, &q(1, 1), &q(1, 2));
    x.add_term(3, vec![1, 1, 0], jc(q(2, 1)));
    let nf = coeffs_of(&x);
    let d = dulac_series(&nf, 2).unwrap();
    let e = d.entry(Output::U(0), 1, 0).unwrap();
    assert_eq!(e.coeff, ExpPoly::omega(-1, 0).scale_q(&q(2, 1)));
    let x0 = 0.02f64;
    let v = eval_dulac(&d, x0, 0.7, 0.0, 0.0, 0.0).unwrap();
    assert!((v.u[0] - 2.0 * 0.7 * x0 * (-x0.ln())).abs() < 1e-15);
}

#[test]
fn json_round_trip() {
    let d = dulac_series(&coeffs_of(&case2_example()), 2).unwrap();
    let j = DulacSeriesJson::from(&d);
    let s = serde_json::to_string(&j).unwrap();
    let back: DulacSeriesJson = serde_json::from_str(&s).unwrap();
    assert_eq!(DulacSeries::try_from(&back).unwrap(), d);
}

#[test]
fn not_normal_form_is_rejected() {
    let mut x = case2_example();
    x.add_term(1, vec![1, 0, 1], jc(q(1, 1)));
    assert!(matches!(
        NFCoeffs::from_field(&x, &[q(0, 1)]),
        Err(DulacError::NotInNormalForm(_))
    ));
}
