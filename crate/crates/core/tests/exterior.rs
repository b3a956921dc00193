use std::collections::BTreeMap;
use std::sync::Arc;

use mae_core::exterior::{combine, reduce_mod_ideal, FrameBuilder, FrameSpec};
use mae_core::{Form, ScalarExpr};
use num_traits::Zero;
use proptest::prelude::*;

fn v(s: &str) -> ScalarExpr {
    ScalarExpr::var(s)
}

fn jet() -> Arc<FrameSpec> {
    FrameSpec::coordinates(&["x1", "x2", "z", "p1", "p2"])
}

fn theta(f: &Arc<FrameSpec>) -> Form {
    Form::from_terms(
        f,
        1,
        &[
            (&["dz"], ScalarExpr::from(1)),
            (&["dx1"], -v("p1")),
            (&["dx2"], -v("p2")),
        ],
    )
    .unwrap()
}

#[test]
fn wedge_basics() {
    let f = jet();
    let dx1 = f.basis("dx1").unwrap();
    assert!(dx1.wedge(&dx1).unwrap().is_zero());

    let w = FrameSpec::coordinates(&["a", "b", "c", "e"]);
    let [w1, w2, w3, w4]: [Form; 4] = w.basis_forms().try_into().unwrap();
    let lhs = w1.wedge(&w2).unwrap().wedge(&w3.wedge(&w4).unwrap()).unwrap();
    assert_eq!(lhs.coefficient(&["da", "db", "dc", "de"]).unwrap(), ScalarExpr::from(1));
    assert_eq!(lhs.len(), 1);
}

#[test]
fn d_of_contact_form() {
    let f = jet();
    let z = Form::scalar(&f, v("z"));
    assert_eq!(z.exterior_derivative().unwrap(), f.basis("dz").unwrap());
    let dth = theta(&f).exterior_derivative().unwrap();
    // oracle: differentiate each coefficient by hand, d(-p1 dx1) = -dp1^dx1
    let expect = Form::from_terms(
        &f,
        2,
        &[(&["dp1", "dx1"], ScalarExpr::from(-1)), (&["dp2", "dx2"], ScalarExpr::from(-1))],
    )
    .unwrap();
    assert_eq!(dth, expect);
}

#[test]
fn mod_theta_examples() {
    let f = jet();
    let th = theta(&f);
    let sigma = Form::from_terms(&f, 1, &[(&["dp1"], v("x2")), (&["dx1"], ScalarExpr::from(3))]).unwrap();
    let red = reduce_mod_ideal(&th.wedge(&sigma).unwrap(), &[th.clone()]).unwrap();
    assert!(red.remainder.is_zero());
    assert_eq!(f.labels()[red.pivots[0]], "dz");

    let psi = Form::from_terms(
        &f,
        2,
        &[(&["dp1", "dx2"], ScalarExpr::from(1)), (&["dp2", "dx1"], ScalarExpr::from(-1))],
    )
    .unwrap();
    let dth = th.exterior_derivative().unwrap();
    let r = reduce_mod_ideal(&dth.wedge(&psi).unwrap(), &[th.clone()]).unwrap();
    assert!(r.remainder.is_zero());

    let dx12 = f.basis("dx1").unwrap().wedge(&f.basis("dx2").unwrap()).unwrap();
    assert_eq!(reduce_mod_ideal(&dx12, &[th.clone()]).unwrap().remainder, dx12);
}

#[test]
fn dependent_generators_rejected() {
    let f = jet();
    let th = theta(&f);
    let dx = f.basis("dx1").unwrap();
    assert!(reduce_mod_ideal(&dx, &[th.clone(), th.scale(&v("x1"))]).is_err());
}

fn omega_pi() -> (Arc<FrameSpec>, Arc<FrameSpec>, BTreeMap<String, Form>, BTreeMap<String, Form>) {
    let om = FrameBuilder::new()
        .abstract_label("w0")
        .abstract_label("w1")
        .abstract_label("w2")
        .abstract_label("w3")
        .abstract_label("w4")
        .build()
        .unwrap();
    let pi = FrameBuilder::new()
        .abstract_label("pi0")
        .abstract_label("pi1")
        .abstract_label("pi2")
        .abstract_label("pib1")
        .abstract_label("pib2")
        .conjugation(&[("pi1", "pib1"), ("pi2", "pib2")])
        .build()
        .unwrap();
    let i = ScalarExpr::i();
    let half = ScalarExpr::ratio(1, 2);
    let b = |l: &str| pi.basis(l).unwrap();
    let minus_i_half = -(&i * &half);
    let to_pi: BTreeMap<String, Form> = [
        ("w0", b("pi0")),
        ("w1", b("pi1").sub(&b("pib1")).unwrap().scale(&minus_i_half)),
        ("w3", b("pi1").add(&b("pib1")).unwrap().scale(&half)),
        ("w2", b("pi2").add(&b("pib2")).unwrap().scale(&half)),
        ("w4", b("pi2").sub(&b("pib2")).unwrap().scale(&minus_i_half)),
    ]
    .into_iter()
    .map(|(k, f)| (k.to_string(), f))
    .collect();
    let o = |l: &str| om.basis(l).unwrap();
    let to_om: BTreeMap<String, Form> = [
        ("pi0", o("w0")),
        ("pi1", o("w3").add(&o("w1").scale(&i)).unwrap()),
        ("pi2", o("w2").add(&o("w4").scale(&i)).unwrap()),
        ("pib1", o("w3").sub(&o("w1").scale(&i)).unwrap()),
        ("pib2", o("w2").sub(&o("w4").scale(&i)).unwrap()),
    ]
    .into_iter()
    .map(|(k, f)| (k.to_string(), f))
    .collect();
    (om, pi, to_pi, to_om)
}

#[test]
fn substitute_complex_frame() {
    let (om, pi, to_pi, to_om) = omega_pi();
    let x = om
        .basis("w3")
        .unwrap()
        .add(&om.basis("w1").unwrap().scale(&ScalarExpr::i()))
        .unwrap();
    assert_eq!(x.substitute(&pi, &to_pi).unwrap(), pi.basis("pi1").unwrap());
    for l in om.labels() {
        let e = om.basis(l).unwrap();
        let back = e.substitute(&pi, &to_pi).unwrap().substitute(&om, &to_om).unwrap();
        assert_eq!(back, e);
    }
    let ident: BTreeMap<String, Form> = om.labels().iter().map(|l| (l.clone(), om.basis(l).unwrap())).collect();
    assert_eq!(x.substitute(&om, &ident).unwrap(), x);
    let partial: BTreeMap<String, Form> = to_pi.into_iter().take(2).collect();
    assert!(x.substitute(&pi, &partial).is_err());
    // conjugation swaps the barred labels
    assert_eq!(pi.basis("pi1").unwrap().conj().unwrap(), pi.basis("pib1").unwrap());
}

#[test]
fn inconsistent_declared_d_rejected() {
    // d a = a^b with b closed: d(d a) = d a ^ b = 0
    assert!(FrameBuilder::new()
        .abstract_label("a")
        .abstract_label("b")
        .declare_d("a", vec![("a", "b", ScalarExpr::from(1))])
        .build()
        .is_ok());
    // d a = x b^c with d x = a: d(d a) = a^b^c
    let bad = FrameBuilder::new()
        .abstract_label("a")
        .abstract_label("b")
        .abstract_label("c")
        .variable("x", vec![("a", ScalarExpr::from(1))])
        .declare_d("a", vec![("b", "c", v("x"))])
        .build();
    assert!(bad.is_err());
}

#[test]
fn coframe_transport() {
    let f = jet();
    let th = theta(&f);
    let forms = vec![
        th.clone(),
        f.basis("dx1").unwrap(),
        f.basis("dp1").unwrap(),
        f.basis("dx2").unwrap(),
        f.basis("dp2").unwrap(),
    ];
    let cf = FrameSpec::from_coframe(&f, &forms, &["e0", "e1", "e2", "e3", "e4"], None).unwrap();
    let de0 = cf.frame.basis("e0").unwrap().exterior_derivative().unwrap();
    // d theta = dx1^dp1 + dx2^dp2 = e1^e2 + e3^e4
    let expect = Form::from_terms(
        &cf.frame,
        2,
        &[(&["e1", "e2"], ScalarExpr::from(1)), (&["e3", "e4"], ScalarExpr::from(1))],
    )
    .unwrap();
    assert_eq!(de0, expect);
    let back = cf.back(&cf.forward(&th).unwrap(), &f).unwrap();
    assert_eq!(back, th);
}

// ---- randomized properties over a 5-dimensional coordinate frame ----

fn small_poly() -> impl Strategy<Value = ScalarExpr> {
    prop::collection::vec((-3i64..=3, 0u32..=2, 0u32..=1, 0u32..=1), 1..=3).prop_map(|ts| {
        ts.into_iter().fold(ScalarExpr::zero(), |acc, (c, a, b, e)| {
            acc + ScalarExpr::from(c) * v("x1").pow(a) * v("z").pow(b) * v("p2").pow(e)
        })
    })
}

fn form_of(deg: usize) -> impl Strategy<Value = Vec<(u32, ScalarExpr)>> {
    let words: Vec<u32> = (0u32..32).filter(|m| m.count_ones() as usize == deg).collect();
    prop::collection::vec((prop::sample::select(words), small_poly()), 0..=3)
}

fn any_form() -> impl Strategy<Value = (usize, Vec<(u32, ScalarExpr)>)> {
    (0usize..=3).prop_flat_map(|d| (Just(d), form_of(d)))
}

fn build(f: &Arc<FrameSpec>, deg: usize, t: &[(u32, ScalarExpr)]) -> Form {
    let mut out = Form::zero(f, deg);
    for (m, c) in t {
        let labels: Vec<&str> = (0..5)
            .filter(|k| m & (1 << k) != 0)
            .map(|k| f.labels()[k].as_str())
            .collect();
        out = out.add(&Form::from_terms(f, deg, &[(&labels, c.clone())]).unwrap()).unwrap();
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn wedge_laws((da, ta) in any_form(), (db, tb) in any_form(), tc in form_of(1)) {
        let f = jet();
        let a = build(&f, da, &ta);
        let b = build(&f, db, &tb);
        let c = build(&f, 1, &tc);
        let ab = a.wedge(&b).unwrap();
        let ba = b.wedge(&a).unwrap();
        let sign = if (da * db) % 2 == 0 { ba.clone() } else { ba.neg() };
        prop_assert_eq!(&ab, &sign);
        prop_assert_eq!(ab.wedge(&c).unwrap(), a.wedge(&b.wedge(&c).unwrap()).unwrap());
        let bb = b.add(&b).unwrap();
        prop_assert_eq!(a.wedge(&bb).unwrap(), ab.add(&ab).unwrap());
    }

    #[test]
    fn d_squared_and_leibniz(ta in form_of(1), tb in form_of(2)) {
        let f = jet();
        let a = build(&f, 1, &ta);
        let b = build(&f, 2, &tb);
        prop_assert!(a.exterior_derivative().unwrap().exterior_derivative().unwrap().is_zero());
        prop_assert!(b.exterior_derivative().unwrap().exterior_derivative().unwrap().is_zero());
        let lhs = a.wedge(&b).unwrap().exterior_derivative().unwrap();
        let rhs = a.exterior_derivative().unwrap().wedge(&b).unwrap()
            .sub(&a.wedge(&b.exterior_derivative().unwrap()).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn reduction_witnesses(tb in form_of(2)) {
        let f = jet();
        let th = theta(&f);
        let a = build(&f, 2, &tb);
        let red = reduce_mod_ideal(&a, &[th.clone()]).unwrap();
        let diff = a.sub(&red.remainder).unwrap();
        prop_assert_eq!(diff, combine(&[th], &red.witnesses).unwrap());
        prop_assert!(red.remainder.coefficient_idx(&[2, 0]).is_zero());
    }

    #[test]
    fn substitute_commutes_with_wedge(ta in form_of(1), tb in form_of(2)) {
        let f = jet();
        let th = theta(&f);
        let forms = vec![th, f.basis("dx1").unwrap(), f.basis("dp1").unwrap(), f.basis("dx2").unwrap(), f.basis("dp2").unwrap()];
        let cf = FrameSpec::from_coframe(&f, &forms, &["e0", "e1", "e2", "e3", "e4"], None).unwrap();
        let a = build(&f, 1, &ta);
        let b = build(&f, 2, &tb);
        let lhs = cf.forward(&a.wedge(&b).unwrap()).unwrap();
        let rhs = cf.forward(&a).unwrap().wedge(&cf.forward(&b).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
        // d commutes with the change of frame
        prop_assert_eq!(cf.forward(&a.exterior_derivative().unwrap()).unwrap(), cf.forward(&a).unwrap().exterior_derivative().unwrap());
    }
}
