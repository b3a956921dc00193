use mae_core::algebra::xi_basis;
use mae_core::exterior::mod_ideal;
use mae_core::gstructure::symbolic::{self, complex_symbol};
use mae_core::gstructure::*;
use mae_core::jet_contact::{build_ma_system, contact_form, euler_lagrange_test, JetChart, MongeAmpereSystem};
use mae_core::symkernel::GaussianRational;
use mae_core::{QMatrix, Rational, ScalarExpr};
use num_traits::Zero;

fn int(n: i64) -> ScalarExpr {
    ScalarExpr::from(n)
}

fn system(ch: &JetChart, c: [i64; 6]) -> MongeAmpereSystem {
    build_ma_system(ch, c.map(int)).unwrap()
}

fn laplace(ch: &JetChart) -> MongeAmpereSystem {
    system(ch, [0, 1, 0, 0, -1, 0])
}

fn strings(row: &[ScalarExpr]) -> Vec<String> {
    row.iter().map(ToString::to_string).collect()
}

/// Coframe `(θ, f dx1, dp1/f, g dx2, dp2/g)` and the system `(g/f)u11 + (f/g)u22 = 0`,
/// which is in normal form for it.
fn scaled_model(ch: &JetChart, f: &str, g: &str) -> (MongeAmpereSystem, AdaptedCoframe) {
    let f = ch.parse(f).unwrap();
    let g = ch.parse(g).unwrap();
    let forms = [
        contact_form(ch),
        ch.d(0).scale(&f),
        ch.d(3).scale(&f.recip().unwrap()),
        ch.d(1).scale(&g),
        ch.d(4).scale(&g.recip().unwrap()),
    ];
    let cof = AdaptedCoframe::new(ch, forms).unwrap();
    let r = &f / &g;
    let sys = build_ma_system(ch, [int(0), r.recip().unwrap(), int(0), int(0), -r, int(0)]).unwrap();
    (sys, cof)
}

fn pipeline(cof: &AdaptedCoframe) -> (TorsionInvariants, B1Equations) {
    let eqs = StructureEquations::new(complexify(cof).unwrap());
    let (e, inv) = absorb(&eqs).unwrap();
    let b1 = reduce_to_b1(&e, &inv).unwrap();
    (inv, b1)
}

#[test]
fn orbit_classification() {
    let ch = JetChart::default();
    let cof = AdaptedCoframe::standard(&ch);
    let lap = classify(&laplace(&ch), &cof).unwrap();
    assert_eq!((lap.orbit, lap.multiplier), (Orbit::Elliptic, int(1)));
    let wave = classify(&system(&ch, [0, 1, 0, 0, 1, 0]), &cof).unwrap();
    assert_eq!((wave.orbit, wave.multiplier), (Orbit::Hyperbolic, int(-1)));
    let par = classify(&system(&ch, [0, 0, 0, 0, 0, 1]), &cof).unwrap();
    assert_eq!((par.orbit, par.multiplier), (Orbit::Parabolic, int(0)));
    let det = classify(&system(&ch, [1, 0, 0, 0, 0, -1]), &cof).unwrap();
    assert_eq!((det.orbit, det.multiplier), (Orbit::Elliptic, int(1)));
}

#[test]
fn classification_errors() {
    let ch = JetChart::default();
    let cof = AdaptedCoframe::standard(&ch);
    // u11 + x1·u22: sign changes across x1 = 0
    let mixed = build_ma_system(&ch, [int(0), int(1), int(0), int(0), -ScalarExpr::var("x1"), int(0)]).unwrap();
    assert!(matches!(classify(&mixed, &cof), Err(GStructureError::NotOrbitPure(_))));
    // the same system is elliptic where x1 is a square
    let sq = build_ma_system(&ch, [int(0), int(1), int(0), int(0), -ch.parse("1 + x1^2").unwrap(), int(0)]).unwrap();
    assert_eq!(classify(&sq, &cof).unwrap().orbit, Orbit::Elliptic);
    // w3^w4 is not primitive: b12 + b34 = 1
    let dw = ch.d(1).wedge(&ch.d(4)).unwrap();
    let bad = MongeAmpereSystem::from_psi(&ch, dw.add(&ch.d(0).wedge(&ch.d(1)).unwrap()).unwrap());
    if let Ok(bad) = bad {
        assert!(matches!(classify(&bad, &cof), Err(GStructureError::NotAdapted(_))));
    }
}

#[test]
fn classification_invariance() {
    let ch = JetChart::default();
    let cof = AdaptedCoframe::standard(&ch);
    let lap = laplace(&ch);
    let wave = system(&ch, [0, 1, 0, 0, 1, 0]);
    for l in [-3, 1, 2, 7] {
        for s in [&lap, &wave] {
            assert!(classify_invariance(s, &cof, &Rational::from_integer(l.into())).unwrap());
        }
    }
    let scaled = MongeAmpereSystem::from_psi(&ch, wave.psi.scale(&int(2))).unwrap();
    let c = classify(&scaled, &cof).unwrap();
    assert_eq!((c.orbit, c.multiplier), (Orbit::Hyperbolic, int(-4)));
    let c = classify(&MongeAmpereSystem::from_psi(&ch, lap.psi.scale(&int(-3))).unwrap(), &cof).unwrap();
    assert_eq!((c.orbit, c.multiplier), (Orbit::Elliptic, int(9)));
}

#[test]
fn adapted_coframe_validation() {
    let ch = JetChart::default();
    let std = AdaptedCoframe::standard(&ch);
    assert_eq!(std.alpha(), &int(1));
    assert_eq!(std.normal_form_factor(&laplace(&ch)).unwrap(), int(1));
    // swapping w1 and w2 flips the sign of dw0
    let forms = [contact_form(&ch), ch.d(3), ch.d(0), ch.d(1), ch.d(4)];
    assert!(matches!(AdaptedCoframe::new(&ch, forms), Err(GStructureError::NotAdapted(_))));
    let forms = [ch.d(0), ch.d(0), ch.d(3), ch.d(1), ch.d(4)];
    assert!(matches!(AdaptedCoframe::new(&ch, forms), Err(GStructureError::NotAdapted(_))));
    let forms = [contact_form(&ch), ch.d(0), ch.d(0), ch.d(1), ch.d(4)];
    assert!(matches!(AdaptedCoframe::new(&ch, forms), Err(GStructureError::NotAdapted(_))));
    // 2θ needs w1^w2 + w3^w4 scaled accordingly
    let forms = [contact_form(&ch).scale(&int(2)), ch.d(0).scale(&int(2)), ch.d(3), ch.d(1).scale(&int(2)), ch.d(4)];
    assert_eq!(AdaptedCoframe::new(&ch, forms).unwrap().alpha(), &int(2));
}

#[test]
fn normalizing_adapter() {
    let ch = JetChart::default();
    for c in [[0, 1, 0, 0, -1, 0], [1, 0, 0, 0, 0, -1], [0, 4, 0, 0, -1, 0], [1, 0, 0, 0, 0, -4], [0, 1, 1, -1, -2, 0], [0, 9, 0, 0, -4, 0]] {
        let sys = system(&ch, c);
        let cof = AdaptedCoframe::normalized(&sys).unwrap_or_else(|e| panic!("{c:?}: {e}"));
        assert_eq!(classify(&sys, &cof).unwrap().orbit, Orbit::Elliptic, "{c:?}");
        assert!(cof.normal_form_factor(&sys).is_ok(), "{c:?}");
    }
    // μ = 2 is not a rational square
    let sys = system(&ch, [0, 2, 0, 0, -1, 0]);
    assert!(matches!(AdaptedCoframe::normalized(&sys), Err(GStructureError::Irrational(_))));
    let wave = system(&ch, [0, 1, 0, 0, 1, 0]);
    assert!(matches!(AdaptedCoframe::normalized(&wave), Err(GStructureError::NotElliptic(Orbit::Hyperbolic))));
    let var = build_ma_system(&ch, [int(0), int(1), int(0), int(0), -ch.parse("1 + x1^2").unwrap(), int(0)]).unwrap();
    assert!(matches!(AdaptedCoframe::normalized(&var), Err(GStructureError::NeedsCoframe)));
}

#[test]
fn complex_coframe() {
    let ch = JetChart::default();
    let cof = AdaptedCoframe::standard(&ch);
    let cc = complexify(&cof).unwrap();
    let f = cc.frame();
    let pi = |l: &str| f.basis(l).unwrap();
    let half_i = ScalarExpr::i() * ScalarExpr::ratio(1, 2);
    let model = pi("pib1").wedge(&pi("pib2")).unwrap().sub(&pi("pi1").wedge(&pi("pi2")).unwrap()).unwrap();
    let real = cc.to_real(&model.scale(&half_i)).unwrap();
    let w = cof.frame().basis_forms();
    let expect = w[1].wedge(&w[2]).unwrap().add(&w[3].wedge(&w[4]).unwrap()).unwrap();
    assert_eq!(real, expect);

    let pib1 = cc.to_real(&pi("pi1").conj().unwrap()).unwrap();
    assert_eq!(pib1, w[3].sub(&w[1].scale(&ScalarExpr::i())).unwrap());
    assert_eq!(cc.to_real(&pi("pi2")).unwrap(), w[2].add(&w[4].scale(&ScalarExpr::i())).unwrap());
    for l in PI_LABELS {
        assert_eq!(pi(l).conj().unwrap().conj().unwrap(), pi(l));
        assert_eq!(cc.from_real(&cc.to_real(&pi(l)).unwrap()).unwrap(), pi(l));
    }
    for x in &w {
        assert_eq!(cc.to_real(&cc.from_real(x).unwrap()).unwrap(), *x);
    }

    // dπ⁰ on the flat coframe
    let d = pi("pi0").exterior_derivative().unwrap();
    assert_eq!(mod_ideal(&d, &[pi("pi0")]).unwrap(), model.scale(&half_i));

    let (p, pinv) = transform_pair();
    assert_eq!(p.mul(&pinv), mae_core::GMatrix::identity(5));
}

#[test]
fn conjugated_algebra_block() {
    let xi = xi_basis();
    let coeffs = [3, -1, 2, 5, -4, 1];
    let mut m = QMatrix::identity(4).scale(&Rational::new(1.into(), 2.into()));
    for (k, c) in coeffs.iter().enumerate() {
        m = m.add(&xi[k].matrix().scale(&Rational::from_integer((*c).into())));
    }
    let a00 = Rational::from_integer(1.into());
    let b = conjugate_block(&m, &a00);
    let g = |r: &Rational| GaussianRational::from_rational(r.clone());
    assert_eq!(b[(0, 0)], g(&a00));
    for k in 1..5 {
        assert!(b[(0, k)].is_zero() && b[(k, 0)].is_zero());
    }
    // (π¹, π²) do not mix with (π̄¹, π̄²), and the lower block is the conjugate
    for r in 0..2 {
        for c in 0..2 {
            assert!(b[(1 + r, 3 + c)].is_zero());
            assert!(b[(3 + r, 1 + c)].is_zero());
            assert_eq!(b[(3 + r, 3 + c)], b[(1 + r, 1 + c)].conj());
        }
    }
    let entry = g(&m[(0, 0)]) + GaussianRational::i() * g(&m[(0, 2)]);
    assert_eq!(b[(1, 1)], entry);
}

#[test]
fn flat_torsion_and_absorption() {
    let ch = JetChart::default();
    let cof = AdaptedCoframe::standard(&ch);
    let eqs = StructureEquations::new(complexify(&cof).unwrap());
    let t = compute_torsion(&eqs).unwrap();
    assert_eq!(
        strings(&t.rows[0]),
        ["-1/2*i", "0", "0", "0", "0", "1/2*i", "0", "0", "0", "0"].map(String::from)
    );
    assert!(t.rows[1].iter().chain(&t.rows[2]).all(Zero::is_zero));
    let (e, inv) = absorb(&eqs).unwrap();
    for v in [&inv.v1, &inv.v2, &inv.u1, &inv.u2] {
        assert!(v.is_zero());
    }
    let (_, again) = absorb(&e).unwrap();
    assert_eq!([&again.v1, &again.v2, &again.u1, &again.u2], [&inv.v1, &inv.v2, &inv.u1, &inv.u2]);
    assert!(integrability(&inv).unwrap().iter().all(|r| r.value.is_zero()));
    let b1 = reduce_to_b1(&e, &inv).unwrap();
    let p = &b1.p;
    for v in [&p.p, &p.p11, &p.p21, &p.p12, &p.p22] {
        assert!(v.is_zero());
    }
    assert!(b1.two_i_dpsi00.is_zero());
    assert!(laplace_test(p) && el_test(p));
    let (s1, s2) = invariants_s(p);
    assert!(s1.is_zero() && s2.is_zero());
    assert!(euler_lagrange_test(&laplace(&ch), 1).unwrap().is_certified());
}

#[test]
fn torsion_conjugation_symmetry() {
    let ch = JetChart::default();
    let (_, cof) = scaled_model(&ch, "1 + x1*x2", "1");
    let eqs = StructureEquations::new(complexify(&cof).unwrap());
    let t = compute_torsion(&eqs).unwrap();
    let f = eqs.frame();
    for (i, ib) in [(1, "pib1"), (2, "pib2")] {
        let tau = t.form(i, f).unwrap().conj().unwrap();
        let dbar = f.basis(ib).unwrap().exterior_derivative().unwrap();
        let dpi = f.basis(PI_LABELS[i]).unwrap().exterior_derivative().unwrap();
        // with ψ = 0 the torsion is dπ itself
        assert_eq!(t.form(i, f).unwrap(), dpi);
        assert_eq!(tau, dbar);
    }
}

#[test]
fn variational_non_flat_model() {
    let ch = JetChart::default();
    let (sys, cof) = scaled_model(&ch, "1 + x1^2", "1");
    assert_eq!(classify(&sys, &cof).unwrap().orbit, Orbit::Elliptic);
    assert_eq!(cof.normal_form_factor(&sys).unwrap(), int(1));
    let (inv, b1) = pipeline(&cof);
    let f2 = ch.parse("(1 + x1^2)^2").unwrap();
    let x1 = ScalarExpr::var("x1");
    let i = ScalarExpr::i();
    assert_eq!(inv.v1, &(&i * &x1) / &(&f2 * &int(4)));
    assert!(inv.v2.is_zero() && inv.u1.is_zero());
    assert_eq!(inv.u2, -&(&(&i * &x1) / &(&f2 * &int(2))));
    // the d(dπ⁰) relations: U1 = -2 conj(V2), U2 = 2 conj(V1)
    assert_eq!(inv.u1, -&(&inv.v2.conj() * &int(2)));
    assert_eq!(inv.u2, &inv.v1.conj() * &int(2));
    assert!(integrability(&inv).unwrap().iter().all(|r| r.value.is_zero()));

    let p = &b1.p;
    assert!(p.p.is_zero());
    assert!(p.p11.is_zero() && p.p21.is_zero() && p.p22.is_zero());
    let f4 = &f2 * &f2;
    assert_eq!(p.p12, &(&i * &(&x1.pow(2) - &ScalarExpr::ratio(1, 2))) / &f4);
    assert_eq!(b1.two_i_dpsi00, b1.display);
    let (s1, s2) = invariants_s(p);
    assert!(s2.is_zero() && !s1.is_zero());
    assert!(el_test(p) && !laplace_test(p));
    assert!(euler_lagrange_test(&sys, 2).unwrap().is_certified());
}

#[test]
fn non_variational_models() {
    let ch = JetChart::default();
    for (f, g) in [("1 + x1*x2", "1"), ("1 + p1^2", "1")] {
        let (sys, cof) = scaled_model(&ch, f, g);
        let (inv, b1) = pipeline(&cof);
        assert!(integrability(&inv).unwrap().iter().all(|r| r.value.is_zero()), "{f}");
        assert!(b1.p.p.is_zero(), "{f}");
        assert_eq!(b1.two_i_dpsi00, b1.display, "{f}");
        assert!(!el_test(&b1.p) && !laplace_test(&b1.p), "{f}");
        assert!(!euler_lagrange_test(&sys, 2).unwrap().is_certified(), "{f}");
    }
    let (_, cof) = scaled_model(&ch, "1 + p1^2", "1");
    let (_, b1) = pipeline(&cof);
    assert_eq!(b1.p.p21, -&(ScalarExpr::i() * ScalarExpr::ratio(1, 2)));
}

#[test]
fn generic_integrability_relations() {
    let g = symbolic::b0_integrability().unwrap();
    let u1 = complex_symbol("U1");
    let u2 = complex_symbol("U2");
    let v1 = complex_symbol("V1");
    let v2 = complex_symbol("V2");
    assert_eq!(g.solved_u[0], -&(&v2.conj() * &int(2)));
    assert_eq!(g.solved_u[1], &v1.conj() * &int(2));
    // (−2i)·coefficient of π̄¹∧π̄² in d(dπ⁰), up to the π⁰ factor
    let lin: Vec<_> = g.relations.iter().map(|r| r.expr.clone()).collect();
    let target = &u1 + &(&v2.conj() * &int(2));
    assert!(lin.iter().any(|e| {
        let q = e / &target;
        q.constant_value().is_some()
    }));
    let target = &u2 - &(&v1.conj() * &int(2));
    assert!(lin.iter().any(|e| (e / &target).constant_value().is_some()));
    assert!(g.congruence_rest.iter().all(|r| r.is_zero()));
    let text = g.congruence[0].to_string();
    for piece in ["dU1", "psi01", "psi11", "psi21", "psi00"] {
        assert!(text.contains(piece), "{text}");
    }
    let text = g.congruence[1].to_string();
    for piece in ["dU2", "psi02", "psi11", "psi12"] {
        assert!(text.contains(piece), "{text}");
    }
}

#[test]
fn generic_psi00_display() {
    let d = symbolic::b1_display().unwrap();
    assert!(d.rest.is_zero());
    let f = &d.frame;
    let c = |a: &str, b: &str| d.two_i_dpsi00.coefficient(&[a, b]).unwrap();
    let p = complex_symbol("P");
    let p12 = complex_symbol("P12");
    let p21 = complex_symbol("P21");
    assert_eq!(c("pi1", "pi2"), &p * &int(2));
    assert_eq!(c("pi1", "pib1"), &p12 + &p12.conj());
    assert_eq!(c("pi2", "pib2"), -&(&p21 + &p21.conj()));
    assert!(std::sync::Arc::ptr_eq(d.two_i_dpsi00.frame(), f));
}

#[test]
fn s_matrix_identities() {
    let p = PInvariants {
        p: int(0),
        p11: complex_symbol("P11"),
        p21: complex_symbol("P21"),
        p12: complex_symbol("P12"),
        p22: complex_symbol("P22"),
    };
    let (s1, s2) = invariants_s(&p);
    let two = |x: &ScalarExpr| x * &int(2);
    let sum = s1.add(&s2);
    let expect = mae_core::ExprMatrix::from_rows(vec![
        vec![two(&p.p11), two(&p.p21.conj())],
        vec![two(&p.p12), two(&p.p11.conj())],
    ]);
    assert_eq!(sum, expect);

    // real entries with P22 = P11, P21 = P12 = 0: S2 vanishes and S1 does not
    let real = PInvariants {
        p: int(0),
        p11: int(3),
        p21: int(0),
        p12: int(0),
        p22: int(3),
    };
    assert!(el_test(&real) && !laplace_test(&real));
    let (s1, _) = invariants_s(&real);
    assert_eq!(s1[(0, 0)], int(6));
}

mod props {
    use super::*;
    use proptest::prelude::*;

    fn small() -> impl Strategy<Value = ScalarExpr> {
        (-3i64..=3, -3i64..=3).prop_map(|(a, b)| ScalarExpr::from(GaussianRational::from_parts(a, b)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn laplace_implies_el(a in small(), b in small(), c in small(), d in small()) {
            let p = PInvariants { p: int(0), p11: a, p21: b, p12: c, p22: d };
            prop_assert!(!laplace_test(&p) || el_test(&p));
        }

        #[test]
        fn invariance_under_scaling(l in (-5i64..=5).prop_filter("nonzero", |l| *l != 0)) {
            let ch = JetChart::default();
            let cof = AdaptedCoframe::standard(&ch);
            for c in [[0, 1, 0, 0, -1, 0], [0, 1, 0, 0, 1, 0], [0, 0, 0, 0, 0, 1], [1, 0, 2, -2, 0, 1]] {
                prop_assert!(classify_invariance(&system(&ch, c), &cof, &Rational::from_integer(l.into())).unwrap());
            }
        }
    }
}
