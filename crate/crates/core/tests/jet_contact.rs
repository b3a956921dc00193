use mae_core::exterior::mod_ideal;
use mae_core::jet_contact::{
    build_ma_system, contact_form, euler_lagrange_test, expand_to_pde, restrict_to_graph, ElVerdict,
    JetChart, JetError, MongeAmpereSystem,
};
use mae_core::{Form, ScalarExpr};
use num_traits::Zero;
use proptest::prelude::*;

fn int(n: i64) -> ScalarExpr {
    ScalarExpr::from(n)
}

fn v(s: &str) -> ScalarExpr {
    ScalarExpr::var(s)
}

fn laplace(ch: &JetChart) -> MongeAmpereSystem {
    build_ma_system(ch, [int(0), int(1), int(0), int(0), int(-1), int(0)]).unwrap()
}

fn det_hessian(ch: &JetChart) -> MongeAmpereSystem {
    build_ma_system(ch, [int(1), int(0), int(0), int(0), int(0), int(-1)]).unwrap()
}

#[test]
fn contact_form_and_its_derivative() {
    let ch = JetChart::default();
    let th = contact_form(&ch);
    assert_eq!(th.to_string(), "-p1*dx1 - p2*dx2 + dz");
    let dth = th.exterior_derivative().unwrap();
    assert_eq!(dth.coefficient(&["dp1", "dx1"]).unwrap(), int(-1));
    assert_eq!(dth.coefficient(&["dp2", "dx2"]).unwrap(), int(-1));
    assert_eq!(dth.len(), 2);
    let top = th.wedge(&dth).unwrap().wedge(&dth).unwrap();
    // (dθ)² = 2 dx1^dp1^dx2^dp2, so the dz-led word carries 2
    assert_eq!(top.coefficient(&["dz", "dp1", "dx1", "dp2", "dx2"]).unwrap(), int(2));
}

#[test]
fn validated_systems() {
    let ch = JetChart::default();
    let lap = laplace(&ch);
    let expect = Form::from_terms(
        ch.frame(),
        2,
        &[(&["dp1", "dx2"], int(1)), (&["dp2", "dx1"], int(-1))],
    )
    .unwrap();
    assert_eq!(lap.psi, expect);
    det_hessian(&ch);
    let bad = build_ma_system(&ch, [int(0), int(0), int(0), int(1), int(0), int(0)]);
    match bad {
        Err(JetError::Compatibility { residue }) => assert!(!residue.is_empty()),
        other => panic!("expected a compatibility error, got {other:?}"),
    }
    assert!(matches!(
        build_ma_system(&ch, [int(0), int(0), int(0), int(0), int(0), int(0)]),
        Err(JetError::Degenerate)
    ));
    // a Ψ that only differs by a multiple of θ is degenerate
    let th = contact_form(&ch);
    let theta_only = th.wedge(&ch.d(0)).unwrap();
    assert!(matches!(
        MongeAmpereSystem::from_psi(&ch, theta_only),
        Err(JetError::Degenerate)
    ));
}

#[test]
fn pde_expansion() {
    let ch = JetChart::default();
    let lap = expand_to_pde(&laplace(&ch));
    assert_eq!(lap.u11, int(1));
    assert_eq!(lap.u22, int(1));
    assert!(lap.det.is_zero() && lap.u12.is_zero() && lap.zeroth.is_zero());

    let mongeamp = expand_to_pde(&det_hessian(&ch));
    assert_eq!(mongeamp.det, int(1));
    assert_eq!(mongeamp.zeroth, int(-1));
    assert!(mongeamp.u11.is_zero() && mongeamp.u22.is_zero() && mongeamp.u12.is_zero());

    let single = build_ma_system(&ch, [int(0), int(1), int(0), int(0), int(0), int(0)]).unwrap();
    let pde = expand_to_pde(&single);
    assert_eq!(pde.u11, int(1));
    assert!(pde.u22.is_zero() && pde.zeroth.is_zero());
}

#[test]
fn graph_restrictions() {
    let ch = JetChart::default();
    let lap = laplace(&ch);
    let harmonic = (v("x1").pow(2) - v("x2").pow(2)) * ScalarExpr::ratio(1, 2);
    assert!(restrict_to_graph(&lap.psi, &ch, &harmonic).unwrap().is_zero());
    let r = restrict_to_graph(&lap.psi, &ch, &v("x1").pow(2)).unwrap();
    assert_eq!(r.coefficient(&["dx1", "dx2"]).unwrap(), int(2));
    assert!(restrict_to_graph(&lap.psi, &ch, &v("z")).is_err());
}

#[test]
fn euler_lagrange_examples() {
    let ch = JetChart::default();
    for sys in [laplace(&ch), det_hessian(&ch)] {
        let pi = sys.theta.wedge(&sys.psi).unwrap();
        assert!(pi.exterior_derivative().unwrap().is_zero());
        match euler_lagrange_test(&sys, 2).unwrap() {
            ElVerdict::Certified { phi, closed_mod_ideal } => {
                assert!(phi.is_zero());
                assert!(closed_mod_ideal);
            }
            other => panic!("{other:?}"),
        }
    }
    // rescaling Π by λ(z) = 1 + z² keeps the verdict; φ picks up d log λ
    let lambda = int(1) + v("z").pow(2);
    let scaled = MongeAmpereSystem::from_psi(&ch, laplace(&ch).psi.scale(&lambda)).unwrap();
    match euler_lagrange_test(&scaled, 2).unwrap() {
        ElVerdict::Certified { phi, closed_mod_ideal } => {
            assert!(closed_mod_ideal);
            let pi = scaled.theta.wedge(&scaled.psi).unwrap();
            assert_eq!(pi.exterior_derivative().unwrap(), phi.wedge(&pi).unwrap());
            let dlog = ch.d(2).scale(&(int(2) * v("z") / lambda.clone()));
            assert_eq!(phi, dlog);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn euler_lagrange_ignores_theta_multiples() {
    let ch = JetChart::default();
    let base = laplace(&ch);
    let rho = ch.d(0).scale(&v("p2")).add(&ch.d(3)).unwrap();
    let shifted = base.psi.add(&rho.wedge(&base.theta).unwrap()).unwrap();
    let sys = MongeAmpereSystem::from_psi(&ch, shifted).unwrap();
    assert_eq!(sys.psi_coeffs, base.psi_coeffs);
    assert_eq!(
        euler_lagrange_test(&sys, 2).unwrap().is_certified(),
        euler_lagrange_test(&base, 2).unwrap().is_certified()
    );
}

fn systems(ch: &JetChart) -> Vec<MongeAmpereSystem> {
    vec![
        laplace(ch),
        det_hessian(ch),
        build_ma_system(
            ch,
            [v("z"), int(1) + v("x1"), -v("x2"), v("x2"), v("p1"), v("p2") * v("z")],
        )
        .unwrap(),
    ]
}

fn poly_u() -> impl Strategy<Value = ScalarExpr> {
    prop::collection::vec((-4i64..=4, 0u32..=3, 0u32..=3), 1..=5).prop_map(|ts| {
        ts.into_iter()
            .filter(|(_, a, b)| a + b <= 3)
            .fold(ScalarExpr::zero(), |acc, (c, a, b)| {
                acc + int(c) * v("x1").pow(a) * v("x2").pow(b)
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn restriction_matches_pde(u in poly_u()) {
        let ch = JetChart::default();
        for sys in systems(&ch) {
            let pde = expand_to_pde(&sys);
            let lhs = restrict_to_graph(&sys.psi, &ch, &u).unwrap();
            let rhs = pde.residual(&ch, &u).unwrap();
            prop_assert_eq!(lhs.coefficient(&["dx1", "dx2"]).unwrap(), rhs);
            prop_assert!(restrict_to_graph(&sys.theta, &ch, &u).unwrap().is_zero());
        }
    }
}

#[test]
fn coefficients_round_trip() {
    let ch = JetChart::default();
    for sys in systems(&ch) {
        let th = [sys.theta.clone()];
        let a = mod_ideal(&sys.psi, &th).unwrap();
        let b = mod_ideal(&sys.psi_from_coeffs(), &th).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn euler_lagrange_negative_outcomes() {
    let ch = JetChart::default();
    // u11 + z u22 = 0: no polynomial multiplier of degree ≤ 2 exists
    let sys = build_ma_system(&ch, [int(0), int(1), int(0), int(0), -v("z"), int(0)]).unwrap();
    assert!(matches!(
        euler_lagrange_test(&sys, 2).unwrap(),
        ElVerdict::NotCertified { degree: 2 }
    ));
    // Δu + u1 = 0 is variational (weight e^{x1}); φ = -dx1 is closed
    let sys = build_ma_system(&ch, [int(0), int(1), int(0), int(0), int(-1), v("p1")]).unwrap();
    assert!(euler_lagrange_test(&sys, 2).unwrap().is_certified());
    // Δu + u1² = 0: φ = -2 p1 dx1 solves dΠ = φ∧Π but dφ is not in the ideal
    let sys =
        build_ma_system(&ch, [int(0), int(1), int(0), int(0), int(-1), v("p1").pow(2)]).unwrap();
    match euler_lagrange_test(&sys, 2).unwrap() {
        ElVerdict::Certified { phi, closed_mod_ideal } => {
            assert_eq!(phi, ch.d(0).scale(&(int(-2) * v("p1"))));
            assert!(!closed_mod_ideal);
        }
        other => panic!("{other:?}"),
    }
}
