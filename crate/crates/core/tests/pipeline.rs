use std::path::Path;

use mae_core::jet_contact::{build_ma_system, expand_to_pde};
use mae_core::pipeline::*;
use mae_core::ScalarExpr;

fn systems(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../systems").join(name)
}

fn status(r: &Report, stage: &str) -> &'static str {
    match r.stage(stage).map(|s| &s.outcome) {
        Some(Outcome::Ok) => "ok",
        Some(Outcome::Error { .. }) => "error",
        Some(Outcome::Skipped { .. }) => "skipped",
        None => "absent",
    }
}

fn input(src: &str) -> Input {
    Input::System {
        source: "inline".into(),
        file: parse_system_str(src).unwrap(),
    }
}

#[test]
fn bundled_laplace_file() {
    let f = parse_system(&systems("laplace.masys")).unwrap();
    assert_eq!(f.psi.clone().map(|c| c.to_string()), ["0", "1", "0", "0", "-1", "0"].map(String::from));
    assert!(f.coframe.is_none());
    assert_eq!((f.el_degree, f.probes, f.seed), (2, 32, 0));
    let sys = build_ma_system(&f.chart, f.psi.clone()).unwrap();
    let pde = expand_to_pde(&sys);
    assert_eq!((pde.u11, pde.u22), (ScalarExpr::from(1), ScalarExpr::from(1)));
    let json = parse_system(&systems("laplace.json")).unwrap();
    assert_eq!(json.psi, f.psi);
}

#[test]
fn input_errors() {
    let e = parse_system_str("psi = 0, 1, 0, 0, -1").unwrap_err();
    assert_eq!(e, InputError::Arity { line: 1, got: 5 });
    let e = parse_system_str("# comment\n\npsi = 0, sin(x1), 0, 0, -1, 0\n").unwrap_err();
    match e {
        InputError::Syntax { line, col, msg } => {
            assert_eq!((line, col), (3, 10));
            assert!(msg.contains("sin"), "{msg}");
        }
        other => panic!("{other:?}"),
    }
    let e = parse_system_str("psi = 0, 1, 0, 0, -1, 0 +\n").unwrap_err();
    assert!(matches!(e, InputError::Syntax { line: 1, .. }), "{e:?}");
    let e = parse_system_str("psi = 0, 1, 0, 0, -1, y\n").unwrap_err();
    assert!(matches!(e, InputError::Syntax { line: 1, col: 23, .. }), "{e:?}");
    assert!(matches!(parse_system_str("psi 0\n"), Err(InputError::Syntax { line: 1, col: 1, .. })));
    assert!(matches!(parse_system_str("colour = 1\npsi = 0,1,0,0,-1,0"), Err(InputError::Invalid { line: 1, .. })));
    assert!(matches!(parse_system_str("seed = 1\n"), Err(InputError::Invalid { .. })));
    assert!(matches!(
        parse_system_str("psi = 0,1,0,0,-1,0\nw0 = dz\n"),
        Err(InputError::Invalid { line: 2, .. })
    ));
    assert!(matches!(
        parse_system_str("psi = 0,1,0,0,-1,0\nseed = -1\n"),
        Err(InputError::Syntax { line: 2, .. })
    ));
    assert!(matches!(parse_system_str("{\"psi\": [\"1\"]}"), Err(InputError::Arity { line: 0, got: 1 })));
    assert!(matches!(parse_system_str("{\"psi\": 3}"), Err(InputError::Syntax { .. })));
    let e = parse_system(Path::new("/nonexistent/x.masys")).unwrap_err();
    assert!(matches!(e, InputError::Io { .. }));
    // a 1-form must be linear in the differentials
    let src = "psi = 0,1,0,0,-1,0\nw0 = dz*dx1\nw1 = dx1\nw2 = dp1\nw3 = dx2\nw4 = dp2\n";
    assert!(matches!(parse_system_str(src), Err(InputError::Syntax { line: 2, .. })));
}

#[test]
fn custom_coordinates_and_coframe() {
    let src = "coordinates = x, y, u, p, q\npsi = 0, 1, 0, 0, -1, 0\n\
               w0 = du - p*dx - q*dy\nw1 = dx\nw2 = dp\nw3 = dy\nw4 = dq\nprobes = 4\nseed = 9\n";
    let f = parse_system_str(src).unwrap();
    assert_eq!(f.coordinates[2], "u");
    assert_eq!((f.probes, f.seed), (4, 9));
    let r = run(&input(src), Command::Invariants, &Options::default());
    for s in ["system", "classify", "euler_lagrange", "torsion", "reduction"] {
        assert_eq!(status(&r, s), "ok", "{s}: {}", r.to_text());
    }
    assert_eq!(r.stage("classify").unwrap().data.as_ref().unwrap()["coframe"], "user");
}

#[test]
fn stage_selection_and_skips() {
    let lap = std::fs::read_to_string(systems("laplace.masys")).unwrap();
    let r = run(&input(&lap), Command::Classify, &Options::default());
    let names: Vec<&str> = r.stages.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["system", "classify"]);
    let r = run(&input(&lap), Command::All, &Options::default());
    let names: Vec<&str> = r.stages.iter().map(|s| s.name.as_str()).collect();
    assert_eq!(names, ["system", "classify", "euler_lagrange", "torsion", "reduction", "cartan", "algebra"]);
    assert_eq!(r.exit_code(), 0);
    let red = r.stage("reduction").unwrap().data.clone().unwrap();
    assert_eq!(red["laplace_test"], true);
    assert_eq!(red["el_test"], true);
    assert_eq!(red["jet_el_certified"], true);
    assert_eq!(red["S1"], serde_json::json!([["0", "0"], ["0", "0"]]));

    let wave = std::fs::read_to_string(systems("wave.masys")).unwrap();
    let r = run(&input(&wave), Command::All, &Options::default());
    assert_eq!(r.stage("classify").unwrap().data.as_ref().unwrap()["orbit"], "Hyperbolic");
    for s in ["torsion", "reduction", "cartan"] {
        assert_eq!(status(&r, s), "skipped");
    }
    assert_eq!(r.exit_code(), 0);

    // a sign-changing multiplier fails classification; dependents are skipped
    let r = run(&input("psi = 0, 1, 0, 0, -x1, 0"), Command::All, &Options::default());
    assert_eq!(status(&r, "classify"), "error");
    assert_eq!(status(&r, "torsion"), "skipped");
    assert_eq!(status(&r, "cartan"), "skipped");
    assert_eq!(r.exit_code(), 1);

    // non-constant coefficients without a coframe cannot be normalized
    let r = run(&input("psi = 0, 1, 0, 0, -(1 + x1^2), 0"), Command::Invariants, &Options::default());
    assert_eq!(status(&r, "classify"), "ok");
    assert_eq!(status(&r, "torsion"), "error");
    assert_eq!(status(&r, "reduction"), "skipped");
}

#[test]
fn variational_file() {
    let r = run(
        &Input::System {
            source: "variational".into(),
            file: parse_system(&systems("variational.masys")).unwrap(),
        },
        Command::Invariants,
        &Options::default(),
    );
    let red = r.stage("reduction").unwrap().data.clone().unwrap();
    assert_eq!((red["el_test"].clone(), red["laplace_test"].clone()), (true.into(), false.into()));
    assert_eq!(red["P_vanishes"], true);
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn builtin_cartan_and_algebra() {
    let r = run(&Input::EllipticReduced, Command::Cartan, &Options::default());
    let c = r.stage("cartan").unwrap().data.clone().unwrap();
    assert_eq!(c["s_prime"], serde_json::json!([3, 1, 0]));
    assert_eq!(c["r_indeterminacy"], 4);
    assert_eq!(c["involutive"], false);
    assert_eq!(c["stated_r"], serde_json::json!([5, 4]));
    assert_eq!(c["m_x"][2], serde_json::json!(["-x2", "x2", "0", "-x1"]));
    let r = run(&Input::None, Command::VerifyAlgebra, &Options::default());
    let a = r.stage("algebra").unwrap().data.clone().unwrap();
    assert_eq!(a["signature"], serde_json::json!([3, 3]));
    assert_eq!(r.exit_code(), 0);
}

#[test]
fn options_override_and_determinism() {
    let lap = std::fs::read_to_string(systems("laplace.masys")).unwrap();
    let opts = Options {
        seed: Some(7),
        probes: Some(5),
        el_degree: Some(1),
    };
    let a = run(&input(&lap), Command::All, &opts);
    let b = run(&input(&lap), Command::All, &opts);
    assert_eq!(a.to_json(), b.to_json());
    assert_eq!(a.to_text(), b.to_text());
    let c = a.stage("cartan").unwrap().data.clone().unwrap();
    assert_eq!((c["seed"].clone(), c["random_probes"].clone()), (7.into(), 5.into()));
    assert_eq!(a.stage("euler_lagrange").unwrap().data.as_ref().unwrap()["degree"], 1);
}
