//! Generic structure equations with symbolic torsion.
//!
//! Each frame here carries the five `π` labels plus pseudo-connection labels
//! whose differential is left undetermined. Complex torsion coefficients are
//! pairs of real symbols `X.re`, `X.im`. Every derivation only reads results
//! modulo forms that annihilate the undetermined `dψ` terms.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use super::complex::{PI_CONJ, PI_LABELS};
use super::GStructureError;
use crate::exterior::{mod_ideal, Form, FrameBuilder, FrameSpec};
use crate::symkernel::{ScalarExpr, Var};
use crate::ExprMatrix;

/// Torsion symbols of the first structure.
pub const B0_SYMBOLS: [&str; 4] = ["V1", "V2", "U1", "U2"];
/// Torsion symbols of the reduced structure: `P`, `P₁¹`, `P₂¹`, `P₁²`, `P₂²`.
pub const B1_SYMBOLS: [&str; 5] = ["P", "P11", "P21", "P12", "P22"];

/// `X.re + i·X.im`.
pub fn complex_symbol(name: &str) -> ScalarExpr {
    ScalarExpr::var(&format!("{name}.re")) + ScalarExpr::i() * ScalarExpr::var(&format!("{name}.im"))
}

/// Substitution sending each named complex symbol to a concrete value.
pub fn assignment(values: &[(&str, &ScalarExpr)]) -> BTreeMap<Var, ScalarExpr> {
    let mut m = BTreeMap::new();
    for (name, v) in values {
        m.insert(Var::from(format!("{name}.re").as_str()), v.re());
        m.insert(Var::from(format!("{name}.im").as_str()), v.im());
    }
    m
}

type Rows = Vec<(String, String, ScalarExpr)>;

fn conj_label(l: &str) -> String {
    if let Some(rest) = l.strip_prefix("psib") {
        format!("psi{rest}")
    } else if let Some(rest) = l.strip_prefix("psi") {
        if rest == "00" {
            l.to_string()
        } else {
            format!("psib{rest}")
        }
    } else if let Some(rest) = l.strip_prefix("pib") {
        format!("pi{rest}")
    } else if l == "pi0" {
        l.to_string()
    } else if let Some(rest) = l.strip_prefix("pi") {
        format!("pib{rest}")
    } else {
        l.to_string()
    }
}

fn conj_rows(rows: &Rows) -> Rows {
    rows.iter()
        .map(|(a, b, c)| (conj_label(a), conj_label(b), c.conj()))
        .collect()
}

fn row(entries: &[(&str, &str, ScalarExpr)]) -> Rows {
    entries
        .iter()
        .map(|(a, b, c)| (a.to_string(), b.to_string(), c.clone()))
        .collect()
}

fn int(n: i64) -> ScalarExpr {
    ScalarExpr::from(n)
}

fn half_i() -> ScalarExpr {
    ScalarExpr::i() * ScalarExpr::ratio(1, 2)
}

/// `dπ⁰ = −ψ₀⁰∧π⁰ + (i/2)(π̄¹∧π̄² − π¹∧π²)`.
fn dpi0_row() -> Rows {
    row(&[
        ("psi00", "pi0", int(-1)),
        ("pib1", "pib2", half_i()),
        ("pi1", "pi2", -half_i()),
    ])
}

struct Spec {
    connection: Vec<String>,
    rows: [Rows; 2],
    symbols: Vec<&'static str>,
    differentiate_symbols: bool,
}

fn build(spec: Spec) -> Arc<FrameSpec> {
    let mut b = FrameBuilder::new();
    for l in PI_LABELS {
        b = b.abstract_label(l);
    }
    let mut conj: Vec<(String, String)> = PI_CONJ.iter().map(|(a, c)| (a.to_string(), c.to_string())).collect();
    for c in &spec.connection {
        b = b.connection(c);
        let bar = conj_label(c);
        if bar != *c && c.starts_with("psi") && !c.starts_with("psib") {
            b = b.connection(&bar);
            conj.push((c.clone(), bar));
        }
    }
    if spec.differentiate_symbols {
        for s in &spec.symbols {
            for part in ["re", "im"] {
                let label = format!("d{s}.{part}");
                b = b.connection(&label);
                b = b.variable(&format!("{s}.{part}"), vec![(label.as_str(), int(1))]);
            }
        }
    }
    let [r1, r2] = spec.rows;
    let all = [dpi0_row(), r1.clone(), r2.clone(), conj_rows(&r1), conj_rows(&r2)];
    for (label, rows) in PI_LABELS.iter().zip(all) {
        b = b.declare_d(
            label,
            rows.iter().map(|(x, y, c)| (x.as_str(), y.as_str(), c.clone())).collect(),
        );
    }
    let pairs: Vec<(&str, &str)> = conj.iter().map(|(a, c)| (a.as_str(), c.as_str())).collect();
    b.conjugation(&pairs)
        .unchecked()
        .build()
        .expect("generic frames are well formed")
}

/// The first structure: `dπ¹ = −ψ₀¹∧π⁰ − ψ₁¹∧π¹ − ψ₂¹∧π² + V₁π¹∧π̄¹ +
/// V₂π¹∧π̄² + U₁π̄¹∧π̄²` and similarly for `dπ²`, with `ψ₂² = ψ₀⁰ − ψ₁¹`.
pub fn b0_frame() -> Arc<FrameSpec> {
    let [v1, v2, u1, u2] = B0_SYMBOLS.map(complex_symbol);
    let r1 = row(&[
        ("psi01", "pi0", int(-1)),
        ("psi11", "pi1", int(-1)),
        ("psi21", "pi2", int(-1)),
        ("pi1", "pib1", v1.clone()),
        ("pi1", "pib2", v2.clone()),
        ("pib1", "pib2", u1),
    ]);
    let r2 = row(&[
        ("psi02", "pi0", int(-1)),
        ("psi12", "pi1", int(-1)),
        ("psi00", "pi2", int(-1)),
        ("psi11", "pi2", int(1)),
        ("pi2", "pib1", v1),
        ("pi2", "pib2", v2),
        ("pib1", "pib2", u2),
    ]);
    build(Spec {
        connection: ["psi00", "psi01", "psi02", "psi11", "psi21", "psi12"].map(String::from).to_vec(),
        rows: [r1, r2],
        symbols: B0_SYMBOLS.to_vec(),
        differentiate_symbols: true,
    })
}

/// The reduced structure: `dπ¹ = −ψ₁¹∧π¹ − ψ₂¹∧π² + P π⁰∧π¹ + P₁¹π⁰∧π̄¹ +
/// P₂¹π⁰∧π̄²` and similarly for `dπ²`.
pub fn b1_frame() -> Arc<FrameSpec> {
    let [p, p11, p21, p12, p22] = B1_SYMBOLS.map(complex_symbol);
    let r1 = row(&[
        ("psi11", "pi1", int(-1)),
        ("psi21", "pi2", int(-1)),
        ("pi0", "pi1", p.clone()),
        ("pi0", "pib1", p11),
        ("pi0", "pib2", p21),
    ]);
    let r2 = row(&[
        ("psi12", "pi1", int(-1)),
        ("psi00", "pi2", int(-1)),
        ("psi11", "pi2", int(1)),
        ("pi0", "pi2", p),
        ("pi0", "pib1", p12),
        ("pi0", "pib2", p22),
    ]);
    build(Spec {
        connection: ["psi00", "psi11", "psi21", "psi12"].map(String::from).to_vec(),
        rows: [r1, r2],
        symbols: B1_SYMBOLS.to_vec(),
        differentiate_symbols: false,
    })
}

/// A vanishing coefficient forced by `d∘d = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub word: Vec<String>,
    pub expr: ScalarExpr,
}

fn relations(f: &Form) -> Vec<Relation> {
    let labels = f.frame().labels();
    f.terms()
        .into_iter()
        .map(|(idx, c)| Relation {
            word: idx.iter().map(|&k| labels[k].clone()).collect(),
            expr: c.clone(),
        })
        .collect()
}

/// Consequences of `d(dπ) = 0` for the first structure.
#[derive(Debug, Clone)]
pub struct B0Integrability {
    pub frame: Arc<FrameSpec>,
    /// `d(dπ⁰)` modulo `π⁰`.
    pub ddpi0: Form,
    /// Its coefficients, each of which must vanish.
    pub relations: Vec<Relation>,
    /// `U₁` and `U₂` solved from the relations in terms of `V₁`, `V₂`.
    pub solved_u: [ScalarExpr; 2],
    /// `L¹`, `L²` with `d(dπⁱ) ≡ Lⁱ∧π̄¹∧π̄² (mod π⁰, π¹, π²)`.
    pub congruence: [Form; 2],
    /// Whatever part of `d(dπⁱ)` modulo `π⁰, π¹, π²` is not of that shape.
    pub congruence_rest: [Form; 2],
}

/// Divides a 3-form by `a∧b`, keeping only words that contain both labels.
fn divide_by(f: &Form, a: &str, b: &str) -> Result<(Form, Form), GStructureError> {
    let frame = f.frame();
    let mut quotient = Form::zero(frame, 1);
    for l in frame.labels() {
        if l == a || l == b {
            continue;
        }
        let c = f.coefficient(&[l.as_str(), a, b])?;
        quotient = quotient.add(&frame.basis(l)?.scale(&c))?;
    }
    let ab = frame.basis(a)?.wedge(&frame.basis(b)?)?;
    let rest = f.sub(&quotient.wedge(&ab)?)?;
    Ok((quotient, rest))
}

pub fn b0_integrability() -> Result<B0Integrability, GStructureError> {
    let frame = b0_frame();
    let pi: Vec<Form> = PI_LABELS.iter().map(|l| frame.basis(l).unwrap()).collect();
    let dd = |k: usize| pi[k].exterior_derivative().and_then(|f| f.exterior_derivative());
    let ddpi0 = mod_ideal(&dd(0)?, &pi[..1])?;
    let relations = relations(&ddpi0);

    // solve the relations for the real and imaginary parts of U1, U2
    let unknowns = ["U1.re", "U1.im", "U2.re", "U2.im"];
    let mut conds = Vec::new();
    for r in &relations {
        conds.push(r.expr.re());
        conds.push(r.expr.im());
    }
    let mut a = ExprMatrix::zeros(conds.len(), unknowns.len());
    let mut rhs = vec![ScalarExpr::zero(); conds.len()];
    for (i, c) in conds.iter().enumerate() {
        for (key, v) in c.coefficients_in(&unknowns).expect("polynomial relations") {
            match key.iter().position(|&e| e == 1) {
                None => rhs[i] = -v,
                Some(col) => a[(i, col)] = v,
            }
        }
    }
    let x = a
        .solve(&rhs)
        .filter(|_| a.rank() == unknowns.len())
        .ok_or_else(|| GStructureError::Integrability {
            name: "d(dπ⁰)".into(),
            value: "relations do not determine U".into(),
        })?;
    let solved_u = [
        &x[0] + &(ScalarExpr::i() * x[1].clone()),
        &x[2] + &(ScalarExpr::i() * x[3].clone()),
    ];

    let low = &pi[..3];
    let mut congruence = Vec::new();
    let mut rest = Vec::new();
    for k in [1, 2] {
        let r = mod_ideal(&dd(k)?, low)?;
        let (l, extra) = divide_by(&r, "pib1", "pib2")?;
        congruence.push(l);
        rest.push(extra);
    }
    Ok(B0Integrability {
        frame,
        ddpi0,
        relations,
        solved_u: solved_u,
        congruence: congruence.try_into().expect("two rows"),
        congruence_rest: rest.try_into().expect("two rows"),
    })
}

/// The expansion of `dψ₀⁰` on the reduced structure.
#[derive(Debug, Clone)]
pub struct B1Display {
    pub frame: Arc<FrameSpec>,
    /// `2i·dψ₀⁰` modulo `π⁰`, as forced by `d(dπ⁰) = 0`.
    pub two_i_dpsi00: Form,
    /// The part of `d(dπ⁰)` not divisible by `π⁰`; zero when the reduced
    /// equations are consistent.
    pub rest: Form,
}

pub fn b1_display() -> Result<B1Display, GStructureError> {
    let frame = b1_frame();
    let pi0 = frame.basis("pi0")?;
    // computed with dψ₀⁰ = 0, so this is d(dπ⁰) + dψ₀⁰∧π⁰ = dψ₀⁰∧π⁰
    let z = pi0.exterior_derivative()?.exterior_derivative()?;
    let rest = mod_ideal(&z, &[pi0.clone()])?;
    let mut y = Form::zero(&frame, 2);
    let labels = frame.labels();
    for i in 0..labels.len() {
        for j in (i + 1)..labels.len() {
            if labels[i] == "pi0" || labels[j] == "pi0" {
                continue;
            }
            let c = z.coefficient(&[labels[i].as_str(), labels[j].as_str(), "pi0"])?;
            let w = frame.basis(&labels[i])?.wedge(&frame.basis(&labels[j])?)?;
            y = y.add(&w.scale(&c))?;
        }
    }
    let two_i = ScalarExpr::i() * int(2);
    Ok(B1Display {
        frame,
        two_i_dpsi00: y.scale(&two_i),
        rest,
    })
}
