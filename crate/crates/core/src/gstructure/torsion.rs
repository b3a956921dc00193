use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use super::complex::{ComplexCoframe, PI_LABELS};
use super::GStructureError;
use crate::exterior::{Form, FrameSpec};
use crate::symkernel::{ScalarExpr, Var};
use crate::ExprMatrix;

/// Basis 2-forms of the `π` frame in the order used for every `τⁱ`:
/// `π¹π², π¹π̄¹, π¹π̄², π²π̄¹, π²π̄², π̄¹π̄², π⁰π¹, π⁰π², π⁰π̄¹, π⁰π̄²`.
pub const TORSION_WORDS: [(&str, &str); 10] = [
    ("pi1", "pi2"),
    ("pi1", "pib1"),
    ("pi1", "pib2"),
    ("pi2", "pib1"),
    ("pi2", "pib2"),
    ("pib1", "pib2"),
    ("pi0", "pi1"),
    ("pi0", "pi2"),
    ("pi0", "pib1"),
    ("pi0", "pib2"),
];

/// Independent pseudo-connection entries, named `psi<lower><upper>`.
/// `ψ₂² = ψ₀⁰ − ψ₁¹` and the barred entries are conjugates; `ψ₀⁰` is real.
pub const CONNECTION_ENTRIES: [&str; 6] = ["psi00", "psi01", "psi02", "psi11", "psi21", "psi12"];

/// Semi-basic parts of the pseudo-connection on the section, as 1-forms in
/// the `π` frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Connection {
    entries: BTreeMap<String, Form>,
}

impl Connection {
    pub fn zero(frame: &Arc<FrameSpec>) -> Self {
        Connection {
            entries: CONNECTION_ENTRIES
                .iter()
                .map(|e| (e.to_string(), Form::zero(frame, 1)))
                .collect(),
        }
    }

    pub fn get(&self, entry: &str) -> &Form {
        &self.entries[entry]
    }

    pub fn set(&mut self, entry: &str, f: Form) {
        assert!(CONNECTION_ENTRIES.contains(&entry), "unknown connection entry {entry}");
        self.entries.insert(entry.to_string(), f);
    }

    /// `ψ₂² = ψ₀⁰ − ψ₁¹`.
    pub fn psi22(&self) -> Form {
        self.get("psi00").sub(self.get("psi11")).expect("same frame")
    }

    /// `(ψⁱⱼ, πʲ)` pairs of row `i` (0, 1 or 2).
    fn row(&self, i: usize) -> Vec<(Form, &'static str)> {
        let g = |e: &str| self.get(e).clone();
        match i {
            0 => vec![(g("psi00"), "pi0")],
            1 => vec![(g("psi01"), "pi0"), (g("psi11"), "pi1"), (g("psi21"), "pi2")],
            2 => vec![(g("psi02"), "pi0"), (g("psi12"), "pi1"), (self.psi22(), "pi2")],
            _ => unreachable!("rows 0..3"),
        }
    }
}

/// The unbarred rows of `dπ = −ψ∧π + τ` on a section; the barred rows are
/// their conjugates.
#[derive(Debug, Clone)]
pub struct StructureEquations {
    pub coframe: ComplexCoframe,
    pub connection: Connection,
}

impl StructureEquations {
    pub fn new(coframe: ComplexCoframe) -> Self {
        let connection = Connection::zero(coframe.frame());
        StructureEquations { coframe, connection }
    }

    pub fn frame(&self) -> &Arc<FrameSpec> {
        self.coframe.frame()
    }
}

/// Coefficients `T^i` of `τ⁰, τ¹, τ²` over [`TORSION_WORDS`].
#[derive(Debug, Clone, PartialEq)]
pub struct Torsion {
    pub rows: [[ScalarExpr; 10]; 3],
}

impl Torsion {
    pub fn get(&self, i: usize, word: (&str, &str)) -> &ScalarExpr {
        let k = TORSION_WORDS.iter().position(|w| *w == word).expect("torsion word");
        &self.rows[i][k]
    }

    pub fn form(&self, i: usize, frame: &Arc<FrameSpec>) -> Result<Form, GStructureError> {
        let mut f = Form::zero(frame, 2);
        for ((a, b), c) in TORSION_WORDS.iter().zip(&self.rows[i]) {
            f = f.add(&frame.basis(a)?.wedge(&frame.basis(b)?)?.scale(c))?;
        }
        Ok(f)
    }
}

/// `τⁱ = dπⁱ + ψⁱⱼ∧πʲ` for `i = 0, 1, 2`.
pub fn compute_torsion(eqs: &StructureEquations) -> Result<Torsion, GStructureError> {
    let frame = eqs.frame();
    let mut rows: [[ScalarExpr; 10]; 3] = Default::default();
    for (i, row) in rows.iter_mut().enumerate() {
        let mut tau = frame.basis(PI_LABELS[i])?.exterior_derivative()?;
        for (psi, label) in eqs.connection.row(i) {
            tau = tau.add(&psi.wedge(&frame.basis(label)?)?)?;
        }
        for (k, (a, b)) in TORSION_WORDS.iter().enumerate() {
            row[k] = tau.coefficient(&[a, b])?;
        }
    }
    Ok(Torsion { rows })
}

/// The torsion left after absorption on the first structure: `dπ¹` keeps
/// `V₁π¹∧π̄¹ + V₂π¹∧π̄² + U₁π̄¹∧π̄²` and `dπ²` keeps
/// `V₁π²∧π̄¹ + V₂π²∧π̄² + U₂π̄¹∧π̄²`.
#[derive(Debug, Clone, PartialEq)]
pub struct TorsionInvariants {
    pub v1: ScalarExpr,
    pub v2: ScalarExpr,
    pub u1: ScalarExpr,
    pub u2: ScalarExpr,
    pub torsion: Torsion,
}

/// A linear condition on the torsion, indexed by `(row, word)`.
#[derive(Debug, Clone, Copy)]
pub(crate) enum Target {
    Zero(usize, usize),
    Equal((usize, usize), (usize, usize)),
    RealPartZero(usize, usize),
}

/// Unknown semi-basic additions to the listed connection entries. `ψ₀⁰`
/// stays real: its `π⁰` coefficient is real and its barred coefficients are
/// conjugate to the unbarred ones.
fn unknown_forms(frame: &Arc<FrameSpec>, entries: &[&str]) -> (Vec<(String, Form)>, Vec<String>) {
    let mut names = Vec::new();
    let mut forms = Vec::new();
    let mut sym = |n: String| {
        names.push(n.clone());
        ScalarExpr::var(&n)
    };
    for e in entries {
        let mut f = Form::zero(frame, 1);
        if *e == "psi00" {
            let a0 = sym(format!("#{e}.0"));
            let coeffs = [(1usize, 3usize), (2, 4)].map(|(k, kb)| {
                let re = sym(format!("#{e}.{k}.re"));
                let im = sym(format!("#{e}.{k}.im"));
                (k, kb, re, im)
            });
            f = f.add(&frame.basis("pi0").unwrap().scale(&a0)).unwrap();
            for (k, kb, re, im) in coeffs {
                let c = &re + &(ScalarExpr::i() * im);
                f = f.add(&frame.basis(PI_LABELS[k]).unwrap().scale(&c)).unwrap();
                f = f.add(&frame.basis(PI_LABELS[kb]).unwrap().scale(&c.conj())).unwrap();
            }
        } else {
            for (k, label) in PI_LABELS.iter().enumerate() {
                let re = sym(format!("#{e}.{k}.re"));
                let im = sym(format!("#{e}.{k}.im"));
                let c = re + ScalarExpr::i() * im;
                f = f.add(&frame.basis(label).unwrap().scale(&c)).unwrap();
            }
        }
        forms.push((e.to_string(), f));
    }
    (forms, names)
}

/// Finds semi-basic modifications of `entries` making every target hold, by
/// one exact linear solve over the real and imaginary parts. Free unknowns
/// are set to zero.
pub(crate) fn absorb_with(
    eqs: &StructureEquations,
    entries: &[&str],
    targets: &[Target],
) -> Result<StructureEquations, GStructureError> {
    let frame = eqs.frame();
    let (unknowns, names) = unknown_forms(frame, entries);
    let mut trial = eqs.clone();
    for (e, f) in &unknowns {
        trial.connection.set(e, trial.connection.get(e).add(f)?);
    }
    let t = compute_torsion(&trial)?;
    let mut conditions = Vec::new();
    for target in targets {
        match *target {
            Target::Zero(i, k) => {
                conditions.push(t.rows[i][k].re());
                conditions.push(t.rows[i][k].im());
            }
            Target::Equal((i, k), (j, l)) => {
                let d = &t.rows[i][k] - &t.rows[j][l];
                conditions.push(d.re());
                conditions.push(d.im());
            }
            Target::RealPartZero(i, k) => conditions.push(t.rows[i][k].re()),
        }
    }
    let name_refs: Vec<&str> = names.iter().map(String::as_str).collect();
    let n = names.len();
    let mut a = ExprMatrix::zeros(conditions.len(), n);
    let mut rhs = vec![ScalarExpr::zero(); conditions.len()];
    for (r, c) in conditions.iter().enumerate() {
        let coeffs = c
            .coefficients_in(&name_refs)
            .expect("absorption unknowns never enter denominators");
        for (key, v) in coeffs {
            match key.iter().position(|&e| e == 1) {
                None => rhs[r] = -v,
                Some(col) => {
                    debug_assert_eq!(key.iter().sum::<u32>(), 1, "absorption is linear");
                    a[(r, col)] = v;
                }
            }
        }
    }
    let x = a.solve(&rhs).ok_or_else(|| {
        let residual: Vec<String> = targets
            .iter()
            .filter_map(|tg| match *tg {
                Target::Zero(i, k) if !t.rows[i][k].is_zero() => Some(format!("T{i}[{k}]")),
                _ => None,
            })
            .collect();
        GStructureError::Absorption(residual.join(", "))
    })?;
    let values: BTreeMap<Var, ScalarExpr> = names.iter().map(|n| Var::from(n.as_str())).zip(x).collect();
    let mut out = eqs.clone();
    for (e, f) in &unknowns {
        let solved = f.substitute_scalars(&values)?;
        out.connection.set(e, out.connection.get(e).add(&solved)?);
    }
    Ok(out)
}

const B0_TARGETS: [Target; 20] = [
    Target::Zero(0, 6),
    Target::Zero(0, 7),
    Target::Zero(0, 8),
    Target::Zero(0, 9),
    Target::Zero(1, 0),
    Target::Zero(1, 3),
    Target::Zero(1, 4),
    Target::Zero(1, 6),
    Target::Zero(1, 7),
    Target::Zero(1, 8),
    Target::Zero(1, 9),
    Target::Zero(2, 0),
    Target::Zero(2, 1),
    Target::Zero(2, 2),
    Target::Zero(2, 6),
    Target::Zero(2, 7),
    Target::Zero(2, 8),
    Target::Zero(2, 9),
    Target::Equal((2, 3), (1, 1)),
    Target::Equal((2, 4), (1, 2)),
];

/// Checks that `τ⁰ ≡ (i/2)(π̄¹∧π̄² − π¹∧π²)` modulo `π⁰`.
fn check_tau0(t: &Torsion) -> Result<(), GStructureError> {
    let half_i = ScalarExpr::i() * ScalarExpr::ratio(1, 2);
    for k in 0..6 {
        let expect = match k {
            0 => -half_i.clone(),
            5 => half_i.clone(),
            _ => ScalarExpr::zero(),
        };
        if t.rows[0][k] != expect {
            let (a, b) = TORSION_WORDS[k];
            return Err(GStructureError::NotAdapted(format!(
                "τ⁰ has coefficient {} on {a}^{b}",
                t.rows[0][k]
            )));
        }
    }
    Ok(())
}

/// Absorbs all removable torsion of the first structure, starting from the
/// connection already present in `eqs`.
pub fn absorb(eqs: &StructureEquations) -> Result<(StructureEquations, TorsionInvariants), GStructureError> {
    check_tau0(&compute_torsion(eqs)?)?;
    let out = absorb_with(eqs, &CONNECTION_ENTRIES, &B0_TARGETS)?;
    let torsion = compute_torsion(&out)?;
    let inv = TorsionInvariants {
        v1: torsion.rows[1][1].clone(),
        v2: torsion.rows[1][2].clone(),
        u1: torsion.rows[1][5].clone(),
        u2: torsion.rows[2][5].clone(),
        torsion,
    };
    Ok((out, inv))
}
