use num_traits::Zero;

use super::coframe::AdaptedCoframe;
use super::complex::{complexify, PI_LABELS};
use super::symbolic::{self, assignment, B0_SYMBOLS, B1_SYMBOLS};
use super::torsion::{absorb, absorb_with, compute_torsion, StructureEquations, Target, TorsionInvariants};
use super::GStructureError;
use crate::exterior::{mod_ideal, Form};
use crate::symkernel::ScalarExpr;
use crate::ExprMatrix;

/// A generic integrability relation evaluated on concrete torsion.
#[derive(Debug, Clone, PartialEq)]
pub struct RelationValue {
    pub name: String,
    pub generic: ScalarExpr,
    pub value: ScalarExpr,
}

/// Evaluates the relations forced by `d(dπ⁰) = 0` on the invariants of an
/// absorbed structure. All values vanish for a consistent input.
pub fn integrability(inv: &TorsionInvariants) -> Result<Vec<RelationValue>, GStructureError> {
    let generic = symbolic::b0_integrability()?;
    let vals = [&inv.v1, &inv.v2, &inv.u1, &inv.u2];
    let map = assignment(&B0_SYMBOLS.iter().copied().zip(vals).collect::<Vec<_>>());
    generic
        .relations
        .iter()
        .map(|r| {
            Ok(RelationValue {
                name: r.word.join("^"),
                generic: r.expr.clone(),
                value: r.expr.substitute(&map)?,
            })
        })
        .collect()
}

/// `P` and the four coefficients `Pⱼⁱ` of the reduced structure equations
/// `dπⁱ = −ψⁱⱼ∧πʲ + P π⁰∧πⁱ + Pⱼⁱ π⁰∧π̄ʲ`.
#[derive(Debug, Clone, PartialEq)]
pub struct PInvariants {
    pub p: ScalarExpr,
    pub p11: ScalarExpr,
    pub p21: ScalarExpr,
    pub p12: ScalarExpr,
    pub p22: ScalarExpr,
}

impl PInvariants {
    fn values(&self) -> [&ScalarExpr; 5] {
        [&self.p, &self.p11, &self.p21, &self.p12, &self.p22]
    }
}

#[derive(Debug, Clone)]
pub struct B1Equations {
    pub eqs: StructureEquations,
    pub p: PInvariants,
    /// `cⁱ` of the shift `πⁱ ← πⁱ + cⁱπ⁰` that normalized `U` to zero.
    pub shift: [ScalarExpr; 2],
    /// `2i·dψ₀⁰` modulo `π⁰`, computed directly on the section.
    pub two_i_dpsi00: Form,
    /// The generic expansion of the same form with the `P`'s substituted.
    pub display: Form,
}

const B1_TARGETS: [Target; 20] = [
    Target::Zero(0, 6),
    Target::Zero(0, 7),
    Target::Zero(0, 8),
    Target::Zero(0, 9),
    Target::Zero(1, 0),
    Target::Zero(1, 1),
    Target::Zero(1, 2),
    Target::Zero(1, 3),
    Target::Zero(1, 4),
    Target::Zero(1, 5),
    Target::Zero(1, 7),
    Target::Zero(2, 0),
    Target::Zero(2, 1),
    Target::Zero(2, 2),
    Target::Zero(2, 3),
    Target::Zero(2, 4),
    Target::Zero(2, 5),
    Target::Zero(2, 6),
    Target::Equal((2, 7), (1, 6)),
    Target::RealPartZero(1, 6),
];

fn shifted(cof: &AdaptedCoframe, c: &[ScalarExpr; 2]) -> Result<AdaptedCoframe, GStructureError> {
    // π¹ + c¹π⁰ = (w3 + Re c¹ w0) + i(w1 + Im c¹ w0), and likewise for π²
    let w = cof.forms();
    let add = |k: usize, s: ScalarExpr| w[k].add(&w[0].scale(&s));
    let forms = [
        w[0].clone(),
        add(1, c[0].im())?,
        add(2, c[1].re())?,
        add(3, c[0].re())?,
        add(4, c[1].im())?,
    ];
    AdaptedCoframe::new(cof.chart(), forms)
}

/// Reduces an absorbed first structure to the structure on which the torsion
/// `τ¹, τ²` vanishes, and absorbs again with the remaining connection.
pub fn reduce_to_b1(eqs: &StructureEquations, inv: &TorsionInvariants) -> Result<B1Equations, GStructureError> {
    let two_i = ScalarExpr::i() * ScalarExpr::from(2);
    let shift = [&two_i * &inv.u1, &two_i * &inv.u2];
    let base = if shift.iter().all(Zero::is_zero) {
        eqs.clone()
    } else {
        let cof = shifted(&eqs.coframe.adapted, &shift)?;
        let (e, i) = absorb(&StructureEquations::new(complexify(&cof)?))?;
        for (name, v) in [("U1", &i.u1), ("U2", &i.u2), ("V1", &i.v1), ("V2", &i.v2)] {
            if !v.is_zero() {
                return Err(GStructureError::Integrability {
                    name: format!("{name} after the shift"),
                    value: v.to_string(),
                });
            }
        }
        e
    };
    let mut start = base.clone();
    for e in ["psi01", "psi02"] {
        start.connection.set(e, Form::zero(base.frame(), 1));
    }
    let out = absorb_with(&start, &["psi00", "psi11", "psi21", "psi12"], &B1_TARGETS)?;
    let t = compute_torsion(&out)?;
    let p = PInvariants {
        p: t.rows[1][6].clone(),
        p11: t.rows[1][8].clone(),
        p21: t.rows[1][9].clone(),
        p12: t.rows[2][8].clone(),
        p22: t.rows[2][9].clone(),
    };

    let frame = out.frame();
    let pi0 = frame.basis("pi0")?;
    let dpsi = out.connection.get("psi00").exterior_derivative()?;
    let two_i_dpsi00 = mod_ideal(&dpsi.scale(&two_i), &[pi0.clone()])?;
    let generic = symbolic::b1_display()?;
    let map = assignment(&B1_SYMBOLS.iter().copied().zip(p.values()).collect::<Vec<_>>());
    let dict = PI_LABELS
        .iter()
        .map(|l| Ok((l.to_string(), frame.basis(l)?)))
        .collect::<Result<_, GStructureError>>()?;
    let display = generic.two_i_dpsi00.substitute_scalars(&map)?.substitute(frame, &dict)?;
    Ok(B1Equations {
        eqs: out,
        p,
        shift,
        two_i_dpsi00,
        display,
    })
}

/// The two matrices assembled from the `Pⱼⁱ`:
/// `S₁ = [[P₁¹ + P̄₂², P̄₂¹ + P₂¹], [P₁² − P̄₁², P̄₁¹ + P₂²]]` and
/// `S₂ = [[P₁¹ − P̄₂², P̄₂¹ − P₂¹], [P₁² + P̄₁², P̄₁¹ − P₂²]]`.
pub fn invariants_s(p: &PInvariants) -> (ExprMatrix, ExprMatrix) {
    let c = |x: &ScalarExpr| x.conj();
    let s1 = ExprMatrix::from_rows(vec![
        vec![&p.p11 + &c(&p.p22), &c(&p.p21) + &p.p21],
        vec![&p.p12 - &c(&p.p12), &c(&p.p11) + &p.p22],
    ]);
    let s2 = ExprMatrix::from_rows(vec![
        vec![&p.p11 - &c(&p.p22), &c(&p.p21) - &p.p21],
        vec![&p.p12 + &c(&p.p12), &c(&p.p11) - &p.p22],
    ]);
    (s1, s2)
}

/// `S₁ = S₂ = 0`.
pub fn laplace_test(p: &PInvariants) -> bool {
    let (s1, s2) = invariants_s(p);
    s1.is_zero() && s2.is_zero()
}

/// `S₂ = 0`.
pub fn el_test(p: &PInvariants) -> bool {
    invariants_s(p).1.is_zero()
}
