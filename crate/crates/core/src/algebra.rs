//! The pairing on 2-forms of R⁴, the elliptic structure algebra and its
//! identification with sl(2, C).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::exterior::{Form, FrameBuilder, FrameSpec};
use crate::linalg::Matrix;
use crate::symkernel::{GaussianRational, ScalarExpr};
use crate::{GMatrix, QMatrix, Rational};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("bracket of a real 4x4 element with an sl(2,C) element")]
    KindMismatch,
    #[error("matrix is not in the span of the ξ basis")]
    OutsideSpan,
    #[error("2-form coefficients must be real constants")]
    NotConstant,
    #[error("expected a {0}x{0} matrix")]
    Shape(usize),
}

fn omega_frame() -> &'static Arc<FrameSpec> {
    static FRAME: OnceLock<Arc<FrameSpec>> = OnceLock::new();
    FRAME.get_or_init(|| {
        FrameBuilder::new()
            .abstract_label("w1")
            .abstract_label("w2")
            .abstract_label("w3")
            .abstract_label("w4")
            .build()
            .expect("closed frame")
    })
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

fn to_expr(r: &Rational) -> ScalarExpr {
    ScalarExpr::constant(GaussianRational::from_rational(r.clone()))
}

fn real_part(e: &ScalarExpr) -> Result<Rational, AlgebraError> {
    match e.constant_value() {
        Some(c) if c.is_real() => Ok(c.re),
        _ => Err(AlgebraError::NotConstant),
    }
}

/// A 2-form on R⁴ with real constant coefficients, over the fixed coframe
/// `(w1, w2, w3, w4)`.
#[derive(Clone, PartialEq)]
pub struct TwoFormR4(Form);

impl TwoFormR4 {
    pub fn frame() -> &'static Arc<FrameSpec> {
        omega_frame()
    }

    /// `sum c * w_i ^ w_j` with 1-based indices.
    pub fn from_terms(terms: &[(usize, usize, i64)]) -> Self {
        let f = omega_frame();
        let b = f.basis_forms();
        let mut out = Form::zero(f, 2);
        for &(i, j, c) in terms {
            let t = b[i - 1].wedge(&b[j - 1]).expect("same frame").scale(&ScalarExpr::from(c));
            out = out.add(&t).expect("same frame");
        }
        TwoFormR4(out)
    }

    pub fn from_form(f: Form) -> Result<Self, AlgebraError> {
        if !Arc::ptr_eq(f.frame(), omega_frame()) || f.degree() != 2 {
            return Err(AlgebraError::NotConstant);
        }
        for (_, c) in f.terms() {
            real_part(c)?;
        }
        Ok(TwoFormR4(f))
    }

    pub fn form(&self) -> &Form {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        TwoFormR4(self.0.add(&o.0).expect("same frame"))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        TwoFormR4(self.0.scale(&to_expr(k)))
    }

    /// Coefficient of `w_i ^ w_j`.
    pub fn coefficient(&self, i: usize, j: usize) -> Rational {
        real_part(&self.0.coefficient_idx(&[i - 1, j - 1])).expect("real constant coefficients")
    }
}

impl fmt::Display for TwoFormR4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl fmt::Debug for TwoFormR4 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TwoFormR4({})", self.0)
    }
}

/// `α_L^a`, `a` in 1..=3.
pub fn alpha_l(a: usize) -> TwoFormR4 {
    match a {
        1 => TwoFormR4::from_terms(&[(1, 2, 1), (3, 4, 1)]),
        2 => TwoFormR4::from_terms(&[(1, 3, 1), (4, 2, 1)]),
        3 => TwoFormR4::from_terms(&[(1, 4, 1), (2, 3, 1)]),
        _ => panic!("alpha index out of range"),
    }
}

/// `α_R^a`, `a` in 1..=3.
pub fn alpha_r(a: usize) -> TwoFormR4 {
    match a {
        1 => TwoFormR4::from_terms(&[(1, 2, 1), (3, 4, -1)]),
        2 => TwoFormR4::from_terms(&[(1, 3, 1), (4, 2, -1)]),
        3 => TwoFormR4::from_terms(&[(1, 4, 1), (2, 3, -1)]),
        _ => panic!("alpha index out of range"),
    }
}

/// `(α_L¹, α_L², α_L³, α_R¹, α_R², α_R³)`.
pub fn alpha_basis() -> [TwoFormR4; 6] {
    [alpha_l(1), alpha_l(2), alpha_l(3), alpha_r(1), alpha_r(2), alpha_r(3)]
}

/// `a ∧ b` divided by the volume form.
pub fn pairing(a: &TwoFormR4, b: &TwoFormR4) -> Rational {
    let top = a.0.wedge(&b.0).expect("same frame");
    real_part(&top.coefficient_idx(&[0, 1, 2, 3])).expect("real constant coefficients")
}

fn check_square(m: &QMatrix, n: usize) -> Result<(), AlgebraError> {
    if m.nrows() == n && m.ncols() == n {
        Ok(())
    } else {
        Err(AlgebraError::Shape(n))
    }
}

/// `g* α`: each `w_i` is replaced by `sum_j g[i][j] w_j`. Functorial in the
/// contravariant sense, `(gh)* = h* ∘ g*`.
pub fn pullback_action(g: &QMatrix, a: &TwoFormR4) -> Result<TwoFormR4, AlgebraError> {
    check_square(g, 4)?;
    let f = omega_frame();
    let b = f.basis_forms();
    let dict: BTreeMap<String, Form> = (0..4)
        .map(|i| {
            let mut img = Form::zero(f, 1);
            for (j, bj) in b.iter().enumerate() {
                img = img.add(&bj.scale(&to_expr(&g[(i, j)]))).expect("same frame");
            }
            (f.labels()[i].clone(), img)
        })
        .collect();
    Ok(TwoFormR4(a.0.substitute(f, &dict).expect("complete dictionary")))
}

/// The derivation induced by `ξ`: `D w_i = sum_j ξ[i][j] w_j`, extended by
/// the Leibniz rule. This is the linearization of `g* α` at the identity.
pub fn infinitesimal_action(xi: &QMatrix, a: &TwoFormR4) -> Result<TwoFormR4, AlgebraError> {
    check_square(xi, 4)?;
    let mut out = TwoFormR4::from_terms(&[]);
    for i in 1..=4 {
        for j in i + 1..=4 {
            let c = a.coefficient(i, j);
            if c.is_zero() {
                continue;
            }
            let mut t = Vec::new();
            for k in 1..=4 {
                // D(w_i ^ w_j) = D w_i ^ w_j + w_i ^ D w_j
                t.push((k, j, xi[(i - 1, k - 1)].clone()));
                t.push((i, k, xi[(j - 1, k - 1)].clone()));
            }
            for (x, y, s) in t {
                if x != y && !s.is_zero() {
                    out = out.add(&TwoFormR4::from_terms(&[(x, y, 1)]).scale(&(&s * &c)));
                }
            }
        }
    }
    Ok(out)
}

/// Gram matrix of the pairing in the α basis.
pub fn gram_matrix() -> QMatrix {
    let basis = alpha_basis();
    Matrix::from_rows(
        basis
            .iter()
            .map(|a| basis.iter().map(|b| pairing(a, b)).collect())
            .collect(),
    )
}

/// `(positive, negative)` inertia of the pairing.
pub fn signature() -> (usize, usize) {
    let (p, n, _) = gram_matrix().inertia();
    (p, n)
}

/// An element of the elliptic structure algebra.
#[derive(Debug, Clone, PartialEq)]
pub struct LieElement(QMatrix);

/// Outcome of a membership test, with the two residues as witnesses.
#[derive(Debug, Clone)]
pub struct Membership {
    pub member: bool,
    pub trace: Rational,
    pub residue_l1: TwoFormR4,
    pub residue_l3: TwoFormR4,
}

pub fn membership(xi: &QMatrix) -> Result<Membership, AlgebraError> {
    check_square(xi, 4)?;
    let trace = (0..4).fold(Rational::zero(), |acc, k| acc + xi[(k, k)].clone());
    let residue_l1 = infinitesimal_action(xi, &alpha_l(1))?;
    let residue_l3 = infinitesimal_action(xi, &alpha_l(3))?;
    Ok(Membership {
        member: trace.is_zero() && residue_l1.is_zero() && residue_l3.is_zero(),
        trace,
        residue_l1,
        residue_l3,
    })
}

impl LieElement {
    pub fn new(m: QMatrix) -> Result<Self, AlgebraError> {
        if membership(&m)?.member {
            Ok(LieElement(m))
        } else {
            Err(AlgebraError::OutsideSpan)
        }
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.0
    }

    pub fn bracket(&self, o: &Self) -> Self {
        LieElement(self.0.mul(&o.0).sub(&o.0.mul(&self.0)))
    }

    pub fn add(&self, o: &Self) -> Self {
        LieElement(self.0.add(&o.0))
    }

    pub fn scale(&self, k: &Rational) -> Self {
        LieElement(self.0.scale(k))
    }

    pub fn zero() -> Self {
        LieElement(QMatrix::zeros(4, 4))
    }

    /// Coordinates in the ξ basis.
    pub fn coordinates(&self) -> Result<[Rational; 6], AlgebraError> {
        xi_coordinates(&self.0)
    }
}

/// The six basis matrices `ξ_1 .. ξ_6`.
pub fn xi_basis() -> [LieElement; 6] {
    let m = |rows: [[i64; 4]; 4]| {
        LieElement(QMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect(),
        ))
    };
    [
        m([[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, 1, 0], [0, 0, 0, -1]]),
        m([[0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0], [1, 0, 0, 0]]),
        m([[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 0, -1], [0, 0, 0, 0]]),
        m([[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]),
        m([[0, 0, 0, 0], [-1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0]]),
        m([[0, 0, 0, 1], [0, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 0]]),
    ]
}

fn flatten(m: &QMatrix) -> Vec<Rational> {
    m.to_rows().into_iter().flatten().collect()
}

/// Coordinates of a 4x4 matrix in the ξ basis, by exact linear solve.
pub fn xi_coordinates(m: &QMatrix) -> Result<[Rational; 6], AlgebraError> {
    check_square(m, 4)?;
    let cols: Vec<Vec<Rational>> = xi_basis().iter().map(|x| flatten(&x.0)).collect();
    let a = Matrix::from_rows(cols).transpose();
    let x = a.solve(&flatten(m)).ok_or(AlgebraError::OutsideSpan)?;
    Ok(x.try_into().expect("six coordinates"))
}

/// Dimension of the solution space of the linearized conditions (trace zero,
/// `D α_L¹ = D α_L³ = 0`), set up from scratch on all 16 entries, and the
/// rank of that space together with the ξ basis.
pub fn solved_algebra_dimension() -> (usize, usize) {
    let mut rows: Vec<Vec<Rational>> = vec![(0..16).map(|k| if k % 5 == 0 { q(1) } else { q(0) }).collect()];
    let unit = |k: usize| {
        let mut m = QMatrix::zeros(4, 4);
        m[(k / 4, k % 4)] = q(1);
        m
    };
    for alpha in [alpha_l(1), alpha_l(3)] {
        let images: Vec<TwoFormR4> = (0..16)
            .map(|k| infinitesimal_action(&unit(k), &alpha).expect("4x4"))
            .collect();
        for i in 1..=4 {
            for j in i + 1..=4 {
                rows.push(images.iter().map(|f| f.coefficient(i, j)).collect());
            }
        }
    }
    let sys = Matrix::from_rows(rows);
    let kernel = sys.nullspace();
    let mut joint: Vec<Vec<Rational>> = kernel.clone();
    joint.extend(xi_basis().iter().map(|x| flatten(&x.0)));
    (kernel.len(), Matrix::from_rows(joint).rank())
}

/// A traceless 2x2 complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Sl2CElement(GMatrix);

impl Sl2CElement {
    pub fn new(m: GMatrix) -> Result<Self, AlgebraError> {
        if m.nrows() != 2 || m.ncols() != 2 {
            return Err(AlgebraError::Shape(2));
        }
        if !(m[(0, 0)].clone() + m[(1, 1)].clone()).is_zero() {
            return Err(AlgebraError::OutsideSpan);
        }
        Ok(Sl2CElement(m))
    }

    pub fn matrix(&self) -> &GMatrix {
        &self.0
    }

    pub fn bracket(&self, o: &Self) -> Self {
        Sl2CElement(self.0.mul(&o.0).sub(&o.0.mul(&self.0)))
    }

    pub fn add(&self, o: &Self) -> Self {
        Sl2CElement(self.0.add(&o.0))
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        Sl2CElement(self.0.scale(k))
    }

    pub fn zero() -> Self {
        Sl2CElement(GMatrix::zeros(2, 2))
    }
}

/// Either kind of algebra element, for brackets chosen at runtime.
#[derive(Debug, Clone, PartialEq)]
pub enum AlgElement {
    Real(LieElement),
    Complex(Sl2CElement),
}

pub fn bracket(a: &AlgElement, b: &AlgElement) -> Result<AlgElement, AlgebraError> {
    match (a, b) {
        (AlgElement::Real(x), AlgElement::Real(y)) => Ok(AlgElement::Real(x.bracket(y))),
        (AlgElement::Complex(x), AlgElement::Complex(y)) => Ok(AlgElement::Complex(x.bracket(y))),
        _ => Err(AlgebraError::KindMismatch),
    }
}

/// `T(X) = (x³ + i x¹, x² + i x⁴)`.
pub fn t_map(x: &[Rational; 4]) -> [GaussianRational; 2] {
    [
        GaussianRational::new(x[2].clone(), x[0].clone()),
        GaussianRational::new(x[1].clone(), x[3].clone()),
    ]
}

fn col(m: &QMatrix, k: usize) -> [Rational; 4] {
    [0, 1, 2, 3].map(|i| m[(i, k)].clone())
}

/// Solves `A T(e_k) = T(ξ e_k)` for the complex 2x2 matrix `A`, using all
/// four standard basis vectors (8 complex equations in 4 unknowns).
pub fn solve_equivariant(xi: &QMatrix) -> Result<Sl2CElement, AlgebraError> {
    check_square(xi, 4)?;
    let zero = GaussianRational::zero();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for k in 0..4 {
        let mut e = [q(0), q(0), q(0), q(0)];
        e[k] = q(1);
        let tx = t_map(&e);
        let img = t_map(&col(xi, k));
        for r in 0..2 {
            // unknowns a00, a01, a10, a11
            let mut row = vec![zero.clone(); 4];
            row[2 * r] = tx[0].clone();
            row[2 * r + 1] = tx[1].clone();
            rows.push(row);
            rhs.push(img[r].clone());
        }
    }
    let a = GMatrix::from_rows(rows)
        .solve(&rhs)
        .ok_or(AlgebraError::OutsideSpan)?;
    Sl2CElement::new(GMatrix::from_rows(vec![
        vec![a[0].clone(), a[1].clone()],
        vec![a[2].clone(), a[3].clone()],
    ]))
}

/// sl(2, C) names matched to `ξ_1 .. ξ_6`.
pub const SL2C_NAMES: [&str; 6] = ["h0", "e0", "f1", "h1", "e1", "f0"];

/// Concrete matrices for `Φ(ξ_1) .. Φ(ξ_6)`, derived from equivariance.
pub fn phi_generators() -> [Sl2CElement; 6] {
    xi_basis().map(|x| solve_equivariant(&x.0).expect("ξ basis is complex-linear under T"))
}

/// The named sl(2, C) basis `(h0, e0, f0, h1, e1, f1)`.
pub fn sl2c_basis() -> BTreeMap<&'static str, Sl2CElement> {
    SL2C_NAMES.iter().copied().zip(phi_generators()).collect()
}

/// Real-linear extension of `ξ_i -> Φ(ξ_i)`.
pub fn phi_map(xi: &QMatrix) -> Result<Sl2CElement, AlgebraError> {
    let c = xi_coordinates(xi)?;
    let gens = phi_generators();
    Ok(c.iter().zip(&gens).fold(Sl2CElement::zero(), |acc, (k, g)| {
        acc.add(&g.scale(&GaussianRational::from_rational(k.clone())))
    }))
}

/// One bracket identity: `[lhs.0, lhs.1] = sum coeff * basis[k]`, indices
/// into the ξ basis (0-based).
#[derive(Debug, Clone, Serialize)]
pub struct BracketIdentity {
    pub lhs: (usize, usize),
    pub rhs: Vec<(usize, i64)>,
}

impl BracketIdentity {
    fn render(&self, names: &[&str; 6]) -> String {
        let mut rhs = String::new();
        for (n, (k, c)) in self.rhs.iter().enumerate() {
            let sign = if *c < 0 { "-" } else if n > 0 { "+" } else { "" };
            let mag = c.abs();
            let coef = if mag == 1 { String::new() } else { mag.to_string() };
            rhs.push_str(&format!("{sign}{coef}{}", names[*k]));
        }
        if rhs.is_empty() {
            rhs.push('0');
        }
        format!("[{}, {}] = {}", names[self.lhs.0], names[self.lhs.1], rhs)
    }
}

/// The structure-constant table: 13 rows, 15 identities (the first row
/// covers three commuting pairs).
pub fn table1() -> Vec<BracketIdentity> {
    let id = |a: usize, b: usize, rhs: &[(usize, i64)]| BracketIdentity {
        lhs: (a - 1, b - 1),
        rhs: rhs.iter().map(|&(k, c)| (k - 1, c)).collect(),
    };
    vec![
        id(1, 4, &[]),
        id(2, 5, &[]),
        id(3, 6, &[]),
        id(1, 2, &[(2, -2)]),
        id(1, 3, &[(3, 2)]),
        id(1, 5, &[(5, -2)]),
        id(1, 6, &[(6, 2)]),
        id(4, 2, &[(5, -2)]),
        id(4, 6, &[(3, 2)]),
        id(4, 5, &[(2, 2)]),
        id(4, 3, &[(6, -2)]),
        id(2, 6, &[(1, -1)]),
        id(2, 3, &[(4, -1)]),
        id(5, 6, &[(4, -1)]),
        id(5, 3, &[(1, 1)]),
    ]
}

/// Result of checking one identity in both presentations.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityCheck {
    pub real: String,
    pub real_holds: bool,
    pub complex: String,
    pub complex_holds: bool,
}

pub fn verify_table() -> Vec<IdentityCheck> {
    let xi = xi_basis();
    let phi = phi_generators();
    let xi_names = ["ξ1", "ξ2", "ξ3", "ξ4", "ξ5", "ξ6"];
    table1()
        .into_iter()
        .map(|idt| {
            let (a, b) = idt.lhs;
            let rx = idt.rhs.iter().fold(LieElement::zero(), |acc, &(k, c)| {
                acc.add(&xi[k].scale(&q(c)))
            });
            let rc = idt.rhs.iter().fold(Sl2CElement::zero(), |acc, &(k, c)| {
                acc.add(&phi[k].scale(&GaussianRational::from_int(c)))
            });
            IdentityCheck {
                real: idt.render(&xi_names),
                real_holds: xi[a].bracket(&xi[b]) == rx,
                complex: idt.render(&SL2C_NAMES),
                complex_holds: phi[a].bracket(&phi[b]) == rc,
            }
        })
        .collect()
}

/// Compares the closed-form brackets `[h_a, e_b] = -2 i^(a+b) e0`,
/// `[h_a, f_b] = -2 i^(a+b) f0`, `[e_a, f_b] = -i^(a+b) h0` with the
/// derived matrices. Returns one line per disagreeing instance.
pub fn generic_formula_discrepancies() -> Vec<String> {
    let b = sl2c_basis();
    let ipow = |n: usize| match n % 4 {
        0 => GaussianRational::from_int(1),
        1 => GaussianRational::i(),
        2 => GaussianRational::from_int(-1),
        _ => -GaussianRational::i(),
    };
    let mut out = Vec::new();
    let cases: [(&str, &str, &str, i64); 3] = [("h", "e", "e0", -2), ("h", "f", "f0", -2), ("e", "f", "h0", -1)];
    for (x, y, target, k) in cases {
        for a in 0..2 {
            for c in 0..2 {
                let l = format!("{x}{a}");
                let r = format!("{y}{c}");
                let lhs = b[l.as_str()].bracket(&b[r.as_str()]);
                let coeff = ipow(a + c) * GaussianRational::from_int(k);
                let rhs = b[target].scale(&coeff);
                if lhs != rhs {
                    out.push(format!("[{l}, {r}]: formula gives {coeff}*{target}, matrices give {}", describe(&lhs, &b)));
                }
            }
        }
    }
    out
}

/// Expresses an sl(2,C) element over the named basis with real coefficients.
fn describe(e: &Sl2CElement, b: &BTreeMap<&str, Sl2CElement>) -> String {
    let names = ["h0", "e0", "f0", "h1", "e1", "f1"];
    // real coordinates: split every matrix entry into re/im
    let flat = |m: &Sl2CElement| -> Vec<Rational> {
        m.0.to_rows()
            .into_iter()
            .flatten()
            .flat_map(|g| [g.re, g.im])
            .collect()
    };
    let a = Matrix::from_rows(names.iter().map(|n| flat(&b[n])).collect()).transpose();
    match a.solve(&flat(e)) {
        Some(x) => {
            let terms: Vec<String> = x
                .iter()
                .zip(names)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, n)| format!("{}*{n}", crate::field::rational_to_string(c)))
                .collect();
            if terms.is_empty() {
                "0".into()
            } else {
                terms.join(" + ")
            }
        }
        None => "outside basis".into(),
    }
}

/// Every algebra identity, for the `verify-algebra` command.
#[derive(Debug, Clone, Serialize)]
pub struct AlgebraReport {
    pub gram_diagonal: Vec<String>,
    pub signature: (usize, usize),
    pub basis_members: bool,
    pub solved_dimension: usize,
    pub span_rank: usize,
    pub table: Vec<IdentityCheck>,
    pub jacobi_ok: bool,
    pub homomorphism_ok: bool,
    pub equivariance_ok: bool,
    pub generic_formula_discrepancies: Vec<String>,
}

impl AlgebraReport {
    pub fn all_hold(&self) -> bool {
        self.signature == (3, 3)
            && self.basis_members
            && self.solved_dimension == 6
            && self.span_rank == 6
            && self.table.iter().all(|c| c.real_holds && c.complex_holds)
            && self.jacobi_ok
            && self.homomorphism_ok
            && self.equivariance_ok
    }
}

pub fn jacobi_holds() -> bool {
    let xi = xi_basis();
    for a in 0..6 {
        for b in a + 1..6 {
            for c in b + 1..6 {
                let s = xi[a]
                    .bracket(&xi[b].bracket(&xi[c]))
                    .add(&xi[b].bracket(&xi[c].bracket(&xi[a])))
                    .add(&xi[c].bracket(&xi[a].bracket(&xi[b])));
                if s != LieElement::zero() {
                    return false;
                }
            }
        }
    }
    true
}

pub fn homomorphism_holds() -> bool {
    let xi = xi_basis();
    let phi = phi_generators();
    (0..6).all(|a| {
        (a + 1..6).all(|b| phi_map(xi[a].bracket(&xi[b]).matrix()).ok() == Some(phi[a].bracket(&phi[b])))
    })
}

pub fn equivariance_holds() -> bool {
    let xi = xi_basis();
    let phi = phi_generators();
    xi.iter().zip(&phi).all(|(x, p)| {
        (0..4).all(|k| {
            let mut e = [q(0), q(0), q(0), q(0)];
            e[k] = q(1);
            let lhs = t_map(&col(x.matrix(), k));
            let rhs = p.0.mul_vec(&t_map(&e));
            lhs.as_slice() == rhs.as_slice()
        })
    })
}

pub fn verify_all() -> AlgebraReport {
    let gram = gram_matrix();
    let (solved_dimension, span_rank) = solved_algebra_dimension();
    AlgebraReport {
        gram_diagonal: (0..6).map(|k| crate::field::rational_to_string(&gram[(k, k)])).collect(),
        signature: signature(),
        basis_members: xi_basis().iter().all(|x| membership(x.matrix()).map(|m| m.member).unwrap_or(false)),
        solved_dimension,
        span_rank,
        table: verify_table(),
        jacobi_ok: jacobi_holds(),
        homomorphism_ok: homomorphism_holds(),
        equivariance_ok: equivariance_holds(),
        generic_formula_discrepancies: generic_formula_discrepancies(),
    }
}
