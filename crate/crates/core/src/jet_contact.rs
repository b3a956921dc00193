//! The 1-jet space of functions of two variables, its contact form, and
//! Monge-Ampère systems `(θ, Ψ)` on it.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::exterior::{mod_ideal, reduce_mod_ideal, ExteriorError, Form, FrameSpec};
use crate::linalg::Matrix;
use crate::symkernel::{gcd, CoordinateSystem, GaussianRational, Monomial, Poly, ScalarExpr, SymError, Var};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum JetError {
    #[error("contact condition fails: θ∧dθ∧dθ = 0")]
    NotContact,
    #[error("Ψ vanishes modulo θ")]
    Degenerate,
    #[error("compatibility fails: Ψ∧dθ mod θ = {residue}")]
    Compatibility { residue: String },
    #[error("graph function must be a polynomial in {0} and {1} only")]
    NotAGraph(String, String),
    #[error("coefficient {index}: {source}")]
    Coefficient { index: usize, source: SymError },
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
}

/// Coordinates `(x1, x2, z, p1, p2)` of the 1-jet space, in this order.
#[derive(Debug, Clone)]
pub struct JetChart {
    names: [String; 5],
    frame: Arc<FrameSpec>,
}

impl Default for JetChart {
    fn default() -> Self {
        Self::new(["x1", "x2", "z", "p1", "p2"])
    }
}

impl JetChart {
    pub fn new(names: [&str; 5]) -> Self {
        JetChart {
            names: names.map(str::to_string),
            frame: FrameSpec::coordinates(&names),
        }
    }

    pub fn frame(&self) -> &Arc<FrameSpec> {
        &self.frame
    }

    pub fn names(&self) -> &[String; 5] {
        &self.names
    }

    pub fn coordinates(&self) -> CoordinateSystem {
        CoordinateSystem::new(&self.names)
    }

    pub fn coord(&self, k: usize) -> ScalarExpr {
        ScalarExpr::var(&self.names[k])
    }

    /// `d` of the k-th coordinate.
    pub fn d(&self, k: usize) -> Form {
        self.frame.basis_forms()[k].clone()
    }

    /// `dp_a ∧ dx_b` style basis 2-form from two coordinate indices.
    fn dd(&self, a: usize, b: usize) -> Form {
        self.d(a).wedge(&self.d(b)).expect("same frame")
    }

    /// Parses an expression in the chart coordinates.
    pub fn parse(&self, src: &str) -> Result<ScalarExpr, SymError> {
        self.coordinates().parse(src)
    }
}

const X1: usize = 0;
const X2: usize = 1;
const Z: usize = 2;
const P1: usize = 3;
const P2: usize = 4;

/// The six `(dp/dx)` words, in the coefficient order
/// `(p1p2, p1x2, p2x2, p1x1, p2x1, x1x2)`.
const PSI_WORDS: [(usize, usize); 6] = [(P1, P2), (P1, X2), (P2, X2), (P1, X1), (P2, X1), (X1, X2)];

pub fn contact_form(chart: &JetChart) -> Form {
    chart
        .d(Z)
        .sub(&chart.d(X1).scale(&chart.coord(P1)))
        .and_then(|t| t.sub(&chart.d(X2).scale(&chart.coord(P2))))
        .expect("same frame")
}

/// The linear condition on the coefficients equivalent to `Ψ∧dθ ≡ 0 mod θ`:
/// `Ψ_{p1x1} + Ψ_{p2x2} = 0`.
pub fn compatibility_residue(coeffs: &[ScalarExpr; 6]) -> ScalarExpr {
    &coeffs[3] + &coeffs[2]
}

#[derive(Debug, Clone)]
pub struct MongeAmpereSystem {
    pub chart: JetChart,
    pub theta: Form,
    pub psi: Form,
    pub psi_coeffs: [ScalarExpr; 6],
}

/// Builds `Ψ` from its six coefficients and validates the system.
pub fn build_ma_system(chart: &JetChart, coeffs: [ScalarExpr; 6]) -> Result<MongeAmpereSystem, JetError> {
    let mut psi = Form::zero(chart.frame(), 2);
    for (c, (a, b)) in coeffs.iter().zip(PSI_WORDS) {
        psi = psi.add(&chart.dd(a, b).scale(c))?;
    }
    MongeAmpereSystem::from_psi(chart, psi)
}

impl MongeAmpereSystem {
    /// Validates an arbitrary 2-form `Ψ` (which may contain `dz`).
    pub fn from_psi(chart: &JetChart, psi: Form) -> Result<Self, JetError> {
        let theta = contact_form(chart);
        let dtheta = theta.exterior_derivative()?;
        if theta.wedge(&dtheta)?.wedge(&dtheta)?.is_zero() {
            return Err(JetError::NotContact);
        }
        let reduced = mod_ideal(&psi, &[theta.clone()])?;
        if reduced.is_zero() {
            return Err(JetError::Degenerate);
        }
        let residue = mod_ideal(&psi.wedge(&dtheta)?, &[theta.clone()])?;
        if !residue.is_zero() {
            return Err(JetError::Compatibility {
                residue: residue.to_string(),
            });
        }
        let psi_coeffs = PSI_WORDS.map(|(a, b)| reduced.coefficient_idx(&[a, b]));
        Ok(MongeAmpereSystem {
            chart: chart.clone(),
            theta,
            psi,
            psi_coeffs,
        })
    }

    /// `Ψ` rebuilt from its coefficients; equal to `Ψ` modulo `θ`.
    pub fn psi_from_coeffs(&self) -> Form {
        let mut psi = Form::zero(self.chart.frame(), 2);
        for (c, (a, b)) in self.psi_coeffs.iter().zip(PSI_WORDS) {
            psi = psi.add(&self.chart.dd(a, b).scale(c)).expect("same frame");
        }
        psi
    }
}

/// `det·(u11 u22 - u12²) + a11·u11 + a22·u22 + a12·u12 + c = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarPDE {
    pub det: ScalarExpr,
    pub u11: ScalarExpr,
    pub u22: ScalarExpr,
    pub u12: ScalarExpr,
    pub zeroth: ScalarExpr,
}

impl ScalarPDE {
    /// Left-hand side evaluated on explicit second derivatives.
    pub fn residual_with(&self, u11: &ScalarExpr, u12: &ScalarExpr, u22: &ScalarExpr) -> ScalarExpr {
        &self.det * &(u11 * u22 - u12 * u12) + &self.u11 * u11 + &self.u22 * u22 + &self.u12 * u12
            + self.zeroth.clone()
    }

    /// Left-hand side along the 1-jet of a polynomial `u(x1, x2)`.
    pub fn residual(&self, chart: &JetChart, u: &ScalarExpr) -> Result<ScalarExpr, JetError> {
        let (sub, _) = graph_substitution(chart, u)?;
        let [x1, x2] = [&chart.names[X1], &chart.names[X2]];
        let d = |a: &ScalarExpr, v: &str| a.derivative(v);
        let lhs = self.residual_with(&d(&d(u, x1), x1), &d(&d(u, x1), x2), &d(&d(u, x2), x2));
        Ok(lhs.substitute(&sub).map_err(|e| JetError::Coefficient { index: 0, source: e })?)
    }
}

const U_NAMES: [&str; 3] = ["u11", "u12", "u22"];

/// The second-order PDE cut out by `Ψ|Σ = 0` on 1-jet graphs, obtained by
/// pulling `Ψ` back along `dp_a = u_ab dx^b`.
pub fn expand_to_pde(sys: &MongeAmpereSystem) -> ScalarPDE {
    let ch = &sys.chart;
    let mut names: Vec<&str> = ch.names.iter().map(String::as_str).collect();
    names.extend(U_NAMES);
    // only the two base differentials survive; everything else is a symbol
    let plane = FrameSpec::coordinates(&[ch.names[X1].as_str(), ch.names[X2].as_str()])
        .with_constants(&names[2..]);
    let dx1 = plane.basis_forms()[0].clone();
    let dx2 = plane.basis_forms()[1].clone();
    let comb = |a: ScalarExpr, b: ScalarExpr| dx1.scale(&a).add(&dx2.scale(&b)).expect("same frame");
    let u = |k: usize| ScalarExpr::var(U_NAMES[k]);
    let dict: BTreeMap<String, Form> = [
        (X1, dx1.clone()),
        (X2, dx2.clone()),
        (Z, comb(ch.coord(P1), ch.coord(P2))),
        (P1, comb(u(0), u(1))),
        (P2, comb(u(1), u(2))),
    ]
    .into_iter()
    .map(|(k, f)| (ch.frame().labels()[k].clone(), f))
    .collect();
    let pulled = sys.psi.substitute(&plane, &dict).expect("complete dictionary");
    let top = pulled.coefficient_idx(&[0, 1]);
    let coeffs = top
        .coefficients_in(&U_NAMES)
        .expect("pullback is polynomial in the second derivatives");
    let get = |e: [u32; 3]| coeffs.get(e.as_slice()).cloned().unwrap_or_else(ScalarExpr::zero);
    let det = get([1, 0, 1]);
    debug_assert_eq!(get([0, 2, 0]), -det.clone());
    ScalarPDE {
        u11: get([1, 0, 0]),
        u12: get([0, 1, 0]),
        u22: get([0, 0, 1]),
        zeroth: get([0, 0, 0]),
        det,
    }
}

/// `z -> u, p_a -> ∂_a u` for a polynomial `u` in the base coordinates.
fn graph_substitution(chart: &JetChart, u: &ScalarExpr) -> Result<(BTreeMap<Var, ScalarExpr>, [ScalarExpr; 2]), JetError> {
    let [x1, x2] = [&chart.names[X1], &chart.names[X2]];
    if !u.is_polynomial() || u.variables().iter().any(|v| &**v != x1 && &**v != x2) {
        return Err(JetError::NotAGraph(x1.clone(), x2.clone()));
    }
    let grad = [u.derivative(x1), u.derivative(x2)];
    let mut sub = BTreeMap::new();
    sub.insert(Var::from(chart.names[Z].as_str()), u.clone());
    sub.insert(Var::from(chart.names[P1].as_str()), grad[0].clone());
    sub.insert(Var::from(chart.names[P2].as_str()), grad[1].clone());
    Ok((sub, grad))
}

/// Pulls a form on the jet chart back to the plane along `j¹u`.
pub fn restrict_to_graph(f: &Form, chart: &JetChart, u: &ScalarExpr) -> Result<Form, JetError> {
    let (sub, grad) = graph_substitution(chart, u)?;
    let plane = FrameSpec::coordinates(&[chart.names[X1].as_str(), chart.names[X2].as_str()]);
    let d = |e: &ScalarExpr| Form::scalar(&plane, e.clone()).exterior_derivative();
    let dict: BTreeMap<String, Form> = [
        (X1, plane.basis_forms()[0].clone()),
        (X2, plane.basis_forms()[1].clone()),
        (Z, d(u)?),
        (P1, d(&grad[0])?),
        (P2, d(&grad[1])?),
    ]
    .into_iter()
    .map(|(k, f)| (chart.frame().labels()[k].clone(), f))
    .collect();
    let f = f.substitute_scalars(&sub)?;
    // rebuild on the plane, where only x1, x2 remain
    let g = f.substitute(&plane, &dict)?;
    Ok(g)
}

/// Outcome of the Poincaré-Cartan closure test.
#[derive(Debug, Clone)]
pub enum ElVerdict {
    /// `dΠ = φ∧Π` holds with the returned `φ`; `closed_mod_ideal` reports
    /// whether `dφ ≡ 0 mod {θ, dθ, Ψ}`.
    Certified { phi: Form, closed_mod_ideal: bool },
    /// No `φ` with polynomial coefficients of the given degree (after
    /// extracting the content of `Π`). This is not a disproof.
    NotCertified { degree: u32 },
}

impl ElVerdict {
    pub fn is_certified(&self) -> bool {
        matches!(self, ElVerdict::Certified { closed_mod_ideal: true, .. })
    }
}

fn lcm(a: &Poly, b: &Poly) -> Poly {
    let g = gcd(a, b);
    a.mul(&b.div_exact(&g).expect("gcd divides")).monic()
}

/// Splits a form into a scalar content `g` and a form with polynomial,
/// jointly coprime coefficients.
fn extract_content(f: &Form) -> (ScalarExpr, Form) {
    let mut num_gcd = Poly::zero();
    let mut den_lcm = Poly::one();
    for (_, c) in f.terms() {
        num_gcd = gcd(&num_gcd, c.numerator());
        den_lcm = lcm(&den_lcm, c.denominator());
    }
    if num_gcd.is_zero() {
        return (ScalarExpr::one(), f.clone());
    }
    let g = ScalarExpr::from_parts(num_gcd, den_lcm).expect("nonzero denominator");
    let inv = g.recip().expect("nonzero content");
    (g, f.scale(&inv))
}

fn monomials(vars: &[Var], max_deg: u32) -> Vec<Monomial> {
    let mut out = vec![Monomial::one()];
    for _ in 0..max_deg {
        let mut next = Vec::new();
        for m in &out {
            for v in vars {
                let n = m.mul(&Monomial::var(v.clone()));
                if !out.contains(&n) && !next.contains(&n) {
                    next.push(n);
                }
            }
        }
        out.extend(next);
    }
    out.sort();
    out
}

/// Searches for `φ` with `dΠ = φ∧Π`, `Π = θ∧Ψ`, then checks `dφ`.
pub fn euler_lagrange_test(sys: &MongeAmpereSystem, max_degree: u32) -> Result<ElVerdict, JetError> {
    let frame = sys.chart.frame();
    let pi = sys.theta.wedge(&sys.psi)?;
    let (g, pihat) = extract_content(&pi);
    let dpihat = pihat.exterior_derivative()?;
    let vars: Vec<Var> = sys.chart.names.iter().map(|n| Var::from(n.as_str())).collect();
    let monos = monomials(&vars, max_degree);

    // one unknown per (label, monomial); collect its image in each 4-word
    let mut cols: Vec<(usize, Monomial, Form)> = Vec::new();
    for l in 0..frame.dim() {
        for m in &monos {
            let coef = ScalarExpr::from_poly(Poly::term(GaussianRational::one(), m.clone()));
            let img = frame.basis_forms()[l].scale(&coef).wedge(&pihat)?;
            cols.push((l, m.clone(), img));
        }
    }
    let words: Vec<Vec<usize>> = (0u32..32)
        .filter(|w| w.count_ones() == 4)
        .map(|w| (0..5).filter(|k| w & (1 << k) != 0).collect())
        .collect();
    // clear denominators per word and split by monomials in the coordinates
    let mut rows: Vec<Vec<GaussianRational>> = Vec::new();
    let mut rhs: Vec<GaussianRational> = Vec::new();
    for w in &words {
        let entries: Vec<ScalarExpr> = cols.iter().map(|(_, _, f)| f.coefficient_idx(w)).collect();
        let target = dpihat.coefficient_idx(w);
        let mut den = target.denominator().clone();
        for e in &entries {
            den = lcm(&den, e.denominator());
        }
        let lift = |e: &ScalarExpr| e.numerator().mul(&den.div_exact(e.denominator()).expect("lcm"));
        let lifted: Vec<Poly> = entries.iter().map(lift).collect();
        let t = lift(&target);
        let mut keys: Vec<Monomial> = t.terms().map(|(m, _)| m.clone()).collect();
        for p in &lifted {
            keys.extend(p.terms().map(|(m, _)| m.clone()));
        }
        keys.sort();
        keys.dedup();
        for key in keys {
            let coeff = |p: &Poly| p.coefficient(&key);
            rows.push(lifted.iter().map(coeff).collect());
            rhs.push(coeff(&t));
        }
    }
    let n = cols.len();
    let sol = if rows.is_empty() {
        Some(vec![GaussianRational::zero(); n])
    } else {
        Matrix::from_rows(rows).solve(&rhs)
    };
    let Some(sol) = sol else {
        return Ok(ElVerdict::NotCertified { degree: max_degree });
    };
    let mut phi = Form::zero(frame, 1);
    for ((l, m, _), c) in cols.iter().zip(&sol) {
        if !c.is_zero() {
            let coef = ScalarExpr::from_poly(Poly::term(c.clone(), m.clone()));
            phi = phi.add(&frame.basis_forms()[*l].scale(&coef))?;
        }
    }
    // φ = d log g + φ̂
    let dg = Form::scalar(frame, g.clone()).exterior_derivative()?;
    phi = phi.add(&dg.scale(&g.recip().expect("nonzero content")))?;
    let closed = closed_mod_system(sys, &phi.exterior_derivative()?)?;
    Ok(ElVerdict::Certified {
        phi,
        closed_mod_ideal: closed,
    })
}

/// Whether a 2-form lies in the ideal generated by `θ, dθ, Ψ`.
pub fn closed_mod_system(sys: &MongeAmpereSystem, f: &Form) -> Result<bool, JetError> {
    let th = [sys.theta.clone()];
    let r = reduce_mod_ideal(f, &th)?.remainder;
    if r.is_zero() {
        return Ok(true);
    }
    let a = mod_ideal(&sys.theta.exterior_derivative()?, &th)?;
    let b = mod_ideal(&sys.psi, &th)?;
    let words: Vec<[usize; 2]> = (0..5).flat_map(|i| (i + 1..5).map(move |j| [i, j])).collect();
    let m = Matrix::from_rows(
        words
            .iter()
            .map(|w| vec![a.coefficient_idx(w), b.coefficient_idx(w)])
            .collect(),
    );
    let rhs: Vec<ScalarExpr> = words.iter().map(|w| r.coefficient_idx(w)).collect();
    Ok(m.solve(&rhs).is_some())
}
