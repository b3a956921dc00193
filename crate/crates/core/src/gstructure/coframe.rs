use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::GStructureError;
use crate::exterior::{mod_ideal, Coframe, ExteriorError, Form, FrameSpec};
use crate::jet_contact::{contact_form, JetChart, MongeAmpereSystem};
use crate::symkernel::ScalarExpr;
use crate::{QMatrix, Rational};

pub const W_LABELS: [&str; 5] = ["w0", "w1", "w2", "w3", "w4"];

/// A coframe `(w0, …, w4)` on a jet chart with `w0 = α·θ` and
/// `dw0 ≡ w1∧w2 + w3∧w4 (mod w0)`.
#[derive(Debug, Clone)]
pub struct AdaptedCoframe {
    chart: JetChart,
    coframe: Coframe,
    alpha: ScalarExpr,
}

impl AdaptedCoframe {
    /// Validates five 1-forms written in the chart's coordinate frame.
    pub fn new(chart: &JetChart, forms: [Form; 5]) -> Result<Self, GStructureError> {
        let theta = contact_form(chart);
        if !forms[0].wedge(&theta)?.is_zero() {
            return Err(GStructureError::NotAdapted("w0 is not a multiple of θ".into()));
        }
        // θ has dz-coefficient 1
        let alpha = forms[0].coefficient_idx(&[2]);
        let coframe = FrameSpec::from_coframe(chart.frame(), &forms, &W_LABELS, None).map_err(|e| match e {
            ExteriorError::SingularCoframe => GStructureError::NotAdapted("the forms are linearly dependent".into()),
            other => other.into(),
        })?;
        let w = coframe.frame.basis_forms();
        let target = w[1].wedge(&w[2])?.add(&w[3].wedge(&w[4])?)?;
        let residue = mod_ideal(&w[0].exterior_derivative()?.sub(&target)?, &w[..1])?;
        if !residue.is_zero() {
            return Err(GStructureError::NotAdapted(format!(
                "dw0 - w1^w2 - w3^w4 = {residue} mod w0"
            )));
        }
        Ok(AdaptedCoframe {
            chart: chart.clone(),
            coframe,
            alpha,
        })
    }

    /// `(θ, dx1, dp1, dx2, dp2)`, adapted for every system on the chart.
    pub fn standard(chart: &JetChart) -> Self {
        let forms = [contact_form(chart), chart.d(0), chart.d(3), chart.d(1), chart.d(4)];
        Self::new(chart, forms).expect("dθ = dx1^dp1 + dx2^dp2")
    }

    pub fn chart(&self) -> &JetChart {
        &self.chart
    }

    pub fn frame(&self) -> &Arc<FrameSpec> {
        &self.coframe.frame
    }

    pub fn alpha(&self) -> &ScalarExpr {
        &self.alpha
    }

    /// The five forms in the chart's coordinate frame.
    pub fn forms(&self) -> Vec<Form> {
        W_LABELS.iter().map(|l| self.coframe.to_base[*l].clone()).collect()
    }

    /// Rewrites a chart form in the adapted frame.
    pub fn forward(&self, f: &Form) -> Result<Form, ExteriorError> {
        self.coframe.forward(f)
    }

    /// `Ψ` in the adapted frame, reduced modulo `w0`.
    pub fn psi_reduced(&self, sys: &MongeAmpereSystem) -> Result<Form, GStructureError> {
        let w0 = self.frame().basis("w0")?;
        Ok(mod_ideal(&self.forward(&sys.psi)?, &[w0])?)
    }

    /// The function `κ` with `Ψ ≡ κ·(w1∧w4 + w2∧w3) mod w0`, if `Ψ` has this
    /// normal form.
    pub fn normal_form_factor(&self, sys: &MongeAmpereSystem) -> Result<ScalarExpr, GStructureError> {
        let psi = self.psi_reduced(sys)?;
        let kappa = psi.coefficient(&["w1", "w4"])?;
        let w = self.frame().basis_forms();
        let model = w[1].wedge(&w[4])?.add(&w[2].wedge(&w[3])?)?;
        let residue = psi.sub(&model.scale(&kappa))?;
        if kappa.is_zero() || !residue.is_zero() {
            return Err(GStructureError::NotNormalForm(residue.to_string()));
        }
        Ok(kappa)
    }

    /// Builds a normal-form coframe for a system whose `Ψ` has constant real
    /// coefficients, by exact linear algebra on the standard coframe.
    pub fn normalized(sys: &MongeAmpereSystem) -> Result<Self, GStructureError> {
        let chart = &sys.chart;
        let std = Self::standard(chart);
        let psi = std.psi_reduced(sys)?;
        let mut b = QMatrix::zeros(4, 4);
        for (idx, c) in psi.terms() {
            let v = c
                .constant_value()
                .filter(|g| g.im.is_zero())
                .ok_or(GStructureError::NeedsCoframe)?;
            b[(idx[0] - 1, idx[1] - 1)] = v.re.clone();
            b[(idx[1] - 1, idx[0] - 1)] = -v.re;
        }
        let omega = QMatrix::from_i64(&[&[0, 1, 0, 0], &[-1, 0, 0, 0], &[0, 0, 0, 1], &[0, 0, -1, 0]]);
        let j = omega.inverse().expect("symplectic").mul(&b);
        let j2 = j.mul(&j);
        let m = -j2[(0, 0)].clone();
        if j2 != QMatrix::identity(4).scale(&-m.clone()) {
            return Err(GStructureError::NotAdapted("Ψ is not primitive".into()));
        }
        if !m.is_positive() {
            return Err(GStructureError::NotElliptic(classify(sys, &std)?.orbit));
        }
        let s = rational_sqrt(&m).ok_or_else(|| GStructureError::Irrational(m.to_string()))?;
        let k = j.scale(&s.recip());
        let dot = |u: &[Rational], v: &[Rational]| -> Rational {
            u.iter().zip(v).fold(Rational::zero(), |acc, (a, b)| acc + a * b)
        };
        // basis (v1, v2, K v1, -K v2) with Ψ(v1, v2) = 0 and Ω(v1, v2) ≠ 0
        for e in 0..4 {
            let mut v1 = vec![Rational::zero(); 4];
            v1[e] = Rational::one();
            let row = QMatrix::from_rows(vec![b.transpose().mul_vec(&v1)]);
            for v2 in row.nullspace() {
                let w = dot(&v1, &omega.mul_vec(&v2));
                if w.is_zero() {
                    continue;
                }
                let v3 = k.mul_vec(&v1);
                let v4: Vec<Rational> = k.mul_vec(&v2).into_iter().map(|x| -x).collect();
                let cols = [&v1, &v2, &v3, &v4];
                let v = QMatrix::from_rows((0..4).map(|r| cols.iter().map(|c| c[r].clone()).collect()).collect());
                let a = v.inverse().expect("basis");
                let eta = std.forms();
                let mut forms = vec![eta[0].scale(&ScalarExpr::from(w.recip()))];
                for r in 0..4 {
                    let mut f = Form::zero(chart.frame(), 1);
                    for c in 0..4 {
                        f = f.add(&eta[c + 1].scale(&ScalarExpr::from(a[(r, c)].clone())))?;
                    }
                    forms.push(f);
                }
                let forms: [Form; 5] = forms.try_into().expect("five forms");
                let cof = Self::new(chart, forms)?;
                cof.normal_form_factor(sys)?;
                return Ok(cof);
            }
        }
        Err(GStructureError::NotAdapted("no normalizing basis found".into()))
    }
}

fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let (n, d) = (q.numer().sqrt(), q.denom().sqrt());
    (&n * &n == *q.numer() && &d * &d == *q.denom()).then(|| Rational::new(n, d))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Orbit {
    Elliptic,
    Hyperbolic,
    Parabolic,
}

/// Orbit of `Ψ` together with `μ`, where `Ψ∧Ψ = μ·dw0∧dw0 (mod w0)`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitClass {
    pub orbit: Orbit,
    pub multiplier: ScalarExpr,
}

pub fn classify(sys: &MongeAmpereSystem, cof: &AdaptedCoframe) -> Result<OrbitClass, GStructureError> {
    let psi = cof.psi_reduced(sys)?;
    let b12 = psi.coefficient(&["w1", "w2"])?;
    let b34 = psi.coefficient(&["w3", "w4"])?;
    let trace = &b12 + &b34;
    if !trace.is_zero() {
        return Err(GStructureError::NotAdapted(format!("b12 + b34 = {trace}")));
    }
    let w0 = cof.frame().basis("w0")?;
    let dw0 = mod_ideal(&w0.exterior_derivative()?, &[w0])?;
    let top = ["w1", "w2", "w3", "w4"];
    let num = psi.wedge(&psi)?.coefficient(&top)?;
    let den = dw0.wedge(&dw0)?.coefficient(&top)?;
    let multiplier = num.checked_div(&den)?;
    let sign = match multiplier.constant_value() {
        Some(c) if c.is_real() => Some(crate::field::sign_of(&c.re)),
        Some(_) => None,
        None => multiplier.definite_sign(),
    };
    let orbit = match sign {
        Some(0) => Orbit::Parabolic,
        Some(s) if s > 0 => Orbit::Elliptic,
        Some(_) => Orbit::Hyperbolic,
        None => return Err(GStructureError::NotOrbitPure(multiplier.to_string())),
    };
    Ok(OrbitClass { orbit, multiplier })
}

/// Checks that scaling `Ψ` by a nonzero constant keeps the orbit and scales
/// the multiplier by `λ²`.
pub fn classify_invariance(
    sys: &MongeAmpereSystem,
    cof: &AdaptedCoframe,
    lambda: &Rational,
) -> Result<bool, GStructureError> {
    let l = ScalarExpr::from(lambda.clone());
    let scaled = MongeAmpereSystem::from_psi(&sys.chart, sys.psi.scale(&l))?;
    let a = classify(sys, cof)?;
    let b = classify(&scaled, cof)?;
    Ok(a.orbit == b.orbit && b.multiplier == &a.multiplier * &(&l * &l))
}
