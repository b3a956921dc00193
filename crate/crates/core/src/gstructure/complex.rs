use std::collections::BTreeMap;
use std::sync::Arc;

use super::coframe::{AdaptedCoframe, W_LABELS};
use super::GStructureError;
use crate::exterior::{Coframe, ExteriorError, Form, FrameSpec};
use crate::symkernel::{GaussianRational, ScalarExpr};
use crate::{GMatrix, QMatrix, Rational};

/// `π⁰, π¹, π², π̄¹, π̄²`.
pub const PI_LABELS: [&str; 5] = ["pi0", "pi1", "pi2", "pib1", "pib2"];

pub(crate) const PI_CONJ: [(&str, &str); 2] = [("pi1", "pib1"), ("pi2", "pib2")];

/// The complex coframe `π¹ = w3 + i·w1`, `π² = w2 + i·w4` (and conjugates)
/// built from a real adapted coframe.
#[derive(Debug, Clone)]
pub struct ComplexCoframe {
    pub adapted: AdaptedCoframe,
    coframe: Coframe,
    w_to_pi: BTreeMap<String, Form>,
    pi_to_w: BTreeMap<String, Form>,
}

/// The pair `(P, P⁻¹)` with `w = P·π`, rows and columns in label order.
pub fn transform_pair() -> (GMatrix, GMatrix) {
    let g = |a: i64, b: i64| GaussianRational::from_parts(a, b);
    let h = |a: i64, b: i64| GaussianRational::new(Rational::new(a.into(), 2.into()), Rational::new(b.into(), 2.into()));
    let z = || g(0, 0);
    let p = GMatrix::from_rows(vec![
        vec![g(1, 0), z(), z(), z(), z()],
        vec![z(), h(0, -1), z(), h(0, 1), z()],
        vec![z(), z(), h(1, 0), z(), h(1, 0)],
        vec![z(), h(1, 0), z(), h(1, 0), z()],
        vec![z(), z(), h(0, -1), z(), h(0, 1)],
    ]);
    let pinv = GMatrix::from_rows(vec![
        vec![g(1, 0), z(), z(), z(), z()],
        vec![z(), g(0, 1), z(), g(1, 0), z()],
        vec![z(), z(), g(1, 0), z(), g(0, 1)],
        vec![z(), g(0, -1), z(), g(1, 0), z()],
        vec![z(), z(), g(1, 0), z(), g(0, -1)],
    ]);
    (p, pinv)
}

/// `P⁻¹·diag(a00, M)·P` for a real 4×4 block `M` acting on `(w1, …, w4)`.
pub fn conjugate_block(m: &QMatrix, a00: &Rational) -> GMatrix {
    let mut big = GMatrix::zeros(5, 5);
    big[(0, 0)] = GaussianRational::from_rational(a00.clone());
    for r in 0..4 {
        for c in 0..4 {
            big[(r + 1, c + 1)] = GaussianRational::from_rational(m[(r, c)].clone());
        }
    }
    let (p, pinv) = transform_pair();
    pinv.mul(&big).mul(&p)
}

fn rows_to_dict(
    m: &GMatrix,
    src: &[&str; 5],
    target: &Arc<FrameSpec>,
) -> Result<BTreeMap<String, Form>, ExteriorError> {
    let basis = target.basis_forms();
    let mut out = BTreeMap::new();
    for (r, label) in src.iter().enumerate() {
        let mut f = Form::zero(target, 1);
        for (c, b) in basis.iter().enumerate() {
            f = f.add(&b.scale(&ScalarExpr::from(m[(r, c)].clone())))?;
        }
        out.insert(label.to_string(), f);
    }
    Ok(out)
}

pub fn complexify(cof: &AdaptedCoframe) -> Result<ComplexCoframe, GStructureError> {
    let (p, pinv) = transform_pair();
    let w = cof.forms();
    let chart_frame = cof.chart().frame();
    let forms: Vec<Form> = (0..5)
        .map(|r| {
            (0..5).try_fold(Form::zero(chart_frame, 1), |acc, c| {
                acc.add(&w[c].scale(&ScalarExpr::from(pinv[(r, c)].clone())))
            })
        })
        .collect::<Result<_, _>>()?;
    let coframe = FrameSpec::from_coframe(chart_frame, &forms, &PI_LABELS, Some(&PI_CONJ))?;
    let w_to_pi = rows_to_dict(&p, &W_LABELS, &coframe.frame)?;
    let pi_to_w = rows_to_dict(&pinv, &PI_LABELS, cof.frame())?;
    Ok(ComplexCoframe {
        adapted: cof.clone(),
        coframe,
        w_to_pi,
        pi_to_w,
    })
}

impl ComplexCoframe {
    pub fn frame(&self) -> &Arc<FrameSpec> {
        &self.coframe.frame
    }

    /// A chart form in the `π` frame.
    pub fn from_chart(&self, f: &Form) -> Result<Form, ExteriorError> {
        self.coframe.forward(f)
    }

    /// An adapted-frame form in the `π` frame.
    pub fn from_real(&self, f: &Form) -> Result<Form, ExteriorError> {
        f.substitute(self.frame(), &self.w_to_pi)
    }

    /// A `π`-frame form back in the adapted frame.
    pub fn to_real(&self, f: &Form) -> Result<Form, ExteriorError> {
        f.substitute(self.adapted.frame(), &self.pi_to_w)
    }

    /// The `π` forms in the chart's coordinate frame.
    pub fn chart_forms(&self) -> Vec<Form> {
        PI_LABELS.iter().map(|l| self.coframe.to_base[*l].clone()).collect()
    }
}
