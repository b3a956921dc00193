use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::frame::{FrameSpec, LabelKind, Terms};
use super::{wedge_sign, ExteriorError};
use crate::symkernel::ScalarExpr;

/// A homogeneous exterior form over one frame. Words are bitmasks of label
/// indices; the coefficient of a mask multiplies the labels in increasing
/// index order.
#[derive(Clone)]
pub struct Form {
    frame: Arc<FrameSpec>,
    degree: usize,
    terms: Terms,
}

impl PartialEq for Form {
    fn eq(&self, o: &Self) -> bool {
        Arc::ptr_eq(&self.frame, &o.frame) && self.degree == o.degree && self.terms == o.terms
    }
}

pub(crate) fn indices(mask: u32) -> Vec<usize> {
    (0..32).filter(|k| mask & (1 << k) != 0).collect()
}

impl Form {
    pub fn zero(frame: &Arc<FrameSpec>, degree: usize) -> Self {
        Form {
            frame: frame.clone(),
            degree,
            terms: Terms::new(),
        }
    }

    pub fn scalar(frame: &Arc<FrameSpec>, f: ScalarExpr) -> Self {
        let mut terms = Terms::new();
        if !f.is_zero() {
            terms.insert(0, f);
        }
        Form {
            frame: frame.clone(),
            degree: 0,
            terms,
        }
    }

    pub(crate) fn basis_index(frame: &Arc<FrameSpec>, k: usize) -> Self {
        Form {
            frame: frame.clone(),
            degree: 1,
            terms: Terms::from([(1u32 << k, ScalarExpr::one())]),
        }
    }

    pub(crate) fn from_raw(frame: &Arc<FrameSpec>, degree: usize, mut terms: Terms) -> Self {
        terms.retain(|_, c| !c.is_zero());
        debug_assert!(terms.keys().all(|w| w.count_ones() as usize == degree));
        Form {
            frame: frame.clone(),
            degree,
            terms,
        }
    }

    /// A form from `(labels, coefficient)` pairs; labels may come in any
    /// order and are sorted with the matching sign.
    pub fn from_terms(
        frame: &Arc<FrameSpec>,
        degree: usize,
        terms: &[(&[&str], ScalarExpr)],
    ) -> Result<Self, ExteriorError> {
        let mut out = Form::zero(frame, degree);
        for (labels, c) in terms {
            if labels.len() != degree {
                return Err(ExteriorError::DegreeMismatch);
            }
            let mut f = Form::scalar(frame, c.clone());
            for l in *labels {
                f = f.wedge(&frame.basis(l)?)?;
            }
            out = out.add(&f)?;
        }
        Ok(out)
    }

    pub fn frame(&self) -> &Arc<FrameSpec> {
        &self.frame
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub(crate) fn raw_terms(&self) -> &Terms {
        &self.terms
    }

    /// Terms as (label indices, coefficient), in lexicographic word order.
    pub fn terms(&self) -> Vec<(Vec<usize>, &ScalarExpr)> {
        let mut v: Vec<_> = self.terms.iter().map(|(w, c)| (indices(*w), c)).collect();
        v.sort_by(|a, b| a.0.cmp(&b.0));
        v
    }

    /// The coefficient of the word given by `labels` (sign-adjusted for order).
    pub fn coefficient(&self, labels: &[&str]) -> Result<ScalarExpr, ExteriorError> {
        let idx: Vec<usize> = labels
            .iter()
            .map(|l| self.frame.index_of(l))
            .collect::<Result<_, _>>()?;
        Ok(self.coefficient_idx(&idx))
    }

    pub fn coefficient_idx(&self, idx: &[usize]) -> ScalarExpr {
        let mut mask = 0u32;
        let mut sign = 1i8;
        for &k in idx {
            let b = 1u32 << k;
            if mask & b != 0 {
                return ScalarExpr::zero();
            }
            sign *= wedge_sign(mask, b);
            mask |= b;
        }
        match self.terms.get(&mask) {
            Some(c) if sign > 0 => c.clone(),
            Some(c) => -c.clone(),
            None => ScalarExpr::zero(),
        }
    }

    /// For a 0-form, its value.
    pub fn as_scalar(&self) -> Option<ScalarExpr> {
        (self.degree == 0).then(|| self.terms.get(&0).cloned().unwrap_or_else(ScalarExpr::zero))
    }

    pub(crate) fn check_frame(&self, f: &Arc<FrameSpec>) -> Result<(), ExteriorError> {
        if Arc::ptr_eq(&self.frame, f) {
            Ok(())
        } else {
            Err(ExteriorError::FrameMismatch)
        }
    }

    fn same(&self, o: &Form) -> Result<(), ExteriorError> {
        self.check_frame(&o.frame)?;
        if self.degree != o.degree {
            return Err(ExteriorError::DegreeMismatch);
        }
        Ok(())
    }

    pub fn add(&self, o: &Form) -> Result<Form, ExteriorError> {
        self.same(o)?;
        let mut terms = self.terms.clone();
        for (w, c) in &o.terms {
            let e = terms.entry(*w).or_insert_with(ScalarExpr::zero);
            *e = &*e + c;
        }
        Ok(Form::from_raw(&self.frame, self.degree, terms))
    }

    pub fn sub(&self, o: &Form) -> Result<Form, ExteriorError> {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Form {
        self.scale(&-ScalarExpr::one())
    }

    pub fn scale(&self, k: &ScalarExpr) -> Form {
        let terms = self.terms.iter().map(|(w, c)| (*w, c * k)).collect();
        Form::from_raw(&self.frame, self.degree, terms)
    }

    pub fn map_coefficients(
        &self,
        f: impl Fn(&ScalarExpr) -> Result<ScalarExpr, ExteriorError>,
    ) -> Result<Form, ExteriorError> {
        let terms = self
            .terms
            .iter()
            .map(|(w, c)| Ok((*w, f(c)?)))
            .collect::<Result<_, ExteriorError>>()?;
        Ok(Form::from_raw(&self.frame, self.degree, terms))
    }

    pub fn wedge(&self, o: &Form) -> Result<Form, ExteriorError> {
        self.check_frame(&o.frame)?;
        let degree = self.degree + o.degree;
        if degree > self.frame.dim() {
            return Ok(Form::zero(&self.frame, degree));
        }
        let mut terms = Terms::new();
        for (a, ca) in &self.terms {
            for (b, cb) in &o.terms {
                if a & b != 0 {
                    continue;
                }
                let p = ca * cb;
                let e = terms.entry(a | b).or_insert_with(ScalarExpr::zero);
                *e = if wedge_sign(*a, *b) > 0 { &*e + &p } else { &*e - &p };
            }
        }
        Ok(Form::from_raw(&self.frame, degree, terms))
    }

    /// `d` of a scalar as a 1-form, through the frame's variable differentials.
    fn d_scalar(&self, f: &ScalarExpr) -> Result<Terms, ExteriorError> {
        let mut out = Terms::new();
        for v in f.variables() {
            let dv = self
                .frame
                .var_differential(&v)
                .ok_or_else(|| ExteriorError::UndeclaredVariable(v.to_string()))?;
            if dv.is_empty() {
                continue;
            }
            let df = f.derivative(&v);
            if df.is_zero() {
                continue;
            }
            for (w, c) in dv {
                let e = out.entry(*w).or_insert_with(ScalarExpr::zero);
                *e = &*e + &(&df * c);
            }
        }
        Ok(out)
    }

    pub fn exterior_derivative(&self) -> Result<Form, ExteriorError> {
        let frame = &self.frame;
        let degree = self.degree + 1;
        if degree > frame.dim() {
            return Ok(Form::zero(frame, degree));
        }
        let mut out = Form::zero(frame, degree);
        for (w, c) in &self.terms {
            let word = Form::from_raw(frame, self.degree, Terms::from([(*w, ScalarExpr::one())]));
            let dc = Form::from_raw(frame, 1, self.d_scalar(c)?);
            out = out.add(&dc.wedge(&word)?)?;
            // d(e_{i1} ... e_{ik}) = sum_r (-1)^r e_{i1} .. d e_{ir} .. e_{ik}
            for (r, &k) in indices(*w).iter().enumerate() {
                let dk = match frame.kind(k) {
                    LabelKind::Abstract => frame.label_d(k),
                    _ => continue,
                };
                if dk.is_empty() {
                    continue;
                }
                let before = *w & ((1u32 << k) - 1);
                let after = *w & !((1u32 << (k + 1)) - 1);
                let lhs = Form::from_raw(frame, r, Terms::from([(before, ScalarExpr::one())]));
                let rhs = Form::from_raw(
                    frame,
                    self.degree - r - 1,
                    Terms::from([(after, ScalarExpr::one())]),
                );
                let mid = Form::from_raw(frame, 2, dk.clone());
                let mut t = lhs.wedge(&mid)?.wedge(&rhs)?.scale(c);
                if r % 2 == 1 {
                    t = t.neg();
                }
                out = out.add(&t)?;
            }
        }
        Ok(out)
    }

    /// Replaces each basis label by a 1-form of `target`.
    pub fn substitute(
        &self,
        target: &Arc<FrameSpec>,
        dict: &BTreeMap<String, Form>,
    ) -> Result<Form, ExteriorError> {
        let mut out = Form::zero(target, self.degree);
        for (w, c) in &self.terms {
            let mut t = Form::scalar(target, c.clone());
            for k in indices(*w) {
                let label = &self.frame.labels()[k];
                let img = dict
                    .get(label)
                    .ok_or_else(|| ExteriorError::MissingSubstitution(label.clone()))?;
                if img.degree != 1 {
                    return Err(ExteriorError::DegreeMismatch);
                }
                t = t.wedge(img)?;
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }

    /// Substitutes scalar symbols in every coefficient.
    pub fn substitute_scalars(
        &self,
        map: &BTreeMap<crate::symkernel::Var, ScalarExpr>,
    ) -> Result<Form, ExteriorError> {
        self.map_coefficients(|c| Ok(c.substitute(map)?))
    }

    /// Moves the form to another frame with identical labels.
    pub fn rebase(&self, frame: &Arc<FrameSpec>) -> Result<Form, ExteriorError> {
        if frame.labels() != self.frame.labels() {
            return Err(ExteriorError::FrameMismatch);
        }
        Ok(Form::from_raw(frame, self.degree, self.terms.clone()))
    }

    /// Complex conjugate: coefficients conjugated with all symbols real, and
    /// labels exchanged by the frame's conjugation.
    pub fn conj(&self) -> Result<Form, ExteriorError> {
        let perm = match self.frame.conjugation() {
            Some(p) => p.to_vec(),
            None => (0..self.frame.dim()).collect(),
        };
        let mut out = Form::zero(&self.frame, self.degree);
        for (w, c) in &self.terms {
            let mut t = Form::scalar(&self.frame, c.conj());
            for k in indices(*w) {
                t = t.wedge(&Form::basis_index(&self.frame, perm[k]))?;
            }
            out = out.add(&t)?;
        }
        Ok(out)
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let labels = self.frame.labels();
        for (n, (idx, c)) in self.terms().into_iter().enumerate() {
            let word: Vec<&str> = idx.iter().map(|&k| labels[k].as_str()).collect();
            let word = word.join("^");
            let mut coef = c.to_string();
            let negative = coef.starts_with('-') && !needs_parens(&coef[1..]);
            if negative {
                coef.remove(0);
            }
            let sep = match (n, negative) {
                (0, true) => "-",
                (0, false) => "",
                (_, true) => " - ",
                (_, false) => " + ",
            };
            let body = if word.is_empty() {
                coef
            } else if coef == "1" {
                word
            } else if needs_parens(&coef) {
                format!("({coef})*{word}")
            } else {
                format!("{coef}*{word}")
            };
            write!(f, "{sep}{body}")?;
        }
        Ok(())
    }
}

/// True when a printed coefficient is a top-level sum.
fn needs_parens(s: &str) -> bool {
    let mut depth = 0i32;
    for (k, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            ' ' if depth == 0 && k > 0 => return true,
            _ => {}
        }
    }
    false
}

impl fmt::Debug for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form[{}]({})", self.degree, self)
    }
}
