use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use super::{wedge_sign, ExteriorError, Form};
use crate::linalg::Matrix;
use crate::symkernel::{ScalarExpr, Var};

/// How the exterior derivative of a basis label is known.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelKind {
    /// `d` of a named coordinate; closed.
    Coordinate(Var),
    /// A 1-form with a declared differential.
    Abstract,
    /// A pseudo-connection entry whose differential is left undetermined.
    /// Its `d` is taken to be 0, which is only meaningful modulo the forms
    /// it gets wedged against.
    Connection,
}

pub(crate) type Terms = BTreeMap<u32, ScalarExpr>;

/// An immutable ordered basis of 1-forms together with everything needed to
/// take exterior derivatives in it.
#[derive(Debug)]
pub struct FrameSpec {
    labels: Vec<String>,
    kinds: Vec<LabelKind>,
    declared_d: Vec<Terms>,
    var_d: BTreeMap<Var, Terms>,
    conj: Option<Vec<usize>>,
}

impl FrameSpec {
    /// The coordinate frame `dx` for each name `x`, labelled `d<name>`.
    pub fn coordinates<S: AsRef<str>>(names: &[S]) -> Arc<FrameSpec> {
        let mut b = FrameBuilder::new();
        for n in names {
            b = b.coordinate(n.as_ref());
        }
        b.build().expect("coordinate frames are always consistent")
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn kind(&self, idx: usize) -> &LabelKind {
        &self.kinds[idx]
    }

    pub fn index_of(&self, label: &str) -> Result<usize, ExteriorError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| ExteriorError::UnknownLabel(label.to_string()))
    }

    pub fn basis(self: &Arc<Self>, label: &str) -> Result<Form, ExteriorError> {
        let k = self.index_of(label)?;
        Ok(Form::basis_index(self, k))
    }

    /// Basis 1-forms in label order.
    pub fn basis_forms(self: &Arc<Self>) -> Vec<Form> {
        (0..self.dim()).map(|k| Form::basis_index(self, k)).collect()
    }

    pub fn variables(&self) -> impl Iterator<Item = &Var> {
        self.var_d.keys()
    }

    pub(crate) fn label_d(&self, idx: usize) -> &Terms {
        &self.declared_d[idx]
    }

    pub(crate) fn var_differential(&self, v: &str) -> Option<&Terms> {
        self.var_d.get(v)
    }

    pub(crate) fn conjugation(&self) -> Option<&[usize]> {
        self.conj.as_deref()
    }

    pub fn has_connection_labels(&self) -> bool {
        self.kinds.iter().any(|k| *k == LabelKind::Connection)
    }

    /// The same frame with extra symbols whose differentials vanish.
    pub fn with_constants<S: AsRef<str>>(self: &Arc<Self>, names: &[S]) -> Arc<FrameSpec> {
        let mut var_d = self.var_d.clone();
        for n in names {
            var_d.insert(Arc::from(n.as_ref()), Terms::new());
        }
        Arc::new(FrameSpec {
            labels: self.labels.clone(),
            kinds: self.kinds.clone(),
            declared_d: self.declared_d.clone(),
            var_d,
            conj: self.conj.clone(),
        })
    }

    /// Builds the frame whose basis is the given 1-forms of `base`, labelled
    /// `labels`. Differentials are transported from `base`; the coefficient
    /// matrix must be invertible over the rational functions.
    pub fn from_coframe<S: AsRef<str>>(
        base: &Arc<FrameSpec>,
        forms: &[Form],
        labels: &[S],
        conj: Option<&[(&str, &str)]>,
    ) -> Result<Coframe, ExteriorError> {
        let n = base.dim();
        if forms.len() != n || labels.len() != n {
            return Err(ExteriorError::SingularCoframe);
        }
        let mut a = Matrix::<ScalarExpr>::zeros(n, n);
        for (r, f) in forms.iter().enumerate() {
            f.check_frame(base)?;
            if f.degree() != 1 {
                return Err(ExteriorError::DegreeMismatch);
            }
            for (w, c) in f.raw_terms() {
                a[(r, w.trailing_zeros() as usize)] = c.clone();
            }
        }
        let inv = a.inverse().ok_or(ExteriorError::SingularCoframe)?;
        // e_l = sum_a inv[l][a] eta_a
        let express = |t: &Terms| -> Terms {
            let mut out = Terms::new();
            for (w, c) in t {
                let l = w.trailing_zeros() as usize;
                for k in 0..n {
                    let v = c.clone() * inv[(l, k)].clone();
                    if !v.is_zero() {
                        let e = out.entry(1u32 << k).or_insert_with(ScalarExpr::zero);
                        *e = e.clone() + v;
                    }
                }
            }
            out.retain(|_, c| !c.is_zero());
            out
        };

        let mut b = FrameBuilder::new();
        for l in labels {
            b = b.abstract_label(l.as_ref());
        }
        let var_d: BTreeMap<Var, Terms> = base.var_d.iter().map(|(v, t)| (v.clone(), express(t))).collect();
        b.var_d = var_d;
        if let Some(pairs) = conj {
            b = b.conjugation(pairs);
        }
        // declared d: push d(eta) through the inverse change of basis
        let skeleton = b.clone().unchecked().build()?;
        let to_new: BTreeMap<String, Form> = (0..n)
            .map(|l| {
                let terms = express(&Terms::from([(1u32 << l, ScalarExpr::from(1))]));
                (base.labels[l].clone(), Form::from_raw(&skeleton, 1, terms))
            })
            .collect();
        for (k, f) in forms.iter().enumerate() {
            let d = f.exterior_derivative()?.substitute(&skeleton, &to_new)?;
            b.declared_d[k] = d.raw_terms().clone();
        }
        let frame = b.build()?;
        let to_new = to_new
            .into_iter()
            .map(|(l, f)| (l, f.rebase(&frame).expect("same labels")))
            .collect();
        let to_base = labels
            .iter()
            .zip(forms)
            .map(|(l, f)| (l.as_ref().to_string(), f.clone()))
            .collect();
        Ok(Coframe {
            frame,
            to_new,
            to_base,
        })
    }
}

/// A frame built from a coframe of another frame, with the substitutions that
/// translate forms in either direction.
#[derive(Debug, Clone)]
pub struct Coframe {
    pub frame: Arc<FrameSpec>,
    /// base label -> 1-form in the new frame
    pub to_new: BTreeMap<String, Form>,
    /// new label -> 1-form in the base frame
    pub to_base: BTreeMap<String, Form>,
}

impl Coframe {
    pub fn forward(&self, f: &Form) -> Result<Form, ExteriorError> {
        f.substitute(&self.frame, &self.to_new)
    }

    pub fn back(&self, f: &Form, base: &Arc<FrameSpec>) -> Result<Form, ExteriorError> {
        f.substitute(base, &self.to_base)
    }
}

#[derive(Debug, Clone, Default)]
pub struct FrameBuilder {
    labels: Vec<String>,
    kinds: Vec<LabelKind>,
    declared_d: Vec<Terms>,
    pending_d: Vec<(String, Vec<(String, String, ScalarExpr)>)>,
    pending_vars: Vec<(String, Vec<(String, ScalarExpr)>)>,
    var_d: BTreeMap<Var, Terms>,
    conj_pairs: Vec<(String, String)>,
    skip_check: bool,
}

impl FrameBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn push(mut self, label: String, kind: LabelKind) -> Self {
        self.labels.push(label);
        self.kinds.push(kind);
        self.declared_d.push(Terms::new());
        self
    }

    /// Adds `d<name>` as a closed label and makes `name` a variable.
    pub fn coordinate(mut self, name: &str) -> Self {
        let bit = 1u32 << self.labels.len();
        self.var_d
            .insert(Arc::from(name), Terms::from([(bit, ScalarExpr::from(1))]));
        self.push(format!("d{name}"), LabelKind::Coordinate(Arc::from(name)))
    }

    pub fn abstract_label(self, label: &str) -> Self {
        self.push(label.to_string(), LabelKind::Abstract)
    }

    pub fn connection(self, label: &str) -> Self {
        self.push(label.to_string(), LabelKind::Connection)
    }

    /// Declares `d(label) = sum c * (a ^ b)`.
    pub fn declare_d(mut self, label: &str, terms: Vec<(&str, &str, ScalarExpr)>) -> Self {
        self.pending_d.push((
            label.to_string(),
            terms
                .into_iter()
                .map(|(a, b, c)| (a.to_string(), b.to_string(), c))
                .collect(),
        ));
        self
    }

    /// Declares a scalar symbol `name` with `d(name) = sum c * label`.
    pub fn variable(mut self, name: &str, d: Vec<(&str, ScalarExpr)>) -> Self {
        self.pending_vars.push((
            name.to_string(),
            d.into_iter().map(|(l, c)| (l.to_string(), c)).collect(),
        ));
        self
    }

    pub fn constants<S: AsRef<str>>(mut self, names: &[S]) -> Self {
        for n in names {
            self.var_d.insert(Arc::from(n.as_ref()), Terms::new());
        }
        self
    }

    /// Pairs of labels exchanged by complex conjugation; unlisted labels are real.
    pub fn conjugation(mut self, pairs: &[(&str, &str)]) -> Self {
        self.conj_pairs = pairs
            .iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        self
    }

    /// Skips the `d∘d = 0` consistency check.
    pub fn unchecked(mut self) -> Self {
        self.skip_check = true;
        self
    }

    pub fn build(self) -> Result<Arc<FrameSpec>, ExteriorError> {
        let n = self.labels.len();
        if n > 32 {
            return Err(ExteriorError::TooManyLabels(n));
        }
        for (k, l) in self.labels.iter().enumerate() {
            if self.labels[..k].contains(l) {
                return Err(ExteriorError::DuplicateLabel(l.clone()));
            }
        }
        let idx = |l: &str| {
            self.labels
                .iter()
                .position(|x| x == l)
                .ok_or_else(|| ExteriorError::UnknownLabel(l.to_string()))
        };
        let mut declared_d = self.declared_d.clone();
        for (label, terms) in &self.pending_d {
            let k = idx(label)?;
            if self.kinds[k] != LabelKind::Abstract {
                return Err(ExteriorError::NotAbstract(label.clone()));
            }
            for (a, b, c) in terms {
                let (ia, ib) = (idx(a)?, idx(b)?);
                if ia == ib || c.is_zero() {
                    continue;
                }
                let w = (1u32 << ia) | (1u32 << ib);
                let s = wedge_sign(1u32 << ia, 1u32 << ib);
                let e = declared_d[k].entry(w).or_insert_with(ScalarExpr::zero);
                *e = e.clone() + if s > 0 { c.clone() } else { -c.clone() };
            }
            declared_d[k].retain(|_, c| !c.is_zero());
        }
        let mut var_d = self.var_d.clone();
        for (name, terms) in &self.pending_vars {
            let mut t = Terms::new();
            for (l, c) in terms {
                let e = t.entry(1u32 << idx(l)?).or_insert_with(ScalarExpr::zero);
                *e = e.clone() + c.clone();
            }
            t.retain(|_, c| !c.is_zero());
            var_d.insert(Arc::from(name.as_str()), t);
        }
        let conj = if self.conj_pairs.is_empty() {
            None
        } else {
            let mut p: Vec<usize> = (0..n).collect();
            for (a, b) in &self.conj_pairs {
                let (ia, ib) = (idx(a)?, idx(b)?);
                p[ia] = ib;
                p[ib] = ia;
            }
            Some(p)
        };
        let frame = Arc::new(FrameSpec {
            labels: self.labels,
            kinds: self.kinds,
            declared_d,
            var_d,
            conj,
        });
        if !self.skip_check {
            for k in 0..n {
                let dd = Form::basis_index(&frame, k)
                    .exterior_derivative()?
                    .exterior_derivative()?;
                if !dd.is_zero() {
                    return Err(ExteriorError::InconsistentD {
                        label: frame.labels[k].clone(),
                        residue: dd.to_string(),
                    });
                }
            }
            for v in frame.var_d.keys() {
                let dd = Form::scalar(&frame, ScalarExpr::var(v))
                    .exterior_derivative()?
                    .exterior_derivative()?;
                if !dd.is_zero() {
                    return Err(ExteriorError::InconsistentD {
                        label: v.to_string(),
                        residue: dd.to_string(),
                    });
                }
            }
        }
        Ok(frame)
    }
}
