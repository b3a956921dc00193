//! Exterior algebra over an explicit frame of 1-forms.

mod form;
mod frame;

use std::sync::Arc;

use num_traits::{One, Zero};
use thiserror::Error;

pub use form::Form;
pub use frame::{Coframe, FrameBuilder, FrameSpec, LabelKind};

use crate::field::Field;
use crate::linalg::Matrix;
use crate::symkernel::{ScalarExpr, SymError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExteriorError {
    #[error("forms live on different frames")]
    FrameMismatch,
    #[error("degree mismatch")]
    DegreeMismatch,
    #[error("unknown basis label '{0}'")]
    UnknownLabel(String),
    #[error("duplicate basis label '{0}'")]
    DuplicateLabel(String),
    #[error("label '{0}' is not abstract, so its differential cannot be declared")]
    NotAbstract(String),
    #[error("frames support at most 32 labels, got {0}")]
    TooManyLabels(usize),
    #[error("no differential declared for symbol '{0}'")]
    UndeclaredVariable(String),
    #[error("substitution does not cover label '{0}'")]
    MissingSubstitution(String),
    #[error("declared differentials are inconsistent: d(d {label}) = {residue}")]
    InconsistentD { label: String, residue: String },
    #[error("ideal generators are linearly dependent")]
    DependentGenerators,
    #[error("coframe is not invertible")]
    SingularCoframe,
    #[error(transparent)]
    Sym(#[from] SymError),
}

/// Sign of `e_a ∧ e_b` relative to the sorted word `e_{a|b}`, for disjoint
/// masks: `(-1)^(number of pairs i in a, j in b with i > j)`.
pub(crate) fn wedge_sign(a: u32, b: u32) -> i8 {
    let mut inv = 0u32;
    let mut bb = b;
    while bb != 0 {
        let j = bb.trailing_zeros();
        inv += (a >> j).count_ones();
        bb &= bb - 1;
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Outcome of reducing a form modulo an algebraic ideal of 1-forms.
#[derive(Debug, Clone)]
pub struct Reduction {
    /// Normal form: no term contains a pivot label of the generators.
    pub remainder: Form,
    /// `a - remainder = sum_k gens[k] ∧ witnesses[k]`.
    pub witnesses: Vec<Form>,
    /// Index of the label eliminated by each generator.
    pub pivots: Vec<usize>,
}

/// Reduces `a` modulo the algebraic ideal generated by the 1-forms `gens`.
///
/// The generators are completed to a basis deterministically: each one in
/// turn eliminates the first label (in frame order) carrying a constant
/// coefficient, falling back to the simplest coefficient. For the contact
/// form on a jet chart this eliminates `dz`.
pub fn reduce_mod_ideal(a: &Form, gens: &[Form]) -> Result<Reduction, ExteriorError> {
    let frame = a.frame().clone();
    let n = frame.dim();
    let m = gens.len();
    for g in gens {
        if !Arc::ptr_eq(g.frame(), &frame) {
            return Err(ExteriorError::FrameMismatch);
        }
        if g.degree() != 1 {
            return Err(ExteriorError::DegreeMismatch);
        }
    }
    // rows: [coefficients | identity], so the right block records ĝ = L g
    let mut rows = Matrix::<ScalarExpr>::zeros(m, n + m);
    for (r, g) in gens.iter().enumerate() {
        for k in 0..n {
            rows[(r, k)] = g.coefficient_idx(&[k]);
        }
        rows[(r, n + r)] = ScalarExpr::one();
    }
    let mut pivots = Vec::with_capacity(m);
    for r in 0..m {
        let col = (0..n)
            .filter(|&c| !rows[(r, c)].is_zero())
            .min_by_key(|&c| (Field::pivot_cost(&rows[(r, c)]), c))
            .ok_or(ExteriorError::DependentGenerators)?;
        let inv = rows[(r, col)].recip()?;
        for j in 0..n + m {
            rows[(r, j)] = &rows[(r, j)] * &inv;
        }
        for i in 0..m {
            if i == r || rows[(i, col)].is_zero() {
                continue;
            }
            let f = rows[(i, col)].clone();
            for j in 0..n + m {
                if !rows[(r, j)].is_zero() {
                    rows[(i, j)] = &rows[(i, j)] - &(&f * &rows[(r, j)]);
                }
            }
        }
        pivots.push(col);
    }
    // normalized generators ĝ_r = e_{p_r} + sum over non-pivot labels
    let mut rest = a.clone();
    let mut hat_sigma = Vec::with_capacity(m);
    for (r, &p) in pivots.iter().enumerate() {
        let mut ghat = Form::zero(&frame, 1);
        for k in 0..n {
            if !rows[(r, k)].is_zero() {
                ghat = ghat.add(&Form::basis_index(&frame, k).scale(&rows[(r, k)]))?;
            }
        }
        // split off every term containing e_p: f e_w = ± e_p ∧ f e_{w\p}
        let mut sigma = Form::zero(&frame, a.degree().saturating_sub(1));
        if a.degree() > 0 {
            for (idx, c) in rest.terms() {
                if let Some(pos) = idx.iter().position(|&k| k == p) {
                    let others: Vec<usize> = idx.iter().copied().filter(|&k| k != p).collect();
                    let mut t = Form::scalar(&frame, c.clone());
                    for k in others {
                        t = t.wedge(&Form::basis_index(&frame, k))?;
                    }
                    if pos % 2 == 1 {
                        t = t.neg();
                    }
                    sigma = sigma.add(&t)?;
                }
            }
            rest = rest.sub(&ghat.wedge(&sigma)?)?;
        }
        hat_sigma.push(sigma);
    }
    // ĝ_r = sum_l L[r][l] g_l, so sum_r ĝ_r ∧ σ̂_r = sum_l g_l ∧ (sum_r L[r][l] σ̂_r)
    let mut witnesses = Vec::with_capacity(m);
    for l in 0..m {
        let mut w = Form::zero(&frame, a.degree().saturating_sub(1));
        for (r, s) in hat_sigma.iter().enumerate() {
            let c = &rows[(r, n + l)];
            if !c.is_zero() {
                w = w.add(&s.scale(c))?;
            }
        }
        witnesses.push(w);
    }
    Ok(Reduction {
        remainder: rest,
        witnesses,
        pivots,
    })
}

/// Shorthand for the remainder of [`reduce_mod_ideal`].
pub fn mod_ideal(a: &Form, gens: &[Form]) -> Result<Form, ExteriorError> {
    Ok(reduce_mod_ideal(a, gens)?.remainder)
}

/// `sum_k g_k ∧ σ_k`, used to check reduction witnesses.
pub fn combine(gens: &[Form], sigmas: &[Form]) -> Result<Form, ExteriorError> {
    let mut it = gens.iter().zip(sigmas);
    let (g0, s0) = it.next().ok_or(ExteriorError::DegreeMismatch)?;
    let mut acc = g0.wedge(s0)?;
    for (g, s) in it {
        acc = acc.add(&g.wedge(s)?)?;
    }
    Ok(acc)
}
