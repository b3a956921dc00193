//! Exact scalar arithmetic: rational functions in named chart coordinates
//! with Gaussian-rational coefficients.

mod expr;
mod gaussian;
mod parse;
mod poly;

use std::collections::BTreeMap;
use std::sync::Arc;

use thiserror::Error;

pub use expr::{var_map, ScalarExpr};
pub use gaussian::GaussianRational;
pub use parse::{parse_expr, parse_expr_with};
pub use poly::{gcd, Monomial, Poly, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("expression has a pole at the evaluation point")]
    Pole,
    #[error("variable '{0}' has no value at the evaluation point")]
    UnboundVariable(String),
    #[error("unknown coordinate '{0}'")]
    UnknownCoordinate(String),
    #[error("parse error at column {col}: {msg}")]
    Parse { col: usize, msg: String },
    #[error("unsupported function '{name}' at column {col}: only rational expressions are accepted")]
    UnsupportedFunction { name: String, col: usize },
}

/// Binary field operations, for callers that select the operation at runtime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn arith(a: &ScalarExpr, b: &ScalarExpr, op: ArithOp) -> Result<ScalarExpr, SymError> {
    Ok(match op {
        ArithOp::Add => a + b,
        ArithOp::Sub => a - b,
        ArithOp::Mul => a * b,
        ArithOp::Div => a.checked_div(b)?,
    })
}

/// A declared, ordered list of coordinate names.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoordinateSystem {
    names: Vec<Var>,
}

impl CoordinateSystem {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        CoordinateSystem {
            names: names.iter().map(|s| Arc::from(s.as_ref())).collect(),
        }
    }

    pub fn names(&self) -> &[Var] {
        &self.names
    }

    pub fn contains(&self, name: &str) -> bool {
        self.names.iter().any(|n| &**n == name)
    }

    pub fn differentiate(&self, a: &ScalarExpr, coord: &str) -> Result<ScalarExpr, SymError> {
        if !self.contains(coord) {
            return Err(SymError::UnknownCoordinate(coord.to_string()));
        }
        Ok(a.derivative(coord))
    }

    pub fn parse(&self, src: &str) -> Result<ScalarExpr, SymError> {
        let names: Vec<&str> = self.names.iter().map(|n| &**n).collect();
        parse_expr_with(src, Some(&names))
    }

    pub fn point(&self, values: &[GaussianRational]) -> BTreeMap<Var, GaussianRational> {
        self.names.iter().cloned().zip(values.iter().cloned()).collect()
    }
}
