//! Text grammar for scalar expressions:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | 'i' | identifier | '(' expr ')'
//! ```
//!
//! Function applications such as `sin(x1)` are rejected.

use super::expr::ScalarExpr;
use super::SymError;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Ident(String),
    Op(char),
}

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, SymError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let mut k = 0;
    while k < chars.len() {
        let c = chars[k];
        let col = k + 1;
        if c.is_whitespace() {
            k += 1;
        } else if c.is_ascii_digit() {
            let s = k;
            while k < chars.len() && chars[k].is_ascii_digit() {
                k += 1;
            }
            if k < chars.len() && (chars[k] == '.' || chars[k].is_alphabetic()) {
                return Err(SymError::Parse {
                    col: k + 1,
                    msg: format!("unexpected '{}' after number", chars[k]),
                });
            }
            out.push((Tok::Int(chars[s..k].iter().collect()), col));
        } else if c.is_alphabetic() || c == '_' {
            let s = k;
            while k < chars.len() && (chars[k].is_alphanumeric() || chars[k] == '_') {
                k += 1;
            }
            out.push((Tok::Ident(chars[s..k].iter().collect()), col));
        } else if "+-*/^()".contains(c) {
            out.push((Tok::Op(c), col));
            k += 1;
        } else {
            return Err(SymError::Parse {
                col,
                msg: format!("unexpected character '{c}'"),
            });
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    allowed: Option<&'a [&'a str]>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map(|(_, c)| *c).unwrap_or(self.end_col)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SymError> {
        Err(SymError::Parse {
            col: self.col(),
            msg: msg.into(),
        })
    }

    fn expr(&mut self) -> Result<ScalarExpr, SymError> {
        let mut acc = self.term()?;
        while let Some(Tok::Op(c @ ('+' | '-'))) = self.peek().cloned() {
            self.pos += 1;
            let rhs = self.term()?;
            acc = if c == '+' { acc + rhs } else { acc - rhs };
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<ScalarExpr, SymError> {
        let mut acc = self.unary()?;
        while let Some(Tok::Op(c @ ('*' | '/'))) = self.peek().cloned() {
            let col = self.col();
            self.pos += 1;
            let rhs = self.unary()?;
            acc = if c == '*' {
                acc * rhs
            } else {
                acc.checked_div(&rhs).map_err(|_| SymError::Parse {
                    col,
                    msg: "division by zero".into(),
                })?
            };
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<ScalarExpr, SymError> {
        match self.peek() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<ScalarExpr, SymError> {
        let base = self.atom()?;
        if let Some(Tok::Op('^')) = self.peek() {
            self.pos += 1;
            match self.peek().cloned() {
                Some(Tok::Int(s)) => {
                    let e: u32 = match s.parse() {
                        Ok(e) => e,
                        Err(_) => return self.err("exponent too large"),
                    };
                    self.pos += 1;
                    Ok(base.pow(e))
                }
                _ => self.err("exponent must be a nonnegative integer literal"),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<ScalarExpr, SymError> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(s)) => {
                self.pos += 1;
                let n: num_bigint::BigInt = s.parse().expect("digits");
                Ok(ScalarExpr::constant(
                    super::GaussianRational::from_rational(num_rational::BigRational::from_integer(n)),
                ))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                if let Some(Tok::Op('(')) = self.peek() {
                    return Err(SymError::UnsupportedFunction { name, col });
                }
                if name == "i" {
                    return Ok(ScalarExpr::i());
                }
                if let Some(allowed) = self.allowed {
                    if !allowed.contains(&name.as_str()) {
                        return Err(SymError::Parse {
                            col,
                            msg: format!("unknown identifier '{name}'"),
                        });
                    }
                }
                Ok(ScalarExpr::var(&name))
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                match self.peek() {
                    Some(Tok::Op(')')) => {
                        self.pos += 1;
                        Ok(e)
                    }
                    _ => self.err("expected ')'"),
                }
            }
            Some(Tok::Op(c)) => self.err(format!("unexpected '{c}'")),
            None => self.err("unexpected end of expression"),
        }
    }
}

/// Parses an expression; identifiers must come from `allowed` when given.
pub fn parse_expr_with(src: &str, allowed: Option<&[&str]>) -> Result<ScalarExpr, SymError> {
    let toks = lex(src)?;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col: src.chars().count() + 1,
        allowed,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

pub fn parse_expr(src: &str) -> Result<ScalarExpr, SymError> {
    parse_expr_with(src, None)
}
