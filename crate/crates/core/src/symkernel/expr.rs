use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use super::gaussian::GaussianRational;
use super::poly::{gcd, Poly, Var};
use super::SymError;
use crate::field::Field;

/// A rational function `numerator / denominator` in named variables with
/// Gaussian-rational coefficients.
///
/// Always canonical: numerator and denominator are coprime, the denominator's
/// graded-lex leading coefficient is 1, and zero is `0/1`. Structural equality
/// is therefore mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ScalarExpr {
    num: Poly,
    den: Poly,
}

impl ScalarExpr {
    pub fn from_poly(p: Poly) -> Self {
        ScalarExpr {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        Self::constant(GaussianRational::from_int(n))
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        Self::constant(GaussianRational::from_ratio(n, d))
    }

    pub fn i() -> Self {
        Self::constant(GaussianRational::i())
    }

    pub fn var(name: &str) -> Self {
        Self::from_poly(Poly::var(name))
    }

    /// Builds `num / den`, canonicalizing.
    pub fn from_parts(num: Poly, den: Poly) -> Result<Self, SymError> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(Self::canonical(num, den))
    }

    fn canonical(num: Poly, den: Poly) -> Self {
        if num.is_zero() {
            return Self::from_poly(Poly::zero());
        }
        if let Some(c) = den.constant_value() {
            let inv = c.inv().expect("nonzero denominator");
            return Self::from_poly(num.scale(&inv));
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        let lc = den.leading().map(|(_, c)| c.clone()).expect("nonzero");
        let inv = lc.inv().expect("nonzero");
        ScalarExpr {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn constant_value(&self) -> Option<GaussianRational> {
        if self.den.is_constant() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut v = self.num.variables();
        v.extend(self.den.variables());
        v
    }

    /// Complex conjugate; all variables are treated as real.
    pub fn conj(&self) -> Self {
        Self::canonical(self.num.conj(), self.den.conj())
    }

    pub fn re(&self) -> Self {
        (self.clone() + self.conj()) * Self::ratio(1, 2)
    }

    pub fn im(&self) -> Self {
        (self.clone() - self.conj()) * Self::constant(GaussianRational::from_parts(0, -1))
            * Self::ratio(1, 2)
    }

    pub fn checked_div(&self, o: &Self) -> Result<Self, SymError> {
        if o.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(self.mul_ref(&o.recip_unchecked()))
    }

    pub fn recip(&self) -> Result<Self, SymError> {
        if self.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(self.recip_unchecked())
    }

    fn recip_unchecked(&self) -> Self {
        Self::canonical(self.den.clone(), self.num.clone())
    }

    pub fn add_ref(&self, o: &Self) -> Self {
        if self.den == o.den {
            if self.den.is_constant() {
                return Self::from_poly(self.num.add(&o.num));
            }
            return Self::canonical(self.num.add(&o.num), self.den.clone());
        }
        Self::canonical(
            self.num.mul(&o.den).add(&o.num.mul(&self.den)),
            self.den.mul(&o.den),
        )
    }

    pub fn sub_ref(&self, o: &Self) -> Self {
        self.add_ref(&o.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        ScalarExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul_ref(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        if self.den.is_constant() && o.den.is_constant() {
            return Self::from_poly(self.num.mul(&o.num));
        }
        // cross-cancel before multiplying
        let g1 = gcd(&self.num, &o.den);
        let g2 = gcd(&o.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = o.den.div_exact(&g1).expect("gcd divides");
        let n2 = o.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        Self::canonical(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        ScalarExpr {
            num: self.num.scale(k),
            den: self.den.clone(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        ScalarExpr {
            num: self.num.pow(e),
            den: self.den.pow(e),
        }
    }

    /// Partial derivative with respect to `v` (any variable name; use
    /// [`super::CoordinateSystem::differentiate`] for the checked version).
    pub fn derivative(&self, v: &str) -> Self {
        if self.den.is_constant() {
            return Self::canonical(self.num.derivative(v), self.den.clone());
        }
        let n = self
            .num
            .derivative(v)
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative(v)));
        Self::canonical(n, self.den.mul(&self.den))
    }

    pub fn eval_at(&self, point: &BTreeMap<Var, GaussianRational>) -> Result<GaussianRational, SymError> {
        let den = self
            .den
            .eval(point)
            .map_err(|v| SymError::UnboundVariable(v.to_string()))?;
        if den.is_zero() {
            return Err(SymError::Pole);
        }
        let num = self
            .num
            .eval(point)
            .map_err(|v| SymError::UnboundVariable(v.to_string()))?;
        Ok(&num / &den)
    }

    /// Substitutes expressions for variables; unmapped variables stay symbolic.
    pub fn substitute(&self, map: &BTreeMap<Var, ScalarExpr>) -> Result<Self, SymError> {
        let n = subst_poly(&self.num, map);
        let d = subst_poly(&self.den, map);
        n.checked_div(&d)
    }

    /// Polynomial coefficients in the given variables: maps each power
    /// product of `vars` to its coefficient (a rational function in the
    /// remaining variables). Requires the denominator to be free of `vars`.
    pub fn coefficients_in(&self, vars: &[&str]) -> Option<BTreeMap<Vec<u32>, ScalarExpr>> {
        let dvars = self.den.variables();
        if vars.iter().any(|v| dvars.contains(*v)) {
            return None;
        }
        let mut acc: BTreeMap<Vec<u32>, Poly> = BTreeMap::new();
        for (m, c) in self.num.terms() {
            let mut key = Vec::with_capacity(vars.len());
            let mut rest = m.clone();
            for v in vars {
                let (e, r) = rest.split_off(v);
                key.push(e);
                rest = r;
            }
            let slot = acc.entry(key).or_default();
            *slot = slot.add(&Poly::term(c.clone(), rest));
        }
        Some(
            acc.into_iter()
                .filter(|(_, p)| !p.is_zero())
                .map(|(k, p)| (k, Self::canonical(p, self.den.clone())))
                .collect(),
        )
    }

    /// Size measure used to prefer simple pivots.
    pub fn complexity(&self) -> usize {
        self.num.len() + self.den.len() - 1
    }

    /// Sign certificate for expressions that are visibly definite: returns
    /// `Some(+1)`/`Some(-1)` when numerator and denominator are each a sum of
    /// even power products with real coefficients of one sign, `Some(0)` for
    /// zero, and `None` otherwise.
    pub fn definite_sign(&self) -> Option<i8> {
        if self.is_zero() {
            return Some(0);
        }
        let sgn = |p: &Poly| -> Option<i8> {
            let mut s: Option<i8> = None;
            for (m, c) in p.terms() {
                if !c.is_real() || m.pairs().iter().any(|(_, e)| e % 2 == 1) {
                    return None;
                }
                let t = if crate::field::rational_is_negative(&c.re) { -1 } else { 1 };
                match s {
                    None => s = Some(t),
                    Some(u) if u != t => return None,
                    _ => {}
                }
            }
            s
        };
        Some(sgn(&self.num)? * sgn(&self.den)?)
    }
}

fn subst_poly(p: &Poly, map: &BTreeMap<Var, ScalarExpr>) -> ScalarExpr {
    let mut acc = ScalarExpr::zero();
    for (m, c) in p.terms() {
        let mut t = ScalarExpr::constant(c.clone());
        for (v, e) in m.pairs() {
            let f = match map.get(v) {
                Some(x) => x.pow(*e),
                None => ScalarExpr::from_poly(Poly::var(v.clone())).pow(*e),
            };
            t = t.mul_ref(&f);
        }
        acc = acc.add_ref(&t);
    }
    acc
}

impl Default for ScalarExpr {
    fn default() -> Self {
        Self::zero()
    }
}

impl Zero for ScalarExpr {
    fn zero() -> Self {
        Self::from_poly(Poly::zero())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for ScalarExpr {
    fn one() -> Self {
        Self::from_poly(Poly::one())
    }
}

impl From<GaussianRational> for ScalarExpr {
    fn from(c: GaussianRational) -> Self {
        Self::constant(c)
    }
}

impl From<num_rational::BigRational> for ScalarExpr {
    fn from(q: num_rational::BigRational) -> Self {
        Self::constant(GaussianRational::from_rational(q))
    }
}

impl From<i64> for ScalarExpr {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

impl From<Poly> for ScalarExpr {
    fn from(p: Poly) -> Self {
        Self::from_poly(p)
    }
}

impl Neg for ScalarExpr {
    type Output = Self;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl Neg for &ScalarExpr {
    type Output = ScalarExpr;
    fn neg(self) -> ScalarExpr {
        self.neg_ref()
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $f:ident) => {
        impl $tr for ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, o: ScalarExpr) -> ScalarExpr {
                self.$f(&o)
            }
        }
        impl $tr<&ScalarExpr> for ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, o: &ScalarExpr) -> ScalarExpr {
                self.$f(o)
            }
        }
        impl $tr<&ScalarExpr> for &ScalarExpr {
            type Output = ScalarExpr;
            fn $m(self, o: &ScalarExpr) -> ScalarExpr {
                self.$f(o)
            }
        }
    };
}

binop!(Add, add, add_ref);
binop!(Sub, sub, sub_ref);
binop!(Mul, mul, mul_ref);

fn div_panicking(a: &ScalarExpr, b: &ScalarExpr) -> ScalarExpr {
    a.checked_div(b).expect("division by zero ScalarExpr")
}

impl Div for ScalarExpr {
    type Output = ScalarExpr;
    fn div(self, o: ScalarExpr) -> ScalarExpr {
        div_panicking(&self, &o)
    }
}

impl Div<&ScalarExpr> for &ScalarExpr {
    type Output = ScalarExpr;
    fn div(self, o: &ScalarExpr) -> ScalarExpr {
        div_panicking(self, o)
    }
}

impl Field for ScalarExpr {
    fn from_i64(n: i64) -> Self {
        Self::int(n)
    }
    fn pivot_cost(&self) -> usize {
        if self.is_constant() {
            0
        } else {
            1 + self.complexity()
        }
    }
}

impl fmt::Display for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == Poly::one() {
            return write!(f, "{}", self.num);
        }
        let num = if self.num.len() == 1
            && self.num.leading().map(|(_, c)| c.is_simple()).unwrap_or(true)
        {
            self.num.to_string()
        } else {
            format!("({})", self.num)
        };
        // the denominator is monic, so a bare power of one variable needs no parentheses
        let den = match self.den.leading() {
            Some((m, _)) if self.den.len() == 1 && m.pairs().len() == 1 => self.den.to_string(),
            _ => format!("({})", self.den),
        };
        write!(f, "{num}/{den}")
    }
}

impl fmt::Debug for ScalarExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Convenience constructor for variable maps.
pub fn var_map<I, S>(it: I) -> BTreeMap<Var, ScalarExpr>
where
    I: IntoIterator<Item = (S, ScalarExpr)>,
    S: AsRef<str>,
{
    it.into_iter()
        .map(|(k, v)| (Arc::from(k.as_ref()), v))
        .collect()
}
