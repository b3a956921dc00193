//! The scalar abstraction shared by the linear algebra and the algebra modules.
//!
//! Everything downstream is written against [`Field`], so the same elimination
//! code runs over exact rationals, Gaussian rationals, rational functions, and
//! (for quick numerical cross-checks) `f32`/`f64`.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// A commutative field with exact (or tolerance-based, for floats) zero test.
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
{
    fn from_i64(n: i64) -> Self;

    /// Zero test used for pivot selection. Exact fields use `is_zero`.
    fn is_negligible(&self) -> bool {
        self.is_zero()
    }

    /// Pivot preference: lower is better. Exact fields prefer constants and
    /// short expressions so that elimination keeps intermediate sizes small.
    fn pivot_cost(&self) -> usize {
        0
    }
}

/// A field with a total order compatible with the arithmetic, needed for
/// inertia (signature) computations.
pub trait OrderedField: Field + PartialOrd {}

impl Field for BigRational {
    fn from_i64(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }
}

impl OrderedField for BigRational {}

macro_rules! impl_float_field {
    ($t:ty, $eps:expr) => {
        impl Field for $t {
            fn from_i64(n: i64) -> Self {
                n as $t
            }
            fn is_negligible(&self) -> bool {
                self.abs() < $eps
            }
        }
        impl OrderedField for $t {}
    };
}

impl_float_field!(f64, 1e-10);
impl_float_field!(f32, 1e-5);

/// Sign of an ordered-field element relative to zero.
pub fn sign_of<F: OrderedField>(x: &F) -> i8 {
    if x.is_negligible() {
        0
    } else if *x > F::zero() {
        1
    } else {
        -1
    }
}

pub(crate) fn rational_to_string(q: &BigRational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub(crate) fn rational_is_negative(q: &BigRational) -> bool {
    q.is_negative()
}
