//! Exact symbolic machinery for the equivalence problem of second-order
//! Monge-Ampère equations in two independent variables.

pub mod field;
pub mod symkernel;

pub use field::{Field, OrderedField};
pub use symkernel::{GaussianRational, ScalarExpr, SymError};

pub type Rational = num_rational::BigRational;

pub mod linalg;
pub use linalg::Matrix;

pub type QMatrix = Matrix<Rational>;
pub type GMatrix = Matrix<GaussianRational>;
pub type ExprMatrix = Matrix<ScalarExpr>;
pub type F64Matrix = Matrix<f64>;

pub mod exterior;
pub use exterior::{Form, FrameSpec};

pub mod jet_contact;

pub mod algebra;
pub mod gstructure;
pub use gstructure::{AdaptedCoframe, Orbit, OrbitClass};
pub mod cartan;
pub mod pipeline;
