//! The equivalence problem for elliptic Monge-Ampère systems: orbit
//! classification, the complexified coframe, torsion absorption on the first
//! two G-structures, and the invariants `S₁`, `S₂`.
//!
//! Two kinds of computation live here. The concrete pipeline starts from an
//! adapted coframe on a jet chart, works on that section of the bundle, and
//! produces the torsion coefficients as explicit functions. The generic
//! derivations in [`symbolic`] work on a frame whose torsion coefficients are
//! free symbols and whose connection forms have undetermined differentials;
//! they produce the relations the concrete pipeline must satisfy.

use thiserror::Error;

use crate::exterior::ExteriorError;
use crate::jet_contact::JetError;
use crate::symkernel::SymError;

mod coframe;
mod complex;
mod reduce;
pub mod symbolic;
mod torsion;

pub use coframe::{classify, classify_invariance, AdaptedCoframe, Orbit, OrbitClass};
pub use complex::{complexify, conjugate_block, transform_pair, ComplexCoframe, PI_LABELS};
pub use reduce::{el_test, integrability, invariants_s, laplace_test, reduce_to_b1, B1Equations, PInvariants, RelationValue};
pub use torsion::{
    absorb, compute_torsion, Connection, StructureEquations, Torsion, TorsionInvariants, CONNECTION_ENTRIES,
    TORSION_WORDS,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GStructureError {
    #[error("coframe is not adapted: {0}")]
    NotAdapted(String),
    #[error("multiplier {0} has no definite sign on this chart (not orbit-pure)")]
    NotOrbitPure(String),
    #[error("the system is {0:?}, not elliptic")]
    NotElliptic(Orbit),
    #[error("normalization needs the square root of {0}, which is not rational")]
    Irrational(String),
    #[error("automatic normalization needs constant coefficients; supply an adapted coframe")]
    NeedsCoframe,
    #[error("Ψ is not a multiple of w1^w4 + w2^w3 modulo w0: residue {0}")]
    NotNormalForm(String),
    #[error("absorption system is inconsistent; residual torsion {0}")]
    Absorption(String),
    #[error("integrability relation {name} fails: {value}")]
    Integrability { name: String, value: String },
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Exterior(#[from] ExteriorError),
    #[error(transparent)]
    Sym(#[from] SymError),
}
