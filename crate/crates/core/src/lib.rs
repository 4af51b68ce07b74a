//! Exact computations for critical-level Wakimoto modules of affine `sl₂`
//! and their fermionic realization.

pub mod algebra;
pub mod classify;
pub mod error;
pub mod fock;
pub mod scalar;
pub mod schur;
pub mod span;
pub mod sparse;
pub mod suites;
pub mod weyl;

pub use error::{Error, Result};

use num_rational::BigRational;

pub type Rational = BigRational;
pub type Chi = scalar::ChiSeries<Rational>;
pub type FermionVector = fock::FermionVec<Rational>;
pub type WeylVector = weyl::WeylVec<Rational>;
