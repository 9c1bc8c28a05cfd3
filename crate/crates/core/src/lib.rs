//! Two-engine laboratory for an h-dependent operator algebra that
//! interpolates between quantum (`h = h_o`) and classical (`h = 0`)
//! mechanics on `H_q ⊗ H_p ⊗ H_r`.
//!
//! * [`ncpoly`]: exact symbolic algebra with canonical normal forms.
//! * [`matrep`]: finite matrix realizations (Fock or grid) of the factors.
//! * [`states`]: lifted quantum eigenstates, classical point and mixed
//!   states, and the trace-ratio mean value.
//! * [`dynamics`]: Liouville and von Neumann evolution and their comparison
//!   on the harmonic oscillator.
//!
//! The symbolic types are generic over an [`Exact`] rational type and the
//! numeric types over a [`Real`] float; the aliases below fix the usual
//! choices.

pub mod dynamics;
pub mod error;
pub mod matrep;
pub mod ncpoly;
pub mod scalar;
pub mod states;

pub use error::{Error, Result};
pub use scalar::{Exact, Real};

/// Arbitrary-precision rational, the default exact coefficient type.
pub type Rational = num_rational::BigRational;

pub type Coeff = ncpoly::ScalarCoeff<Rational>;
pub type Poly = ncpoly::TensorPoly<Rational>;
pub type Expr = ncpoly::ObservableExpr<Rational>;
pub type Gens = ncpoly::Generators<Rational>;
pub type Backend64 = matrep::Backend<f64>;
pub type Backend32 = matrep::Backend<f32>;
pub type TensorMatrix64 = matrep::TensorMatrix<f64>;
pub type TensorMatrix32 = matrep::TensorMatrix<f32>;
pub type PhaseSpaceDensity64 = dynamics::PhaseSpaceDensity<f64>;
