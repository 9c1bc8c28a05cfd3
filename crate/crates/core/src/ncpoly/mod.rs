//! Exact symbolic algebra of noncommutative polynomials on `H_q ⊗ H_p ⊗ H_r`.
//!
//! Each of the two rigged-space factors carries polynomials in `Q̂`, `P̂`
//! kept in normal order (`Q̂` left of `P̂`) through the rewrite
//! `P̂Q̂ → Q̂P̂ − iħ`. The auxiliary factor carries 2×2 matrices spanned by
//! the projectors `R̂_q`, `R̂_p`. Coefficients are polynomials in `ħ` and
//! `λ = 1 − h/h_o` with exact complex-rational weights, so equality of
//! canonical forms decides operator identities.

mod coeff;
mod expr;
mod factor;
mod generators;
mod roperator;
mod tensor;

pub use coeff::{CoeffMonomial, ScalarCoeff};
pub use expr::{
    eval_factor, eval_ncpoly, eval_ncpoly_with, random_polynomial, CommPoly, Evaluator, FactorEval,
    ObservableExpr, TensorEval,
};
pub use factor::{factor_normalize, monomial_word, FactorPoly, Letter, Rewriter, Strategy};
pub use generators::{make_generators, Generators};
pub use roperator::{ProjectorRelations, RIndex, ROperator};
pub use tensor::{TensorPoly, TermKey};

use crate::error::Result;
use crate::scalar::Exact;

pub fn tp_add<R: Exact>(a: &TensorPoly<R>, b: &TensorPoly<R>) -> TensorPoly<R> {
    a + b
}

pub fn tp_mul<R: Exact>(a: &TensorPoly<R>, b: &TensorPoly<R>) -> TensorPoly<R> {
    a.mul(b)
}

pub fn tp_commutator<R: Exact>(a: &TensorPoly<R>, b: &TensorPoly<R>) -> TensorPoly<R> {
    a.commutator(b)
}

pub fn tp_adjoint<R: Exact>(a: &TensorPoly<R>) -> TensorPoly<R> {
    a.adjoint()
}

pub fn substitute_lambda<R: Exact>(a: &TensorPoly<R>, value: &R) -> Result<TensorPoly<R>> {
    a.substitute_lambda(value)
}

pub fn canonical_eq<R: Exact>(a: &TensorPoly<R>, b: &TensorPoly<R>) -> bool {
    a.canonical_eq(b)
}

/// `f ⊗ Î ⊗ R̂_q + Î ⊗ f ⊗ R̂_p`: a single-factor operator carried into the
/// quantum sector of the big space.
pub fn translate_qm<R: Exact>(f: &FactorPoly<R>) -> TensorPoly<R> {
    let one = FactorPoly::one();
    &TensorPoly::from_parts(f, &one, &ROperator::r_q()) + &TensorPoly::from_parts(&one, f, &ROperator::r_p())
}
