//! The named generators of the h-dependent algebra and its two endpoints.

use super::coeff::ScalarCoeff;
use super::factor::FactorPoly;
use super::roperator::ROperator;
use super::tensor::TensorPoly;
use crate::scalar::Exact;

/// The nine named elements, with `λ = 1 − h/h_o` left symbolic in the
/// generalized generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Generators<R: Exact> {
    /// `Q̂⊗Î⊗(R̂_q + λR̂_p) + Î⊗Q̂⊗R̂_p`
    pub q_tilde: TensorPoly<R>,
    /// `P̂⊗Î⊗R̂_q + Î⊗P̂⊗(λR̂_q + R̂_p)`
    pub p_tilde: TensorPoly<R>,
    /// `Q̂⊗Î⊗R̂_q + Î⊗Q̂⊗R̂_p`
    pub q_qm: TensorPoly<R>,
    /// `P̂⊗Î⊗R̂_q + Î⊗P̂⊗R̂_p`
    pub p_qm: TensorPoly<R>,
    /// `Q̂⊗Î⊗Î`
    pub q_cm: TensorPoly<R>,
    /// `Î⊗P̂⊗Î`
    pub p_cm: TensorPoly<R>,
    pub identity: TensorPoly<R>,
    /// `Î⊗Î⊗R̂_q`
    pub r_q: TensorPoly<R>,
    /// `Î⊗Î⊗R̂_p`
    pub r_p: TensorPoly<R>,
}

impl<R: Exact> Generators<R> {
    pub fn new() -> Self {
        let one = FactorPoly::one();
        let q = FactorPoly::q();
        let p = FactorPoly::p();
        let rq = ROperator::r_q();
        let rp = ROperator::r_p();
        let lambda = ScalarCoeff::lambda();

        let q_tilde = &TensorPoly::from_parts(&q, &one, &(&rq + &rp.scale(&lambda)))
            + &TensorPoly::from_parts(&one, &q, &rp);
        let p_tilde = &TensorPoly::from_parts(&p, &one, &rq)
            + &TensorPoly::from_parts(&one, &p, &(&rq.scale(&lambda) + &rp));
        let q_qm = &TensorPoly::from_parts(&q, &one, &rq) + &TensorPoly::from_parts(&one, &q, &rp);
        let p_qm = &TensorPoly::from_parts(&p, &one, &rq) + &TensorPoly::from_parts(&one, &p, &rp);

        Generators {
            q_tilde,
            p_tilde,
            q_qm,
            p_qm,
            q_cm: TensorPoly::from_parts(&q, &one, &ROperator::identity()),
            p_cm: TensorPoly::from_parts(&one, &p, &ROperator::identity()),
            identity: TensorPoly::identity(),
            r_q: TensorPoly::from_parts(&one, &one, &rq),
            r_p: TensorPoly::from_parts(&one, &one, &rp),
        }
    }

    /// `(name, element)` pairs in a fixed order.
    pub fn named(&self) -> [(&'static str, &TensorPoly<R>); 9] {
        [
            ("q_tilde", &self.q_tilde),
            ("p_tilde", &self.p_tilde),
            ("q_qm", &self.q_qm),
            ("p_qm", &self.p_qm),
            ("q_cm", &self.q_cm),
            ("p_cm", &self.p_cm),
            ("identity", &self.identity),
            ("r_q", &self.r_q),
            ("r_p", &self.r_p),
        ]
    }
}

impl<R: Exact> Default for Generators<R> {
    fn default() -> Self {
        Self::new()
    }
}

pub fn make_generators<R: Exact>() -> Generators<R> {
    Generators::new()
}
