//! Elements of the three-factor algebra in canonical form.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use super::coeff::ScalarCoeff;
use super::factor::{monomial_label, monomial_word, FactorPoly, Rewriter};
use super::roperator::{RIndex, ROperator};
use crate::error::{Error, Result};
use crate::scalar::Exact;

/// `Q̂^mq P̂^nq ⊗ Q̂^mp P̂^np ⊗ |r_row⟩⟨r_col|`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct TermKey {
    pub mq: u32,
    pub nq: u32,
    pub mp: u32,
    pub np: u32,
    pub row: RIndex,
    pub col: RIndex,
}

impl TermKey {
    pub fn new(q: (u32, u32), p: (u32, u32), row: RIndex, col: RIndex) -> Self {
        TermKey {
            mq: q.0,
            nq: q.1,
            mp: p.0,
            np: p.1,
            row,
            col,
        }
    }

    pub fn q_monomial(&self) -> (u32, u32) {
        (self.mq, self.nq)
    }

    pub fn p_monomial(&self) -> (u32, u32) {
        (self.mp, self.np)
    }
}

/// Canonical sparse element of the algebra on `H_q ⊗ H_p ⊗ H_r`.
///
/// Two values are the same operator iff their term maps coincide, so the
/// derived `PartialEq` is the identity-verification oracle.
#[derive(Clone, PartialEq, Debug)]
pub struct TensorPoly<R: Exact> {
    terms: BTreeMap<TermKey, ScalarCoeff<R>>,
}

impl<R: Exact> Default for TensorPoly<R> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<R: Exact> TensorPoly<R> {
    pub fn zero() -> Self {
        TensorPoly {
            terms: BTreeMap::new(),
        }
    }

    /// `Î ⊗ Î ⊗ Î`.
    pub fn identity() -> Self {
        Self::from_parts(&FactorPoly::one(), &FactorPoly::one(), &ROperator::identity())
    }

    /// Scalar multiple of the identity.
    pub fn scalar(c: ScalarCoeff<R>) -> Self {
        Self::identity().scale(&c)
    }

    /// The elementary tensor `fq ⊗ fp ⊗ r`.
    pub fn from_parts(fq: &FactorPoly<R>, fp: &FactorPoly<R>, r: &ROperator<R>) -> Self {
        let mut out = Self::zero();
        for (&kq, cq) in fq.terms() {
            for (&kp, cp) in fp.terms() {
                let c = cq * cp;
                for (i, j, cr) in r.nonzero() {
                    out.accumulate(TermKey::new(kq, kp, i, j), &c * cr);
                }
            }
        }
        out
    }

    pub fn monomial(key: TermKey, c: ScalarCoeff<R>) -> Self {
        let mut out = Self::zero();
        out.accumulate(key, c);
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &ScalarCoeff<R>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &TermKey) -> ScalarCoeff<R> {
        self.terms.get(key).cloned().unwrap_or_default()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_lambda(&self) -> bool {
        self.terms.values().any(ScalarCoeff::has_lambda)
    }

    pub(crate) fn accumulate(&mut self, key: TermKey, c: ScalarCoeff<R>) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_default();
        entry.add_assign_ref(&c);
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn scale(&self, c: &ScalarCoeff<R>) -> Self {
        let mut out = Self::zero();
        for (&k, v) in &self.terms {
            out.accumulate(k, v * c);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.mul_with(&Rewriter::default(), rhs)
    }

    /// Product with the single-factor rewriting supplied by `rw`.
    pub fn mul_with(&self, rw: &Rewriter<R>, rhs: &Self) -> Self {
        let mut cache: HashMap<((u32, u32), (u32, u32)), FactorPoly<R>> = HashMap::new();
        let mut product = |a: (u32, u32), b: (u32, u32)| {
            cache
                .entry((a, b))
                .or_insert_with(|| rw.normalize(&[monomial_word(a), monomial_word(b)].concat()))
                .clone()
        };

        let mut out = Self::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                if ka.col != kb.row {
                    continue;
                }
                let c = ca * cb;
                if c.is_zero() {
                    continue;
                }
                let fq = product(ka.q_monomial(), kb.q_monomial());
                let fp = product(ka.p_monomial(), kb.p_monomial());
                for (&q, cq) in fq.terms() {
                    let cqc = cq * &c;
                    for (&p, cp) in fp.terms() {
                        out.accumulate(TermKey::new(q, p, ka.row, kb.col), cp * &cqc);
                    }
                }
            }
        }
        out
    }

    pub fn commutator(&self, rhs: &Self) -> Self {
        self.commutator_with(&Rewriter::default(), rhs)
    }

    pub fn commutator_with(&self, rw: &Rewriter<R>, rhs: &Self) -> Self {
        &self.mul_with(rw, rhs) - &rhs.mul_with(rw, self)
    }

    pub fn adjoint(&self) -> Self {
        self.adjoint_with(&Rewriter::default())
    }

    /// Conjugates coefficients, reverses each factor word before
    /// renormalizing, and transposes the auxiliary matrix.
    pub fn adjoint_with(&self, rw: &Rewriter<R>) -> Self {
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let fq = rw.adjoint(&FactorPoly::monomial(k.q_monomial(), ScalarCoeff::one()));
            let fp = rw.adjoint(&FactorPoly::monomial(k.p_monomial(), ScalarCoeff::one()));
            let cc = c.conj();
            for (&q, cq) in fq.terms() {
                for (&p, cp) in fp.terms() {
                    out.accumulate(TermKey::new(q, p, k.col, k.row), &(cq * cp) * &cc);
                }
            }
        }
        out
    }

    /// Replaces the symbolic `λ` by an exact value in `[0, 1]`.
    pub fn substitute_lambda(&self, value: &R) -> Result<Self> {
        if value.is_negative() || *value > R::one() {
            return Err(Error::LambdaOutOfRange(value.to_string()));
        }
        let mut out = Self::zero();
        for (&k, c) in &self.terms {
            out.accumulate(k, c.substitute_lambda(value));
        }
        Ok(out)
    }

    /// Sound and complete operator equality on canonical forms.
    pub fn canonical_eq(&self, other: &Self) -> bool {
        self == other
    }

    /// Largest Q̂/P̂ degree appearing in either factor.
    pub fn max_factor_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|k| (k.mq + k.nq).max(k.mp + k.np))
            .max()
            .unwrap_or(0)
    }
}

impl<R: Exact> Add<&TensorPoly<R>> for &TensorPoly<R> {
    type Output = TensorPoly<R>;

    fn add(self, rhs: &TensorPoly<R>) -> TensorPoly<R> {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.accumulate(k, c.clone());
        }
        out
    }
}

impl<R: Exact> Neg for &TensorPoly<R> {
    type Output = TensorPoly<R>;

    fn neg(self) -> TensorPoly<R> {
        TensorPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl<R: Exact> Sub<&TensorPoly<R>> for &TensorPoly<R> {
    type Output = TensorPoly<R>;

    fn sub(self, rhs: &TensorPoly<R>) -> TensorPoly<R> {
        self + &(-rhs)
    }
}

impl<R: Exact> fmt::Display for TensorPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(k, c)| {
                format!(
                    "({})·[{} ⊗ {} ⊗ E_{}{}]",
                    c,
                    monomial_label(k.mq, k.nq),
                    monomial_label(k.mp, k.np),
                    k.row.label(),
                    k.col.label()
                )
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}
