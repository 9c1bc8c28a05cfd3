//! Normal-ordered polynomials in `Q̂`, `P̂` on a single tensor factor.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_complex::Complex;

use super::coeff::ScalarCoeff;
use crate::scalar::Exact;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Letter {
    Q,
    P,
}

/// Which redex a normalization pass rewrites first.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub enum Strategy {
    #[default]
    Leftmost,
    Rightmost,
}

/// The single rewrite rule `P̂Q̂ → Q̂P̂ + c` of one factor.
///
/// For the canonical commutation relation `c = −iħ`. Other constants exist
/// only so that verification suites can be fed a corrupted rule.
#[derive(Clone, PartialEq, Debug)]
pub struct Rewriter<R: Exact> {
    swap_constant: ScalarCoeff<R>,
    strategy: Strategy,
}

impl<R: Exact> Default for Rewriter<R> {
    fn default() -> Self {
        Rewriter {
            swap_constant: -&ScalarCoeff::i_hbar(),
            strategy: Strategy::Leftmost,
        }
    }
}

impl<R: Exact> Rewriter<R> {
    /// A rewriter using `P̂Q̂ → Q̂P̂ + swap_constant`.
    pub fn with_swap_constant(swap_constant: ScalarCoeff<R>) -> Self {
        Rewriter {
            swap_constant,
            strategy: Strategy::Leftmost,
        }
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    pub fn swap_constant(&self) -> &ScalarCoeff<R> {
        &self.swap_constant
    }

    /// Expands an arbitrary word into normal order by repeated rewriting.
    pub fn normalize(&self, word: &[Letter]) -> FactorPoly<R> {
        let mut pending: BTreeMap<Vec<Letter>, ScalarCoeff<R>> = BTreeMap::new();
        pending.insert(word.to_vec(), ScalarCoeff::one());
        let mut out = FactorPoly::zero();

        while let Some((w, c)) = pending.pop_first() {
            let redex = match self.strategy {
                Strategy::Leftmost => w.windows(2).position(|s| s == [Letter::P, Letter::Q]),
                Strategy::Rightmost => w.windows(2).rposition(|s| s == [Letter::P, Letter::Q]),
            };
            match redex {
                None => {
                    let m = w.iter().filter(|&&l| l == Letter::Q).count() as u32;
                    out.accumulate((m, w.len() as u32 - m), c);
                }
                Some(i) => {
                    let mut swapped = w.clone();
                    swapped.swap(i, i + 1);
                    push(&mut pending, swapped, c.clone());

                    let mut contracted = w;
                    contracted.drain(i..i + 2);
                    push(&mut pending, contracted, &c * &self.swap_constant);
                }
            }
        }
        out
    }

    pub fn mul(&self, a: &FactorPoly<R>, b: &FactorPoly<R>) -> FactorPoly<R> {
        let mut out = FactorPoly::zero();
        for (&ka, ca) in &a.terms {
            for (&kb, cb) in &b.terms {
                let coeff = ca * cb;
                if coeff.is_zero() {
                    continue;
                }
                let word = [monomial_word(ka), monomial_word(kb)].concat();
                for (k, c) in self.normalize(&word).terms {
                    out.accumulate(k, &c * &coeff);
                }
            }
        }
        out
    }

    /// Hermitian adjoint: conjugate coefficients, reverse words, renormalize.
    pub fn adjoint(&self, a: &FactorPoly<R>) -> FactorPoly<R> {
        let mut out = FactorPoly::zero();
        for (&k, c) in &a.terms {
            let mut word = monomial_word(k);
            word.reverse();
            let conj = c.conj();
            for (k2, c2) in self.normalize(&word).terms {
                out.accumulate(k2, &c2 * &conj);
            }
        }
        out
    }
}

fn push<R: Exact>(map: &mut BTreeMap<Vec<Letter>, ScalarCoeff<R>>, w: Vec<Letter>, c: ScalarCoeff<R>) {
    if c.is_zero() {
        return;
    }
    match map.get_mut(&w) {
        Some(entry) => {
            entry.add_assign_ref(&c);
            if entry.is_zero() {
                map.remove(&w);
            }
        }
        None => {
            map.insert(w, c);
        }
    }
}

/// The word `Q̂^m P̂^n`.
pub fn monomial_word((m, n): (u32, u32)) -> Vec<Letter> {
    std::iter::repeat_n(Letter::Q, m as usize)
        .chain(std::iter::repeat_n(Letter::P, n as usize))
        .collect()
}

/// Normal-orders a word using `P̂Q̂ → Q̂P̂ − iħ`.
pub fn factor_normalize<R: Exact>(word: &[Letter]) -> FactorPoly<R> {
    Rewriter::default().normalize(word)
}

/// `Σ c_mn Q̂^m P̂^n`, always stored with `Q̂` left of `P̂`.
#[derive(Clone, PartialEq, Debug)]
pub struct FactorPoly<R: Exact> {
    terms: BTreeMap<(u32, u32), ScalarCoeff<R>>,
}

impl<R: Exact> FactorPoly<R> {
    pub fn zero() -> Self {
        FactorPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial((0, 0), ScalarCoeff::one())
    }

    pub fn q() -> Self {
        Self::monomial((1, 0), ScalarCoeff::one())
    }

    pub fn p() -> Self {
        Self::monomial((0, 1), ScalarCoeff::one())
    }

    pub fn monomial(key: (u32, u32), c: ScalarCoeff<R>) -> Self {
        let mut out = Self::zero();
        out.accumulate(key, c);
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &ScalarCoeff<R>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: u32, n: u32) -> ScalarCoeff<R> {
        self.terms.get(&(m, n)).cloned().unwrap_or_default()
    }

    pub(crate) fn accumulate(&mut self, key: (u32, u32), c: ScalarCoeff<R>) {
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

    pub fn scale_complex(&self, c: &Complex<R>) -> Self {
        self.scale(&ScalarCoeff::constant(c.clone()))
    }
}

impl<R: Exact> Add<&FactorPoly<R>> for &FactorPoly<R> {
    type Output = FactorPoly<R>;

    fn add(self, rhs: &FactorPoly<R>) -> FactorPoly<R> {
        let mut out = self.clone();
        for (&k, c) in &rhs.terms {
            out.accumulate(k, c.clone());
        }
        out
    }
}

impl<R: Exact> Neg for &FactorPoly<R> {
    type Output = FactorPoly<R>;

    fn neg(self) -> FactorPoly<R> {
        FactorPoly {
            terms: self.terms.iter().map(|(&k, c)| (k, -c)).collect(),
        }
    }
}

impl<R: Exact> Sub<&FactorPoly<R>> for &FactorPoly<R> {
    type Output = FactorPoly<R>;

    fn sub(self, rhs: &FactorPoly<R>) -> FactorPoly<R> {
        self + &(-rhs)
    }
}

impl<R: Exact> fmt::Display for FactorPoly<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(m, n), c)| format!("({})·{}", c, monomial_label(m, n)))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

pub(crate) fn monomial_label(m: u32, n: u32) -> String {
    let pow = |s: &str, k: u32| match k {
        0 => String::new(),
        1 => s.to_string(),
        _ => format!("{}^{}", s, k),
    };
    match (m, n) {
        (0, 0) => "1".to_string(),
        _ => format!("{}{}", pow("Q", m), pow("P", n)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use Letter::{P, Q};

    type F = FactorPoly<BigRational>;
    type C = ScalarCoeff<BigRational>;

    #[test]
    fn ordered_word_is_untouched() {
        let f: F = factor_normalize(&[Q, P]);
        assert_eq!(f, F::monomial((1, 1), C::one()));
    }

    #[test]
    fn single_swap() {
        let f: F = factor_normalize(&[P, Q]);
        let expected = &F::monomial((1, 1), C::one()) + &F::monomial((0, 0), -&C::i_hbar());
        assert_eq!(f, expected);
    }

    #[test]
    fn empty_word_is_identity() {
        assert_eq!(factor_normalize::<BigRational>(&[]), F::one());
    }

    #[test]
    fn adjoint_of_qp() {
        let rw = Rewriter::<BigRational>::default();
        let qp = F::monomial((1, 1), C::one());
        let expected = &qp + &F::monomial((0, 0), -&C::i_hbar());
        assert_eq!(rw.adjoint(&qp), expected);
    }

    #[test]
    fn strategies_agree_on_a_long_word() {
        let word = [P, P, Q, P, Q, Q, P, Q];
        let left = Rewriter::<BigRational>::default().normalize(&word);
        let right = Rewriter::default()
            .with_strategy(Strategy::Rightmost)
            .normalize(&word);
        assert_eq!(left, right);
    }
}
