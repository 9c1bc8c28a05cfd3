//! Exact coefficients: polynomials in `ħ` and `λ` over the complex rationals.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{exact_to_real, Exact, Real};

/// Exponents `(a, b)` of the monomial `ħ^a λ^b`.
pub type CoeffMonomial = (u32, u32);

/// Sparse polynomial `Σ c_ab ħ^a λ^b` with exact complex-rational `c_ab`.
///
/// Zero coefficients are never stored, so derived equality is equality of
/// polynomials.
#[derive(Clone, PartialEq, Debug)]
pub struct ScalarCoeff<R: Exact> {
    terms: BTreeMap<CoeffMonomial, Complex<R>>,
}

fn complex_is_zero<R: Exact>(c: &Complex<R>) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

impl<R: Exact> ScalarCoeff<R> {
    pub fn zero() -> Self {
        ScalarCoeff {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::real(R::one())
    }

    pub fn monomial(hbar_pow: u32, lambda_pow: u32, c: Complex<R>) -> Self {
        let mut terms = BTreeMap::new();
        if !complex_is_zero(&c) {
            terms.insert((hbar_pow, lambda_pow), c);
        }
        ScalarCoeff { terms }
    }

    pub fn constant(c: Complex<R>) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn real(r: R) -> Self {
        Self::constant(Complex::new(r, R::zero()))
    }

    pub fn i() -> Self {
        Self::constant(Complex::new(R::zero(), R::one()))
    }

    pub fn hbar() -> Self {
        Self::monomial(1, 0, Complex::new(R::one(), R::zero()))
    }

    pub fn lambda() -> Self {
        Self::monomial(0, 1, Complex::new(R::one(), R::zero()))
    }

    /// `i ħ`, the right-hand side of the canonical commutator.
    pub fn i_hbar() -> Self {
        Self::monomial(1, 0, Complex::new(R::zero(), R::one()))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&CoeffMonomial, &Complex<R>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn has_lambda(&self) -> bool {
        self.terms.keys().any(|&(_, b)| b > 0)
    }

    fn accumulate(&mut self, key: CoeffMonomial, c: Complex<R>) {
        if complex_is_zero(&c) {
            return;
        }
        match self.terms.remove(&key) {
            Some(prev) => {
                let sum = prev + c;
                if !complex_is_zero(&sum) {
                    self.terms.insert(key, sum);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn add_assign_ref(&mut self, other: &Self) {
        for (&k, c) in &other.terms {
            self.accumulate(k, c.clone());
        }
    }

    pub fn scale(&self, c: &Complex<R>) -> Self {
        let mut out = Self::zero();
        for (&k, v) in &self.terms {
            out.accumulate(k, v.clone() * c.clone());
        }
        out
    }

    pub fn conj(&self) -> Self {
        ScalarCoeff {
            terms: self.terms.iter().map(|(&k, c)| (k, c.conj())).collect(),
        }
    }

    /// Replaces `λ` by an exact value.
    pub fn substitute_lambda(&self, value: &R) -> Self {
        let mut out = Self::zero();
        for (&(a, b), c) in &self.terms {
            let mut w = R::one();
            for _ in 0..b {
                w = w * value.clone();
            }
            out.accumulate((a, 0), c.clone() * Complex::new(w, R::zero()));
        }
        out
    }

    /// Numeric value at the given `ħ`; `lambda = None` demands a λ-free coefficient.
    pub fn evaluate<T: Real>(&self, hbar: T, lambda: Option<T>) -> Result<Complex<T>> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for (&(a, b), c) in &self.terms {
            let lam = match (b, lambda) {
                (0, _) => T::one(),
                (_, Some(l)) => l.powi(b as i32),
                (_, None) => return Err(Error::SymbolicLambda),
            };
            let w = hbar.powi(a as i32) * lam;
            acc += Complex::new(exact_to_real::<R, T>(&c.re), exact_to_real::<R, T>(&c.im)).scale(w);
        }
        Ok(acc)
    }
}

impl<R: Exact> Default for ScalarCoeff<R> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<R: Exact> Add<&ScalarCoeff<R>> for &ScalarCoeff<R> {
    type Output = ScalarCoeff<R>;

    fn add(self, rhs: &ScalarCoeff<R>) -> ScalarCoeff<R> {
        let mut out = self.clone();
        out.add_assign_ref(rhs);
        out
    }
}

impl<R: Exact> Neg for &ScalarCoeff<R> {
    type Output = ScalarCoeff<R>;

    fn neg(self) -> ScalarCoeff<R> {
        ScalarCoeff {
            terms: self.terms.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }
}

impl<R: Exact> Sub<&ScalarCoeff<R>> for &ScalarCoeff<R> {
    type Output = ScalarCoeff<R>;

    fn sub(self, rhs: &ScalarCoeff<R>) -> ScalarCoeff<R> {
        self + &(-rhs)
    }
}

impl<R: Exact> Mul<&ScalarCoeff<R>> for &ScalarCoeff<R> {
    type Output = ScalarCoeff<R>;

    fn mul(self, rhs: &ScalarCoeff<R>) -> ScalarCoeff<R> {
        let mut out = ScalarCoeff::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &rhs.terms {
                out.accumulate((a1 + a2, b1 + b2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

fn fmt_rational<R: Exact>(r: &R) -> String {
    format!("{}", r)
}

fn fmt_complex<R: Exact>(c: &Complex<R>) -> String {
    match (c.re.is_zero(), c.im.is_zero()) {
        (_, true) => fmt_rational(&c.re),
        (true, false) => {
            if c.im.is_one() {
                "i".to_string()
            } else if (-c.im.clone()).is_one() {
                "-i".to_string()
            } else {
                format!("{}i", fmt_rational(&c.im))
            }
        }
        (false, false) => format!("({}+{}i)", fmt_rational(&c.re), fmt_rational(&c.im)),
    }
}

fn fmt_power(sym: &str, p: u32) -> String {
    match p {
        0 => String::new(),
        1 => sym.to_string(),
        _ => format!("{}^{}", sym, p),
    }
}

impl<R: Exact> fmt::Display for ScalarCoeff<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(&(a, b), c)| {
                let syms: Vec<String> = [fmt_power("ħ", a), fmt_power("λ", b)]
                    .into_iter()
                    .filter(|s| !s.is_empty())
                    .collect();
                let c_str = fmt_complex(c);
                if syms.is_empty() {
                    c_str
                } else if c_str == "1" {
                    syms.join("·")
                } else if c_str == "-1" {
                    format!("-{}", syms.join("·"))
                } else {
                    format!("{}·{}", c_str, syms.join("·"))
                }
            })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type C = ScalarCoeff<BigRational>;

    #[test]
    fn zero_terms_are_pruned() {
        let a = C::hbar();
        let d = &a - &a;
        assert!(d.is_zero());
        assert_eq!(d, C::zero());
    }

    #[test]
    fn i_squared_is_minus_one() {
        let sq = &C::i() * &C::i();
        assert_eq!(sq, -&C::one());
    }

    #[test]
    fn lambda_substitution_removes_lambda() {
        // (1 + 2λ)ħ at λ = 1/2 → 2ħ
        let two = C::real(BigRational::ratio(2, 1));
        let poly = &(&C::one() + &(&two * &C::lambda())) * &C::hbar();
        assert!(poly.has_lambda());
        let sub = poly.substitute_lambda(&BigRational::ratio(1, 2));
        assert!(!sub.has_lambda());
        assert_eq!(sub, &two * &C::hbar());
    }

    #[test]
    fn evaluate_rejects_symbolic_lambda() {
        assert!(matches!(
            C::lambda().evaluate::<f64>(1.0, None),
            Err(Error::SymbolicLambda)
        ));
        let v = (&C::i_hbar() * &C::lambda()).evaluate(2.0_f64, Some(0.25)).unwrap();
        assert_eq!(v, Complex::new(0.0, 0.5));
    }

    #[test]
    fn display_is_readable() {
        assert_eq!(format!("{}", -&C::i_hbar()), "-i·ħ");
        assert_eq!(format!("{}", C::zero()), "0");
    }
}
