//! Polynomial observable expressions in two noncommuting indeterminates.

use std::collections::BTreeMap;
use std::fmt;
use std::ops;

use rand::Rng;

use super::coeff::ScalarCoeff;
use super::factor::{FactorPoly, Rewriter};
use super::tensor::TensorPoly;
use crate::error::{Error, Result};
use crate::scalar::{exact_to_real, Exact, Real};

/// Expression tree over the indeterminates `X` (coordinate) and `Y`
/// (momentum). Products keep their factor order.
///
/// `Div` and `Func` exist so that non-polynomial input can be represented
/// and rejected by the evaluators.
#[derive(Clone, PartialEq, Debug)]
pub enum ObservableExpr<R: Exact> {
    Const(R),
    X,
    Y,
    Add(Box<Self>, Box<Self>),
    Sub(Box<Self>, Box<Self>),
    Mul(Box<Self>, Box<Self>),
    Neg(Box<Self>),
    Pow(Box<Self>, u32),
    Div(Box<Self>, Box<Self>),
    Func(String, Box<Self>),
}

/// An algebra in which expressions can be evaluated.
pub trait Evaluator<R: Exact> {
    type Value: Clone;

    fn constant(&self, c: &R) -> Self::Value;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Self::Value;
    fn neg(&self, a: &Self::Value) -> Self::Value;
}

impl<R: Exact> ObservableExpr<R> {
    pub fn x() -> Self {
        ObservableExpr::X
    }

    pub fn y() -> Self {
        ObservableExpr::Y
    }

    pub fn constant(c: R) -> Self {
        ObservableExpr::Const(c)
    }

    pub fn ratio(n: i64, d: i64) -> Self {
        ObservableExpr::Const(R::ratio(n, d))
    }

    pub fn pow(self, k: u32) -> Self {
        ObservableExpr::Pow(Box::new(self), k)
    }

    /// `(X² + Y²)/2`.
    pub fn oscillator() -> Self {
        Self::ratio(1, 2) * (Self::x().pow(2) + Self::y().pow(2))
    }

    pub fn evaluate<E: Evaluator<R>>(&self, ev: &E, x: &E::Value, y: &E::Value) -> Result<E::Value> {
        use ObservableExpr::*;
        Ok(match self {
            Const(c) => ev.constant(c),
            X => x.clone(),
            Y => y.clone(),
            Add(a, b) => ev.add(&a.evaluate(ev, x, y)?, &b.evaluate(ev, x, y)?),
            Sub(a, b) => {
                let bv = b.evaluate(ev, x, y)?;
                ev.add(&a.evaluate(ev, x, y)?, &ev.neg(&bv))
            }
            Mul(a, b) => ev.mul(&a.evaluate(ev, x, y)?, &b.evaluate(ev, x, y)?),
            Neg(a) => ev.neg(&a.evaluate(ev, x, y)?),
            Pow(a, k) => {
                let base = a.evaluate(ev, x, y)?;
                let mut acc = ev.constant(&R::one());
                for _ in 0..*k {
                    acc = ev.mul(&acc, &base);
                }
                acc
            }
            Div(..) => return Err(Error::NonPolynomial("division".into())),
            Func(name, _) => return Err(Error::NonPolynomial(format!("function `{}`", name))),
        })
    }

    /// Total degree, ignoring cancellations.
    pub fn degree(&self) -> Result<u32> {
        use ObservableExpr::*;
        Ok(match self {
            Const(_) => 0,
            X | Y => 1,
            Add(a, b) | Sub(a, b) => a.degree()?.max(b.degree()?),
            Mul(a, b) => a.degree()? + b.degree()?,
            Neg(a) => a.degree()?,
            Pow(a, k) => a.degree()? * k,
            Div(..) => return Err(Error::NonPolynomial("division".into())),
            Func(name, _) => return Err(Error::NonPolynomial(format!("function `{}`", name))),
        })
    }

    /// Interprets the expression with commuting indeterminates, as a
    /// phase-space function.
    pub fn to_commutative(&self) -> Result<CommPoly<R>> {
        self.evaluate(&CommEval, &CommPoly::q(), &CommPoly::p())
    }
}

impl<R: Exact> ops::Add for ObservableExpr<R> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        ObservableExpr::Add(Box::new(self), Box::new(rhs))
    }
}

impl<R: Exact> ops::Sub for ObservableExpr<R> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        ObservableExpr::Sub(Box::new(self), Box::new(rhs))
    }
}

impl<R: Exact> ops::Mul for ObservableExpr<R> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        ObservableExpr::Mul(Box::new(self), Box::new(rhs))
    }
}

impl<R: Exact> ops::Neg for ObservableExpr<R> {
    type Output = Self;

    fn neg(self) -> Self {
        ObservableExpr::Neg(Box::new(self))
    }
}

/// Prints in the textual grammar (`Q`, `P`, `+ - * ^`, rational literals).
impl<R: Exact> fmt::Display for ObservableExpr<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use ObservableExpr::*;
        match self {
            Const(c) => write!(f, "({})", c),
            X => write!(f, "Q"),
            Y => write!(f, "P"),
            Add(a, b) => write!(f, "({} + {})", a, b),
            Sub(a, b) => write!(f, "({} - {})", a, b),
            Mul(a, b) => write!(f, "{}*{}", a, b),
            Neg(a) => write!(f, "(-{})", a),
            Pow(a, k) => write!(f, "({})^{}", a, k),
            Div(a, b) => write!(f, "({} / {})", a, b),
            Func(name, a) => write!(f, "{}({})", name, a),
        }
    }
}

/// Evaluation in the three-factor algebra.
pub struct TensorEval<'a, R: Exact> {
    pub rewriter: &'a Rewriter<R>,
}

impl<R: Exact> Evaluator<R> for TensorEval<'_, R> {
    type Value = TensorPoly<R>;

    fn constant(&self, c: &R) -> TensorPoly<R> {
        TensorPoly::scalar(ScalarCoeff::real(c.clone()))
    }

    fn add(&self, a: &TensorPoly<R>, b: &TensorPoly<R>) -> TensorPoly<R> {
        a + b
    }

    fn mul(&self, a: &TensorPoly<R>, b: &TensorPoly<R>) -> TensorPoly<R> {
        a.mul_with(self.rewriter, b)
    }

    fn neg(&self, a: &TensorPoly<R>) -> TensorPoly<R> {
        -a
    }
}

/// Evaluation on a single factor, `f(Q̂, P̂)`.
pub struct FactorEval<'a, R: Exact> {
    pub rewriter: &'a Rewriter<R>,
}

impl<R: Exact> Evaluator<R> for FactorEval<'_, R> {
    type Value = FactorPoly<R>;

    fn constant(&self, c: &R) -> FactorPoly<R> {
        FactorPoly::monomial((0, 0), ScalarCoeff::real(c.clone()))
    }

    fn add(&self, a: &FactorPoly<R>, b: &FactorPoly<R>) -> FactorPoly<R> {
        a + b
    }

    fn mul(&self, a: &FactorPoly<R>, b: &FactorPoly<R>) -> FactorPoly<R> {
        self.rewriter.mul(a, b)
    }

    fn neg(&self, a: &FactorPoly<R>) -> FactorPoly<R> {
        -a
    }
}

/// Substitutes `x`, `y` for the indeterminates and evaluates in the algebra.
pub fn eval_ncpoly<R: Exact>(expr: &ObservableExpr<R>, x: &TensorPoly<R>, y: &TensorPoly<R>) -> Result<TensorPoly<R>> {
    eval_ncpoly_with(&Rewriter::default(), expr, x, y)
}

pub fn eval_ncpoly_with<R: Exact>(
    rw: &Rewriter<R>,
    expr: &ObservableExpr<R>,
    x: &TensorPoly<R>,
    y: &TensorPoly<R>,
) -> Result<TensorPoly<R>> {
    expr.evaluate(&TensorEval { rewriter: rw }, x, y)
}

/// `f(Q̂, P̂)` on one factor.
pub fn eval_factor<R: Exact>(rw: &Rewriter<R>, expr: &ObservableExpr<R>) -> Result<FactorPoly<R>> {
    expr.evaluate(&FactorEval { rewriter: rw }, &FactorPoly::q(), &FactorPoly::p())
}

/// Commutative polynomial `Σ c_mn q^m p^n` with exact coefficients.
#[derive(Clone, PartialEq, Debug)]
pub struct CommPoly<R: Exact> {
    terms: BTreeMap<(u32, u32), R>,
}

impl<R: Exact> CommPoly<R> {
    pub fn zero() -> Self {
        CommPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn q() -> Self {
        Self::monomial((1, 0), R::one())
    }

    pub fn p() -> Self {
        Self::monomial((0, 1), R::one())
    }

    pub fn monomial(key: (u32, u32), c: R) -> Self {
        let mut out = Self::zero();
        out.accumulate(key, c);
        out
    }

    fn accumulate(&mut self, key: (u32, u32), c: R) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key).or_insert_with(R::zero);
        *entry = entry.clone() + c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &R)> {
        self.terms.iter()
    }

    pub fn d_dq(&self) -> Self {
        let mut out = Self::zero();
        for (&(m, n), c) in &self.terms {
            if m > 0 {
                out.accumulate((m - 1, n), c.clone() * R::ratio(m as i64, 1));
            }
        }
        out
    }

    pub fn d_dp(&self) -> Self {
        let mut out = Self::zero();
        for (&(m, n), c) in &self.terms {
            if n > 0 {
                out.accumulate((m, n - 1), c.clone() * R::ratio(n as i64, 1));
            }
        }
        out
    }

    pub fn eval<T: Real>(&self, q: T, p: T) -> T {
        self.terms.iter().fold(T::zero(), |acc, (&(m, n), c)| {
            acc + exact_to_real::<R, T>(c) * q.powi(m as i32) * p.powi(n as i32)
        })
    }
}

struct CommEval;

impl<R: Exact> Evaluator<R> for CommEval {
    type Value = CommPoly<R>;

    fn constant(&self, c: &R) -> CommPoly<R> {
        CommPoly::monomial((0, 0), c.clone())
    }

    fn add(&self, a: &CommPoly<R>, b: &CommPoly<R>) -> CommPoly<R> {
        let mut out = a.clone();
        for (&k, c) in &b.terms {
            out.accumulate(k, c.clone());
        }
        out
    }

    fn mul(&self, a: &CommPoly<R>, b: &CommPoly<R>) -> CommPoly<R> {
        let mut out = CommPoly::zero();
        for (&(m1, n1), c1) in &a.terms {
            for (&(m2, n2), c2) in &b.terms {
                out.accumulate((m1 + m2, n1 + n2), c1.clone() * c2.clone());
            }
        }
        out
    }

    fn neg(&self, a: &CommPoly<R>) -> CommPoly<R> {
        CommPoly {
            terms: a.terms.iter().map(|(&k, c)| (k, -c.clone())).collect(),
        }
    }
}

/// Random polynomial: a sum of up to `max_terms` ordered words in `X`, `Y`
/// of length at most `max_degree`, with small rational coefficients.
/// Runs of a repeated letter are sometimes folded into a power node.
pub fn random_polynomial<R: Exact, G: Rng + ?Sized>(rng: &mut G, max_degree: u32, max_terms: usize) -> ObservableExpr<R> {
    let n_terms = rng.random_range(1..=max_terms.max(1));
    let mut expr: Option<ObservableExpr<R>> = None;
    for _ in 0..n_terms {
        let mut numer: i64 = rng.random_range(-3..=3);
        if numer == 0 {
            numer = 1;
        }
        let denom: i64 = rng.random_range(1..=3);
        let len = rng.random_range(0..=max_degree);
        let mut term = ObservableExpr::ratio(numer, denom);
        let mut i = 0;
        while i < len {
            let letter = if rng.random_bool(0.5) { ObservableExpr::X } else { ObservableExpr::Y };
            let run = rng.random_range(1..=(len - i));
            let factor = if run > 1 && rng.random_bool(0.5) {
                letter.pow(run)
            } else {
                (1..run).fold(letter.clone(), |acc, _| acc * letter.clone())
            };
            term = term * factor;
            i += run;
        }
        expr = Some(match expr {
            None => term,
            Some(e) if rng.random_bool(0.25) => e - term,
            Some(e) => e + term,
        });
    }
    expr.expect("at least one term")
}
