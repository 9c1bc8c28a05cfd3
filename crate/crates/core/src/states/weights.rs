use nalgebra::{ComplexField, DVector};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// The sector weights `c_q`, `c_p` and the fixed reference vectors `|a⟩`
/// (on factor p, length `N_p`) and `|b⟩` (on factor q, length `N_q`).
#[derive(Clone, Debug, PartialEq)]
pub struct WeightSpec<T: Real = f64> {
    c_q: Complex<T>,
    c_p: Complex<T>,
    a: DVector<Complex<T>>,
    b: DVector<Complex<T>>,
}

pub(crate) fn norm_sq<T: Real>(v: &DVector<Complex<T>>) -> T {
    v.iter().fold(T::zero(), |acc, z| acc + z.modulus_squared())
}

/// Checks `|c_q|² + |c_p|² = 1` within `1e-10`.
pub fn check_weights<T: Real>(c_q: Complex<T>, c_p: Complex<T>) -> Result<()> {
    let s = c_q.modulus_squared() + c_p.modulus_squared();
    if (s - T::one()).abs() > T::tol(1e-10) {
        return Err(Error::InvalidWeights(format!("|c_q|² + |c_p|² = {}", s)));
    }
    Ok(())
}

impl<T: Real> WeightSpec<T> {
    pub fn new(c_q: Complex<T>, c_p: Complex<T>, a: DVector<Complex<T>>, b: DVector<Complex<T>>) -> Result<Self> {
        check_weights(c_q, c_p)?;
        for (name, v) in [("a", &a), ("b", &b)] {
            let n = norm_sq(v);
            if (n - T::one()).abs() > T::tol(1e-10) {
                return Err(Error::InvalidWeights(format!("⟨{0}|{0}⟩ = {1}", name, n)));
            }
        }
        Ok(WeightSpec { c_q, c_p, a, b })
    }

    /// `c_q = c_p = 1/√2`, `|a⟩`, `|b⟩` the lowest basis vectors.
    pub fn default_for(dim_q: usize, dim_p: usize) -> Self {
        let s = T::one() / T::from_f64_lossy(2.0).sqrt();
        Self::with_basis_vectors(Complex::new(s, T::zero()), Complex::new(s, T::zero()), dim_q, dim_p, 0, 0)
            .expect("default weights are valid")
    }

    /// Weights with `|a⟩ = e_{a_index}` and `|b⟩ = e_{b_index}`.
    pub fn with_basis_vectors(
        c_q: Complex<T>,
        c_p: Complex<T>,
        dim_q: usize,
        dim_p: usize,
        a_index: usize,
        b_index: usize,
    ) -> Result<Self> {
        if a_index >= dim_p || b_index >= dim_q {
            return Err(Error::InvalidWeights(format!(
                "basis index out of range (a: {} of {}, b: {} of {})",
                a_index, dim_p, b_index, dim_q
            )));
        }
        let mut a = DVector::zeros(dim_p);
        a[a_index] = Complex::new(T::one(), T::zero());
        let mut b = DVector::zeros(dim_q);
        b[b_index] = Complex::new(T::one(), T::zero());
        Self::new(c_q, c_p, a, b)
    }

    pub fn c_q(&self) -> Complex<T> {
        self.c_q
    }

    pub fn c_p(&self) -> Complex<T> {
        self.c_p
    }

    pub fn a(&self) -> &DVector<Complex<T>> {
        &self.a
    }

    pub fn b(&self) -> &DVector<Complex<T>> {
        &self.b
    }

    pub fn dim_q(&self) -> usize {
        self.b.len()
    }

    pub fn dim_p(&self) -> usize {
        self.a.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid() {
        let w = WeightSpec::<f64>::default_for(3, 5);
        assert_eq!(w.a().len(), 5);
        assert_eq!(w.b().len(), 3);
        assert!((w.c_q().norm_sqr() + w.c_p().norm_sqr() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_unnormalized() {
        let one = Complex::new(1.0, 0.0);
        let e = DVector::from_element(2, one);
        assert!(WeightSpec::new(one, one, e.clone(), e.clone()).is_err());
        let zero = Complex::new(0.0, 0.0);
        assert!(WeightSpec::new(one, zero, e.clone(), e).is_err());
    }
}
