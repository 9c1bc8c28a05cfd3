use nalgebra::DVector;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::matrep::{realize_factor, Backend, HermitianEigen};
use crate::ncpoly::ObservableExpr;
use crate::scalar::{Exact, Real};

/// Number-basis coefficients of the Gaussian
/// `ψ(x) = (2πσ²)^{-1/4} exp(−(x−q0)²/(4σ²) + i p0 x/ħ)`, so that `σ` is the
/// position spread and `ħ/(2σ)` the momentum spread.
///
/// Overlaps with the Hermite functions are done by trapezoid quadrature; the
/// result is renormalized, and fails when the truncation keeps less than
/// `1 − 1e-10` of the norm.
pub fn gaussian_wavepacket_fock(q0: f64, p0: f64, sigma: f64, hbar: f64, dim: usize) -> Result<DVector<Complex<f64>>> {
    if !(sigma > 0.0 && hbar > 0.0) || dim < 2 {
        return Err(Error::InvalidParameters(format!(
            "wavepacket needs sigma > 0, hbar > 0, dim ≥ 2 (got {}, {}, {})",
            sigma, hbar, dim
        )));
    }
    let s = hbar.sqrt();
    // covers the packet and the classically allowed region of the top level
    let half_width = (q0.abs() + 14.0 * sigma).max((2.0 * hbar * dim as f64 + 1.0).sqrt() + 10.0 * s);
    let points = 40_000usize;
    let h = 2.0 * half_width / points as f64;
    let norm_psi = (2.0 * std::f64::consts::PI * sigma * sigma).powf(-0.25);
    let phi0_norm = (std::f64::consts::PI * hbar).powf(-0.25);

    let mut coeffs = vec![Complex::new(0.0, 0.0); dim];
    let mut phi = vec![0.0; dim];
    for k in 0..=points {
        let x = -half_width + k as f64 * h;
        let weight = if k == 0 || k == points { 0.5 * h } else { h };
        let dx = x - q0;
        let psi = Complex::from_polar(norm_psi * (-dx * dx / (4.0 * sigma * sigma)).exp(), p0 * x / hbar);
        let xi = x / s;
        phi[0] = phi0_norm * (-xi * xi / 2.0).exp();
        if dim > 1 {
            phi[1] = 2f64.sqrt() * xi * phi[0];
        }
        for n in 1..dim - 1 {
            phi[n + 1] = (2.0 / (n + 1) as f64).sqrt() * xi * phi[n] - (n as f64 / (n + 1) as f64).sqrt() * phi[n - 1];
        }
        for n in 0..dim {
            coeffs[n] += psi * (phi[n] * weight);
        }
    }
    let captured: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if captured < 1.0 - 1e-10 {
        return Err(Error::InvalidParameters(format!(
            "Fock truncation {} keeps only {} of the wavepacket norm",
            dim, captured
        )));
    }
    let scale = 1.0 / captured.sqrt();
    Ok(DVector::from_iterator(dim, coeffs.into_iter().map(|c| c * scale)))
}

/// The `count` lowest eigenpairs of `f(Q, P)` on one factor.
pub fn factor_eigenstates<R: Exact, T: Real>(
    f: &ObservableExpr<R>,
    b: &Backend<T>,
    count: usize,
) -> Result<Vec<(T, DVector<Complex<T>>)>> {
    let m = realize_factor(f, b)?;
    let eig = HermitianEigen::new(&m, T::tol(1e-10))?;
    Ok(eig.eigenpairs().into_iter().take(count).collect())
}
