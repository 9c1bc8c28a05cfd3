use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use crate::scalar::Real;

/// Periodic spectral derivative along one axis of length `n` and period
/// `length`. The Nyquist mode of an even grid is dropped so the derivative
/// of a real function stays real.
pub struct SpectralAxis<T: Real> {
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
    wavenumbers: Vec<T>,
}

impl<T: Real> SpectralAxis<T> {
    pub fn new(n: usize, length: T) -> Self {
        let mut planner = FftPlanner::new();
        let base = T::from_f64_lossy(2.0 * PI) / length;
        let wavenumbers = (0..n)
            .map(|m| {
                let signed = if m < n.div_ceil(2) { m as f64 } else { m as f64 - n as f64 };
                if n % 2 == 0 && m == n / 2 {
                    T::zero()
                } else {
                    base * T::from_f64_lossy(signed)
                }
            })
            .collect();
        SpectralAxis {
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
            wavenumbers,
        }
    }

    pub fn len(&self) -> usize {
        self.wavenumbers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wavenumbers.is_empty()
    }

    /// Differentiates `data` in place.
    pub fn differentiate(&self, data: &mut [Complex<T>]) {
        self.forward.process(data);
        let scale = T::one() / T::from_f64_lossy(data.len() as f64);
        for (z, &k) in data.iter_mut().zip(&self.wavenumbers) {
            *z = Complex::new(-z.im * k * scale, z.re * k * scale);
        }
        self.inverse.process(data);
    }
}

/// Spectral `∂/∂q` (rows) and `∂/∂p` (columns) on an `N_q × N_p` grid.
pub struct SpectralGrid<T: Real> {
    q_axis: SpectralAxis<T>,
    p_axis: SpectralAxis<T>,
}

impl<T: Real> SpectralGrid<T> {
    pub fn new(n_q: usize, n_p: usize, extent_q: T, extent_p: T) -> Self {
        SpectralGrid {
            q_axis: SpectralAxis::new(n_q, extent_q),
            p_axis: SpectralAxis::new(n_p, extent_p),
        }
    }

    pub fn d_dq(&self, f: &DMatrix<T>) -> DMatrix<T> {
        let (nq, np) = f.shape();
        let mut out = DMatrix::zeros(nq, np);
        let mut buf = vec![Complex::new(T::zero(), T::zero()); nq];
        for l in 0..np {
            for k in 0..nq {
                buf[k] = Complex::new(f[(k, l)], T::zero());
            }
            self.q_axis.differentiate(&mut buf);
            for k in 0..nq {
                out[(k, l)] = buf[k].re;
            }
        }
        out
    }

    pub fn d_dp(&self, f: &DMatrix<T>) -> DMatrix<T> {
        let (nq, np) = f.shape();
        let mut out = DMatrix::zeros(nq, np);
        let mut buf = vec![Complex::new(T::zero(), T::zero()); np];
        for k in 0..nq {
            for l in 0..np {
                buf[l] = Complex::new(f[(k, l)], T::zero());
            }
            self.p_axis.differentiate(&mut buf);
            for l in 0..np {
                out[(k, l)] = buf[l].re;
            }
        }
        out
    }

    /// `(∂f/∂q, ∂f/∂p)`.
    pub fn gradient(&self, f: &DMatrix<T>) -> (DMatrix<T>, DMatrix<T>) {
        (self.d_dq(f), self.d_dp(f))
    }
}
