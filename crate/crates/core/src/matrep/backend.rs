use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Real;

/// How a rigged-space factor is truncated to `ℂ^N`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BackendKind {
    /// Oscillator number basis; `Q`, `P` are tridiagonal ladder combinations.
    Fock,
    /// Position grid: `Q` diagonal, `P` conjugated by the DFT.
    GridPosition,
    /// Momentum grid: `P` diagonal, `Q` conjugated by the DFT.
    GridMomentum,
}

impl BackendKind {
    pub fn is_grid(self) -> bool {
        !matches!(self, BackendKind::Fock)
    }
}

/// Finite matrix realization of `Q̂`, `P̂` on one factor.
#[derive(Clone, Debug)]
pub struct Backend<T: Real = f64> {
    kind: BackendKind,
    dim: usize,
    hbar: T,
    length: Option<T>,
    q: DMatrix<Complex<T>>,
    p: DMatrix<Complex<T>>,
    labels: Vec<T>,
}

/// `N` points `start, start + step, …` (the periodic grid convention).
fn grid_points<T: Real>(n: usize, start: T, step: T) -> Vec<T> {
    (0..n).map(|k| start + step * T::from_f64_lossy(k as f64)).collect()
}

/// Conjugate grid `(k − ⌊N/2⌋)·2πħ/L`, centred on zero.
fn conjugate_points<T: Real>(n: usize, hbar: T, length: T) -> Vec<T> {
    let step = T::from_f64_lossy(2.0 * PI) * hbar / length;
    let half = (n / 2) as f64;
    (0..n).map(|k| step * T::from_f64_lossy(k as f64 - half)).collect()
}

/// Unitary DFT between a grid `x` and its conjugate `y`:
/// `F[l, k] = exp(−i y_l x_k / ħ) / √N`.
pub(crate) fn dft_matrix<T: Real>(x: &[T], y: &[T], hbar: T) -> DMatrix<Complex<T>> {
    let n = x.len();
    let norm = T::one() / T::from_f64_lossy(n as f64).sqrt();
    DMatrix::from_fn(n, n, |l, k| {
        let phase = -(y[l] * x[k]) / hbar;
        Complex::new(phase.cos() * norm, phase.sin() * norm)
    })
}

fn diag<T: Real>(values: &[T]) -> DMatrix<Complex<T>> {
    let n = values.len();
    let mut m = DMatrix::zeros(n, n);
    for (i, &v) in values.iter().enumerate() {
        m[(i, i)] = Complex::new(v, T::zero());
    }
    m
}

impl<T: Real> Backend<T> {
    pub fn kind(&self) -> BackendKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hbar(&self) -> T {
        self.hbar
    }

    pub fn length(&self) -> Option<T> {
        self.length
    }

    pub fn q(&self) -> &DMatrix<Complex<T>> {
        &self.q
    }

    pub fn p(&self) -> &DMatrix<Complex<T>> {
        &self.p
    }

    /// Grid points of the diagonal operator, or Fock level indices.
    pub fn labels(&self) -> &[T] {
        &self.labels
    }

    /// Spacing of the diagonal grid (`L/N`); `None` for Fock.
    pub fn spacing(&self) -> Option<T> {
        self.length.map(|l| l / T::from_f64_lossy(self.dim as f64))
    }

    /// Points of the conjugate grid (momenta for a position grid and vice
    /// versa); `None` for Fock.
    pub fn conjugate_grid(&self) -> Option<Vec<T>> {
        self.length.map(|l| conjugate_points(self.dim, self.hbar, l))
    }

    /// The DFT that diagonalizes the non-diagonal grid operator:
    /// `P = F† diag(p) F` on a position grid, `Q = F diag(q) F†` on a
    /// momentum grid.
    pub fn dft(&self) -> Option<DMatrix<Complex<T>>> {
        let conj = self.conjugate_grid()?;
        Some(match self.kind {
            BackendKind::GridPosition => dft_matrix(&self.labels, &conj, self.hbar),
            BackendKind::GridMomentum => dft_matrix(&conj, &self.labels, self.hbar),
            BackendKind::Fock => return None,
        })
    }

    /// Index of the top Fock level, which the truncated CCR does not reach.
    pub fn top_level(&self) -> Option<usize> {
        (self.kind == BackendKind::Fock).then_some(self.dim - 1)
    }
}

/// Builds the matrices for one factor.
///
/// `length` is the extent of the diagonal grid and is ignored for Fock.
pub fn build_backend<T: Real>(kind: BackendKind, dim: usize, hbar: T, length: Option<T>) -> Result<Backend<T>> {
    if dim < 2 {
        return Err(Error::InvalidBackend(format!("dimension {} < 2", dim)));
    }
    if !(hbar > T::zero()) {
        return Err(Error::InvalidBackend(format!("hbar must be positive, got {}", hbar)));
    }
    let zero = T::zero();
    let half = T::from_f64_lossy(0.5);
    match kind {
        BackendKind::Fock => {
            let mut a = DMatrix::<Complex<T>>::zeros(dim, dim);
            for k in 1..dim {
                a[(k - 1, k)] = Complex::new(T::from_f64_lossy(k as f64).sqrt(), zero);
            }
            let ad = a.adjoint();
            let s = (hbar * half).sqrt();
            let q = (&a + &ad).map(|z| z.scale(s));
            let p = (&ad - &a).map(|z| Complex::new(-z.im * s, z.re * s));
            Ok(Backend {
                kind,
                dim,
                hbar,
                length: None,
                q,
                p,
                labels: (0..dim).map(|k| T::from_f64_lossy(k as f64)).collect(),
            })
        }
        BackendKind::GridPosition | BackendKind::GridMomentum => {
            let length = match length {
                Some(l) if l > zero => l,
                other => {
                    return Err(Error::InvalidBackend(format!(
                        "grid backends need a positive length, got {:?}",
                        other.map(|l| l.to_f64_lossy())
                    )))
                }
            };
            let step = length / T::from_f64_lossy(dim as f64);
            let own = grid_points(dim, -length * half, step);
            let conj = conjugate_points(dim, hbar, length);
            let (q, p) = if kind == BackendKind::GridPosition {
                let f = dft_matrix(&own, &conj, hbar);
                (diag(&own), f.adjoint() * diag(&conj) * &f)
            } else {
                let f = dft_matrix(&conj, &own, hbar);
                (&f * diag(&conj) * f.adjoint(), diag(&own))
            };
            Ok(Backend {
                kind,
                dim,
                hbar,
                length: Some(length),
                q,
                p,
                labels: own,
            })
        }
    }
}

/// Grid extent making the grid and its conjugate share one spacing,
/// `L = √(2πħN)`.
pub fn symmetric_length(dim: usize, hbar: f64) -> f64 {
    (2.0 * PI * hbar * dim as f64).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs(m: &DMatrix<Complex<f64>>) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn fock_commutator_n4() {
        // Brute force at N = 4, ħ = 1: [Q, P] = i·diag(1, 1, 1, −3).
        let b = build_backend::<f64>(BackendKind::Fock, 4, 1.0, None).unwrap();
        let c = b.q() * b.p() - b.p() * b.q();
        let mut expected = DMatrix::zeros(4, 4);
        for (k, v) in [1.0, 1.0, 1.0, -3.0].into_iter().enumerate() {
            expected[(k, k)] = Complex::new(0.0, v);
        }
        assert!(max_abs(&(c - expected)) < 1e-12);
    }

    #[test]
    fn fock_commutator_is_traceless() {
        for n in [2, 5, 9, 16] {
            let b = build_backend::<f64>(BackendKind::Fock, n, 0.7, None).unwrap();
            let c = b.q() * b.p() - b.p() * b.q();
            assert!(c.trace().norm() < 1e-12);
        }
    }

    #[test]
    fn position_grid_is_the_definition() {
        let b = build_backend::<f64>(BackendKind::GridPosition, 8, 1.0, Some(8.0)).unwrap();
        let expected: Vec<f64> = (-4..4).map(f64::from).collect();
        for (k, &x) in expected.iter().enumerate() {
            assert_eq!(b.q()[(k, k)], Complex::new(x, 0.0));
        }
        assert_eq!(b.labels(), &expected[..]);
        assert!(max_abs(&(b.q() - DMatrix::from_diagonal(&b.q().diagonal()))) == 0.0);
    }

    #[test]
    fn operators_are_hermitian() {
        for kind in [BackendKind::Fock, BackendKind::GridPosition, BackendKind::GridMomentum] {
            let b = build_backend::<f64>(kind, 12, 1.3, Some(5.0)).unwrap();
            assert!(max_abs(&(b.q() - b.q().adjoint())) < 1e-12, "{kind:?}");
            assert!(max_abs(&(b.p() - b.p().adjoint())) < 1e-12, "{kind:?}");
        }
    }

    #[test]
    fn invalid_parameters() {
        assert!(build_backend::<f64>(BackendKind::Fock, 1, 1.0, None).is_err());
        assert!(build_backend::<f64>(BackendKind::Fock, 4, 0.0, None).is_err());
        assert!(build_backend::<f64>(BackendKind::GridPosition, 4, 1.0, None).is_err());
        assert!(build_backend::<f64>(BackendKind::GridMomentum, 4, 1.0, Some(-1.0)).is_err());
    }

    #[test]
    fn single_precision_backend() {
        let b = build_backend::<f32>(BackendKind::Fock, 6, 1.0, None).unwrap();
        let c = b.q() * b.p() - b.p() * b.q();
        assert!((c[(0, 0)].im - 1.0).abs() < 1e-5);
    }
}
