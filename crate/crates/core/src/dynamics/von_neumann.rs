use nalgebra::{DMatrix, DVector};
use num_complex::Complex;

use super::trajectory::{Record, Trajectory};
use crate::error::{Error, Result};
use crate::matrep::{HermitianEigen, TensorMatrix};
use crate::states::{HybridDensity, HybridVector};
use crate::scalar::Real;

/// A quantum state to propagate.
#[derive(Clone, Debug, PartialEq)]
pub enum QuantumState<T: Real = f64> {
    Vector(HybridVector<T>),
    Density(HybridDensity<T>),
}

impl<T: Real> From<HybridVector<T>> for QuantumState<T> {
    fn from(v: HybridVector<T>) -> Self {
        QuantumState::Vector(v)
    }
}

impl<T: Real> From<HybridDensity<T>> for QuantumState<T> {
    fn from(d: HybridDensity<T>) -> Self {
        QuantumState::Density(d)
    }
}

/// The position and momentum operators whose means are recorded.
pub struct QuantumObservables<'a, T: Real = f64> {
    pub q: &'a TensorMatrix<T>,
    pub p: &'a TensorMatrix<T>,
}

#[derive(Clone, Debug)]
pub struct VonNeumannRun<T: Real = f64> {
    pub trajectory: Trajectory<T>,
    pub final_state: QuantumState<T>,
    /// `max_t |norm_or_trace(t) − norm_or_trace(0)|`.
    pub max_norm_drift: T,
}

type Triplets<T> = Vec<(usize, usize, Complex<T>)>;

fn sparse_mean_vector<T: Real>(a: &Triplets<T>, v: &DVector<Complex<T>>) -> Complex<T> {
    a.iter().fold(Complex::new(T::zero(), T::zero()), |acc, &(i, j, z)| acc + v[i].conj() * z * v[j])
}

fn phases<T: Real>(energies: &DVector<T>, t: T, hbar: T) -> Vec<Complex<T>> {
    energies
        .iter()
        .map(|&e| {
            let angle = -(e * t) / hbar;
            Complex::new(angle.cos(), angle.sin())
        })
        .collect()
}

/// Real part of a mean after checking the imaginary part is roundoff.
fn real_mean<T: Real>(num: Complex<T>, den: T) -> Result<T> {
    let m = num / den;
    if m.im.abs() > T::tol(1e-10) * (T::one() + m.re.abs()) {
        return Err(Error::ComplexMean(m.im.to_f64_lossy()));
    }
    Ok(m.re)
}

/// Propagates with the exact `exp(−iHt/ħ)` taken from the eigendecomposition
/// of `h`, evaluated afresh at every `t_k = k·dt`. Records the trace-ratio
/// means of `q`, `p` and `H` at `t = 0` and after every step.
pub fn von_neumann_evolve<T: Real>(
    state0: &QuantumState<T>,
    h: &TensorMatrix<T>,
    obs: &QuantumObservables<T>,
    hbar: T,
    dt: T,
    steps: usize,
) -> Result<VonNeumannRun<T>> {
    if !(dt > T::zero()) || steps == 0 || !(hbar > T::zero()) {
        return Err(Error::InvalidParameters(format!(
            "need dt > 0, steps ≥ 1, hbar > 0 (got {}, {}, {})",
            dt, steps, hbar
        )));
    }
    let shape = h.shape();
    let state_shape = match state0 {
        QuantumState::Vector(v) => v.shape(),
        QuantumState::Density(d) => d.shape(),
    };
    if state_shape != shape || obs.q.shape() != shape || obs.p.shape() != shape {
        return Err(Error::DimensionMismatch("state, Hamiltonian and observables must share a shape".into()));
    }
    let eig = HermitianEigen::new(h.data(), T::tol(1e-10))?;
    let (basis, energies) = eig.eigenbasis();
    let basis_adj = basis.adjoint();
    let time = |k: usize| dt * T::from_f64_lossy(k as f64);
    let mut trajectory = Trajectory::new();

    let final_state = match state0 {
        QuantumState::Vector(v0) => {
            let triplets: [Triplets<T>; 3] = [obs.q.triplets(), obs.p.triplets(), h.triplets()];
            let coords = basis_adj.apply(v0.data());
            let mut current = v0.data().clone();
            for k in 0..=steps {
                let t = time(k);
                if k > 0 {
                    let ph = phases(&energies, t, hbar);
                    let rotated = DVector::from_iterator(coords.len(), coords.iter().zip(&ph).map(|(c, p)| c * p));
                    current = basis.apply(&rotated);
                }
                let norm = current.iter().fold(T::zero(), |a, z| a + z.norm_sqr());
                let means: Vec<Complex<T>> = triplets.iter().map(|a| sparse_mean_vector(a, &current)).collect();
                trajectory.push(Record {
                    t,
                    mean_q: real_mean(means[0], norm)?,
                    mean_p: real_mean(means[1], norm)?,
                    mean_energy: real_mean(means[2], norm)?,
                    norm_or_trace: norm,
                })?;
            }
            QuantumState::Vector(v0.with_data(current))
        }
        QuantumState::Density(d0) => {
            // everything in the eigenbasis, where the flow is a phase per entry
            let rho = basis_adj.conjugate(d0.data());
            let tilde: Vec<DMatrix<Complex<T>>> =
                [obs.q.data(), obs.p.data(), h.data()].iter().map(|a| basis_adj.conjugate(a)).collect();
            let n = shape.size();
            let mut rho_t = rho.clone();
            for k in 0..=steps {
                let t = time(k);
                let ph = phases(&energies, t, hbar);
                for j in 0..n {
                    for i in 0..n {
                        rho_t[(i, j)] = rho[(i, j)] * ph[i] * ph[j].conj();
                    }
                }
                let trace = (0..n).fold(T::zero(), |a, i| a + rho_t[(i, i)].re);
                let mut means = [Complex::new(T::zero(), T::zero()); 3];
                for (m, a) in means.iter_mut().zip(&tilde) {
                    for j in 0..n {
                        for i in 0..n {
                            *m += rho_t[(i, j)] * a[(j, i)];
                        }
                    }
                }
                trajectory.push(Record {
                    t,
                    mean_q: real_mean(means[0], trace)?,
                    mean_p: real_mean(means[1], trace)?,
                    mean_energy: real_mean(means[2], trace)?,
                    norm_or_trace: trace,
                })?;
            }
            QuantumState::Density(d0.with_data(basis.conjugate(&rho_t)))
        }
    };
    let max_norm_drift = trajectory.max_drift(|r| r.norm_or_trace);
    Ok(VonNeumannRun {
        trajectory,
        final_state,
        max_norm_drift,
    })
}
