use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Classical density `ρ(q_k, p_l)` on a periodic phase-space grid with
/// `q_k = −L_q/2 + k·Δq` and `p_l = −L_p/2 + l·Δp`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseSpaceDensity<T: Real = f64> {
    values: DMatrix<T>,
    dq: T,
    dp: T,
    extent: (T, T),
}

fn axis<T: Real>(n: usize, length: T) -> Vec<T> {
    let step = length / T::from_f64_lossy(n as f64);
    (0..n)
        .map(|k| -length * T::from_f64_lossy(0.5) + step * T::from_f64_lossy(k as f64))
        .collect()
}

impl<T: Real> PhaseSpaceDensity<T> {
    /// Validating constructor: entries `≥ −1e-12`, `Σρ·ΔqΔp = 1` within `1e-10`.
    pub fn new(values: DMatrix<T>, extent_q: T, extent_p: T) -> Result<Self> {
        let d = Self::raw(values, extent_q, extent_p)?;
        d.validate()?;
        Ok(d)
    }

    fn raw(values: DMatrix<T>, extent_q: T, extent_p: T) -> Result<Self> {
        if values.nrows() < 2 || values.ncols() < 2 {
            return Err(Error::InvalidDensity(format!("grid {}×{} too small", values.nrows(), values.ncols())));
        }
        if !(extent_q > T::zero() && extent_p > T::zero()) {
            return Err(Error::InvalidDensity("extents must be positive".into()));
        }
        let dq = extent_q / T::from_f64_lossy(values.nrows() as f64);
        let dp = extent_p / T::from_f64_lossy(values.ncols() as f64);
        Ok(PhaseSpaceDensity {
            values,
            dq,
            dp,
            extent: (extent_q, extent_p),
        })
    }

    /// Samples `f` on the grid and rescales to unit mass.
    pub fn from_fn(n_q: usize, n_p: usize, extent_q: T, extent_p: T, f: impl Fn(T, T) -> T) -> Result<Self> {
        let (qs, ps) = (axis(n_q, extent_q), axis(n_p, extent_p));
        let values = DMatrix::from_fn(n_q, n_p, |k, l| f(qs[k], ps[l]));
        let mut d = Self::raw(values, extent_q, extent_p)?;
        let mass = d.mass();
        if !(mass > T::zero()) {
            return Err(Error::InvalidDensity("sampled function has no positive mass".into()));
        }
        d.values /= mass;
        d.validate()?;
        Ok(d)
    }

    /// Uncorrelated Gaussian with standard deviations `sigma_q`, `sigma_p`.
    pub fn gaussian(
        n_q: usize,
        n_p: usize,
        extent_q: T,
        extent_p: T,
        center: (T, T),
        sigma_q: T,
        sigma_p: T,
    ) -> Result<Self> {
        let half = T::from_f64_lossy(0.5);
        Self::from_fn(n_q, n_p, extent_q, extent_p, |q, p| {
            let a = (q - center.0) / sigma_q;
            let b = (p - center.1) / sigma_p;
            (-(a * a + b * b) * half).exp()
        })
    }

    /// Discrete delta at `(k, l)`: the single value `1/(ΔqΔp)`.
    pub fn point_mass(n_q: usize, n_p: usize, extent_q: T, extent_p: T, k: usize, l: usize) -> Result<Self> {
        if k >= n_q || l >= n_p {
            return Err(Error::InvalidDensity(format!("point ({}, {}) outside {}×{}", k, l, n_q, n_p)));
        }
        let mut values = DMatrix::zeros(n_q, n_p);
        values[(k, l)] = T::one();
        let mut d = Self::raw(values, extent_q, extent_p)?;
        d.values[(k, l)] = T::one() / (d.dq * d.dp);
        Ok(d)
    }

    pub fn uniform(n_q: usize, n_p: usize, extent_q: T, extent_p: T) -> Result<Self> {
        Self::from_fn(n_q, n_p, extent_q, extent_p, |_, _| T::one())
    }

    pub fn validate(&self) -> Result<()> {
        let min = self.min();
        if min < -T::tol(1e-12) {
            return Err(Error::InvalidDensity(format!("negative entry {}", min)));
        }
        let mass = self.mass();
        if (mass - T::one()).abs() > T::tol(1e-10) {
            return Err(Error::InvalidDensity(format!("mass {} differs from 1", mass)));
        }
        Ok(())
    }

    pub fn values(&self) -> &DMatrix<T> {
        &self.values
    }

    pub(crate) fn values_mut(&mut self) -> &mut DMatrix<T> {
        &mut self.values
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.values.nrows(), self.values.ncols())
    }

    pub fn dq(&self) -> T {
        self.dq
    }

    pub fn dp(&self) -> T {
        self.dp
    }

    pub fn extent(&self) -> (T, T) {
        self.extent
    }

    pub fn q_points(&self) -> Vec<T> {
        axis(self.values.nrows(), self.extent.0)
    }

    pub fn p_points(&self) -> Vec<T> {
        axis(self.values.ncols(), self.extent.1)
    }

    /// `Σ ρ·ΔqΔp`.
    pub fn mass(&self) -> T {
        self.values.sum() * self.dq * self.dp
    }

    pub fn min(&self) -> T {
        self.values.min()
    }

    /// `Σ f(q_k, p_l) ρ_kl ΔqΔp`.
    pub fn integrate(&self, f: impl Fn(T, T) -> T) -> T {
        let (qs, ps) = (self.q_points(), self.p_points());
        let mut acc = T::zero();
        for (l, &p) in ps.iter().enumerate() {
            for (k, &q) in qs.iter().enumerate() {
                acc += f(q, p) * self.values[(k, l)];
            }
        }
        acc * self.dq * self.dp
    }

    /// Mass carried by the outermost `width` rows and columns of the box.
    pub fn boundary_mass(&self, width: usize) -> T {
        let (nq, np) = self.dims();
        let mut acc = T::zero();
        for l in 0..np {
            for k in 0..nq {
                if k < width || k + width >= nq || l < width || l + width >= np {
                    acc += self.values[(k, l)].abs();
                }
            }
        }
        acc * self.dq * self.dp
    }
}
