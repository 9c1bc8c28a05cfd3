use nalgebra::DMatrix;

use super::density::PhaseSpaceDensity;
use super::spectral::SpectralGrid;
use super::trajectory::{Record, Trajectory};
use crate::error::{Error, Result};
use crate::ncpoly::ObservableExpr;
use crate::scalar::{Exact, Real};

/// A function on the phase-space grid with its two partial derivatives.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseFunction<T: Real = f64> {
    pub values: DMatrix<T>,
    pub d_q: DMatrix<T>,
    pub d_p: DMatrix<T>,
}

impl<T: Real> PhaseFunction<T> {
    /// Samples a polynomial and its exact derivatives at the grid of `like`.
    /// Polynomials are not periodic, so their derivatives are taken
    /// symbolically rather than spectrally.
    pub fn from_expr<R: Exact>(expr: &ObservableExpr<R>, like: &PhaseSpaceDensity<T>) -> Result<Self> {
        let f = expr.to_commutative()?;
        let (fq, fp) = (f.d_dq(), f.d_dp());
        let (qs, ps) = (like.q_points(), like.p_points());
        let (nq, np) = like.dims();
        Ok(PhaseFunction {
            values: DMatrix::from_fn(nq, np, |k, l| f.eval(qs[k], ps[l])),
            d_q: DMatrix::from_fn(nq, np, |k, l| fq.eval(qs[k], ps[l])),
            d_p: DMatrix::from_fn(nq, np, |k, l| fp.eval(qs[k], ps[l])),
        })
    }

    /// Grid values with periodic spectral derivatives.
    pub fn spectral(values: DMatrix<T>, extent_q: T, extent_p: T) -> Self {
        let grid = SpectralGrid::new(values.nrows(), values.ncols(), extent_q, extent_p);
        let (d_q, d_p) = grid.gradient(&values);
        PhaseFunction { values, d_q, d_p }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.values.shape()
    }
}

/// `{f, g} = ∂f/∂q·∂g/∂p − ∂f/∂p·∂g/∂q` from precomputed derivatives.
pub fn bracket<T: Real>(f: &PhaseFunction<T>, g: &PhaseFunction<T>) -> Result<DMatrix<T>> {
    if f.dims() != g.dims() {
        return Err(Error::DimensionMismatch(format!("grids {:?} and {:?}", f.dims(), g.dims())));
    }
    Ok(f.d_q.component_mul(&g.d_p) - f.d_p.component_mul(&g.d_q))
}

/// `{h, ρ}` with `ρ` differentiated spectrally on its periodic grid.
pub fn poisson_bracket<T: Real>(h: &PhaseFunction<T>, rho: &PhaseSpaceDensity<T>) -> Result<DMatrix<T>> {
    let (lq, lp) = rho.extent();
    let r = PhaseFunction::spectral(rho.values().clone(), lq, lp);
    bracket(h, &r)
}

/// Everything a Liouville run produces.
#[derive(Clone, Debug)]
pub struct LiouvilleRun<T: Real = f64> {
    pub trajectory: Trajectory<T>,
    pub final_density: PhaseSpaceDensity<T>,
    /// Smallest density value seen at any recorded time.
    pub min_density: T,
    /// `max_t |Σρ·ΔqΔp − 1|`.
    pub max_mass_drift: T,
    pub max_boundary_mass: T,
}

/// Mass drift beyond which a run is declared unstable.
pub const INSTABILITY_THRESHOLD: f64 = 1e-4;

struct LiouvilleStepper<'a, T: Real> {
    grid: SpectralGrid<T>,
    h: &'a PhaseFunction<T>,
}

impl<T: Real> LiouvilleStepper<'_, T> {
    fn rhs(&self, rho: &DMatrix<T>) -> DMatrix<T> {
        let (rq, rp) = self.grid.gradient(rho);
        self.h.d_q.component_mul(&rp) - self.h.d_p.component_mul(&rq)
    }

    fn step(&self, rho: &DMatrix<T>, dt: T) -> DMatrix<T> {
        let half = dt * T::from_f64_lossy(0.5);
        let k1 = self.rhs(rho);
        let k2 = self.rhs(&(rho + &k1 * half));
        let k3 = self.rhs(&(rho + &k2 * half));
        let k4 = self.rhs(&(rho + &k3 * dt));
        let sixth = dt / T::from_f64_lossy(6.0);
        rho + (k1 + (k2 + k3) * T::from_f64_lossy(2.0) + k4) * sixth
    }
}

fn record<T: Real>(t: T, rho: &PhaseSpaceDensity<T>, h: &PhaseFunction<T>) -> Record<T> {
    let scale = rho.dq() * rho.dp();
    Record {
        t,
        mean_q: rho.integrate(|q, _| q),
        mean_p: rho.integrate(|_, p| p),
        mean_energy: rho.values().component_mul(&h.values).sum() * scale,
        norm_or_trace: rho.mass(),
    }
}

/// Integrates `∂ρ/∂t = {h, ρ}` with classic RK4, recording at every step
/// (including `t = 0`).
pub fn liouville_evolve<R: Exact, T: Real>(
    rho0: &PhaseSpaceDensity<T>,
    h_expr: &ObservableExpr<R>,
    dt: T,
    steps: usize,
) -> Result<LiouvilleRun<T>> {
    if !(dt > T::zero()) || steps == 0 {
        return Err(Error::InvalidParameters(format!("need dt > 0 and steps ≥ 1 (got {}, {})", dt, steps)));
    }
    rho0.validate()?;
    let h = PhaseFunction::from_expr(h_expr, rho0)?;
    let (nq, np) = rho0.dims();
    let (lq, lp) = rho0.extent();
    let stepper = LiouvilleStepper {
        grid: SpectralGrid::new(nq, np, lq, lp),
        h: &h,
    };

    let mut rho = rho0.clone();
    let mut trajectory = Trajectory::new();
    trajectory.push(record(T::zero(), &rho, &h))?;
    let mut min_density = rho.min();
    let mut max_mass_drift = T::zero();
    let mut max_boundary_mass = rho.boundary_mass(1);
    let threshold = T::from_f64_lossy(INSTABILITY_THRESHOLD);
    for step in 1..=steps {
        let next = stepper.step(rho.values(), dt);
        *rho.values_mut() = next;
        let t = dt * T::from_f64_lossy(step as f64);
        let r = record(t, &rho, &h);
        let drift = (r.norm_or_trace - T::one()).abs();
        if !(drift <= threshold) {
            return Err(Error::Unstable {
                step,
                drift: drift.to_f64_lossy(),
            });
        }
        max_mass_drift = max_mass_drift.max(drift);
        min_density = min_density.min(rho.min());
        max_boundary_mass = max_boundary_mass.max(rho.boundary_mass(1));
        trajectory.push(r)?;
    }
    Ok(LiouvilleRun {
        trajectory,
        final_density: rho,
        min_density,
        max_mass_drift,
        max_boundary_mass,
    })
}
