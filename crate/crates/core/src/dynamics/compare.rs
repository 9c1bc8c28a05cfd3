use std::f64::consts::PI;
use std::io::Write;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use super::density::PhaseSpaceDensity;
use super::liouville::liouville_evolve;
use super::von_neumann::{von_neumann_evolve, QuantumObservables, QuantumState};
use crate::error::{Error, Result};
use crate::matrep::{build_backend, realize, BackendKind};
use crate::ncpoly::{eval_ncpoly, Generators, ObservableExpr};
use crate::states::{gaussian_wavepacket_fock, lift_qm_eigenstate, WeightSpec};

/// Parameters of the harmonic-oscillator comparison. The oscillator is
/// `h = (X² + Y²)/2`, with period `2π`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorParams {
    pub q0: f64,
    pub p0: f64,
    /// Position spread of the initial packet; `√(ħ/2)` when absent.
    #[serde(default)]
    pub sigma: Option<f64>,
    pub hbar: f64,
    /// Classical grid points per axis.
    pub n: usize,
    /// Fock truncation of each quantum factor.
    #[serde(default = "default_fock_dim")]
    pub fock_dim: usize,
    pub dt: f64,
    pub period_count: f64,
    /// Side of the classical phase-space box; chosen from the packet when
    /// absent.
    #[serde(default)]
    pub extent: Option<f64>,
}

fn default_fock_dim() -> usize {
    32
}

impl Default for OscillatorParams {
    fn default() -> Self {
        OscillatorParams {
            q0: 1.0,
            p0: 0.0,
            sigma: None,
            hbar: 1.0,
            n: 64,
            fock_dim: 32,
            dt: 1e-2,
            period_count: 1.0,
            extent: None,
        }
    }
}

impl OscillatorParams {
    pub fn sigma_q(&self) -> f64 {
        self.sigma.unwrap_or_else(|| (self.hbar / 2.0).sqrt())
    }

    /// Momentum spread of the matched state, `ħ/(2σ)`.
    pub fn sigma_p(&self) -> f64 {
        self.hbar / (2.0 * self.sigma_q())
    }

    pub fn box_extent(&self) -> f64 {
        self.extent.unwrap_or_else(|| {
            let radius = self.q0.hypot(self.p0);
            2.0 * (radius + 10.0 * self.sigma_q().max(self.sigma_p()))
        })
    }

    /// Step count and the step actually used, so that `steps·dt` is exactly
    /// `period_count` periods.
    pub fn schedule(&self) -> (usize, f64) {
        let total = self.period_count * 2.0 * PI;
        let steps = (total / self.dt).round().max(1.0) as usize;
        (steps, total / steps as f64)
    }

    fn validate(&self) -> Result<()> {
        let ok = self.hbar > 0.0
            && self.n >= 4
            && self.fock_dim >= 2
            && self.dt > 0.0
            && self.period_count > 0.0
            && self.sigma_q() > 0.0
            && self.box_extent() > 0.0
            && self.q0.is_finite()
            && self.p0.is_finite();
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameters(format!("invalid oscillator parameters {:?}", self)))
        }
    }
}

/// One comparison row.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub t: f64,
    pub mean_q_cl: f64,
    pub mean_q_qm: f64,
    pub mean_p_cl: f64,
    pub mean_p_qm: f64,
    pub dq_abs: f64,
    pub dp_abs: f64,
    pub energy_cl: f64,
    pub energy_qm: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonSummary {
    pub steps: usize,
    pub dt: f64,
    pub extent: f64,
    pub max_dq: f64,
    pub max_dp: f64,
    pub mass_drift: f64,
    pub trace_drift: f64,
    pub energy_drift_cl: f64,
    pub energy_drift_qm: f64,
    pub min_density: f64,
    pub boundary_mass: f64,
}

#[derive(Clone, Debug)]
pub struct Comparison {
    pub params: OscillatorParams,
    pub rows: Vec<ComparisonRow>,
    pub summary: ComparisonSummary,
    pub warnings: Vec<String>,
}

/// Boundary mass above which a run is flagged.
pub const BOUNDARY_MASS_WARNING: f64 = 1e-8;

/// Runs both endpoint dynamics of the oscillator from matched Gaussian data:
/// the classical density is the Wigner function of the quantum packet.
pub fn oscillator_compare(params: &OscillatorParams) -> Result<Comparison> {
    params.validate()?;
    let (steps, dt) = params.schedule();
    let extent = params.box_extent();
    let h_expr = ObservableExpr::<BigRational>::oscillator();

    let rho0 = PhaseSpaceDensity::gaussian(
        params.n,
        params.n,
        extent,
        extent,
        (params.q0, params.p0),
        params.sigma_q(),
        params.sigma_p(),
    )?;
    let classical = liouville_evolve(&rho0, &h_expr, dt, steps)?;

    let b = build_backend(BackendKind::Fock, params.fock_dim, params.hbar, None)?;
    let gens = Generators::<BigRational>::new();
    let h_qm = realize(&eval_ncpoly(&h_expr, &gens.q_qm, &gens.p_qm)?, &b, &b, None)?;
    let q_qm = realize(&gens.q_qm, &b, &b, None)?;
    let p_qm = realize(&gens.p_qm, &b, &b, None)?;
    let psi = gaussian_wavepacket_fock(params.q0, params.p0, params.sigma_q(), params.hbar, params.fock_dim)?;
    let state = lift_qm_eigenstate(&psi, &WeightSpec::default_for(params.fock_dim, params.fock_dim))?;
    let quantum = von_neumann_evolve(
        &QuantumState::Vector(state),
        &h_qm,
        &QuantumObservables { q: &q_qm, p: &p_qm },
        params.hbar,
        dt,
        steps,
    )?;

    let rows: Vec<ComparisonRow> = classical
        .trajectory
        .records()
        .iter()
        .zip(quantum.trajectory.records())
        .map(|(c, q)| ComparisonRow {
            t: c.t,
            mean_q_cl: c.mean_q,
            mean_q_qm: q.mean_q,
            mean_p_cl: c.mean_p,
            mean_p_qm: q.mean_p,
            dq_abs: (c.mean_q - q.mean_q).abs(),
            dp_abs: (c.mean_p - q.mean_p).abs(),
            energy_cl: c.mean_energy,
            energy_qm: q.mean_energy,
        })
        .collect();

    let summary = ComparisonSummary {
        steps,
        dt,
        extent,
        max_dq: rows.iter().map(|r| r.dq_abs).fold(0.0, f64::max),
        max_dp: rows.iter().map(|r| r.dp_abs).fold(0.0, f64::max),
        mass_drift: classical.max_mass_drift,
        trace_drift: quantum.max_norm_drift,
        energy_drift_cl: classical.trajectory.max_drift(|r| r.mean_energy),
        energy_drift_qm: quantum.trajectory.max_drift(|r| r.mean_energy),
        min_density: classical.min_density,
        boundary_mass: classical.max_boundary_mass,
    };
    let mut warnings = Vec::new();
    if summary.boundary_mass > BOUNDARY_MASS_WARNING {
        warnings.push(format!(
            "classical density reaches the box boundary (mass {:.3e} > {:.0e}); enlarge the extent",
            summary.boundary_mass, BOUNDARY_MASS_WARNING
        ));
    }
    Ok(Comparison {
        params: params.clone(),
        rows,
        summary,
        warnings,
    })
}

pub const COMPARISON_HEADER: [&str; 9] = [
    "t",
    "mean_q_cl",
    "mean_q_qm",
    "mean_p_cl",
    "mean_p_qm",
    "dq_abs",
    "dp_abs",
    "energy_cl",
    "energy_qm",
];

pub fn write_comparison_csv<W: Write>(w: W, rows: &[ComparisonRow]) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().has_headers(false).from_writer(w);
    wtr.write_record(COMPARISON_HEADER)?;
    for r in rows {
        wtr.serialize(r)?;
    }
    wtr.flush()?;
    Ok(())
}

/// Run metadata: all parameters, grid sizes, tolerances and the summary.
#[derive(Serialize)]
pub struct ComparisonMetadata<'a> {
    pub params: &'a OscillatorParams,
    pub sigma_q: f64,
    pub sigma_p: f64,
    pub grid: [usize; 2],
    pub fock_dims: [usize; 2],
    pub instability_threshold: f64,
    pub boundary_mass_warning: f64,
    pub summary: &'a ComparisonSummary,
    pub warnings: &'a [String],
}

impl Comparison {
    pub fn metadata(&self) -> ComparisonMetadata<'_> {
        ComparisonMetadata {
            params: &self.params,
            sigma_q: self.params.sigma_q(),
            sigma_p: self.params.sigma_p(),
            grid: [self.params.n, self.params.n],
            fock_dims: [self.params.fock_dim, self.params.fock_dim],
            instability_threshold: super::liouville::INSTABILITY_THRESHOLD,
            boundary_mass_warning: BOUNDARY_MASS_WARNING,
            summary: &self.summary,
            warnings: &self.warnings,
        }
    }
}
