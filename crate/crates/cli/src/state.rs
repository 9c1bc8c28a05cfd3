//! Builds the configured state on the configured backends.

use semiclassical_core::dynamics::{PhaseSpaceDensity, QuantumState};
use semiclassical_core::matrep::BackendKind;
use semiclassical_core::states::{
    cm_mixed_density, cm_point_state, factor_eigenstates, gaussian_wavepacket_fock, lift_qm_eigenstate_split, mean_value,
};
use semiclassical_core::{Backend64, TensorMatrix64};

use crate::config::{RunConfig, StateConfig};
use crate::error::{CliError, CliResult};
use crate::parse::parse_expr;

/// A prepared state: a vector for lifted and point states, a density for
/// phase-space mixtures.
#[derive(Clone, Debug)]
pub struct Prepared {
    pub state: QuantumState,
    /// The phase-space density behind a classical state, if any.
    pub density: Option<PhaseSpaceDensity>,
}

impl Prepared {
    pub fn mean(&self, a: &TensorMatrix64) -> CliResult<f64> {
        Ok(match &self.state {
            QuantumState::Vector(v) => mean_value(v, a)?,
            QuantumState::Density(d) => mean_value(d, a)?,
        })
    }
}

fn grid_extents(bq: &Backend64, bp: &Backend64) -> CliResult<(f64, f64)> {
    match (bq.kind(), bp.kind(), bq.length(), bp.length()) {
        (BackendKind::GridPosition, BackendKind::GridMomentum, Some(lq), Some(lp)) => Ok((lq, lp)),
        _ => Err(CliError::Config(
            "classical states need backend_q = grid_position and backend_p = grid_momentum".into(),
        )),
    }
}

pub fn prepare_state(cfg: &RunConfig, bq: &Backend64, bp: &Backend64) -> CliResult<Prepared> {
    let weights = cfg.weights.build(bq.dim(), bp.dim())?;
    let (c_q, c_p) = (cfg.weights.c_q(), cfg.weights.c_p());
    let vector = |v| Prepared {
        state: QuantumState::Vector(v),
        density: None,
    };
    Ok(match &cfg.state {
        StateConfig::LiftedEigenstate { level, hamiltonian } => {
            let h = parse_expr(hamiltonian)?;
            let pick = |b: &Backend64| -> CliResult<_> {
                factor_eigenstates(&h, b, level + 1)?
                    .pop()
                    .filter(|_| *level < b.dim())
                    .map(|(_, v)| v)
                    .ok_or_else(|| CliError::Config(format!("level {} exceeds the factor dimension {}", level, b.dim())))
            };
            vector(lift_qm_eigenstate_split(&pick(bq)?, &pick(bp)?, &weights)?)
        }
        StateConfig::Wavepacket { q0, p0, sigma } => {
            if bq.kind() != BackendKind::Fock || bp.kind() != BackendKind::Fock {
                return Err(CliError::Config("wavepacket states need Fock backends".into()));
            }
            let sigma = sigma.unwrap_or_else(|| (cfg.hbar / 2.0).sqrt());
            let psi_q = gaussian_wavepacket_fock(*q0, *p0, sigma, cfg.hbar, bq.dim())?;
            let psi_p = gaussian_wavepacket_fock(*q0, *p0, sigma, cfg.hbar, bp.dim())?;
            vector(lift_qm_eigenstate_split(&psi_q, &psi_p, &weights)?)
        }
        StateConfig::CmPoint { k, l } => {
            let (lq, lp) = grid_extents(bq, bp)?;
            let v = cm_point_state(bq, bp, *k, *l, c_q, c_p)?;
            Prepared {
                state: QuantumState::Vector(v),
                density: Some(PhaseSpaceDensity::point_mass(bq.dim(), bp.dim(), lq, lp, *k, *l)?),
            }
        }
        StateConfig::CmGaussian {
            q0,
            p0,
            sigma_q,
            sigma_p,
        } => {
            let (lq, lp) = grid_extents(bq, bp)?;
            let rho = PhaseSpaceDensity::gaussian(bq.dim(), bp.dim(), lq, lp, (*q0, *p0), *sigma_q, *sigma_p)?;
            Prepared {
                state: QuantumState::Density(cm_mixed_density(&rho, c_q, c_p)?),
                density: Some(rho),
            }
        }
    })
}
