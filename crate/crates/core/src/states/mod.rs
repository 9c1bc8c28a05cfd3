//! Quantum and classical states on `ℂ^{N_q} ⊗ ℂ^{N_p} ⊗ ℂ²` and the
//! trace-ratio mean value.
//!
//! Classical point states are stored with unit norm. The continuum
//! normalization to `δ²(0)` is recorded as `trace_norm_convention`
//! (`1/(ΔqΔp)` on grids); since means are trace ratios it never enters a
//! mean value.

mod hybrid;
mod wavepacket;
mod weights;

pub use hybrid::{
    cm_mixed_density, cm_point_state, lift_qm_eigenstate, lift_qm_eigenstate_split, mean_value, validate_state,
    Expectation, HybridDensity, HybridVector, Provenance, StateReport,
};
pub use wavepacket::{factor_eigenstates, gaussian_wavepacket_fock};
pub use weights::{check_weights, WeightSpec};
