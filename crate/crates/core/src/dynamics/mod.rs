//! Endpoint dynamics: Liouville flow of classical densities at `h = 0` and
//! von Neumann flow of quantum states at `h = h_o`. No dynamics is defined
//! in between.

mod compare;
mod density;
mod liouville;
mod spectral;
mod trajectory;
mod von_neumann;

pub use compare::{
    oscillator_compare, write_comparison_csv, Comparison, ComparisonMetadata, ComparisonRow, ComparisonSummary,
    OscillatorParams, BOUNDARY_MASS_WARNING, COMPARISON_HEADER,
};
pub use density::PhaseSpaceDensity;
pub use liouville::{bracket, liouville_evolve, poisson_bracket, LiouvilleRun, PhaseFunction, INSTABILITY_THRESHOLD};
pub use spectral::{SpectralAxis, SpectralGrid};
pub use trajectory::{Record, Trajectory};
pub use von_neumann::{von_neumann_evolve, QuantumObservables, QuantumState, VonNeumannRun};
