//! Finite matrix realizations on `ℂ^{N_q} ⊗ ℂ^{N_p} ⊗ ℂ²`.
//!
//! Identities that involve the canonical commutator cannot hold exactly in
//! finite dimensions (the trace of a commutator vanishes). Fock truncations
//! break it only on the top level, so those checks are made on the bulk.

mod backend;
mod eigen;
pub mod export;
mod tensor_matrix;

pub use backend::{build_backend, symmetric_length, Backend, BackendKind};
pub use eigen::{group_values, hermitian_defect, spectrum, BlockOperator, HermitianEigen};
pub use tensor_matrix::{
    commutator_defect, kept_levels, kernel_block, realize, realize_factor, restricted_max_norm, CommutatorDefect,
    FactorMatrixEval, TensorMatrix, TensorShape,
};
