//! Verification substrate: bit-parallel permutation simulation for
//! Toffoli-class circuits and dense statevector simulation for circuits with
//! Hadamards and phase rotations. Global phase is ignored throughout.

mod basis;
mod permutation;
mod statevector;

pub use basis::BasisState;
pub use permutation::{
    is_bijection, permutation_table, permutation_table_with_limit, simulate_permutation, simulate_permutation_batch,
    PERMUTATION_TABLE_LIMIT,
};
pub use statevector::{
    extract_basis, run, simulate_statevector, simulate_statevector_with_limit, StateVector, BASIS_TOLERANCE,
    STATEVECTOR_LIMIT,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("gate {index} ({gate}) is not a basis permutation")]
    NonPermutationGate { index: usize, gate: &'static str },
    #[error("{qubits} qubits exceeds the simulator limit of {limit}")]
    SizeLimit { qubits: u32, limit: u32 },
    #[error("state has {state} qubits but the circuit has {circuit}")]
    WidthMismatch { circuit: u32, state: u32 },
    #[error("state is not a basis state (largest probability {max_probability})")]
    NotBasisState { max_probability: f64 },
}
