//! Quantum arithmetic circuits: construction, simulation-based verification,
//! Clifford+T counting and a simplified surface-code cost model.

pub mod adders;
pub mod analysis;
pub mod catalog;
pub mod circuit;
pub mod claims;
pub mod modexp;
pub mod muldiv;
pub mod physical;
pub mod resources;
pub mod sim;
pub mod sweep;
pub mod verify;

use thiserror::Error;

/// Rejected construction parameters.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("register width must be at least 1")]
    ZeroWidth,
    #[error("constant {constant} does not fit in {bits} bits")]
    ConstantOutOfRange { constant: String, bits: usize },
    #[error("{value} is not invertible modulo {modulus}")]
    NotCoprime { value: String, modulus: String },
    #[error("modulus {modulus} is invalid for {bits}-bit registers")]
    InvalidModulus { modulus: String, bits: usize },
    #[error("window size {w} is outside [1, {n}]")]
    InvalidWindow { w: usize, n: usize },
    #[error("piece size must be at least 2, got {0}")]
    InvalidPieceSize(usize),
    #[error("table entry {entry} does not fit in {bits} bits")]
    TableEntryOverflow { entry: String, bits: usize },
    #[error("table has {got} entries, expected a power of two")]
    TableSize { got: usize },
}
