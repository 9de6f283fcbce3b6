//! Exact valence-bond-solid ground states of inhomogeneous AKLT chains.
//!
//! The crate builds the VBS state in the Schwinger-boson occupation basis with
//! rational amplitudes, forms the reduced density matrix of a block of bulk
//! spins by partial trace, extracts its spectrum exactly, and evaluates the
//! closed-form eigenvalues, their large-block limit and the entanglement
//! entropies.

pub mod angular_momentum;
pub mod chain;
pub mod density;
pub mod error;
pub mod fock;
pub mod hamiltonian;
pub mod linalg;
pub mod numerics;
pub mod spectrum;

pub use chain::{BlockSpec, ChainSpec};
pub use density::{BlockOperator, BlockSpectrum};
pub use error::{Error, Result};
pub use fock::{FockVector, RationalVector};
pub use numerics::{HalfInt, SignedSqrtRational};

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
