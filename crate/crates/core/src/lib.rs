//! Quantum phase properties of photon added and subtracted displaced Fock
//! states in a truncated number basis.

pub mod cli;
pub mod error;
pub mod fock;
pub mod interferometry;
pub mod oracle;
pub mod output;
pub mod phase;
pub mod quadrature;
pub mod special;
pub mod states;
pub mod verify;

pub use error::{Error, Result};
pub use fock::{FockVector, RawFockVector};
pub use states::{OperationKind, StateSpec};
