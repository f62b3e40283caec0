//! Quantum-information simulation toolkit.
//!
//! Conventions used throughout: qubit 0 is the most significant bit of a
//! basis index, `ħ = 1`, and entropies are in bits unless a function says
//! otherwise.

pub mod bell;
pub mod density;
pub mod dynamics;
pub mod error;
pub mod info;
pub mod lattice;
pub mod linalg;
pub mod oscillators;
pub mod qstate;
pub mod random;
pub mod rng;

pub use error::{Error, Result};
