//! State vectors, the gate library and circuit execution.

pub mod circuit;
pub mod experiments;
pub mod gate;
pub mod render;
pub mod state;

pub use circuit::{run_circuit, run_once, Circuit, ExperimentRecord, Registers, Step};
pub use experiments::{bell_basis_rotation, teleport, teleport_circuit, Direction, TeleportOutcome};
pub use gate::{standard_gate, Gate, GateLabel};
pub use state::{BlochVector, StateVector};
