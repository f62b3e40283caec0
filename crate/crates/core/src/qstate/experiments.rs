//! The demonstration circuits: NOT gate, Bell pair, SWAP and teleportation.

use serde::Serialize;

use super::circuit::{run_circuit, run_once, Circuit, ExperimentRecord, Step};
use super::gate::standard_gate;
use super::render::render;
use super::state::{BlochVector, StateVector};
use crate::error::{Error, Result};
use crate::rng::seeded_rng;

/// Message-qubit exponents used for the sample teleportation run.
pub const DEFAULT_MESSAGE: (f64, f64) = (0.103, 0.456);
/// The three SWAP-circuit exponents, in the order they are reported.
pub const SWAP_TIMES: [f64; 3] = [0.0, 1.0, 0.5];

pub fn experiment1() -> Circuit {
    Circuit::new(1).gate("X", &[], &[0]).measure(&[0], "Final state")
}

pub fn experiment2() -> Circuit {
    Circuit::new(2)
        .gate("H", &[], &[0])
        .gate("CNOT", &[], &[0, 1])
        .measure(&[0, 1], "Final state")
}

/// H on q0, `X^t` on q1, three alternating CNOTs, then both measured.
pub fn swap_circuit(t: f64) -> Circuit {
    Circuit::new(2)
        .gate("H", &[], &[0])
        .gate("XPow", &[t], &[1])
        .gate("CNOT", &[], &[0, 1])
        .gate("CNOT", &[], &[1, 0])
        .gate("CNOT", &[], &[0, 1])
        .measure(&[1], "q1")
        .measure(&[0], "q0")
}

pub const TELEPORT_WIRES: [&str; 3] = ["msg", "qalice", "qbob"];

fn message_prep(a: f64, b: f64) -> Circuit {
    Circuit::new(3)
        .gate("XPow", &[a], &[0])
        .gate("YPow", &[b], &[0])
}

/// Teleportation of `Y^b X^a |0>` from qubit 0 to qubit 2. Without
/// `deferred` the message and Alice qubits are measured into register
/// `alice` and the corrections on Bob are classically controlled; with it
/// they are controlled gates on the unmeasured qubits.
pub fn teleport_circuit(a: f64, b: f64, deferred: bool) -> Circuit {
    let c = message_prep(a, b)
        .gate("H", &[], &[1])
        .gate("CNOT", &[], &[1, 2])
        .gate("CNOT", &[], &[0, 1])
        .gate("H", &[], &[0]);
    if deferred {
        c.gate("CNOT", &[], &[1, 2]).gate("CZ", &[], &[0, 2])
    } else {
        c.measure(&[0, 1], "alice")
            .if_bit("alice", 1, "X", &[], &[2])
            .if_bit("alice", 0, "Z", &[], &[2])
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TeleportOutcome {
    pub message_initial: BlochVector,
    pub bob: BlochVector,
    pub message_final: BlochVector,
}

pub fn teleport(message_prep: (f64, f64), deferred: bool, seed: u64) -> Result<TeleportOutcome> {
    let (a, b) = message_prep;
    let mut rng = seeded_rng(seed);
    let (initial, _) = run_once(&self::message_prep(a, b), &mut rng)?;
    let (fin, _) = run_once(&teleport_circuit(a, b, deferred), &mut rng)?;
    Ok(TeleportOutcome {
        message_initial: initial.bloch(0)?,
        bob: fin.bloch(2)?,
        message_final: fin.bloch(0)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Inverse,
}

/// Forward maps `|xy>` on `(q0, q1)` to the Bell state `β_xy`; inverse is
/// the adjoint (the unitary half of a Bell measurement).
pub fn bell_basis_rotation(
    state: &StateVector,
    q0: usize,
    q1: usize,
    direction: Direction,
) -> Result<StateVector> {
    let h = standard_gate("H", &[])?;
    let cnot = standard_gate("CNOT", &[])?;
    match direction {
        Direction::Forward => state.apply_gate(&h, &[q0])?.apply_gate(&cnot, &[q0, q1]),
        Direction::Inverse => state.apply_gate(&cnot, &[q0, q1])?.apply_gate(&h, &[q0]),
    }
}

fn fmt_component(v: f64) -> String {
    let r = (v * 1e4).round() / 1e4 + 0.0;
    format!("{r:?}")
}

/// `x:  0.9396  y:  -0.3169  z:  0.1295`, rounded to four decimals.
pub fn bloch_line(b: &BlochVector) -> String {
    format!(
        "x:  {}  y:  {}  z:  {}",
        fmt_component(b.x),
        fmt_component(b.y),
        fmt_component(b.z)
    )
}

fn unitary_part(circuit: &Circuit) -> Circuit {
    Circuit {
        n_qubits: circuit.n_qubits,
        ops: circuit
            .ops
            .iter()
            .filter(|s| matches!(s, Step::Gate { .. }))
            .cloned()
            .collect(),
    }
}

/// Records plus a human-readable transcript of one experiment.
#[derive(Clone, Debug)]
pub struct ExperimentRun {
    pub records: Vec<(String, ExperimentRecord)>,
    pub transcript: String,
}

fn final_bloch(circuit: &Circuit, qubit: usize) -> Result<BlochVector> {
    let (state, _) = run_once(&unitary_part(circuit), &mut seeded_rng(0))?;
    state.bloch(qubit)
}

fn results_block(shots: usize, rec: &ExperimentRecord) -> String {
    format!("Results of {shots} trials:\n\n{}", rec.transcript())
}

/// Runs experiment `number` (1 to 5).
pub fn run_experiment(number: u8, shots: usize, seed: u64, message: (f64, f64)) -> Result<ExperimentRun> {
    match number {
        1 => {
            let c = experiment1();
            let rec = run_circuit(&c, shots, seed)?;
            let transcript = format!(
                "Bloch Sphere of the qubit in the final state:\n\n{}\n\nCircuit:\n\n{}\n\n{}\n",
                bloch_line(&final_bloch(&c, 0)?),
                render(&c, None),
                results_block(shots, &rec)
            );
            Ok(ExperimentRun {
                records: vec![("experiment1".into(), rec)],
                transcript,
            })
        }
        2 => {
            let c = experiment2();
            let rec = run_circuit(&c, shots, seed)?;
            let transcript = format!(
                "Bloch Sphere of qubit 0 in the final state:\n\n{}\n\n\
                 Bloch Sphere of qubit 1 in the final state:\n\n{}\n\nCircuit:\n\n{}\n\n{}\n",
                bloch_line(&final_bloch(&c, 0)?),
                bloch_line(&final_bloch(&c, 1)?),
                render(&c, None),
                results_block(shots, &rec)
            );
            Ok(ExperimentRun {
                records: vec![("experiment2".into(), rec)],
                transcript,
            })
        }
        3 => {
            let mut records = Vec::new();
            let mut transcript = format!("Circuit:\n\n{}\n", render(&swap_circuit(0.0), None)).replace("X^0", "X^t");
            for t in SWAP_TIMES {
                let rec = run_circuit(&swap_circuit(t), shots, seed)?;
                let q0 = rec.qubit_series("q0", 0).unwrap_or_default();
                let q1 = rec.qubit_series("q1", 0).unwrap_or_default();
                transcript.push_str(&format!("\nResults for t = {t}:\n\nq0={q0}\nq1={q1}\n"));
                records.push((format!("t={t}"), rec));
            }
            Ok(ExperimentRun {
                records,
                transcript,
            })
        }
        4 | 5 => {
            let deferred = number == 5;
            let c = teleport_circuit(message.0, message.1, deferred);
            let rec = run_circuit(&c, shots, seed)?;
            let out = teleport(message, deferred, seed)?;
            let transcript = format!(
                "Circuit:\n\n{}\n\n\
                 Bloch Sphere of the Message qubit in the initial state:\n\n{}\n\n\
                 Bloch Sphere of Bob's qubit in the final state:\n\n{}\n\n\
                 Bloch Sphere of the Message qubit in the final state:\n\n{}\n",
                render(&c, Some(&TELEPORT_WIRES)),
                bloch_line(&out.message_initial),
                bloch_line(&out.bob),
                bloch_line(&out.message_final),
            );
            Ok(ExperimentRun {
                records: vec![(format!("experiment{number}"), rec)],
                transcript,
            })
        }
        n => Err(Error::InvalidArgument(format!("no experiment {n}"))),
    }
}
