use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::gate::{standard_gate, Gate};
use super::state::StateVector;
use crate::error::{Error, Result};
use crate::rng::seeded_rng;

/// One step of a circuit.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum Step {
    Gate {
        gate: String,
        #[serde(default)]
        params: Vec<f64>,
        targets: Vec<usize>,
    },
    /// Computational-basis measurement; bits are stored in `qubits` order.
    Measure { qubits: Vec<usize>, register: String },
    /// Declares an all-zero register of the given width.
    Declare { register: String, width: usize },
    /// Applies the gate when the register (or the selected bit of it) equals
    /// `value`. Whole-register values read the first bit as most significant.
    Conditional {
        gate: String,
        #[serde(default)]
        params: Vec<f64>,
        targets: Vec<usize>,
        register: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        bit: Option<usize>,
        value: u64,
    },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub n_qubits: usize,
    pub ops: Vec<Step>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            ops: Vec::new(),
        }
    }

    pub fn gate(mut self, name: &str, params: &[f64], targets: &[usize]) -> Self {
        self.ops.push(Step::Gate {
            gate: name.to_string(),
            params: params.to_vec(),
            targets: targets.to_vec(),
        });
        self
    }

    pub fn measure(mut self, qubits: &[usize], register: &str) -> Self {
        self.ops.push(Step::Measure {
            qubits: qubits.to_vec(),
            register: register.to_string(),
        });
        self
    }

    pub fn declare(mut self, register: &str, width: usize) -> Self {
        self.ops.push(Step::Declare {
            register: register.to_string(),
            width,
        });
        self
    }

    /// Gate conditioned on a single register bit being 1.
    pub fn if_bit(
        mut self,
        register: &str,
        bit: usize,
        name: &str,
        params: &[f64],
        targets: &[usize],
    ) -> Self {
        self.ops.push(Step::Conditional {
            gate: name.to_string(),
            params: params.to_vec(),
            targets: targets.to_vec(),
            register: register.to_string(),
            bit: Some(bit),
            value: 1,
        });
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let c: Circuit = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        c.compile()?;
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("circuit serialization cannot fail")
    }

    /// Hex SHA-256 of the canonical JSON form.
    pub fn digest(&self) -> String {
        hex::encode(Sha256::digest(self.to_json().as_bytes()))
    }

    pub fn validate(&self) -> Result<()> {
        self.compile().map(|_| ())
    }

    fn compile(&self) -> Result<Vec<Compiled>> {
        let mut widths: HashMap<&str, usize> = HashMap::new();
        let mut out = Vec::with_capacity(self.ops.len());
        for step in &self.ops {
            match step {
                Step::Gate {
                    gate,
                    params,
                    targets,
                } => {
                    let g = self.checked_gate(gate, params, targets)?;
                    out.push(Compiled::Gate(g, targets.clone()));
                }
                Step::Measure { qubits, register } => {
                    self.check_targets(qubits)?;
                    widths.insert(register, qubits.len());
                    out.push(Compiled::Measure(qubits.clone(), register.clone()));
                }
                Step::Declare { register, width } => {
                    widths.insert(register, *width);
                    out.push(Compiled::Declare(register.clone(), *width));
                }
                Step::Conditional {
                    gate,
                    params,
                    targets,
                    register,
                    bit,
                    value,
                } => {
                    let width = *widths
                        .get(register.as_str())
                        .ok_or_else(|| Error::UndefinedRegister(register.clone()))?;
                    if let Some(b) = bit {
                        if *b >= width {
                            return Err(Error::RegisterBit {
                                register: register.clone(),
                                width,
                                bit: *b,
                            });
                        }
                    }
                    let g = self.checked_gate(gate, params, targets)?;
                    out.push(Compiled::Conditional {
                        gate: g,
                        targets: targets.clone(),
                        register: register.clone(),
                        bit: *bit,
                        value: *value,
                    });
                }
            }
        }
        Ok(out)
    }

    fn check_targets(&self, targets: &[usize]) -> Result<()> {
        for (i, &t) in targets.iter().enumerate() {
            if t >= self.n_qubits {
                return Err(Error::IndexOutOfRange {
                    index: t,
                    n_qubits: self.n_qubits,
                });
            }
            if targets[..i].contains(&t) {
                return Err(Error::DuplicateTarget(t));
            }
        }
        Ok(())
    }

    fn checked_gate(&self, name: &str, params: &[f64], targets: &[usize]) -> Result<Gate> {
        let g = standard_gate(name, params)?;
        if g.arity() != targets.len() {
            return Err(Error::ArityMismatch {
                arity: g.arity(),
                targets: targets.len(),
            });
        }
        self.check_targets(targets)?;
        Ok(g)
    }
}

enum Compiled {
    Gate(Gate, Vec<usize>),
    Measure(Vec<usize>, String),
    Declare(String, usize),
    Conditional {
        gate: Gate,
        targets: Vec<usize>,
        register: String,
        bit: Option<usize>,
        value: u64,
    },
}

/// Classical register contents of one shot.
pub type Registers = BTreeMap<String, Vec<u8>>;

fn register_value(bits: &[u8]) -> u64 {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
}

fn execute<R: Rng + ?Sized>(
    n_qubits: usize,
    program: &[Compiled],
    rng: &mut R,
) -> Result<(StateVector, Registers)> {
    let mut state = StateVector::zero(n_qubits);
    let mut regs = Registers::new();
    for step in program {
        match step {
            Compiled::Gate(g, targets) => state.apply(g, targets)?,
            Compiled::Measure(qubits, register) => {
                let (bits, post) = state.measure(qubits, rng)?;
                state = post;
                regs.insert(register.clone(), bits);
            }
            Compiled::Declare(register, width) => {
                regs.insert(register.clone(), vec![0; *width]);
            }
            Compiled::Conditional {
                gate,
                targets,
                register,
                bit,
                value,
            } => {
                let bits = regs
                    .get(register)
                    .ok_or_else(|| Error::UndefinedRegister(register.clone()))?;
                let observed = match bit {
                    Some(b) => bits[*b] as u64,
                    None => register_value(bits),
                };
                if observed == *value {
                    state.apply(gate, targets)?;
                }
            }
        }
    }
    Ok((state, regs))
}

/// Runs one shot and returns the final state together with the registers.
pub fn run_once<R: Rng + ?Sized>(circuit: &Circuit, rng: &mut R) -> Result<(StateVector, Registers)> {
    let program = circuit.compile()?;
    execute(circuit.n_qubits, &program, rng)
}

/// Per-shot register bitstrings plus the metadata needed to reproduce them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub shots: usize,
    pub seed: u64,
    pub circuit_digest: String,
    pub registers: BTreeMap<String, Vec<String>>,
}

impl ExperimentRecord {
    /// Bits of one qubit of a register across all shots, e.g. `"1111001000"`.
    pub fn qubit_series(&self, register: &str, bit: usize) -> Option<String> {
        let shots = self.registers.get(register)?;
        shots.iter().map(|s| s.chars().nth(bit)).collect()
    }

    /// `name=bits` with one comma-separated series per register bit, one
    /// register per line.
    pub fn transcript(&self) -> String {
        let mut lines = Vec::new();
        for (name, shots) in &self.registers {
            let width = shots.first().map_or(0, String::len);
            let series: Vec<String> = (0..width)
                .map(|b| self.qubit_series(name, b).unwrap_or_default())
                .collect();
            lines.push(format!("{name}={}", series.join(", ")));
        }
        lines.join("\n")
    }
}

/// Executes `shots` independent runs drawing from a single stream seeded by
/// `seed`. The result depends only on `(circuit, shots, seed)`.
pub fn run_circuit(circuit: &Circuit, shots: usize, seed: u64) -> Result<ExperimentRecord> {
    let program = circuit.compile()?;
    let mut rng = seeded_rng(seed);
    let mut registers: BTreeMap<String, Vec<String>> = BTreeMap::new();
    for _ in 0..shots {
        let (_, regs) = execute(circuit.n_qubits, &program, &mut rng)?;
        for (name, bits) in regs {
            let s: String = bits.iter().map(|&b| if b == 1 { '1' } else { '0' }).collect();
            registers.entry(name).or_default().push(s);
        }
    }
    Ok(ExperimentRecord {
        shots,
        seed,
        circuit_digest: circuit.digest(),
        registers,
    })
}
