use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{cmatrix, unitarity_defect, CMatrix, I, ONE, ZERO};

/// Name and parameters of a gate, used for rendering and digests.
#[derive(Clone, Debug, PartialEq)]
pub struct GateLabel {
    pub name: String,
    pub params: Vec<f64>,
}

impl fmt::Display for GateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.name.as_str(), self.params.as_slice()) {
            ("XPow", [t]) => write!(f, "X^{t}"),
            ("YPow", [t]) => write!(f, "Y^{t}"),
            ("ZPow", [t]) => write!(f, "Z^{t}"),
            ("R_phi", [p]) => write!(f, "R({p})"),
            (name, []) => write!(f, "{name}"),
            (name, ps) => {
                let ps: Vec<String> = ps.iter().map(|p| p.to_string()).collect();
                write!(f, "{name}({})", ps.join(","))
            }
        }
    }
}

/// A unitary acting on one or two qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct Gate {
    label: GateLabel,
    matrix: CMatrix,
}

impl Gate {
    /// Wraps an arbitrary 2×2 or 4×4 unitary (checked to 1e-12).
    pub fn custom(name: &str, params: &[f64], matrix: CMatrix) -> Result<Self> {
        let dim = matrix.nrows();
        if matrix.ncols() != dim || (dim != 2 && dim != 4) {
            return Err(Error::DimensionMismatch {
                expected: 4,
                got: dim,
            });
        }
        let defect = unitarity_defect(&matrix);
        if defect > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "gate `{name}` is not unitary (defect {defect:e})"
            )));
        }
        Ok(Self {
            label: GateLabel {
                name: name.to_string(),
                params: params.to_vec(),
            },
            matrix,
        })
    }

    pub fn label(&self) -> &GateLabel {
        &self.label
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn arity(&self) -> usize {
        if self.matrix.nrows() == 2 {
            1
        } else {
            2
        }
    }

    pub fn adjoint(&self) -> Gate {
        Gate {
            label: GateLabel {
                name: format!("{}†", self.label.name),
                params: self.label.params.clone(),
            },
            matrix: self.matrix.adjoint(),
        }
    }
}

/// Names accepted by [`standard_gate`].
pub const GATE_NAMES: &[&str] = &[
    "X", "Y", "Z", "H", "R_phi", "XPow", "YPow", "ZPow", "CNOT", "CX", "CY", "CZ", "SWAP",
];

fn pauli(name: &str) -> CMatrix {
    match name {
        "X" => cmatrix(2, 2, &[(0., 0.), (1., 0.), (1., 0.), (0., 0.)]),
        "Y" => cmatrix(2, 2, &[(0., 0.), (0., -1.), (0., 1.), (0., 0.)]),
        "Z" => cmatrix(2, 2, &[(1., 0.), (0., 0.), (0., 0.), (-1., 0.)]),
        _ => unreachable!(),
    }
}

/// `exp(i P π t / 2) = cos(πt/2)·1 + i sin(πt/2)·P`.
fn pauli_power(p: &CMatrix, t: f64) -> CMatrix {
    let angle = PI * t / 2.0;
    CMatrix::identity(2, 2) * Complex64::new(angle.cos(), 0.0) + p * (I * angle.sin())
}

fn controlled(u: &CMatrix) -> CMatrix {
    let mut m = CMatrix::identity(4, 4);
    for r in 0..2 {
        for c in 0..2 {
            m[(2 + r, 2 + c)] = u[(r, c)];
        }
    }
    m
}

/// Returns a library gate by name. Parameterized gates (`R_phi`, `XPow`,
/// `YPow`, `ZPow`) take exactly one parameter; all others take none.
/// Controlled gates use the first target as control.
pub fn standard_gate(name: &str, params: &[f64]) -> Result<Gate> {
    let expected = match name {
        "R_phi" | "XPow" | "YPow" | "ZPow" => 1,
        n if GATE_NAMES.contains(&n) => 0,
        _ => return Err(Error::UnknownGate(name.to_string())),
    };
    if params.len() != expected {
        return Err(Error::ParameterCount {
            gate: name.to_string(),
            expected,
            got: params.len(),
        });
    }
    let matrix = match name {
        "X" | "Y" | "Z" => pauli(name),
        "H" => cmatrix(
            2,
            2,
            &[
                (FRAC_1_SQRT_2, 0.),
                (FRAC_1_SQRT_2, 0.),
                (FRAC_1_SQRT_2, 0.),
                (-FRAC_1_SQRT_2, 0.),
            ],
        ),
        "R_phi" => {
            let mut m = CMatrix::identity(2, 2);
            m[(1, 1)] = Complex64::from_polar(1.0, params[0]);
            m
        }
        "XPow" => pauli_power(&pauli("X"), params[0]),
        "YPow" => pauli_power(&pauli("Y"), params[0]),
        "ZPow" => pauli_power(&pauli("Z"), params[0]),
        "CNOT" | "CX" => controlled(&pauli("X")),
        "CY" => controlled(&pauli("Y")),
        "CZ" => controlled(&pauli("Z")),
        "SWAP" => {
            let mut m = CMatrix::from_element(4, 4, ZERO);
            m[(0, 0)] = ONE;
            m[(1, 2)] = ONE;
            m[(2, 1)] = ONE;
            m[(3, 3)] = ONE;
            m
        }
        _ => unreachable!(),
    };
    Ok(Gate {
        label: GateLabel {
            name: name.to_string(),
            params: params.to_vec(),
        },
        matrix,
    })
}
