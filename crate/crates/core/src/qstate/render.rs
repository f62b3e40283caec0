//! Text diagrams of circuits, in the usual wire-and-box style.

use super::circuit::{Circuit, Step};
use super::gate::standard_gate;

fn gate_symbols(name: &str, params: &[f64], arity: usize) -> Vec<String> {
    match name {
        "CNOT" | "CX" => vec!["@".into(), "X".into()],
        "CY" => vec!["@".into(), "Y".into()],
        "CZ" => vec!["@".into(), "@".into()],
        "SWAP" => vec!["×".into(), "×".into()],
        _ => {
            let label = standard_gate(name, params)
                .map(|g| g.label().to_string())
                .unwrap_or_else(|_| name.to_string());
            vec![label; arity.max(1)]
        }
    }
}

fn step_symbols(step: &Step) -> Vec<(usize, String)> {
    match step {
        Step::Gate {
            gate,
            params,
            targets,
        } => targets
            .iter()
            .copied()
            .zip(gate_symbols(gate, params, targets.len()))
            .collect(),
        Step::Measure { qubits, register } => qubits
            .iter()
            .enumerate()
            .map(|(i, &q)| {
                let s = if i == 0 {
                    format!("M('{register}')")
                } else {
                    "M".to_string()
                };
                (q, s)
            })
            .collect(),
        Step::Declare { .. } => Vec::new(),
        Step::Conditional {
            gate,
            params,
            targets,
            register,
            bit,
            value,
        } => {
            let cond = match bit {
                Some(b) => format!("{register}[{b}]={value}"),
                None => format!("{register}={value}"),
            };
            targets
                .iter()
                .copied()
                .zip(gate_symbols(gate, params, targets.len()))
                .map(|(q, s)| (q, format!("{s}({cond})")))
                .collect()
        }
    }
}

/// Renders the circuit with one wire per qubit. `names` labels the wires and
/// defaults to the qubit indices.
pub fn render(circuit: &Circuit, names: Option<&[&str]>) -> String {
    let n = circuit.n_qubits;
    if n == 0 {
        return String::new();
    }
    let labels: Vec<String> = (0..n)
        .map(|q| match names {
            Some(ns) if q < ns.len() => ns[q].to_string(),
            _ => q.to_string(),
        })
        .collect();

    // Greedy packing into moments: an op occupies every wire between its
    // lowest and highest qubit.
    let mut free = vec![0usize; n];
    let mut moments: Vec<Vec<Vec<(usize, String)>>> = Vec::new();
    for step in &circuit.ops {
        let syms = step_symbols(step);
        if syms.is_empty() {
            continue;
        }
        let lo = syms.iter().map(|s| s.0).min().unwrap();
        let hi = syms.iter().map(|s| s.0).max().unwrap();
        let m = (lo..=hi).map(|q| free[q]).max().unwrap();
        for f in &mut free[lo..=hi] {
            *f = m + 1;
        }
        if moments.len() <= m {
            moments.resize_with(m + 1, Vec::new);
        }
        moments[m].push(syms);
    }

    let prefix_len = labels.iter().map(|l| l.chars().count()).max().unwrap() + 2;
    let mut rows: Vec<String> = Vec::with_capacity(2 * n - 1);
    for (q, l) in labels.iter().enumerate() {
        let mut row = format!("{l}: ");
        row.extend(std::iter::repeat('─').take(prefix_len - l.chars().count() - 2));
        rows.push(row);
        if q + 1 < n {
            rows.push(" ".repeat(prefix_len));
        }
    }

    for moment in &moments {
        let width = moment
            .iter()
            .flatten()
            .map(|(_, s)| s.chars().count())
            .max()
            .unwrap_or(1);
        let mut cells: Vec<Option<String>> = vec![None; 2 * n - 1];
        for op in moment {
            for (q, s) in op {
                cells[2 * q] = Some(s.clone());
            }
            let lo = op.iter().map(|s| s.0).min().unwrap();
            let hi = op.iter().map(|s| s.0).max().unwrap();
            for r in 2 * lo + 1..2 * hi {
                if cells[r].is_none() {
                    cells[r] = Some("│".to_string());
                }
            }
        }
        for (r, row) in rows.iter_mut().enumerate() {
            let wire = r % 2 == 0;
            let fill = if wire { '─' } else { ' ' };
            row.extend(std::iter::repeat(fill).take(3));
            let cell = cells[r].clone().unwrap_or_default();
            let pad = width - cell.chars().count();
            row.push_str(&cell);
            row.extend(std::iter::repeat(fill).take(pad));
        }
    }
    for (r, row) in rows.iter_mut().enumerate() {
        if r % 2 == 0 {
            row.push_str("───");
        }
    }
    rows.iter()
        .map(|r| r.trim_end().to_string())
        .collect::<Vec<_>>()
        .join("\n")
}
