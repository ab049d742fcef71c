//! Line format:
//!
//! ```text
//! # qubits 3
//! # init 000
//! H 2
//! CNOT 2 1
//! TOFF 0 1 2
//! PHASE 0.7853981633974483 0
//! ```
//!
//! The init bit string has qubit 0 rightmost. Angles are printed in Rust's
//! shortest round-trip form, so parsing returns the same `f64`.

use std::fmt::Write;

use super::{Circuit, CircuitError, Gate};

pub(super) fn format_circuit(circuit: &Circuit) -> String {
    let mut out = String::new();
    writeln!(out, "# qubits {}", circuit.qubit_count()).expect("write to String");
    let init: String = circuit
        .initial_pattern()
        .iter()
        .rev()
        .map(|&b| if b { '1' } else { '0' })
        .collect();
    writeln!(out, "# init {init}").expect("write to String");
    for gate in circuit.gates() {
        writeln!(out, "{gate}").expect("write to String");
    }
    out
}

fn err(line: usize, message: impl Into<String>) -> CircuitError {
    CircuitError::Parse {
        line,
        message: message.into(),
    }
}

fn qubit(token: &str, line: usize) -> Result<usize, CircuitError> {
    token
        .parse()
        .map_err(|_| err(line, format!("bad qubit index `{token}`")))
}

pub(super) fn parse_circuit(input: &str) -> Result<Circuit, CircuitError> {
    let mut lines = input.lines().enumerate().map(|(i, l)| (i + 1, l.trim()));

    let (ln, first) = lines.next().ok_or_else(|| err(1, "empty input"))?;
    let qubits: usize = first
        .strip_prefix("# qubits ")
        .ok_or_else(|| err(ln, "expected `# qubits Q`"))?
        .trim()
        .parse()
        .map_err(|_| err(ln, "bad qubit count"))?;

    let (ln, second) = lines
        .next()
        .ok_or_else(|| err(2, "missing `# init` line"))?;
    let bits = second
        .strip_prefix("# init")
        .ok_or_else(|| err(ln, "expected `# init <bits>`"))?
        .trim();
    if bits.len() != qubits {
        return Err(err(
            ln,
            format!("init has {} bits for {qubits} qubits", bits.len()),
        ));
    }
    let initial = bits
        .chars()
        .rev()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            other => Err(err(ln, format!("bad init bit `{other}`"))),
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut gates = Vec::new();
    for (ln, line) in lines {
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let arity = |want: usize| {
            if fields.len() == want + 1 {
                Ok(())
            } else {
                Err(err(ln, format!("`{}` takes {want} operands", fields[0])))
            }
        };
        let gate = match fields[0] {
            "H" => {
                arity(1)?;
                Gate::H(qubit(fields[1], ln)?)
            }
            "X" => {
                arity(1)?;
                Gate::X(qubit(fields[1], ln)?)
            }
            "CNOT" => {
                arity(2)?;
                Gate::cnot(qubit(fields[1], ln)?, qubit(fields[2], ln)?)
            }
            "TOFF" => {
                arity(3)?;
                Gate::toffoli(
                    qubit(fields[1], ln)?,
                    qubit(fields[2], ln)?,
                    qubit(fields[3], ln)?,
                )
            }
            "PHASE" => {
                arity(2)?;
                let theta: f64 = fields[1]
                    .parse()
                    .map_err(|_| err(ln, format!("bad angle `{}`", fields[1])))?;
                Gate::Phase {
                    theta,
                    qubit: qubit(fields[2], ln)?,
                }
            }
            other => return Err(err(ln, format!("unknown gate `{other}`"))),
        };
        gate.validate(qubits).map_err(|e| err(ln, e.to_string()))?;
        gates.push(gate);
    }
    Circuit::new(qubits, gates, initial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{compile, minimal_single_variable_circuit};
    use crate::cnf::paper_example_formula;

    #[test]
    fn minimal_text() {
        let text = minimal_single_variable_circuit().to_text();
        assert_eq!(
            text,
            "# qubits 3\n# init 000\nH 2\nCNOT 2 1\nCNOT 1 0\nCNOT 2 1\n"
        );
    }

    #[test]
    fn example_round_trip() {
        let c = compile(&paper_example_formula()).unwrap();
        let text = c.to_text();
        assert!(text.starts_with("# qubits 11\n# init 00001100001\nH 9\nH 10\n"));
        let back = Circuit::from_text(&text).unwrap();
        assert_eq!(back.gates(), c.gates());
        assert_eq!(back.initial_pattern(), c.initial_pattern());
        assert_eq!(back.qubit_count(), 11);
        assert_eq!(back.to_text(), text);
    }

    #[test]
    fn phase_angle_is_bit_exact() {
        let theta = std::f64::consts::PI / 7.0;
        let c = Circuit::new(
            2,
            vec![Gate::phase(theta, 1), Gate::toffoli(0, 1, 1).inverse()],
            vec![false; 2],
        );
        assert!(c.is_err(), "duplicate qubit must be rejected");
        let c = Circuit::new(2, vec![Gate::phase(theta, 1)], vec![false, true]).unwrap();
        let back = Circuit::from_text(&c.to_text()).unwrap();
        assert_eq!(back.gates()[0], Gate::Phase { theta, qubit: 1 });
        assert_eq!(back.initial_pattern(), &[false, true]);
    }

    #[test]
    fn parse_errors() {
        let cases = [
            ("", "empty input"),
            ("# qubit 3\n", "expected `# qubits Q`"),
            ("# qubits 2\n", "missing"),
            ("# qubits 2\n# init 0\n", "init has 1 bits"),
            ("# qubits 2\n# init 0a\n", "bad init bit"),
            ("# qubits 2\n# init 00\nFOO 1\n", "unknown gate"),
            ("# qubits 2\n# init 00\nCNOT 1\n", "takes 2 operands"),
            ("# qubits 2\n# init 00\nCNOT 1 1\n", "same qubit"),
            ("# qubits 2\n# init 00\nX 2\n", "addresses qubit 2"),
            ("# qubits 2\n# init 00\nPHASE 9 0\n", "outside"),
            ("# qubits 2\n# init 00\nPHASE x 0\n", "bad angle"),
        ];
        for (input, needle) in cases {
            let e = Circuit::from_text(input).unwrap_err().to_string();
            assert!(e.contains(needle), "{input:?}: {e}");
        }
    }
}
