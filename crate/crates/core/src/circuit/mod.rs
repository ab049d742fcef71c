//! Reversible circuits over `{X, H, CNOT, TOFFOLI, PHASE}` and the CNF
//! compiler that builds them.
//!
//! Bit ordering is global: qubit 0 is the least significant bit of a basis
//! index, and kets are written most significant first. A compiled circuit
//! for `n` variables and `m` clauses uses `Q = 3n + m + 2` qubits:
//!
//! | qubits                  | register | role                          |
//! |-------------------------|----------|-------------------------------|
//! | `0 ..= m`               | `c0..cm` | running AND of clause values   |
//! | `m+1 ..= m+n+1`         | `r0..rn` | literal slots and OR target    |
//! | `m+n+2 ..= m+2n+1`      | `y1..yn` | scratch copies of `u`          |
//! | `m+2n+2 ..= m+3n+1`     | `u1..un` | the variables                  |
//!
//! so `|u..>|y..>|r..>|c..>` reads left to right from most to least
//! significant bit.

mod census;
mod compile;
mod text;

use std::f64::consts::TAU;
use std::fmt;
use std::ops::Range;

use thiserror::Error;

pub use census::{
    check_bounds, check_bounds_with, gate_census, BoundCheck, BoundConstants, BoundReport,
    GateCensus,
};
pub use compile::{
    compile, compile_with_limit, minimal_single_variable_circuit, DEFAULT_QUBIT_LIMIT,
};

/// Hard ceiling on basis-index width.
pub const MAX_QUBITS: usize = 62;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("circuit needs {required} qubits but the limit is {limit}")]
    QubitLimit { required: usize, limit: usize },
    #[error("gate `{gate}` addresses qubit {qubit} but the circuit has {qubits}")]
    QubitOutOfRange {
        gate: String,
        qubit: usize,
        qubits: usize,
    },
    #[error("gate `{0}` uses the same qubit twice")]
    DuplicateQubit(String),
    #[error("phase angle {0} is outside [0, 2pi)")]
    PhaseOutOfRange(f64),
    #[error("initial pattern has {got} bits for {qubits} qubits")]
    InitialPattern { got: usize, qubits: usize },
    #[error("clause {clause} has {width} literals but only {n} variables exist")]
    ClauseTooWide {
        clause: usize,
        width: usize,
        n: usize,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    H,
    Cnot,
    Toffoli,
    Phase,
}

/// A gate on explicit qubit indices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    X(usize),
    H(usize),
    Cnot {
        control: usize,
        target: usize,
    },
    Toffoli {
        controls: [usize; 2],
        target: usize,
    },
    /// `diag(1, e^{i theta})`; `theta` lies in `[0, 2pi)`.
    Phase {
        theta: f64,
        qubit: usize,
    },
}

impl Gate {
    pub fn cnot(control: usize, target: usize) -> Gate {
        Gate::Cnot { control, target }
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Gate {
        Gate::Toffoli {
            controls: [c1, c2],
            target,
        }
    }

    /// Phase gate with `theta` reduced into `[0, 2pi)`.
    pub fn phase(theta: f64, qubit: usize) -> Gate {
        let mut theta = theta.rem_euclid(TAU);
        if theta >= TAU {
            theta = 0.0;
        }
        Gate::Phase { theta, qubit }
    }

    pub fn kind(&self) -> GateKind {
        match self {
            Gate::X(_) => GateKind::X,
            Gate::H(_) => GateKind::H,
            Gate::Cnot { .. } => GateKind::Cnot,
            Gate::Toffoli { .. } => GateKind::Toffoli,
            Gate::Phase { .. } => GateKind::Phase,
        }
    }

    /// The qubit the gate acts on (the target for controlled gates).
    pub fn target(&self) -> usize {
        match *self {
            Gate::X(q) | Gate::H(q) => q,
            Gate::Cnot { target, .. } | Gate::Toffoli { target, .. } => target,
            Gate::Phase { qubit, .. } => qubit,
        }
    }

    pub fn controls(&self) -> &[usize] {
        match self {
            Gate::Cnot { control, .. } => std::slice::from_ref(control),
            Gate::Toffoli { controls, .. } => controls,
            _ => &[],
        }
    }

    /// Controls followed by the target.
    pub fn qubits(&self) -> Vec<usize> {
        let mut qs = self.controls().to_vec();
        qs.push(self.target());
        qs
    }

    /// True for gates that permute basis states (X, CNOT, TOFFOLI).
    pub fn is_permutation(&self) -> bool {
        matches!(self, Gate::X(_) | Gate::Cnot { .. } | Gate::Toffoli { .. })
    }

    /// Checks index range, distinctness and the phase range.
    pub fn validate(&self, qubits: usize) -> Result<(), CircuitError> {
        let qs = self.qubits();
        if let Some(&q) = qs.iter().find(|&&q| q >= qubits) {
            return Err(CircuitError::QubitOutOfRange {
                gate: self.to_string(),
                qubit: q,
                qubits,
            });
        }
        for (i, a) in qs.iter().enumerate() {
            if qs[i + 1..].contains(a) {
                return Err(CircuitError::DuplicateQubit(self.to_string()));
            }
        }
        if let Gate::Phase { theta, .. } = *self {
            if !(0.0..TAU).contains(&theta) {
                return Err(CircuitError::PhaseOutOfRange(theta));
            }
        }
        Ok(())
    }

    /// X, H, CNOT and TOFFOLI are self-inverse; `PHASE(theta)` inverts to
    /// `PHASE(2pi - theta)`.
    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::Phase { theta, qubit } if theta != 0.0 => Gate::Phase {
                theta: TAU - theta,
                qubit,
            },
            other => other,
        }
    }
}

/// Same syntax as the circuit text format.
impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::X(q) => write!(f, "X {q}"),
            Gate::H(q) => write!(f, "H {q}"),
            Gate::Cnot { control, target } => write!(f, "CNOT {control} {target}"),
            Gate::Toffoli { controls, target } => {
                write!(f, "TOFF {} {} {target}", controls[0], controls[1])
            }
            Gate::Phase { theta, qubit } => write!(f, "PHASE {theta} {qubit}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Register {
    U,
    Y,
    R,
    C,
}

impl Register {
    pub fn name(self) -> &'static str {
        match self {
            Register::U => "u",
            Register::Y => "y",
            Register::R => "r",
            Register::C => "c",
        }
    }
}

impl std::str::FromStr for Register {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "u" => Ok(Register::U),
            "y" => Ok(Register::Y),
            "r" => Ok(Register::R),
            "c" => Ok(Register::C),
            other => Err(format!(
                "unknown register `{other}` (expected u, y, r or c)"
            )),
        }
    }
}

/// Qubit indices of the four registers.
///
/// Each map is stored in subscript order: `u[i]` is `u(i+1)`, `y[i]` is
/// `y(i+1)`, `r[i]` is `r(i)` and `c[i]` is `c(i)`. The one exception is
/// [`RegisterLayout::single_variable`], whose lone `c` qubit is `c1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegisterLayout {
    n: usize,
    m: usize,
    u: Vec<usize>,
    y: Vec<usize>,
    r: Vec<usize>,
    c: Vec<usize>,
}

impl RegisterLayout {
    /// The `3n + m + 2` qubit layout for `n` variables and `m` clauses.
    pub fn for_formula(n: usize, m: usize) -> Self {
        let c: Vec<usize> = (0..=m).collect();
        let r: Vec<usize> = (m + 1..=m + n + 1).collect();
        let y: Vec<usize> = (m + n + 2..=m + 2 * n + 1).collect();
        let u: Vec<usize> = (m + 2 * n + 2..=m + 3 * n + 1).collect();
        RegisterLayout { n, m, u, y, r, c }
    }

    /// Three qubits for `F = (u1)`: `c1 = 0`, `y1 = 1`, `u1 = 2`.
    pub fn single_variable() -> Self {
        RegisterLayout {
            n: 1,
            m: 1,
            u: vec![2],
            y: vec![1],
            r: Vec::new(),
            c: vec![0],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn qubit_count(&self) -> usize {
        self.u.len() + self.y.len() + self.r.len() + self.c.len()
    }

    /// Qubit of `u(variable)`, 1-based.
    pub fn u(&self, variable: usize) -> usize {
        self.u[variable - 1]
    }

    /// Qubit of `y(variable)`, 1-based.
    pub fn y(&self, variable: usize) -> usize {
        self.y[variable - 1]
    }

    /// Qubit of `r(slot)`, 0-based.
    pub fn r(&self, slot: usize) -> usize {
        self.r[slot]
    }

    /// Qubit of `c(j)`, 0-based.
    pub fn c(&self, j: usize) -> usize {
        self.c[j]
    }

    /// The qubit holding the final AND (`c_m`; `c1` for the 3-qubit layout).
    pub fn output(&self) -> usize {
        *self.c.last().expect("layouts have at least one c qubit")
    }

    /// Register qubits in subscript order.
    pub fn qubits(&self, register: Register) -> &[usize] {
        match register {
            Register::U => &self.u,
            Register::Y => &self.y,
            Register::R => &self.r,
            Register::C => &self.c,
        }
    }

    /// Bits of `register` in ket order (highest subscript first) for the
    /// basis state `index`.
    pub fn read(&self, index: usize, register: Register) -> Vec<bool> {
        self.qubits(register)
            .iter()
            .rev()
            .map(|&q| (index >> q) & 1 == 1)
            .collect()
    }

    /// `|u..>|y..>|r..>|c..>` rendering of a basis index.
    pub fn ket(&self, index: usize) -> String {
        [Register::U, Register::Y, Register::R, Register::C]
            .iter()
            .filter(|&&reg| !self.qubits(reg).is_empty())
            .map(|&reg| {
                let bits: String = self
                    .read(index, reg)
                    .iter()
                    .map(|&b| if b { '1' } else { '0' })
                    .collect();
                format!("|{bits}>")
            })
            .collect()
    }
}

/// Stage of a compiled clause, in emission order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClausePhase {
    /// `CNOT u -> y` for each literal variable.
    Copy,
    /// `X y` for each negated literal.
    Negate,
    /// `CNOT y -> r_slot`; slots start at 1 so they end up holding `!l`.
    Transfer,
    /// Undo negate and copy; `y` returns to zero.
    Null,
    /// `r0 ^= AND of slots`, with any cascade ancillas already cleaned.
    OrEvaluate,
    /// `X r0`, turning the NOR into the clause value.
    Flip,
    /// `TOFFOLI(r0, c(j-1), c(j))`.
    AndStep,
    /// Mirror of everything before `AndStep`; restores `r` and `y`.
    Uncompute,
}

/// Gate ranges of one compiled clause.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClauseSpan {
    pub clause: usize,
    pub phases: Vec<(ClausePhase, Range<usize>)>,
}

impl ClauseSpan {
    pub fn phase(&self, phase: ClausePhase) -> Range<usize> {
        self.phases
            .iter()
            .find(|(p, _)| *p == phase)
            .map(|(_, r)| r.clone())
            .expect("every phase is recorded, possibly empty")
    }

    pub fn gates(&self) -> Range<usize> {
        let start = self.phases.first().map_or(0, |(_, r)| r.start);
        let end = self.phases.last().map_or(0, |(_, r)| r.end);
        start..end
    }
}

/// An ordered gate list with its qubit count and starting basis state.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    qubits: usize,
    layout: Option<RegisterLayout>,
    gates: Vec<Gate>,
    initial: Vec<bool>,
    spans: Vec<ClauseSpan>,
}

impl Circuit {
    /// A circuit without register metadata, e.g. one read from text.
    pub fn new(qubits: usize, gates: Vec<Gate>, initial: Vec<bool>) -> Result<Self, CircuitError> {
        if qubits > MAX_QUBITS {
            return Err(CircuitError::QubitLimit {
                required: qubits,
                limit: MAX_QUBITS,
            });
        }
        if initial.len() != qubits {
            return Err(CircuitError::InitialPattern {
                got: initial.len(),
                qubits,
            });
        }
        for gate in &gates {
            gate.validate(qubits)?;
        }
        Ok(Circuit {
            qubits,
            layout: None,
            gates,
            initial,
            spans: Vec::new(),
        })
    }

    pub(crate) fn with_layout(
        layout: RegisterLayout,
        gates: Vec<Gate>,
        initial: Vec<bool>,
        spans: Vec<ClauseSpan>,
    ) -> Self {
        let qubits = layout.qubit_count();
        debug_assert!(gates.iter().all(|g| g.validate(qubits).is_ok()));
        Circuit {
            qubits,
            layout: Some(layout),
            gates,
            initial,
            spans,
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubits
    }

    pub fn layout(&self) -> Option<&RegisterLayout> {
        self.layout.as_ref()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Initial value of each qubit, index 0 first.
    pub fn initial_pattern(&self) -> &[bool] {
        &self.initial
    }

    /// The initial pattern as a basis index.
    pub fn initial_index(&self) -> usize {
        self.initial
            .iter()
            .enumerate()
            .fold(0, |acc, (q, &b)| acc | (usize::from(b) << q))
    }

    /// Per-clause gate ranges (compiled circuits only).
    pub fn clause_spans(&self) -> &[ClauseSpan] {
        &self.spans
    }

    /// Length of the leading run of H gates.
    pub fn hadamard_prefix(&self) -> usize {
        self.gates
            .iter()
            .take_while(|g| matches!(g, Gate::H(_)))
            .count()
    }

    /// Gates reversed, each replaced by its inverse. Register metadata is
    /// kept; clause spans are dropped since they describe forward order.
    pub fn invert(&self) -> Circuit {
        Circuit {
            qubits: self.qubits,
            layout: self.layout.clone(),
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            initial: self.initial.clone(),
            spans: Vec::new(),
        }
    }

    /// This circuit followed by `other` on the same qubits.
    pub fn then(&self, other: &Circuit) -> Circuit {
        assert_eq!(self.qubits, other.qubits, "qubit counts differ");
        let mut gates = self.gates.clone();
        gates.extend_from_slice(&other.gates);
        Circuit {
            qubits: self.qubits,
            layout: self.layout.clone(),
            gates,
            initial: self.initial.clone(),
            spans: Vec::new(),
        }
    }

    pub fn to_text(&self) -> String {
        text::format_circuit(self)
    }

    pub fn from_text(input: &str) -> Result<Circuit, CircuitError> {
        text::parse_circuit(input)
    }
}

/// [`Circuit::invert`] as a free function.
pub fn invert(circuit: &Circuit) -> Circuit {
    circuit.invert()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_indices_for_example() {
        let l = RegisterLayout::for_formula(2, 3);
        assert_eq!(l.qubit_count(), 11);
        assert_eq!(l.qubits(Register::C), &[0, 1, 2, 3]);
        assert_eq!(l.qubits(Register::R), &[4, 5, 6]);
        assert_eq!(l.qubits(Register::Y), &[7, 8]);
        assert_eq!(l.qubits(Register::U), &[9, 10]);
        assert_eq!(l.output(), 3);
        // |00>|00>|110>|0001>
        let initial = (1 << 5) | (1 << 6) | 1;
        assert_eq!(l.ket(initial), "|00>|00>|110>|0001>");
        assert_eq!(l.read(initial, Register::R), vec![true, true, false]);
    }

    #[test]
    fn layout_covers_every_qubit_once() {
        for n in 1..6 {
            for m in 1..9 {
                let l = RegisterLayout::for_formula(n, m);
                let mut all: Vec<usize> = [Register::U, Register::Y, Register::R, Register::C]
                    .iter()
                    .flat_map(|&r| l.qubits(r).to_vec())
                    .collect();
                all.sort_unstable();
                assert_eq!(all, (0..3 * n + m + 2).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn gate_validation() {
        assert!(Gate::cnot(0, 1).validate(2).is_ok());
        assert!(matches!(
            Gate::cnot(0, 2).validate(2),
            Err(CircuitError::QubitOutOfRange { qubit: 2, .. })
        ));
        assert!(matches!(
            Gate::toffoli(1, 1, 0).validate(3),
            Err(CircuitError::DuplicateQubit(_))
        ));
        assert!(matches!(
            Gate::Phase {
                theta: 7.0,
                qubit: 0
            }
            .validate(1),
            Err(CircuitError::PhaseOutOfRange(_))
        ));
    }

    #[test]
    fn phase_normalisation_and_inverse() {
        assert_eq!(Gate::phase(-1.0, 0), Gate::phase(TAU - 1.0, 0));
        assert_eq!(
            Gate::phase(TAU, 0),
            Gate::Phase {
                theta: 0.0,
                qubit: 0
            }
        );
        assert_eq!(Gate::phase(0.0, 3).inverse(), Gate::phase(0.0, 3));
        let Gate::Phase { theta, .. } = Gate::phase(0.25, 0).inverse() else {
            unreachable!()
        };
        assert_eq!(theta, TAU - 0.25);
    }

    #[test]
    fn new_rejects_bad_initial_pattern() {
        assert_eq!(
            Circuit::new(2, vec![], vec![false]),
            Err(CircuitError::InitialPattern { got: 1, qubits: 2 })
        );
    }
}
