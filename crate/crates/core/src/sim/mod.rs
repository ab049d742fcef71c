//! State-vector simulation with post-selection and support readout.
//!
//! [`StateVector`] is the dense reference engine. [`SparseState`] stores
//! only nonzero amplitudes and gives identical results; [`Backend::Auto`]
//! picks it for wide circuits, where the dense vector would be mostly
//! zeros.

mod dense;
mod sparse;

use std::collections::BTreeMap;
use std::fmt::Write;

use num_complex::Complex64;
use rand::distributions::{Distribution, WeightedIndex};
use rand::Rng;
use thiserror::Error;

use crate::circuit::{Circuit, CircuitError, Gate, Register, RegisterLayout};

pub use dense::StateVector;
pub use sparse::SparseState;

/// Default magnitude below which an amplitude is not part of the support.
pub const SUPPORT_TOLERANCE: f64 = 1e-9;
/// Outcome probabilities below this cannot be post-selected.
pub const SELECT_EPSILON: f64 = 1e-12;
/// Widest register the dense engine will allocate (16 GiB).
pub const DENSE_QUBIT_LIMIT: usize = 30;
/// [`Backend::Auto`] uses the dense engine up to this many qubits.
pub const AUTO_DENSE_MAX_QUBITS: usize = 16;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SimError {
    #[error("qubit {qubit} is out of range for a {qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, qubits: usize },
    #[error("gate `{0}` uses the same qubit twice")]
    DuplicateQubit(String),
    #[error("invalid gate: {0}")]
    InvalidGate(String),
    #[error("circuit has {circuit} qubits but the state has {state}")]
    QubitMismatch { circuit: usize, state: usize },
    #[error("{qubits} qubits exceeds the engine limit of {limit}")]
    TooManyQubits { qubits: usize, limit: usize },
    #[error("basis index {index} does not fit in {qubits} qubits")]
    BasisOutOfRange { index: usize, qubits: usize },
    #[error("amplitude vector length {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("nothing to select: P(qubit {qubit} = {}) = {probability:e}", u8::from(*bit))]
    NothingToSelect {
        qubit: usize,
        bit: bool,
        probability: f64,
    },
}

pub(crate) fn check_gate(gate: &Gate, qubits: usize) -> Result<(), SimError> {
    gate.validate(qubits).map_err(|e| match e {
        CircuitError::QubitOutOfRange { qubit, qubits, .. } => {
            SimError::QubitOutOfRange { qubit, qubits }
        }
        CircuitError::DuplicateQubit(g) => SimError::DuplicateQubit(g),
        other => SimError::InvalidGate(other.to_string()),
    })
}

/// A basis state with non-negligible amplitude.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportEntry {
    pub index: usize,
    pub amplitude: Complex64,
}

impl SupportEntry {
    /// `qubits` characters, qubit 0 rightmost.
    pub fn bitstring(&self, qubits: usize) -> String {
        (0..qubits)
            .rev()
            .map(|q| if (self.index >> q) & 1 == 1 { '1' } else { '0' })
            .collect()
    }

    pub fn probability(&self) -> f64 {
        self.amplitude.norm_sqr()
    }
}

/// Operations shared by the dense and sparse engines.
pub trait QuantumState: Sized {
    /// `|index>` on `qubits` qubits.
    fn basis(qubits: usize, index: usize) -> Result<Self, SimError>;
    fn qubit_count(&self) -> usize;
    fn apply(&mut self, gate: &Gate) -> Result<(), SimError>;
    /// Total weight of basis states with `qubit == bit`.
    fn probability(&self, qubit: usize, bit: bool) -> f64;
    /// Projects onto `qubit == bit` and renormalises. Returns the
    /// pre-selection probability of that outcome.
    fn post_select(self, qubit: usize, bit: bool) -> Result<(f64, Self), SimError>;
    /// Entries with `|amplitude| > tolerance`, ascending by index.
    fn support(&self, tolerance: f64) -> Vec<SupportEntry>;
    fn norm(&self) -> f64;
}

/// The circuit's initial basis state on the dense engine.
pub fn init_state(circuit: &Circuit) -> Result<StateVector, SimError> {
    init_state_as(circuit)
}

pub fn init_state_as<S: QuantumState>(circuit: &Circuit) -> Result<S, SimError> {
    S::basis(circuit.qubit_count(), circuit.initial_index())
}

/// Applies one gate, returning the updated state.
pub fn apply<S: QuantumState>(mut state: S, gate: &Gate) -> Result<S, SimError> {
    state.apply(gate)?;
    Ok(state)
}

/// Runs `circuit` on the dense engine from its initial state.
pub fn run(circuit: &Circuit) -> Result<StateVector, SimError> {
    run_on(circuit, init_state(circuit)?)
}

/// Runs every gate of `circuit` on `state`.
pub fn run_on<S: QuantumState>(circuit: &Circuit, state: S) -> Result<S, SimError> {
    run_with_hook(circuit, state, |_, _| {})
}

/// Like [`run_on`], calling `hook(i, &state)` after gate `i`.
pub fn run_with_hook<S: QuantumState>(
    circuit: &Circuit,
    mut state: S,
    mut hook: impl FnMut(usize, &S),
) -> Result<S, SimError> {
    if state.qubit_count() != circuit.qubit_count() {
        return Err(SimError::QubitMismatch {
            circuit: circuit.qubit_count(),
            state: state.qubit_count(),
        });
    }
    for (i, gate) in circuit.gates().iter().enumerate() {
        state.apply(gate)?;
        hook(i, &state);
    }
    Ok(state)
}

/// Applies `circuit.gates()[range]` only.
pub fn run_range<S: QuantumState>(
    circuit: &Circuit,
    mut state: S,
    range: std::ops::Range<usize>,
) -> Result<S, SimError> {
    for gate in &circuit.gates()[range] {
        state.apply(gate)?;
    }
    Ok(state)
}

pub fn post_select<S: QuantumState>(
    state: S,
    qubit: usize,
    bit: bool,
) -> Result<(f64, S), SimError> {
    state.post_select(qubit, bit)
}

pub fn support<S: QuantumState>(state: &S) -> Vec<SupportEntry> {
    state.support(SUPPORT_TOLERANCE)
}

/// Bits of `register` in ket order for `entry`.
pub fn read_register(
    entry: &SupportEntry,
    layout: &RegisterLayout,
    register: Register,
) -> Vec<bool> {
    layout.read(entry.index, register)
}

/// `--dump-state` lines: `<bitstring> <re> <im>`, 17 significant digits.
pub fn format_support(entries: &[SupportEntry], qubits: usize) -> String {
    let mut out = String::new();
    for e in entries {
        writeln!(
            out,
            "{} {:.16e} {:.16e}",
            e.bitstring(qubits),
            e.amplitude.re,
            e.amplitude.im
        )
        .expect("write to String");
    }
    out
}

/// Born-rule sampling: `shots` draws over `entries`, as counts by index.
pub fn sample<R: Rng + ?Sized>(
    entries: &[SupportEntry],
    shots: usize,
    rng: &mut R,
) -> BTreeMap<usize, usize> {
    let mut counts = BTreeMap::new();
    if entries.is_empty() || shots == 0 {
        return counts;
    }
    let dist = WeightedIndex::new(entries.iter().map(SupportEntry::probability))
        .expect("support weights are positive");
    for _ in 0..shots {
        *counts.entry(entries[dist.sample(rng)].index).or_insert(0) += 1;
    }
    counts
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    Dense,
    Sparse,
    /// Dense up to [`AUTO_DENSE_MAX_QUBITS`], sparse beyond.
    #[default]
    Auto,
}

/// A state on either engine.
#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Dense(StateVector),
    Sparse(SparseState),
}

impl State {
    pub fn backend(&self) -> Backend {
        match self {
            State::Dense(_) => Backend::Dense,
            State::Sparse(_) => Backend::Sparse,
        }
    }

    /// Initial state of `circuit` on the engine `backend` resolves to.
    pub fn init(circuit: &Circuit, backend: Backend) -> Result<State, SimError> {
        let dense = match backend {
            Backend::Dense => true,
            Backend::Sparse => false,
            Backend::Auto => circuit.qubit_count() <= AUTO_DENSE_MAX_QUBITS,
        };
        Ok(if dense {
            State::Dense(init_state_as(circuit)?)
        } else {
            State::Sparse(init_state_as(circuit)?)
        })
    }
}

impl QuantumState for State {
    fn basis(qubits: usize, index: usize) -> Result<Self, SimError> {
        Ok(State::Dense(StateVector::basis(qubits, index)?))
    }

    fn qubit_count(&self) -> usize {
        match self {
            State::Dense(s) => s.qubit_count(),
            State::Sparse(s) => s.qubit_count(),
        }
    }

    fn apply(&mut self, gate: &Gate) -> Result<(), SimError> {
        match self {
            State::Dense(s) => s.apply(gate),
            State::Sparse(s) => s.apply(gate),
        }
    }

    fn probability(&self, qubit: usize, bit: bool) -> f64 {
        match self {
            State::Dense(s) => s.probability(qubit, bit),
            State::Sparse(s) => s.probability(qubit, bit),
        }
    }

    fn post_select(self, qubit: usize, bit: bool) -> Result<(f64, Self), SimError> {
        Ok(match self {
            State::Dense(s) => {
                let (p, s) = s.post_select(qubit, bit)?;
                (p, State::Dense(s))
            }
            State::Sparse(s) => {
                let (p, s) = s.post_select(qubit, bit)?;
                (p, State::Sparse(s))
            }
        })
    }

    fn support(&self, tolerance: f64) -> Vec<SupportEntry> {
        match self {
            State::Dense(s) => s.support(tolerance),
            State::Sparse(s) => s.support(tolerance),
        }
    }

    fn norm(&self) -> f64 {
        match self {
            State::Dense(s) => s.norm(),
            State::Sparse(s) => s.norm(),
        }
    }
}
