use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::{check_gate, QuantumState, SimError, SupportEntry, SELECT_EPSILON};
use crate::circuit::{Gate, MAX_QUBITS};

/// Amplitudes below this magnitude are dropped after interference.
const PRUNE: f64 = 1e-15;

/// Nonzero amplitudes only, keyed by basis index.
///
/// Gives the same results as [`super::StateVector`] on any circuit; it is
/// the fast path when few basis states are populated, which is the case
/// for compiled SAT circuits (at most `2^n` branches over `3n + m + 2`
/// qubits).
#[derive(Debug, Clone, PartialEq)]
pub struct SparseState {
    qubits: usize,
    amplitudes: BTreeMap<usize, Complex64>,
}

impl SparseState {
    pub fn from_dense(state: &super::StateVector) -> Self {
        SparseState {
            qubits: state.qubit_count(),
            amplitudes: state
                .amplitudes()
                .iter()
                .enumerate()
                .filter(|(_, a)| a.norm() > 0.0)
                .map(|(i, &a)| (i, a))
                .collect(),
        }
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes
            .get(&index)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Number of stored (nonzero) amplitudes.
    pub fn populated(&self) -> usize {
        self.amplitudes.len()
    }

    fn controls_set(gate: &Gate, index: usize) -> bool {
        gate.controls().iter().all(|&c| (index >> c) & 1 == 1)
    }
}

impl QuantumState for SparseState {
    fn basis(qubits: usize, index: usize) -> Result<Self, SimError> {
        if qubits > MAX_QUBITS {
            return Err(SimError::TooManyQubits {
                qubits,
                limit: MAX_QUBITS,
            });
        }
        if index >> qubits != 0 {
            return Err(SimError::BasisOutOfRange { index, qubits });
        }
        Ok(SparseState {
            qubits,
            amplitudes: BTreeMap::from([(index, Complex64::new(1.0, 0.0))]),
        })
    }

    fn qubit_count(&self) -> usize {
        self.qubits
    }

    fn apply(&mut self, gate: &Gate) -> Result<(), SimError> {
        check_gate(gate, self.qubits)?;
        let target_bit = 1usize << gate.target();
        match *gate {
            Gate::X(_) | Gate::Cnot { .. } | Gate::Toffoli { .. } => {
                let old = std::mem::take(&mut self.amplitudes);
                self.amplitudes = old
                    .into_iter()
                    .map(|(i, a)| {
                        if Self::controls_set(gate, i) {
                            (i ^ target_bit, a)
                        } else {
                            (i, a)
                        }
                    })
                    .collect();
            }
            Gate::H(_) => {
                let old = std::mem::take(&mut self.amplitudes);
                let mut next: BTreeMap<usize, Complex64> = BTreeMap::new();
                for (i, a) in old {
                    let zero = i & !target_bit;
                    let one = i | target_bit;
                    let sign = if i & target_bit == 0 { 1.0 } else { -1.0 };
                    *next.entry(zero).or_default() += a * FRAC_1_SQRT_2;
                    *next.entry(one).or_default() += a * (sign * FRAC_1_SQRT_2);
                }
                next.retain(|_, a| a.norm() > PRUNE);
                self.amplitudes = next;
            }
            Gate::Phase { theta, .. } => {
                let factor = Complex64::from_polar(1.0, theta);
                for (i, a) in self.amplitudes.iter_mut() {
                    if i & target_bit != 0 {
                        *a *= factor;
                    }
                }
            }
        }
        Ok(())
    }

    fn probability(&self, qubit: usize, bit: bool) -> f64 {
        self.amplitudes
            .iter()
            .filter(|(&i, _)| ((i >> qubit) & 1 == 1) == bit)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    fn post_select(mut self, qubit: usize, bit: bool) -> Result<(f64, Self), SimError> {
        if qubit >= self.qubits {
            return Err(SimError::QubitOutOfRange {
                qubit,
                qubits: self.qubits,
            });
        }
        let probability = self.probability(qubit, bit);
        if probability < SELECT_EPSILON {
            return Err(SimError::NothingToSelect {
                qubit,
                bit,
                probability,
            });
        }
        let scale = 1.0 / probability.sqrt();
        self.amplitudes
            .retain(|&i, _| ((i >> qubit) & 1 == 1) == bit);
        for a in self.amplitudes.values_mut() {
            *a *= scale;
        }
        Ok((probability, self))
    }

    fn support(&self, tolerance: f64) -> Vec<SupportEntry> {
        self.amplitudes
            .iter()
            .filter(|(_, a)| a.norm() > tolerance)
            .map(|(&index, &amplitude)| SupportEntry { index, amplitude })
            .collect()
    }

    fn norm(&self) -> f64 {
        self.amplitudes
            .values()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_twice_prunes_back_to_one_entry() {
        let mut s = SparseState::basis(3, 0b010).unwrap();
        s.apply(&Gate::H(1)).unwrap();
        assert_eq!(s.populated(), 2);
        s.apply(&Gate::H(1)).unwrap();
        assert_eq!(s.populated(), 1);
        assert!((s.amplitude(0b010) - Complex64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn wide_register_beyond_dense_limit() {
        let mut s = SparseState::basis(60, 1 << 59).unwrap();
        s.apply(&Gate::cnot(59, 0)).unwrap();
        assert_eq!(s.support(1e-9)[0].index, (1 << 59) | 1);
    }

    #[test]
    fn basis_out_of_range() {
        assert!(matches!(
            SparseState::basis(2, 4),
            Err(SimError::BasisOutOfRange {
                index: 4,
                qubits: 2
            })
        ));
    }
}
