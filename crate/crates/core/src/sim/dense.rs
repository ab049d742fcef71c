use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use super::{check_gate, QuantumState, SimError, SupportEntry, DENSE_QUBIT_LIMIT, SELECT_EPSILON};
use crate::circuit::Gate;

/// All `2^Q` amplitudes, basis index `i` at position `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    qubits: usize,
    amplitudes: Vec<Complex64>,
}

/// Spreads the bits of `k` around zeros at `positions` (ascending).
#[inline]
fn deposit(mut k: usize, positions: &[usize]) -> usize {
    for &p in positions {
        let low = k & ((1usize << p) - 1);
        k = ((k >> p) << (p + 1)) | low;
    }
    k
}

impl StateVector {
    /// Builds a state from raw amplitudes; the length must be a power of
    /// two. The vector is not renormalised.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self, SimError> {
        let len = amplitudes.len();
        if !len.is_power_of_two() {
            return Err(SimError::NotPowerOfTwo(len));
        }
        Ok(StateVector {
            qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    /// Calls `f(i0, i1)` for every index pair differing only in `target`
    /// whose `controls` are all 1, with `target` clear in `i0`.
    fn for_each_pair(
        &mut self,
        controls: &[usize],
        target: usize,
        mut f: impl FnMut(&mut [Complex64], usize, usize),
    ) {
        let mut fixed: Vec<usize> = controls.to_vec();
        fixed.push(target);
        fixed.sort_unstable();
        let control_mask = controls.iter().fold(0usize, |m, &c| m | (1 << c));
        let target_bit = 1usize << target;
        let count = 1usize << (self.qubits - fixed.len());
        for k in 0..count {
            let i0 = deposit(k, &fixed) | control_mask;
            f(&mut self.amplitudes, i0, i0 | target_bit);
        }
    }

    fn apply_unchecked(&mut self, gate: &Gate) {
        match *gate {
            Gate::X(_) | Gate::Cnot { .. } | Gate::Toffoli { .. } => {
                let target = gate.target();
                let controls = gate.controls().to_vec();
                self.for_each_pair(&controls, target, |a, i0, i1| a.swap(i0, i1));
            }
            Gate::H(q) => {
                self.for_each_pair(&[], q, |a, i0, i1| {
                    let (x, y) = (a[i0], a[i1]);
                    a[i0] = (x + y) * FRAC_1_SQRT_2;
                    a[i1] = (x - y) * FRAC_1_SQRT_2;
                });
            }
            Gate::Phase { theta, qubit } => {
                let factor = Complex64::from_polar(1.0, theta);
                self.for_each_pair(&[], qubit, |a, _, i1| a[i1] *= factor);
            }
        }
    }
}

impl QuantumState for StateVector {
    fn basis(qubits: usize, index: usize) -> Result<Self, SimError> {
        if qubits > DENSE_QUBIT_LIMIT {
            return Err(SimError::TooManyQubits {
                qubits,
                limit: DENSE_QUBIT_LIMIT,
            });
        }
        let len = 1usize << qubits;
        if index >= len {
            return Err(SimError::BasisOutOfRange { index, qubits });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); len];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { qubits, amplitudes })
    }

    fn qubit_count(&self) -> usize {
        self.qubits
    }

    fn apply(&mut self, gate: &Gate) -> Result<(), SimError> {
        check_gate(gate, self.qubits)?;
        self.apply_unchecked(gate);
        Ok(())
    }

    fn probability(&self, qubit: usize, bit: bool) -> f64 {
        let mask = 1usize << qubit;
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| (i & mask != 0) == bit)
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
        let mask = 1usize << qubit;
        for (i, a) in self.amplitudes.iter_mut().enumerate() {
            if (i & mask != 0) == bit {
                *a *= scale;
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        Ok((probability, self))
    }

    fn support(&self, tolerance: f64) -> Vec<SupportEntry> {
        self.amplitudes
            .iter()
            .enumerate()
            .filter(|(_, a)| a.norm() > tolerance)
            .map(|(index, &amplitude)| SupportEntry { index, amplitude })
            .collect()
    }

    fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}
