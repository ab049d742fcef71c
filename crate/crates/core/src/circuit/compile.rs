use super::{Circuit, CircuitError, ClausePhase, ClauseSpan, Gate, RegisterLayout};
use crate::cnf::{Clause, Formula};

/// Default ceiling on `3n + m + 2`.
pub const DEFAULT_QUBIT_LIMIT: usize = 26;

/// [`compile_with_limit`] at [`DEFAULT_QUBIT_LIMIT`].
pub fn compile(formula: &Formula) -> Result<Circuit, CircuitError> {
    compile_with_limit(formula, DEFAULT_QUBIT_LIMIT)
}

/// Compiles `formula` into the four-register evaluation circuit.
///
/// The circuit opens with `H` on every `u` qubit. Clause `j` (1-based) with
/// literals `l1 .. lk` then emits:
///
/// 1. copy: `CNOT u -> y` for each literal's variable;
/// 2. negate: `X y` for each negated literal, so `y` holds `li`;
/// 3. transfer: `CNOT y -> r(i)`; slot `r(i)` starts at 1 and ends at `!li`;
/// 4. null: undo 2 and 1, clearing `y`;
/// 5. OR-evaluate: `r0 ^= !l1 & .. & !lk`, via `CNOT` for `k = 1`, one
///    `TOFFOLI` for `k = 2`, and for `k >= 3` a Toffoli ladder through
///    `y1 .. y(k-2)` as clean ancillas that is unwound before the phase ends;
/// 6. flip: `X r0`, so `r0` holds the clause value;
/// 7. AND step: `TOFFOLI(r0, c(j-1), c(j))`;
/// 8. uncompute: steps 1-6 mirrored, restoring `r` to `1..10` and `y` to 0.
///
/// `c(j)` is left holding the AND of the first `j` clauses.
pub fn compile_with_limit(formula: &Formula, qubit_limit: usize) -> Result<Circuit, CircuitError> {
    let (n, m) = (formula.n(), formula.m());
    let required = 3 * n + m + 2;
    let limit = qubit_limit.min(super::MAX_QUBITS);
    if required > limit {
        return Err(CircuitError::QubitLimit { required, limit });
    }
    for (j, clause) in formula.clauses().iter().enumerate() {
        if clause.len() > n {
            return Err(CircuitError::ClauseTooWide {
                clause: j + 1,
                width: clause.len(),
                n,
            });
        }
    }

    let layout = RegisterLayout::for_formula(n, m);
    let mut initial = vec![false; required];
    initial[layout.c(0)] = true;
    for slot in 1..=n {
        initial[layout.r(slot)] = true;
    }

    let mut gates: Vec<Gate> = (1..=n).map(|v| Gate::H(layout.u(v))).collect();
    let mut spans = Vec::with_capacity(m);
    for (j, clause) in formula.clauses().iter().enumerate() {
        spans.push(emit_clause(&layout, clause, j + 1, &mut gates));
    }
    Ok(Circuit::with_layout(layout, gates, initial, spans))
}

struct PhaseRecorder<'a> {
    gates: &'a mut Vec<Gate>,
    phases: Vec<(ClausePhase, std::ops::Range<usize>)>,
}

impl PhaseRecorder<'_> {
    fn phase(&mut self, phase: ClausePhase, emit: impl FnOnce(&mut Vec<Gate>)) {
        let start = self.gates.len();
        emit(self.gates);
        self.phases.push((phase, start..self.gates.len()));
    }
}

fn emit_clause(
    layout: &RegisterLayout,
    clause: &Clause,
    j: usize,
    gates: &mut Vec<Gate>,
) -> ClauseSpan {
    let lits = clause.literals();
    let k = lits.len();
    let r0 = layout.r(0);
    let slot = |i: usize| layout.r(i + 1);
    let var = |i: usize| lits[i].variable() as usize;
    let start = gates.len();

    let copy: Vec<Gate> = (0..k)
        .map(|i| Gate::cnot(layout.u(var(i)), layout.y(var(i))))
        .collect();
    let negate: Vec<Gate> = (0..k)
        .filter(|&i| lits[i].is_negated())
        .map(|i| Gate::X(layout.y(var(i))))
        .collect();

    let mut rec = PhaseRecorder {
        gates,
        phases: Vec::new(),
    };
    rec.phase(ClausePhase::Copy, |g| g.extend_from_slice(&copy));
    rec.phase(ClausePhase::Negate, |g| g.extend_from_slice(&negate));
    rec.phase(ClausePhase::Transfer, |g| {
        g.extend((0..k).map(|i| Gate::cnot(layout.y(var(i)), slot(i))))
    });
    rec.phase(ClausePhase::Null, |g| {
        g.extend(negate.iter().rev());
        g.extend(copy.iter().rev());
    });
    rec.phase(ClausePhase::OrEvaluate, |g| match k {
        1 => g.push(Gate::cnot(slot(0), r0)),
        2 => g.push(Gate::toffoli(slot(0), slot(1), r0)),
        _ => {
            // ancilla a(i) = slot(0) & .. & slot(i+1), held in y(i+1)
            let ancilla = |i: usize| layout.y(i + 1);
            let mut ladder = vec![Gate::toffoli(slot(0), slot(1), ancilla(0))];
            for i in 1..k - 2 {
                ladder.push(Gate::toffoli(ancilla(i - 1), slot(i + 1), ancilla(i)));
            }
            g.extend_from_slice(&ladder);
            g.push(Gate::toffoli(ancilla(k - 3), slot(k - 1), r0));
            g.extend(ladder.iter().rev());
        }
    });
    rec.phase(ClausePhase::Flip, |g| g.push(Gate::X(r0)));

    let mirror: Vec<Gate> = rec.gates[start..].iter().rev().map(Gate::inverse).collect();
    rec.phase(ClausePhase::AndStep, |g| {
        g.push(Gate::toffoli(r0, layout.c(j - 1), layout.c(j)))
    });
    rec.phase(ClausePhase::Uncompute, |g| g.extend(mirror));

    ClauseSpan {
        clause: j,
        phases: rec.phases,
    }
}

/// The three-qubit circuit for `F = (u1)`: `H(u1)`, `CNOT(u1, y1)`,
/// `CNOT(y1, c1)`, `CNOT(u1, y1)` with `c1 = 0`, `y1 = 1`, `u1 = 2`, all
/// starting at 0. From `|000>` it yields `(|000> + |101>)/sqrt 2`.
pub fn minimal_single_variable_circuit() -> Circuit {
    let layout = RegisterLayout::single_variable();
    let (u1, y1, c1) = (layout.u(1), layout.y(1), layout.c(0));
    let gates = vec![
        Gate::H(u1),
        Gate::cnot(u1, y1),
        Gate::cnot(y1, c1),
        Gate::cnot(u1, y1),
    ];
    Circuit::with_layout(layout, gates, vec![false; 3], Vec::new())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{gate_census, GateKind};
    use crate::cnf::{paper_example_formula, single_variable_formula, Clause, Formula};

    #[test]
    fn example_shape() {
        let c = compile(&paper_example_formula()).unwrap();
        assert_eq!(c.qubit_count(), 11);
        assert_eq!(c.hadamard_prefix(), 2);
        assert_eq!(c.gates()[..2], [Gate::H(9), Gate::H(10)]);
        assert_eq!(c.initial_index(), 0b000_0110_0001);
        assert_eq!(c.clause_spans().len(), 3);
    }

    #[test]
    fn two_literal_clause_uses_single_toffoli() {
        let c = compile(&paper_example_formula()).unwrap();
        let span = &c.clause_spans()[0];
        let or = span.phase(ClausePhase::OrEvaluate);
        // first clause (u2 | u1): u2 -> slot r1, u1 -> slot r2
        assert_eq!(c.gates()[or], [Gate::toffoli(5, 6, 4)]);
        assert_eq!(
            c.gates()[span.phase(ClausePhase::AndStep)],
            [Gate::toffoli(4, 0, 1)]
        );
    }

    #[test]
    fn clause_phases_are_contiguous() {
        let f = Formula::new(
            4,
            vec![
                Clause::from_dimacs(&[1, -2, 3, -4]).unwrap(),
                Clause::from_dimacs(&[-3]).unwrap(),
            ],
        )
        .unwrap();
        let c = compile(&f).unwrap();
        let mut cursor = c.hadamard_prefix();
        for span in c.clause_spans() {
            for (_, range) in &span.phases {
                assert_eq!(range.start, cursor);
                cursor = range.end;
            }
        }
        assert_eq!(cursor, c.len());
    }

    #[test]
    fn uncompute_mirrors_compute() {
        let f = Formula::new(3, vec![Clause::from_dimacs(&[1, -2, 3]).unwrap()]).unwrap();
        let c = compile(&f).unwrap();
        let span = &c.clause_spans()[0];
        let compute = span.phase(ClausePhase::Copy).start..span.phase(ClausePhase::Flip).end;
        let forward: Vec<Gate> = c.gates()[compute].to_vec();
        let mut back: Vec<Gate> = c.gates()[span.phase(ClausePhase::Uncompute)].to_vec();
        back.reverse();
        assert_eq!(forward, back);
    }

    #[test]
    fn wide_clause_ladder_counts() {
        // k = 4: ladder of 2, final toffoli, unwind 2
        let f = Formula::new(4, vec![Clause::from_dimacs(&[1, 2, 3, 4]).unwrap()]).unwrap();
        let c = compile(&f).unwrap();
        let or = c.clause_spans()[0].phase(ClausePhase::OrEvaluate);
        assert_eq!(or.len(), 5);
        assert!(c.gates()[or].iter().all(|g| g.kind() == GateKind::Toffoli));
    }

    #[test]
    fn qubit_limit_enforced() {
        let f = Formula::new(8, vec![Clause::from_dimacs(&[1]).unwrap(); 1]).unwrap();
        assert_eq!(
            compile_with_limit(&f, 20),
            Err(CircuitError::QubitLimit {
                required: 27,
                limit: 20
            })
        );
        assert!(compile_with_limit(&f, 27).is_ok());
        assert!(matches!(
            compile(&f),
            Err(CircuitError::QubitLimit {
                required: 27,
                limit: 26
            })
        ));
    }

    #[test]
    fn single_variable_compiles_to_six_qubits() {
        let c = compile(&single_variable_formula()).unwrap();
        assert_eq!(c.qubit_count(), 6);
        let census = gate_census(&c);
        assert_eq!(
            (census.h, census.cnot, census.x, census.toffoli),
            (1, 8, 2, 1)
        );
    }

    #[test]
    fn minimal_circuit_gates() {
        let c = minimal_single_variable_circuit();
        assert_eq!(c.qubit_count(), 3);
        assert_eq!(
            c.gates(),
            [
                Gate::H(2),
                Gate::cnot(2, 1),
                Gate::cnot(1, 0),
                Gate::cnot(2, 1)
            ]
        );
        assert_eq!(c.initial_index(), 0);
    }

    #[test]
    fn invert_minimal_reverses() {
        let c = minimal_single_variable_circuit();
        let inv = c.invert();
        let mut expected = c.gates().to_vec();
        expected.reverse();
        assert_eq!(inv.gates(), expected.as_slice());
        assert_eq!(inv.invert().gates(), c.gates());
    }

    #[test]
    fn double_inverse_is_identity_for_compiled() {
        let c = compile(&paper_example_formula()).unwrap();
        assert_eq!(c.invert().invert().gates(), c.gates());
    }
}
