//! Runs a formula through the quantum, DNA and brute-force engines and
//! compares their answers.

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::circuit::{
    compile_with_limit, gate_census, Circuit, CircuitError, GateCensus, Register,
    DEFAULT_QUBIT_LIMIT,
};
use crate::cnf::{brute_force_solutions, Assignment, CnfError, Formula};
use crate::dna::{lipton_solve, DnaError};
use crate::sim::{run_on, Backend, QuantumState, SimError, State, SupportEntry, SUPPORT_TOLERANCE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Quantum,
    Dna,
    Brute,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Quantum, Engine::Dna, Engine::Brute];

    pub fn name(self) -> &'static str {
        match self {
            Engine::Quantum => "quantum",
            Engine::Dna => "dna",
            Engine::Brute => "brute",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "quantum" => Ok(Engine::Quantum),
            "dna" => Ok(Engine::Dna),
            "brute" => Ok(Engine::Brute),
            other => Err(format!(
                "unknown engine `{other}` (expected quantum, dna or brute)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EngineFailure {
    #[error(transparent)]
    Cnf(#[from] CnfError),
    #[error(transparent)]
    Dna(#[from] DnaError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{engine} engine")]
pub struct SolveError {
    pub engine: Engine,
    #[source]
    pub source: EngineFailure,
}

impl SolveError {
    fn new(engine: Engine, source: impl Into<EngineFailure>) -> Self {
        SolveError {
            engine,
            source: source.into(),
        }
    }

    /// True when a size guard refused the formula: qubit limit, tube
    /// limit or enumeration limit.
    pub fn is_guard(&self) -> bool {
        matches!(
            self.source,
            EngineFailure::Cnf(CnfError::EnumerationLimit { .. })
                | EngineFailure::Dna(DnaError::TubeLimit { .. })
                | EngineFailure::Circuit(CircuitError::QubitLimit { .. })
                | EngineFailure::Sim(SimError::TooManyQubits { .. })
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SolveOptions {
    pub qubit_limit: usize,
    pub backend: Backend,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            qubit_limit: DEFAULT_QUBIT_LIMIT,
            backend: Backend::Auto,
        }
    }
}

/// One engine's answer. Serialises to the fixed JSON report schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub engine: Engine,
    pub n: usize,
    pub m: usize,
    /// Ascending binary order; each is `[u1, u2, ..]` as 0/1.
    pub solutions: Vec<Assignment>,
    pub census: Option<GateCensus>,
    /// Probability of reading `c_m = 1`; quantum engine only.
    pub selection_probability: Option<f64>,
    pub elapsed_ms: f64,
}

impl SolveReport {
    pub fn is_sat(&self) -> bool {
        !self.solutions.is_empty()
    }

    pub fn elapsed(&self) -> Duration {
        Duration::from_secs_f64(self.elapsed_ms / 1000.0)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report fields are always serialisable")
    }
}

impl fmt::Display for SolveReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "engine: {}  (n = {}, m = {})",
            self.engine, self.n, self.m
        )?;
        if self.solutions.is_empty() {
            writeln!(f, "UNSAT")?;
        } else {
            writeln!(
                f,
                "SAT: {} solution(s), shown as u{}..u1",
                self.solutions.len(),
                self.n
            )?;
            for s in &self.solutions {
                writeln!(f, "  {s}")?;
            }
        }
        if let Some(p) = self.selection_probability {
            writeln!(f, "selection probability: {p}")?;
        }
        if let Some(c) = &self.census {
            writeln!(
                f,
                "gates: H={} X={} CNOT={} TOFFOLI={} PHASE={}  qubits={}",
                c.h, c.x, c.cnot, c.toffoli, c.phase, c.qubits
            )?;
        }
        write!(f, "elapsed: {:.3} ms", self.elapsed_ms)
    }
}

/// Everything the quantum engine computed for one formula.
#[derive(Debug, Clone)]
pub struct QuantumRun {
    pub circuit: Circuit,
    /// State after the last gate, before any measurement.
    pub final_state: State,
    /// `(P(c_m = 1), projected state)`, or `None` when that outcome has
    /// zero probability.
    pub selected: Option<(f64, State)>,
}

impl QuantumRun {
    pub fn selection_probability(&self) -> f64 {
        self.selected.as_ref().map_or(0.0, |(p, _)| *p)
    }

    /// Post-selected support entries.
    pub fn selected_support(&self) -> Vec<SupportEntry> {
        self.selected
            .as_ref()
            .map_or_else(Vec::new, |(_, s)| s.support(SUPPORT_TOLERANCE))
    }

    /// Distinct `u` values of the post-selected support, ascending.
    pub fn solutions(&self) -> Vec<Assignment> {
        let layout = self
            .circuit
            .layout()
            .expect("compiled circuits carry a layout");
        let mut out: Vec<Assignment> = self
            .selected_support()
            .iter()
            .map(|e| Assignment::from_ket_order(&layout.read(e.index, Register::U)))
            .collect();
        out.sort_by_key(Assignment::to_index);
        out.dedup();
        out
    }
}

/// Compile, run, then condition on `c_m = 1`.
pub fn run_quantum(formula: &Formula, options: &SolveOptions) -> Result<QuantumRun, SolveError> {
    let err = |e: EngineFailure| SolveError::new(Engine::Quantum, e);
    let circuit = compile_with_limit(formula, options.qubit_limit).map_err(|e| err(e.into()))?;
    let state = State::init(&circuit, options.backend).map_err(|e| err(e.into()))?;
    let final_state = run_on(&circuit, state).map_err(|e| err(e.into()))?;
    let output = circuit
        .layout()
        .expect("compiled circuits carry a layout")
        .output();
    let selected = match final_state.clone().post_select(output, true) {
        Ok(pair) => Some(pair),
        Err(SimError::NothingToSelect { .. }) => None,
        Err(e) => return Err(err(e.into())),
    };
    Ok(QuantumRun {
        circuit,
        final_state,
        selected,
    })
}

/// Solves `formula` with one engine. UNSAT is an empty solution list (and
/// probability 0 for the quantum engine), not an error.
pub fn solve(
    formula: &Formula,
    engine: Engine,
    options: &SolveOptions,
) -> Result<SolveReport, SolveError> {
    let start = Instant::now();
    let (solutions, census, selection_probability) = match engine {
        Engine::Brute => {
            let sols = brute_force_solutions(formula).map_err(|e| SolveError::new(engine, e))?;
            (sols, None, None)
        }
        Engine::Dna => {
            let sols = lipton_solve(formula).map_err(|e| SolveError::new(engine, e))?;
            (sols, None, None)
        }
        Engine::Quantum => {
            let run = run_quantum(formula, options)?;
            let census = gate_census(&run.circuit);
            (
                run.solutions(),
                Some(census),
                Some(run.selection_probability()),
            )
        }
    };
    Ok(SolveReport {
        engine,
        n: formula.n(),
        m: formula.m(),
        solutions,
        census,
        selection_probability,
        elapsed_ms: start.elapsed().as_secs_f64() * 1000.0,
    })
}

/// Solutions one engine disagrees on, relative to brute force.
#[derive(Debug, Clone, PartialEq)]
pub struct Mismatch {
    pub engine: Engine,
    /// In brute force but not in `engine`.
    pub missing: Vec<Assignment>,
    /// In `engine` but not in brute force.
    pub extra: Vec<Assignment>,
}

#[derive(Debug, Clone)]
pub struct CrossCheck {
    pub reports: Vec<SolveReport>,
    pub mismatches: Vec<Mismatch>,
}

impl CrossCheck {
    pub fn agree(&self) -> bool {
        self.mismatches.is_empty()
    }

    pub fn report(&self, engine: Engine) -> &SolveReport {
        self.reports
            .iter()
            .find(|r| r.engine == engine)
            .expect("cross-check runs every engine")
    }
}

impl fmt::Display for CrossCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.reports {
            let sols: Vec<String> = r.solutions.iter().map(ToString::to_string).collect();
            writeln!(
                f,
                "{:<8} {{{}}}  {:.3} ms",
                r.engine.name(),
                sols.join(", "),
                r.elapsed_ms
            )?;
        }
        if self.agree() {
            write!(f, "all engines agree")
        } else {
            for m in &self.mismatches {
                let show = |v: &[Assignment]| {
                    v.iter()
                        .map(ToString::to_string)
                        .collect::<Vec<_>>()
                        .join(", ")
                };
                writeln!(
                    f,
                    "{} differs: missing {{{}}} extra {{{}}}",
                    m.engine,
                    show(&m.missing),
                    show(&m.extra)
                )?;
            }
            write!(f, "MISMATCH")
        }
    }
}

/// Runs all three engines and diffs quantum and DNA against brute force.
pub fn cross_check(formula: &Formula, options: &SolveOptions) -> Result<CrossCheck, SolveError> {
    let reports = Engine::ALL
        .iter()
        .map(|&e| solve(formula, e, options))
        .collect::<Result<Vec<_>, _>>()?;
    let truth = &reports
        .iter()
        .find(|r| r.engine == Engine::Brute)
        .expect("brute ran")
        .solutions;
    let mismatches = reports
        .iter()
        .filter(|r| r.engine != Engine::Brute)
        .filter_map(|r| {
            let missing: Vec<Assignment> = truth
                .iter()
                .filter(|a| !r.solutions.contains(a))
                .cloned()
                .collect();
            let extra: Vec<Assignment> = r
                .solutions
                .iter()
                .filter(|a| !truth.contains(a))
                .cloned()
                .collect();
            (!missing.is_empty() || !extra.is_empty()).then_some(Mismatch {
                engine: r.engine,
                missing,
                extra,
            })
        })
        .collect();
    Ok(CrossCheck {
        reports,
        mismatches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::{paper_example_formula, single_variable_formula, Clause};

    fn contradiction() -> Formula {
        Formula::new(
            1,
            vec![
                Clause::from_dimacs(&[1]).unwrap(),
                Clause::from_dimacs(&[-1]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn quantum_example() {
        let r = solve(
            &paper_example_formula(),
            Engine::Quantum,
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(
            r.solutions,
            vec![Assignment::from_ket_order(&[false, true])]
        );
        assert!((r.selection_probability.unwrap() - 0.25).abs() < 1e-12);
        assert_eq!(r.census.unwrap().qubits, 11);
        assert!(r.is_sat());
    }

    #[test]
    fn quantum_single_variable() {
        let r = solve(
            &single_variable_formula(),
            Engine::Quantum,
            &SolveOptions::default(),
        )
        .unwrap();
        assert_eq!(r.solutions, vec![Assignment::new(vec![true])]);
        assert!((r.selection_probability.unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn unsat_is_empty_for_every_engine() {
        for engine in Engine::ALL {
            let r = solve(&contradiction(), engine, &SolveOptions::default()).unwrap();
            assert!(r.solutions.is_empty(), "{engine}");
            assert_eq!(r.selection_probability.is_some(), engine == Engine::Quantum);
            if engine == Engine::Quantum {
                assert_eq!(r.selection_probability, Some(0.0));
            }
        }
        assert!(cross_check(&contradiction(), &SolveOptions::default())
            .unwrap()
            .agree());
    }

    #[test]
    fn backends_agree() {
        let f = paper_example_formula();
        for backend in [Backend::Dense, Backend::Sparse] {
            let opts = SolveOptions {
                backend,
                ..SolveOptions::default()
            };
            let run = run_quantum(&f, &opts).unwrap();
            assert_eq!(run.final_state.backend(), backend);
            assert_eq!(
                run.solutions(),
                vec![Assignment::from_ket_order(&[false, true])]
            );
        }
    }

    #[test]
    fn guard_errors_carry_engine() {
        let wide = Formula::new(25, vec![Clause::from_dimacs(&[25]).unwrap()]).unwrap();
        for engine in Engine::ALL {
            let err = solve(&wide, engine, &SolveOptions::default()).unwrap_err();
            assert_eq!(err.engine, engine);
            assert!(err.is_guard(), "{err}");
            assert!(err.to_string().starts_with(engine.name()));
        }
    }

    #[test]
    fn cross_check_example() {
        let cc = cross_check(&paper_example_formula(), &SolveOptions::default()).unwrap();
        assert!(cc.agree());
        assert_eq!(cc.reports.len(), 3);
        assert!(cc.to_string().ends_with("all engines agree"));
    }

    #[test]
    fn report_json_schema() {
        let r = solve(
            &paper_example_formula(),
            Engine::Quantum,
            &SolveOptions::default(),
        )
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
        let mut expected = vec![
            "engine",
            "n",
            "m",
            "solutions",
            "census",
            "selection_probability",
            "elapsed_ms",
        ];
        expected.sort_unstable();
        let mut keys_sorted = keys.clone();
        keys_sorted.sort_unstable();
        assert_eq!(keys_sorted, expected);
        assert_eq!(v["engine"], "quantum");
        assert_eq!(v["solutions"], serde_json::json!([[1, 0]]));
        assert_eq!(v["census"]["H"], 2);
        assert_eq!(v["census"]["TOFFOLI"], 7);
        assert_eq!(v["census"]["qubits"], 11);
        assert!((v["selection_probability"].as_f64().unwrap() - 0.25).abs() < 1e-12);
        let brute = solve(
            &paper_example_formula(),
            Engine::Brute,
            &SolveOptions::default(),
        )
        .unwrap();
        let v: serde_json::Value = serde_json::from_str(&brute.to_json()).unwrap();
        assert!(v["census"].is_null() && v["selection_probability"].is_null());
    }

    #[test]
    fn report_round_trips() {
        for engine in Engine::ALL {
            let r = solve(&paper_example_formula(), engine, &SolveOptions::default()).unwrap();
            let back: SolveReport = serde_json::from_str(&r.to_json()).unwrap();
            assert_eq!(back, r);
        }
    }

    #[test]
    fn engine_parse() {
        assert_eq!("dna".parse::<Engine>(), Ok(Engine::Dna));
        assert!("grover".parse::<Engine>().is_err());
    }

    #[test]
    fn types_are_thread_safe() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<Formula>();
        assert_send_sync::<Circuit>();
        assert_send_sync::<crate::dna::Tube>();
        assert_send_sync::<crate::sim::StateVector>();
        assert_send_sync::<SolveReport>();
    }

    #[test]
    fn engines_run_concurrently() {
        let f = paper_example_formula();
        let reports: Vec<SolveReport> = std::thread::scope(|s| {
            let handles: Vec<_> = Engine::ALL
                .iter()
                .map(|&e| {
                    let f = &f;
                    s.spawn(move || solve(f, e, &SolveOptions::default()).unwrap())
                })
                .collect();
            handles.into_iter().map(|h| h.join().unwrap()).collect()
        });
        assert!(reports.windows(2).all(|w| w[0].solutions == w[1].solutions));
    }
}
