//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use dnasat::circuit::{
    check_bounds, compile, gate_census, minimal_single_variable_circuit, Register,
};
use dnasat::cnf::{paper_example_formula, single_variable_formula, Assignment, Formula};
use dnasat::dna::{Lab, Primitive, Strand, Symbol, Tube};
use dnasat::sim::{run, run_on, QuantumState, SparseState};
use dnasat::solver::{run_quantum, solve, Engine, SolveOptions};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const AMPLITUDE_TOL: f64 = 1e-10;
const SWEEP: usize = 200;

type Outcome = Result<String, String>;

fn sweep() -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5a7_2024);
    (0..SWEEP)
        .map(|_| {
            let n = rng.gen_range(1..=5);
            let m = rng.gen_range(1..=8);
            Formula::random(&mut rng, n, m, n)
        })
        .collect()
}

/// Direct per-assignment evaluation, kept apart from the library's oracle.
fn reference_solutions(f: &Formula) -> BTreeSet<Vec<bool>> {
    (0u64..1 << f.n())
        .map(|idx| {
            (0..f.n())
                .map(|i| (idx >> i) & 1 == 1)
                .collect::<Vec<bool>>()
        })
        .filter(|bits| {
            f.clauses().iter().all(|c| {
                c.literals()
                    .iter()
                    .any(|l| bits[l.variable() as usize - 1] != l.is_negated())
            })
        })
        .collect()
}

fn as_set(sols: &[Assignment]) -> BTreeSet<Vec<bool>> {
    sols.iter().map(|a| a.bits().to_vec()).collect()
}

fn c1_example_end_to_end() -> Outcome {
    let start = Instant::now();
    let report = solve(
        &paper_example_formula(),
        Engine::Quantum,
        &SolveOptions::default(),
    )
    .map_err(|e| e.to_string())?;
    let elapsed = start.elapsed();
    let got: Vec<String> = report.solutions.iter().map(ToString::to_string).collect();
    let expected = Assignment::from_ket_order(&[false, true]);
    if report.solutions != vec![expected] {
        return Err(format!("solutions {got:?}"));
    }
    if elapsed >= Duration::from_secs(1) {
        return Err(format!("took {elapsed:?}"));
    }
    Ok(format!("solutions {got:?} in {elapsed:?}"))
}

fn c2_pinned_state() -> Outcome {
    let run = run_quantum(&paper_example_formula(), &SolveOptions::default())
        .map_err(|e| e.to_string())?;
    let layout = run.circuit.layout().unwrap().clone();
    let support = run.selected_support();
    if support.len() != 1 {
        return Err(format!("{} support entries", support.len()));
    }
    let entry = support[0];
    let dev = (entry.amplitude - Complex64::new(1.0, 0.0)).norm();
    if dev >= AMPLITUDE_TOL {
        return Err(format!("amplitude {} (deviation {dev:e})", entry.amplitude));
    }
    let expect = [
        (Register::U, vec![false, true]),
        (Register::Y, vec![false, false]),
        (Register::R, vec![true, true, false]),
        (Register::C, vec![true, true, true, true]),
    ];
    for (reg, bits) in expect {
        let got = layout.read(entry.index, reg);
        if got != bits {
            return Err(format!(
                "register {} reads {got:?}, expected {bits:?}",
                reg.name()
            ));
        }
    }
    Ok(format!(
        "{} amplitude {:.12}",
        layout.ket(entry.index),
        entry.amplitude.re
    ))
}

// The expected amplitude is pinned as a decimal literal on purpose.
#[allow(clippy::approx_constant)]
fn c3_minimal_circuit() -> Outcome {
    let state = run(&minimal_single_variable_circuit()).map_err(|e| e.to_string())?;
    let target = 0.7071067811865476;
    for (i, a) in state.amplitudes().iter().enumerate() {
        let want = if i == 0 || i == 5 { target } else { 0.0 };
        let tol = if want == 0.0 { 1e-12 } else { AMPLITUDE_TOL };
        if (a - Complex64::new(want, 0.0)).norm() >= tol {
            return Err(format!("index {i}: amplitude {a}"));
        }
    }
    Ok(format!(
        "a0 = {}, a5 = {}",
        state.amplitude(0).re,
        state.amplitude(5).re
    ))
}

fn c4_qubit_count(formulas: &[Formula]) -> Outcome {
    let example = compile(&paper_example_formula())
        .map_err(|e| e.to_string())?
        .qubit_count();
    if example != 11 {
        return Err(format!("example formula uses {example} qubits"));
    }
    for f in formulas {
        let q = compile(f).map_err(|e| e.to_string())?.qubit_count();
        if q != 3 * f.n() + f.m() + 2 {
            return Err(format!("n={} m={}: {q} qubits", f.n(), f.m()));
        }
    }
    Ok(format!(
        "{} formulas match 3n+m+2, example uses 11",
        formulas.len()
    ))
}

fn c5_gate_bounds(formulas: &[Formula]) -> Outcome {
    let mut worst = [0.0f64; 3];
    for f in formulas {
        let census = gate_census(&compile(f).map_err(|e| e.to_string())?);
        let report = check_bounds(&census, f.n(), f.m());
        if !report.all_pass() {
            return Err(format!("{f}\n{report}"));
        }
        for (w, name) in worst.iter_mut().zip(["X", "CNOT", "TOFFOLI"]) {
            *w = w.max(report.check(name).unwrap().ratio());
        }
    }
    Ok(format!(
        "H == n everywhere; worst ratios X {:.3}, CNOT {:.3}, TOFFOLI {:.3}",
        worst[0], worst[1], worst[2]
    ))
}

fn c6_oracle_equivalence(formulas: &[Formula]) -> Outcome {
    let options = SolveOptions::default();
    let start = Instant::now();
    let mut sat = 0;
    for f in formulas {
        let expected = reference_solutions(f);
        for engine in Engine::ALL {
            let report = solve(f, engine, &options).map_err(|e| e.to_string())?;
            if as_set(&report.solutions) != expected {
                return Err(format!("{engine} disagrees on {f}"));
            }
        }
        sat += usize::from(!expected.is_empty());
    }
    let elapsed = start.elapsed();
    if elapsed >= Duration::from_secs(60) {
        return Err(format!("sweep took {elapsed:?}"));
    }
    Ok(format!(
        "{} formulas ({sat} SAT) agree in {elapsed:?}",
        formulas.len()
    ))
}

fn c7_ancilla_hygiene(formulas: &[Formula]) -> Outcome {
    let mut entries = 0;
    for f in formulas {
        let run = run_quantum(f, &SolveOptions::default()).map_err(|e| e.to_string())?;
        let layout = run.circuit.layout().unwrap();
        let mut r_expected = vec![true; f.n()];
        r_expected.push(false);
        for e in run.selected_support() {
            entries += 1;
            let y = layout.read(e.index, Register::Y);
            let r = layout.read(e.index, Register::R);
            if y.iter().any(|&b| b) || r != r_expected {
                return Err(format!("{f}: dirty entry {}", layout.ket(e.index)));
            }
        }
    }
    Ok(format!("{entries} post-selected entries clean"))
}

fn random_tube(rng: &mut ChaCha8Rng) -> Tube {
    let mut tube = Tube::new();
    for _ in 0..rng.gen_range(0..12) {
        let n = rng.gen_range(0..=6u32);
        let mut vars: Vec<u32> = (1..=n + 2).collect();
        vars.retain(|_| rng.gen_bool(0.7));
        let symbols = vars
            .into_iter()
            .map(|v| Symbol::new(v, rng.gen_bool(0.5)))
            .collect();
        let strand = Strand::from_symbols(symbols).unwrap();
        tube = tube.with(strand, rng.gen_range(1..5));
    }
    tube
}

fn c8_dna_laws() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..1000 {
        let tube = random_tube(&mut rng);
        let variable = rng.gen_range(1..=8);
        let bit = rng.gen_bool(0.5);
        let (plus, minus) = tube.clone().extract(variable, bit);
        if Tube::merge([plus, minus]) != tube {
            return Err(format!("partition law broken on tube #{i}: {tube}"));
        }
    }
    for n in 1..=10usize {
        let mut lab = Lab::new();
        let tube = lab.uniform_tube(n).map_err(|e| e.to_string())?;
        let allowed = [Primitive::Amplify, Primitive::AppendTail, Primitive::Merge];
        if let Some(ev) = lab.trace().iter().find(|ev| !allowed.contains(&ev.op)) {
            return Err(format!("n={n}: trace contains {ev}"));
        }
        let mut expected = Tube::new();
        for idx in 0..1usize << n {
            let bits: String = (0..n)
                .rev()
                .map(|i| if (idx >> i) & 1 == 1 { '1' } else { '0' })
                .collect();
            expected = expected.with(Strand::from_bits(&bits).unwrap(), 1);
        }
        if *tube.tube() != expected {
            return Err(format!(
                "n={n}: uniform tube has {} strands",
                tube.tube().molecule_count()
            ));
        }
    }
    Ok("1000 partitions exact; uniform tubes n=1..10 match".to_string())
}

fn c9_reversibility(formulas: &[Formula]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut worst = 0.0f64;
    for f in formulas {
        let circuit = compile(f).map_err(|e| e.to_string())?;
        let round_trip = circuit.then(&circuit.invert());
        let q = circuit.qubit_count();
        for _ in 0..50 {
            let index = rng.gen_range(0..1usize << q);
            let start = SparseState::basis(q, index).map_err(|e| e.to_string())?;
            let end = run_on(&round_trip, start).map_err(|e| e.to_string())?;
            let off: f64 = end
                .support(0.0)
                .iter()
                .filter(|e| e.index != index)
                .map(|e| e.amplitude.norm_sqr())
                .sum::<f64>()
                .sqrt();
            let dev = (end.amplitude(index) - Complex64::new(1.0, 0.0))
                .norm()
                .max(off);
            worst = worst.max(dev);
            if dev >= AMPLITUDE_TOL {
                return Err(format!("{f}: deviation {dev:e} from |{index}>"));
            }
        }
    }
    Ok(format!(
        "{} basis states, worst deviation {worst:.1e}",
        formulas.len() * 50
    ))
}

fn c10_selection_probability(formulas: &[Formula]) -> Outcome {
    let options = SolveOptions::default();
    let check = |f: &Formula, expected: Option<f64>| -> Result<f64, String> {
        let report = solve(f, Engine::Quantum, &options).map_err(|e| e.to_string())?;
        let p = report.selection_probability.unwrap_or(0.0);
        let want = report.solutions.len() as f64 / (1u64 << f.n()) as f64;
        if let Some(fixed) = expected {
            if (want - fixed).abs() > 0.0 {
                return Err(format!("{f}: {} solutions", report.solutions.len()));
            }
        }
        if (p - want).abs() >= AMPLITUDE_TOL {
            return Err(format!("{f}: P = {p}, expected {want}"));
        }
        Ok(p)
    };
    let example = check(&paper_example_formula(), Some(0.25))?;
    let single = check(&single_variable_formula(), Some(0.5))?;
    for f in formulas {
        check(f, None)?;
    }
    Ok(format!(
        "example {example:.12}, (u1) {single:.12}, sweep of {} ok",
        formulas.len()
    ))
}

fn main() -> ExitCode {
    let formulas = sweep();
    let results: Vec<(&str, Outcome)> = vec![
        ("1 example formula end to end", c1_example_end_to_end()),
        ("2 pinned post-selected state", c2_pinned_state()),
        ("3 minimal one-variable circuit", c3_minimal_circuit()),
        ("4 qubit count 3n+m+2", c4_qubit_count(&formulas)),
        ("5 gate-count envelopes", c5_gate_bounds(&formulas)),
        (
            "6 quantum == dna == brute",
            c6_oracle_equivalence(&formulas),
        ),
        ("7 ancilla hygiene", c7_ancilla_hygiene(&formulas)),
        ("8 tube laws", c8_dna_laws()),
        ("9 reversibility", c9_reversibility(&formulas)),
        (
            "10 selection probability",
            c10_selection_probability(&formulas),
        ),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        results.len() - failed,
        results.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
