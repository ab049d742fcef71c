//! `dnasat` command-line front end.
//!
//! Exit codes: 0 SAT (or success), 1 UNSAT, 2 input error, 3 size guard
//! exceeded, 4 engines disagree (`cross-check` only).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use rand::rngs::StdRng;
use rand::SeedableRng;

use dnasat::circuit::{
    check_bounds, compile_with_limit, gate_census, minimal_single_variable_circuit, Circuit,
    CircuitError, Gate, Register, MAX_QUBITS,
};
use dnasat::cnf::{paper_example_formula, parse_dimacs, Formula};
use dnasat::dna::{Lab, TUBE_LIMIT};
use dnasat::sim::{format_support, run, sample, QuantumState, SUPPORT_TOLERANCE};
use dnasat::solver::{
    cross_check, run_quantum, solve, Engine, EngineFailure, SolveError, SolveOptions, SolveReport,
};

const EXIT_SAT: u8 = 0;
const EXIT_UNSAT: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_GUARD: u8 = 3;
const EXIT_MISMATCH: u8 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "dnasat",
    version,
    about = "Solve CNF-SAT with simulated DNA, quantum and brute-force engines"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve a DIMACS CNF file with one engine.
    Solve(SolveArgs),
    /// Compile a formula to a circuit in text form.
    Compile {
        file: PathBuf,
        #[arg(long, short)]
        output: PathBuf,
    },
    /// Gate counts of the compiled circuit, checked against the envelopes.
    Census {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Run all three engines and compare their solution sets.
    CrossCheck {
        file: PathBuf,
        #[arg(long, default_value_t = dnasat::circuit::DEFAULT_QUBIT_LIMIT)]
        qubit_limit: usize,
    },
    /// Print the worked example states.
    Demo(DemoArgs),
}

#[derive(Debug, Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, default_value = "quantum")]
    engine: Engine,
    /// Print the JSON report instead of text.
    #[arg(long)]
    json: bool,
    /// Draw N Born-rule samples from the final state (quantum only).
    #[arg(long, value_name = "N")]
    samples: Option<usize>,
    /// Seed for `--samples`.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = dnasat::circuit::DEFAULT_QUBIT_LIMIT)]
    qubit_limit: usize,
    /// Print one line per DNA primitive to stderr (dna only).
    #[arg(long)]
    trace: bool,
    /// Write the final state, before post-selection, to a file (quantum only).
    #[arg(long, value_name = "PATH")]
    dump_state: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct DemoArgs {
    /// The two-variable three-clause example.
    #[arg(long = "eq1")]
    example: bool,
    /// The three-qubit circuit for `F = (u1)`.
    #[arg(long = "fig3")]
    minimal: bool,
    /// Uniform tube and `H^n |0>` over n variables.
    #[arg(long, value_name = "N")]
    superposition: Option<usize>,
}

#[derive(Debug)]
enum Failure {
    Input(anyhow::Error),
    Guard(anyhow::Error),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Guard(_) => EXIT_GUARD,
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Self {
        if e.is_guard() {
            Failure::Guard(e.into())
        } else {
            Failure::Input(e.into())
        }
    }
}

impl From<CircuitError> for Failure {
    fn from(e: CircuitError) -> Self {
        match e {
            CircuitError::QubitLimit { .. } => Failure::Guard(e.into()),
            other => Failure::Input(other.into()),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Solve(args) => cmd_solve(&args),
        Command::Compile { file, output } => cmd_compile(&file, &output),
        Command::Census { file, json } => cmd_census(&file, json),
        Command::CrossCheck { file, qubit_limit } => cmd_cross_check(&file, qubit_limit),
        Command::Demo(args) => cmd_demo(&args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(failure) => {
            let (Failure::Input(e) | Failure::Guard(e)) = &failure;
            eprintln!("error: {e:#}");
            ExitCode::from(failure.code())
        }
    }
}

fn load(path: &Path) -> Result<Formula, Failure> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let formula = parse_dimacs(&text).with_context(|| format!("parsing {}", path.display()))?;
    Ok(formula)
}

fn sat_code(report: &SolveReport) -> u8 {
    if report.is_sat() {
        EXIT_SAT
    } else {
        EXIT_UNSAT
    }
}

fn cmd_solve(args: &SolveArgs) -> CmdResult {
    if args.engine != Engine::Quantum && (args.samples.is_some() || args.dump_state.is_some()) {
        return Err(anyhow!("--samples and --dump-state need --engine quantum").into());
    }
    if args.engine != Engine::Dna && args.trace {
        return Err(anyhow!("--trace needs --engine dna").into());
    }
    let formula = load(&args.file)?;
    let options = SolveOptions {
        qubit_limit: args.qubit_limit,
        ..SolveOptions::default()
    };
    let report = match args.engine {
        Engine::Quantum if args.samples.is_some() || args.dump_state.is_some() => {
            solve_quantum_verbose(&formula, args, &options)?
        }
        Engine::Dna if args.trace => solve_dna_traced(&formula)?,
        engine => solve(&formula, engine, &options)?,
    };
    if args.json {
        println!("{}", report.to_json());
    } else {
        println!("{report}");
    }
    Ok(sat_code(&report))
}

fn solve_quantum_verbose(
    formula: &Formula,
    args: &SolveArgs,
    options: &SolveOptions,
) -> Result<SolveReport, Failure> {
    let start = Instant::now();
    let run = run_quantum(formula, options)?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;
    let qubits = run.circuit.qubit_count();
    let layout = run
        .circuit
        .layout()
        .expect("compiled circuits carry a layout");
    let entries = run.final_state.support(SUPPORT_TOLERANCE);
    if let Some(path) = &args.dump_state {
        fs::write(path, format_support(&entries, qubits))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(shots) = args.samples {
        let mut rng = StdRng::seed_from_u64(args.seed);
        eprintln!("{shots} samples of (u, c{}):", formula.m());
        for (index, count) in sample(&entries, shots, &mut rng) {
            let u: String = layout
                .read(index, Register::U)
                .iter()
                .map(|&b| if b { '1' } else { '0' })
                .collect();
            let out = (index >> layout.output()) & 1;
            eprintln!("  u={u} c{}={out}  {count}", formula.m());
        }
    }
    Ok(SolveReport {
        engine: Engine::Quantum,
        n: formula.n(),
        m: formula.m(),
        solutions: run.solutions(),
        census: Some(gate_census(&run.circuit)),
        selection_probability: Some(run.selection_probability()),
        elapsed_ms,
    })
}

fn solve_dna_traced(formula: &Formula) -> Result<SolveReport, Failure> {
    let start = Instant::now();
    let mut lab = Lab::new();
    let solutions = lab.lipton_solve(formula).map_err(|e| SolveError {
        engine: Engine::Dna,
        source: EngineFailure::Dna(e),
    })?;
    let elapsed_ms = start.elapsed().as_secs_f64() * 1000.0;
    for event in lab.trace() {
        eprintln!("{event}");
    }
    Ok(SolveReport {
        engine: Engine::Dna,
        n: formula.n(),
        m: formula.m(),
        solutions,
        census: None,
        selection_probability: None,
        elapsed_ms,
    })
}

fn cmd_compile(file: &Path, output: &Path) -> CmdResult {
    let circuit = compile_with_limit(&load(file)?, MAX_QUBITS)?;
    fs::write(output, circuit.to_text())
        .with_context(|| format!("writing {}", output.display()))?;
    eprintln!(
        "{} gates on {} qubits -> {}",
        circuit.len(),
        circuit.qubit_count(),
        output.display()
    );
    Ok(EXIT_SAT)
}

fn cmd_census(file: &Path, json: bool) -> CmdResult {
    let formula = load(file)?;
    let census = gate_census(&compile_with_limit(&formula, MAX_QUBITS)?);
    let bounds = check_bounds(&census, formula.n(), formula.m());
    if json {
        let value = serde_json::json!({ "census": census, "bounds": bounds });
        println!("{value}");
    } else {
        println!(
            "H={} X={} CNOT={} TOFFOLI={} PHASE={}  qubits={}",
            census.h, census.x, census.cnot, census.toffoli, census.phase, census.qubits
        );
        println!("{bounds}");
    }
    Ok(EXIT_SAT)
}

fn cmd_cross_check(file: &Path, qubit_limit: usize) -> CmdResult {
    let formula = load(file)?;
    let options = SolveOptions {
        qubit_limit,
        ..SolveOptions::default()
    };
    let check = cross_check(&formula, &options)?;
    println!("{check}");
    if !check.agree() {
        return Ok(EXIT_MISMATCH);
    }
    Ok(sat_code(check.report(Engine::Brute)))
}

fn cmd_demo(args: &DemoArgs) -> CmdResult {
    if args.example {
        demo_example()
    } else if args.minimal {
        demo_minimal()
    } else {
        demo_superposition(args.superposition.expect("clap requires one demo flag"))
    }
}

fn demo_example() -> CmdResult {
    let formula = paper_example_formula();
    let run = run_quantum(&formula, &SolveOptions::default())?;
    let layout = run
        .circuit
        .layout()
        .expect("compiled circuits carry a layout");
    let c = gate_census(&run.circuit);
    println!("F = {formula}");
    println!(
        "layout: ket order |u>|y>|r>|c>, {} qubits",
        layout.qubit_count()
    );
    println!(
        "initial: {}  (index {})",
        layout.ket(run.circuit.initial_index()),
        run.circuit.initial_index()
    );
    println!(
        "gates: H={} X={} CNOT={} TOFFOLI={}",
        c.h, c.x, c.cnot, c.toffoli
    );
    println!("final state:");
    for e in run.final_state.support(SUPPORT_TOLERANCE) {
        println!("  {:+.6}  {}", e.amplitude.re, layout.ket(e.index));
    }
    println!("P(c{} = 1) = {}", formula.m(), run.selection_probability());
    println!("after post-selection:");
    for e in run.selected_support() {
        println!("  {:+.6}  {}", e.amplitude.re, layout.ket(e.index));
    }
    let sols: Vec<String> = run.solutions().iter().map(ToString::to_string).collect();
    println!("solutions (u2 u1): {}", sols.join(", "));
    Ok(EXIT_SAT)
}

fn demo_minimal() -> CmdResult {
    let circuit = minimal_single_variable_circuit();
    println!("F = (u1); qubits c1=0, y1=1, u1=2");
    print!("{}", circuit.to_text());
    let state = run(&circuit).map_err(|e| anyhow!(e))?;
    println!("output (u1 y1 c1):");
    for e in state.support(SUPPORT_TOLERANCE) {
        println!("  {:+.16}  |{}>", e.amplitude.re, e.bitstring(3));
    }
    Ok(EXIT_SAT)
}

fn demo_superposition(n: usize) -> CmdResult {
    if n == 0 || n > TUBE_LIMIT {
        return Err(Failure::Guard(anyhow!(
            "n must be in 1..={TUBE_LIMIT}, got {n}"
        )));
    }
    let mut lab = Lab::new();
    let tube = lab.uniform_tube(n).map_err(|e| anyhow!(e))?;
    println!("uniform tube, {} primitives:", lab.trace().len());
    for (strand, count) in tube.tube().iter() {
        println!("  {strand}  x{count}");
    }
    let circuit = Circuit::new(n, (0..n).map(Gate::H).collect(), vec![false; n])?;
    let state = run(&circuit).map_err(|e| anyhow!(e))?;
    println!("H^{n} |0>:");
    for e in state.support(SUPPORT_TOLERANCE) {
        println!("  {:+.6}  |{}>", e.amplitude.re, e.bitstring(n));
    }
    Ok(EXIT_SAT)
}
