//! SAT evaluation on two simulated machines that follow the same recipe.
//!
//! * [`dna`]: tubes of strands manipulated by Append, Extract, Discard,
//!   Amplify, Merge, Detect and Read, solving CNF by Lipton-style filtering.
//! * [`circuit`] + [`sim`]: the same filtering as a reversible circuit over
//!   four registers (`u`, `y`, `r`, `c`), run on a state-vector simulator
//!   and post-selected on the final AND qubit.
//! * [`cnf`]: formulas, DIMACS I/O and the brute-force oracle both are
//!   checked against.
//! * [`solver`]: runs the engines, reports, and cross-checks.
//!
//! ```
//! use dnasat::cnf::paper_example_formula;
//! use dnasat::solver::{solve, Engine, SolveOptions};
//!
//! let report = solve(&paper_example_formula(), Engine::Quantum, &SolveOptions::default()).unwrap();
//! assert_eq!(report.solutions[0].to_string(), "01"); // u2 = 0, u1 = 1
//! assert!((report.selection_probability.unwrap() - 0.25).abs() < 1e-12);
//! ```

pub mod circuit;
pub mod cnf;
pub mod dna;
pub mod sim;
pub mod solver;

// The book's Rust snippets run as doctests of this crate.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/formulas.md")]
    mod formulas {}
    #[doc = include_str!("../../../book/src/tubes.md")]
    mod tubes {}
    #[doc = include_str!("../../../book/src/circuits.md")]
    mod circuits {}
    #[doc = include_str!("../../../book/src/simulation.md")]
    mod simulation {}
    #[doc = include_str!("../../../book/src/resources.md")]
    mod resources {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
