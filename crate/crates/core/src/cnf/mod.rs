//! CNF formulas, classical evaluation and the brute-force oracle.
//!
//! Variables are 1-based (`u1 .. un`), matching DIMACS. An [`Assignment`]
//! stores them 0-based: position `i` holds the value of `u(i+1)`. When an
//! assignment is read as a binary number, `u1` is the least significant bit,
//! so the ket-style rendering `|u2 u1>` of `(u2 = 0, u1 = 1)` is `01`.

mod dimacs;

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dimacs::{format_dimacs, parse_dimacs};

/// Largest variable count [`brute_force_solutions`] will enumerate.
pub const ENUMERATION_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("variable index must be at least 1")]
    ZeroVariable,
    #[error("variable u{variable} exceeds the declared variable count {n}")]
    VariableOutOfRange { variable: u32, n: usize },
    #[error("empty clause")]
    EmptyClause,
    #[error("variable u{0} appears more than once in a clause")]
    DuplicateVariable(u32),
    #[error("formula has no clauses")]
    NoClauses,
    #[error("formula has no variables")]
    NoVariables,
    #[error("assignment has {got} bits but the formula has {expected} variables")]
    AssignmentLength { expected: usize, got: usize },
    #[error("{n} variables exceeds the enumeration limit of {limit}")]
    EnumerationLimit { n: usize, limit: usize },
}

/// A possibly negated occurrence of a variable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    variable: u32,
    negated: bool,
}

impl Literal {
    pub fn new(variable: u32, negated: bool) -> Result<Self, CnfError> {
        if variable == 0 {
            return Err(CnfError::ZeroVariable);
        }
        Ok(Literal { variable, negated })
    }

    pub fn positive(variable: u32) -> Result<Self, CnfError> {
        Self::new(variable, false)
    }

    pub fn negative(variable: u32) -> Result<Self, CnfError> {
        Self::new(variable, true)
    }

    /// Builds a literal from a signed DIMACS integer.
    pub fn from_dimacs(value: i64) -> Result<Self, CnfError> {
        let variable =
            u32::try_from(value.unsigned_abs()).map_err(|_| CnfError::VariableOutOfRange {
                variable: u32::MAX,
                n: 0,
            })?;
        Self::new(variable, value < 0)
    }

    pub fn variable(self) -> u32 {
        self.variable
    }

    pub fn is_negated(self) -> bool {
        self.negated
    }

    /// 0-based position of the variable inside an [`Assignment`].
    pub fn index(self) -> usize {
        self.variable as usize - 1
    }

    pub fn to_dimacs(self) -> i64 {
        let v = i64::from(self.variable);
        if self.negated {
            -v
        } else {
            v
        }
    }

    /// The truth value this literal takes when its variable has `value`.
    pub fn holds_for(self, value: bool) -> bool {
        value != self.negated
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "!u{}", self.variable)
        } else {
            write!(f, "u{}", self.variable)
        }
    }
}

/// A non-empty disjunction of literals over distinct variables.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    literals: Vec<Literal>,
}

impl Clause {
    /// Rejects empty clauses and any repeated variable, including
    /// tautological pairs such as `u1 | !u1`.
    pub fn new(literals: Vec<Literal>) -> Result<Self, CnfError> {
        if literals.is_empty() {
            return Err(CnfError::EmptyClause);
        }
        let mut seen = BTreeSet::new();
        for lit in &literals {
            if !seen.insert(lit.variable) {
                return Err(CnfError::DuplicateVariable(lit.variable));
            }
        }
        Ok(Clause { literals })
    }

    /// Convenience constructor from signed DIMACS integers.
    pub fn from_dimacs(values: &[i64]) -> Result<Self, CnfError> {
        let literals = values
            .iter()
            .map(|&v| Literal::from_dimacs(v))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(literals)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.literals
    }

    pub fn len(&self) -> usize {
        self.literals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.literals.is_empty()
    }

    pub fn max_variable(&self) -> u32 {
        self.literals.iter().map(|l| l.variable).max().unwrap_or(0)
    }

    pub fn is_satisfied_by(&self, assignment: &Assignment) -> bool {
        self.literals
            .iter()
            .any(|lit| lit.holds_for(assignment.value(lit.variable)))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, lit) in self.literals.iter().enumerate() {
            if i > 0 {
                write!(f, " | ")?;
            }
            write!(f, "{lit}")?;
        }
        write!(f, ")")
    }
}

/// A CNF instance over variables `u1 .. un`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Formula {
    n: usize,
    clauses: Vec<Clause>,
}

impl Formula {
    pub fn new(n: usize, clauses: Vec<Clause>) -> Result<Self, CnfError> {
        if n == 0 {
            return Err(CnfError::NoVariables);
        }
        if clauses.is_empty() {
            return Err(CnfError::NoClauses);
        }
        for clause in &clauses {
            let variable = clause.max_variable();
            if variable as usize > n {
                return Err(CnfError::VariableOutOfRange { variable, n });
            }
        }
        Ok(Formula { n, clauses })
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of clauses.
    pub fn m(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    /// Total literal occurrences, the sum of clause widths.
    pub fn literal_count(&self) -> usize {
        self.clauses.iter().map(Clause::len).sum()
    }

    /// Same formula with clause `index` removed, or `None` if that would
    /// leave no clauses.
    pub fn without_clause(&self, index: usize) -> Option<Formula> {
        if self.clauses.len() <= 1 || index >= self.clauses.len() {
            return None;
        }
        let mut clauses = self.clauses.clone();
        clauses.remove(index);
        Some(Formula { n: self.n, clauses })
    }

    /// Draws a formula with exactly `n` variables and `m` clauses. Clause
    /// widths are uniform in `1..=min(n, max_width)`, variables distinct
    /// within a clause, signs uniform.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, n: usize, m: usize, max_width: usize) -> Formula {
        assert!(n >= 1 && m >= 1 && max_width >= 1);
        let width_cap = n.min(max_width);
        let clauses = (0..m)
            .map(|_| {
                let width = rng.gen_range(1..=width_cap);
                let vars = rand::seq::index::sample(rng, n, width);
                let literals = vars
                    .iter()
                    .map(|v| Literal {
                        variable: v as u32 + 1,
                        negated: rng.gen_bool(0.5),
                    })
                    .collect();
                Clause { literals }
            })
            .collect();
        Formula { n, clauses }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, clause) in self.clauses.iter().enumerate() {
            if i > 0 {
                write!(f, " & ")?;
            }
            write!(f, "{clause}")?;
        }
        Ok(())
    }
}

/// Truth values for `u1 .. un`, stored 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Assignment {
    bits: Vec<bool>,
}

impl Assignment {
    pub fn new(bits: Vec<bool>) -> Self {
        Assignment { bits }
    }

    /// Decodes `index` as a binary number with `u1` as bit 0.
    pub fn from_index(index: u64, n: usize) -> Self {
        Assignment {
            bits: (0..n).map(|i| (index >> i) & 1 == 1).collect(),
        }
    }

    /// Builds an assignment from values written in ket order
    /// `(un, .., u2, u1)`.
    pub fn from_ket_order(values: &[bool]) -> Self {
        Assignment {
            bits: values.iter().rev().copied().collect(),
        }
    }

    pub fn to_index(&self) -> u64 {
        self.bits
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &b)| acc | (u64::from(b) << i))
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    /// Value of the 1-based variable `u{variable}`.
    pub fn value(&self, variable: u32) -> bool {
        self.bits[variable as usize - 1]
    }
}

/// Renders in ket order, most significant variable first: `(u2=0, u1=1)`
/// prints as `01`.
impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in self.bits.iter().rev() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for Assignment {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.bits.len()))?;
        for &b in &self.bits {
            seq.serialize_element(&u8::from(b))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for Assignment {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct BitsVisitor;

        impl<'de> Visitor<'de> for BitsVisitor {
            type Value = Assignment;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("a sequence of 0/1 bits")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Assignment, A::Error> {
                let mut bits = Vec::new();
                while let Some(bit) = seq.next_element::<u8>()? {
                    match bit {
                        0 => bits.push(false),
                        1 => bits.push(true),
                        other => {
                            return Err(de::Error::invalid_value(
                                de::Unexpected::Unsigned(u64::from(other)),
                                &"0 or 1",
                            ))
                        }
                    }
                }
                Ok(Assignment { bits })
            }
        }

        deserializer.deserialize_seq(BitsVisitor)
    }
}

/// True iff every clause has a literal satisfied by `assignment`.
pub fn eval(formula: &Formula, assignment: &Assignment) -> Result<bool, CnfError> {
    if assignment.len() != formula.n {
        return Err(CnfError::AssignmentLength {
            expected: formula.n,
            got: assignment.len(),
        });
    }
    Ok(formula
        .clauses
        .iter()
        .all(|clause| clause.is_satisfied_by(assignment)))
}

/// Every satisfying assignment, in ascending binary order (`u1` least
/// significant).
pub fn brute_force_solutions(formula: &Formula) -> Result<Vec<Assignment>, CnfError> {
    if formula.n > ENUMERATION_LIMIT {
        return Err(CnfError::EnumerationLimit {
            n: formula.n,
            limit: ENUMERATION_LIMIT,
        });
    }
    let mut solutions = Vec::new();
    for index in 0..(1u64 << formula.n) {
        let assignment = Assignment::from_index(index, formula.n);
        if eval(formula, &assignment)? {
            solutions.push(assignment);
        }
    }
    Ok(solutions)
}

/// `F = (u2 | u1) & (!u2 | !u1) & (u1)`, the worked two-variable example.
pub fn paper_example_formula() -> Formula {
    let clauses = [&[2, 1][..], &[-2, -1], &[1]]
        .iter()
        .map(|c| Clause::from_dimacs(c).expect("static clause"))
        .collect();
    Formula::new(2, clauses).expect("static formula")
}

/// `F = (u1)`, the one-clause, one-variable instance.
pub fn single_variable_formula() -> Formula {
    Formula::new(1, vec![Clause::from_dimacs(&[1]).expect("static clause")])
        .expect("static formula")
}
