//! Ideal DNA computation as exact multiset algebra.
//!
//! A [`Strand`] is an ordered run of `(variable, bit)` symbols, head first.
//! A [`Tube`] is a multiset of strands with exact integer counts. Every
//! primitive consumes the tubes it is given and returns fresh ones, the way
//! a physical tube is used up when its contents are poured elsewhere.
//!
//! Quantum counterparts: appending a symbol is a tensor product with one
//! more qubit, `extract` on a variable corresponds to reading that qubit
//! into an ancilla with a CNOT and conditioning on it, and
//! [`uniform_tube`] built from `{e}` by Amplify/Append-Tail/Merge is the
//! strand image of `H|0> (x) .. (x) H|0>`.

mod lab;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

pub use lab::{
    lipton_solve, uniform_tube, Lab, LabTube, Primitive, TraceEvent, TubeId, TUBE_LIMIT,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DnaError {
    #[error("a strand in the tube already carries variable u{0}")]
    VariableCollision(u32),
    #[error("cannot read from an empty tube")]
    EmptyTube,
    #[error("uniform tube needs at least one variable")]
    NoVariables,
    #[error("{n} variables exceeds the tube limit of {limit}")]
    TubeLimit { n: usize, limit: usize },
    #[error("molecule count overflow")]
    Overflow,
}

/// One `(variable, bit)` unit of a strand, written `u3=1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    pub variable: u32,
    pub bit: bool,
}

impl Symbol {
    pub fn new(variable: u32, bit: bool) -> Self {
        Symbol { variable, bit }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "u{}={}", self.variable, u8::from(self.bit))
    }
}

/// Symbols in construction order, head first. Variables are distinct.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Strand {
    symbols: Vec<Symbol>,
}

impl Strand {
    /// The empty strand `e`.
    pub fn empty() -> Self {
        Strand::default()
    }

    /// Builds a strand from symbols, head first. Returns `None` if a
    /// variable repeats.
    pub fn from_symbols(symbols: Vec<Symbol>) -> Option<Self> {
        let mut vars: Vec<u32> = symbols.iter().map(|s| s.variable).collect();
        vars.sort_unstable();
        if vars.windows(2).any(|w| w[0] == w[1]) {
            return None;
        }
        Some(Strand { symbols })
    }

    /// Strand over `un .. u1` (head to tail) from a ket-order bit string
    /// such as `"01"`, meaning `u2=0, u1=1`.
    pub fn from_bits(bits: &str) -> Option<Self> {
        let n = bits.len() as u32;
        let symbols = bits
            .chars()
            .enumerate()
            .map(|(i, c)| match c {
                '0' => Some(Symbol::new(n - i as u32, false)),
                '1' => Some(Symbol::new(n - i as u32, true)),
                _ => None,
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Strand { symbols })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn bit(&self, variable: u32) -> Option<bool> {
        self.symbols
            .iter()
            .find(|s| s.variable == variable)
            .map(|s| s.bit)
    }

    pub fn contains_variable(&self, variable: u32) -> bool {
        self.bit(variable).is_some()
    }

    /// Bits ordered by descending variable index, independent of
    /// construction order. This is the key `read` minimises over.
    pub fn sorted_bits(&self) -> Vec<(u32, bool)> {
        let mut bits: Vec<(u32, bool)> = self.symbols.iter().map(|s| (s.variable, s.bit)).collect();
        bits.sort_by_key(|&(v, _)| std::cmp::Reverse(v));
        bits
    }

    /// Ket-order bit string, e.g. `"01"` for `u2=0, u1=1`.
    pub fn bit_string(&self) -> String {
        self.sorted_bits()
            .iter()
            .map(|&(_, b)| if b { '1' } else { '0' })
            .collect()
    }
}

impl fmt::Display for Strand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.symbols.is_empty() {
            return f.write_str("e");
        }
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// A multiset of strands with exact molecule counts.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Tube {
    contents: BTreeMap<Strand, u64>,
    molecules: u64,
}

impl Tube {
    /// An empty tube.
    pub fn new() -> Self {
        Tube::default()
    }

    /// `{e}`: one molecule of the empty strand.
    pub fn seed() -> Self {
        Tube::new().with(Strand::empty(), 1)
    }

    /// Adds `count` copies of `strand`. Zero counts are ignored.
    pub fn with(mut self, strand: Strand, count: u64) -> Self {
        self.insert(strand, count);
        self
    }

    fn insert(&mut self, strand: Strand, count: u64) {
        if count == 0 {
            return;
        }
        *self.contents.entry(strand).or_insert(0) += count;
        self.molecules += count;
    }

    pub fn molecule_count(&self) -> u64 {
        self.molecules
    }

    pub fn distinct_count(&self) -> usize {
        self.contents.len()
    }

    pub fn count(&self, strand: &Strand) -> u64 {
        self.contents.get(strand).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Strand, u64)> {
        self.contents.iter().map(|(s, &c)| (s, c))
    }

    fn append(self, symbol: Symbol, at_head: bool) -> Result<Tube, DnaError> {
        if self
            .contents
            .keys()
            .any(|s| s.contains_variable(symbol.variable))
        {
            return Err(DnaError::VariableCollision(symbol.variable));
        }
        let contents = self
            .contents
            .into_iter()
            .map(|(mut strand, count)| {
                if at_head {
                    strand.symbols.insert(0, symbol);
                } else {
                    strand.symbols.push(symbol);
                }
                (strand, count)
            })
            .collect();
        Ok(Tube {
            contents,
            molecules: self.molecules,
        })
    }

    /// Append-Head: prefixes `symbol` to every strand.
    pub fn append_head(self, symbol: Symbol) -> Result<Tube, DnaError> {
        self.append(symbol, true)
    }

    /// Append-Tail: suffixes `symbol` to every strand.
    pub fn append_tail(self, symbol: Symbol) -> Result<Tube, DnaError> {
        self.append(symbol, false)
    }

    /// Splits into `(plus, minus)`: `plus` holds strands whose `variable`
    /// equals `bit`, `minus` everything else, including strands that lack
    /// the variable.
    pub fn extract(self, variable: u32, bit: bool) -> (Tube, Tube) {
        let mut plus = Tube::new();
        let mut minus = Tube::new();
        for (strand, count) in self.contents {
            if strand.bit(variable) == Some(bit) {
                plus.insert(strand, count);
            } else {
                minus.insert(strand, count);
            }
        }
        (plus, minus)
    }

    /// Empties the tube.
    pub fn discard(self) -> Tube {
        Tube::new()
    }

    /// Two copies of the contents; the original is used up.
    pub fn amplify(self) -> (Tube, Tube) {
        (self.clone(), self)
    }

    /// Multiset union of all `tubes`; counts add.
    pub fn merge<I: IntoIterator<Item = Tube>>(tubes: I) -> Tube {
        let mut iter = tubes.into_iter();
        let Some(mut out) = iter.next() else {
            return Tube::new();
        };
        for tube in iter {
            for (strand, count) in tube.contents {
                out.insert(strand, count);
            }
        }
        out
    }

    /// YES iff the tube holds at least one molecule.
    pub fn detect(&self) -> bool {
        self.molecules > 0
    }

    /// One strand from the tube: the smallest by [`Strand::sorted_bits`].
    pub fn read(&self) -> Result<Strand, DnaError> {
        self.contents
            .keys()
            .min_by(|a, b| a.sorted_bits().cmp(&b.sorted_bits()).then_with(|| a.cmp(b)))
            .cloned()
            .ok_or(DnaError::EmptyTube)
    }
}

impl fmt::Display for Tube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (strand, count)) in self.contents.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{strand}:{count}")?;
        }
        f.write_str("}")
    }
}
