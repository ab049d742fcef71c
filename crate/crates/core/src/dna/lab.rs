use std::fmt;

use super::{DnaError, Strand, Symbol, Tube};
use crate::cnf::{Assignment, Formula};

/// Largest variable count [`lipton_solve`] and [`uniform_tube`] accept.
pub const TUBE_LIMIT: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TubeId(pub u32);

impl fmt::Display for TubeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Primitive {
    AppendHead,
    AppendTail,
    Extract,
    Discard,
    Amplify,
    Merge,
    Detect,
    Read,
}

impl Primitive {
    pub fn name(self) -> &'static str {
        match self {
            Primitive::AppendHead => "APPEND_HEAD",
            Primitive::AppendTail => "APPEND_TAIL",
            Primitive::Extract => "EXTRACT",
            Primitive::Discard => "DISCARD",
            Primitive::Amplify => "AMPLIFY",
            Primitive::Merge => "MERGE",
            Primitive::Detect => "DETECT",
            Primitive::Read => "READ",
        }
    }
}

/// One executed primitive. `molecules` counts the output tubes, or the
/// inspected tube for Detect and Read.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceEvent {
    pub op: Primitive,
    pub inputs: Vec<TubeId>,
    pub outputs: Vec<TubeId>,
    pub molecules: u64,
}

fn id_list(ids: &[TubeId]) -> String {
    if ids.is_empty() {
        return "-".to_string();
    }
    ids.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

/// `OP_NAME in=<ids> out=<ids> count=<molecules>`
impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} in={} out={} count={}",
            self.op.name(),
            id_list(&self.inputs),
            id_list(&self.outputs),
            self.molecules
        )
    }
}

/// A tube on the bench. Not `Clone`: the only way to get two is Amplify.
#[derive(Debug, PartialEq, Eq)]
pub struct LabTube {
    id: TubeId,
    tube: Tube,
}

impl LabTube {
    pub fn id(&self) -> TubeId {
        self.id
    }

    pub fn tube(&self) -> &Tube {
        &self.tube
    }

    pub fn into_tube(self) -> Tube {
        self.tube
    }
}

/// Runs primitives on labelled tubes and records every step.
#[derive(Debug, Default)]
pub struct Lab {
    next_id: u32,
    trace: Vec<TraceEvent>,
}

impl Lab {
    pub fn new() -> Self {
        Lab::default()
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    pub fn take_trace(&mut self) -> Vec<TraceEvent> {
        std::mem::take(&mut self.trace)
    }

    fn label(&mut self, tube: Tube) -> LabTube {
        let id = TubeId(self.next_id);
        self.next_id += 1;
        LabTube { id, tube }
    }

    fn record(&mut self, op: Primitive, inputs: Vec<TubeId>, outputs: &[&LabTube]) {
        let molecules = outputs.iter().map(|t| t.tube.molecule_count()).sum();
        self.trace.push(TraceEvent {
            op,
            inputs,
            outputs: outputs.iter().map(|t| t.id).collect(),
            molecules,
        });
    }

    /// Places an existing tube on the bench. Not a primitive; untraced.
    pub fn load(&mut self, tube: Tube) -> LabTube {
        self.label(tube)
    }

    /// The starting tube `{e}`. Not a primitive; untraced.
    pub fn seed(&mut self) -> LabTube {
        self.label(Tube::seed())
    }

    pub fn append_head(&mut self, t: LabTube, symbol: Symbol) -> Result<LabTube, DnaError> {
        let input = t.id;
        let out = self.label(t.tube.append_head(symbol)?);
        self.record(Primitive::AppendHead, vec![input], &[&out]);
        Ok(out)
    }

    pub fn append_tail(&mut self, t: LabTube, symbol: Symbol) -> Result<LabTube, DnaError> {
        let input = t.id;
        let out = self.label(t.tube.append_tail(symbol)?);
        self.record(Primitive::AppendTail, vec![input], &[&out]);
        Ok(out)
    }

    pub fn extract(&mut self, t: LabTube, variable: u32, bit: bool) -> (LabTube, LabTube) {
        let input = t.id;
        let (plus, minus) = t.tube.extract(variable, bit);
        let plus = self.label(plus);
        let minus = self.label(minus);
        self.record(Primitive::Extract, vec![input], &[&plus, &minus]);
        (plus, minus)
    }

    pub fn discard(&mut self, t: LabTube) -> LabTube {
        let input = t.id;
        let out = self.label(t.tube.discard());
        self.record(Primitive::Discard, vec![input], &[&out]);
        out
    }

    pub fn amplify(&mut self, t: LabTube) -> (LabTube, LabTube) {
        let input = t.id;
        let (a, b) = t.tube.amplify();
        let a = self.label(a);
        let b = self.label(b);
        self.record(Primitive::Amplify, vec![input], &[&a, &b]);
        (a, b)
    }

    pub fn merge(&mut self, tubes: Vec<LabTube>) -> LabTube {
        let inputs = tubes.iter().map(|t| t.id).collect();
        let out = self.label(Tube::merge(tubes.into_iter().map(|t| t.tube)));
        self.record(Primitive::Merge, inputs, &[&out]);
        out
    }

    fn record_inspection(&mut self, op: Primitive, t: &LabTube) {
        self.trace.push(TraceEvent {
            op,
            inputs: vec![t.id],
            outputs: Vec::new(),
            molecules: t.tube.molecule_count(),
        });
    }

    pub fn detect(&mut self, t: &LabTube) -> bool {
        self.record_inspection(Primitive::Detect, t);
        t.tube.detect()
    }

    pub fn read(&mut self, t: &LabTube) -> Result<Strand, DnaError> {
        self.record_inspection(Primitive::Read, t);
        t.tube.read()
    }

    /// Every `n`-bit strand exactly once, built from `{e}` by repeating
    /// Amplify, Append-Tail of `uk=0` / `uk=1`, and Merge for
    /// `k = n, .., 1`, so strands read `un .. u1` head to tail.
    pub fn uniform_tube(&mut self, n: usize) -> Result<LabTube, DnaError> {
        if n == 0 {
            return Err(DnaError::NoVariables);
        }
        if n > TUBE_LIMIT {
            return Err(DnaError::TubeLimit {
                n,
                limit: TUBE_LIMIT,
            });
        }
        let mut tube = self.seed();
        for variable in (1..=n as u32).rev() {
            let (zero, one) = self.amplify(tube);
            let zero = self.append_tail(zero, Symbol::new(variable, false))?;
            let one = self.append_tail(one, Symbol::new(variable, true))?;
            tube = self.merge(vec![zero, one]);
        }
        Ok(tube)
    }

    /// Lipton-style filter. Starting from the uniform tube, each clause
    /// pulls out the strands satisfying its first literal, then from the
    /// remainder those satisfying the second, and so on; the extracted
    /// tubes are merged and the remainder discarded. Survivors are then
    /// read one at a time: read a strand, isolate its copies by extracting
    /// on each of its bits, and pour everything else back.
    pub fn lipton_solve(&mut self, formula: &Formula) -> Result<Vec<Assignment>, DnaError> {
        let n = formula.n();
        let mut tube = self.uniform_tube(n)?;
        for clause in formula.clauses() {
            let mut kept = Vec::with_capacity(clause.len());
            for lit in clause.literals() {
                let (plus, minus) = self.extract(tube, lit.variable(), !lit.is_negated());
                kept.push(plus);
                tube = minus;
            }
            self.discard(tube);
            tube = self.merge(kept);
        }

        let mut solutions = Vec::new();
        while self.detect(&tube) {
            let strand = self.read(&tube)?;
            let mut rest = Vec::with_capacity(strand.len());
            let mut copies = tube;
            for symbol in strand.symbols() {
                let (plus, minus) = self.extract(copies, symbol.variable, symbol.bit);
                rest.push(minus);
                copies = plus;
            }
            self.discard(copies);
            tube = self.merge(rest);
            let bits = (1..=n as u32)
                .map(|v| strand.bit(v).expect("uniform strands carry every variable"))
                .collect();
            solutions.push(Assignment::new(bits));
        }
        solutions.sort_by_key(Assignment::to_index);
        Ok(solutions)
    }
}

/// [`Lab::uniform_tube`] without keeping the trace.
pub fn uniform_tube(n: usize) -> Result<Tube, DnaError> {
    Ok(Lab::new().uniform_tube(n)?.into_tube())
}

/// [`Lab::lipton_solve`] without keeping the trace. Solutions come back in
/// ascending binary order, like [`crate::cnf::brute_force_solutions`].
pub fn lipton_solve(formula: &Formula) -> Result<Vec<Assignment>, DnaError> {
    if formula.n() > TUBE_LIMIT {
        return Err(DnaError::TubeLimit {
            n: formula.n(),
            limit: TUBE_LIMIT,
        });
    }
    Lab::new().lipton_solve(formula)
}
