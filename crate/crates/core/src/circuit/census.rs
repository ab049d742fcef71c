use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Circuit, Gate};

/// Gate counts by kind plus the qubit count.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateCensus {
    #[serde(rename = "H")]
    pub h: usize,
    #[serde(rename = "X")]
    pub x: usize,
    #[serde(rename = "CNOT")]
    pub cnot: usize,
    #[serde(rename = "TOFFOLI")]
    pub toffoli: usize,
    #[serde(rename = "PHASE")]
    pub phase: usize,
    pub qubits: usize,
}

impl GateCensus {
    pub fn total(&self) -> usize {
        self.h + self.x + self.cnot + self.toffoli + self.phase
    }
}

pub fn gate_census(circuit: &Circuit) -> GateCensus {
    let mut census = GateCensus {
        qubits: circuit.qubit_count(),
        ..GateCensus::default()
    };
    for gate in circuit.gates() {
        match gate {
            Gate::H(_) => census.h += 1,
            Gate::X(_) => census.x += 1,
            Gate::Cnot { .. } => census.cnot += 1,
            Gate::Toffoli { .. } => census.toffoli += 1,
            Gate::Phase { .. } => census.phase += 1,
        }
    }
    census
}

/// Constants of the gate-count envelopes for compiled circuits.
///
/// With `w` the width of a clause and `sum w <= m n`, the compiler emits
/// per clause at most `4w + 2 <= 6w` X gates, `6w + 2 <= 8w` CNOTs and
/// `max(1, 4w - 5) <= 4w` Toffolis, which gives the defaults below.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundConstants {
    /// `X <= x_per_mn * m * n`
    pub x_per_mn: usize,
    /// `CNOT <= cnot_per_mn * m * n + cnot_offset`
    pub cnot_per_mn: usize,
    pub cnot_offset: usize,
    /// `TOFFOLI <= toffoli_per_mn_m * (m * n + m)`
    pub toffoli_per_mn_m: usize,
}

impl Default for BoundConstants {
    fn default() -> Self {
        BoundConstants {
            x_per_mn: 6,
            cnot_per_mn: 8,
            cnot_offset: 0,
            toffoli_per_mn_m: 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub name: String,
    pub measured: usize,
    pub bound: usize,
    /// `measured` must equal `bound` rather than stay below it.
    pub exact: bool,
    pub pass: bool,
}

impl BoundCheck {
    fn new(name: &str, measured: usize, bound: usize, exact: bool) -> Self {
        let pass = if exact {
            measured == bound
        } else {
            measured <= bound
        };
        BoundCheck {
            name: name.to_string(),
            measured,
            bound,
            exact,
            pass,
        }
    }

    /// `measured / bound`, or 0 when the bound is 0.
    pub fn ratio(&self) -> f64 {
        if self.bound == 0 {
            0.0
        } else {
            self.measured as f64 / self.bound as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub n: usize,
    pub m: usize,
    pub constants: BoundConstants,
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn check(&self, name: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "bounds for n={} m={}", self.n, self.m)?;
        for c in &self.checks {
            let rel = if c.exact { "==" } else { "<=" };
            writeln!(
                f,
                "  {:<8} {:>6} {rel} {:<6} ratio {:.3}  {}",
                c.name,
                c.measured,
                c.bound,
                c.ratio(),
                if c.pass { "ok" } else { "VIOLATED" }
            )?;
        }
        let k = &self.constants;
        write!(
            f,
            "  constants: X <= {}mn, CNOT <= {}mn + {}, TOFFOLI <= {}(mn + m)",
            k.x_per_mn, k.cnot_per_mn, k.cnot_offset, k.toffoli_per_mn_m
        )
    }
}

/// Checks `census` against the envelopes with the default constants:
/// `H == n`, `X <= 6mn`, `CNOT <= 8mn`, `TOFFOLI <= 4(mn + m)` and
/// `qubits == 3n + m + 2`.
pub fn check_bounds(census: &GateCensus, n: usize, m: usize) -> BoundReport {
    check_bounds_with(census, n, m, BoundConstants::default())
}

pub fn check_bounds_with(
    census: &GateCensus,
    n: usize,
    m: usize,
    k: BoundConstants,
) -> BoundReport {
    let mn = m * n;
    let checks = vec![
        BoundCheck::new("H", census.h, n, true),
        BoundCheck::new("X", census.x, k.x_per_mn * mn, false),
        BoundCheck::new(
            "CNOT",
            census.cnot,
            k.cnot_per_mn * mn + k.cnot_offset,
            false,
        ),
        BoundCheck::new(
            "TOFFOLI",
            census.toffoli,
            k.toffoli_per_mn_m * (mn + m),
            false,
        ),
        BoundCheck::new("qubits", census.qubits, 3 * n + m + 2, true),
    ];
    BoundReport {
        n,
        m,
        constants: k,
        checks,
    }
}
