use std::fmt::Write;

use super::{Clause, CnfError, Formula, Literal};

fn parse_err(line: usize, message: impl Into<String>) -> CnfError {
    CnfError::Parse {
        line,
        message: message.into(),
    }
}

/// Reads DIMACS CNF: `c` comment lines, a `p cnf <n> <m>` header, then
/// 0-terminated clauses of signed integers. Tokens may be separated by any
/// whitespace, and a clause may span lines. A line starting with `%` ends
/// the input (SATLIB convention).
pub fn parse_dimacs(text: &str) -> Result<Formula, CnfError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();
    let mut pending_line = 0;
    let mut last_line = 0;

    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        last_line = lineno;
        let trimmed = line.trim_start();
        if trimmed.is_empty() || trimmed.starts_with('c') {
            continue;
        }
        if trimmed.starts_with('%') {
            break;
        }
        if trimmed.starts_with('p') {
            if header.is_some() {
                return Err(parse_err(lineno, "duplicate problem line"));
            }
            let fields: Vec<&str> = trimmed.split_whitespace().collect();
            if fields.len() != 4 || fields[0] != "p" || fields[1] != "cnf" {
                return Err(parse_err(lineno, "expected `p cnf <variables> <clauses>`"));
            }
            let n = fields[2]
                .parse::<usize>()
                .map_err(|_| parse_err(lineno, format!("bad variable count `{}`", fields[2])))?;
            let m = fields[3]
                .parse::<usize>()
                .map_err(|_| parse_err(lineno, format!("bad clause count `{}`", fields[3])))?;
            header = Some((n, m));
            continue;
        }
        let Some((n, _)) = header else {
            return Err(parse_err(lineno, "clause data before the `p cnf` header"));
        };
        for token in trimmed.split_whitespace() {
            let value = token
                .parse::<i64>()
                .map_err(|_| parse_err(lineno, format!("bad literal `{token}`")))?;
            if value == 0 {
                if pending.is_empty() {
                    return Err(parse_err(lineno, "empty clause"));
                }
                let clause = Clause::new(std::mem::take(&mut pending))
                    .map_err(|e| parse_err(pending_line, e.to_string()))?;
                clauses.push(clause);
                continue;
            }
            if pending.is_empty() {
                pending_line = lineno;
            }
            let lit = Literal::from_dimacs(value).map_err(|e| parse_err(lineno, e.to_string()))?;
            if lit.variable() as usize > n {
                return Err(parse_err(
                    lineno,
                    format!("variable {} exceeds declared count {n}", lit.variable()),
                ));
            }
            pending.push(lit);
        }
    }

    let Some((n, m)) = header else {
        return Err(parse_err(last_line.max(1), "missing `p cnf` header"));
    };
    if !pending.is_empty() {
        return Err(parse_err(pending_line, "clause is not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(parse_err(
            last_line.max(1),
            format!(
                "header declares {m} clauses but {} were read",
                clauses.len()
            ),
        ));
    }
    Formula::new(n, clauses).map_err(|e| parse_err(last_line.max(1), e.to_string()))
}

/// Writes `formula` as DIMACS; [`parse_dimacs`] reads it back unchanged.
pub fn format_dimacs(formula: &Formula) -> String {
    let mut out = format!("p cnf {} {}\n", formula.n(), formula.m());
    for clause in formula.clauses() {
        for lit in clause.literals() {
            write!(out, "{} ", lit.to_dimacs()).expect("write to String");
        }
        out.push_str("0\n");
    }
    out
}
