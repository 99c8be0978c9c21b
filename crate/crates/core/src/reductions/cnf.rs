use std::fmt;

use crate::format::FormatError;

use super::labels::Occurrence;
use super::ReductionError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    /// 1-based variable index.
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn new(var: usize, positive: bool) -> Self {
        Self { var, positive }
    }

    /// From a DIMACS literal: `3` is x₃, `-3` is ¬x₃.
    pub fn from_dimacs(lit: i64) -> Option<Self> {
        (lit != 0).then(|| Self::new(lit.unsigned_abs() as usize, lit > 0))
    }

    pub fn holds(&self, a: &Assignment) -> bool {
        a.value(self.var) == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "x{}", self.var)
        } else {
            write!(f, "-x{}", self.var)
        }
    }
}

/// Total truth assignment to variables `1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: Vec<bool>,
}

impl Assignment {
    pub fn new(values: Vec<bool>) -> Self {
        Self { values }
    }

    pub fn all_false(n: usize) -> Self {
        Self::new(vec![false; n])
    }

    pub fn variable_count(&self) -> usize {
        self.values.len()
    }

    /// Panics when `var` is outside `1..=n`.
    pub fn value(&self, var: usize) -> bool {
        self.values[var - 1]
    }

    pub fn set(&mut self, var: usize, value: bool) {
        self.values[var - 1] = value;
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }
}

impl fmt::Display for Assignment {
    /// DIMACS-style: `1 -2 3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &v) in self.values.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{}{}", if v { "" } else { "-" }, i + 1)?;
        }
        Ok(())
    }
}

/// A 3-CNF in the normal form the IP construction expects: every clause has
/// exactly three literal slots and none holds both polarities of a variable.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfFormula {
    variable_count: usize,
    clauses: Vec<[Literal; 3]>,
}

impl CnfFormula {
    pub fn new(variable_count: usize, clauses: Vec<[Literal; 3]>) -> Result<Self, ReductionError> {
        if clauses.is_empty() {
            return Err(ReductionError::NoClauses);
        }
        for (j, clause) in clauses.iter().enumerate() {
            for lit in clause {
                if lit.var == 0 || lit.var > variable_count {
                    return Err(ReductionError::VariableOutOfRange {
                        clause: j + 1,
                        var: lit.var,
                        n: variable_count,
                    });
                }
            }
            if is_tautology(clause) {
                return Err(ReductionError::NotNormalized { clause: j + 1 });
            }
        }
        Ok(Self {
            variable_count,
            clauses,
        })
    }

    pub fn variable_count(&self) -> usize {
        self.variable_count
    }

    pub fn clause_count(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[[Literal; 3]] {
        &self.clauses
    }

    /// Literal in a 1-based occurrence slot.
    pub fn literal(&self, occ: Occurrence) -> Literal {
        self.clauses[occ.clause - 1][occ.slot - 1]
    }

    /// Slots holding variable `var`, ascending by clause then slot. Each slot
    /// is its own occurrence, so a repeated literal occurs repeatedly.
    pub fn occurrences(&self, var: usize) -> Vec<Occurrence> {
        let mut out = Vec::new();
        for (j, clause) in self.clauses.iter().enumerate() {
            for (p, lit) in clause.iter().enumerate() {
                if lit.var == var {
                    out.push(Occurrence {
                        clause: j + 1,
                        slot: p + 1,
                    });
                }
            }
        }
        out
    }

    /// 1-based index of the first clause `a` falsifies.
    pub fn first_falsified(&self, a: &Assignment) -> Option<usize> {
        self.clauses
            .iter()
            .position(|c| !c.iter().any(|l| l.holds(a)))
            .map(|j| j + 1)
    }

    pub fn is_satisfied_by(&self, a: &Assignment) -> bool {
        a.variable_count() == self.variable_count && self.first_falsified(a).is_none()
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, c) in self.clauses.iter().enumerate() {
            if j > 0 {
                f.write_str(" & ")?;
            }
            write!(f, "({} | {} | {})", c[0], c[1], c[2])?;
        }
        Ok(())
    }
}

fn is_tautology(clause: &[Literal]) -> bool {
    clause
        .iter()
        .any(|a| clause.iter().any(|b| a.var == b.var && a.positive != b.positive))
}

/// A CNF as read from DIMACS, before normalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RawCnf {
    pub variable_count: usize,
    pub clauses: Vec<Vec<Literal>>,
}

/// Pads clauses to three slots by repeating their first literal and drops
/// tautologies.
pub fn normalize_cnf(raw: &RawCnf) -> Result<CnfFormula, ReductionError> {
    let mut clauses = Vec::with_capacity(raw.clauses.len());
    for (j, clause) in raw.clauses.iter().enumerate() {
        match clause.len() {
            0 => return Err(ReductionError::EmptyClause { clause: j + 1 }),
            1..=3 => {}
            len => return Err(ReductionError::ClauseTooLong { clause: j + 1, len }),
        }
        if is_tautology(clause) {
            continue;
        }
        let pad = |p: usize| clause.get(p).copied().unwrap_or(clause[0]);
        clauses.push([pad(0), pad(1), pad(2)]);
    }
    if clauses.is_empty() {
        return Err(ReductionError::TriviallySatisfiable);
    }
    CnfFormula::new(raw.variable_count, clauses)
}

/// DIMACS CNF: `c` comments, a `p cnf <n> <m>` header, then 0-terminated
/// clauses that may span lines. Clauses over three literals are rejected.
pub fn parse_dimacs(text: &str) -> Result<RawCnf, FormatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut current_start = 0;
    let mut last_line = 0;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        last_line = line_no;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(FormatError::new(line_no, "duplicate header"));
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parsed = match fields.as_slice() {
                ["p", "cnf", n, m] => n.parse().ok().zip(m.parse().ok()),
                _ => None,
            };
            header = Some(parsed.ok_or_else(|| FormatError::new(line_no, "expected `p cnf <vars> <clauses>`"))?);
            continue;
        }
        let Some((n, _)) = header else {
            return Err(FormatError::new(line_no, "clause before `p cnf` header"));
        };
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| FormatError::new(line_no, format!("bad literal `{tok}`")))?;
            if current.is_empty() {
                current_start = line_no;
            }
            match Literal::from_dimacs(lit) {
                None => {
                    if current.is_empty() {
                        return Err(FormatError::new(line_no, "empty clause"));
                    }
                    clauses.push(std::mem::take(&mut current));
                }
                Some(l) if l.var > n => {
                    return Err(FormatError::new(
                        line_no,
                        format!("variable {} exceeds declared count {n}", l.var),
                    ));
                }
                Some(l) => {
                    current.push(l);
                    if current.len() > 3 {
                        return Err(FormatError::new(
                            current_start,
                            "clause has more than 3 literals",
                        ));
                    }
                }
            }
        }
    }
    let Some((n, m)) = header else {
        return Err(FormatError::new(last_line.max(1), "missing `p cnf` header"));
    };
    if !current.is_empty() {
        return Err(FormatError::new(current_start, "clause not terminated by 0"));
    }
    if clauses.len() != m {
        return Err(FormatError::new(
            last_line.max(1),
            format!("header declares {m} clauses, found {}", clauses.len()),
        ));
    }
    Ok(RawCnf {
        variable_count: n,
        clauses,
    })
}

pub fn write_dimacs(f: &CnfFormula) -> String {
    let mut out = format!("p cnf {} {}\n", f.variable_count(), f.clause_count());
    for c in f.clauses() {
        for l in c {
            let v = l.var as i64;
            out.push_str(&format!("{} ", if l.positive { v } else { -v }));
        }
        out.push_str("0\n");
    }
    out
}
