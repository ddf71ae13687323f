//! Clause databases and DIMACS CNF text.

use std::fmt::Write as _;
use std::io::{self, Write};

use thiserror::Error;

/// A DIMACS literal: `v` for the positive and `-v` for the negative phase of variable `v >= 1`.
pub type Lit = i32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CnfError {
    #[error("empty clause")]
    EmptyClause,
    #[error("literal {lit} references an undeclared variable (var count {var_count})")]
    UndeclaredVariable { lit: Lit, var_count: u32 },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// A clause list over variables `1..=var_count`.
///
/// Variables below `aux_var_base` are primary (matrix cells); the rest were
/// introduced by encodings such as sequential counters.
#[derive(Debug, Clone, Default)]
pub struct CnfFormula {
    var_count: u32,
    aux_var_base: u32,
    clauses: Vec<Vec<Lit>>,
}

impl PartialEq for CnfFormula {
    fn eq(&self, other: &Self) -> bool {
        self.var_count == other.var_count && self.clauses == other.clauses
    }
}

impl Eq for CnfFormula {}

impl CnfFormula {
    /// A formula with `primary` declared variables and no clauses.
    pub fn new(primary: u32) -> Self {
        CnfFormula { var_count: primary, aux_var_base: primary + 1, clauses: Vec::new() }
    }

    pub fn var_count(&self) -> u32 {
        self.var_count
    }

    pub fn aux_var_base(&self) -> u32 {
        self.aux_var_base
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Declares a new auxiliary variable and returns it.
    pub fn fresh_var(&mut self) -> u32 {
        self.var_count += 1;
        self.var_count
    }

    /// Makes sure variables up to `var` are declared.
    pub fn declare_up_to(&mut self, var: u32) {
        self.var_count = self.var_count.max(var);
    }

    /// Adds a clause after removing repeated literals.
    ///
    /// Returns `Ok(false)` when the clause is a tautology and was dropped.
    pub fn add_clause<I: IntoIterator<Item = Lit>>(&mut self, lits: I) -> Result<bool, CnfError> {
        let mut clause: Vec<Lit> = Vec::new();
        for lit in lits {
            if lit == 0 || lit.unsigned_abs() > self.var_count {
                return Err(CnfError::UndeclaredVariable { lit, var_count: self.var_count });
            }
            if clause.contains(&-lit) {
                return Ok(false);
            }
            if !clause.contains(&lit) {
                clause.push(lit);
            }
        }
        if clause.is_empty() {
            return Err(CnfError::EmptyClause);
        }
        self.clauses.push(clause);
        Ok(true)
    }

    /// Adds every clause of `clauses`, declaring any variables they mention.
    pub fn extend_clauses<I>(&mut self, clauses: I) -> Result<usize, CnfError>
    where
        I: IntoIterator<Item = Vec<Lit>>,
    {
        let mut added = 0;
        for clause in clauses {
            if let Some(max) = clause.iter().map(|l| l.unsigned_abs()).max() {
                self.declare_up_to(max);
            }
            if self.add_clause(clause)? {
                added += 1;
            }
        }
        Ok(added)
    }

    /// A copy of the formula with one unit clause per cube literal.
    pub fn with_units(&self, cube: &[Lit]) -> Result<CnfFormula, CnfError> {
        let mut out = self.clone();
        for &lit in cube {
            out.add_clause([lit])?;
        }
        Ok(out)
    }

    /// Evaluates the formula; `model[v - 1]` is the value of variable `v`.
    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|&l| lit_value(model, l)))
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = String::new();
        writeln!(out, "p cnf {} {}", self.var_count, self.clauses.len()).unwrap();
        for clause in &self.clauses {
            for lit in clause {
                write!(out, "{lit} ").unwrap();
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn write_dimacs<W: Write>(&self, mut w: W) -> io::Result<()> {
        writeln!(w, "p cnf {} {}", self.var_count, self.clauses.len())?;
        for clause in &self.clauses {
            for lit in clause {
                write!(w, "{lit} ")?;
            }
            w.write_all(b"0\n")?;
        }
        Ok(())
    }

    /// Parses DIMACS CNF. Clauses may span lines; `c` lines are comments.
    pub fn parse_dimacs(text: &str) -> Result<CnfFormula, CnfError> {
        let mut header: Option<(u32, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if line.starts_with('p') {
                let parts: Vec<&str> = line.split_whitespace().collect();
                if parts.len() != 4 || parts[1] != "cnf" {
                    return Err(parse_err(line_no, "malformed header"));
                }
                let vars = parts[2].parse().map_err(|_| parse_err(line_no, "bad variable count"))?;
                let count = parts[3].parse().map_err(|_| parse_err(line_no, "bad clause count"))?;
                header = Some((vars, count));
                continue;
            }
            let (vars, _) = header.ok_or_else(|| parse_err(line_no, "clause before header"))?;
            for tok in line.split_whitespace() {
                let lit: Lit = tok.parse().map_err(|_| parse_err(line_no, &format!("bad literal {tok:?}")))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else if lit.unsigned_abs() > vars {
                    return Err(parse_err(line_no, &format!("literal {lit} exceeds header")));
                } else {
                    current.push(lit);
                }
            }
        }
        let (vars, count) = header.ok_or_else(|| parse_err(0, "missing header"))?;
        if !current.is_empty() {
            clauses.push(current);
        }
        if clauses.len() != count {
            return Err(parse_err(0, &format!("header declares {count} clauses, found {}", clauses.len())));
        }
        Ok(CnfFormula { var_count: vars, aux_var_base: vars + 1, clauses })
    }
}

pub fn lit_value(model: &[bool], lit: Lit) -> bool {
    let v = model[lit.unsigned_abs() as usize - 1];
    if lit > 0 {
        v
    } else {
        !v
    }
}

fn parse_err(line: usize, msg: &str) -> CnfError {
    CnfError::Parse { line, msg: msg.to_string() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn emits_exact_dimacs() {
        let mut f = CnfFormula::new(2);
        f.add_clause([1, -2]).unwrap();
        assert_eq!(f.to_dimacs(), "p cnf 2 1\n1 -2 0\n");
        assert_eq!(CnfFormula::new(7).to_dimacs(), "p cnf 7 0\n");
        let mut buf = Vec::new();
        f.write_dimacs(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), f.to_dimacs());
    }

    #[test]
    fn rejects_bad_clauses() {
        let mut f = CnfFormula::new(2);
        assert_eq!(f.add_clause([]), Err(CnfError::EmptyClause));
        assert!(matches!(f.add_clause([3]), Err(CnfError::UndeclaredVariable { .. })));
        assert_eq!(f.add_clause([1, -1, 2]), Ok(false));
        assert_eq!(f.add_clause([2, 2, 1]), Ok(true));
        assert_eq!(f.clauses(), &[vec![2, 1]]);
    }

    #[test]
    fn parses_multiline_clauses_and_comments() {
        let f = CnfFormula::parse_dimacs("c hi\np cnf 3 2\n1 2\n -3 0 3\n0\n").unwrap();
        assert_eq!(f.clauses(), &[vec![1, 2, -3], vec![3]]);
        assert!(CnfFormula::parse_dimacs("p cnf 1 1\n2 0\n").is_err());
        assert!(CnfFormula::parse_dimacs("p cnf 1 2\n1 0\n").is_err());
    }

    proptest! {
        #[test]
        fn dimacs_round_trip(clauses in prop::collection::vec(
            prop::collection::vec((1i32..=9, any::<bool>()), 1..5), 0..20)) {
            let mut f = CnfFormula::new(9);
            for c in clauses {
                let _ = f.add_clause(c.into_iter().map(|(v, s)| if s { v } else { -v }));
            }
            let back = CnfFormula::parse_dimacs(&f.to_dimacs()).unwrap();
            prop_assert_eq!(back, f);
        }
    }
}
