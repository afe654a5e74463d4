//! DIMACS CNF reading and a small DPLL solver.
//!
//! Used to decide exported colouring formulas independently of the colouring
//! backtracker. Only meant for the tiny instances in this crate.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cnf {
    pub num_vars: usize,
    pub clauses: Vec<Vec<i64>>,
}

impl Cnf {
    /// Parses DIMACS text. Comment lines start with `c`; the `p cnf V C`
    /// header must come before any clause and its counts must match.
    pub fn parse(text: &str) -> Result<Self> {
        let mut header: Option<(usize, usize)> = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("p cnf") {
                let nums: Vec<usize> = rest
                    .split_whitespace()
                    .map(|t| t.parse().map_err(|e| Error::Parse(format!("header {t:?}: {e}"))))
                    .collect::<Result<_>>()?;
                let [v, c] = nums[..] else {
                    return Err(Error::Parse(format!("bad header {line:?}")));
                };
                header = Some((v, c));
                continue;
            }
            let (num_vars, _) = header.ok_or_else(|| Error::Parse("clause before header".into()))?;
            for tok in line.split_whitespace() {
                let lit: i64 = tok.parse().map_err(|e| Error::Parse(format!("literal {tok:?}: {e}")))?;
                if lit == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else if lit.unsigned_abs() as usize > num_vars {
                    return Err(Error::Parse(format!("literal {lit} exceeds {num_vars} variables")));
                } else {
                    current.push(lit);
                }
            }
        }
        let (num_vars, count) = header.ok_or_else(|| Error::Parse("missing p cnf header".into()))?;
        if !current.is_empty() {
            return Err(Error::Parse("last clause is not terminated by 0".into()));
        }
        if clauses.len() != count {
            return Err(Error::Parse(format!("header says {count} clauses, found {}", clauses.len())));
        }
        Ok(Cnf { num_vars, clauses })
    }

    /// Whether `assignment` (`assignment[v-1]` for variable `v`) satisfies every clause.
    pub fn satisfied_by(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|cl| cl.iter().any(|&l| assignment[l.unsigned_abs() as usize - 1] == (l > 0)))
    }

    /// A satisfying assignment, if any. Unassigned variables come back `false`.
    pub fn solve(&self) -> Option<Vec<bool>> {
        let mut values = vec![None; self.num_vars];
        if self.dpll(&mut values) {
            Some(values.into_iter().map(|v| v.unwrap_or(false)).collect())
        } else {
            None
        }
    }

    fn lit_value(values: &[Option<bool>], lit: i64) -> Option<bool> {
        values[lit.unsigned_abs() as usize - 1].map(|v| v == (lit > 0))
    }

    fn dpll(&self, values: &mut Vec<Option<bool>>) -> bool {
        let saved = values.clone();
        // Unit propagation to a fixed point.
        loop {
            let mut changed = false;
            for clause in &self.clauses {
                let mut unassigned = None;
                let mut open = 0;
                let mut satisfied = false;
                for &l in clause {
                    match Self::lit_value(values, l) {
                        Some(true) => {
                            satisfied = true;
                            break;
                        }
                        Some(false) => {}
                        None => {
                            open += 1;
                            unassigned = Some(l);
                        }
                    }
                }
                if satisfied {
                    continue;
                }
                match (open, unassigned) {
                    (0, _) => {
                        *values = saved;
                        return false;
                    }
                    (1, Some(l)) => {
                        values[l.unsigned_abs() as usize - 1] = Some(l > 0);
                        changed = true;
                    }
                    _ => {}
                }
            }
            if !changed {
                break;
            }
        }
        let Some(var) = values.iter().position(Option::is_none) else {
            return true;
        };
        for choice in [true, false] {
            values[var] = Some(choice);
            if self.dpll(values) {
                return true;
            }
            values[var] = None;
        }
        *values = saved;
        false
    }
}
