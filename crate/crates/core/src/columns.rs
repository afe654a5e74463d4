//! The columns condition over ℚ and 𝔽_p.
//!
//! A matrix satisfies the columns condition when its columns can be split into
//! an ordered partition `P_1, ..., P_d` such that the sum of the columns in each
//! `P_j` lies in the span of the columns in `P_1 ∪ ... ∪ P_{j-1}` (the empty
//! span being `{0}`).
//!
//! For a single row the condition collapses to a subset-sum test: the span of
//! earlier columns is either `{0}` or the whole field, so the condition holds
//! iff every entry is zero or some nonempty set of nonzero entries sums to
//! zero. Zero entries can always be absorbed into the first part.

use std::collections::HashMap;
use std::ops::ControlFlow;

use serde::Serialize;

use crate::algebra::{span_member, Echelon, Field, IntMatrix, Matrix, Scalar};
use crate::error::{Error, Result};

/// Largest column count searched exhaustively.
pub const MAX_EXHAUSTIVE_COLUMNS: usize = 10;

/// Ordered partition of column indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct ColumnPartition {
    parts: Vec<Vec<usize>>,
}

impl ColumnPartition {
    /// Checks the parts are nonempty, disjoint and cover `0..m`. Each part is
    /// stored sorted; part order is kept.
    pub fn new(mut parts: Vec<Vec<usize>>, m: usize) -> Result<Self> {
        let mut seen = vec![false; m];
        for part in parts.iter_mut() {
            if part.is_empty() {
                return Err(Error::InvalidWitness("empty part".into()));
            }
            part.sort_unstable();
            for &c in part.iter() {
                if c >= m {
                    return Err(Error::InvalidWitness(format!("column {c} out of range")));
                }
                if std::mem::replace(&mut seen[c], true) {
                    return Err(Error::InvalidWitness(format!("column {c} appears twice")));
                }
            }
        }
        if let Some(c) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidWitness(format!("column {c} is not covered")));
        }
        Ok(ColumnPartition { parts })
    }

    pub fn parts(&self) -> &[Vec<usize>] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Independent check of the witness property, one `span_member` call per part.
    pub fn verify(&self, a: &Matrix) -> Result<bool> {
        let covered: usize = self.parts.iter().map(Vec::len).sum();
        if covered != a.cols() {
            return Ok(false);
        }
        let mut earlier: Vec<Vec<Scalar>> = Vec::new();
        for part in &self.parts {
            let sum = column_sum(a, part);
            if !span_member(&sum, &earlier, a.field())? {
                return Ok(false);
            }
            earlier.extend(part.iter().map(|&c| a.column(c)));
        }
        Ok(true)
    }
}

fn column_sum(a: &Matrix, cols: &[usize]) -> Vec<Scalar> {
    (0..a.rows())
        .map(|i| cols.iter().fold(a.field().zero(), |acc, &c| &acc + a.get(i, c)))
        .collect()
}

/// Visits the nonempty subsets of `items` in lexicographic order of their
/// sorted element lists: `{0}, {0,1}, {0,1,2}, {0,2}, {1}, {1,2}, {2}`.
pub(crate) fn for_each_lex_subset<B>(
    items: &[usize],
    f: &mut impl FnMut(&[usize]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    fn go<B>(
        items: &[usize],
        start: usize,
        current: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]) -> ControlFlow<B>,
    ) -> ControlFlow<B> {
        for i in start..items.len() {
            current.push(items[i]);
            f(current)?;
            go(items, i + 1, current, f)?;
            current.pop();
        }
        ControlFlow::Continue(())
    }
    go(items, 0, &mut Vec::new(), f)
}

struct PartitionSearch<'a> {
    a: &'a Matrix,
    full: u32,
    spans: HashMap<u32, Echelon>,
    dead: Vec<bool>,
}

impl PartitionSearch<'_> {
    fn span(&mut self, used: u32) -> Result<&Echelon> {
        if !self.spans.contains_key(&used) {
            let mut e = Echelon::new(self.a.field(), self.a.rows())?;
            for c in (0..self.a.cols()).filter(|c| used & (1 << c) != 0) {
                e.insert(&self.a.column(c))?;
            }
            self.spans.insert(used, e);
        }
        Ok(&self.spans[&used])
    }

    /// Depth-first over choices of the next part; `dead` memoizes used-sets
    /// from which no completion exists.
    fn extend(&mut self, used: u32, parts: &mut Vec<Vec<usize>>) -> Result<bool> {
        if used == self.full {
            return Ok(true);
        }
        if self.dead[used as usize] {
            return Ok(false);
        }
        let remaining: Vec<usize> = (0..self.a.cols()).filter(|c| used & (1 << c) == 0).collect();
        let mut candidates = Vec::new();
        let _ = for_each_lex_subset(&remaining, &mut |s| {
            candidates.push(s.to_vec());
            ControlFlow::<()>::Continue(())
        });
        for part in candidates {
            let sum = column_sum(self.a, &part);
            if !self.span(used)?.contains(&sum)? {
                continue;
            }
            let mask = part.iter().fold(used, |m, &c| m | (1 << c));
            parts.push(part);
            if self.extend(mask, parts)? {
                return Ok(true);
            }
            parts.pop();
        }
        self.dead[used as usize] = true;
        Ok(false)
    }
}

/// Decides the columns condition and returns a witness partition.
///
/// Matrices with more than [`MAX_EXHAUSTIVE_COLUMNS`] columns are only
/// handled when they have a single row.
pub fn check_columns_condition(a: &Matrix) -> Result<Option<ColumnPartition>> {
    a.field().require_field()?;
    let m = a.cols();
    if m > MAX_EXHAUSTIVE_COLUMNS {
        if a.rows() == 1 {
            return single_row_condition(a.row(0));
        }
        return Err(Error::TooManyColumns(m));
    }
    let mut search = PartitionSearch {
        a,
        full: (1u32 << m) - 1,
        spans: HashMap::new(),
        dead: vec![false; 1 << m],
    };
    let mut parts = Vec::new();
    if !search.extend(0, &mut parts)? {
        return Ok(None);
    }
    let witness = ColumnPartition::new(parts, m)?;
    if !witness.verify(a)? {
        return Err(Error::InvalidWitness("search produced a partition that fails verification".into()));
    }
    Ok(Some(witness))
}

/// The columns condition for a `1 × m` row by subset-sum enumeration over
/// the nonzero entries.
pub fn single_row_condition(row: &[Scalar]) -> Result<Option<ColumnPartition>> {
    let Some(first) = row.first() else {
        return Err(Error::InvalidInput("empty row".into()));
    };
    let field = first.field();
    field.require_field()?;
    let a = Matrix::new(field, 1, row.len(), row.to_vec())?;
    let (zeros, nonzero): (Vec<usize>, Vec<usize>) = (0..row.len()).partition(|&c| row[c].is_zero());
    if nonzero.is_empty() {
        return Ok(Some(ColumnPartition::new(vec![zeros], row.len())?));
    }
    if nonzero.len() >= 64 {
        return Err(Error::TooManyColumns(nonzero.len()));
    }
    let found = for_each_lex_subset(&nonzero, &mut |s| {
        let sum = s.iter().fold(field.zero(), |acc, &c| &acc + &row[c]);
        if sum.is_zero() {
            ControlFlow::Break(s.to_vec())
        } else {
            ControlFlow::Continue(())
        }
    });
    let ControlFlow::Break(zero_sum) = found else {
        return Ok(None);
    };
    let mut first_part = zero_sum.clone();
    first_part.extend(&zeros);
    let rest: Vec<usize> = nonzero.into_iter().filter(|c| !zero_sum.contains(c)).collect();
    let mut parts = vec![first_part];
    if !rest.is_empty() {
        parts.push(rest);
    }
    let witness = ColumnPartition::new(parts, row.len())?;
    if !witness.verify(&a)? {
        return Err(Error::InvalidWitness("single-row witness fails verification".into()));
    }
    Ok(Some(witness))
}

/// The `(k-1) × (k+1)` matrix whose solutions are the Brauer tuples
/// `(x, x+c, ..., x+(k-1)c, c)`. Row `i` (1-based) has `-1` in column 1,
/// `+1` in column `i+1` and `-i` in the last column.
pub fn brauer_matrix(k: usize) -> Result<IntMatrix> {
    if k < 2 {
        return Err(Error::InvalidInput(format!("Brauer matrix needs k >= 2, got {k}")));
    }
    let mut rows = vec![vec![0i64; k + 1]; k - 1];
    for (idx, row) in rows.iter_mut().enumerate() {
        let i = idx + 1;
        row[0] = -1;
        row[i] = 1;
        row[k] = -(i as i64);
    }
    IntMatrix::from_rows(&rows)
}

/// Convenience: reduce an integer matrix into `field` and decide the condition.
pub fn check_int_matrix(a: &IntMatrix, field: Field) -> Result<Option<ColumnPartition>> {
    check_columns_condition(&a.over(field))
}
