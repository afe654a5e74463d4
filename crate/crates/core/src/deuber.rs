//! Deuber-style witness systems.
//!
//! For `F ⊂ 𝔽` and `t ∈ 𝔽^m`,
//!
//! ```text
//! S(m, F; t)    = ⋃_j S(m, F; t, j)
//! S(m, F; t, j) = t_j + F·t_{j+1} + ... + F·t_m
//! ```
//!
//! [`deuber_witness`] turns a columns-condition partition of `A` into a block
//! upper-triangular matrix `W` such that every `x = W t` (lifted back to the
//! columns of `A`) solves `A x = 0` with every coordinate in `S(d, F ∪ {0,1}; t)`.
//! [`hj_line_search`] is the finite Hales-Jewett kernel: find a monochromatic
//! combinatorial line in a coloured cube `[k]^n`.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::ControlFlow;

use serde::Serialize;

use crate::algebra::{solve, Echelon, Field, Matrix, Scalar};
use crate::columns::{for_each_lex_subset, ColumnPartition};
use crate::error::{Error, Result};

pub const S_SET_BUDGET: u128 = 1_000_000;
pub const INDEPENDENCE_BUDGET: u128 = 10_000_000;
pub const HJ_BUDGET: u128 = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSetSpec {
    /// The coefficient set `F`.
    pub multipliers: Vec<Scalar>,
    /// The generators `t_1, ..., t_m`.
    pub generators: Vec<Scalar>,
}

impl SSetSpec {
    pub fn new(multipliers: Vec<Scalar>, generators: Vec<Scalar>) -> Result<Self> {
        let mut fields = multipliers.iter().chain(&generators).map(Scalar::field);
        if let Some(f) = fields.next() {
            if let Some(other) = fields.find(|g| *g != f) {
                return Err(Error::FieldMismatch(f.to_string(), other.to_string()));
            }
        }
        Ok(SSetSpec { multipliers: dedup(multipliers), generators })
    }

    pub fn m(&self) -> usize {
        self.generators.len()
    }
}

fn dedup(v: Vec<Scalar>) -> Vec<Scalar> {
    v.into_iter().collect::<BTreeSet<_>>().into_iter().collect()
}

fn checked_pow(base: usize, exp: usize) -> u128 {
    (0..exp).fold(1u128, |acc, _| acc.saturating_mul(base as u128))
}

/// Visits every tuple in `items^len` in lexicographic order.
fn for_each_tuple<B>(
    items: &[Scalar],
    len: usize,
    f: &mut impl FnMut(&[Scalar]) -> ControlFlow<B>,
) -> ControlFlow<B> {
    if len > 0 && items.is_empty() {
        return ControlFlow::Continue(());
    }
    let mut idx = vec![0usize; len];
    let mut tuple: Vec<Scalar> = vec![items.first().cloned().unwrap_or_else(|| Field::Rational.zero()); len];
    loop {
        for (slot, &i) in tuple.iter_mut().zip(&idx) {
            *slot = items[i].clone();
        }
        f(&tuple)?;
        let mut pos = len;
        loop {
            if pos == 0 {
                return ControlFlow::Continue(());
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < items.len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

/// How an element of `S(m, F; t)` arises: `t_j + Σ_{i>j} f_i t_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SSetOrigin {
    /// 1-based index `j`.
    pub j: usize,
    /// Coefficients for `t_{j+1}, ..., t_m`.
    pub coefficients: Vec<Scalar>,
}

/// `S(m, F; t, j)` for a single 1-based `j`, with the first coefficient vector
/// (lexicographically) that produces each element.
pub fn s_set_part(spec: &SSetSpec, j: usize) -> Result<BTreeMap<Scalar, SSetOrigin>> {
    let m = spec.m();
    if j == 0 || j > m {
        return Err(Error::InvalidInput(format!("part index {j} outside 1..={m}")));
    }
    let tail = &spec.generators[j..];
    let mut out = BTreeMap::new();
    let _ = for_each_tuple(&spec.multipliers, tail.len(), &mut |f| {
        let x = f
            .iter()
            .zip(tail)
            .fold(spec.generators[j - 1].clone(), |acc, (fi, ti)| &acc + &(fi * ti));
        out.entry(x).or_insert_with(|| SSetOrigin { j, coefficients: f.to_vec() });
        ControlFlow::<()>::Continue(())
    });
    Ok(out)
}

/// `S(m, F; t)` with one recorded origin per element.
pub fn s_set_explained(spec: &SSetSpec) -> Result<BTreeMap<Scalar, SSetOrigin>> {
    let m = spec.m();
    let generated = (m as u128).saturating_mul(checked_pow(spec.multipliers.len(), m.saturating_sub(1)));
    if generated > S_SET_BUDGET {
        return Err(Error::BudgetExceeded { what: "S-set enumeration", size: generated, limit: S_SET_BUDGET });
    }
    let mut out = BTreeMap::new();
    for j in 1..=m {
        for (x, origin) in s_set_part(spec, j)? {
            out.entry(x).or_insert(origin);
        }
    }
    Ok(out)
}

/// The deduplicated set `S(m, F; t)`.
pub fn s_set(spec: &SSetSpec) -> Result<BTreeSet<Scalar>> {
    Ok(s_set_explained(spec)?.into_keys().collect())
}

/// A nonzero `f ∈ F^I` with `Σ f_i t_i = 0`, if one exists.
pub fn find_f_dependence(t: &[Scalar], multipliers: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    let field = match t.first().or(multipliers.first()) {
        Some(s) => s.field(),
        None => return Ok(None),
    };
    if let Some(bad) = t.iter().chain(multipliers).find(|s| s.field() != field) {
        return Err(Error::FieldMismatch(field.to_string(), bad.field().to_string()));
    }
    let multipliers = dedup(multipliers.to_vec());
    let size = checked_pow(multipliers.len(), t.len());
    if size > INDEPENDENCE_BUDGET {
        return Err(Error::BudgetExceeded { what: "F-independence check", size, limit: INDEPENDENCE_BUDGET });
    }
    let found = for_each_tuple(&multipliers, t.len(), &mut |f| {
        if f.iter().all(Scalar::is_zero) {
            return ControlFlow::Continue(());
        }
        let sum = f.iter().zip(t).fold(field.zero(), |acc, (fi, ti)| &acc + &(fi * ti));
        if sum.is_zero() {
            ControlFlow::Break(f.to_vec())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(match found {
        ControlFlow::Break(f) => Some(f),
        ControlFlow::Continue(()) => None,
    })
}

/// Whether `t` is `F`-independent: the only `f ∈ F^I` with `Σ f_i t_i = 0`
/// is the all-zero one. When `0 ∉ F` this means no vanishing combination at all.
pub fn is_f_independent(t: &[Scalar], multipliers: &[Scalar]) -> Result<bool> {
    Ok(find_f_dependence(t, multipliers)?.is_none())
}

/// Output of [`deuber_witness`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DeuberWitness {
    pub field: Field,
    /// Number of blocks (columns of `W`).
    pub d: usize,
    /// Distinct entries of the α blocks, sorted. `0` and `1` are not added.
    pub multipliers: Vec<Scalar>,
    /// Number of α entries before deduplication.
    pub raw_multiplier_count: usize,
    /// The `q × d` block matrix.
    #[serde(serialize_with = "serialize_matrix")]
    pub w: Matrix,
    /// The reduced matrix `A'` (`n × q`): per block, a basis of the block's
    /// columns followed by the sum of the remaining ones.
    #[serde(serialize_with = "serialize_matrix")]
    pub reduced: Matrix,
    /// Rows of `W` per block (`n_j + 1`).
    pub block_sizes: Vec<usize>,
    /// For each column of `A`, the row of `W` whose value it takes.
    pub column_map: Vec<usize>,
    /// The partition after merging parts that do not raise the span dimension.
    pub merged_partition: ColumnPartition,
}

fn serialize_matrix<S: serde::Serializer>(m: &Matrix, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(m.rows()))?;
    for i in 0..m.rows() {
        seq.serialize_element(m.row(i))?;
    }
    seq.end()
}

impl DeuberWitness {
    /// `x = W t`, indexed by the columns of `A'`.
    pub fn reduced_solution(&self, t: &[Scalar]) -> Result<Vec<Scalar>> {
        self.w.mul_vec(t)
    }

    /// `W t` spread back over the columns of `A`.
    pub fn lift(&self, t: &[Scalar]) -> Result<Vec<Scalar>> {
        let x = self.reduced_solution(t)?;
        Ok(self.column_map.iter().map(|&i| x[i].clone()).collect())
    }

    /// 0-based block containing row `i` of `W`.
    pub fn block_of_row(&self, i: usize) -> usize {
        let mut end = 0;
        for (b, &size) in self.block_sizes.iter().enumerate() {
            end += size;
            if i < end {
                return b;
            }
        }
        panic!("row {i} outside W");
    }

    /// `F ∪ {0, 1}`.
    pub fn augmented_multipliers(&self) -> Vec<Scalar> {
        let mut f = self.multipliers.clone();
        f.push(self.field.zero());
        f.push(self.field.one());
        dedup(f)
    }

    /// Checks one `t`: `A · lift(W t) = 0` and every lifted coordinate lies in
    /// `S(d, F ∪ {0,1}; t)`, computed by enumeration.
    pub fn check(&self, a: &Matrix, t: &[Scalar]) -> Result<WitnessCheck> {
        let x = self.lift(t)?;
        let solves = a.mul_vec(&x)?.iter().all(Scalar::is_zero);
        let s = s_set(&SSetSpec::new(self.augmented_multipliers(), t.to_vec())?)?;
        let in_s_set = x.iter().all(|v| s.contains(v));
        Ok(WitnessCheck { solves, in_s_set })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub solves: bool,
    pub in_s_set: bool,
}

impl WitnessCheck {
    pub fn ok(&self) -> bool {
        self.solves && self.in_s_set
    }
}

fn column_sum(a: &Matrix, cols: &[usize]) -> Vec<Scalar> {
    (0..a.rows())
        .map(|i| cols.iter().fold(a.field().zero(), |acc, &c| &acc + a.get(i, c)))
        .collect()
}

/// Builds `W`, `F` and the column map from a verified columns-condition
/// partition of `a`.
///
/// Parts whose columns do not raise the dimension of the running span are
/// merged into the next part that does; trailing such parts form one final
/// block. Each block keeps a basis of its own columns and replaces the rest by
/// their sum (a zero column when nothing remains). The α blocks of `W` are the
/// rref solutions, free variables zero, of `A'_{<j} α = -(column sum of block j)`.
pub fn deuber_witness(a: &Matrix, partition: &ColumnPartition) -> Result<DeuberWitness> {
    let field = a.field();
    if !partition.verify(a)? {
        return Err(Error::InvalidWitness("partition does not satisfy the columns condition".into()));
    }
    let n = a.rows();

    // Merge parts that leave dim V_j unchanged.
    let mut merged: Vec<Vec<usize>> = Vec::new();
    let mut running = Echelon::new(field, n)?;
    let mut pending: Vec<usize> = Vec::new();
    for part in partition.parts() {
        let before = running.rank();
        for &c in part {
            running.insert(&a.column(c))?;
        }
        pending.extend(part);
        if running.rank() > before {
            merged.push(std::mem::take(&mut pending));
        }
    }
    if !pending.is_empty() {
        merged.push(pending);
    }
    let merged_partition = ColumnPartition::new(merged, a.cols())?;
    if !merged_partition.verify(a)? {
        return Err(Error::InvalidWitness("merged partition fails verification".into()));
    }

    // Build A' and the map from original columns to A' columns.
    let mut reduced_cols: Vec<Vec<Scalar>> = Vec::new();
    let mut column_map = vec![0usize; a.cols()];
    let mut block_sizes = Vec::new();
    for part in merged_partition.parts() {
        let mut basis = Echelon::new(field, n)?;
        let mut residual = Vec::new();
        let start = reduced_cols.len();
        for &c in part {
            let col = a.column(c);
            if basis.insert(&col)? {
                column_map[c] = reduced_cols.len();
                reduced_cols.push(col);
            } else {
                residual.push(c);
            }
        }
        let sum_index = reduced_cols.len();
        for &c in &residual {
            column_map[c] = sum_index;
        }
        reduced_cols.push(column_sum(a, &residual));
        block_sizes.push(reduced_cols.len() - start);
    }
    let q = reduced_cols.len();
    let d = block_sizes.len();
    let reduced = Matrix::from_columns(field, n, &reduced_cols)?;

    // W: ones on the diagonal blocks, α solutions above.
    let mut w = Matrix::zeros(field, q, d);
    let mut multipliers = BTreeSet::new();
    let mut raw_multiplier_count = 0;
    let mut offset = 0;
    for (b, part) in merged_partition.parts().iter().enumerate() {
        for i in offset..offset + block_sizes[b] {
            w.set(i, b, field.one());
        }
        if b > 0 {
            let earlier = Matrix::from_columns(field, n, &reduced_cols[..offset])?;
            let target: Vec<Scalar> = column_sum(a, part).iter().map(|v| -v).collect();
            let alpha = solve(&earlier, &target)?.ok_or_else(|| {
                Error::InvalidWitness(format!("block {b} sum is not in the span of earlier blocks"))
            })?;
            for (i, v) in alpha.into_iter().enumerate() {
                w.set(i, b, v.clone());
                multipliers.insert(v);
                raw_multiplier_count += 1;
            }
        }
        offset += block_sizes[b];
    }

    let witness = DeuberWitness {
        field,
        d,
        multipliers: multipliers.into_iter().collect(),
        raw_multiplier_count,
        w,
        reduced,
        block_sizes,
        column_map,
        merged_partition,
    };

    if !witness.reduced.mul(&witness.w)?.is_zero() {
        return Err(Error::InvalidWitness("A'W != 0".into()));
    }
    let lifted_rows: Vec<Vec<Scalar>> =
        witness.column_map.iter().map(|&i| witness.w.row(i).to_vec()).collect();
    let lifted = Matrix::new(field, a.cols(), d, lifted_rows.concat())?;
    if !a.mul(&lifted)?.is_zero() {
        return Err(Error::InvalidWitness("A · lift(W) != 0".into()));
    }
    if witness.multipliers.len() > (n + 1) * d * d {
        return Err(Error::InvalidWitness(format!(
            "|F| = {} exceeds (k+1)d^2 = {}",
            witness.multipliers.len(),
            (n + 1) * d * d
        )));
    }
    Ok(witness)
}

/// A combinatorial line in `[k]^n`: the `k` words equal to `a` on `variable`
/// and to `template` elsewhere, for each letter `a`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HjLine {
    pub variable: Vec<usize>,
    /// `None` on variable coordinates.
    pub template: Vec<Option<usize>>,
    pub colour: usize,
}

impl HjLine {
    /// The `k` words of the line, letters `0..k`.
    pub fn words(&self, k: usize) -> Vec<Vec<usize>> {
        (0..k)
            .map(|a| self.template.iter().map(|z| z.unwrap_or(a)).collect())
            .collect()
    }
}

/// Lexicographic index of a word (first coordinate most significant).
pub fn word_index(word: &[usize], k: usize) -> usize {
    word.iter().fold(0, |acc, &x| acc * k + x)
}

/// Searches for a monochromatic combinatorial line.
///
/// `colouring[i]` is the colour of the `i`-th word of `[k]^dims` in
/// lexicographic order, letters written `0..k`. Variable sets are tried in
/// lexicographic subset order, then templates in lexicographic order; the first
/// hit is returned.
pub fn hj_line_search(k: usize, dims: usize, colouring: &[usize]) -> Result<Option<HjLine>> {
    if k == 0 || dims == 0 {
        return Err(Error::InvalidInput("alphabet and dimension must be positive".into()));
    }
    let size = checked_pow(k, dims);
    if size > HJ_BUDGET {
        return Err(Error::BudgetExceeded { what: "Hales-Jewett cube", size, limit: HJ_BUDGET });
    }
    if colouring.len() as u128 != size {
        return Err(Error::DimensionMismatch { expected: size as usize, found: colouring.len() });
    }
    let coords: Vec<usize> = (0..dims).collect();
    let found = for_each_lex_subset(&coords, &mut |variable| {
        let fixed: Vec<usize> = coords.iter().copied().filter(|c| !variable.contains(c)).collect();
        let templates = checked_pow(k, fixed.len()) as usize;
        for z in 0..templates {
            let mut template = vec![None; dims];
            let mut rest = z;
            for &c in fixed.iter().rev() {
                template[c] = Some(rest % k);
                rest /= k;
            }
            let line = HjLine { variable: variable.to_vec(), template, colour: 0 };
            let colours: Vec<usize> = line.words(k).iter().map(|w| colouring[word_index(w, k)]).collect();
            if colours.iter().all(|&c| c == colours[0]) {
                return ControlFlow::Break(HjLine { colour: colours[0], ..line });
            }
        }
        ControlFlow::Continue(())
    });
    match found {
        ControlFlow::Break(line) => {
            debug_assert!(line.words(k).iter().all(|w| colouring[word_index(w, k)] == line.colour));
            Ok(Some(line))
        }
        ControlFlow::Continue(()) => Ok(None),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::IntMatrix;
    use crate::columns::{brauer_matrix, check_columns_condition};

    fn fp(p: u64, v: &[i64]) -> Vec<Scalar> {
        v.iter().map(|&x| Scalar::modular(x, p)).collect()
    }

    #[test]
    fn s_set_single_generator() {
        let spec = SSetSpec::new(fp(11, &[2, 3]), fp(11, &[5])).unwrap();
        assert_eq!(s_set(&spec).unwrap(), fp(11, &[5]).into_iter().collect());
    }

    #[test]
    fn s_set_two_generators() {
        // Direct expansion: S(2,{0,1};(1,2),1) = {1+0·2, 1+1·2} = {1,3}; part 2 = {2}.
        let spec = SSetSpec::new(fp(7, &[0, 1]), fp(7, &[1, 2])).unwrap();
        let p1: BTreeSet<_> = s_set_part(&spec, 1).unwrap().into_keys().collect();
        let p2: BTreeSet<_> = s_set_part(&spec, 2).unwrap().into_keys().collect();
        assert_eq!(p1, fp(7, &[1, 3]).into_iter().collect());
        assert_eq!(p2, fp(7, &[2]).into_iter().collect());
        assert_eq!(s_set(&spec).unwrap(), fp(7, &[1, 2, 3]).into_iter().collect());
    }

    #[test]
    fn s_set_origins_reverify() {
        let spec = SSetSpec::new(fp(13, &[0, 2, 5]), fp(13, &[1, 4, 9])).unwrap();
        for (x, origin) in s_set_explained(&spec).unwrap() {
            let tail = &spec.generators[origin.j..];
            let v = origin
                .coefficients
                .iter()
                .zip(tail)
                .fold(spec.generators[origin.j - 1].clone(), |acc, (f, t)| &acc + &(f * t));
            assert_eq!(v, x);
        }
    }

    #[test]
    fn s_set_budget() {
        let f: Vec<Scalar> = (0..101).map(|v| Scalar::modular(v, 101)).collect();
        let spec = SSetSpec::new(f, fp(101, &[1, 2, 3, 4])).unwrap();
        assert!(matches!(s_set(&spec), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn independence_examples() {
        assert!(is_f_independent(&fp(5, &[1]), &fp(5, &[0, 1])).unwrap());
        assert!(!is_f_independent(&fp(2, &[1, 1]), &fp(2, &[0, 1])).unwrap());
        assert_eq!(find_f_dependence(&fp(7, &[1, 3]), &fp(7, &[0, 1, 2])).unwrap(), Some(fp(7, &[1, 2])));
        // 0 ∉ F: every f is "nonzero", so any vanishing sum is a dependence.
        assert!(is_f_independent(&fp(7, &[1, 1]), &fp(7, &[1])).unwrap());
        assert!(!is_f_independent(&fp(7, &[1, 6]), &fp(7, &[1])).unwrap());
    }

    #[test]
    fn schur_witness_over_q() {
        let a = IntMatrix::row_vector(&[1, 1, -1]).over(Field::Rational);
        let p = check_columns_condition(&a).unwrap().unwrap();
        let w = deuber_witness(&a, &p).unwrap();
        assert_eq!(w.d, 2);
        assert_eq!(w.block_sizes, vec![2, 2]);
        assert!(w.multipliers.len() <= 2 * w.d * w.d);
        let t = vec![Scalar::rational(3, 2), Scalar::rational(-5, 7)];
        assert!(w.check(&a, &t).unwrap().ok());
    }

    #[test]
    fn leading_zero_part_is_merged() {
        let a = IntMatrix::row_vector(&[0, 1, -1]).over(Field::Rational);
        let p = check_columns_condition(&a).unwrap().unwrap();
        let w = deuber_witness(&a, &p).unwrap();
        assert_eq!(w.reduced.cols(), w.block_sizes.iter().sum::<usize>());
        let t = vec![Scalar::rational(2, 1); w.d];
        assert!(w.check(&a, &t).unwrap().ok());
    }

    #[test]
    fn brauer_witness_mod_7() {
        let a = brauer_matrix(3).unwrap().over(Field::Modular(7));
        let p = check_columns_condition(&a).unwrap().unwrap();
        let w = deuber_witness(&a, &p).unwrap();
        assert!(w.multipliers.len() <= (a.rows() + 1) * w.d * w.d);
        let t = fp(7, &[3, 5, 1, 2][..w.d]);
        assert!(w.check(&a, &t).unwrap().ok());
    }

    #[test]
    fn invalid_partition_rejected() {
        let a = IntMatrix::row_vector(&[1, 1, -1]).over(Field::Rational);
        let p = ColumnPartition::new(vec![vec![0], vec![1, 2]], 3).unwrap();
        assert!(matches!(deuber_witness(&a, &p), Err(Error::InvalidWitness(_))));
    }

    #[test]
    fn hj_examples() {
        let line = hj_line_search(2, 2, &[0, 0, 0, 0]).unwrap().unwrap();
        assert_eq!(line.variable, vec![0]);
        assert_eq!(line.template, vec![None, Some(0)]);
        assert_eq!(hj_line_search(2, 1, &[0, 1]).unwrap(), None);
        assert!(hj_line_search(2, 2, &[0, 0, 0]).is_err());
        assert!(matches!(hj_line_search(10, 7, &[]), Err(Error::BudgetExceeded { .. })));
    }
}
