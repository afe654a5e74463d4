//! Exact scalars and small dense matrices over ℚ and ℤ/mℤ.
//!
//! Everything here is exact: rationals are arbitrary precision and always kept
//! in lowest terms, residues are always reduced into `[0, m)`. Field operations
//! (row reduction, span membership, solving) require a prime modulus; plain
//! ring arithmetic on [`Scalar`] works for any modulus `m >= 2`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Which arithmetic a scalar lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Field {
    Rational,
    /// ℤ/mℤ. Only a field when `m` is prime.
    Modular(u64),
}

impl Field {
    pub fn zero(&self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(&self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(&self, v: i64) -> Scalar {
        match *self {
            Field::Rational => Scalar(Repr::Rational(BigRational::from_integer(BigInt::from(v)))),
            Field::Modular(m) => Scalar(Repr::Mod {
                residue: v.rem_euclid(m as i64) as u64,
                modulus: m,
            }),
        }
    }

    /// Ok for ℚ and prime moduli, `CompositeModulus` otherwise.
    pub fn require_field(&self) -> Result<()> {
        match *self {
            Field::Rational => Ok(()),
            Field::Modular(m) if is_prime(m) => Ok(()),
            Field::Modular(m) => Err(Error::CompositeModulus(m)),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Modular(m) => write!(f, "F{m}"),
        }
    }
}

impl Serialize for Field {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl FromStr for Field {
    type Err = Error;

    /// Accepts `Q` or `F<p>` (e.g. `F7`).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "Q" {
            return Ok(Field::Rational);
        }
        let p = s
            .strip_prefix('F')
            .and_then(|rest| rest.parse::<u64>().ok())
            .ok_or_else(|| Error::Parse(format!("field must be Q or F<p>, got {s:?}")))?;
        if p < 2 {
            return Err(Error::Parse(format!("modulus must be at least 2, got {p}")));
        }
        Ok(Field::Modular(p))
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// An exact element of ℚ or ℤ/mℤ.
///
/// Arithmetic operators panic when the operands live in different fields;
/// matrices guarantee a common field so this never fires inside the crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Scalar(Repr);

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Repr {
    Rational(BigRational),
    Mod { residue: u64, modulus: u64 },
}

impl Scalar {
    /// `num/den` in lowest terms. Panics if `den == 0`.
    pub fn rational(num: i64, den: i64) -> Self {
        Scalar(Repr::Rational(BigRational::new(BigInt::from(num), BigInt::from(den))))
    }

    pub fn from_big_rational(q: BigRational) -> Self {
        Scalar(Repr::Rational(q))
    }

    pub fn modular(value: i64, modulus: u64) -> Self {
        Field::Modular(modulus).from_i64(value)
    }

    pub fn field(&self) -> Field {
        match &self.0 {
            Repr::Rational(_) => Field::Rational,
            Repr::Mod { modulus, .. } => Field::Modular(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Rational(q) => q.is_zero(),
            Repr::Mod { residue, .. } => *residue == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Rational(q) => q.is_one(),
            Repr::Mod { residue, .. } => *residue == 1,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match &self.0 {
            Repr::Rational(q) => Some(q),
            Repr::Mod { .. } => None,
        }
    }

    pub fn residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Mod { residue, .. } => Some(*residue),
            Repr::Rational(_) => None,
        }
    }

    fn check_same(&self, other: &Scalar) -> Result<()> {
        if self.field() == other.field() {
            Ok(())
        } else {
            Err(Error::FieldMismatch(self.field().to_string(), other.field().to_string()))
        }
    }

    pub fn try_add(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a + b)),
            (Repr::Mod { residue: a, modulus }, Repr::Mod { residue: b, .. }) => Scalar(Repr::Mod {
                residue: ((*a as u128 + *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            }),
            _ => unreachable!(),
        })
    }

    pub fn try_mul(&self, other: &Scalar) -> Result<Scalar> {
        self.check_same(other)?;
        Ok(match (&self.0, &other.0) {
            (Repr::Rational(a), Repr::Rational(b)) => Scalar(Repr::Rational(a * b)),
            (Repr::Mod { residue: a, modulus }, Repr::Mod { residue: b, .. }) => Scalar(Repr::Mod {
                residue: ((*a as u128 * *b as u128) % *modulus as u128) as u64,
                modulus: *modulus,
            }),
            _ => unreachable!(),
        })
    }

    pub fn try_sub(&self, other: &Scalar) -> Result<Scalar> {
        self.try_add(&-other)
    }

    /// Multiplicative inverse; residues need `gcd(residue, m) = 1`.
    pub fn inv(&self) -> Result<Scalar> {
        match &self.0 {
            Repr::Rational(q) if q.is_zero() => Err(Error::NotInvertible("0".into())),
            Repr::Rational(q) => Ok(Scalar(Repr::Rational(q.recip()))),
            Repr::Mod { residue, modulus } => mod_inverse(*residue, *modulus)
                .map(|r| Scalar(Repr::Mod { residue: r, modulus: *modulus }))
                .ok_or_else(|| Error::NotInvertible(format!("{residue} mod {modulus}"))),
        }
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar> {
        self.try_mul(&other.inv()?)
    }
}

pub(crate) fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    let (mut old_r, mut r) = (a as i128 % m as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    if old_r != 1 {
        return None;
    }
    Some(old_s.rem_euclid(m as i128) as u64)
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rational(q) => write!(f, "{q}"),
            Repr::Mod { residue, .. } => write!(f, "{residue}"),
        }
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match &self.0 {
            Repr::Mod { residue, .. } => serializer.serialize_u64(*residue),
            Repr::Rational(q) if q.is_integer() && q.numer().bits() < 63 => {
                serializer.serialize_i64(q.numer().try_into().expect("fits in i64"))
            }
            Repr::Rational(q) => serializer.serialize_str(&q.to_string()),
        }
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        self.try_add(rhs).expect("scalar field mismatch")
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self.try_sub(rhs).expect("scalar field mismatch")
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        self.try_mul(rhs).expect("scalar field mismatch")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Rational(q) => Scalar(Repr::Rational(-q)),
            Repr::Mod { residue, modulus } => Scalar(Repr::Mod {
                residue: (modulus - residue) % modulus,
                modulus: *modulus,
            }),
        }
    }
}

fn check_vector(field: Field, v: &[Scalar]) -> Result<()> {
    for s in v {
        if s.field() != field {
            return Err(Error::FieldMismatch(field.to_string(), s.field().to_string()));
        }
    }
    Ok(())
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Result<Scalar> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    let field = a.first().map(Scalar::field).unwrap_or(Field::Rational);
    a.iter().zip(b).try_fold(field.zero(), |acc, (x, y)| acc.try_add(&x.try_mul(y)?))
}

/// Dense row-major matrix with every entry in one field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, entries: Vec<Scalar>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: entries.len() });
        }
        check_vector(field, &entries)?;
        Ok(Matrix { field, rows, cols, entries })
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, entries: vec![field.zero(); rows * cols] }
    }

    pub fn from_i64_rows(field: Field, rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: row.len() });
            }
            entries.extend(row.iter().map(|&v| field.from_i64(v)));
        }
        Ok(Matrix { field, rows: rows.len(), cols, entries })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Result<Self> {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            if c.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: c.len() });
            }
            check_vector(field, c)?;
            for (i, v) in c.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        assert_eq!(v.field(), self.field, "entry field must match matrix field");
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        check_vector(self.field, v)?;
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.to_string(), other.field.to_string()));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for j in 0..other.cols {
            let col = other.column(j);
            for (i, v) in self.mul_vec(&col)?.into_iter().enumerate() {
                out.set(i, j, v);
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "{}", row.join(" "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub rank: usize,
    pub pivot_columns: Vec<usize>,
    pub reduced: Matrix,
}

/// Reduced row-echelon form by Gauss-Jordan elimination.
pub fn rref(m: &Matrix) -> Result<Rref> {
    m.field.require_field()?;
    let mut a = m.clone();
    let mut pivots = Vec::new();
    let mut pivot_row = 0;
    for col in 0..a.cols {
        if pivot_row == a.rows {
            break;
        }
        let Some(found) = (pivot_row..a.rows).find(|&r| !a.get(r, col).is_zero()) else {
            continue;
        };
        if found != pivot_row {
            for j in 0..a.cols {
                a.entries.swap(found * a.cols + j, pivot_row * a.cols + j);
            }
        }
        let inv = a.get(pivot_row, col).inv()?;
        for j in col..a.cols {
            let v = a.get(pivot_row, j) * &inv;
            a.set(pivot_row, j, v);
        }
        for r in 0..a.rows {
            if r == pivot_row || a.get(r, col).is_zero() {
                continue;
            }
            let factor = a.get(r, col).clone();
            for j in col..a.cols {
                let v = a.get(r, j) - &(&factor * a.get(pivot_row, j));
                a.set(r, j, v);
            }
        }
        pivots.push(col);
        pivot_row += 1;
    }
    Ok(Rref { rank: pivots.len(), pivot_columns: pivots, reduced: a })
}

/// Incrementally maintained echelon basis of a subspace of `field^dim`.
///
/// Each stored row has a leading 1 at its pivot, and no other stored row has a
/// nonzero entry in that pivot column.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: Field,
    dim: usize,
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl Echelon {
    pub fn new(field: Field, dim: usize) -> Result<Self> {
        field.require_field()?;
        Ok(Echelon { field, dim, rows: Vec::new() })
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    fn reduce(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: v.len() });
        }
        check_vector(self.field, v)?;
        let mut w = v.to_vec();
        for (p, row) in &self.rows {
            if w[*p].is_zero() {
                continue;
            }
            let factor = w[*p].clone();
            for (x, y) in w.iter_mut().zip(row) {
                *x = &*x - &(&factor * y);
            }
        }
        Ok(w)
    }

    pub fn contains(&self, v: &[Scalar]) -> Result<bool> {
        Ok(self.reduce(v)?.iter().all(Scalar::is_zero))
    }

    /// Adds `v` to the spanning set; returns whether the rank grew.
    pub fn insert(&mut self, v: &[Scalar]) -> Result<bool> {
        let mut w = self.reduce(v)?;
        let Some(p) = w.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        let inv = w[p].inv()?;
        for x in w.iter_mut() {
            *x = &*x * &inv;
        }
        for (_, row) in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let factor = row[p].clone();
            for (x, y) in row.iter_mut().zip(&w) {
                *x = &*x - &(&factor * y);
            }
        }
        self.rows.push((p, w));
        Ok(true)
    }
}

/// Whether `v` is a linear combination of `basis`. The empty basis spans `{0}`.
pub fn span_member(v: &[Scalar], basis: &[Vec<Scalar>], field: Field) -> Result<bool> {
    let mut e = Echelon::new(field, v.len())?;
    for b in basis {
        e.insert(b)?;
    }
    e.contains(v)
}

/// Solves `a x = b`, taking every free variable to be zero. `None` if inconsistent.
pub fn solve(a: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch { expected: a.rows, found: b.len() });
    }
    check_vector(a.field, b)?;
    let mut aug = Matrix::zeros(a.field, a.rows, a.cols + 1);
    for (i, bi) in b.iter().enumerate() {
        for j in 0..a.cols {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, a.cols, bi.clone());
    }
    let r = rref(&aug)?;
    if r.pivot_columns.last() == Some(&a.cols) {
        return Ok(None);
    }
    let mut x = vec![a.field.zero(); a.cols];
    for (row, &col) in r.pivot_columns.iter().enumerate() {
        x[col] = r.reduced.get(row, a.cols).clone();
    }
    Ok(Some(x))
}

/// Integer matrix, the form in which constraint systems are written down.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<i64>,
}

impl IntMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<i64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidInput("matrix must have at least one row and column".into()));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: entries.len() });
        }
        Ok(IntMatrix { rows, cols, entries })
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: bad.len() });
        }
        IntMatrix::new(rows.len(), cols, rows.concat())
    }

    /// The single-row matrix `(a_1 ... a_m)`.
    pub fn row_vector(row: &[i64]) -> Self {
        IntMatrix::new(1, row.len(), row.to_vec()).expect("nonempty row")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// Reinterprets the entries in `field` (reducing mod p where needed).
    pub fn over(&self, field: Field) -> Matrix {
        Matrix {
            field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&v| field.from_i64(v)).collect(),
        }
    }

    pub fn to_text(&self, field: Field) -> String {
        let mut s = format!("{} {} {}\n", self.rows, self.cols, field);
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            s.push_str(&row.join(" "));
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| self.row(i).iter().map(ToString::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "{}", rows.join("; "))
    }
}

/// Parses the matrix text format:
///
/// ```text
/// # comment lines start with '#'
/// n m field        (field is Q or F<p>)
/// a11 ... a1m
/// ...
/// ```
///
/// Entries are integers; under `F<p>` they are read mod p when converted.
pub fn parse_matrix_text(text: &str) -> Result<(IntMatrix, Field)> {
    let mut tokens = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .flat_map(str::split_whitespace);
    let mut next = |what: &str| {
        tokens.next().ok_or_else(|| Error::Parse(format!("unexpected end of input reading {what}")))
    };
    let rows: usize = next("row count")?
        .parse()
        .map_err(|e| Error::Parse(format!("row count: {e}")))?;
    let cols: usize = next("column count")?
        .parse()
        .map_err(|e| Error::Parse(format!("column count: {e}")))?;
    let field: Field = next("field")?.parse()?;
    let mut entries = Vec::with_capacity(rows * cols);
    for k in 0..rows * cols {
        let tok = next("entry")?;
        let v: i64 = tok
            .parse()
            .map_err(|e| Error::Parse(format!("entry {k} ({tok:?}): {e}")))?;
        entries.push(v);
    }
    if let Some(extra) = tokens.next() {
        return Err(Error::Parse(format!("trailing token {extra:?} after {rows}x{cols} entries")));
    }
    Ok((IntMatrix::new(rows, cols, entries)?, field))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Signed;

    fn q(v: i64) -> Scalar {
        Field::Rational.from_i64(v)
    }

    #[test]
    fn identity_rref() {
        let m = Matrix::from_i64_rows(Field::Rational, &[vec![1, 0], vec![0, 1]]).unwrap();
        let r = rref(&m).unwrap();
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivot_columns, vec![0, 1]);
        assert_eq!(r.reduced, m);
    }

    #[test]
    fn one_p_minus_p_mod_p() {
        let m = IntMatrix::row_vector(&[1, 5, -5]).over(Field::Modular(5));
        assert_eq!(m.row(0), &[Scalar::modular(1, 5), Scalar::modular(0, 5), Scalar::modular(0, 5)]);
        let r = rref(&m).unwrap();
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivot_columns, vec![0]);
    }

    #[test]
    fn zero_matrix_has_rank_zero() {
        let r = rref(&Matrix::zeros(Field::Modular(7), 3, 3)).unwrap();
        assert_eq!(r.rank, 0);
        assert!(r.pivot_columns.is_empty());
    }

    #[test]
    fn composite_modulus_rejected() {
        let m = Matrix::zeros(Field::Modular(6), 1, 1);
        assert_eq!(rref(&m), Err(Error::CompositeModulus(6)));
        assert_eq!(
            span_member(&[Scalar::modular(1, 4)], &[], Field::Modular(4)),
            Err(Error::CompositeModulus(4))
        );
    }

    #[test]
    fn span_member_examples() {
        assert!(span_member(&[q(0)], &[], Field::Rational).unwrap());
        let f5 = Field::Modular(5);
        assert!(!span_member(&[f5.one()], &[vec![f5.zero()]], f5).unwrap());
        assert!(span_member(&[q(1)], &[vec![q(1)], vec![q(-1)]], Field::Rational).unwrap());
        assert!(!span_member(&[q(1)], &[], Field::Rational).unwrap());
    }

    #[test]
    fn span_member_dimension_mismatch() {
        let err = span_member(&[q(1), q(2)], &[vec![q(1)]], Field::Rational).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn rational_canonical_form() {
        let s = Scalar::rational(4, -6);
        assert_eq!(s, Scalar::rational(-2, 3));
        assert_eq!(s.to_string(), "-2/3");
        let r = s.as_rational().unwrap();
        assert!(r.denom().is_positive());
    }

    #[test]
    fn modular_inverse_and_mismatch() {
        let a = Scalar::modular(3, 7);
        assert_eq!(&a * &a.inv().unwrap(), Scalar::modular(1, 7));
        assert!(Scalar::modular(2, 4).inv().is_err());
        assert!(a.try_add(&Scalar::modular(1, 5)).is_err());
        assert!(a.try_add(&q(1)).is_err());
        assert_eq!(Scalar::modular(-1, 7).residue(), Some(6));
    }

    #[test]
    fn solve_sets_free_variables_to_zero() {
        let a = Matrix::from_i64_rows(Field::Rational, &[vec![1, 1, 0]]).unwrap();
        let x = solve(&a, &[q(3)]).unwrap().unwrap();
        assert_eq!(x, vec![q(3), q(0), q(0)]);
        let a = Matrix::from_i64_rows(Field::Rational, &[vec![0, 0]]).unwrap();
        assert_eq!(solve(&a, &[q(1)]).unwrap(), None);
    }

    #[test]
    fn parse_matrix_file() {
        let text = "# schur\n1 3 Q\n1 1 -1\n";
        let (m, f) = parse_matrix_text(text).unwrap();
        assert_eq!(f, Field::Rational);
        assert_eq!(m, IntMatrix::row_vector(&[1, 1, -1]));
        let (m, f) = parse_matrix_text("2 2 F7\n1 2\n# mid\n3 4").unwrap();
        assert_eq!(f, Field::Modular(7));
        assert_eq!(m.get(1, 0), 3);
        assert!(parse_matrix_text("1 2 Q\n1").is_err());
        assert!(parse_matrix_text("1 1 G3\n1").is_err());
        assert!(parse_matrix_text("1 1 Q\n1 2").is_err());
        let round = parse_matrix_text(&m.to_text(f)).unwrap();
        assert_eq!(round, (m, f));
    }
}
