//! Dense exact linear algebra over a [`FieldSpec`].
//!
//! Elimination always pivots on the first nonzero entry of the leftmost
//! remaining column, so every result is reproducible bit for bit.

use std::fmt;

use thiserror::Error;

use crate::scalar::{FieldSpec, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("field mismatch: expected {expected}, found {found}")]
    FieldMismatch { expected: FieldSpec, found: FieldSpec },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// A dense row-major matrix whose entries all share one field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Output of [`Matrix::rref`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Matrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

pub(crate) fn check_fields(field: FieldSpec, xs: &[Scalar]) -> Result<(), LinalgError> {
    match xs.iter().find(|x| x.field() != field) {
        Some(x) => Err(LinalgError::FieldMismatch {
            expected: field,
            found: x.field(),
        }),
        None => Ok(()),
    }
}

impl Matrix {
    pub fn new(
        field: FieldSpec,
        rows: usize,
        cols: usize,
        data: Vec<Scalar>,
    ) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        check_fields(field, &data)?;
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self, LinalgError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(LinalgError::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, r, c, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(
        field: FieldSpec,
        rows: usize,
        columns: &[Vec<Scalar>],
    ) -> Result<Self, LinalgError> {
        let cols = columns.len();
        let mut m = Matrix::zeros(field, rows, cols);
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(LinalgError::DimensionMismatch(format!(
                    "column {j} has length {}, expected {rows}",
                    col.len()
                )));
            }
            check_fields(field, col)?;
            for (i, x) in col.iter().enumerate() {
                m.data[i * cols + j] = x.clone();
            }
        }
        Ok(m)
    }

    /// Convenience constructor from small integers.
    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let data = rows
            .iter()
            .map(|row| row.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Matrix::from_rows(field, data).expect("rectangular integer matrix")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Scalar) {
        assert_eq!(value.field(), self.field, "field mismatch in Matrix::set");
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.data[c * self.rows + r] = self.get(r, c).clone();
            }
        }
        t
    }

    fn same_field(&self, other: &Matrix) -> Result<(), LinalgError> {
        if self.field != other.field {
            return Err(LinalgError::FieldMismatch {
                expected: self.field,
                found: other.field,
            });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.same_field(other)?;
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j].add_mul_assign(b, a);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        check_fields(self.field, v)?;
        Ok(self.apply(v))
    }

    /// `self · v` without checks; callers guarantee shapes.
    pub(crate) fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![self.field.zero(); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    o.add_mul_assign(a, x);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.same_field(other)?;
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(LinalgError::DimensionMismatch("shapes differ in sum".into()));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        Ok(self.with_data(data))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, LinalgError> {
        self.add(&other.scale(&self.field.from_i64(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        let data = self.data.iter().map(|a| a * s).collect();
        self.with_data(data)
    }

    fn with_data(&self, data: Vec<Scalar>) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Reduced row-echelon form with rank and pivot columns.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(p) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, p);
            let inv = m.get(row, col).inv().expect("pivot is nonzero");
            for c in col..m.cols {
                let x = m.get(row, c) * &inv;
                m.data[row * m.cols + c] = x;
            }
            let pivot_row: Vec<Scalar> = m.row(row).to_vec();
            for r in 0..m.rows {
                if r == row {
                    continue;
                }
                let factor = -m.get(r, col);
                if factor.is_zero() {
                    continue;
                }
                for c in col..m.cols {
                    if !pivot_row[c].is_zero() {
                        m.data[r * m.cols + c].add_mul_assign(&pivot_row[c], &factor);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Rref {
            matrix: m,
            rank: pivots.len(),
            pivots,
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Two-sided inverse of a square matrix, `None` when singular.
    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        let mut data = Vec::with_capacity(n * 2 * n);
        for r in 0..n {
            data.extend_from_slice(self.row(r));
            data.extend((0..n).map(|c| if c == r { self.field.one() } else { self.field.zero() }));
        }
        let aug = Matrix::new(self.field, n, 2 * n, data).expect("square augmentation");
        let Rref { matrix, rank, pivots } = aug.rref();
        if rank < n || pivots.iter().any(|&p| p >= n) {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for r in 0..n {
            for c in 0..n {
                inv.data[r * n + c] = matrix.get(r, n + c).clone();
            }
        }
        Some(inv)
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{v : self · v = 0}`, one vector per free column, with a 1 in
    /// that column and zeros in the other free columns.
    pub fn nullspace_basis(&self) -> Vec<Vec<Scalar>> {
        let Rref { matrix, pivots, .. } = self.rref();
        nullspace_from_rref(self.field, self.cols, &pivots, |i, c| matrix.get(i, c))
    }

    /// A solution of `self · x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Vec<Scalar>>, LinalgError> {
        if b.len() != self.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "right-hand side has length {}, expected {}",
                b.len(),
                self.rows
            )));
        }
        check_fields(self.field, b)?;
        let mut data = Vec::with_capacity(self.rows * (self.cols + 1));
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.push(b[r].clone());
        }
        let aug = Matrix::new(self.field, self.rows, self.cols + 1, data)?;
        let Rref { matrix, pivots, .. } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (i, &p) in pivots.iter().enumerate() {
            x[p] = matrix.get(i, self.cols).clone();
        }
        Ok(Some(x))
    }
}

pub(crate) fn nullspace_from_rref<'a>(
    field: FieldSpec,
    cols: usize,
    pivots: &[usize],
    entry: impl Fn(usize, usize) -> &'a Scalar,
) -> Vec<Vec<Scalar>> {
    let mut is_pivot = vec![false; cols];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![field.zero(); cols];
            v[free] = field.one();
            for (i, &p) in pivots.iter().enumerate() {
                v[p] = -entry(i, free);
            }
            v
        })
        .collect()
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let row: Vec<String> = self.row(r).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Incremental Gauss-Jordan elimination.
///
/// Rows are pushed one at a time and reduced against the current basis, which
/// is kept in reduced row-echelon form. Since the RREF of a row space is unique
/// the final state coincides with [`Matrix::rref`] of the stacked rows, without
/// ever materializing the (often tall, sparse) full system.
#[derive(Clone, Debug)]
pub struct RowReducer {
    field: FieldSpec,
    cols: usize,
    // Sorted by pivot column.
    rows: Vec<(usize, Vec<Scalar>)>,
}

impl RowReducer {
    pub fn new(field: FieldSpec, cols: usize) -> Self {
        RowReducer {
            field,
            cols,
            rows: Vec::new(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn pivots(&self) -> Vec<usize> {
        self.rows.iter().map(|(p, _)| *p).collect()
    }

    /// Reduces `row` modulo the current span without inserting it.
    pub fn reduce(&self, mut row: Vec<Scalar>) -> Vec<Scalar> {
        debug_assert_eq!(row.len(), self.cols);
        for (p, basis) in &self.rows {
            if row[*p].is_zero() {
                continue;
            }
            let factor = -&row[*p];
            for (c, b) in basis.iter().enumerate().skip(*p) {
                if !b.is_zero() {
                    row[c].add_mul_assign(b, &factor);
                }
            }
        }
        row
    }

    pub fn contains(&self, row: &[Scalar]) -> bool {
        self.reduce(row.to_vec()).iter().all(Scalar::is_zero)
    }

    /// Inserts a row; returns `true` when it increased the rank.
    pub fn push(&mut self, row: Vec<Scalar>) -> bool {
        assert_eq!(row.len(), self.cols, "row length mismatch");
        let mut row = self.reduce(row);
        let Some(p) = row.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = row[p].inv().expect("nonzero pivot");
        for x in row.iter_mut().skip(p) {
            *x = &*x * &inv;
        }
        for (_, basis) in self.rows.iter_mut() {
            if basis[p].is_zero() {
                continue;
            }
            let factor = -&basis[p];
            for (c, r) in row.iter().enumerate().skip(p) {
                if !r.is_zero() {
                    basis[c].add_mul_assign(r, &factor);
                }
            }
        }
        let at = self.rows.partition_point(|(q, _)| *q < p);
        self.rows.insert(at, (p, row));
        true
    }

    /// The nonzero rows of the reduced row-echelon form.
    pub fn basis(&self) -> Vec<Vec<Scalar>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }

    pub fn nullspace_basis(&self) -> Vec<Vec<Scalar>> {
        let pivots = self.pivots();
        nullspace_from_rref(self.field, self.cols, &pivots, |i, c| &self.rows[i].1[c])
    }

    pub fn into_matrix(self) -> Matrix {
        let rank = self.rows.len();
        let data = self.rows.into_iter().flat_map(|(_, r)| r).collect();
        Matrix::new(self.field, rank, self.cols, data).expect("consistent reducer rows")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rational
    }

    #[test]
    fn rref_identity() {
        let id = Matrix::identity(q(), 2);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank, 2);
        assert_eq!(r.pivots, vec![0, 1]);
    }

    #[test]
    fn rref_zero() {
        let z = Matrix::zeros(q(), 3, 3);
        let r = z.rref();
        assert_eq!(r.matrix, z);
        assert_eq!(r.rank, 0);
        assert!(r.pivots.is_empty());
    }

    #[test]
    fn rref_rank_one() {
        let m = Matrix::from_i64(q(), &[&[1, 2], &[2, 4]]);
        let r = m.rref();
        assert_eq!(r.matrix, Matrix::from_i64(q(), &[&[1, 2], &[0, 0]]));
        assert_eq!(r.rank, 1);
        assert_eq!(r.pivots, vec![0]);
    }

    #[test]
    fn nullspace_examples() {
        assert!(Matrix::identity(q(), 4).nullspace_basis().is_empty());
        assert_eq!(Matrix::zeros(q(), 2, 3).nullspace_basis().len(), 3);
        let f3 = FieldSpec::prime(3).unwrap();
        let ns = Matrix::from_i64(f3, &[&[1, 1]]).nullspace_basis();
        assert_eq!(ns, vec![vec![f3.from_i64(2), f3.from_i64(1)]]);
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(q(), 2);
        let b = vec![q().from_i64(3), q().from_i64(-1)];
        assert_eq!(id.solve(&b).unwrap(), Some(b.clone()));
        assert_eq!(Matrix::zeros(q(), 2, 2).solve(&b).unwrap(), None);
        let d = Matrix::from_i64(q(), &[&[2, 0], &[0, 3]]);
        let x = d.solve(&[q().one(), q().one()]).unwrap().unwrap();
        assert_eq!(x, vec![q().fraction(1, 2).unwrap(), q().fraction(1, 3).unwrap()]);
        assert!(matches!(
            d.solve(&[q().one()]),
            Err(LinalgError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn inverse_of_small_matrices() {
        let m = Matrix::from_i64(q(), &[&[2, 1], &[1, 1]]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(q(), 2));
        assert!(Matrix::from_i64(q(), &[&[1, 2], &[2, 4]]).inverse().is_none());
        assert_eq!(Matrix::zeros(q(), 0, 0).inverse(), Some(Matrix::zeros(q(), 0, 0)));
    }

    #[test]
    fn mixed_fields_rejected() {
        let data = vec![q().one(), FieldSpec::Prime(2).one()];
        assert!(matches!(
            Matrix::new(q(), 1, 2, data),
            Err(LinalgError::FieldMismatch { .. })
        ));
        let a = Matrix::identity(q(), 2);
        let b = Matrix::identity(FieldSpec::Prime(3), 2);
        assert!(matches!(a.mul(&b), Err(LinalgError::FieldMismatch { .. })));
    }

    #[test]
    fn reducer_matches_batch_rref() {
        let m = Matrix::from_i64(
            q(),
            &[&[0, 2, 4, 1], &[1, 1, 1, 1], &[1, 3, 5, 2], &[0, 0, 0, 0], &[2, 0, -2, 3]],
        );
        let mut red = RowReducer::new(q(), 4);
        for r in 0..m.rows() {
            red.push(m.row(r).to_vec());
        }
        let batch = m.rref();
        assert_eq!(red.rank(), batch.rank);
        assert_eq!(red.pivots(), batch.pivots);
        assert_eq!(red.nullspace_basis(), m.nullspace_basis());
        for i in 0..batch.rank {
            assert_eq!(red.basis()[i], batch.matrix.row(i));
        }
    }
}
