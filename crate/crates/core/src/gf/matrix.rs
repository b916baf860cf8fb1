//! Dense matrices over a [`Field`], with row reduction and span queries.

use std::fmt;

use rand::Rng;

use super::field::{Elem, Field};
use crate::error::GfError;

/// A dense row-major matrix over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}x{} over {:?}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            writeln!(f, "  {:?}", self.row(r))?;
        }
        Ok(())
    }
}

/// Result of reducing a matrix to reduced row-echelon form.
#[derive(Clone, Debug)]
pub struct Echelon {
    /// The reduced matrix; the first `pivots.len()` rows are nonzero.
    pub reduced: Matrix,
    /// Pivot column of each nonzero row, strictly increasing.
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: &Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, 1);
        }
        m
    }

    pub fn from_vec(field: &Field, rows: usize, cols: usize, data: Vec<Elem>) -> Result<Self, GfError> {
        if data.len() != rows * cols {
            return Err(GfError::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(&bad) = data.iter().find(|&&v| !field.contains(v)) {
            return Err(GfError::InvalidEntry {
                value: bad as u32,
                q: field.order(),
            });
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from integer rows, validating every entry.
    pub fn from_rows(field: &Field, rows: &[Vec<u32>]) -> Result<Self, GfError> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(GfError::DimensionMismatch("ragged rows".into()));
            }
            for &v in row {
                if v as usize >= field.order() {
                    return Err(GfError::InvalidEntry {
                        value: v,
                        q: field.order(),
                    });
                }
                data.push(v as Elem);
            }
        }
        Self::from_vec(field, rows.len(), cols, data)
    }

    pub fn random<R: Rng + ?Sized>(field: &Field, rows: usize, cols: usize, rng: &mut R) -> Self {
        let data = (0..rows * cols).map(|_| field.random(rng)).collect();
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        }
    }

    /// Uniformly random invertible matrix, by rejection.
    pub fn random_invertible<R: Rng + ?Sized>(field: &Field, n: usize, rng: &mut R) -> Self {
        loop {
            let m = Self::random(field, n, n, rng);
            if m.rank() == n {
                return m;
            }
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn data(&self) -> &[Elem] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Elem {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Elem) {
        debug_assert!(self.field.contains(v));
        self.data[r * self.cols + c] = v;
    }

    #[inline]
    pub fn row(&self, r: usize) -> &[Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(|&v| v as u32).collect())
            .collect()
    }

    /// Stacks matrices vertically. All inputs must have `cols` columns.
    pub fn vstack<'a, I>(field: &Field, cols: usize, parts: I) -> Result<Self, GfError>
    where
        I: IntoIterator<Item = &'a Matrix>,
    {
        let mut data = Vec::new();
        let mut rows = 0;
        for p in parts {
            if p.cols != cols {
                return Err(GfError::DimensionMismatch(format!(
                    "stacking {} columns onto {cols}",
                    p.cols
                )));
            }
            data.extend_from_slice(&p.data);
            rows += p.rows;
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    pub fn hstack(&self, other: &Matrix) -> Result<Self, GfError> {
        if self.rows != other.rows {
            return Err(GfError::DimensionMismatch("hstack row counts differ".into()));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for r in 0..self.rows {
            data.extend_from_slice(self.row(r));
            data.extend_from_slice(other.row(r));
        }
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols,
            data,
        })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    pub fn select_rows(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &r in idx {
            data.extend_from_slice(self.row(r));
        }
        Matrix {
            field: self.field.clone(),
            rows: idx.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn select_cols(&self, idx: &[usize]) -> Self {
        let mut data = Vec::with_capacity(idx.len() * self.rows);
        for r in 0..self.rows {
            let row = self.row(r);
            data.extend(idx.iter().map(|&c| row[c]));
        }
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: idx.len(),
            data,
        }
    }

    /// Matrix product. Panics if the inner dimensions disagree.
    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "matrix product dimension mismatch");
        let f = &self.field;
        let mut out = Matrix::zeros(f, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a == 0 {
                    continue;
                }
                let src = rhs.row(k);
                let dst = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (d, &s) in dst.iter_mut().zip(src) {
                    *d = f.mul_add(a, s, *d);
                }
            }
        }
        out
    }

    /// Row vector times matrix.
    pub fn vec_mul(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.rows, "vector length mismatch");
        let f = &self.field;
        let mut out = vec![0; self.cols];
        for (k, &a) in v.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (d, &s) in out.iter_mut().zip(self.row(k)) {
                *d = f.mul_add(a, s, *d);
            }
        }
        out
    }

    /// Reduced row-echelon form. Pivots are chosen as the first nonzero
    /// entry in column order, so the result is deterministic.
    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let pivots = m.reduce_in_place(self.cols);
        Echelon { reduced: m, pivots }
    }

    // Gauss-Jordan on the first `limit` columns; returns pivot columns.
    fn reduce_in_place(&mut self, limit: usize) -> Vec<usize> {
        let f = self.field.clone();
        let cols = self.cols;
        let mut pivots = Vec::new();
        let mut lead = 0;
        for c in 0..limit {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| self.get(r, c) != 0) else {
                continue;
            };
            if p != lead {
                for j in 0..cols {
                    self.data.swap(p * cols + j, lead * cols + j);
                }
            }
            let inv = f.inv(self.get(lead, c)).unwrap();
            for j in 0..cols {
                let v = self.get(lead, j);
                self.set(lead, j, f.mul(v, inv));
            }
            for r in 0..self.rows {
                if r == lead {
                    continue;
                }
                let factor = self.get(r, c);
                if factor == 0 {
                    continue;
                }
                let nf = f.neg(factor);
                for j in c..cols {
                    let v = f.mul_add(nf, self.data[lead * cols + j], self.data[r * cols + j]);
                    self.data[r * cols + j] = v;
                }
            }
            pivots.push(c);
            lead += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        let mut m = self.clone();
        m.forward_rank()
    }

    // Forward elimination only; cheaper than full reduction when only the
    // rank is needed.
    fn forward_rank(&mut self) -> usize {
        let f = self.field.clone();
        let cols = self.cols;
        let mut lead = 0;
        for c in 0..cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| self.data[r * cols + c] != 0) else {
                continue;
            };
            if p != lead {
                for j in c..cols {
                    self.data.swap(p * cols + j, lead * cols + j);
                }
            }
            let inv = f.inv(self.data[lead * cols + c]).unwrap();
            for r in lead + 1..self.rows {
                let factor = self.data[r * cols + c];
                if factor == 0 {
                    continue;
                }
                let nf = f.neg(f.mul(factor, inv));
                for j in c..cols {
                    let v = f.mul_add(nf, self.data[lead * cols + j], self.data[r * cols + j]);
                    self.data[r * cols + j] = v;
                }
            }
            lead += 1;
        }
        lead
    }

    /// Canonical full-row-rank basis of the row space (the nonzero rows of
    /// the reduced row-echelon form).
    pub fn row_space_basis(&self) -> Matrix {
        let e = self.echelon();
        let idx: Vec<usize> = (0..e.pivots.len()).collect();
        e.reduced.select_rows(&idx)
    }

    /// True iff the two matrices have the same row space.
    pub fn same_row_space(&self, other: &Matrix) -> bool {
        self.cols == other.cols && self.row_space_basis() == other.row_space_basis()
    }

    pub fn inverse(&self) -> Result<Matrix, GfError> {
        if self.rows != self.cols {
            return Err(GfError::DimensionMismatch("inverse of non-square matrix".into()));
        }
        let n = self.rows;
        let mut aug = self.hstack(&Matrix::identity(&self.field, n))?;
        let pivots = aug.reduce_in_place(n);
        if pivots.len() < n {
            return Err(GfError::Singular);
        }
        let right: Vec<usize> = (n..2 * n).collect();
        Ok(aug.select_cols(&right))
    }

    /// Solves `X * basis = target` for `X`, if a solution exists.
    pub fn solve_left(target: &Matrix, basis: &Matrix) -> Result<Option<Matrix>, GfError> {
        if target.cols != basis.cols {
            return Err(GfError::DimensionMismatch(format!(
                "target has {} columns, basis has {}",
                target.cols, basis.cols
            )));
        }
        let f = &basis.field;
        let (b, c) = (basis.rows, basis.cols);
        // Track the row combinations alongside the reduction.
        let mut aug = basis.hstack(&Matrix::identity(f, b))?;
        let pivots = aug.reduce_in_place(c);
        let mut x = Matrix::zeros(f, target.rows, b);
        for t in 0..target.rows {
            let mut residual = target.row(t).to_vec();
            let mut coeff = vec![0; b];
            for (i, &pc) in pivots.iter().enumerate() {
                let factor = residual[pc];
                if factor == 0 {
                    continue;
                }
                let nf = f.neg(factor);
                let arow = aug.row(i);
                for (j, r) in residual.iter_mut().enumerate() {
                    *r = f.mul_add(nf, arow[j], *r);
                }
                for (j, k) in coeff.iter_mut().enumerate() {
                    *k = f.mul_add(factor, arow[c + j], *k);
                }
            }
            if residual.iter().any(|&v| v != 0) {
                return Ok(None);
            }
            x.data[t * b..(t + 1) * b].copy_from_slice(&coeff);
        }
        Ok(Some(x))
    }
}

/// True iff every row of `target` lies in the row space of `basis`.
pub fn in_span(target: &Matrix, basis: &Matrix) -> Result<bool, GfError> {
    if target.cols() != basis.cols() {
        return Err(GfError::DimensionMismatch(format!(
            "target has {} columns, basis has {}",
            target.cols(),
            basis.cols()
        )));
    }
    if target.is_zero() {
        return Ok(true);
    }
    let stacked = Matrix::vstack(basis.field(), basis.cols(), [basis, target])?;
    Ok(stacked.rank() == basis.rank())
}

/// Rank of a matrix; free-function form of [`Matrix::rank`].
pub fn mat_rank(m: &Matrix) -> usize {
    m.rank()
}
