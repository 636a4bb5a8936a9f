use std::fmt;

use super::{Elem, Ring};
use crate::error::{Error, Result};

/// Dense row-major matrix of ring elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Elem>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::structural(format!(
                "matrix {rows}x{cols} needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Matrix { rows, cols, data })
    }

    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Matrix {
        Matrix { rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Matrix {
        let mut m = Matrix::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    /// Builds from rows; all rows must share a length (`cols` is used when there are none).
    pub fn from_rows(rows: Vec<Vec<Elem>>, cols: usize) -> Result<Matrix> {
        let r = rows.len();
        if rows.iter().any(|row| row.len() != cols) {
            return Err(Error::structural("ragged matrix rows"));
        }
        Matrix::new(r, cols, rows.into_iter().flatten().collect())
    }

    /// Builds the matrix whose columns are `cols`, each of length `rows`.
    pub fn from_columns(columns: &[Vec<Elem>], rows: usize) -> Result<Matrix> {
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::structural("ragged matrix columns"));
        }
        let c = columns.len();
        let mut data = Vec::with_capacity(rows * c);
        for i in 0..rows {
            for col in columns {
                data.push(col[i].clone());
            }
        }
        Matrix::new(rows, c, data)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Elem] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Elem>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j).clone());
            }
        }
        Matrix { rows: self.cols, cols: self.rows, data }
    }

    pub fn mul(&self, ring: &Ring, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::structural(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let cur = out.get(i, j);
                    let next = ring.add(cur, &ring.mul(a, b));
                    out.set(i, j, next);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, ring: &Ring, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                let mut acc = ring.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !ring.is_zero(a) && !ring.is_zero(b) {
                        acc = ring.add(&acc, &ring.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn is_identity(&self, ring: &Ring) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        ring.is_one(x)
                    } else {
                        ring.is_zero(x)
                    }
                })
            })
    }

    pub fn display(&self, ring: &Ring) -> String {
        let rows: Vec<String> = (0..self.rows).map(|i| ring.vec_display(self.row(i))).collect();
        format!("[{}]", rows.join(", "))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}x{} matrix", self.rows, self.cols)
    }
}
