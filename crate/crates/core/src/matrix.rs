//! Dense matrices over GF(q).
//!
//! All matrices in this crate are small (at most (r+1) x n with r <= 7 and
//! n the size of a cap), so a plain row-major byte buffer with Gaussian
//! elimination is entirely adequate.

use crate::field::PrimeField;

/// A rows x cols matrix with entries in GF(q).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<u8>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u8>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        debug_assert!(rows.iter().all(|row| row.len() == c));
        Mat {
            rows: r,
            cols: c,
            data: rows.concat(),
        }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(cols: &[Vec<u8>]) -> Mat {
        let c = cols.len();
        let r = cols.first().map_or(0, |col| col.len());
        let mut m = Mat::zero(r, c);
        for (j, col) in cols.iter().enumerate() {
            for (i, &v) in col.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u8> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn mul(&self, other: &Mat, f: &PrimeField) -> Mat {
        debug_assert_eq!(self.cols, other.rows);
        let mut out = Mat::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let t = f.mul(a, other[(k, j)]);
                    out[(i, j)] = f.add(out[(i, j)], t);
                }
            }
        }
        out
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[u8], f: &PrimeField) -> Vec<u8> {
        debug_assert_eq!(self.cols, v.len());
        let mut out = vec![0u8; self.rows];
        for i in 0..self.rows {
            let mut acc = 0u8;
            for j in 0..self.cols {
                acc = f.add(acc, f.mul(self[(i, j)], v[j]));
            }
            out[i] = acc;
        }
        out
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn scale_row(&mut self, i: usize, c: u8, f: &PrimeField) {
        for j in 0..self.cols {
            self[(i, j)] = f.mul(self[(i, j)], c);
        }
    }

    /// row i -= c * row k
    fn sub_scaled_row(&mut self, i: usize, k: usize, c: u8, f: &PrimeField) {
        for j in 0..self.cols {
            let t = f.mul(c, self[(k, j)]);
            self[(i, j)] = f.sub(self[(i, j)], t);
        }
    }

    /// Reduces in place to reduced row echelon form; returns the rank.
    pub fn row_reduce(&mut self, f: &PrimeField) -> usize {
        self.row_reduce_cols(self.cols, f)
    }

    /// Row reduction that only places pivots in the first `limit` columns
    /// (rows are still transformed across their full width). Needed when
    /// the matrix is augmented and the extra columns must not be pivoted.
    pub fn row_reduce_cols(&mut self, limit: usize, f: &PrimeField) -> usize {
        let mut pivot_row = 0;
        for col in 0..limit {
            if pivot_row == self.rows {
                break;
            }
            let Some(src) = (pivot_row..self.rows).find(|&i| self[(i, col)] != 0) else {
                continue;
            };
            self.swap_rows(pivot_row, src);
            let inv = f.inv(self[(pivot_row, col)]);
            self.scale_row(pivot_row, inv, f);
            for i in 0..self.rows {
                if i != pivot_row && self[(i, col)] != 0 {
                    let c = self[(i, col)];
                    self.sub_scaled_row(i, pivot_row, c, f);
                }
            }
            pivot_row += 1;
        }
        pivot_row
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            let t = self[(a, j)];
            self[(a, j)] = self[(b, j)];
            self[(b, j)] = t;
        }
    }

    pub fn rank(&self, f: &PrimeField) -> usize {
        self.clone().row_reduce(f)
    }

    /// Inverse of a square matrix, or None if singular.
    pub fn inverse(&self, f: &PrimeField) -> Option<Mat> {
        debug_assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Mat::zero(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, n + i)] = 1;
        }
        if aug.row_reduce_cols(n, f) < n {
            return None;
        }
        let mut inv = Mat::zero(n, n);
        for i in 0..n {
            for j in 0..n {
                inv[(i, j)] = aug[(i, n + j)];
            }
        }
        Some(inv)
    }

    /// Solves self * x = b when b lies in the column space.
    pub fn solve(&self, b: &[u8], f: &PrimeField) -> Option<Vec<u8>> {
        debug_assert_eq!(self.rows, b.len());
        let mut aug = Mat::zero(self.rows, self.cols + 1);
        for i in 0..self.rows {
            for j in 0..self.cols {
                aug[(i, j)] = self[(i, j)];
            }
            aug[(i, self.cols)] = b[i];
        }
        aug.row_reduce_cols(self.cols, f);
        let mut x = vec![0u8; self.cols];
        let mut row = 0;
        for col in 0..self.cols {
            if row < self.rows && aug[(row, col)] == 1 && (0..col).all(|j| aug[(row, j)] == 0) {
                x[col] = aug[(row, self.cols)];
                row += 1;
            }
        }
        // Inconsistent system leaves a row 0 .. 0 | c with c != 0.
        for i in row..self.rows {
            if (0..self.cols).all(|j| aug[(i, j)] == 0) && aug[(i, self.cols)] != 0 {
                return None;
            }
        }
        if self.apply(&x, f) == b {
            Some(x)
        } else {
            None
        }
    }
}

impl std::ops::Index<(usize, usize)> for Mat {
    type Output = u8;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &u8 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Mat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u8 {
        &mut self.data[i * self.cols + j]
    }
}

/// Incrementally maintained echelon basis, used to test whether adding a
/// vector increases the rank of a growing set.
#[derive(Debug, Clone)]
pub struct Echelon {
    f: PrimeField,
    dim: usize,
    /// Reduced rows with their pivot columns, sorted by pivot.
    rows: Vec<(usize, Vec<u8>)>,
}

impl Echelon {
    pub fn new(f: &PrimeField, dim: usize) -> Echelon {
        Echelon {
            f: f.clone(),
            dim,
            rows: Vec::with_capacity(dim),
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces v against the basis; returns the residue.
    pub fn reduce(&self, v: &[u8]) -> Vec<u8> {
        debug_assert_eq!(v.len(), self.dim);
        let mut v = v.to_vec();
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for j in 0..self.dim {
                    let t = self.f.mul(c, row[j]);
                    v[j] = self.f.sub(v[j], t);
                }
            }
        }
        v
    }

    /// Whether v lies in the current span.
    pub fn contains(&self, v: &[u8]) -> bool {
        self.reduce(v).iter().all(|&x| x == 0)
    }

    /// Adds v to the basis; returns false if v was already in the span.
    pub fn insert(&mut self, v: &[u8]) -> bool {
        let mut res = self.reduce(v);
        let Some(pivot) = res.iter().position(|&x| x != 0) else {
            return false;
        };
        let inv = self.f.inv(res[pivot]);
        for x in res.iter_mut() {
            *x = self.f.mul(*x, inv);
        }
        self.rows.push((pivot, res));
        self.rows.sort_by_key(|(p, _)| *p);
        true
    }
}
