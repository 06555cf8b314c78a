//! Dense linear algebra over F_p.
//!
//! Kernels, images and stabilized image chains of additive polynomials all
//! reduce to row operations on small matrices (dimension e·m·N at desk
//! scale).  Subspaces are represented by their reduced row echelon basis,
//! which is canonical: two subspaces are equal iff their RREF matrices are.

use crate::error::Error;
use crate::fp;

/// Row-major matrix over F_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GfpMat {
    p: u64,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl GfpMat {
    pub fn zero(p: u64, rows: usize, cols: usize) -> Self {
        GfpMat { p, rows, cols, data: vec![0; rows * cols] }
    }

    pub fn identity(p: u64, n: usize) -> Self {
        let mut m = Self::zero(p, n, n);
        for i in 0..n {
            m[(i, i)] = 1;
        }
        m
    }

    pub fn from_rows(p: u64, rows: Vec<Vec<u64>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |v| v.len());
        let mut data = Vec::with_capacity(r * c);
        for row in &rows {
            assert_eq!(row.len(), c, "ragged rows");
            data.extend(row.iter().map(|&x| x % p));
        }
        GfpMat { p, rows: r, cols: c, data }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[u64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<u64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// Matrix × column vector.
    pub fn apply(&self, v: &[u64]) -> Vec<u64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                let mut acc = 0u64;
                for (j, &x) in v.iter().enumerate() {
                    acc = (acc + self[(i, j)] * x) % self.p;
                }
                acc
            })
            .collect()
    }

    /// Matrix product self·other.
    pub fn matmul(&self, other: &GfpMat) -> GfpMat {
        assert_eq!(self.cols, other.rows);
        assert_eq!(self.p, other.p);
        let mut out = GfpMat::zero(self.p, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = (out[(i, j)] + a * other[(k, j)]) % self.p;
                }
            }
        }
        out
    }

    /// In-place reduction to reduced row echelon form; returns the rank.
    pub fn rref_in_place(&mut self) -> usize {
        let mut pivot_row = 0;
        for col in 0..self.cols {
            // find a pivot
            let Some(r) = (pivot_row..self.rows).find(|&r| self[(r, col)] != 0) else {
                continue;
            };
            self.swap_rows(pivot_row, r);
            let inv = fp::inv(self[(pivot_row, col)], self.p);
            for j in col..self.cols {
                self[(pivot_row, j)] = self[(pivot_row, j)] * inv % self.p;
            }
            for r2 in 0..self.rows {
                if r2 == pivot_row || self[(r2, col)] == 0 {
                    continue;
                }
                let f = self[(r2, col)];
                for j in col..self.cols {
                    let sub = f * self[(pivot_row, j)] % self.p;
                    self[(r2, j)] = (self[(r2, j)] + self.p - sub) % self.p;
                }
            }
            pivot_row += 1;
            if pivot_row == self.rows {
                break;
            }
        }
        pivot_row
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place()
    }

    /// Basis of the null space {v : A·v = 0} as a canonical RREF subspace.
    pub fn kernel(&self) -> Subspace {
        let mut m = self.clone();
        m.rref_in_place();
        // pivot columns
        let mut pivots = Vec::new();
        let mut col = 0;
        for r in 0..m.rows {
            while col < m.cols && m[(r, col)] == 0 {
                col += 1;
            }
            if col == m.cols {
                break;
            }
            pivots.push((r, col));
            col += 1;
        }
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        let mut basis = Vec::new();
        for free in 0..m.cols {
            if pivot_cols.contains(&free) {
                continue;
            }
            let mut v = vec![0u64; m.cols];
            v[free] = 1;
            for &(r, c) in &pivots {
                // x_c = −Σ coeff·x_free
                v[c] = fp::neg(m[(r, free)], self.p);
            }
            basis.push(v);
        }
        Subspace::from_vectors(self.p, self.cols, basis)
    }

    /// Column space as a canonical subspace of F_p^rows.
    pub fn column_space(&self) -> Subspace {
        let cols: Vec<Vec<u64>> = (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)]).collect())
            .collect();
        Subspace::from_vectors(self.p, self.rows, cols)
    }
}

impl std::ops::Index<(usize, usize)> for GfpMat {
    type Output = u64;
    fn index(&self, (i, j): (usize, usize)) -> &u64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for GfpMat {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut u64 {
        &mut self.data[i * self.cols + j]
    }
}

/// A linear subspace of F_p^dim held as its canonical RREF basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace {
    p: u64,
    dim_ambient: usize,
    /// RREF rows, zero rows dropped; empty for the zero space.
    basis: Vec<Vec<u64>>,
}

impl Subspace {
    pub fn from_vectors(p: u64, dim_ambient: usize, vectors: Vec<Vec<u64>>) -> Self {
        if vectors.is_empty() {
            return Subspace { p, dim_ambient, basis: vec![] };
        }
        let mut m = GfpMat::from_rows(p, vectors);
        let rank = m.rref_in_place();
        let basis = (0..rank).map(|i| m.row(i).to_vec()).collect();
        Subspace { p, dim_ambient, basis }
    }

    pub fn zero(p: u64, dim_ambient: usize) -> Self {
        Subspace { p, dim_ambient, basis: vec![] }
    }

    pub fn full(p: u64, dim_ambient: usize) -> Self {
        Subspace::from_vectors(p, dim_ambient, GfpMat::identity(p, dim_ambient).rows_vec())
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.dim_ambient
    }

    pub fn basis(&self) -> &[Vec<u64>] {
        &self.basis
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.dim_ambient
    }

    /// Vector membership by reduction against the RREF basis.
    pub fn contains(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.dim_ambient);
        let mut v = v.to_vec();
        for row in &self.basis {
            let lead = row.iter().position(|&x| x != 0).unwrap();
            if v[lead] != 0 {
                let f = v[lead]; // row has pivot 1
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = (*x + self.p - f * r % self.p) % self.p;
                }
            }
        }
        v.iter().all(|&x| x == 0)
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Image of the subspace under a matrix.
    pub fn image_under(&self, a: &GfpMat) -> Subspace {
        let vecs = self.basis.iter().map(|v| a.apply(v)).collect();
        Subspace::from_vectors(self.p, a.nrows(), vecs)
    }

    /// Enumerate all p^dim points; error above the guard.
    pub fn points(&self, guard: u64) -> crate::Result<Vec<Vec<u64>>> {
        let count = (self.p as u128)
            .checked_pow(self.dim() as u32)
            .unwrap_or(u128::MAX);
        if count > guard as u128 {
            return Err(Error::EnumerationTooLarge(count, guard));
        }
        let mut out = Vec::with_capacity(count as usize);
        let k = self.dim();
        let mut digits = vec![0u64; k];
        loop {
            let mut v = vec![0u64; self.dim_ambient];
            for (d, row) in digits.iter().zip(&self.basis) {
                if *d == 0 {
                    continue;
                }
                for (x, &r) in v.iter_mut().zip(row) {
                    *x = (*x + d * r) % self.p;
                }
            }
            out.push(v);
            let mut i = 0;
            loop {
                if i == k {
                    return Ok(out);
                }
                digits[i] += 1;
                if digits[i] < self.p {
                    break;
                }
                digits[i] = 0;
                i += 1;
            }
        }
    }
}
