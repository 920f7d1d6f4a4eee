//! Dense integer matrices over arbitrary-precision integers, with Smith
//! normal form, integer linear solving and integer kernels.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// A dense row-major matrix of `BigInt`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ZMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl fmt::Debug for ZMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZMatrix{}x{}{:?}", self.rows, self.cols, self.to_rows())
    }
}

impl ZMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ZMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from `i64` rows. Panics on ragged input.
    pub fn from_rows(rows: &[Vec<i64>]) -> Self {
        let c = rows.first().map_or(0, Vec::len);
        Self::from_rows_with_cols(rows, c)
    }

    /// Like [`ZMatrix::from_rows`] but with an explicit column count, so that
    /// `0 x n` matrices can be expressed.
    pub fn from_rows_with_cols(rows: &[Vec<i64>], cols: usize) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged matrix row {i}");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = BigInt::from(*v);
            }
        }
        m
    }

    pub fn from_big_rows(rows: Vec<Vec<BigInt>>, cols: usize) -> Self {
        let r = rows.len();
        let mut data = Vec::with_capacity(r * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged matrix");
            data.extend(row);
        }
        ZMatrix {
            rows: r,
            cols,
            data,
        }
    }

    pub fn from_columns(rows: usize, cols: &[Vec<BigInt>]) -> Self {
        let mut m = Self::zeros(rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
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

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<BigInt>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &ZMatrix) -> ZMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = ZMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, other: &ZMatrix) -> ZMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ZMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &ZMatrix) -> ZMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        ZMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> ZMatrix {
        ZMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| -a).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> ZMatrix {
        ZMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &ZMatrix) -> ZMatrix {
        assert_eq!(self.rows, other.rows, "hstack row mismatch");
        let mut out = ZMatrix::zeros(self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)].clone();
            }
            for j in 0..other.cols {
                out[(i, self.cols + j)] = other[(i, j)].clone();
            }
        }
        out
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &ZMatrix) -> ZMatrix {
        assert_eq!(self.cols, other.cols, "vstack column mismatch");
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        ZMatrix {
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn block_diag(blocks: &[&ZMatrix]) -> ZMatrix {
        let r: usize = blocks.iter().map(|b| b.rows).sum();
        let c: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = ZMatrix::zeros(r, c);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out[(r0 + i, c0 + j)] = b[(i, j)].clone();
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    /// Rows `r0..r1` as a new matrix.
    pub fn row_range(&self, r0: usize, r1: usize) -> ZMatrix {
        ZMatrix {
            rows: r1 - r0,
            cols: self.cols,
            data: self.data[r0 * self.cols..r1 * self.cols].to_vec(),
        }
    }

    /// Columns `c0..c1` as a new matrix.
    pub fn col_range(&self, c0: usize, c1: usize) -> ZMatrix {
        let mut out = ZMatrix::zeros(self.rows, c1 - c0);
        for i in 0..self.rows {
            for j in c0..c1 {
                out[(i, j - c0)] = self[(i, j)].clone();
            }
        }
        out
    }

    /// Kronecker product `self ⊗ other`.
    pub fn kron(&self, other: &ZMatrix) -> ZMatrix {
        let mut out = ZMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = &self[(i, j)];
                if a.is_zero() {
                    continue;
                }
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * &other[(k, l)];
                    }
                }
            }
        }
        out
    }

    /// Column-major vectorisation.
    pub fn vec_cols(&self) -> Vec<BigInt> {
        (0..self.cols).flat_map(|j| self.column(j)).collect()
    }

    pub fn from_vec_cols(rows: usize, cols: usize, v: &[BigInt]) -> ZMatrix {
        assert_eq!(v.len(), rows * cols);
        let mut m = ZMatrix::zeros(rows, cols);
        for j in 0..cols {
            for i in 0..rows {
                m[(i, j)] = v[j * rows + i].clone();
            }
        }
        m
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = &self.data[src * self.cols + j] * q;
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = &self.data[i * self.cols + src] * q;
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -&self.data[i * self.cols + c];
            self.data[i * self.cols + c] = v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -&self.data[r * self.cols + j];
            self.data[r * self.cols + j] = v;
        }
    }
}

impl std::ops::Index<(usize, usize)> for ZMatrix {
    type Output = BigInt;
    fn index(&self, (i, j): (usize, usize)) -> &BigInt {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ZMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of a Smith normal form computation: `left * m * right == diagonal`.
#[derive(Clone, Debug)]
pub struct Smith {
    pub left: ZMatrix,
    /// Inverse of `left`.
    pub left_inv: ZMatrix,
    pub diagonal: ZMatrix,
    pub right: ZMatrix,
    pub rank: usize,
}

impl Smith {
    /// The nonzero diagonal entries `d_1 | d_2 | ...`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank)
            .map(|i| self.diagonal[(i, i)].clone())
            .collect()
    }

    /// Diagonal entry at position `i`, zero past the rank or the shape.
    pub fn diag(&self, i: usize) -> BigInt {
        if i < self.rank {
            self.diagonal[(i, i)].clone()
        } else {
            BigInt::zero()
        }
    }
}

/// Smith normal form with unimodular transforms.
///
/// Pivot rule: smallest nonzero absolute value in the active submatrix,
/// ties broken row-major. The result is deterministic.
pub fn smith_normal_form(m: &ZMatrix) -> Smith {
    let (r, c) = (m.rows, m.cols);
    let mut a = m.clone();
    let mut left = ZMatrix::identity(r);
    let mut left_inv = ZMatrix::identity(r);
    // right is tracked transposed so column operations become row operations
    let mut right_t = ZMatrix::identity(c);
    let mut rank = 0;
    for t in 0..r.min(c) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..r {
                for j in t..c {
                    let v = &a[(i, j)];
                    if v.is_zero() {
                        continue;
                    }
                    match best {
                        Some((bi, bj)) if a[(bi, bj)].abs() <= v.abs() => {}
                        _ => best = Some((i, j)),
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Smith {
                    left,
                    left_inv,
                    diagonal: a,
                    right: right_t.transpose(),
                    rank,
                };
            };
            a.swap_rows(t, pi);
            left.swap_rows(t, pi);
            left_inv.swap_cols(t, pi);
            a.swap_cols(t, pj);
            right_t.swap_rows(t, pj);

            let p = a[(t, t)].clone();
            let mut dirty = false;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = -(&a[(i, t)] / &p);
                a.add_row(i, t, &q);
                left.add_row(i, t, &q);
                left_inv.add_col(t, i, &-&q);
                dirty |= !a[(i, t)].is_zero();
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = -(&a[(t, j)] / &p);
                a.add_col(j, t, &q);
                right_t.add_row(j, t, &q);
                dirty |= !a[(t, j)].is_zero();
            }
            if dirty {
                continue;
            }
            // divisibility chain
            let mut fixed = false;
            'outer: for i in t + 1..r {
                for j in t + 1..c {
                    if !a[(i, j)].is_multiple_of(&p) {
                        let one = BigInt::one();
                        a.add_row(t, i, &one);
                        left.add_row(t, i, &one);
                        left_inv.add_col(i, t, &-&one);
                        fixed = true;
                        break 'outer;
                    }
                }
            }
            if !fixed {
                break;
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            left.negate_row(t);
            left_inv.negate_col(t);
        }
        rank += 1;
    }
    Smith {
        left,
        left_inv,
        diagonal: a,
        right: right_t.transpose(),
        rank,
    }
}

/// Solves `m * z = b` over the integers, returning one solution if any.
pub fn solve_integer(m: &ZMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(m.rows, b.len());
    let s = smith_normal_form(m);
    let ub = s.left.mul_vec(b);
    let mut y = vec![BigInt::zero(); m.cols];
    for (i, v) in ub.iter().enumerate() {
        if i < s.rank {
            let d = &s.diagonal[(i, i)];
            if !v.is_multiple_of(d) {
                return None;
            }
            y[i] = v / d;
        } else if !v.is_zero() {
            return None;
        }
    }
    Some(s.right.mul_vec(&y))
}

/// Solves `m * Z = b` column by column.
pub fn solve_integer_matrix(m: &ZMatrix, b: &ZMatrix) -> Option<ZMatrix> {
    assert_eq!(m.rows, b.rows);
    let s = smith_normal_form(m);
    let mut cols = Vec::with_capacity(b.cols);
    for j in 0..b.cols {
        let ub = s.left.mul_vec(&b.column(j));
        let mut y = vec![BigInt::zero(); m.cols];
        for (i, v) in ub.iter().enumerate() {
            if i < s.rank {
                let d = &s.diagonal[(i, i)];
                if !v.is_multiple_of(d) {
                    return None;
                }
                y[i] = v / d;
            } else if !v.is_zero() {
                return None;
            }
        }
        cols.push(s.right.mul_vec(&y));
    }
    Some(ZMatrix::from_columns(m.cols, &cols))
}

/// A basis (as columns) of the integer kernel `{z : m z = 0}`.
pub fn integer_kernel(m: &ZMatrix) -> ZMatrix {
    let s = smith_normal_form(m);
    s.right.col_range(s.rank, m.cols)
}

/// Whether every column of `v` lies in the column lattice of `lattice`.
pub fn in_column_lattice(lattice: &ZMatrix, v: &ZMatrix) -> bool {
    if v.is_zero() {
        return true;
    }
    solve_integer_matrix(lattice, v).is_some()
}
