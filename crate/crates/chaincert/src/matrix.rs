//! Dense exact matrices, with the block, Kronecker, and permutation constructions
//! the complex-level code is built from.
//!
//! Everything is row-major. Multiplication skips zero entries of both factors;
//! the block matrices arising from cones, tensors, and coordinate selections are
//! sparse enough that this is the difference between milliseconds and minutes on
//! big-integer entries.

use crate::ring::{RingSpec, Scalar};
use std::fmt;

#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {} [", self.rows, self.cols, self.ring)?;
        for i in 0..self.rows {
            let row: Vec<String> =
                (0..self.cols).map(|j| self.ring.format_scalar(self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn zero(ring: RingSpec, rows: usize, cols: usize) -> Matrix {
        Matrix { ring, rows, cols, data: vec![ring.zero(); rows * cols] }
    }

    pub fn identity(ring: RingSpec, n: usize) -> Matrix {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.one());
        }
        m
    }

    /// Identity scaled by an integer (used for the ±id blocks everywhere).
    pub fn scalar_identity(ring: RingSpec, n: usize, c: i64) -> Matrix {
        let mut m = Matrix::zero(ring, n, n);
        for i in 0..n {
            m.set(i, i, ring.from_i64(c));
        }
        m
    }

    pub fn from_rows(ring: RingSpec, rows: Vec<Vec<Scalar>>) -> Matrix {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { ring, rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_i64_rows(ring: RingSpec, rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            ring,
            rows.iter().map(|row| row.iter().map(|&n| ring.from_i64(n)).collect()).collect(),
        )
    }

    pub fn from_fn(
        ring: RingSpec,
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Scalar,
    ) -> Matrix {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { ring, rows, cols, data }
    }

    /// The permutation matrix sending basis vector j to basis vector perm[j].
    pub fn permutation(ring: RingSpec, perm: &[usize]) -> Matrix {
        let n = perm.len();
        let mut m = Matrix::zero(ring, n, n);
        for (j, &i) in perm.iter().enumerate() {
            assert!(i < n, "permutation image out of range");
            m.set(i, j, ring.one());
        }
        m
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, s: Scalar) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = s;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|s| self.ring.is_zero(s))
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let s = self.get(i, j);
                    if i == j { self.ring.is_one(s) } else { self.ring.is_zero(s) }
                })
            })
    }

    pub fn add(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols, self.ring), (rhs.rows, rhs.cols, rhs.ring));
        Matrix::from_fn(self.ring, self.rows, self.cols, |i, j| {
            self.ring.add(self.get(i, j), rhs.get(i, j))
        })
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols, self.ring), (rhs.rows, rhs.cols, rhs.ring));
        Matrix::from_fn(self.ring, self.rows, self.cols, |i, j| {
            self.ring.sub(self.get(i, j), rhs.get(i, j))
        })
    }

    pub fn neg(&self) -> Matrix {
        Matrix::from_fn(self.ring, self.rows, self.cols, |i, j| self.ring.neg(self.get(i, j)))
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix::from_fn(self.ring, self.rows, self.cols, |i, j| self.ring.mul(self.get(i, j), c))
    }

    pub fn mul(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.ring, rhs.ring, "ring mismatch in matrix product");
        assert_eq!(self.cols, rhs.rows, "shape mismatch in matrix product");
        let ring = self.ring;
        let mut out = Matrix::zero(ring, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if ring.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if ring.is_zero(b) {
                        continue;
                    }
                    let acc = ring.add(out.get(i, j), &ring.mul(a, b));
                    out.set(i, j, acc);
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.ring, self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    /// Writes `block` into self with top-left corner at (r0, c0).
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert_eq!(self.ring, block.ring);
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols, "paste out of range");
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    pub fn submatrix(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        Matrix::from_fn(self.ring, rows, cols, |i, j| self.get(r0 + i, c0 + j).clone())
    }

    /// Assembles a matrix from a grid of blocks. Row heights and column widths
    /// are read off the grid, which must be consistent.
    pub fn from_blocks(ring: RingSpec, grid: &[&[&Matrix]]) -> Matrix {
        assert!(!grid.is_empty() && !grid[0].is_empty(), "empty block grid");
        let heights: Vec<usize> = grid.iter().map(|row| row[0].rows).collect();
        let widths: Vec<usize> = grid[0].iter().map(|b| b.cols).collect();
        for (bi, row) in grid.iter().enumerate() {
            assert_eq!(row.len(), widths.len(), "ragged block grid");
            for (bj, b) in row.iter().enumerate() {
                assert_eq!(b.ring, ring);
                assert_eq!(b.rows, heights[bi], "inconsistent block heights");
                assert_eq!(b.cols, widths[bj], "inconsistent block widths");
            }
        }
        let mut out = Matrix::zero(ring, heights.iter().sum(), widths.iter().sum());
        let mut r0 = 0;
        for (bi, row) in grid.iter().enumerate() {
            let mut c0 = 0;
            for (bj, b) in row.iter().enumerate() {
                out.paste(r0, c0, b);
                c0 += widths[bj];
            }
            r0 += heights[bi];
        }
        out
    }

    pub fn direct_sum(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.ring, rhs.ring);
        let mut out = Matrix::zero(self.ring, self.rows + rhs.rows, self.cols + rhs.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, self.cols, rhs);
        out
    }

    pub fn hstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.ring, rhs.ring);
        assert_eq!(self.rows, rhs.rows);
        let mut out = Matrix::zero(self.ring, self.rows, self.cols + rhs.cols);
        out.paste(0, 0, self);
        out.paste(0, self.cols, rhs);
        out
    }

    pub fn vstack(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.ring, rhs.ring);
        assert_eq!(self.cols, rhs.cols);
        let mut out = Matrix::zero(self.ring, self.rows + rhs.rows, self.cols);
        out.paste(0, 0, self);
        out.paste(self.rows, 0, rhs);
        out
    }

    /// Kronecker product in a-major order: entry ((i·rows(B)+k), (j·cols(B)+l))
    /// is A[i,j]·B[k,l].
    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.ring, rhs.ring);
        let ring = self.ring;
        let mut out = Matrix::zero(ring, self.rows * rhs.rows, self.cols * rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if ring.is_zero(a) {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = rhs.get(k, l);
                        if ring.is_zero(b) {
                            continue;
                        }
                        out.set(i * rhs.rows + k, j * rhs.cols + l, ring.mul(a, b));
                    }
                }
            }
        }
        out
    }

    /// Selection matrix picking out the listed columns of an ambient space of
    /// dimension `ambient`: the map k^{len} → k^{ambient} hitting those coordinates.
    pub fn coordinate_injection(ring: RingSpec, ambient: usize, coords: &[usize]) -> Matrix {
        let mut m = Matrix::zero(ring, ambient, coords.len());
        for (j, &i) in coords.iter().enumerate() {
            assert!(i < ambient, "coordinate out of range");
            m.set(i, j, ring.one());
        }
        m
    }

    /// Projection onto the listed coordinates: k^{ambient} → k^{len}.
    pub fn coordinate_projection(ring: RingSpec, ambient: usize, coords: &[usize]) -> Matrix {
        Matrix::coordinate_injection(ring, ambient, coords).transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_skipping_product_matches_naive_definition() {
        let z = RingSpec::Integers;
        let a = Matrix::from_i64_rows(z, &[&[1, 0, 2], &[0, 3, 0]]);
        let b = Matrix::from_i64_rows(z, &[&[4, 1], &[0, 0], &[5, -1]]);
        let ab = a.mul(&b);
        let expect = Matrix::from_i64_rows(z, &[&[14, -1], &[0, 0]]);
        assert_eq!(ab, expect);
    }

    #[test]
    fn kron_is_a_major() {
        let z = RingSpec::Integers;
        let a = Matrix::from_i64_rows(z, &[&[1, 2]]);
        let b = Matrix::from_i64_rows(z, &[&[3], &[4]]);
        let k = a.kron(&b);
        let expect = Matrix::from_i64_rows(z, &[&[3, 6], &[4, 8]]);
        assert_eq!(k, expect);
    }

    #[test]
    fn block_assembly_round_trips_through_submatrix() {
        let z = RingSpec::Integers;
        let a = Matrix::from_i64_rows(z, &[&[1, 2], &[3, 4]]);
        let b = Matrix::from_i64_rows(z, &[&[5], &[6]]);
        let c = Matrix::zero(z, 1, 2);
        let d = Matrix::from_i64_rows(z, &[&[7]]);
        let m = Matrix::from_blocks(z, &[&[&a, &b], &[&c, &d]]);
        assert_eq!(m.submatrix(0, 0, 2, 2), a);
        assert_eq!(m.submatrix(0, 2, 2, 1), b);
        assert_eq!(m.submatrix(2, 2, 1, 1), d);
    }

    #[test]
    fn permutation_sends_basis_vectors_where_advertised() {
        let z = RingSpec::Integers;
        let p = Matrix::permutation(z, &[2, 0, 1]);
        let e0 = Matrix::from_i64_rows(z, &[&[1], &[0], &[0]]);
        assert!(p.mul(&e0).get(2, 0) == &z.one());
    }
}
