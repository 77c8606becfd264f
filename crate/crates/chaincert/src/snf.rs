//! Exact linear algebra: Smith normal form over ℤ, Gauss–Jordan elimination over
//! the fields, and the solve/invert/kernel routines built on them.
//!
//! The Smith reduction selects the entry of smallest absolute value as pivot,
//! clears its row and column, absorbs any division remainders back into the
//! working submatrix, and finally enforces the divisibility chain and sign
//! normalization. Unimodular row operations accumulate in U, column operations
//! in V, so U·M·V = D holds at every step.

use crate::matrix::Matrix;
use crate::ring::{RingSpec, Scalar};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("operation requires integer entries, got {0}")]
    RequiresIntegers(RingSpec),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// The result of a Smith reduction: U·M·V = D with U, V unimodular and D
/// diagonal with d₁ | d₂ | … and dᵢ ≥ 0.
#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: Matrix,
    pub d: Matrix,
    pub v: Matrix,
}

impl SmithForm {
    /// Number of nonzero diagonal entries.
    pub fn rank(&self) -> usize {
        let n = self.d.rows().min(self.d.cols());
        (0..n).filter(|&i| !self.d.ring().is_zero(self.d.get(i, i))).count()
    }

    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).as_int().clone()).collect()
    }
}

fn swap_rows(m: &mut Matrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for j in 0..m.cols() {
        let x = m.get(a, j).clone();
        let y = m.get(b, j).clone();
        m.set(a, j, y);
        m.set(b, j, x);
    }
}

fn swap_cols(m: &mut Matrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for i in 0..m.rows() {
        let x = m.get(i, a).clone();
        let y = m.get(i, b).clone();
        m.set(i, a, y);
        m.set(i, b, x);
    }
}

/// row a += c * row b
fn add_row(m: &mut Matrix, a: usize, b: usize, c: &Scalar) {
    let ring = m.ring();
    if ring.is_zero(c) {
        return;
    }
    for j in 0..m.cols() {
        let t = ring.add(m.get(a, j), &ring.mul(c, m.get(b, j)));
        m.set(a, j, t);
    }
}

/// col a += c * col b
fn add_col(m: &mut Matrix, a: usize, b: usize, c: &Scalar) {
    let ring = m.ring();
    if ring.is_zero(c) {
        return;
    }
    for i in 0..m.rows() {
        let t = ring.add(m.get(i, a), &ring.mul(c, m.get(i, b)));
        m.set(i, a, t);
    }
}

fn negate_row(m: &mut Matrix, a: usize) {
    for j in 0..m.cols() {
        let t = m.ring().neg(m.get(a, j));
        m.set(a, j, t);
    }
}

/// Smith normal form of an integer matrix.
pub fn smith_normal_form(m: &Matrix) -> Result<SmithForm, LinalgError> {
    if m.ring() != RingSpec::Integers {
        return Err(LinalgError::RequiresIntegers(m.ring()));
    }
    let ring = RingSpec::Integers;
    let mut a = m.clone();
    let mut u = Matrix::identity(ring, m.rows());
    let mut v = Matrix::identity(ring, m.cols());
    let bound = m.rows().min(m.cols());

    let mut t = 0;
    while t < bound {
        // Locate the nonzero entry of smallest absolute value in a[t.., t..].
        let mut pivot: Option<(usize, usize, BigInt)> = None;
        for i in t..a.rows() {
            for j in t..a.cols() {
                let s = a.get(i, j);
                if ring.is_zero(s) {
                    continue;
                }
                let mag = s.int_abs();
                if pivot.as_ref().map_or(true, |(_, _, best)| &mag < best) {
                    pivot = Some((i, j, mag));
                }
            }
        }
        let Some((pi, pj, _)) = pivot else { break };
        swap_rows(&mut a, t, pi);
        swap_rows(&mut u, t, pi);
        swap_cols(&mut a, t, pj);
        swap_cols(&mut v, t, pj);

        loop {
            // Clear the pivot column with floor-division quotients; a nonzero
            // remainder is strictly smaller than the pivot, so promoting it and
            // retrying terminates.
            let mut disturbed = false;
            for i in t + 1..a.rows() {
                if ring.is_zero(a.get(i, t)) {
                    continue;
                }
                let q = a.get(i, t).as_int().div_floor(a.get(t, t).as_int());
                let c = Scalar::Int(-q);
                add_row(&mut a, i, t, &c);
                add_row(&mut u, i, t, &c);
                if !ring.is_zero(a.get(i, t)) {
                    swap_rows(&mut a, t, i);
                    swap_rows(&mut u, t, i);
                    disturbed = true;
                    break;
                }
            }
            if disturbed {
                continue;
            }
            for j in t + 1..a.cols() {
                if ring.is_zero(a.get(t, j)) {
                    continue;
                }
                let q = a.get(t, j).as_int().div_floor(a.get(t, t).as_int());
                let c = Scalar::Int(-q);
                add_col(&mut a, j, t, &c);
                add_col(&mut v, j, t, &c);
                if !ring.is_zero(a.get(t, j)) {
                    swap_cols(&mut a, t, j);
                    swap_cols(&mut v, t, j);
                    disturbed = true;
                    break;
                }
            }
            if disturbed {
                continue;
            }
            // Row and column are clear. If the pivot fails to divide some entry
            // of the remaining submatrix, fold that row in and keep reducing.
            let mut offender = None;
            'scan: for i in t + 1..a.rows() {
                for j in t + 1..a.cols() {
                    if !a.get(i, j).as_int().is_multiple_of(a.get(t, t).as_int()) {
                        offender = Some(i);
                        break 'scan;
                    }
                }
            }
            match offender {
                Some(i) => {
                    let one = Scalar::Int(BigInt::from(1));
                    add_row(&mut a, t, i, &one);
                    add_row(&mut u, t, i, &one);
                }
                None => break,
            }
        }
        t += 1;
    }

    for i in 0..bound {
        if a.get(i, i).as_int().is_negative() {
            negate_row(&mut a, i);
            negate_row(&mut u, i);
        }
    }
    Ok(SmithForm { u, d: a, v })
}

/// Reduced row echelon form over a field, applied to `m` in place; returns the
/// pivot column of each pivot row.
fn rref(m: &mut Matrix) -> Vec<usize> {
    let ring = m.ring();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..m.cols() {
        if row == m.rows() {
            break;
        }
        let Some(pr) = (row..m.rows()).find(|&i| !ring.is_zero(m.get(i, col))) else { continue };
        swap_rows(m, row, pr);
        let inv = ring.inv(m.get(row, col)).expect("nonzero field element");
        for j in 0..m.cols() {
            let t = ring.mul(m.get(row, j), &inv);
            m.set(row, j, t);
        }
        for i in 0..m.rows() {
            if i != row && !ring.is_zero(m.get(i, col)) {
                let c = ring.neg(m.get(i, col));
                add_row(m, i, row, &c);
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Solves A·X = B exactly; X has one column per column of B. Returns Ok(None)
/// when the system is inconsistent over the ring.
pub fn solve_linear(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>, LinalgError> {
    if a.rows() != b.rows() {
        return Err(LinalgError::DimensionMismatch(format!(
            "coefficient matrix has {} rows but right-hand side has {}",
            a.rows(),
            b.rows()
        )));
    }
    assert_eq!(a.ring(), b.ring(), "ring mismatch in solve");
    let ring = a.ring();
    match ring {
        RingSpec::Integers => {
            let snf = smith_normal_form(a)?;
            let ub = snf.u.mul(b);
            let n = a.cols();
            let bound = a.rows().min(n);
            let mut y = Matrix::zero(ring, n, b.cols());
            for col in 0..b.cols() {
                for i in 0..a.rows() {
                    let rhs = ub.get(i, col);
                    if i < bound && !ring.is_zero(snf.d.get(i, i)) {
                        match ring.div_exact(rhs, snf.d.get(i, i)) {
                            Some(q) => y.set(i, col, q),
                            None => return Ok(None),
                        }
                    } else if !ring.is_zero(rhs) {
                        return Ok(None);
                    }
                }
            }
            Ok(Some(snf.v.mul(&y)))
        }
        _ => {
            let mut aug = a.hstack(b);
            let pivots = rref(&mut aug);
            // Any pivot landing in the right-hand block marks inconsistency.
            if pivots.iter().any(|&c| c >= a.cols()) {
                return Ok(None);
            }
            let mut x = Matrix::zero(ring, a.cols(), b.cols());
            for (row, &pc) in pivots.iter().enumerate() {
                for col in 0..b.cols() {
                    x.set(pc, col, aug.get(row, a.cols() + col).clone());
                }
            }
            Ok(Some(x))
        }
    }
}

/// Two-sided inverse, when the matrix is invertible over its ring.
pub fn try_invert(m: &Matrix) -> Option<Matrix> {
    if m.rows() != m.cols() {
        return None;
    }
    match m.ring() {
        RingSpec::Integers => {
            let snf = smith_normal_form(m).expect("integer matrix");
            if !snf.d.is_identity() {
                return None;
            }
            // U·M·V = I forces M⁻¹ = V·U.
            Some(snf.v.mul(&snf.u))
        }
        _ => {
            let n = m.rows();
            let mut aug = m.hstack(&Matrix::identity(m.ring(), n));
            let pivots = rref(&mut aug);
            if pivots.len() != n || pivots.iter().any(|&c| c >= n) {
                return None;
            }
            Some(aug.submatrix(0, n, n, n))
        }
    }
}

/// A basis of the right kernel {x : A·x = 0}, one basis vector per column.
/// Over ℤ this is a basis of the full kernel lattice (the SNF transform is
/// unimodular, so the lattice is saturated).
pub fn kernel_basis(a: &Matrix) -> Matrix {
    let ring = a.ring();
    match ring {
        RingSpec::Integers => {
            let snf = smith_normal_form(a).expect("integer matrix");
            let bound = a.rows().min(a.cols());
            let free: Vec<usize> = (0..a.cols())
                .filter(|&i| i >= bound || ring.is_zero(snf.d.get(i, i)))
                .collect();
            let mut out = Matrix::zero(ring, a.cols(), free.len());
            for (k, &i) in free.iter().enumerate() {
                for r in 0..a.cols() {
                    out.set(r, k, snf.v.get(r, i).clone());
                }
            }
            out
        }
        _ => {
            let mut r = a.clone();
            let pivots = rref(&mut r);
            let free: Vec<usize> = (0..a.cols()).filter(|c| !pivots.contains(c)).collect();
            let mut out = Matrix::zero(ring, a.cols(), free.len());
            for (k, &fc) in free.iter().enumerate() {
                out.set(fc, k, ring.one());
                for (row, &pc) in pivots.iter().enumerate() {
                    out.set(pc, k, ring.neg(r.get(row, fc)));
                }
            }
            out
        }
    }
}

/// Rank over the matrix's own ring (free rank over ℤ).
pub fn rank(a: &Matrix) -> usize {
    match a.ring() {
        RingSpec::Integers => smith_normal_form(a).expect("integer matrix").rank(),
        _ => {
            let mut r = a.clone();
            rref(&mut r).len()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    #[test]
    fn smith_form_of_diag_2_3_is_diag_1_6() {
        let m = Matrix::from_i64_rows(z(), &[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&m).expect("integer matrix");
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
    }

    #[test]
    fn smith_transforms_are_unimodular() {
        let m = Matrix::from_i64_rows(z(), &[&[4, 6, 2], &[2, 8, 10]]);
        let snf = smith_normal_form(&m).expect("integer matrix");
        assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d);
        assert!(try_invert(&snf.u).is_some(), "U unimodular");
        assert!(try_invert(&snf.v).is_some(), "V unimodular");
        let diag = snf.diagonal();
        for w in diag.windows(2) {
            if !w[1].is_zero() || w[0].is_zero() {
                assert!(w[1].is_multiple_of(&w[0]) || w[0].is_zero());
            }
        }
    }

    #[test]
    fn integer_solve_distinguishes_divisibility() {
        let a = Matrix::from_i64_rows(z(), &[&[2]]);
        let b4 = Matrix::from_i64_rows(z(), &[&[4]]);
        let b3 = Matrix::from_i64_rows(z(), &[&[3]]);
        let x = solve_linear(&a, &b4).expect("shapes fine").expect("solvable");
        assert_eq!(x, Matrix::from_i64_rows(z(), &[&[2]]));
        assert!(solve_linear(&a, &b3).expect("shapes fine").is_none());
    }

    #[test]
    fn field_solve_divides_instead() {
        let f5 = RingSpec::PrimeField(5);
        let a = Matrix::from_i64_rows(f5, &[&[2]]);
        let b = Matrix::from_i64_rows(f5, &[&[3]]);
        let x = solve_linear(&a, &b).expect("shapes fine").expect("solvable");
        assert_eq!(x, Matrix::from_i64_rows(f5, &[&[4]]));
    }

    #[test]
    fn inversion_examples() {
        let m = Matrix::from_i64_rows(z(), &[&[1, 1], &[0, 1]]);
        let inv = try_invert(&m).expect("unimodular");
        assert_eq!(inv, Matrix::from_i64_rows(z(), &[&[1, -1], &[0, 1]]));
        assert!(try_invert(&Matrix::from_i64_rows(z(), &[&[2]])).is_none());
        let q = RingSpec::Rationals;
        let two = Matrix::from_i64_rows(q, &[&[2]]);
        let half = try_invert(&two).expect("invertible over Q");
        assert_eq!(half.mul(&two), Matrix::identity(q, 1));
    }

    #[test]
    fn kernel_is_saturated_over_z() {
        let a = Matrix::from_i64_rows(z(), &[&[2, 4]]);
        let k = kernel_basis(&a);
        assert_eq!(k.cols(), 1);
        assert!(a.mul(&k).is_zero());
        // The kernel of (2 4) is generated by (2, -1) up to sign; the basis
        // vector must be primitive, not a multiple.
        let g = k.get(0, 0).as_int().gcd(k.get(1, 0).as_int());
        assert_eq!(g, BigInt::from(1));
    }

    #[test]
    fn mismatched_solve_shapes_error_out() {
        let a = Matrix::from_i64_rows(z(), &[&[1, 2]]);
        let b = Matrix::from_i64_rows(z(), &[&[1], &[2]]);
        assert!(matches!(solve_linear(&a, &b), Err(LinalgError::DimensionMismatch(_))));
    }
}
