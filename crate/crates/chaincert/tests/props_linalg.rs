//! Randomized checks of the exact linear algebra kernels: Smith normal form
//! identities, solve round-trips, and two-sided inverses.

use chaincert::{kernel_basis, smith_normal_form, solve_linear, try_invert, Matrix, RingSpec};
use proptest::prelude::*;

fn mat(ring: RingSpec, rows: usize, cols: usize, entries: &[i64]) -> Matrix {
    let mut m = Matrix::zero(ring, rows, cols);
    for i in 0..rows {
        for j in 0..cols {
            m.set(i, j, ring.from_i64(entries[i * cols + j]));
        }
    }
    m
}

fn arb_dims() -> impl Strategy<Value = (usize, usize)> {
    (1usize..=4, 1usize..=4)
}

fn divides(a: &num_bigint::BigInt, b: &num_bigint::BigInt) -> bool {
    use num_traits::Zero;
    if a.is_zero() {
        b.is_zero()
    } else {
        (b % a).is_zero()
    }
}

proptest! {
    #[test]
    fn smith_form_diagonalizes_with_unimodular_transforms(
        (rows, cols) in arb_dims(),
        entries in proptest::collection::vec(-9i64..=9, 16),
    ) {
        let ring = RingSpec::Integers;
        let m = mat(ring, rows, cols, &entries);
        let snf = smith_normal_form(&m).unwrap();
        prop_assert_eq!(snf.u.mul(&m).mul(&snf.v), snf.d.clone());
        prop_assert!(try_invert(&snf.u).is_some(), "U must be unimodular");
        prop_assert!(try_invert(&snf.v).is_some(), "V must be unimodular");
        // nonzero diagonal entries divide their successors
        let n = snf.d.rows().min(snf.d.cols());
        for i in 0..n {
            for j in 0..snf.d.rows() {
                for k in 0..snf.d.cols() {
                    if j != k && (j == i || k == i) {
                        prop_assert!(ring.is_zero(snf.d.get(j, k)), "off-diagonal residue");
                    }
                }
            }
            if i + 1 < n {
                let a = match snf.d.get(i, i) { chaincert::Scalar::Int(v) => v.clone(), _ => unreachable!() };
                let b = match snf.d.get(i + 1, i + 1) { chaincert::Scalar::Int(v) => v.clone(), _ => unreachable!() };
                prop_assert!(divides(&a, &b), "{a} does not divide {b}");
            }
        }
    }

    #[test]
    fn solutions_satisfy_their_systems_exactly(
        (rows, cols) in arb_dims(),
        entries in proptest::collection::vec(-9i64..=9, 16),
        x_entries in proptest::collection::vec(-4i64..=4, 4),
    ) {
        for ring in [RingSpec::Integers, RingSpec::Rationals, RingSpec::PrimeField(7)] {
            let a = mat(ring, rows, cols, &entries);
            // manufacture a solvable b = A·x
            let x = mat(ring, cols, 1, &x_entries);
            let b = a.mul(&x);
            let sol = solve_linear(&a, &b).unwrap().expect("b = Ax is solvable by construction");
            prop_assert_eq!(a.mul(&sol), b);
        }
    }

    #[test]
    fn field_unsolvability_matches_the_rank_oracle(
        (rows, cols) in arb_dims(),
        entries in proptest::collection::vec(-9i64..=9, 16),
        b_entries in proptest::collection::vec(-9i64..=9, 4),
    ) {
        let ring = RingSpec::PrimeField(5);
        let a = mat(ring, rows, cols, &entries);
        let b = mat(ring, rows, 1, &b_entries);
        let sol = solve_linear(&a, &b).unwrap();
        // rank via kernel dimension: rank = cols − nullity
        let rank_a = cols - kernel_basis(&a).cols();
        let mut ab = Matrix::zero(ring, rows, cols + 1);
        for i in 0..rows {
            for j in 0..cols {
                ab.set(i, j, a.get(i, j).clone());
            }
            ab.set(i, cols, b.get(i, 0).clone());
        }
        let rank_ab = (cols + 1) - kernel_basis(&ab).cols();
        match sol {
            Some(x) => {
                prop_assert_eq!(a.mul(&x), b);
                prop_assert_eq!(rank_a, rank_ab, "solvable iff augmenting preserves rank");
            }
            None => prop_assert!(rank_ab > rank_a, "no solution must mean b leaves the column space"),
        }
    }

    #[test]
    fn kernel_columns_are_killed_and_inverses_are_two_sided(
        (rows, cols) in arb_dims(),
        entries in proptest::collection::vec(-9i64..=9, 16),
    ) {
        for ring in [RingSpec::Integers, RingSpec::Rationals, RingSpec::PrimeField(7)] {
            let a = mat(ring, rows, cols, &entries);
            let k = kernel_basis(&a);
            prop_assert!(a.mul(&k).is_zero());
            if rows == cols {
                if let Some(inv) = try_invert(&a) {
                    prop_assert!(a.mul(&inv).is_identity());
                    prop_assert!(inv.mul(&a).is_identity());
                }
            }
        }
    }
}
