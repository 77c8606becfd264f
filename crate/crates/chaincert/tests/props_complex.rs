//! Randomized checks of the chain-complex calculus: constructors preserve
//! d² = 0, composition laws hold at the matrix level, the cone sequence is
//! degreewise split, and the homotopy solver's verdicts agree with a
//! brute-force membership test in the boundary space.

use chaincert::{
    cone, cylinder, find_homotopy, kernel_basis, random_chain_map, random_complex, Cx, ChainMap,
    GenParams, Matrix, RingSpec,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

fn params(ring: RingSpec) -> GenParams {
    GenParams { ring, min_deg: -2, max_deg: 1, max_rank: 2 }
}

fn d_squares(cx: &Cx) -> bool {
    cx.degrees().all(|n| cx.d(n + 1).mul(&cx.d(n)).is_zero())
}

fn ring_from(tag: u8) -> RingSpec {
    match tag % 3 {
        0 => RingSpec::Integers,
        1 => RingSpec::Rationals,
        _ => RingSpec::PrimeField(5),
    }
}

/// Vectorizes the graded-map space E→F of the given degree and returns the
/// matrix of s ↦ d_F∘s + s∘d_E into the degree-above graded-map space,
/// together with the vectorization of a given graded map.
fn boundary_operator(e: &Cx, f: &Cx, diff: &ChainMap) -> (Matrix, Matrix) {
    let ring = e.ring();
    let degs: Vec<i64> = e.degrees().collect();
    let dom_dims: Vec<(i64, usize, usize)> =
        degs.iter().map(|&n| (n, f.rank(n - 1), e.rank(n))).collect();
    let cod_dims: Vec<(i64, usize, usize)> =
        degs.iter().map(|&n| (n, f.rank(n), e.rank(n))).collect();
    let dom_total: usize = dom_dims.iter().map(|(_, r, c)| r * c).sum();
    let cod_total: usize = cod_dims.iter().map(|(_, r, c)| r * c).sum();
    let cod_offset = |n: i64| -> usize {
        cod_dims.iter().take_while(|(m, _, _)| *m != n).map(|(_, r, c)| r * c).sum()
    };
    let mut op = Matrix::zero(ring, cod_total, dom_total);
    let mut col = 0;
    for &(n, fr, ec) in &dom_dims {
        for i in 0..fr {
            for j in 0..ec {
                // basis graded map: matrix unit at degree n, position (i, j)
                let mut unit = Matrix::zero(ring, fr, ec);
                unit.set(i, j, ring.from_i64(1));
                // postcomposing with d_F lands at output degree n,
                // precomposing with d_E at output degree n−1; the two never
                // collide, so plain writes suffice
                let mut stamp = |deg: i64, m: &Matrix| {
                    let base = cod_offset(deg);
                    for r in 0..m.rows() {
                        for c in 0..m.cols() {
                            op.set(base + r * m.cols() + c, col, m.get(r, c).clone());
                        }
                    }
                };
                stamp(n, &f.d(n - 1).mul(&unit));
                if degs.contains(&(n - 1)) {
                    stamp(n - 1, &unit.mul(&e.d(n - 1)));
                }
                col += 1;
            }
        }
    }
    let mut vec = Matrix::zero(ring, cod_total, 1);
    for &(n, fr, ec) in &cod_dims {
        let m = diff.comp(n);
        let base = cod_offset(n);
        for r in 0..fr {
            for c in 0..ec {
                vec.set(base + r * ec + c, 0, m.get(r, c).clone());
            }
        }
    }
    (op, vec)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constructors_preserve_the_differential_identity(seed in any::<u64>(), tag in any::<u8>()) {
        let ring = ring_from(tag);
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let a = random_complex(&mut rng, &params(ring));
        let b = random_complex(&mut rng, &params(ring));
        let f = random_chain_map(&mut rng, &a, &b);
        prop_assert!(d_squares(&a.complex));
        for k in [-2i64, -1, 1, 3] {
            prop_assert!(d_squares(&a.complex.shift(k)));
        }
        prop_assert!(d_squares(&cone(&f).complex));
        prop_assert!(d_squares(&cylinder(&f).complex));
    }

    #[test]
    fn composition_is_associative_and_unital(seed in any::<u64>(), tag in any::<u8>()) {
        let ring = ring_from(tag);
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let a = random_complex(&mut rng, &params(ring));
        let b = random_complex(&mut rng, &params(ring));
        let c = random_complex(&mut rng, &params(ring));
        let d = random_complex(&mut rng, &params(ring));
        let f = random_chain_map(&mut rng, &a, &b);
        let g = random_chain_map(&mut rng, &b, &c);
        let h = random_chain_map(&mut rng, &c, &d);
        prop_assert_eq!(f.then(&g).then(&h), f.then(&g.then(&h)));
        prop_assert_eq!(ChainMap::identity(&a.complex).then(&f), f.clone());
        prop_assert_eq!(f.then(&ChainMap::identity(&b.complex)), f);
    }

    #[test]
    fn cone_sequence_is_degreewise_split(seed in any::<u64>(), tag in any::<u8>()) {
        let ring = ring_from(tag);
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let a = random_complex(&mut rng, &params(ring));
        let b = random_complex(&mut rng, &params(ring));
        let f = random_chain_map(&mut rng, &a, &b);
        let c = cone(&f);
        prop_assert!(f.then(&c.incl).is_chain_map());
        prop_assert!(c.incl.then(&c.proj).is_zero());
        for n in c.complex.degrees() {
            let se = a.complex.rank(n + 1);
            let fr = b.complex.rank(n);
            // coordinate retraction and section for the degreewise splitting
            let mut retract = Matrix::zero(ring, fr, se + fr);
            retract.paste(0, se, &Matrix::identity(ring, fr));
            let mut section = Matrix::zero(ring, se + fr, se);
            section.paste(0, 0, &Matrix::identity(ring, se));
            prop_assert!(retract.mul(&c.incl.comp(n)).is_identity());
            prop_assert!(c.proj.comp(n).mul(&section).is_identity());
            let recompose =
                c.incl.comp(n).mul(&retract).add(&section.mul(&c.proj.comp(n)));
            prop_assert!(recompose.is_identity());
        }
    }

    #[test]
    fn homotopy_solver_verdicts_match_boundary_space_membership(seed in any::<u64>()) {
        let ring = RingSpec::PrimeField(5);
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let small = GenParams { ring, min_deg: -1, max_deg: 1, max_rank: 2 };
        let a = random_complex(&mut rng, &small);
        let b = random_complex(&mut rng, &small);
        let f = random_chain_map(&mut rng, &a, &b);
        let g = random_chain_map(&mut rng, &a, &b);
        let verdict = find_homotopy(&f, &g);
        let diff = f.add(&g.neg());
        let (op, target) = boundary_operator(&a.complex, &b.complex, &diff);
        let rank = op.cols() - kernel_basis(&op).cols();
        let mut aug = Matrix::zero(ring, op.rows(), op.cols() + 1);
        aug.paste(0, 0, &op);
        aug.paste(0, op.cols(), &target);
        let rank_aug = (op.cols() + 1) - kernel_basis(&aug).cols();
        match verdict {
            Some(h) => {
                prop_assert!(h.verify(), "returned witness must satisfy the homotopy identity");
                prop_assert_eq!(rank, rank_aug, "witness exists, so the target lies in the image");
            }
            None => {
                prop_assert!(rank_aug > rank, "no witness, so the target must leave the image");
            }
        }
    }
}
