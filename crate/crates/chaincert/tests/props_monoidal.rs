//! Randomized checks of the tensor/duality layer: Koszul interchange,
//! braiding involutivity and naturality, unit isomorphisms, duality triangle
//! identities, basis-independence of the trace, and the cone–dual
//! comparison.

use chaincert::tensor::{unit_left, unit_right};
use chaincert::{
    check_diagdual, duality_unit_counit, random_chain_map, random_complex, sparse_map, tensor,
    tensor_map, tr, unimodular, zeta, ChainComplex, ChainMap, GenParams, Matrix, RingSpec,
    symmetry,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use std::collections::BTreeMap;

fn params(ring: RingSpec) -> GenParams {
    GenParams { ring, min_deg: -2, max_deg: 1, max_rank: 2 }
}

fn ring_from(tag: u8) -> RingSpec {
    match tag % 3 {
        0 => RingSpec::Integers,
        1 => RingSpec::Rationals,
        _ => RingSpec::PrimeField(7),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn tensor_differential_squares_to_zero(seed in any::<u64>(), tag in any::<u8>()) {
        let ring = ring_from(tag);
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let e = random_complex(&mut rng, &params(ring)).complex;
        let f = random_complex(&mut rng, &params(ring)).complex;
        let t = tensor(&e, &f).complex;
        prop_assert!(t.degrees().all(|n| t.d(n + 1).mul(&t.d(n)).is_zero()));
    }

    #[test]
    fn graded_interchange_carries_the_koszul_sign(
        seed in any::<u64>(),
        dg in -1i64..=1,
        df2 in -1i64..=1,
    ) {
        let ring = RingSpec::Integers;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let a = random_complex(&mut rng, &params(ring));
        let b = random_complex(&mut rng, &params(ring));
        let c = random_complex(&mut rng, &params(ring));
        let d = random_complex(&mut rng, &params(ring));
        // inner pair applies first; outer pair post-composes
        let f2 = sparse_map(&mut rng, &a.complex, &b.complex, df2);
        let g2 = sparse_map(&mut rng, &c.complex, &d.complex, 1);
        let f = sparse_map(&mut rng, &b.complex, &b.complex, 0);
        let g = sparse_map(&mut rng, &d.complex, &d.complex, dg);
        let composite = tensor_map(&f2, &g2).then(&tensor_map(&f, &g));
        let paired = tensor_map(&f2.then(&f), &g2.then(&g));
        let sign = if (dg * df2).rem_euclid(2) == 0 { 1 } else { -1 };
        prop_assert_eq!(composite, paired.scale_i64(sign));
    }

    #[test]
    fn braiding_squares_to_the_identity_and_is_natural(seed in any::<u64>(), tag in any::<u8>()) {
        let ring = ring_from(tag);
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let a = random_complex(&mut rng, &params(ring));
        let b = random_complex(&mut rng, &params(ring));
        let round = symmetry(&a.complex, &b.complex).then(&symmetry(&b.complex, &a.complex));
        prop_assert_eq!(round, ChainMap::identity(&tensor(&a.complex, &b.complex).complex));

        let c = random_complex(&mut rng, &params(ring));
        let d = random_complex(&mut rng, &params(ring));
        let f = random_chain_map(&mut rng, &a, &c);
        let g = random_chain_map(&mut rng, &b, &d);
        let one_way = tensor_map(&f, &g).then(&symmetry(&c.complex, &d.complex));
        let other = symmetry(&a.complex, &b.complex).then(&tensor_map(&g, &f));
        prop_assert_eq!(one_way, other);
    }

    #[test]
    fn unit_isomorphisms_are_inverse_chain_maps(seed in any::<u64>(), tag in any::<u8>()) {
        let ring = ring_from(tag);
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let e = random_complex(&mut rng, &params(ring)).complex;
        for iso in [unit_left(&e), unit_right(&e)] {
            prop_assert!(iso.is_chain_map());
            let inv = iso.invert_degreewise().expect("unit comparison is invertible");
            prop_assert_eq!(iso.then(&inv), ChainMap::identity(iso.source()));
            prop_assert_eq!(inv.then(&iso), ChainMap::identity(&e));
        }
    }

    #[test]
    fn duality_triangle_identities_hold_on_random_complexes(seed in any::<u64>(), tag in any::<u8>()) {
        let ring = ring_from(tag);
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let e = random_complex(&mut rng, &params(ring)).complex;
        // construction asserts both zig-zags exactly; re-check the pieces
        let d = duality_unit_counit(&e);
        prop_assert!(d.eval.is_chain_map());
        prop_assert!(d.coeval.is_chain_map());
        prop_assert!(d.double_dual.is_chain_map());
        prop_assert!(d.double_dual.invert_degreewise().is_some());
    }

    #[test]
    fn trace_survives_unimodular_changes_of_basis(seed in any::<u64>()) {
        let ring = RingSpec::Integers;
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let rc = random_complex(&mut rng, &params(ring));
        let e = &rc.complex;
        let endo = random_chain_map(&mut rng, &rc, &rc);
        let mut us: BTreeMap<i64, (Matrix, Matrix)> = BTreeMap::new();
        for n in e.degrees() {
            us.insert(n, unimodular(&mut rng, ring, e.rank(n)));
        }
        let diffs: BTreeMap<i64, Matrix> = e
            .degrees()
            .filter(|&n| e.rank(n) > 0 && e.rank(n + 1) > 0)
            .map(|n| (n, us[&(n + 1)].0.mul(&e.d(n)).mul(&us[&n].1)))
            .collect();
        let ranks: BTreeMap<i64, usize> = e.degrees().map(|n| (n, e.rank(n))).collect();
        let conj = ChainComplex::build(ring, ranks, diffs).expect("conjugated complex");
        let comps: BTreeMap<i64, Matrix> = e
            .degrees()
            .map(|n| (n, us[&n].0.mul(&endo.comp(n)).mul(&us[&n].1)))
            .collect();
        let endo2 = ChainMap::new(&conj, &conj, 0, comps).expect("conjugated endomorphism");
        prop_assert!(endo2.is_chain_map());
        prop_assert_eq!(tr(&endo).unwrap(), tr(&endo2).unwrap());
    }

    #[test]
    fn dualizing_a_cone_lands_on_the_shifted_cone_of_the_dual(
        seed in any::<u64>(),
        tag in any::<u8>(),
    ) {
        let ring = ring_from(tag);
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        let a = random_complex(&mut rng, &params(ring));
        let b = random_complex(&mut rng, &params(ring));
        let f = random_chain_map(&mut rng, &a, &b);
        let z = zeta(&f);
        prop_assert!(z.is_chain_map());
        prop_assert!(z.invert_degreewise().is_some());
        prop_assert!(check_diagdual(&f).ok());
    }
}
