//! Tensor products of complexes with Koszul signs, plus the coherence
//! isomorphisms: symmetry, associativity, unitors, and the shift shuffles.
//!
//! Fixed layout: (E⊗F)ⁿ = ⊕_{i+j=n} Eⁱ⊗Fʲ with summands ordered by increasing
//! left degree i, and each summand in left-major Kronecker order. The
//! differential is d(x⊗y) = dx⊗y + (−1)^{|x|} x⊗dy; a graded map pair acts by
//! (f⊗g)(x⊗y) = (−1)^{|g|·|x|} f(x)⊗g(y).

use crate::complex::{ChainComplex, ChainMap, Cx, Homotopy};
use crate::matrix::Matrix;
use std::collections::BTreeMap;

/// One summand Eⁱ⊗Fʲ inside a tensor degree, with its coordinate window.
#[derive(Clone, Copy, Debug)]
pub struct TensorBlock {
    pub left_deg: i64,
    pub right_deg: i64,
    pub offset: usize,
    pub left_rank: usize,
    pub right_rank: usize,
}

impl TensorBlock {
    pub fn len(&self) -> usize {
        self.left_rank * self.right_rank
    }

    /// Absolute coordinate of basis element a⊗b inside this block's degree.
    pub fn coord(&self, a: usize, b: usize) -> usize {
        debug_assert!(a < self.left_rank && b < self.right_rank);
        self.offset + a * self.right_rank + b
    }
}

/// Per-degree block windows of a tensor product.
#[derive(Clone, Debug)]
pub struct TensorLayout {
    blocks: BTreeMap<i64, Vec<TensorBlock>>,
}

impl TensorLayout {
    pub fn new(left: &Cx, right: &Cx) -> TensorLayout {
        let mut blocks: BTreeMap<i64, Vec<TensorBlock>> = BTreeMap::new();
        for i in left.degrees() {
            for j in right.degrees() {
                let (lr, rr) = (left.rank(i), right.rank(j));
                blocks.entry(i + j).or_default().push(TensorBlock {
                    left_deg: i,
                    right_deg: j,
                    offset: 0,
                    left_rank: lr,
                    right_rank: rr,
                });
            }
        }
        for list in blocks.values_mut() {
            list.sort_by_key(|b| b.left_deg);
            let mut off = 0;
            for b in list.iter_mut() {
                b.offset = off;
                off += b.len();
            }
        }
        TensorLayout { blocks }
    }

    pub fn blocks(&self, n: i64) -> &[TensorBlock] {
        self.blocks.get(&n).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn find(&self, n: i64, left_deg: i64) -> Option<&TensorBlock> {
        self.blocks(n).iter().find(|b| b.left_deg == left_deg)
    }

    pub fn rank(&self, n: i64) -> usize {
        self.blocks(n).iter().map(TensorBlock::len).sum()
    }

    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.blocks.keys().copied()
    }
}

/// A tensor product complex together with its block layout and factors.
#[derive(Clone, Debug)]
pub struct Tensor {
    pub complex: Cx,
    pub layout: TensorLayout,
    pub left: Cx,
    pub right: Cx,
}

pub fn tensor(left: &Cx, right: &Cx) -> Tensor {
    assert_eq!(left.ring(), right.ring(), "tensor factors over different rings");
    let ring = left.ring();
    let layout = TensorLayout::new(left, right);
    let mut ranks = BTreeMap::new();
    for n in layout.degrees() {
        let r = layout.rank(n);
        if r > 0 {
            ranks.insert(n, r);
        }
    }
    let mut diffs = BTreeMap::new();
    for (&n, _) in &ranks {
        let rows = layout.rank(n + 1);
        let cols = layout.rank(n);
        if rows == 0 {
            continue;
        }
        let mut d = Matrix::zero(ring, rows, cols);
        for blk in layout.blocks(n) {
            if blk.len() == 0 {
                continue;
            }
            // dx⊗y into block (i+1, j)
            if let Some(tb) = layout.find(n + 1, blk.left_deg + 1) {
                if tb.len() > 0 {
                    let m = left.d(blk.left_deg).kron(&Matrix::identity(ring, blk.right_rank));
                    d.paste(tb.offset, blk.offset, &m);
                }
            }
            // (−1)^i x⊗dy into block (i, j+1)
            if let Some(tb) = layout.find(n + 1, blk.left_deg) {
                if tb.len() > 0 {
                    let mut m =
                        Matrix::identity(ring, blk.left_rank).kron(&right.d(blk.right_deg));
                    if blk.left_deg.rem_euclid(2) == 1 {
                        m = m.neg();
                    }
                    d.paste(tb.offset, blk.offset, &m);
                }
            }
        }
        if !d.is_zero() {
            diffs.insert(n, d);
        }
    }
    let complex = ChainComplex::build(ring, ranks, diffs)
        .expect("Koszul sign makes the tensor differential square to zero");
    Tensor { complex, layout, left: left.clone(), right: right.clone() }
}

/// f⊗g with the Koszul sign (−1)^{|g|·i} on the Eⁱ blocks. Valid for graded
/// maps of any degrees; a tensor of chain maps is a chain map, and a tensor
/// with a homotopy witness is again a homotopy witness.
pub fn tensor_map(f: &ChainMap, g: &ChainMap) -> ChainMap {
    let src = tensor(f.source(), g.source());
    let tgt = tensor(f.target(), g.target());
    tensor_map_between(f, g, &src, &tgt)
}

/// Same as [`tensor_map`], but reuses already-built tensor complexes (their
/// factors must match the endpoints of f and g).
pub fn tensor_map_between(f: &ChainMap, g: &ChainMap, src: &Tensor, tgt: &Tensor) -> ChainMap {
    let ring = src.complex.ring();
    let deg = f.degree() + g.degree();
    let mut comps = BTreeMap::new();
    for n in src.complex.degrees() {
        let rows = tgt.complex.rank(n + deg);
        let cols = src.complex.rank(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(ring, rows, cols);
        for blk in src.layout.blocks(n) {
            if blk.len() == 0 {
                continue;
            }
            let ti = blk.left_deg + f.degree();
            let Some(tb) = tgt.layout.find(n + deg, ti) else { continue };
            if tb.len() == 0 {
                continue;
            }
            debug_assert_eq!(tb.right_deg, blk.right_deg + g.degree());
            let mut k = f.comp(blk.left_deg).kron(&g.comp(blk.right_deg));
            if (g.degree() * blk.left_deg).rem_euclid(2) == 1 {
                k = k.neg();
            }
            m.paste(tb.offset, blk.offset, &k);
        }
        if !m.is_zero() {
            comps.insert(n, m);
        }
    }
    ChainMap::new(&src.complex, &tgt.complex, deg, comps).expect("tensor map shapes")
}

/// id_E ⊗ h, with the Koszul sign folded into the witness.
pub fn tensor_homotopy_left(e: &Cx, h: &Homotopy) -> Homotopy {
    let id = ChainMap::identity(e);
    Homotopy::new(
        tensor_map(&id, h.lhs()),
        tensor_map(&id, h.rhs()),
        tensor_map(&id, h.witness()),
    )
    .expect("tensoring preserves homotopies")
}

/// h ⊗ id_F (no sign: the witness sits in the left slot).
pub fn tensor_homotopy_right(h: &Homotopy, f: &Cx) -> Homotopy {
    let id = ChainMap::identity(f);
    Homotopy::new(
        tensor_map(h.lhs(), &id),
        tensor_map(h.rhs(), &id),
        tensor_map(h.witness(), &id),
    )
    .expect("tensoring preserves homotopies")
}

/// γ: E⊗F → F⊗E, the block swap x⊗y ↦ (−1)^{ij} y⊗x.
pub fn symmetry(e: &Cx, f: &Cx) -> ChainMap {
    let src = tensor(e, f);
    let tgt = tensor(f, e);
    let ring = src.complex.ring();
    let mut comps = BTreeMap::new();
    for n in src.complex.degrees() {
        let rows = tgt.complex.rank(n);
        let cols = src.complex.rank(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(ring, rows, cols);
        for blk in src.layout.blocks(n) {
            if blk.len() == 0 {
                continue;
            }
            let tb = tgt
                .layout
                .find(n, blk.right_deg)
                .expect("mirror block exists");
            let sign = if (blk.left_deg * blk.right_deg).rem_euclid(2) == 1 {
                ring.from_i64(-1)
            } else {
                ring.one()
            };
            for a in 0..blk.left_rank {
                for b in 0..blk.right_rank {
                    m.set(tb.coord(b, a), blk.coord(a, b), sign.clone());
                }
            }
        }
        comps.insert(n, m);
    }
    ChainMap::new(&src.complex, &tgt.complex, 0, comps).expect("symmetry shapes")
}

/// (E⊗F)⊗G → E⊗(F⊗G): the signless block permutation matching basis tensors.
pub fn assoc(e: &Cx, f: &Cx, g: &Cx) -> ChainMap {
    let ef = tensor(e, f);
    let fg = tensor(f, g);
    let src = tensor(&ef.complex, g);
    let tgt = tensor(e, &fg.complex);
    let ring = src.complex.ring();
    let mut comps = BTreeMap::new();
    for n in src.complex.degrees() {
        let rows = tgt.complex.rank(n);
        let cols = src.complex.rank(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(ring, rows, cols);
        for outer in src.layout.blocks(n) {
            // outer: (E⊗F)^m ⊗ G^k
            let (mm, k) = (outer.left_deg, outer.right_deg);
            for inner in ef.layout.blocks(mm) {
                let (i, j) = (inner.left_deg, inner.right_deg);
                if inner.len() == 0 || outer.right_rank == 0 {
                    continue;
                }
                let t_out = tgt.layout.find(n, i).expect("target outer block");
                let t_in = fg.layout.find(j + k, j).expect("target inner block");
                for a in 0..inner.left_rank {
                    for b in 0..inner.right_rank {
                        for c in 0..outer.right_rank {
                            let from = outer.coord(inner.coord(a, b), c);
                            let to = t_out.coord(a, t_in.coord(b, c));
                            m.set(to, from, ring.one());
                        }
                    }
                }
            }
        }
        comps.insert(n, m);
    }
    ChainMap::new(&src.complex, &tgt.complex, 0, comps).expect("associativity shapes")
}

/// S⊗E → E. Identity on coordinates.
pub fn unit_left(e: &Cx) -> ChainMap {
    let s = ChainComplex::unit(e.ring());
    let src = tensor(&s, e);
    let comps = e
        .degrees()
        .map(|n| (n, Matrix::identity(e.ring(), e.rank(n))))
        .collect();
    ChainMap::new(&src.complex, e, 0, comps).expect("left unitor shapes")
}

/// E⊗S → E. Identity on coordinates.
pub fn unit_right(e: &Cx) -> ChainMap {
    let s = ChainComplex::unit(e.ring());
    let src = tensor(e, &s);
    let comps = e
        .degrees()
        .map(|n| (n, Matrix::identity(e.ring(), e.rank(n))))
        .collect();
    ChainMap::new(&src.complex, e, 0, comps).expect("right unitor shapes")
}

/// (ΣX)⊗Y → Σ(X⊗Y). Signless: block orders and sizes agree on the nose.
pub fn shuffle_left(x: &Cx, y: &Cx) -> ChainMap {
    let src = tensor(&x.shift(1), y);
    let tgt = tensor(x, y).complex.shift(1);
    let comps = src
        .complex
        .degrees()
        .map(|n| (n, Matrix::identity(src.complex.ring(), src.complex.rank(n))))
        .collect();
    let map = ChainMap::new(&src.complex, &tgt, 0, comps).expect("left shuffle shapes");
    debug_assert!(map.is_chain_map());
    map
}

/// X⊗(ΣY) → Σ(X⊗Y). Carries (−1)^i on the Xⁱ blocks.
pub fn shuffle_right(x: &Cx, y: &Cx) -> ChainMap {
    let src = tensor(x, &y.shift(1));
    let tgt = tensor(x, y).complex.shift(1);
    let ring = src.complex.ring();
    let mut comps = BTreeMap::new();
    for n in src.complex.degrees() {
        let size = src.complex.rank(n);
        if size == 0 {
            continue;
        }
        let mut m = Matrix::zero(ring, size, size);
        for blk in src.layout.blocks(n) {
            let sign = if blk.left_deg.rem_euclid(2) == 1 { -1 } else { 1 };
            for t in 0..blk.len() {
                m.set(blk.offset + t, blk.offset + t, ring.from_i64(sign));
            }
        }
        comps.insert(n, m);
    }
    let map = ChainMap::new(&src.complex, &tgt, 0, comps).expect("right shuffle shapes");
    debug_assert!(map.is_chain_map());
    map
}

/// Inverse of a degree-0 isomorphism whose components are signed permutation
/// matrices — every coherence isomorphism in this module is one. For such a
/// component the inverse is the transpose, so no solving is needed.
pub fn signed_perm_inverse(f: &ChainMap) -> ChainMap {
    assert_eq!(f.degree(), 0, "only degree-0 isomorphisms can be inverted this way");
    let comps = f.comps().iter().map(|(&n, m)| (n, m.transpose())).collect();
    let inv = ChainMap::new(f.target(), f.source(), 0, comps)
        .expect("transposed components fit the swapped endpoints");
    debug_assert!(f.then(&inv) == ChainMap::identity(f.source()), "not a signed permutation");
    debug_assert!(inv.then(f) == ChainMap::identity(f.target()), "not a signed permutation");
    inv
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::cx_eq;
    use crate::ring::RingSpec;
    use std::collections::BTreeMap as Map;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    fn two_step(k: i64, lo: i64) -> Cx {
        let mut ranks = Map::new();
        ranks.insert(lo, 1);
        ranks.insert(lo + 1, 1);
        let mut diffs = Map::new();
        diffs.insert(lo, Matrix::from_i64_rows(z(), &[&[k]]));
        ChainComplex::build(z(), ranks, diffs).expect("valid complex")
    }

    #[test]
    fn unit_cancels_on_both_sides() {
        let e = two_step(2, 0);
        for u in [unit_left(&e), unit_right(&e)] {
            assert!(u.is_chain_map());
            assert!(u.invert_degreewise().is_some());
            assert!(cx_eq(u.target(), &e));
        }
    }

    #[test]
    fn shifted_spheres_multiply_degrees() {
        let s1 = ChainComplex::sphere(z(), -1, 1);
        let t = tensor(&s1, &s1);
        assert_eq!(t.complex.rank(-2), 1);
        assert_eq!(t.complex.total_rank(), 1);
    }

    #[test]
    fn symmetry_squares_to_identity_and_flips_sign_on_odd_odd() {
        let s1 = ChainComplex::sphere(z(), -1, 1);
        let g = symmetry(&s1, &s1);
        // ΣS⊗ΣS sits in degree −2 with γ = −1.
        assert_eq!(g.comp(-2), Matrix::from_i64_rows(z(), &[&[-1]]));

        let e = two_step(2, 0);
        let f = two_step(3, -1);
        let fwd = symmetry(&e, &f);
        let bwd = symmetry(&f, &e);
        let round = fwd.then(&bwd.rehouse(fwd.target(), fwd.source()));
        assert_eq!(round, ChainMap::identity(fwd.source()));
    }

    #[test]
    fn symmetry_is_natural_in_both_slots() {
        let e = two_step(2, 0);
        let f = two_step(3, -1);
        let phi = ChainMap::identity(&e).scale_i64(2);
        let psi = {
            // a nontrivial chain endomorphism of f: multiplication by 3
            ChainMap::identity(&f).scale_i64(3)
        };
        let lhs = tensor_map(&phi, &psi).then(&symmetry(&e, &f));
        let rhs = symmetry(&e, &f).then(&tensor_map(&psi, &phi));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn koszul_interchange_for_graded_composites() {
        // s: degree −1 endomorphism of a disc; f = identity. The interchange
        // (1⊗s)∘(s⊗1) = −(s⊗1)∘(1⊗s) exhibits the sign.
        let d = ChainComplex::disc(z(), 0, 1);
        let mut comps = Map::new();
        comps.insert(1, Matrix::from_i64_rows(z(), &[&[1]]));
        let s = ChainMap::new(&d, &d, -1, comps).expect("degree −1 endo");
        let id = ChainMap::identity(&d);
        let a = tensor_map(&s, &id).then(&tensor_map(&id, &s));
        let b = tensor_map(&id, &s).then(&tensor_map(&s, &id));
        assert_eq!(a, b.neg());
    }

    #[test]
    fn associativity_is_a_signless_chain_isomorphism() {
        let e = two_step(2, 0);
        let f = two_step(3, -1);
        let g = two_step(5, 1);
        let al = assoc(&e, &f, &g);
        assert!(al.is_chain_map());
        let inv = al.invert_degreewise().expect("permutation inverts");
        assert_eq!(al.then(&inv), ChainMap::identity(al.source()));
    }

    #[test]
    fn shuffles_are_chain_isomorphisms_with_the_advertised_signs() {
        let x = two_step(2, 0);
        let y = two_step(3, -1);
        let l = shuffle_left(&x, &y);
        let r = shuffle_right(&x, &y);
        assert!(l.invert_degreewise().is_some());
        assert!(r.invert_degreewise().is_some());
        // left shuffle is the identity matrix degreewise
        for n in l.source().degrees() {
            assert!(l.comp(n).is_identity());
        }
        // right shuffle negates exactly the odd-left-degree blocks
        let src = tensor(&x, &y.shift(1));
        for n in src.complex.degrees() {
            for blk in src.layout.blocks(n) {
                let m = r.comp(n);
                let expect = if blk.left_deg.rem_euclid(2) == 1 { -1 } else { 1 };
                assert_eq!(
                    *m.get(blk.offset, blk.offset),
                    crate::ring::Scalar::Int(expect.into())
                );
            }
        }
    }

    #[test]
    fn tensor_differential_squares_even_with_torsion_maps() {
        let e = two_step(2, 0);
        let f = two_step(3, -1);
        let t = tensor(&e, &f);
        // construction already asserts d² = 0; spot-check the Koszul corner
        let d0 = t.complex.d(-1);
        let d1 = t.complex.d(0);
        assert!(d1.mul(&d0).is_zero());
    }
}
