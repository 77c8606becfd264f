//! Bounded cochain complexes of finite-rank free modules, their maps, and the
//! basic constructions: shift, mapping cone, cylinder, direct sum, homology.
//!
//! Conventions, fixed once here and relied on everywhere else:
//! * cohomological indexing, differentials raise degree by one;
//! * dⁿ : Eⁿ → Eⁿ⁺¹ is stored as a matrix acting on column vectors;
//! * cone(f)ⁿ = Eⁿ⁺¹ ⊕ Fⁿ with differential [[−d_E, 0], [f, d_F]];
//! * (Σᵏ E)ⁿ = Eⁿ⁺ᵏ with differential (−1)ᵏ d;
//! * a homotopy s between f and g satisfies f − g = d∘s + s∘d.
//!
//! Every constructor validates its invariants (shapes, d² = 0, chain-map
//! squares), so ill-formed objects cannot circulate.

use crate::matrix::Matrix;
use crate::ring::RingSpec;
use crate::snf::{self, kernel_basis, smith_normal_form};
use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Complexes are immutable and shared; maps hold their endpoints through this.
pub type Cx = Arc<ChainComplex>;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("differential does not square to zero at degree {0}")]
    DifferentialSquare(i64),
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainComplex {
    ring: RingSpec,
    ranks: BTreeMap<i64, usize>,
    diffs: BTreeMap<i64, Matrix>,
}

impl ChainComplex {
    pub fn new(
        ring: RingSpec,
        ranks: BTreeMap<i64, usize>,
        diffs: BTreeMap<i64, Matrix>,
    ) -> Result<ChainComplex, ComplexError> {
        let ranks: BTreeMap<i64, usize> = ranks.into_iter().filter(|&(_, r)| r > 0).collect();
        let mut kept = BTreeMap::new();
        for (n, m) in diffs {
            if m.ring() != ring {
                return Err(ComplexError::RingMismatch(format!(
                    "differential at degree {n} has entries over {}, complex is over {ring}",
                    m.ring()
                )));
            }
            let rows = ranks.get(&(n + 1)).copied().unwrap_or(0);
            let cols = ranks.get(&n).copied().unwrap_or(0);
            if (m.rows(), m.cols()) != (rows, cols) {
                return Err(ComplexError::ShapeMismatch(format!(
                    "differential at degree {n} is {}x{}, expected {rows}x{cols}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_zero() {
                kept.insert(n, m);
            }
        }
        let cx = ChainComplex { ring, ranks, diffs: kept };
        for (&n, _) in &cx.diffs {
            if !cx.d(n + 1).mul(&cx.d(n)).is_zero() {
                return Err(ComplexError::DifferentialSquare(n));
            }
        }
        Ok(cx)
    }

    pub fn build(
        ring: RingSpec,
        ranks: BTreeMap<i64, usize>,
        diffs: BTreeMap<i64, Matrix>,
    ) -> Result<Cx, ComplexError> {
        ChainComplex::new(ring, ranks, diffs).map(Arc::new)
    }

    /// The zero complex.
    pub fn zero(ring: RingSpec) -> Cx {
        Arc::new(ChainComplex { ring, ranks: BTreeMap::new(), diffs: BTreeMap::new() })
    }

    /// Rank one in a single degree, zero differential.
    pub fn sphere(ring: RingSpec, degree: i64, rank: usize) -> Cx {
        let mut ranks = BTreeMap::new();
        if rank > 0 {
            ranks.insert(degree, rank);
        }
        Arc::new(ChainComplex { ring, ranks, diffs: BTreeMap::new() })
    }

    /// The tensor unit: rank one in degree zero.
    pub fn unit(ring: RingSpec) -> Cx {
        ChainComplex::sphere(ring, 0, 1)
    }

    /// Identity differential from degree n to n+1; contractible.
    pub fn disc(ring: RingSpec, degree: i64, rank: usize) -> Cx {
        let mut ranks = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        if rank > 0 {
            ranks.insert(degree, rank);
            ranks.insert(degree + 1, rank);
            diffs.insert(degree, Matrix::identity(ring, rank));
        }
        Arc::new(ChainComplex { ring, ranks, diffs })
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn rank(&self, n: i64) -> usize {
        self.ranks.get(&n).copied().unwrap_or(0)
    }

    /// The differential dⁿ, materialized with the correct shape even when zero.
    pub fn d(&self, n: i64) -> Matrix {
        match self.diffs.get(&n) {
            Some(m) => m.clone(),
            None => Matrix::zero(self.ring, self.rank(n + 1), self.rank(n)),
        }
    }

    /// Degrees with nonzero rank, ascending.
    pub fn degrees(&self) -> impl Iterator<Item = i64> + '_ {
        self.ranks.keys().copied()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.ranks.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.ranks.keys().next_back().copied()
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.values().sum()
    }

    pub fn is_zero_complex(&self) -> bool {
        self.ranks.is_empty()
    }

    pub fn ranks(&self) -> &BTreeMap<i64, usize> {
        &self.ranks
    }

    pub fn diffs(&self) -> &BTreeMap<i64, Matrix> {
        &self.diffs
    }

    /// Σᵏ: degree n of the result is degree n+k of the input, differential
    /// scaled by (−1)ᵏ.
    pub fn shift(self: &Cx, k: i64) -> Cx {
        if k == 0 {
            return self.clone();
        }
        let ranks = self.ranks.iter().map(|(&n, &r)| (n - k, r)).collect();
        let diffs = self
            .diffs
            .iter()
            .map(|(&n, m)| (n - k, if k.rem_euclid(2) == 0 { m.clone() } else { m.neg() }))
            .collect();
        Arc::new(ChainComplex { ring: self.ring, ranks, diffs })
    }

    /// Euler characteristic Σ (−1)ⁿ rank(n) — cheap triangle sanity invariant.
    pub fn euler_characteristic(&self) -> i64 {
        self.ranks.iter().map(|(&n, &r)| if n.rem_euclid(2) == 0 { r as i64 } else { -(r as i64) }).sum()
    }
}

pub fn cx_eq(a: &Cx, b: &Cx) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ChainMap {
    source: Cx,
    target: Cx,
    degree: i64,
    comps: BTreeMap<i64, Matrix>,
}

impl ChainMap {
    /// A graded map of the given degree: component at n goes from sourceⁿ to
    /// targetⁿ⁺ᵈᵉᵍʳᵉᵉ. Chain-map-ness is a separate property ([`Self::is_chain_map`]).
    pub fn new(
        source: &Cx,
        target: &Cx,
        degree: i64,
        comps: BTreeMap<i64, Matrix>,
    ) -> Result<ChainMap, ComplexError> {
        if source.ring() != target.ring() {
            return Err(ComplexError::RingMismatch(format!(
                "map from a complex over {} to a complex over {}",
                source.ring(),
                target.ring()
            )));
        }
        let mut kept = BTreeMap::new();
        for (n, m) in comps {
            if m.ring() != source.ring() {
                return Err(ComplexError::RingMismatch(format!(
                    "component at degree {n} has entries over {}",
                    m.ring()
                )));
            }
            let rows = target.rank(n + degree);
            let cols = source.rank(n);
            if (m.rows(), m.cols()) != (rows, cols) {
                return Err(ComplexError::ShapeMismatch(format!(
                    "component at degree {n} is {}x{}, expected {rows}x{cols}",
                    m.rows(),
                    m.cols()
                )));
            }
            if !m.is_zero() {
                kept.insert(n, m);
            }
        }
        Ok(ChainMap { source: source.clone(), target: target.clone(), degree, comps: kept })
    }

    pub fn zero(source: &Cx, target: &Cx, degree: i64) -> ChainMap {
        assert_eq!(source.ring(), target.ring());
        ChainMap { source: source.clone(), target: target.clone(), degree, comps: BTreeMap::new() }
    }

    pub fn identity(cx: &Cx) -> ChainMap {
        let comps =
            cx.degrees().map(|n| (n, Matrix::identity(cx.ring(), cx.rank(n)))).collect();
        ChainMap { source: cx.clone(), target: cx.clone(), degree: 0, comps }
    }

    /// (−1)ⁿ·id in each degree n (shows up as the double-dual and unit-shift
    /// comparison maps).
    pub fn alternating_identity(cx: &Cx) -> ChainMap {
        let comps = cx
            .degrees()
            .map(|n| {
                let sign = if n.rem_euclid(2) == 0 { 1 } else { -1 };
                (n, Matrix::scalar_identity(cx.ring(), cx.rank(n), sign))
            })
            .collect();
        ChainMap { source: cx.clone(), target: cx.clone(), degree: 0, comps }
    }

    pub fn source(&self) -> &Cx {
        &self.source
    }

    pub fn target(&self) -> &Cx {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn ring(&self) -> RingSpec {
        self.source.ring()
    }

    pub fn comp(&self, n: i64) -> Matrix {
        match self.comps.get(&n) {
            Some(m) => m.clone(),
            None => {
                Matrix::zero(self.source.ring(), self.target.rank(n + self.degree), self.source.rank(n))
            }
        }
    }

    pub fn comps(&self) -> &BTreeMap<i64, Matrix> {
        &self.comps
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    /// Composition in diagram order: self first, then g.
    pub fn then(&self, g: &ChainMap) -> ChainMap {
        assert!(
            cx_eq(&self.target, &g.source),
            "composition endpoint mismatch: target of first map differs from source of second"
        );
        let mut comps = BTreeMap::new();
        for n in self.source.degrees() {
            let first = self.comp(n);
            let second = g.comp(n + self.degree);
            let m = second.mul(&first);
            if !m.is_zero() {
                comps.insert(n, m);
            }
        }
        ChainMap {
            source: self.source.clone(),
            target: g.target.clone(),
            degree: self.degree + g.degree,
            comps,
        }
    }

    pub fn add(&self, rhs: &ChainMap) -> ChainMap {
        self.combine(rhs, Matrix::add)
    }

    pub fn sub(&self, rhs: &ChainMap) -> ChainMap {
        self.combine(rhs, Matrix::sub)
    }

    fn combine(&self, rhs: &ChainMap, op: fn(&Matrix, &Matrix) -> Matrix) -> ChainMap {
        assert!(cx_eq(&self.source, &rhs.source) && cx_eq(&self.target, &rhs.target));
        assert_eq!(self.degree, rhs.degree);
        let mut comps = BTreeMap::new();
        for n in self.source.degrees() {
            let m = op(&self.comp(n), &rhs.comp(n));
            if !m.is_zero() {
                comps.insert(n, m);
            }
        }
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            comps,
        }
    }

    pub fn neg(&self) -> ChainMap {
        let comps = self.comps.iter().map(|(&n, m)| (n, m.neg())).collect();
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            comps,
        }
    }

    pub fn scale_i64(&self, c: i64) -> ChainMap {
        let s = self.ring().from_i64(c);
        let comps = self
            .comps
            .iter()
            .map(|(&n, m)| (n, m.scale(&s)))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        ChainMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree,
            comps,
        }
    }

    /// Σᵏ f between the shifted complexes; components reindex, no signs (the
    /// signs live in the shifted differentials).
    pub fn shift(&self, k: i64) -> ChainMap {
        let comps = self.comps.iter().map(|(&n, m)| (n - k, m.clone())).collect();
        ChainMap {
            source: self.source.shift(k),
            target: self.target.shift(k),
            degree: self.degree,
            comps,
        }
    }

    /// Reinterprets the map between structurally equal endpoints (used when a
    /// construction produces, say, Σ⁻¹ΣE and the identification with E is the
    /// identity on components).
    pub fn rehouse(&self, source: &Cx, target: &Cx) -> ChainMap {
        assert!(cx_eq(&self.source, source), "rehoused source differs structurally");
        assert!(cx_eq(&self.target, target), "rehoused target differs structurally");
        ChainMap {
            source: source.clone(),
            target: target.clone(),
            degree: self.degree,
            comps: self.comps.clone(),
        }
    }

    /// The chain-map square dⁿ∘fⁿ = fⁿ⁺¹∘dⁿ in every degree (degree-0 maps).
    pub fn is_chain_map(&self) -> bool {
        if self.degree != 0 {
            return false;
        }
        self.source.degrees().all(|n| {
            self.target.d(n).mul(&self.comp(n)) == self.comp(n + 1).mul(&self.source.d(n))
        })
    }

    /// Componentwise invertibility; returns the inverse graded map. For chain
    /// maps this is a strict isomorphism of complexes.
    pub fn invert_degreewise(&self) -> Option<ChainMap> {
        if self.degree != 0 {
            return None;
        }
        let mut comps = BTreeMap::new();
        for n in self.source.degrees().chain(self.target.degrees()).collect::<std::collections::BTreeSet<_>>() {
            if self.source.rank(n) != self.target.rank(n) {
                return None;
            }
            if self.source.rank(n) == 0 {
                continue;
            }
            let inv = snf::try_invert(&self.comp(n))?;
            comps.insert(n, inv);
        }
        Some(ChainMap {
            source: self.target.clone(),
            target: self.source.clone(),
            degree: 0,
            comps,
        })
    }
}

/// A verified homotopy witness: lhs − rhs = d∘s + s∘d.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Homotopy {
    lhs: ChainMap,
    rhs: ChainMap,
    s: ChainMap,
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CertError {
    #[error("homotopy witness fails: {0}")]
    BadHomotopy(String),
    #[error("certificate fails: {0}")]
    BadCertificate(String),
}

impl Homotopy {
    pub fn new(lhs: ChainMap, rhs: ChainMap, s: ChainMap) -> Result<Homotopy, CertError> {
        let h = Homotopy { lhs, rhs, s };
        if !h.verify() {
            return Err(CertError::BadHomotopy(
                "lhs − rhs ≠ d∘s + s∘d for the supplied witness".into(),
            ));
        }
        Ok(h)
    }

    /// The zero witness between equal maps.
    pub fn from_equal(lhs: ChainMap, rhs: ChainMap) -> Result<Homotopy, CertError> {
        if lhs != rhs {
            return Err(CertError::BadHomotopy("maps are not equal, witness required".into()));
        }
        let s = ChainMap::zero(lhs.source(), lhs.target(), -1);
        Ok(Homotopy { lhs, rhs, s })
    }

    pub fn lhs(&self) -> &ChainMap {
        &self.lhs
    }

    pub fn rhs(&self) -> &ChainMap {
        &self.rhs
    }

    pub fn witness(&self) -> &ChainMap {
        &self.s
    }

    pub fn is_exact(&self) -> bool {
        self.s.is_zero()
    }

    /// Re-checks the defining identity from stored data alone.
    pub fn verify(&self) -> bool {
        let (lhs, rhs, s) = (&self.lhs, &self.rhs, &self.s);
        if lhs.degree() != 0
            || rhs.degree() != 0
            || s.degree() != -1
            || !cx_eq(lhs.source(), rhs.source())
            || !cx_eq(lhs.target(), rhs.target())
            || !cx_eq(lhs.source(), s.source())
            || !cx_eq(lhs.target(), s.target())
        {
            return false;
        }
        let src = lhs.source();
        let tgt = lhs.target();
        src.degrees().all(|n| {
            let want = lhs.comp(n).sub(&rhs.comp(n));
            let have = tgt.d(n - 1).mul(&s.comp(n)).add(&s.comp(n + 1).mul(&src.d(n)));
            want == have
        })
    }

    /// Transitivity: from f ≃ g and g ≃ k, produce f ≃ k.
    pub fn concat(&self, other: &Homotopy) -> Homotopy {
        assert_eq!(self.rhs, other.lhs, "homotopies do not share the middle map");
        Homotopy { lhs: self.lhs.clone(), rhs: other.rhs.clone(), s: self.s.add(&other.s) }
    }

    /// u∘lhs ≃ u∘rhs for a chain map u out of the target.
    pub fn whisker_post(&self, u: &ChainMap) -> Homotopy {
        assert_eq!(u.degree(), 0);
        Homotopy { lhs: self.lhs.then(u), rhs: self.rhs.then(u), s: self.s.then(u) }
    }

    /// lhs∘v ≃ rhs∘v for a chain map v into the source.
    pub fn whisker_pre(&self, v: &ChainMap) -> Homotopy {
        assert_eq!(v.degree(), 0);
        Homotopy { lhs: v.then(&self.lhs), rhs: v.then(&self.rhs), s: v.then(&self.s) }
    }

    /// Symmetry: rhs ≃ lhs.
    pub fn flip(&self) -> Homotopy {
        Homotopy { lhs: self.rhs.clone(), rhs: self.lhs.clone(), s: self.s.neg() }
    }
}

/// The mapping cone together with its structure maps.
#[derive(Clone, Debug)]
pub struct Cone {
    pub complex: Cx,
    /// F → cone(f), the canonical inclusion.
    pub incl: ChainMap,
    /// cone(f) → ΣE, the canonical projection.
    pub proj: ChainMap,
}

pub fn cone(f: &ChainMap) -> Cone {
    assert_eq!(f.degree(), 0, "cone of a degree-0 chain map");
    assert!(f.is_chain_map(), "cone requires a chain map");
    let e = f.source();
    let fx = f.target();
    let ring = f.ring();

    let mut ranks = BTreeMap::new();
    let mut degrees: std::collections::BTreeSet<i64> = std::collections::BTreeSet::new();
    degrees.extend(e.degrees().map(|n| n - 1));
    degrees.extend(fx.degrees());
    for &n in &degrees {
        let r = e.rank(n + 1) + fx.rank(n);
        if r > 0 {
            ranks.insert(n, r);
        }
    }
    let mut diffs = BTreeMap::new();
    for &n in &degrees {
        let de = e.d(n + 1).neg();
        let df = fx.d(n);
        let fcomp = f.comp(n + 1);
        let z = Matrix::zero(ring, e.rank(n + 2), fx.rank(n));
        let m = Matrix::from_blocks(ring, &[&[&de, &z], &[&fcomp, &df]]);
        diffs.insert(n, m);
    }
    let complex = ChainComplex::build(ring, ranks, diffs).expect("cone differential squares to zero");

    let mut incl_comps = BTreeMap::new();
    for n in fx.degrees() {
        let top = Matrix::zero(ring, e.rank(n + 1), fx.rank(n));
        let bot = Matrix::identity(ring, fx.rank(n));
        incl_comps.insert(n, top.vstack(&bot));
    }
    let incl = ChainMap::new(fx, &complex, 0, incl_comps).expect("cone inclusion shapes");

    let shifted = e.shift(1);
    let mut proj_comps = BTreeMap::new();
    for &n in &degrees {
        let left = Matrix::identity(ring, e.rank(n + 1));
        let right = Matrix::zero(ring, e.rank(n + 1), fx.rank(n));
        proj_comps.insert(n, left.hstack(&right));
    }
    let proj = ChainMap::new(&complex, &shifted, 0, proj_comps).expect("cone projection shapes");

    debug_assert!(incl.is_chain_map());
    debug_assert!(proj.is_chain_map());
    Cone { complex, incl, proj }
}

/// The mapping cylinder with its comparison maps: cyl(f)ⁿ = Eⁿ⁺¹ ⊕ Fⁿ ⊕ Eⁿ with
/// differential [[−d_E,0,0],[f,d_F,0],[−id,0,d_E]].
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub complex: Cx,
    /// E → cyl(f), the strictified replacement of f (third slot).
    pub from_source: ChainMap,
    /// F → cyl(f), the homotopy equivalence section (middle slot).
    pub from_target: ChainMap,
    /// cyl(f) → F, the projection (0, 1, f); a homotopy equivalence.
    pub to_target: ChainMap,
    /// cyl(f) → cone(f), collapse of the last slot.
    pub to_cone: ChainMap,
    pub cone: Cone,
    /// from_target ∘ to_target ≃ id_{cyl}; the other composite is the identity
    /// on the nose.
    pub contraction: Homotopy,
}

pub fn cylinder(f: &ChainMap) -> Cylinder {
    assert_eq!(f.degree(), 0);
    assert!(f.is_chain_map(), "cylinder requires a chain map");
    let e = f.source();
    let fx = f.target();
    let ring = f.ring();
    let cone = cone(f);

    let mut degrees: std::collections::BTreeSet<i64> = std::collections::BTreeSet::new();
    degrees.extend(e.degrees().map(|n| n - 1));
    degrees.extend(e.degrees());
    degrees.extend(fx.degrees());
    let mut ranks = BTreeMap::new();
    for &n in &degrees {
        let r = e.rank(n + 1) + fx.rank(n) + e.rank(n);
        if r > 0 {
            ranks.insert(n, r);
        }
    }
    let mut diffs = BTreeMap::new();
    for &n in &degrees {
        let (e1, e2) = (e.rank(n + 1), e.rank(n + 2));
        let f0 = fx.rank(n);
        let (g0, g1) = (e.rank(n), e.rank(n + 1));
        let z = |r, c| Matrix::zero(ring, r, c);
        let row1 = [e.d(n + 1).neg(), z(e2, f0), z(e2, g0)];
        let row2 = [f.comp(n + 1), fx.d(n), z(fx.rank(n + 1), g0)];
        let row3 = [Matrix::scalar_identity(ring, e1, -1), z(g1, f0), e.d(n)];
        debug_assert_eq!(row3[0].rows(), g1);
        let m = Matrix::from_blocks(
            ring,
            &[
                &[&row1[0], &row1[1], &row1[2]],
                &[&row2[0], &row2[1], &row2[2]],
                &[&row3[0], &row3[1], &row3[2]],
            ],
        );
        diffs.insert(n, m);
    }
    let complex =
        ChainComplex::build(ring, ranks, diffs).expect("cylinder differential squares to zero");

    let block = |n: i64| (e.rank(n + 1), fx.rank(n), e.rank(n));

    let mut from_source_comps = BTreeMap::new();
    for n in e.degrees() {
        let (b1, b2, b3) = block(n);
        let m = Matrix::zero(ring, b1, b3)
            .vstack(&Matrix::zero(ring, b2, b3))
            .vstack(&Matrix::identity(ring, b3));
        from_source_comps.insert(n, m);
    }
    let from_source = ChainMap::new(e, &complex, 0, from_source_comps).expect("shapes");

    let mut from_target_comps = BTreeMap::new();
    for n in fx.degrees() {
        let (b1, b2, b3) = block(n);
        let m = Matrix::zero(ring, b1, b2)
            .vstack(&Matrix::identity(ring, b2))
            .vstack(&Matrix::zero(ring, b3, b2));
        from_target_comps.insert(n, m);
    }
    let from_target = ChainMap::new(fx, &complex, 0, from_target_comps).expect("shapes");

    let mut to_target_comps = BTreeMap::new();
    for &n in &degrees {
        let (b1, b2, _) = block(n);
        let m = Matrix::zero(ring, fx.rank(n), b1)
            .hstack(&Matrix::identity(ring, b2))
            .hstack(&f.comp(n));
        to_target_comps.insert(n, m);
    }
    let to_target = ChainMap::new(&complex, fx, 0, to_target_comps).expect("shapes");

    let mut to_cone_comps = BTreeMap::new();
    for &n in &degrees {
        let (b1, b2, b3) = block(n);
        let m = Matrix::identity(ring, b1 + b2).hstack(&Matrix::zero(ring, b1 + b2, b3));
        to_cone_comps.insert(n, m);
    }
    let to_cone = ChainMap::new(&complex, &cone.complex, 0, to_cone_comps).expect("shapes");

    debug_assert!(from_source.is_chain_map());
    debug_assert!(from_target.is_chain_map());
    debug_assert!(to_target.is_chain_map());
    debug_assert!(to_cone.is_chain_map());
    assert_eq!(from_target.then(&to_target), ChainMap::identity(fx), "retraction is exact");

    // Contraction s: single block Eⁿ → Eⁿ (slot 3 to slot 1 one degree down).
    let mut s_comps = BTreeMap::new();
    for &n in &degrees {
        let (b1, b2, b3) = block(n);
        let (c1, c2, c3) = block(n - 1);
        let mut m = Matrix::zero(ring, c1 + c2 + c3, b1 + b2 + b3);
        // slot 3 of degree n and slot 1 of degree n−1 are both Eⁿ
        debug_assert_eq!(c1, b3);
        m.paste(0, b1 + b2, &Matrix::identity(ring, b3));
        s_comps.insert(n, m);
    }
    let s = ChainMap::new(&complex, &complex, -1, s_comps).expect("shapes");
    let contraction = Homotopy::new(
        to_target.then(&from_target),
        ChainMap::identity(&complex),
        s,
    )
    .expect("cylinder contraction verifies");

    Cylinder { complex, from_source, from_target, to_target, to_cone, cone, contraction }
}

/// Direct sum with its four structure maps.
#[derive(Clone, Debug)]
pub struct DirectSum {
    pub complex: Cx,
    pub incl_left: ChainMap,
    pub incl_right: ChainMap,
    pub proj_left: ChainMap,
    pub proj_right: ChainMap,
}

pub fn direct_sum(a: &Cx, b: &Cx) -> DirectSum {
    assert_eq!(a.ring(), b.ring());
    let ring = a.ring();
    let mut degrees: std::collections::BTreeSet<i64> = std::collections::BTreeSet::new();
    degrees.extend(a.degrees());
    degrees.extend(b.degrees());
    let mut ranks = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    for &n in &degrees {
        let r = a.rank(n) + b.rank(n);
        if r > 0 {
            ranks.insert(n, r);
        }
        diffs.insert(n, a.d(n).direct_sum(&b.d(n)));
    }
    let complex = ChainComplex::build(ring, ranks, diffs).expect("sum of complexes");
    let mk = |src: &Cx, left: bool, into: bool| {
        let mut comps = BTreeMap::new();
        for &n in &degrees {
            let (ra, rb) = (a.rank(n), b.rank(n));
            let m = if left {
                Matrix::identity(ring, ra).vstack(&Matrix::zero(ring, rb, ra))
            } else {
                Matrix::zero(ring, ra, rb).vstack(&Matrix::identity(ring, rb))
            };
            let m = if into { m } else { m.transpose() };
            comps.insert(n, m);
        }
        if into {
            ChainMap::new(src, &complex, 0, comps).expect("shapes")
        } else {
            ChainMap::new(&complex, src, 0, comps).expect("shapes")
        }
    };
    DirectSum {
        complex: complex.clone(),
        incl_left: mk(a, true, true),
        incl_right: mk(b, false, true),
        proj_left: mk(a, true, false),
        proj_right: mk(b, false, false),
    }
}

/// Isomorphism class of a single cohomology module.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct HomologyGroup {
    pub free_rank: usize,
    /// Invariant factors > 1 in divisibility order; empty over a field.
    pub torsion: Vec<BigInt>,
}

/// Cohomology at degree n: ker dⁿ / im dⁿ⁻¹, as free rank plus invariant factors.
pub fn homology(cx: &Cx, n: i64) -> HomologyGroup {
    if cx.rank(n) == 0 {
        return HomologyGroup { free_rank: 0, torsion: Vec::new() };
    }
    let kernel = kernel_basis(&cx.d(n));
    let k = kernel.cols();
    if cx.rank(n - 1) == 0 {
        return HomologyGroup { free_rank: k, torsion: Vec::new() };
    }
    match cx.ring() {
        RingSpec::Integers => {
            let image_in_kernel = snf::solve_linear(&kernel, &cx.d(n - 1))
                .expect("shapes agree")
                .expect("boundaries are cycles, kernel basis is saturated");
            let presentation = smith_normal_form(&image_in_kernel).expect("integer matrix");
            let torsion: Vec<BigInt> = presentation
                .diagonal()
                .into_iter()
                .filter(|d| !d.is_one() && *d != BigInt::from(0))
                .collect();
            HomologyGroup { free_rank: k - presentation.rank(), torsion }
        }
        _ => {
            let image_rank = snf::rank(&cx.d(n - 1));
            HomologyGroup { free_rank: k - image_rank, torsion: Vec::new() }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    /// Unit complex S and multiplication by two on it.
    fn times_two() -> ChainMap {
        let s = ChainComplex::unit(z());
        let mut comps = BTreeMap::new();
        comps.insert(0, Matrix::from_i64_rows(z(), &[&[2]]));
        ChainMap::new(&s, &s, 0, comps).expect("endomorphism of the unit")
    }

    #[test]
    fn cone_of_multiplication_by_two_has_z_mod_2() {
        // Under coneⁿ = Eⁿ⁺¹ ⊕ Fⁿ, the cone of ×2 on the unit sits in degrees
        // −1 and 0, kernel vanishes, and the cokernel ℤ/2 appears in degree 0.
        let c = cone(&times_two());
        assert_eq!(c.complex.rank(-1), 1);
        assert_eq!(c.complex.rank(0), 1);
        assert_eq!(homology(&c.complex, -1), HomologyGroup { free_rank: 0, torsion: vec![] });
        assert_eq!(
            homology(&c.complex, 0),
            HomologyGroup { free_rank: 0, torsion: vec![BigInt::from(2)] }
        );
        assert_eq!(homology(&c.complex, 1), HomologyGroup { free_rank: 0, torsion: vec![] });
    }

    #[test]
    fn cone_of_identity_is_acyclic_and_cone_of_zero_splits() {
        let s = ChainComplex::unit(z());
        let c = cone(&ChainMap::identity(&s));
        for n in -2..=2 {
            assert_eq!(homology(&c.complex, n), HomologyGroup { free_rank: 0, torsion: vec![] });
        }
        let e = ChainComplex::sphere(z(), 1, 2);
        let f = ChainComplex::sphere(z(), 0, 3);
        let zero = ChainMap::zero(&e, &f, 0);
        let cz = cone(&zero);
        assert_eq!(cz.complex.rank(0), e.rank(1) + f.rank(0));
        assert!(cz.complex.d(0).is_zero());
    }

    #[test]
    fn shift_squares_to_identity_reindexing() {
        let s = ChainComplex::disc(z(), 0, 2);
        let back = s.shift(1).shift(-1);
        assert!(cx_eq(&s, &back));
        assert_eq!(s.shift(1).d(-1), s.d(0).neg());
    }

    #[test]
    fn cylinder_contracts_onto_target() {
        let f = times_two();
        let cyl = cylinder(&f);
        assert!(cyl.contraction.verify());
        assert_eq!(cyl.from_source.then(&cyl.to_target), f, "strictification projects back to f");
    }

    #[test]
    fn direct_sum_splittings_are_complete() {
        let a = ChainComplex::sphere(z(), 0, 2);
        let b = ChainComplex::disc(z(), 1, 1);
        let ds = direct_sum(&a, &b);
        let id = ChainMap::identity(&ds.complex);
        let sum = ds
            .proj_left
            .then(&ds.incl_left)
            .add(&ds.proj_right.then(&ds.incl_right));
        assert_eq!(sum, id);
        assert_eq!(ds.incl_left.then(&ds.proj_left), ChainMap::identity(&a));
        assert_eq!(ds.incl_left.then(&ds.proj_right), ChainMap::zero(&a, &b, 0));
    }

    #[test]
    fn homology_of_multiplication_by_two_presentation() {
        // 0 → Z --2--> Z → 0 concentrated in degrees 0, 1.
        let mut ranks = BTreeMap::new();
        ranks.insert(0, 1);
        ranks.insert(1, 1);
        let mut diffs = BTreeMap::new();
        diffs.insert(0, Matrix::from_i64_rows(z(), &[&[2]]));
        let cx = ChainComplex::build(z(), ranks, diffs).expect("valid complex");
        assert_eq!(homology(&cx, 0), HomologyGroup { free_rank: 0, torsion: vec![] });
        let h1 = homology(&cx, 1);
        assert_eq!(h1.free_rank, 0);
        assert_eq!(h1.torsion, vec![BigInt::from(2)]);
    }

    #[test]
    fn invalid_differentials_are_rejected() {
        let mut ranks = BTreeMap::new();
        ranks.insert(0, 1);
        ranks.insert(1, 1);
        ranks.insert(2, 1);
        let mut diffs = BTreeMap::new();
        diffs.insert(0, Matrix::from_i64_rows(z(), &[&[1]]));
        diffs.insert(1, Matrix::from_i64_rows(z(), &[&[1]]));
        assert!(matches!(
            ChainComplex::new(z(), ranks.clone(), diffs),
            Err(ComplexError::DifferentialSquare(0))
        ));
        let mut bad_shape = BTreeMap::new();
        bad_shape.insert(0, Matrix::from_i64_rows(z(), &[&[1, 0]]));
        assert!(matches!(
            ChainComplex::new(z(), ranks, bad_shape),
            Err(ComplexError::ShapeMismatch(_))
        ));
    }
}
