//! Seeded random instances for the fuzzing front end: bounded complexes
//! assembled from sphere and disc summands and conjugated by unimodular
//! basis changes, chain maps and endomorphisms written in closed form on the
//! summand structure, semi-split extensions with controllable gluing, and
//! endomorphism squares with independently predicted traces.
//!
//! Everything is driven by a caller-supplied RNG; equal seeds give equal
//! instances, entry for entry.

use std::collections::BTreeMap;

use rand::Rng;

use crate::complex::{ChainComplex, ChainMap, Cx};
use crate::matrix::Matrix;
use crate::ring::{RingSpec, Scalar};
use crate::ses::SemiSplitSES;
use crate::snf::try_invert;

/// Size bounds for generated instances.
#[derive(Clone, Copy, Debug)]
pub struct GenParams {
    pub ring: RingSpec,
    pub min_deg: i64,
    pub max_deg: i64,
    pub max_rank: usize,
}

#[derive(Clone, Copy, Debug)]
enum Summand {
    Sphere { deg: i64, coord: usize },
    /// Identity differential from `bottom` at `deg` to `top` at `deg + 1`.
    Disc { deg: i64, bottom: usize, top: usize },
}

/// A generated complex remembering how it was built: the summand structure in
/// standard coordinates and the unimodular change of basis applied degreewise.
/// The memory is what lets endomorphisms and gluing maps be written down in
/// closed form instead of solved for.
#[derive(Clone, Debug)]
pub struct RandomComplex {
    pub complex: Cx,
    summands: Vec<Summand>,
    u: BTreeMap<i64, Matrix>,
    u_inv: BTreeMap<i64, Matrix>,
}

/// A random unimodular matrix with its inverse, built from elementary row
/// operations so both stay integral over ℤ.
pub fn unimodular(rng: &mut impl Rng, ring: RingSpec, n: usize) -> (Matrix, Matrix) {
    let mut u = Matrix::identity(ring, n);
    if n > 1 {
        for _ in 0..2 * n {
            let i = rng.gen_range(0..n);
            let mut j = rng.gen_range(0..n);
            while j == i {
                j = rng.gen_range(0..n);
            }
            match rng.gen_range(0..4) {
                0..=1 => {
                    // shear: row j += c · row i
                    let c = ring.from_i64([-2i64, -1, 1, 2][rng.gen_range(0..4)]);
                    for k in 0..n {
                        let t = ring.add(u.get(j, k), &ring.mul(&c, u.get(i, k)));
                        u.set(j, k, t);
                    }
                }
                2 => {
                    for k in 0..n {
                        let a = u.get(i, k).clone();
                        let b = u.get(j, k).clone();
                        u.set(i, k, b);
                        u.set(j, k, a);
                    }
                }
                _ => {
                    for k in 0..n {
                        let t = ring.neg(u.get(i, k));
                        u.set(i, k, t);
                    }
                }
            }
        }
    }
    let u_inv = try_invert(&u).expect("elementary operations stay invertible");
    (u, u_inv)
}

/// A bounded complex: ranks drawn per degree, filled by spheres and by discs
/// reaching into the next degree, then conjugated degreewise.
pub fn random_complex(rng: &mut impl Rng, params: &GenParams) -> RandomComplex {
    let ring = params.ring;
    let mut ranks: BTreeMap<i64, usize> = BTreeMap::new();
    for n in params.min_deg..=params.max_deg {
        let r = rng.gen_range(0..=params.max_rank);
        if r > 0 {
            ranks.insert(n, r);
        }
    }
    let rank = |n: i64| ranks.get(&n).copied().unwrap_or(0);

    let mut summands = Vec::new();
    let mut next: BTreeMap<i64, usize> = BTreeMap::new();
    for n in params.min_deg..=params.max_deg {
        while next.get(&n).copied().unwrap_or(0) < rank(n) {
            let here = next.entry(n).or_insert(0);
            let coord = *here;
            *here += 1;
            let above = next.get(&(n + 1)).copied().unwrap_or(0);
            if above < rank(n + 1) && rng.gen_bool(0.5) {
                let top = next.entry(n + 1).or_insert(0);
                summands.push(Summand::Disc { deg: n, bottom: coord, top: *top });
                *top += 1;
            } else {
                summands.push(Summand::Sphere { deg: n, coord });
            }
        }
    }

    let mut diffs: BTreeMap<i64, Matrix> = BTreeMap::new();
    for s in &summands {
        if let Summand::Disc { deg, bottom, top } = s {
            let d = diffs
                .entry(*deg)
                .or_insert_with(|| Matrix::zero(ring, rank(deg + 1), rank(*deg)));
            d.set(*top, *bottom, ring.one());
        }
    }

    let mut u = BTreeMap::new();
    let mut u_inv = BTreeMap::new();
    for (&n, &r) in &ranks {
        let (a, b) = unimodular(rng, ring, r);
        u.insert(n, a);
        u_inv.insert(n, b);
    }
    let conj_diffs = diffs
        .into_iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(n, m)| {
            let left = u.get(&(n + 1)).expect("disc top allocated");
            let right = u_inv.get(&n).expect("disc bottom allocated");
            (n, left.mul(&m).mul(right))
        })
        .collect();
    let complex = ChainComplex::build(ring, ranks, conj_diffs).expect("conjugated differential");
    RandomComplex { complex, summands, u, u_inv }
}

impl RandomComplex {
    fn ring(&self) -> RingSpec {
        self.complex.ring()
    }

    /// Conjugates a standard-coordinate endomorphism into the final basis.
    fn conj_endo(&self, std: BTreeMap<i64, Matrix>) -> BTreeMap<i64, Matrix> {
        std.into_iter()
            .filter(|(_, m)| !m.is_zero())
            .map(|(n, m)| (n, self.u[&n].mul(&m).mul(&self.u_inv[&n])))
            .collect()
    }

    /// Block-scalar endomorphism components in standard coordinates: one
    /// scalar per summand, discs using theirs on both ends.
    fn block_scalar(&self, scalars: &[Scalar]) -> BTreeMap<i64, Matrix> {
        let ring = self.ring();
        let mut comps: BTreeMap<i64, Matrix> = BTreeMap::new();
        let mut entry = |n: i64, i: usize, c: &Scalar| {
            let r = self.complex.rank(n);
            comps.entry(n).or_insert_with(|| Matrix::zero(ring, r, r)).set(i, i, c.clone());
        };
        for (s, c) in self.summands.iter().zip(scalars) {
            match s {
                Summand::Sphere { deg, coord } => entry(*deg, *coord, c),
                Summand::Disc { deg, bottom, top } => {
                    entry(*deg, *bottom, c);
                    entry(*deg + 1, *top, c);
                }
            }
        }
        comps
    }

    /// Alternating-sign trace a block-scalar endomorphism will have: spheres
    /// contribute their scalar with the parity sign, discs cancel.
    fn block_trace(&self, scalars: &[Scalar]) -> Scalar {
        let ring = self.ring();
        let mut acc = ring.zero();
        for (s, c) in self.summands.iter().zip(scalars) {
            if let Summand::Sphere { deg, .. } = s {
                acc = if deg.rem_euclid(2) == 1 { ring.sub(&acc, c) } else { ring.add(&acc, c) };
            }
        }
        acc
    }
}

/// Any degree-`degree` map with small sparse entries; no chain condition.
/// This is the raw material for homotopy witnesses and perturbations.
pub fn sparse_map(rng: &mut impl Rng, src: &Cx, tgt: &Cx, degree: i64) -> ChainMap {
    let ring = src.ring();
    let mut comps = BTreeMap::new();
    for n in src.degrees() {
        let rows = tgt.rank(n + degree);
        let cols = src.rank(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(ring, rows, cols);
        let mut hit = false;
        for i in 0..rows {
            for j in 0..cols {
                if rng.gen_bool(1.0 / 3.0) {
                    m.set(i, j, ring.from_i64(rng.gen_range(-2..=2)));
                    hit = true;
                }
            }
        }
        if hit && !m.is_zero() {
            comps.insert(n, m);
        }
    }
    ChainMap::new(src, tgt, degree, comps).expect("sparse map shapes")
}

/// d∘r + r∘d for a degree −1 self-map: always a chain endomorphism, always
/// traceless, never changes a homotopy-invariant quantity.
fn boundary_dress(r: &ChainMap) -> ChainMap {
    let e = r.source().clone();
    let mut comps = BTreeMap::new();
    for n in e.degrees() {
        if e.rank(n) == 0 {
            continue;
        }
        let dr = e.d(n - 1).mul(&r.comp(n));
        let rd = r.comp(n + 1).mul(&e.d(n));
        let m = dr.add(&rd);
        if !m.is_zero() {
            comps.insert(n, m);
        }
    }
    ChainMap::new(&e, &e, 0, comps).expect("dressing shapes")
}

/// A chain endomorphism with a known alternating trace: a block-scalar map on
/// the summand structure, conjugated into the final basis and dressed by a
/// null-homotopic perturbation.
pub struct RandomEndo {
    pub map: ChainMap,
    /// Predicted alternating trace, computed from the summand scalars alone.
    pub trace: Scalar,
}

pub fn random_endo(rng: &mut impl Rng, rc: &RandomComplex) -> RandomEndo {
    let ring = rc.ring();
    let scalars: Vec<Scalar> =
        (0..rc.summands.len()).map(|_| ring.from_i64(rng.gen_range(-3..=3))).collect();
    let base = rc.conj_endo(rc.block_scalar(&scalars));
    let core = ChainMap::new(&rc.complex, &rc.complex, 0, base).expect("endo shapes");
    let r = sparse_map(rng, &rc.complex, &rc.complex, -1);
    let map = core.add(&boundary_dress(&r));
    debug_assert!(map.is_chain_map());
    RandomEndo { map, trace: rc.block_trace(&scalars) }
}

/// A chain map between two generated complexes: in standard coordinates the
/// legal summand-to-summand blocks are spheres to spheres in equal degree,
/// discs to discs in equal degrees, spheres onto disc tops, and disc bottoms
/// onto spheres; each is filled sparsely, then both bases are changed.
pub fn random_chain_map(
    rng: &mut impl Rng,
    src: &RandomComplex,
    tgt: &RandomComplex,
) -> ChainMap {
    let ring = src.ring();
    let mut comps: BTreeMap<i64, Matrix> = BTreeMap::new();
    {
        let mut entry = |n: i64, row: usize, col: usize, v: Scalar| {
            let rows = tgt.complex.rank(n);
            let cols = src.complex.rank(n);
            comps.entry(n).or_insert_with(|| Matrix::zero(ring, rows, cols)).set(row, col, v);
        };
        for t in &tgt.summands {
            for s in &src.summands {
                if !rng.gen_bool(0.4) {
                    continue;
                }
                let v = ring.from_i64(rng.gen_range(-2..=2));
                if ring.is_zero(&v) {
                    continue;
                }
                match (t, s) {
                    (
                        Summand::Sphere { deg: td, coord: tc },
                        Summand::Sphere { deg: sd, coord: sc },
                    ) if td == sd => entry(*td, *tc, *sc, v),
                    (
                        Summand::Disc { deg: td, bottom: tb, top: tt },
                        Summand::Disc { deg: sd, bottom: sb, top: st },
                    ) if td == sd => {
                        entry(*td, *tb, *sb, v.clone());
                        entry(*td + 1, *tt, *st, v);
                    }
                    (
                        Summand::Disc { deg: td, top: tt, .. },
                        Summand::Sphere { deg: sd, coord: sc },
                    ) if *td + 1 == *sd => entry(*sd, *tt, *sc, v),
                    (
                        Summand::Sphere { deg: td, coord: tc },
                        Summand::Disc { deg: sd, bottom: sb, .. },
                    ) if td == sd => entry(*td, *tc, *sb, v),
                    _ => {}
                }
            }
        }
    }
    let comps = comps
        .into_iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(n, m)| (n, tgt.u[&n].mul(&m).mul(&src.u_inv[&n])))
        .collect();
    let f = ChainMap::new(&src.complex, &tgt.complex, 0, comps).expect("chain map shapes");
    debug_assert!(f.is_chain_map());
    f
}

enum GlueSlot {
    /// quotient sphere at n feeding a sub sphere at n+1; couples the two
    /// summands' endomorphism scalars
    SphereSphere { e: usize, g: usize, n: i64, v: i64 },
    /// quotient sphere at n into a sub disc top at n+1
    SphereDiscTop { e: usize, g: usize, n: i64, v: i64 },
    /// quotient disc bottom at n onto a sub sphere at n+1
    DiscBottomSphere { e: usize, g: usize, n: i64, v: i64 },
    /// quotient disc (n, n+1) into a sub disc (n+1, n+2), bottom-to-bottom
    /// and top-to-top with opposite signs
    DiscDisc { e: usize, g: usize, n: i64, v: i64 },
}

/// A semi-split extension together with the memory of both generated ends and
/// of which gluing slots were filled.
pub struct RandomExtension {
    pub sub: RandomComplex,
    pub quot: RandomComplex,
    pub ses: SemiSplitSES,
    slots: Vec<GlueSlot>,
}

/// Builds an extension of `quot` by `sub` with sparse gluing across every
/// slot the summand structures allow. With `force_glue`, one slot is filled
/// even if the sparse pass left everything empty (when any slot exists).
pub fn random_extension(
    rng: &mut impl Rng,
    params: &GenParams,
    force_glue: bool,
) -> RandomExtension {
    let sub = random_complex(rng, params);
    let quot = random_complex(rng, params);
    let ring = params.ring;

    let mut legal: Vec<GlueSlot> = Vec::new();
    for (ei, e) in sub.summands.iter().enumerate() {
        for (gi, g) in quot.summands.iter().enumerate() {
            match (e, g) {
                (Summand::Sphere { deg: ed, .. }, Summand::Sphere { deg: gd, .. })
                    if *ed == gd + 1 =>
                {
                    legal.push(GlueSlot::SphereSphere { e: ei, g: gi, n: *gd, v: 0 })
                }
                (Summand::Disc { deg: ed, .. }, Summand::Sphere { deg: gd, .. })
                    if *ed == *gd =>
                {
                    legal.push(GlueSlot::SphereDiscTop { e: ei, g: gi, n: *gd, v: 0 })
                }
                (Summand::Sphere { deg: ed, .. }, Summand::Disc { deg: gd, .. })
                    if *ed == gd + 1 =>
                {
                    legal.push(GlueSlot::DiscBottomSphere { e: ei, g: gi, n: *gd, v: 0 })
                }
                (Summand::Disc { deg: ed, .. }, Summand::Disc { deg: gd, .. })
                    if *ed == gd + 1 =>
                {
                    legal.push(GlueSlot::DiscDisc { e: ei, g: gi, n: *gd, v: 0 })
                }
                _ => {}
            }
        }
    }
    let mut slots: Vec<GlueSlot> = Vec::new();
    let mut filled = false;
    let total = legal.len();
    for (k, mut slot) in legal.into_iter().enumerate() {
        let mut v = if rng.gen_bool(0.4) { rng.gen_range(-3..=3) } else { 0 };
        if v == 0 && force_glue && !filled && k + 1 == total {
            v = 2;
        }
        if v == 0 {
            continue;
        }
        filled = true;
        match &mut slot {
            GlueSlot::SphereSphere { v: s, .. }
            | GlueSlot::SphereDiscTop { v: s, .. }
            | GlueSlot::DiscBottomSphere { v: s, .. }
            | GlueSlot::DiscDisc { v: s, .. } => *s = v,
        }
        slots.push(slot);
    }

    let mut w_std: BTreeMap<i64, Matrix> = BTreeMap::new();
    {
        let mut entry = |n: i64, row: usize, col: usize, v: Scalar| {
            let rows = sub.complex.rank(n + 1);
            let cols = quot.complex.rank(n);
            w_std.entry(n).or_insert_with(|| Matrix::zero(ring, rows, cols)).set(row, col, v);
        };
        for slot in &slots {
            match slot {
                GlueSlot::SphereSphere { e, g, n, v } => {
                    let (ec, gc) = (coord_at(&sub, *e, n + 1), coord_at(&quot, *g, *n));
                    entry(*n, ec, gc, ring.from_i64(*v));
                }
                GlueSlot::SphereDiscTop { e, g, n, v } => {
                    let (ec, gc) = (coord_at(&sub, *e, n + 1), coord_at(&quot, *g, *n));
                    entry(*n, ec, gc, ring.from_i64(*v));
                }
                GlueSlot::DiscBottomSphere { e, g, n, v } => {
                    let (ec, gc) = (coord_at(&sub, *e, n + 1), coord_at(&quot, *g, *n));
                    entry(*n, ec, gc, ring.from_i64(*v));
                }
                GlueSlot::DiscDisc { e, g, n, v } => {
                    entry(*n, coord_at(&sub, *e, n + 1), coord_at(&quot, *g, *n), ring.from_i64(*v));
                    entry(
                        *n + 1,
                        coord_at(&sub, *e, n + 2),
                        coord_at(&quot, *g, n + 1),
                        ring.from_i64(-*v),
                    );
                }
            }
        }
    }
    let w_comps: BTreeMap<i64, Matrix> = w_std
        .into_iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(n, m)| (n, sub.u[&(n + 1)].mul(&m).mul(&quot.u_inv[&n])))
        .collect();
    let glue =
        ChainMap::new(&quot.complex, &sub.complex, 1, w_comps).expect("gluing shapes");
    let ses = SemiSplitSES::new(&sub.complex, &quot.complex, glue).expect("gluing anticommutes");
    RandomExtension { sub, quot, ses, slots }
}

/// The standard coordinate a summand occupies at one of its degrees.
fn coord_at(rc: &RandomComplex, idx: usize, n: i64) -> usize {
    match &rc.summands[idx] {
        Summand::Sphere { deg, coord } => {
            assert_eq!(*deg, n, "sphere summand queried off its degree");
            *coord
        }
        Summand::Disc { deg, bottom, top } => {
            if *deg == n {
                *bottom
            } else {
                assert_eq!(*deg + 1, n, "disc summand queried off its degrees");
                *top
            }
        }
    }
}

/// An endomorphism pair over an extension: φ on the sub, ψ on the total, and
/// the homotopy slack s with fφ − ψf = ds + sd, plus the three alternating
/// traces predicted from the summand scalars alone.
pub struct EndoSquare {
    pub phi: ChainMap,
    pub psi: ChainMap,
    pub s: ChainMap,
    pub tr_sub: Scalar,
    pub tr_total: Scalar,
    pub tr_quot: Scalar,
}

/// Draws scalars per summand (coupling the pairs tied by sphere-to-sphere
/// glue), corrects the off-diagonal block in closed form, dresses everything
/// with null-homotopic perturbations, and perturbs the total endomorphism off
/// the strict square by a final homotopy, so the slack is generically
/// nonzero.
pub fn random_endo_square(rng: &mut impl Rng, ext: &RandomExtension) -> EndoSquare {
    let ring = ext.sub.ring();
    let e = &ext.sub;
    let g = &ext.quot;
    let total = ext.ses.total();

    // scalar classes: sphere-to-sphere glue ties the two summands together
    let ne = e.summands.len();
    let mut class: Vec<usize> = (0..ne + g.summands.len()).collect();
    fn root(class: &mut Vec<usize>, mut i: usize) -> usize {
        while class[i] != i {
            class[i] = class[class[i]];
            i = class[i];
        }
        i
    }
    for slot in &ext.slots {
        if let GlueSlot::SphereSphere { e: ei, g: gi, .. } = slot {
            let (a, b) = (root(&mut class, *ei), root(&mut class, ne + gi));
            class[a] = b;
        }
    }
    let mut chosen: BTreeMap<usize, Scalar> = BTreeMap::new();
    let mut all_scalars = Vec::new();
    for i in 0..ne + g.summands.len() {
        let r = root(&mut class, i);
        let c = chosen
            .entry(r)
            .or_insert_with(|| ring.from_i64(rng.gen_range(-3..=3)))
            .clone();
        all_scalars.push(c);
    }
    let e_scalars = all_scalars[..ne].to_vec();
    let g_scalars = all_scalars[ne..].to_vec();

    // the off-diagonal block that makes the upper-triangular total
    // endomorphism a chain map: closed-form corrections per glue slot, plus a
    // free chain block for variety
    let mut x_std: BTreeMap<i64, Matrix> = BTreeMap::new();
    {
        let mut bump = |n: i64, row: usize, col: usize, v: Scalar| {
            let rows = e.complex.rank(n);
            let cols = g.complex.rank(n);
            let m = x_std.entry(n).or_insert_with(|| Matrix::zero(ring, rows, cols));
            let t = ring.add(m.get(row, col), &v);
            m.set(row, col, t);
        };
        for slot in &ext.slots {
            match slot {
                GlueSlot::SphereSphere { .. } => {} // scalars tied instead
                GlueSlot::SphereDiscTop { e: ei, g: gi, n, v } => {
                    let gap = ring.sub(&e_scalars[*ei], &g_scalars[*gi]);
                    let fix = ring.mul(&gap, &ring.from_i64(*v));
                    bump(*n, coord_at(e, *ei, *n), coord_at(g, *gi, *n), fix);
                }
                GlueSlot::DiscBottomSphere { e: ei, g: gi, n, v } => {
                    let gap = ring.sub(&e_scalars[*ei], &g_scalars[*gi]);
                    let fix = ring.neg(&ring.mul(&gap, &ring.from_i64(*v)));
                    bump(n + 1, coord_at(e, *ei, n + 1), coord_at(g, *gi, n + 1), fix);
                }
                GlueSlot::DiscDisc { e: ei, g: gi, n, v } => {
                    let gap = ring.sub(&e_scalars[*ei], &g_scalars[*gi]);
                    let fix = ring.neg(&ring.mul(&gap, &ring.from_i64(*v)));
                    bump(n + 1, coord_at(e, *ei, n + 1), coord_at(g, *gi, n + 1), fix);
                }
            }
        }
    }
    let x_conj: BTreeMap<i64, Matrix> = x_std
        .into_iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(n, m)| (n, e.u[&n].mul(&m).mul(&g.u_inv[&n])))
        .collect();
    let x_fix = ChainMap::new(&g.complex, &e.complex, 0, x_conj).expect("correction shapes");
    let x_free = random_chain_map(rng, g, e);

    let phi_core =
        ChainMap::new(&e.complex, &e.complex, 0, e.conj_endo(e.block_scalar(&e_scalars)))
            .expect("sub endo shapes");
    let omega_core =
        ChainMap::new(&g.complex, &g.complex, 0, g.conj_endo(g.block_scalar(&g_scalars)))
            .expect("quotient endo shapes");

    // null-homotopic dressing on both ends, with the matching closed-form
    // correction r∘w + w∘r' carried into the off-diagonal block
    let r = sparse_map(rng, &e.complex, &e.complex, -1);
    let r2 = sparse_map(rng, &g.complex, &g.complex, -1);
    let w = ext.ses.glue();
    let phi = phi_core.add(&boundary_dress(&r));
    let omega = omega_core.add(&boundary_dress(&r2));
    let x = x_fix.add(&x_free).add(&w.then(&r)).add(&r2.then(&w));

    let mut psi_comps: BTreeMap<i64, Matrix> = BTreeMap::new();
    for n in total.degrees() {
        let size = total.rank(n);
        let er = e.complex.rank(n);
        let mut m = Matrix::zero(ring, size, size);
        let pc = phi.comp(n);
        if pc.rows() > 0 {
            m.paste(0, 0, &pc);
        }
        let xc = x.comp(n);
        if xc.rows() > 0 && xc.cols() > 0 {
            m.paste(0, er, &xc);
        }
        let oc = omega.comp(n);
        if oc.rows() > 0 {
            m.paste(er, er, &oc);
        }
        if !m.is_zero() {
            psi_comps.insert(n, m);
        }
    }
    let psi_strict =
        ChainMap::new(total, total, 0, psi_comps).expect("total endo shapes");
    debug_assert!(psi_strict.is_chain_map());

    let t = sparse_map(rng, total, total, -1);
    let psi = psi_strict.add(&boundary_dress(&t));
    let s = ext.ses.incl().then(&t).neg();

    let tr_sub = e.block_trace(&e_scalars);
    let tr_quot = g.block_trace(&g_scalars);
    let tr_total = ring.add(&tr_sub, &tr_quot);
    EndoSquare { phi, psi, s, tr_sub, tr_total, tr_quot }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::Homotopy;
    use crate::trace::{additivity_run, euler_trace_oracle, tr};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;

    fn params(ring: RingSpec) -> GenParams {
        GenParams { ring, min_deg: -2, max_deg: 2, max_rank: 3 }
    }

    #[test]
    fn generated_complexes_are_complexes_and_reproducible() {
        for ring in [RingSpec::Integers, RingSpec::PrimeField(5), RingSpec::Rationals] {
            let mut rng = ChaCha12Rng::seed_from_u64(11);
            let a = random_complex(&mut rng, &params(ring));
            for n in a.complex.degrees() {
                assert!(a.complex.d(n + 1).mul(&a.complex.d(n)).is_zero());
            }
            let mut rng2 = ChaCha12Rng::seed_from_u64(11);
            let b = random_complex(&mut rng2, &params(ring));
            for n in -3..=3 {
                assert_eq!(a.complex.rank(n), b.complex.rank(n));
                assert_eq!(a.complex.d(n), b.complex.d(n));
            }
        }
    }

    #[test]
    fn generated_endos_carry_their_predicted_trace() {
        let mut rng = ChaCha12Rng::seed_from_u64(23);
        for k in 0..40 {
            let ring = if k % 2 == 0 { RingSpec::Integers } else { RingSpec::PrimeField(7) };
            let rc = random_complex(&mut rng, &params(ring));
            let endo = random_endo(&mut rng, &rc);
            assert!(endo.map.is_chain_map());
            assert_eq!(euler_trace_oracle(&endo.map), endo.trace);
            assert_eq!(tr(&endo.map).unwrap(), endo.trace);
        }
    }

    #[test]
    fn generated_chain_maps_commute_with_differentials() {
        let mut rng = ChaCha12Rng::seed_from_u64(37);
        for _ in 0..40 {
            let a = random_complex(&mut rng, &params(RingSpec::Integers));
            let b = random_complex(&mut rng, &params(RingSpec::Integers));
            let f = random_chain_map(&mut rng, &a, &b);
            assert!(f.is_chain_map());
        }
    }

    #[test]
    fn generated_extensions_glue_and_squares_verify() {
        let mut rng = ChaCha12Rng::seed_from_u64(41);
        let mut glued = 0;
        let mut slack = 0;
        for k in 0..30 {
            let ring = if k % 2 == 0 { RingSpec::Integers } else { RingSpec::PrimeField(7) };
            let ext = random_extension(&mut rng, &params(ring), true);
            if !ext.ses.glue().is_zero() {
                glued += 1;
            }
            let sq = random_endo_square(&mut rng, &ext);
            assert!(sq.phi.is_chain_map() && sq.psi.is_chain_map());
            let lhs = sq.phi.then(&ext.ses.incl());
            let rhs = ext.ses.incl().then(&sq.psi);
            let h = Homotopy::new(lhs, rhs, sq.s.clone()).expect("slack witnesses the square");
            assert!(h.verify());
            if !sq.s.is_zero() {
                slack += 1;
            }
            assert_eq!(euler_trace_oracle(&sq.phi), sq.tr_sub);
            assert_eq!(euler_trace_oracle(&sq.psi), sq.tr_total);
        }
        assert!(glued > 15, "glue should be present in most instances, got {glued}");
        assert!(slack > 10, "homotopy slack should usually be nonzero, got {slack}");
    }

    #[test]
    fn generated_squares_pass_the_additivity_check() {
        let mut rng = ChaCha12Rng::seed_from_u64(43);
        let small = GenParams { ring: RingSpec::Integers, min_deg: -1, max_deg: 1, max_rank: 2 };
        for _ in 0..5 {
            let ext = random_extension(&mut rng, &small, true);
            let sq = random_endo_square(&mut rng, &ext);
            let run = additivity_run(&ext.ses, &sq.phi, &sq.psi, &sq.s).unwrap();
            assert!(run.report.ok(), "{:?}", run.report);
            assert!(run.equal);
            assert_eq!(run.tr_phi, sq.tr_sub);
            assert_eq!(run.tr_psi, sq.tr_total);
            assert_eq!(run.tr_omega, sq.tr_quot);
        }
    }
}
