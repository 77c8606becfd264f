//! Homotopy solvers: finding chain homotopies, homotopy inverses, and (in
//! `ses`) cone-comparison maps, all by exact linear algebra.
//!
//! Each solver poses one global linear system over every degree at once. The
//! unknowns are the entries of one or more graded maps; each equation is a
//! matrix identity Σ Lᵢ·Xᵢ·Rᵢ = B with known L, R, B. Over ℤ the system is
//! solved through Smith normal form, over fields by elimination, so "no
//! solution" is an exact statement, not a numerical one.

use crate::complex::{cx_eq, ChainMap, Cx, Homotopy};
use crate::matrix::Matrix;
use crate::ring::RingSpec;
use crate::snf::solve_linear;
use std::collections::BTreeMap;

/// Declares one unknown graded map.
pub struct MapVar {
    pub source: Cx,
    pub target: Cx,
    pub degree: i64,
}

/// One summand L·X·R of an equation; `None` stands for the identity.
pub struct Term<'a> {
    pub var: usize,
    pub deg: i64,
    pub left: Option<&'a Matrix>,
    pub right: Option<&'a Matrix>,
    pub negate: bool,
}

impl<'a> Term<'a> {
    pub fn plain(var: usize, deg: i64) -> Term<'a> {
        Term { var, deg, left: None, right: None, negate: false }
    }

    pub fn left(var: usize, deg: i64, l: &'a Matrix) -> Term<'a> {
        Term { var, deg, left: Some(l), right: None, negate: false }
    }

    pub fn right(var: usize, deg: i64, r: &'a Matrix) -> Term<'a> {
        Term { var, deg, left: None, right: Some(r), negate: false }
    }

    pub fn negated(mut self) -> Term<'a> {
        self.negate = !self.negate;
        self
    }
}

struct VarBlocks {
    decl: MapVar,
    // degree → (offset into the global variable vector, rows, cols)
    blocks: BTreeMap<i64, (usize, usize, usize)>,
}

/// Assembles and solves the global system.
pub struct GradedSolver {
    ring: RingSpec,
    vars: Vec<VarBlocks>,
    nvars: usize,
    rows: Vec<Vec<crate::ring::Scalar>>,
    rhs: Vec<crate::ring::Scalar>,
}

impl GradedSolver {
    pub fn new(ring: RingSpec) -> GradedSolver {
        GradedSolver { ring, vars: Vec::new(), nvars: 0, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn add_var(&mut self, decl: MapVar) -> usize {
        assert_eq!(decl.source.ring(), self.ring);
        assert_eq!(decl.target.ring(), self.ring);
        let mut blocks = BTreeMap::new();
        for n in decl.source.degrees() {
            let rows = decl.target.rank(n + decl.degree);
            let cols = decl.source.rank(n);
            if rows > 0 && cols > 0 {
                blocks.insert(n, (self.nvars, rows, cols));
                self.nvars += rows * cols;
            }
        }
        self.vars.push(VarBlocks { decl, blocks });
        self.vars.len() - 1
    }

    /// Adds the matrix equation Σ terms = rhs, entry by entry. Terms whose
    /// variable block is empty (zero rank on either side) contribute nothing,
    /// which matches the zero component of the eventual map.
    pub fn add_equation(&mut self, terms: &[Term<'_>], rhs: &Matrix) {
        let (r, c) = (rhs.rows(), rhs.cols());
        if r == 0 || c == 0 {
            return;
        }
        let mut rows: Vec<Vec<crate::ring::Scalar>> =
            vec![vec![self.ring.zero(); self.nvars]; r * c];
        for t in terms {
            let Some(&(offset, xr, xc)) = self.vars[t.var].blocks.get(&t.deg) else { continue };
            if let Some(l) = t.left {
                assert_eq!(l.rows(), r, "term left factor height");
                assert_eq!(l.cols(), xr, "term left factor width");
            } else {
                assert_eq!(xr, r, "identity left factor");
            }
            if let Some(rm) = t.right {
                assert_eq!(rm.rows(), xc, "term right factor height");
                assert_eq!(rm.cols(), c, "term right factor width");
            } else {
                assert_eq!(xc, c, "identity right factor");
            }
            for i in 0..r {
                for j in 0..c {
                    let row = &mut rows[i * c + j];
                    for rx in 0..xr {
                        let lv = match t.left {
                            Some(l) => l.get(i, rx).clone(),
                            None => {
                                if i == rx {
                                    self.ring.one()
                                } else {
                                    continue;
                                }
                            }
                        };
                        if self.ring.is_zero(&lv) {
                            continue;
                        }
                        for cx in 0..xc {
                            let rv = match t.right {
                                Some(rm) => rm.get(cx, j).clone(),
                                None => {
                                    if cx == j {
                                        self.ring.one()
                                    } else {
                                        continue;
                                    }
                                }
                            };
                            if self.ring.is_zero(&rv) {
                                continue;
                            }
                            let mut coeff = self.ring.mul(&lv, &rv);
                            if t.negate {
                                coeff = self.ring.neg(&coeff);
                            }
                            let slot = offset + rx * xc + cx;
                            row[slot] = self.ring.add(&row[slot], &coeff);
                        }
                    }
                }
            }
        }
        for (k, row) in rows.into_iter().enumerate() {
            self.rows.push(row);
            self.rhs.push(rhs.get(k / c, k % c).clone());
        }
    }

    /// Solves the accumulated system; returns one graded map per declared
    /// variable, in declaration order.
    pub fn solve(self) -> Option<Vec<ChainMap>> {
        let neq = self.rows.len();
        let mut a = Matrix::zero(self.ring, neq, self.nvars);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                if !self.ring.is_zero(v) {
                    a.set(i, j, v.clone());
                }
            }
        }
        let mut b = Matrix::zero(self.ring, neq, 1);
        for (i, v) in self.rhs.iter().enumerate() {
            b.set(i, 0, v.clone());
        }
        let x = solve_linear(&a, &b).expect("consistent shapes by construction")?;
        let mut out = Vec::new();
        for vb in &self.vars {
            let mut comps = BTreeMap::new();
            for (&n, &(offset, rows, cols)) in &vb.blocks {
                let m = Matrix::from_fn(self.ring, rows, cols, |i, j| {
                    x.get(offset + i * cols + j, 0).clone()
                });
                comps.insert(n, m);
            }
            out.push(
                ChainMap::new(&vb.decl.source, &vb.decl.target, vb.decl.degree, comps)
                    .expect("solver blocks have declared shapes"),
            );
        }
        Some(out)
    }
}

/// Degrees where any of the given complexes can contribute an equation,
/// padded by one on each side.
pub fn degree_span(cxs: &[&Cx]) -> Vec<i64> {
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    for cx in cxs {
        if let (Some(a), Some(b)) = (cx.min_degree(), cx.max_degree()) {
            lo = lo.min(a);
            hi = hi.max(b);
        }
    }
    if lo > hi {
        return Vec::new();
    }
    ((lo - 1)..=(hi + 1)).collect()
}

/// Finds s with f − g = d∘s + s∘d, if the maps are chain homotopic.
pub fn find_homotopy(f: &ChainMap, g: &ChainMap) -> Option<Homotopy> {
    assert!(cx_eq(f.source(), g.source()) && cx_eq(f.target(), g.target()));
    assert_eq!((f.degree(), g.degree()), (0, 0));
    let (src, tgt) = (f.source(), f.target());
    let ring = f.ring();
    let mut solver = GradedSolver::new(ring);
    let s = solver.add_var(MapVar { source: src.clone(), target: tgt.clone(), degree: -1 });
    for n in degree_span(&[src, tgt]) {
        let rhs = f.comp(n).sub(&g.comp(n));
        let dt = tgt.d(n - 1);
        let ds = src.d(n);
        solver.add_equation(
            &[Term::left(s, n, &dt), Term::right(s, n + 1, &ds)],
            &rhs,
        );
    }
    let sol = solver.solve()?;
    Some(Homotopy::new(f.clone(), g.clone(), sol[0].clone()).expect("solver output verifies"))
}

/// A certified two-sided homotopy equivalence.
#[derive(Clone, Debug)]
pub struct HtpyEquiv {
    pub forward: ChainMap,
    pub inverse: ChainMap,
    /// inverse ∘ forward ≃ id on the source.
    pub retract: Homotopy,
    /// forward ∘ inverse ≃ id on the target.
    pub section: Homotopy,
}

impl HtpyEquiv {
    /// Re-checks everything from stored data.
    pub fn verify(&self) -> bool {
        self.forward.is_chain_map()
            && self.inverse.is_chain_map()
            && self.retract.verify()
            && self.section.verify()
            && *self.retract.lhs() == self.forward.then(&self.inverse)
            && *self.retract.rhs() == ChainMap::identity(self.forward.source())
            && *self.section.lhs() == self.inverse.then(&self.forward)
            && *self.section.rhs() == ChainMap::identity(self.forward.target())
    }

    /// Packages a strict isomorphism (exact inverse, zero homotopies).
    pub fn from_iso(forward: ChainMap, inverse: ChainMap) -> HtpyEquiv {
        let retract = Homotopy::from_equal(
            forward.then(&inverse),
            ChainMap::identity(forward.source()),
        )
        .expect("two-sided inverse");
        let section = Homotopy::from_equal(
            inverse.then(&forward),
            ChainMap::identity(forward.target()),
        )
        .expect("two-sided inverse");
        HtpyEquiv { forward, inverse, retract, section }
    }
}

/// Searches for a homotopy inverse of f together with both homotopies, as one
/// joint linear system (g chain map, g∘f ≃ id, f∘g ≃ id).
pub fn is_homotopy_equivalence(f: &ChainMap) -> Option<HtpyEquiv> {
    assert_eq!(f.degree(), 0);
    assert!(f.is_chain_map());
    let (e, fx) = (f.source(), f.target());
    let ring = f.ring();
    let mut solver = GradedSolver::new(ring);
    let g = solver.add_var(MapVar { source: fx.clone(), target: e.clone(), degree: 0 });
    let se = solver.add_var(MapVar { source: e.clone(), target: e.clone(), degree: -1 });
    let sf = solver.add_var(MapVar { source: fx.clone(), target: fx.clone(), degree: -1 });
    for n in degree_span(&[e, fx]) {
        // chain-map square for g
        let de = e.d(n);
        let df = fx.d(n);
        solver.add_equation(
            &[Term::left(g, n, &de), Term::right(g, n + 1, &df).negated()],
            &Matrix::zero(ring, e.rank(n + 1), fx.rank(n)),
        );
        // g∘f − d s_E − s_E d = id_E
        let fn_ = f.comp(n);
        let de_prev = e.d(n - 1);
        let de_here = e.d(n);
        solver.add_equation(
            &[
                Term::right(g, n, &fn_),
                Term::left(se, n, &de_prev).negated(),
                Term::right(se, n + 1, &de_here).negated(),
            ],
            &Matrix::identity(ring, e.rank(n)),
        );
        // f∘g − d s_F − s_F d = id_F
        let df_prev = fx.d(n - 1);
        let df_here = fx.d(n);
        solver.add_equation(
            &[
                Term::left(g, n, &fn_),
                Term::left(sf, n, &df_prev).negated(),
                Term::right(sf, n + 1, &df_here).negated(),
            ],
            &Matrix::identity(ring, fx.rank(n)),
        );
    }
    let sol = solver.solve()?;
    let inverse = sol[0].clone();
    let retract = Homotopy::new(
        f.then(&inverse),
        ChainMap::identity(e),
        sol[1].clone(),
    )
    .expect("solver output verifies");
    let section = Homotopy::new(
        inverse.then(f),
        ChainMap::identity(fx),
        sol[2].clone(),
    )
    .expect("solver output verifies");
    Some(HtpyEquiv { forward: f.clone(), inverse, retract, section })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::{cone, cylinder, ChainComplex};
    use std::collections::BTreeMap as Map;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    #[test]
    fn equal_maps_get_the_zero_homotopy() {
        let s = ChainComplex::unit(z());
        let id = ChainMap::identity(&s);
        let h = find_homotopy(&id, &id).expect("trivially homotopic");
        assert!(h.witness().is_zero());
    }

    #[test]
    fn identity_and_zero_are_not_homotopic_on_the_unit() {
        let s = ChainComplex::unit(z());
        let id = ChainMap::identity(&s);
        let zero = ChainMap::zero(&s, &s, 0);
        assert!(find_homotopy(&id, &zero).is_none(), "H⁰ = ℤ obstructs");
    }

    #[test]
    fn identity_contracts_on_a_cone_of_identity() {
        let s = ChainComplex::unit(z());
        let c = cone(&ChainMap::identity(&s));
        let id = ChainMap::identity(&c.complex);
        let zero = ChainMap::zero(&c.complex, &c.complex, 0);
        let h = find_homotopy(&id, &zero).expect("contractible");
        assert!(h.verify());
    }

    #[test]
    fn cylinder_projection_is_an_equivalence() {
        // d = (×2) in degrees 0→1 keeps the solver honest over ℤ.
        let mut ranks = Map::new();
        ranks.insert(0, 1);
        ranks.insert(1, 1);
        let mut diffs = Map::new();
        diffs.insert(0, Matrix::from_i64_rows(z(), &[&[2]]));
        let e = ChainComplex::build(z(), ranks, diffs).expect("valid");
        let cyl = cylinder(&ChainMap::identity(&e));
        let eq = is_homotopy_equivalence(&cyl.to_target).expect("projection is an equivalence");
        assert!(eq.verify());
    }

    #[test]
    fn maps_with_different_homology_admit_no_equivalence() {
        let s = ChainComplex::unit(z());
        let two = {
            let mut comps = Map::new();
            comps.insert(0, Matrix::from_i64_rows(z(), &[&[2]]));
            ChainMap::new(&s, &s, 0, comps).expect("endomorphism")
        };
        assert!(is_homotopy_equivalence(&two).is_none(), "coker ℤ/2 obstructs");
    }
}
