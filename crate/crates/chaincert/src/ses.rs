//! Semi-split short exact sequences, distinguished triangles, and the
//! certificate engine that derives explicit comparison data — no homotopy
//! search — for every triangle that arises from a degreewise-split extension.
//!
//! The engine works from a complete graded splitting (retr, sect) of
//! 0 → A → B → C → 0. Writing k := d_B∘sect − sect∘d_C for the gluing defect,
//! the effective gluing block is w := retr∘k, the connecting map is h := −w,
//! and the comparison cone(incl) ≃ C is witnessed by
//!   cmp = (0, proj),   λ = [−w; sect],   χ = [[0, retr], [0, 0]],
//! with cmp∘λ = id exactly and id − λ∘cmp = dχ + χd. Rotating once more,
//! cone(Σ⁻¹h) is isomorphic to B on the nose via (−sect, incl).

use crate::complex::{cone, cx_eq, ChainComplex, ChainMap, CertError, ComplexError, Cx, Homotopy};
use crate::homotopy::{degree_span, is_homotopy_equivalence, GradedSolver, MapVar, Term};
use crate::matrix::Matrix;
use std::collections::BTreeMap;

/// An extension of `quot` by `sub`, presented by its gluing block: the total
/// complex is Eⁿ ⊕ Gⁿ with differential [[d_E, w],[0, d_G]], which squares to
/// zero exactly when d_E∘w + w∘d_G = 0.
#[derive(Clone, Debug)]
pub struct SemiSplitSES {
    sub: Cx,
    quot: Cx,
    glue: ChainMap,
    total: Cx,
}

impl SemiSplitSES {
    pub fn new(sub: &Cx, quot: &Cx, glue: ChainMap) -> Result<SemiSplitSES, ComplexError> {
        if !cx_eq(glue.source(), quot) || !cx_eq(glue.target(), sub) || glue.degree() != 1 {
            return Err(ComplexError::ShapeMismatch(
                "gluing block must be a degree +1 map from the quotient to the sub".into(),
            ));
        }
        let ring = sub.ring();
        let mut degrees: std::collections::BTreeSet<i64> = std::collections::BTreeSet::new();
        degrees.extend(sub.degrees());
        degrees.extend(quot.degrees());
        let mut ranks = BTreeMap::new();
        let mut diffs = BTreeMap::new();
        for &n in &degrees {
            let r = sub.rank(n) + quot.rank(n);
            if r > 0 {
                ranks.insert(n, r);
            }
            let de = sub.d(n);
            let dg = quot.d(n);
            let w = glue.comp(n);
            let z = Matrix::zero(ring, quot.rank(n + 1), sub.rank(n));
            diffs.insert(n, Matrix::from_blocks(ring, &[&[&de, &w], &[&z, &dg]]));
        }
        // d² = 0 on the total complex is exactly the anti-commutation
        // d_E∘w + w∘d_G = 0, so the constructor check enforces it.
        let total = ChainComplex::build(ring, ranks, diffs)?;
        Ok(SemiSplitSES { sub: sub.clone(), quot: quot.clone(), glue, total })
    }

    pub fn sub(&self) -> &Cx {
        &self.sub
    }

    pub fn quot(&self) -> &Cx {
        &self.quot
    }

    pub fn glue(&self) -> &ChainMap {
        &self.glue
    }

    pub fn total(&self) -> &Cx {
        &self.total
    }

    pub fn incl(&self) -> ChainMap {
        let ring = self.sub.ring();
        let comps = self
            .sub
            .degrees()
            .map(|n| {
                let top = Matrix::identity(ring, self.sub.rank(n));
                let bot = Matrix::zero(ring, self.quot.rank(n), self.sub.rank(n));
                (n, top.vstack(&bot))
            })
            .collect();
        ChainMap::new(&self.sub, &self.total, 0, comps).expect("inclusion shapes")
    }

    pub fn proj(&self) -> ChainMap {
        let ring = self.sub.ring();
        let comps = self
            .quot
            .degrees()
            .map(|n| {
                let left = Matrix::zero(ring, self.quot.rank(n), self.sub.rank(n));
                let right = Matrix::identity(ring, self.quot.rank(n));
                (n, left.hstack(&right))
            })
            .collect();
        ChainMap::new(&self.total, &self.quot, 0, comps).expect("projection shapes")
    }

    pub fn as_split_seq(&self) -> SplitExactSeq {
        let coords: BTreeMap<i64, Vec<usize>> =
            self.sub.degrees().map(|n| (n, (0..self.sub.rank(n)).collect())).collect();
        coordinate_split_ses(&self.sub, &self.total, &self.quot, &coords)
            .expect("total complex splits by construction")
    }
}

/// The homotopy invariant of a semi-split sequence: the connecting chain map
/// h: G → ΣE, normalized as −w so that the canonical cone comparison verifies.
pub fn homotopy_invariant_h(ses: &SemiSplitSES) -> ChainMap {
    ses.as_split_seq().connecting()
}

/// A degreewise-split short exact sequence with a chosen complete splitting:
/// retr∘incl = 1, proj∘sect = 1, incl∘retr + sect∘proj = 1.
#[derive(Clone, Debug)]
pub struct SplitExactSeq {
    pub sub: Cx,
    pub mid: Cx,
    pub quot: Cx,
    pub incl: ChainMap,
    pub proj: ChainMap,
    pub retr: ChainMap,
    pub sect: ChainMap,
}

impl SplitExactSeq {
    pub fn new(
        incl: ChainMap,
        proj: ChainMap,
        retr: ChainMap,
        sect: ChainMap,
    ) -> Result<SplitExactSeq, CertError> {
        let sub = incl.source().clone();
        let mid = incl.target().clone();
        let quot = proj.target().clone();
        let bad = |msg: &str| Err(CertError::BadCertificate(msg.into()));
        if !cx_eq(proj.source(), &mid) || !cx_eq(retr.source(), &mid) || !cx_eq(retr.target(), &sub)
        {
            return bad("splitting endpoints do not line up");
        }
        if !cx_eq(sect.source(), &quot) || !cx_eq(sect.target(), &mid) {
            return bad("section endpoints do not line up");
        }
        if [incl.degree(), proj.degree(), retr.degree(), sect.degree()] != [0, 0, 0, 0] {
            return bad("splitting data must be degree 0");
        }
        if !incl.is_chain_map() || !proj.is_chain_map() {
            return bad("inclusion and projection must be chain maps");
        }
        let seq = SplitExactSeq { sub, mid, quot, incl, proj, retr, sect };
        if seq.incl.then(&seq.retr) != ChainMap::identity(&seq.sub) {
            return bad("retr∘incl ≠ id on the sub");
        }
        if seq.sect.then(&seq.proj) != ChainMap::identity(&seq.quot) {
            return bad("proj∘sect ≠ id on the quotient");
        }
        let recomposed = seq.retr.then(&seq.incl).add(&seq.proj.then(&seq.sect));
        if recomposed != ChainMap::identity(&seq.mid) {
            return bad("incl∘retr + sect∘proj ≠ id on the middle");
        }
        if !seq.incl.then(&seq.proj).is_zero() {
            return bad("proj∘incl ≠ 0");
        }
        if !seq.sect.then(&seq.retr).is_zero() {
            return bad("retr∘sect ≠ 0");
        }
        Ok(seq)
    }

    /// k := d∘sect − sect∘d, the failure of the section to be a chain map;
    /// always lands in the image of the inclusion.
    pub fn defect(&self) -> ChainMap {
        let comps = self
            .quot
            .degrees()
            .map(|n| {
                let a = self.mid.d(n).mul(&self.sect.comp(n));
                let b = self.sect.comp(n + 1).mul(&self.quot.d(n));
                (n, a.sub(&b))
            })
            .filter(|(_, m)| !m.is_zero())
            .collect::<BTreeMap<_, _>>();
        ChainMap::new(&self.quot, &self.mid, 1, comps).expect("defect shapes")
    }

    /// The effective gluing block w := retr∘k (degree +1, quotient → sub).
    pub fn gluing(&self) -> ChainMap {
        let k = self.defect();
        debug_assert!(k.then(&self.proj).is_zero(), "defect must land in the sub");
        k.then(&self.retr)
    }

    /// The connecting chain map h := −w, housed as a degree-0 map G → ΣE.
    pub fn connecting(&self) -> ChainMap {
        let w = self.gluing();
        let target = self.sub.shift(1);
        let comps = self
            .quot
            .degrees()
            .map(|n| (n, w.comp(n).neg()))
            .filter(|(_, m)| !m.is_zero())
            .collect();
        let h = ChainMap::new(&self.quot, &target, 0, comps).expect("connecting shapes");
        debug_assert!(h.is_chain_map(), "connecting map anti-commutation");
        h
    }

    pub fn triangle(&self) -> Triangle {
        Triangle::new(self.incl.clone(), self.proj.clone(), self.connecting())
            .expect("split sequence yields a triangle")
    }

    /// The comparison certificate for (incl, proj, h): cone(incl) ≃ quot with
    /// all four homotopies explicit. No solving involved.
    pub fn certificate(&self) -> DistinguishednessCertificate {
        let ring = self.mid.ring();
        let triangle = self.triangle();
        let c = cone(&self.incl);
        let w = self.gluing();

        // cmp = (0, proj)
        let mut cmp_comps = BTreeMap::new();
        for n in self.quot.degrees() {
            let z = Matrix::zero(ring, self.quot.rank(n), self.sub.rank(n + 1));
            cmp_comps.insert(n, z.hstack(&self.proj.comp(n)));
        }
        let cmp = ChainMap::new(&c.complex, &self.quot, 0, cmp_comps).expect("cmp shapes");

        // λ = [−w; sect]
        let mut lam_comps = BTreeMap::new();
        for n in self.quot.degrees() {
            lam_comps.insert(n, w.comp(n).neg().vstack(&self.sect.comp(n)));
        }
        let lam = ChainMap::new(&self.quot, &c.complex, 0, lam_comps).expect("λ shapes");

        // χ = [[0, retr],[0,0]] as a degree −1 endomorphism of the cone.
        let mut chi_comps = BTreeMap::new();
        for n in c.complex.degrees() {
            let rows = c.complex.rank(n - 1);
            let cols = c.complex.rank(n);
            if rows == 0 || cols == 0 {
                continue;
            }
            let mut m = Matrix::zero(ring, rows, cols);
            // block (sub-slot of degree n−1) × (mid-slot of degree n): retrⁿ
            m.paste(0, self.sub.rank(n + 1), &self.retr.comp(n));
            chi_comps.insert(n, m);
        }
        let chi = ChainMap::new(&c.complex, &c.complex, -1, chi_comps).expect("χ shapes");

        // ς = (0, −retr) as a degree −1 map cone → ΣE.
        let mut var_comps = BTreeMap::new();
        let shifted = self.sub.shift(1);
        for n in c.complex.degrees() {
            let rows = shifted.rank(n - 1);
            let cols = c.complex.rank(n);
            if rows == 0 || cols == 0 {
                continue;
            }
            let mut m = Matrix::zero(ring, rows, cols);
            m.paste(0, self.sub.rank(n + 1), &self.retr.comp(n).neg());
            var_comps.insert(n, m);
        }
        let varsigma = ChainMap::new(&c.complex, &shifted, -1, var_comps).expect("ς shapes");

        let retract_htpy = Homotopy::new(
            cmp.then(&lam),
            ChainMap::identity(&c.complex),
            chi.neg(),
        )
        .expect("λ∘cmp contraction verifies");
        let section_htpy = Homotopy::from_equal(lam.then(&cmp), ChainMap::identity(&self.quot))
            .expect("cmp∘λ = id exactly");
        let mid_htpy = Homotopy::from_equal(c.incl.then(&cmp), triangle.g.clone())
            .expect("cmp∘incl = proj exactly");
        let out_htpy = Homotopy::new(cmp.then(&triangle.h), c.proj.clone(), varsigma)
            .expect("h∘cmp ≃ cone projection");

        DistinguishednessCertificate {
            triangle,
            cmp,
            cmp_inv: lam,
            retract_htpy,
            section_htpy,
            mid_htpy,
            out_htpy,
        }
    }

    /// The left rotation (Σ⁻¹h, incl, −proj). Its cone comparison is a strict
    /// isomorphism cone(Σ⁻¹h) ≅ mid given by (−sect, incl).
    pub fn rotated_triangle(&self) -> (Triangle, DistinguishednessCertificate) {
        let h = self.connecting();
        let shifted_quot = self.quot.shift(-1);
        let f = h.shift(-1).rehouse(&shifted_quot, &self.sub);
        let g = self.incl.clone();
        let third = {
            let target = shifted_quot.shift(1);
            let comps = self
                .quot
                .degrees()
                .map(|n| (n, self.proj.comp(n).neg()))
                .collect();
            ChainMap::new(&self.mid, &target, 0, comps).expect("−proj shapes")
        };
        let triangle = Triangle::new(f.clone(), g, third).expect("rotated triangle");
        let c = cone(&f);

        let mut cmp_comps = BTreeMap::new();
        let mut inv_comps = BTreeMap::new();
        for n in self.mid.degrees() {
            cmp_comps.insert(n, self.sect.comp(n).neg().hstack(&self.incl.comp(n)));
            inv_comps.insert(n, self.proj.comp(n).neg().vstack(&self.retr.comp(n)));
        }
        let cmp = ChainMap::new(&c.complex, &self.mid, 0, cmp_comps).expect("cmp shapes");
        let cmp_inv = ChainMap::new(&self.mid, &c.complex, 0, inv_comps).expect("inverse shapes");

        let retract_htpy =
            Homotopy::from_equal(cmp.then(&cmp_inv), ChainMap::identity(&c.complex))
                .expect("strict iso");
        let section_htpy =
            Homotopy::from_equal(cmp_inv.then(&cmp), ChainMap::identity(&self.mid))
                .expect("strict iso");
        let mid_htpy = Homotopy::from_equal(c.incl.then(&cmp), triangle.g.clone())
            .expect("cmp∘incl = incl exactly");
        let out_htpy = Homotopy::from_equal(cmp.then(&triangle.h), c.proj.clone())
            .expect("−proj∘cmp = cone projection exactly");

        (
            triangle.clone(),
            DistinguishednessCertificate {
                triangle,
                cmp,
                cmp_inv,
                retract_htpy,
                section_htpy,
                mid_htpy,
                out_htpy,
            },
        )
    }
}

/// Builds the split sequence whose sub sits on the listed coordinates of the
/// middle complex (per degree, strictly increasing) and whose quotient sits on
/// the complement. The supplied sub/quot complexes are the intended canonical
/// models; the chain-map checks inside [`SplitExactSeq::new`] verify that the
/// selection is closed under the differential and matches those models.
pub fn coordinate_split_ses(
    sub: &Cx,
    mid: &Cx,
    quot: &Cx,
    coords: &BTreeMap<i64, Vec<usize>>,
) -> Result<SplitExactSeq, CertError> {
    let ring = mid.ring();
    let empty: Vec<usize> = Vec::new();
    let mut incl_comps = BTreeMap::new();
    let mut proj_comps = BTreeMap::new();
    let mut retr_comps = BTreeMap::new();
    let mut sect_comps = BTreeMap::new();
    for n in mid.degrees() {
        let sel = coords.get(&n).unwrap_or(&empty);
        let ambient = mid.rank(n);
        debug_assert!(sel.windows(2).all(|w| w[0] < w[1]), "coordinates must be sorted");
        let complement: Vec<usize> = (0..ambient).filter(|i| !sel.contains(i)).collect();
        if sub.rank(n) != sel.len() || quot.rank(n) != complement.len() {
            return Err(CertError::BadCertificate(format!(
                "coordinate counts at degree {n} do not match the sub/quotient models"
            )));
        }
        let inj = Matrix::coordinate_injection(ring, ambient, sel);
        let cinj = Matrix::coordinate_injection(ring, ambient, &complement);
        incl_comps.insert(n, inj.clone());
        retr_comps.insert(n, inj.transpose());
        proj_comps.insert(n, cinj.transpose());
        sect_comps.insert(n, cinj);
    }
    let incl = ChainMap::new(sub, mid, 0, incl_comps)
        .map_err(|e| CertError::BadCertificate(e.to_string()))?;
    let proj = ChainMap::new(mid, quot, 0, proj_comps)
        .map_err(|e| CertError::BadCertificate(e.to_string()))?;
    let retr = ChainMap::new(mid, sub, 0, retr_comps)
        .map_err(|e| CertError::BadCertificate(e.to_string()))?;
    let sect = ChainMap::new(quot, mid, 0, sect_comps)
        .map_err(|e| CertError::BadCertificate(e.to_string()))?;
    SplitExactSeq::new(incl, proj, retr, sect)
}

/// A candidate distinguished triangle E → F → G → ΣE.
#[derive(Clone, PartialEq, Debug)]
pub struct Triangle {
    pub f: ChainMap,
    pub g: ChainMap,
    pub h: ChainMap,
}

impl Triangle {
    pub fn new(f: ChainMap, g: ChainMap, h: ChainMap) -> Result<Triangle, CertError> {
        let ok = cx_eq(f.target(), g.source())
            && cx_eq(g.target(), h.source())
            && cx_eq(h.target(), &f.source().shift(1))
            && f.degree() == 0
            && g.degree() == 0
            && h.degree() == 0;
        if !ok {
            return Err(CertError::BadCertificate("triangle endpoints do not close up".into()));
        }
        if !(f.is_chain_map() && g.is_chain_map() && h.is_chain_map()) {
            return Err(CertError::BadCertificate("triangle edges must be chain maps".into()));
        }
        Ok(Triangle { f, g, h })
    }
}

/// Proof that a triangle is distinguished: a comparison cone(f) → G that is a
/// homotopy equivalence commuting with the tail maps up to recorded homotopies.
/// Everything re-verifies from stored data via [`Self::verify`].
#[derive(Clone, Debug)]
pub struct DistinguishednessCertificate {
    pub triangle: Triangle,
    pub cmp: ChainMap,
    pub cmp_inv: ChainMap,
    /// cmp_inv ∘ cmp ≃ id on the cone.
    pub retract_htpy: Homotopy,
    /// cmp ∘ cmp_inv ≃ id on G.
    pub section_htpy: Homotopy,
    /// cmp ∘ incl_cone ≃ g.
    pub mid_htpy: Homotopy,
    /// h ∘ cmp ≃ proj_cone.
    pub out_htpy: Homotopy,
}

impl DistinguishednessCertificate {
    /// Recomputes the cone and checks every stored identity. Independent of
    /// how the certificate was produced.
    pub fn verify(&self) -> bool {
        let t = &self.triangle;
        if !(t.f.is_chain_map() && t.g.is_chain_map() && t.h.is_chain_map()) {
            return false;
        }
        if !cx_eq(t.f.target(), t.g.source())
            || !cx_eq(t.g.target(), t.h.source())
            || !cx_eq(t.h.target(), &t.f.source().shift(1))
        {
            return false;
        }
        let c = cone(&t.f);
        if !cx_eq(self.cmp.source(), &c.complex)
            || !cx_eq(self.cmp.target(), t.g.target())
            || !cx_eq(self.cmp_inv.source(), t.g.target())
            || !cx_eq(self.cmp_inv.target(), &c.complex)
        {
            return false;
        }
        if !self.cmp.is_chain_map() || !self.cmp_inv.is_chain_map() {
            return false;
        }
        let id_cone = ChainMap::identity(&c.complex);
        let id_g = ChainMap::identity(t.g.target());
        self.retract_htpy.verify()
            && *self.retract_htpy.lhs() == self.cmp.then(&self.cmp_inv)
            && *self.retract_htpy.rhs() == id_cone
            && self.section_htpy.verify()
            && *self.section_htpy.lhs() == self.cmp_inv.then(&self.cmp)
            && *self.section_htpy.rhs() == id_g
            && self.mid_htpy.verify()
            && *self.mid_htpy.lhs() == c.incl.then(&self.cmp)
            && *self.mid_htpy.rhs() == t.g
            && self.out_htpy.verify()
            && *self.out_htpy.lhs() == self.cmp.then(&t.h)
            && *self.out_htpy.rhs() == c.proj
    }
}

/// Searches for a distinguishedness certificate: first a chain map
/// cone(f) → G commuting with the tail up to homotopy (one joint linear
/// system), then a homotopy inverse for it.
pub fn check_distinguished(t: &Triangle) -> Option<DistinguishednessCertificate> {
    let c = cone(&t.f);
    let g_cx = t.g.target();
    let e_shift = t.f.source().shift(1);
    let ring = t.f.ring();
    let mut solver = GradedSolver::new(ring);
    let vc = solver.add_var(MapVar { source: c.complex.clone(), target: g_cx.clone(), degree: 0 });
    let vs2 =
        solver.add_var(MapVar { source: t.g.source().clone(), target: g_cx.clone(), degree: -1 });
    let vs3 =
        solver.add_var(MapVar { source: c.complex.clone(), target: e_shift.clone(), degree: -1 });
    for n in degree_span(&[&c.complex, g_cx, t.g.source(), &e_shift]) {
        // chain-map square for the comparison
        let dg = g_cx.d(n);
        let dc = c.complex.d(n);
        solver.add_equation(
            &[Term::left(vc, n, &dg), Term::right(vc, n + 1, &dc).negated()],
            &Matrix::zero(ring, g_cx.rank(n + 1), c.complex.rank(n)),
        );
        // cmp∘incl − (d s₂ + s₂ d) = g
        let incl_n = c.incl.comp(n);
        let dg_prev = g_cx.d(n - 1);
        let df = t.g.source().d(n);
        solver.add_equation(
            &[
                Term::right(vc, n, &incl_n),
                Term::left(vs2, n, &dg_prev).negated(),
                Term::right(vs2, n + 1, &df).negated(),
            ],
            &t.g.comp(n),
        );
        // h∘cmp − (d s₃ + s₃ d) = proj_cone
        let h_n = |m: i64| t.h.comp(m);
        let de_prev = e_shift.d(n - 1);
        let dc_here = c.complex.d(n);
        let hmat = h_n(n);
        solver.add_equation(
            &[
                Term::left(vc, n, &hmat),
                Term::left(vs3, n, &de_prev).negated(),
                Term::right(vs3, n + 1, &dc_here).negated(),
            ],
            &c.proj.comp(n),
        );
    }
    let sol = solver.solve()?;
    let cmp = sol[0].clone();
    let mid_htpy = Homotopy::new(c.incl.then(&cmp), t.g.clone(), sol[1].clone()).ok()?;
    let out_htpy = Homotopy::new(cmp.then(&t.h), c.proj.clone(), sol[2].clone()).ok()?;
    let eq = is_homotopy_equivalence(&cmp)?;
    Some(DistinguishednessCertificate {
        triangle: t.clone(),
        cmp,
        cmp_inv: eq.inverse,
        retract_htpy: eq.retract,
        section_htpy: eq.section,
        mid_htpy,
        out_htpy,
    })
}

/// Certificate for a triangle of the shape P → B → Q → ΣP where the sub of the
/// split sequence `outer` is itself a cone — the cone of `inner.incl` — and P
/// is the quotient of `inner`. The first edge is incl_outer ∘ λ_inner; the
/// third is Σ(cmp_inner) ∘ h_outer. All homotopies come out explicitly by
/// whiskering the two engine certificates; nothing is solved for.
pub fn composed_cone_certificate(
    outer: &SplitExactSeq,
    inner: &SplitExactSeq,
) -> (Triangle, DistinguishednessCertificate) {
    let inner_cone = cone(&inner.incl);
    assert!(
        cx_eq(&outer.sub, &inner_cone.complex),
        "outer sub must be the cone of the inner inclusion"
    );
    let inner_cert = inner.certificate();
    let outer_cert = outer.certificate();
    let ring = outer.mid.ring();

    let v = &inner_cert.cmp; // cone(inner.incl) → P, with cmp∘λ = id exactly
    let lam_in = &inner_cert.cmp_inv;
    let chi_in = inner_cert.retract_htpy.witness().neg(); // id − λ∘v = dχ + χd

    let p = inner.quot.clone();
    let f = lam_in.rehouse(&p, &outer.sub).then(&outer.incl);
    let g = outer.proj.clone();
    let h_outer = outer.connecting();
    let h = h_outer.then(&v.shift(1)).rehouse(&outer.quot, &p.shift(1));
    let triangle = Triangle::new(f.clone(), g, h).expect("composed triangle closes");

    let cf = cone(&f);
    let c_outer = cone(&outer.incl);

    // Φ = diag(Σλ, 1): cone(f) → cone(incl_outer)
    let mut phi_comps = BTreeMap::new();
    for n in cf.complex.degrees() {
        let top_rows = outer.sub.rank(n + 1);
        let m = lam_in
            .comp(n + 1)
            .direct_sum(&Matrix::identity(ring, outer.mid.rank(n)));
        debug_assert_eq!(m.rows(), top_rows + outer.mid.rank(n));
        phi_comps.insert(n, m);
    }
    let phi = ChainMap::new(&cf.complex, &c_outer.complex, 0, phi_comps).expect("Φ shapes");
    debug_assert!(phi.is_chain_map());

    // Ψ = [[Σv, 0],[incl∘χ, 1]]: cone(incl_outer) → cone(f)
    let mut psi_comps = BTreeMap::new();
    for n in c_outer.complex.degrees() {
        let v_blk = v.comp(n + 1);
        let u_blk = outer.incl.comp(n).mul(&chi_in.comp(n + 1));
        let z = Matrix::zero(ring, p.rank(n + 1), outer.mid.rank(n));
        let id = Matrix::identity(ring, outer.mid.rank(n));
        let m = Matrix::from_blocks(ring, &[&[&v_blk, &z], &[&u_blk, &id]]);
        psi_comps.insert(n, m);
    }
    let psi = ChainMap::new(&c_outer.complex, &cf.complex, 0, psi_comps).expect("Ψ shapes");
    debug_assert!(psi.is_chain_map());

    let cmp = phi.then(&outer_cert.cmp);
    let cmp_inv = outer_cert.cmp_inv.then(&psi);

    // σ on cone(incl_outer): single block Σχ in the top-left corner.
    let mut sigma_comps = BTreeMap::new();
    for n in c_outer.complex.degrees() {
        let rows = c_outer.complex.rank(n - 1);
        let cols = c_outer.complex.rank(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(ring, rows, cols);
        m.paste(0, 0, &chi_in.comp(n + 1));
        sigma_comps.insert(n, m);
    }
    let sigma =
        ChainMap::new(&c_outer.complex, &c_outer.complex, -1, sigma_comps).expect("σ shapes");

    let section_htpy = Homotopy::new(
        cmp_inv.then(&cmp),
        ChainMap::identity(&outer.quot),
        outer_cert.cmp_inv.then(&sigma).then(&outer_cert.cmp),
    )
    .expect("composed section homotopy verifies");

    let chi_out = outer_cert.retract_htpy.witness().neg();
    let retract_htpy = Homotopy::new(
        cmp.then(&cmp_inv),
        ChainMap::identity(&cf.complex),
        phi.then(&chi_out).then(&psi).neg(),
    )
    .expect("composed retract homotopy verifies");

    let mid_htpy = Homotopy::from_equal(cf.incl.then(&cmp), triangle.g.clone())
        .expect("middle square exact");

    let out_w = outer_cert.out_htpy.witness().clone();
    let out_htpy = Homotopy::new(
        cmp.then(&triangle.h),
        cf.proj.clone(),
        phi.then(&out_w).then(&v.shift(1)),
    )
    .expect("outer square homotopy verifies");

    (
        triangle.clone(),
        DistinguishednessCertificate {
            triangle,
            cmp,
            cmp_inv,
            retract_htpy,
            section_htpy,
            mid_htpy,
            out_htpy,
        },
    )
}

/// Replaces the endomorphism square (φ on E, ψ on F, commuting up to s) of a
/// semi-split extension by a strictly commuting endomorphism of the triangle
/// E → cyl(incl) → cone(incl) → ΣE.
#[derive(Clone, Debug)]
pub struct StrictifiedEndo {
    pub cylinder: crate::complex::Cylinder,
    /// Endomorphism of the cylinder: [[Σφ,0,0],[−s,ψ,0],[0,0,φ]].
    pub psi_prime: ChainMap,
    /// Endomorphism of the cone: [[Σφ,0],[−s,ψ]].
    pub omega_prime: ChainMap,
    /// to_target∘ψ′ ≃ ψ∘to_target, restoring the original endomorphism.
    pub compare: Homotopy,
}

pub fn strictify_endotriangle(
    ses: &SemiSplitSES,
    phi: &ChainMap,
    psi: &ChainMap,
    s: &Homotopy,
) -> StrictifiedEndo {
    let f = ses.incl();
    assert!(s.verify(), "square homotopy must verify");
    assert_eq!(*s.lhs(), phi.then(&f), "homotopy left side must be f∘φ");
    assert_eq!(*s.rhs(), f.then(psi), "homotopy right side must be ψ∘f");
    let e = ses.sub();
    let fx = ses.total();
    let ring = e.ring();
    let cyl = crate::complex::cylinder(&f);
    let sw = s.witness();

    let mut omega_comps = BTreeMap::new();
    for n in cyl.cone.complex.degrees() {
        let a = phi.comp(n + 1);
        let z = Matrix::zero(ring, e.rank(n + 1), fx.rank(n));
        let b = sw.comp(n + 1).neg();
        let c = psi.comp(n);
        omega_comps.insert(n, Matrix::from_blocks(ring, &[&[&a, &z], &[&b, &c]]));
    }
    let omega_prime = ChainMap::new(&cyl.cone.complex, &cyl.cone.complex, 0, omega_comps)
        .expect("ω′ shapes");
    assert!(omega_prime.is_chain_map(), "ω′ commutes with the cone differential");

    let mut psi_comps = BTreeMap::new();
    for n in cyl.complex.degrees() {
        let (b1, b2, b3) = (e.rank(n + 1), fx.rank(n), e.rank(n));
        let mut m = Matrix::zero(ring, cyl.complex.rank(n), b1 + b2 + b3);
        m.paste(0, 0, &phi.comp(n + 1));
        m.paste(b1, 0, &sw.comp(n + 1).neg());
        m.paste(b1, b1, &psi.comp(n));
        m.paste(b1 + b2, b1 + b2, &phi.comp(n));
        psi_comps.insert(n, m);
    }
    let psi_prime =
        ChainMap::new(&cyl.complex, &cyl.complex, 0, psi_comps).expect("ψ′ shapes");
    assert!(psi_prime.is_chain_map(), "ψ′ commutes with the cylinder differential");

    // Strict commutation of all three squares.
    assert_eq!(phi.then(&cyl.from_source), cyl.from_source.then(&psi_prime));
    assert_eq!(psi_prime.then(&cyl.to_cone), cyl.to_cone.then(&omega_prime));
    assert_eq!(
        omega_prime.then(&cyl.cone.proj),
        cyl.cone.proj.then(&phi.shift(1)),
        "cone projection square"
    );

    // Comparison back to ψ: witness (0, 0, s) in the cylinder blocks.
    let mut t_comps = BTreeMap::new();
    for n in cyl.complex.degrees() {
        let (b1, b2, b3) = (e.rank(n + 1), fx.rank(n), e.rank(n));
        let rows = fx.rank(n - 1);
        if rows == 0 {
            continue;
        }
        let mut m = Matrix::zero(ring, rows, b1 + b2 + b3);
        m.paste(0, b1 + b2, &sw.comp(n));
        t_comps.insert(n, m);
    }
    let t = ChainMap::new(&cyl.complex, fx, -1, t_comps).expect("witness shapes");
    let compare = Homotopy::new(
        psi_prime.then(&cyl.to_target),
        cyl.to_target.then(psi),
        t,
    )
    .expect("cylinder comparison homotopy verifies");

    StrictifiedEndo { cylinder: cyl, psi_prime, omega_prime, compare }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::ChainComplex;
    use crate::ring::RingSpec;
    use std::collections::BTreeMap as Map;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    /// E = S⁰, G = S⁰, glued by w = ±1 (so the total complex is a disc).
    fn twisted_ses(w: i64) -> SemiSplitSES {
        let e = ChainComplex::sphere(z(), 1, 1);
        let g = ChainComplex::sphere(z(), 0, 1);
        let mut comps = Map::new();
        comps.insert(0, Matrix::from_i64_rows(z(), &[&[w]]));
        let glue = ChainMap::new(&g, &e, 1, comps).expect("gluing shapes");
        SemiSplitSES::new(&e, &g, glue).expect("anti-commutation is vacuous here")
    }

    fn bigger_ses() -> SemiSplitSES {
        // sub: ℤ --(2)--> ℤ in degrees 0→1; quot: ℤ --(3)--> ℤ in degrees 0→1;
        // glue w⁰ = 5 : quot⁰ → sub¹ is unconstrained here since both
        // composites in d_E w + w d_G land in zero ranks.
        let mk = |k: i64| {
            let mut ranks = Map::new();
            ranks.insert(0, 1);
            ranks.insert(1, 1);
            let mut diffs = Map::new();
            diffs.insert(0, Matrix::from_i64_rows(z(), &[&[k]]));
            ChainComplex::build(z(), ranks, diffs).expect("valid complex")
        };
        let e = mk(2);
        let g = mk(3);
        let mut comps = Map::new();
        comps.insert(0, Matrix::from_i64_rows(z(), &[&[5]]));
        // anti-commutation at degree 0: d_E¹∘w⁰ + w¹∘d_G⁰ = 0 + 0 = 0. ✓
        let glue = ChainMap::new(&g, &e, 1, comps).expect("gluing shapes");
        SemiSplitSES::new(&e, &g, glue).expect("anti-commutation holds")
    }

    #[test]
    fn connecting_map_of_a_twisted_extension_is_minus_the_glue() {
        let ses = twisted_ses(1);
        let h = homotopy_invariant_h(&ses);
        assert_eq!(h.comp(0), Matrix::from_i64_rows(z(), &[&[-1]]));
        let ses = twisted_ses(-7);
        let h = homotopy_invariant_h(&ses);
        assert_eq!(h.comp(0), Matrix::from_i64_rows(z(), &[&[7]]));
    }

    #[test]
    fn engine_certificate_verifies_and_survives_tampering_checks() {
        for ses in [twisted_ses(1), twisted_ses(0), bigger_ses()] {
            let seq = ses.as_split_seq();
            let cert = seq.certificate();
            assert!(cert.verify());
            // The middle and section identities are exact for the engine.
            assert!(cert.mid_htpy.is_exact());
            assert!(cert.section_htpy.is_exact());
            // Breaking the comparison map must break verification.
            let mut broken = cert.clone();
            broken.cmp = broken.cmp.scale_i64(2);
            assert!(!broken.verify());
        }
    }

    #[test]
    fn rotated_triangle_is_certified_by_a_strict_isomorphism() {
        for ses in [twisted_ses(1), bigger_ses()] {
            let seq = ses.as_split_seq();
            let (tri, cert) = seq.rotated_triangle();
            assert!(cert.verify());
            assert!(cert.retract_htpy.is_exact() && cert.section_htpy.is_exact());
            // Rotation data: the first edge is Σ⁻¹h, the third is −proj.
            let h = seq.connecting();
            for n in seq.quot.degrees() {
                assert_eq!(tri.f.comp(n + 1), h.comp(n));
            }
            for n in seq.mid.degrees() {
                assert_eq!(tri.h.comp(n), seq.proj.comp(n).neg());
            }
        }
    }

    #[test]
    fn solver_finds_certificates_for_engine_triangles() {
        let ses = bigger_ses();
        let tri = ses.as_split_seq().triangle();
        let cert = check_distinguished(&tri).expect("split triangles are distinguished");
        assert!(cert.verify());
    }

    #[test]
    fn solver_refutes_a_triangle_with_the_wrong_third_object() {
        // (id, 0, 0) on the unit sphere: cone(id) is contractible, so no
        // comparison to S⁰ can be an equivalence.
        let s = ChainComplex::unit(z());
        let tri = Triangle::new(
            ChainMap::identity(&s),
            ChainMap::zero(&s, &s, 0),
            ChainMap::zero(&s, &s.shift(1), 0),
        )
        .expect("triangle shape");
        assert!(check_distinguished(&tri).is_none());
    }

    #[test]
    fn composed_cone_certificate_verifies_on_a_coordinate_tower() {
        // Middle complex: total of bigger_ses(); outer sub = cone of the
        // inclusion of a disc into it is too ad hoc — instead build the tower
        // directly: inner = (sub ⊂ total) of one extension, and outer realizes
        // that cone as coordinates inside cone(incl) itself. The cleanest
        // honest instance: take any split sequence, let C := cone(incl), and
        // use the tautological outer sequence C = C ⊕ 0.
        let ses = bigger_ses();
        let inner = ses.as_split_seq();
        let c = crate::complex::cone(&inner.incl);
        let zero = ChainComplex::zero(z());
        // outer: sub = C, mid = C, quot = 0, with identity splitting.
        let outer = SplitExactSeq::new(
            ChainMap::identity(&c.complex),
            ChainMap::zero(&c.complex, &zero, 0),
            ChainMap::identity(&c.complex),
            ChainMap::zero(&zero, &c.complex, 0),
        )
        .expect("trivial quotient splits");
        let (tri, cert) = composed_cone_certificate(&outer, &inner);
        assert!(cert.verify());
        assert!(tri.g.target().is_zero_complex());
    }

    #[test]
    fn strictified_endomorphism_commutes_and_projects_back() {
        // φ = ×2 on the sub, ψ = ×2 on the total: the square commutes exactly,
        // so the zero homotopy strictifies; then try a nontrivial witness.
        let ses = bigger_ses();
        let f = ses.incl();
        let phi = ChainMap::identity(ses.sub()).scale_i64(2);
        let psi = ChainMap::identity(ses.total()).scale_i64(2);
        let s = Homotopy::new(phi.then(&f), f.then(&psi), ChainMap::zero(ses.sub(), ses.total(), -1))
            .expect("square commutes exactly");
        let strict = strictify_endotriangle(&ses, &phi, &psi, &s);
        assert!(strict.compare.verify());
        assert!(strict.psi_prime.is_chain_map());
        assert!(strict.omega_prime.is_chain_map());
    }

    #[test]
    fn coordinate_selection_must_be_closed_under_the_differential() {
        // Selecting the quotient-side coordinate of a disc is not closed.
        let e = ChainComplex::disc(z(), 0, 1);
        let sub = ChainComplex::sphere(z(), 1, 1);
        let quot = ChainComplex::sphere(z(), 0, 1);
        let mut coords = Map::new();
        coords.insert(1i64, vec![0usize]);
        assert!(coordinate_split_ses(&sub, &e, &quot, &coords).is_ok());
        let mut coords = Map::new();
        coords.insert(0i64, vec![0usize]);
        // the degree-0 coordinate maps onto degree 1, leaking outside: rejected
        assert!(coordinate_split_ses(&quot, &e, &sub, &coords).is_err());
    }
}
