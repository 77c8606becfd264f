//! Traces through the evaluation pairing, with values in the zeroth
//! cohomology of a coefficient complex, and the mechanical additivity check:
//! strictify a homotopy-commuting endomorphism square through the cylinder,
//! transport it onto the evaluation cone, certify every comparison square,
//! and compare the three scalars.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;

use crate::complex::{cone, cx_eq, CertError, ChainComplex, ChainMap, Cx, Homotopy};
use crate::dual::{coeval_map, dual_complex, eval_map};
use crate::homotopy::find_homotopy;
use crate::matrix::Matrix;
use crate::report::CheckReport;
use crate::ring::{RingSpec, Scalar};
use crate::ses::{strictify_endotriangle, SemiSplitSES, StrictifiedEndo};
use crate::snf::{kernel_basis, smith_normal_form, solve_linear};
use crate::tc5::{cone_map, eval_apex_core};
use crate::tensor::{
    assoc, signed_perm_inverse, symmetry, tensor, tensor_map, unit_left, unit_right,
};

/// A coefficient assignment for the generalized trace: a coefficient complex
/// C together with, object by object, a chain map A_E: E → E⊗C inserted after
/// the endomorphism in the pairing composite. Assignments are partial — every
/// use looks the object up and fails loudly when nothing is assigned.
#[derive(Clone, Debug)]
pub struct Orientation {
    target: Cx,
    rule: Rule,
}

#[derive(Clone, Debug)]
enum Rule {
    /// C is the unit complex and A_E the canonical E ≅ E⊗S.
    Trivial,
    /// A_E = (1_E⊗ι)∘(E ≅ E⊗S) for a fixed chain map ι out of the unit.
    FromUnit(ChainMap),
    /// C has one generator in degree 0 and one in degree −1 with no
    /// differential; A_E feeds the identity into the first summand and the
    /// differential of E into the second.
    Boundary,
    /// Explicit finite table, matched by complex equality.
    Table(Vec<(Cx, ChainMap)>),
}

/// The coefficient assignment with C = S; its generalized trace is the plain
/// scalar trace.
pub fn trivial_orientation(ring: RingSpec) -> Orientation {
    Orientation { target: ChainComplex::unit(ring), rule: Rule::Trivial }
}

impl Orientation {
    /// Coefficient assignment routed through a chain map ι: S → C, so the
    /// value of every trace is the image of the plain trace under ι on H⁰.
    pub fn from_unit(iota: &ChainMap) -> Result<Orientation, CertError> {
        let s = ChainComplex::unit(iota.ring());
        if iota.degree() != 0 || !cx_eq(iota.source(), &s) {
            return Err(CertError::BadCertificate(
                "coefficient unit map must start at the unit complex in degree 0".into(),
            ));
        }
        if !iota.is_chain_map() {
            return Err(CertError::BadCertificate(
                "coefficient unit map must commute with the differential".into(),
            ));
        }
        Ok(Orientation { target: iota.target().clone(), rule: Rule::FromUnit(iota.clone()) })
    }

    /// The demonstration assignment: C = S ⊕ ΣS with zero differential, and
    /// A_E = (id, d_E). Natural on the nose at every chain map.
    pub fn boundary(ring: RingSpec) -> Orientation {
        let mut ranks = BTreeMap::new();
        ranks.insert(-1, 1);
        ranks.insert(0, 1);
        let target = ChainComplex::build(ring, ranks, BTreeMap::new())
            .expect("two summands and no differential");
        Orientation { target, rule: Rule::Boundary }
    }

    /// An empty table of explicit assignments against the given coefficient
    /// complex; extend it with [`Orientation::assign`].
    pub fn table(c: &Cx) -> Orientation {
        Orientation { target: c.clone(), rule: Rule::Table(Vec::new()) }
    }

    /// Records an explicit assignment at the source of `a`, replacing any
    /// previous one there. Only table assignments can be extended.
    pub fn assign(&mut self, a: ChainMap) -> Result<(), CertError> {
        let e = a.source().clone();
        let expected = tensor(&e, &self.target).complex;
        if a.degree() != 0 || !cx_eq(a.target(), &expected) {
            return Err(CertError::BadCertificate(
                "assignment must land in its source tensored with the coefficients".into(),
            ));
        }
        if !a.is_chain_map() {
            return Err(CertError::BadCertificate(
                "assignment must commute with the differential".into(),
            ));
        }
        match &mut self.rule {
            Rule::Table(t) => {
                t.retain(|(k, _)| !cx_eq(k, &e));
                t.push((e, a));
                Ok(())
            }
            _ => Err(CertError::BadCertificate(
                "only table assignments can be extended".into(),
            )),
        }
    }

    pub fn target(&self) -> &Cx {
        &self.target
    }

    /// The assignment at one object, when defined.
    pub fn at(&self, e: &Cx) -> Option<ChainMap> {
        match &self.rule {
            Rule::Trivial => Some(unit_intro(e)),
            Rule::FromUnit(iota) => {
                Some(unit_intro(e).then(&tensor_map(&ChainMap::identity(e), iota)))
            }
            Rule::Boundary => Some(boundary_assignment(e, &self.target)),
            Rule::Table(t) => t.iter().find(|(k, _)| cx_eq(k, e)).map(|(_, a)| a.clone()),
        }
    }
}

/// E → E⊗S on identity coordinates.
fn unit_intro(e: &Cx) -> ChainMap {
    signed_perm_inverse(&unit_right(e))
}

fn boundary_assignment(e: &Cx, c: &Cx) -> ChainMap {
    let tgt = tensor(e, c);
    let ring = e.ring();
    let mut comps = BTreeMap::new();
    for n in e.degrees() {
        let cols = e.rank(n);
        let rows = tgt.complex.rank(n);
        if cols == 0 || rows == 0 {
            continue;
        }
        let mut m = Matrix::zero(ring, rows, cols);
        if let Some(b) = tgt.layout.find(n, n) {
            m.paste(b.offset, 0, &Matrix::identity(ring, cols));
        }
        if let Some(b) = tgt.layout.find(n, n + 1) {
            let d = e.d(n);
            if d.rows() > 0 && d.cols() > 0 {
                m.paste(b.offset, 0, &d);
            }
        }
        comps.insert(n, m);
    }
    let a = ChainMap::new(e, &tgt.complex, 0, comps).expect("assignment shapes");
    debug_assert!(a.is_chain_map());
    a
}

/// Outcome of checking one naturality square (f⊗1_C)∘A_E against A_F∘f: both
/// composites, whether they agree on the nose, and a homotopy witness when
/// they only agree up to homotopy.
#[derive(Clone, Debug)]
pub struct NaturalityCert {
    pub lhs: ChainMap,
    pub rhs: ChainMap,
    pub exact: bool,
    pub witness: Option<Homotopy>,
}

impl NaturalityCert {
    /// True when the square commutes exactly or the stored witness re-verifies
    /// against the stored composites.
    pub fn holds(&self) -> bool {
        if self.exact {
            return self.lhs == self.rhs;
        }
        match &self.witness {
            Some(h) => h.verify() && *h.lhs() == self.lhs && *h.rhs() == self.rhs,
            None => false,
        }
    }
}

/// Checks the assignment square of `orient` over the chain map `f`. Fails
/// when the assignment is undefined at either endpoint; a square that neither
/// commutes nor admits a homotopy is returned with `holds() == false`.
pub fn check_orientation_naturality(
    orient: &Orientation,
    f: &ChainMap,
) -> Result<NaturalityCert, CertError> {
    if f.degree() != 0 || !f.is_chain_map() {
        return Err(CertError::BadCertificate(
            "naturality is checked against degree-0 chain maps".into(),
        ));
    }
    let a_src = orient.at(f.source()).ok_or_else(|| {
        CertError::BadCertificate("assignment is undefined at the source".into())
    })?;
    let a_tgt = orient.at(f.target()).ok_or_else(|| {
        CertError::BadCertificate("assignment is undefined at the target".into())
    })?;
    let lhs = a_src.then(&tensor_map(f, &ChainMap::identity(orient.target())));
    let rhs = f.then(&a_tgt);
    if lhs == rhs {
        return Ok(NaturalityCert { lhs, rhs, exact: true, witness: None });
    }
    let witness = find_homotopy(&lhs, &rhs);
    Ok(NaturalityCert { lhs, rhs, exact: false, witness })
}

/// Canonical coordinates of a class in H⁰ of the coefficient complex: free
/// coordinates, and torsion coordinates reduced into [0, dᵢ) against their
/// invariant factors. Over a field the torsion data is empty. Representatives
/// that differ by a boundary get equal coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologyClass {
    pub free: Vec<Scalar>,
    pub torsion: Vec<BigInt>,
    pub factors: Vec<BigInt>,
}

impl HomologyClass {
    pub fn is_zero(&self) -> bool {
        let ring_zero = |s: &Scalar| match s {
            Scalar::Int(v) => v == &BigInt::from(0),
            Scalar::Rat(v) => v == &num_rational::BigRational::from(BigInt::from(0)),
            Scalar::Fp(v) => *v == 0,
        };
        self.free.iter().all(ring_zero) && self.torsion.iter().all(|t| t == &BigInt::from(0))
    }
}

/// A generalized trace value: the representing chain map out of the unit,
/// remembered together with the decidable normal form of its class.
#[derive(Clone, Debug, PartialEq)]
pub struct LefschetzValue {
    pub representative: ChainMap,
    pub normal_form: HomologyClass,
}

/// subtract c · basis from col, in place
fn sub_scaled(col: &mut Matrix, basis: &Matrix, c: &Scalar) {
    let ring = col.ring();
    if ring.is_zero(c) {
        return;
    }
    for i in 0..col.rows() {
        let t = ring.sub(col.get(i, 0), &ring.mul(c, basis.get(i, 0)));
        col.set(i, 0, t);
    }
}

/// Column-echelon basis of the column space of `m` over a field: each basis
/// column carries a leading 1 in a distinct pivot row and zeros at every
/// other pivot row, so reduction against the basis is canonical.
fn field_echelon(m: &Matrix) -> Vec<(usize, Matrix)> {
    let ring = m.ring();
    let mut pivots: Vec<(usize, Matrix)> = Vec::new();
    for j in 0..m.cols() {
        let mut col = m.submatrix(0, j, m.rows(), 1);
        for (r, b) in &pivots {
            let c = col.get(*r, 0).clone();
            sub_scaled(&mut col, b, &c);
        }
        let lead = (0..col.rows()).find(|&i| !ring.is_zero(col.get(i, 0)));
        if let Some(r) = lead {
            let inv = ring.inv(col.get(r, 0)).expect("nonzero field entry");
            for i in 0..col.rows() {
                let t = ring.mul(&inv, col.get(i, 0));
                col.set(i, 0, t);
            }
            for (_, b) in pivots.iter_mut() {
                let c = b.get(r, 0).clone();
                sub_scaled(b, &col, &c);
            }
            pivots.push((r, col));
        }
    }
    pivots
}

/// Normal form of a degree-0 cycle in ker d⁰ / im d⁻¹, in kernel coordinates:
/// over ℤ the Smith transform of the boundary presentation sorts coordinates
/// into dead (unit factor), torsion, and free; over a field the cycle is
/// reduced against a column-echelon basis of the boundaries.
fn class_of_cycle(c: &Cx, z: &Matrix) -> Result<HomologyClass, CertError> {
    let ring = c.ring();
    let empty = HomologyClass { free: Vec::new(), torsion: Vec::new(), factors: Vec::new() };
    if c.rank(0) == 0 {
        return Ok(empty);
    }
    if !c.d(0).mul(z).is_zero() {
        return Err(CertError::BadCertificate("representative is not a cycle".into()));
    }
    let kernel = kernel_basis(&c.d(0));
    if kernel.cols() == 0 {
        return Ok(empty);
    }
    let solve = |a: &Matrix, b: &Matrix| {
        solve_linear(a, b)
            .map_err(|e| CertError::BadCertificate(format!("kernel solve failed: {e}")))
    };
    let x = solve(&kernel, z)?.ok_or_else(|| {
        CertError::BadCertificate("cycle escapes the kernel lattice".into())
    })?;
    let k = kernel.cols();
    if c.rank(-1) == 0 {
        let free = (0..k).map(|i| x.get(i, 0).clone()).collect();
        return Ok(HomologyClass { free, torsion: Vec::new(), factors: Vec::new() });
    }
    let presented = solve(&kernel, &c.d(-1))?.expect("boundaries are cycles");
    match ring {
        RingSpec::Integers => {
            let sf = smith_normal_form(&presented)
                .map_err(|e| CertError::BadCertificate(format!("presentation failed: {e}")))?;
            let y = sf.u.mul(&x);
            let mut free = Vec::new();
            let mut torsion = Vec::new();
            let mut factors = Vec::new();
            let diag = sf.d.rows().min(sf.d.cols());
            for i in 0..k {
                let d = if i < diag { sf.d.get(i, i).as_int().clone() } else { BigInt::from(0) };
                if d == BigInt::from(0) {
                    free.push(y.get(i, 0).clone());
                } else if d > BigInt::from(1) {
                    torsion.push(y.get(i, 0).as_int().mod_floor(&d));
                    factors.push(d);
                }
            }
            Ok(HomologyClass { free, torsion, factors })
        }
        _ => {
            let pivots = field_echelon(&presented);
            let mut red = x.clone();
            for (r, b) in &pivots {
                let coeff = red.get(*r, 0).clone();
                sub_scaled(&mut red, b, &coeff);
            }
            let pivot_rows: Vec<usize> = pivots.iter().map(|(r, _)| *r).collect();
            let free = (0..k)
                .filter(|i| !pivot_rows.contains(i))
                .map(|i| red.get(i, 0).clone())
                .collect();
            Ok(HomologyClass { free, torsion: Vec::new(), factors: Vec::new() })
        }
    }
}

/// The generalized trace of a degree-0 chain endomorphism against a
/// coefficient assignment: the pairing composite
/// S → E⊗DE → DE⊗E → DE⊗E → DE⊗(E⊗C) → (DE⊗E)⊗C → S⊗C → C
/// evaluated at matrix level, with its class in H⁰ of the coefficients.
pub fn lef(phi: &ChainMap, orient: &Orientation) -> Result<LefschetzValue, CertError> {
    if phi.degree() != 0 || !cx_eq(phi.source(), phi.target()) {
        return Err(CertError::BadCertificate(
            "generalized trace needs a degree-0 endomorphism".into(),
        ));
    }
    if !phi.is_chain_map() {
        return Err(CertError::BadCertificate(
            "endomorphism must commute with the differential".into(),
        ));
    }
    let e = phi.source();
    let a = orient.at(e).ok_or_else(|| {
        CertError::BadCertificate("assignment is undefined at the endomorphism's object".into())
    })?;
    let c = orient.target();
    let de = dual_complex(e);
    let id_de = ChainMap::identity(&de);
    let representative = coeval_map(e)
        .then(&symmetry(e, &de))
        .then(&tensor_map(&id_de, phi))
        .then(&tensor_map(&id_de, &a))
        .then(&signed_perm_inverse(&assoc(&de, e, c)))
        .then(&tensor_map(&eval_map(e), &ChainMap::identity(c)))
        .then(&unit_left(c));
    let normal_form = class_of_cycle(c, &representative.comp(0))?;
    Ok(LefschetzValue { representative, normal_form })
}

/// The scalar trace: the generalized trace against the trivial coefficients,
/// read off in H⁰(S) = the ground ring.
pub fn tr(phi: &ChainMap) -> Result<Scalar, CertError> {
    let v = lef(phi, &trivial_orientation(phi.ring()))?;
    Ok(v.representative.comp(0).get(0, 0).clone())
}

/// Independent scalar oracle: the alternating sum Σₙ (−1)ⁿ·tr(φⁿ) of plain
/// matrix traces, computed straight from the components with no pairing
/// machinery involved.
pub fn euler_trace_oracle(phi: &ChainMap) -> Scalar {
    let ring = phi.ring();
    let mut acc = ring.zero();
    for n in phi.source().degrees() {
        let m = phi.comp(n);
        let mut diag = ring.zero();
        for i in 0..m.rows().min(m.cols()) {
            diag = ring.add(&diag, m.get(i, i));
        }
        acc = if n.rem_euclid(2) == 1 { ring.sub(&acc, &diag) } else { ring.add(&acc, &diag) };
    }
    acc
}

/// Everything produced by one additivity check: the three trace values, the
/// strictified endomorphism data, the comparison maps between the quotient
/// models, the endomorphism of the evaluation cone, and the re-verifiable
/// report of every certified identity.
#[derive(Clone, Debug)]
pub struct AdditivityRun {
    pub tr_phi: Scalar,
    pub tr_psi: Scalar,
    pub tr_omega: Scalar,
    /// tr_psi == tr_phi + tr_omega, checked exactly.
    pub equal: bool,
    pub strict: StrictifiedEndo,
    /// cone(incl) → cone(E → cyl), the section-built comparison of the two
    /// quotient models.
    pub cone_compare: ChainMap,
    /// The block-diagonal endomorphism of cone(E → cyl) the comparison
    /// intertwines with.
    pub compare_endo: ChainMap,
    /// The induced endomorphism of the evaluation cone over the strict model.
    pub apex_endo: ChainMap,
    /// The endomorphism the original quotient inherits along the collapse of
    /// the cone; its trace equals tr_omega.
    pub quot_endo: ChainMap,
    pub report: CheckReport,
}

/// Runs the whole additivity argument over one semi-split extension carrying
/// endomorphisms φ of the sub and ψ of the total that commute with the
/// inclusion up to the homotopy `s` (fφ − ψf = ds + sd). Produces the three
/// traces with the exact additivity verdict and certifies every comparison
/// square along the way — exactly where possible, by stored homotopy
/// witnesses elsewhere.
pub fn additivity_run(
    ses: &SemiSplitSES,
    phi: &ChainMap,
    psi: &ChainMap,
    s: &ChainMap,
) -> Result<AdditivityRun, CertError> {
    let e = ses.sub();
    let total = ses.total();
    let ring = e.ring();
    for (name, m, cx) in [("sub", phi, e), ("total", psi, total)] {
        if m.degree() != 0 || !cx_eq(m.source(), cx) || !cx_eq(m.target(), cx) {
            return Err(CertError::BadCertificate(format!(
                "{name} endomorphism must be a degree-0 endomorphism of the {name} complex"
            )));
        }
        if !m.is_chain_map() {
            return Err(CertError::BadCertificate(format!(
                "{name} endomorphism must commute with the differential"
            )));
        }
    }
    let f = ses.incl();
    let square = Homotopy::new(phi.then(&f), f.then(psi), s.clone())?;

    let mut rep = CheckReport::new("trace additivity over a semi-split extension");
    rep.push("endomorphism square commutes up to the given homotopy", square.verify());

    let strict = strictify_endotriangle(ses, phi, psi, &square);
    let cyl = &strict.cylinder;
    let quot_model = &cyl.cone;
    rep.push("strict total endomorphism is a chain map", strict.psi_prime.is_chain_map());
    rep.push(
        "strict quotient endomorphism is a chain map",
        strict.omega_prime.is_chain_map(),
    );
    rep.push(
        "cylinder collapse restores the original endomorphism",
        strict.compare.verify(),
    );
    rep.push(
        "strict source square is exact",
        phi.then(&cyl.from_source) == cyl.from_source.then(&strict.psi_prime),
    );
    rep.push(
        "strict collapse square is exact",
        strict.psi_prime.then(&cyl.to_cone) == cyl.to_cone.then(&strict.omega_prime),
    );
    rep.push(
        "strict boundary square is exact",
        strict.omega_prime.then(&quot_model.proj) == quot_model.proj.then(&phi.shift(1)),
    );

    // Compare the quotient cone against the cone over the strict source
    // inclusion: the shifted slot goes in twice, the total slot once.
    let outer = cone(&cyl.from_source);
    let mut th_comps = BTreeMap::new();
    for n in quot_model.complex.degrees() {
        let rows = outer.complex.rank(n);
        let cols = quot_model.complex.rank(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let (se, fr) = (e.rank(n + 1), total.rank(n));
        let mut m = Matrix::zero(ring, rows, cols);
        if se > 0 {
            let id = Matrix::identity(ring, se);
            m.paste(0, 0, &id);
            m.paste(se, 0, &id);
        }
        if fr > 0 {
            m.paste(2 * se, se, &Matrix::identity(ring, fr));
        }
        th_comps.insert(n, m);
    }
    let cone_compare = ChainMap::new(&quot_model.complex, &outer.complex, 0, th_comps)
        .expect("comparison shapes");
    rep.push("cone comparison is a chain map", cone_compare.is_chain_map());
    let compare_endo =
        cone_map(&outer, &cyl.from_source, &outer, &cyl.from_source, phi, &strict.psi_prime);
    rep.push(
        "cone comparison intertwines the two quotient endomorphisms exactly",
        strict.omega_prime.then(&cone_compare) == cone_compare.then(&compare_endo),
    );

    // Coordinate model of the strict extension: the sub in the first slot,
    // the quotient cone in the second, glued by minus the shifted projection.
    let mut glue_comps = BTreeMap::new();
    for n in quot_model.complex.degrees() {
        let rows = e.rank(n + 1);
        let cols = quot_model.complex.rank(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let mut m = Matrix::zero(ring, rows, cols);
        m.paste(0, 0, &Matrix::scalar_identity(ring, rows, -1));
        glue_comps.insert(n, m);
    }
    let glue = ChainMap::new(&quot_model.complex, e, 1, glue_comps).expect("gluing shapes");
    let model = SemiSplitSES::new(e, &quot_model.complex, glue).expect("gluing anticommutes");
    let t_cx = model.total();

    // permutation onto the cylinder coordinates
    let mut pi_comps = BTreeMap::new();
    for n in t_cx.degrees() {
        let rows = cyl.complex.rank(n);
        let cols = t_cx.rank(n);
        if rows == 0 || cols == 0 {
            continue;
        }
        let (en, se, fr) = (e.rank(n), e.rank(n + 1), total.rank(n));
        let mut m = Matrix::zero(ring, rows, cols);
        if se > 0 {
            m.paste(0, en, &Matrix::identity(ring, se));
        }
        if fr > 0 {
            m.paste(se, en + se, &Matrix::identity(ring, fr));
        }
        if en > 0 {
            m.paste(se + fr, 0, &Matrix::identity(ring, en));
        }
        pi_comps.insert(n, m);
    }
    let pi = ChainMap::new(t_cx, &cyl.complex, 0, pi_comps).expect("permutation shapes");
    rep.push("coordinate model matches the cylinder across a permutation", pi.is_chain_map());

    let mut pm_comps = BTreeMap::new();
    for n in t_cx.degrees() {
        let size = t_cx.rank(n);
        if size == 0 {
            continue;
        }
        let mut m = Matrix::zero(ring, size, size);
        let pc = phi.comp(n);
        if pc.rows() > 0 {
            m.paste(0, 0, &pc);
        }
        let oc = strict.omega_prime.comp(n);
        if oc.rows() > 0 {
            m.paste(e.rank(n), e.rank(n), &oc);
        }
        pm_comps.insert(n, m);
    }
    let psi_model =
        ChainMap::new(t_cx, t_cx, 0, pm_comps).expect("model endomorphism shapes");
    rep.push("model total endomorphism is a chain map", psi_model.is_chain_map());
    rep.push(
        "model and cylinder endomorphisms agree across the permutation",
        psi_model.then(&pi) == pi.then(&strict.psi_prime),
    );
    rep.push(
        "model source square is exact",
        phi.then(&model.incl()) == model.incl().then(&psi_model),
    );
    rep.push(
        "model quotient square is exact",
        psi_model.then(&model.proj()) == model.proj().then(&strict.omega_prime),
    );

    // The evaluation cone over the strict model, with the induced
    // endomorphism on it and the three in-edge comparisons.
    let apex = eval_apex_core(&model);
    let id_dt = ChainMap::identity(&dual_complex(t_cx));
    let id_dq = ChainMap::identity(&dual_complex(&quot_model.complex));
    let id_de = ChainMap::identity(&dual_complex(e));
    let mid_slot = tensor_map(&id_dt, &psi_model);
    let quot_slot = tensor_map(&id_dq, &strict.omega_prime);
    let sub_slot = tensor_map(&id_de, phi);
    let top_endo = tensor_map(&id_dq, phi);
    let apex_endo = cone_map(&apex.wbar, &apex.core, &apex.wbar, &apex.core, &top_endo, &mid_slot);
    rep.push(
        "middle in-edge intertwines the endomorphisms exactly",
        mid_slot.then(&apex.k2) == apex.k2.then(&apex_endo),
    );
    rep.push(
        "quotient in-edge intertwines the endomorphisms exactly",
        quot_slot.then(&apex.k1) == apex.k1.then(&apex_endo),
    );
    rep.push(
        "sub in-edge intertwines the endomorphisms exactly",
        sub_slot.then(&apex.k3) == apex.k3.then(&apex_endo),
    );
    rep.push(
        "middle evaluation telescopes",
        apex.k2.then(&apex_endo).then(&apex.tbar) == mid_slot.then(&apex.t_f),
    );
    rep.push(
        "quotient evaluation telescopes",
        apex.k1.then(&apex_endo).then(&apex.tbar) == quot_slot.then(&apex.t_g),
    );
    rep.push(
        "sub evaluation telescopes",
        apex.k3.then(&apex_endo).then(&apex.tbar) == sub_slot.then(&apex.t_e),
    );

    for (label, cx, endo) in [
        ("sub", e, phi),
        ("total", t_cx, &psi_model),
        ("quotient", &quot_model.complex, &strict.omega_prime),
    ] {
        let dcx = dual_complex(cx);
        let id_d = ChainMap::identity(&dcx);
        let nat = tensor_map(endo, &id_d).then(&symmetry(cx, &dcx))
            == symmetry(cx, &dcx).then(&tensor_map(&id_d, endo));
        rep.push(format!("braiding naturality over the {label} edge is exact"), nat);
    }

    // Collapse the cone onto the original quotient and transport the
    // endomorphism; the alternating trace survives conjugation by a homotopy
    // equivalence, and that is checked on the scalars below.
    let cert = ses.as_split_seq().certificate();
    let quot_endo = cert.cmp_inv.then(&strict.omega_prime).then(&cert.cmp);
    rep.push("transported quotient endomorphism is a chain map", quot_endo.is_chain_map());

    let tr_phi = tr(phi)?;
    let tr_psi = tr(psi)?;
    let tr_omega = tr(&strict.omega_prime)?;
    rep.push("model total endomorphism keeps the original trace", tr(&psi_model)? == tr_psi);
    rep.push(
        "transported quotient endomorphism keeps the cone trace",
        tr(&quot_endo)? == tr_omega,
    );
    for (label, value, endo) in [
        ("sub", &tr_phi, phi),
        ("total", &tr_psi, psi),
        ("quotient", &tr_omega, &strict.omega_prime),
    ] {
        rep.push(
            format!("pairing trace over the {label} matches the component oracle"),
            *value == euler_trace_oracle(endo),
        );
    }
    let equal = tr_psi == ring.add(&tr_phi, &tr_omega);
    rep.push("trace is additive over the extension", equal);

    Ok(AdditivityRun {
        tr_phi,
        tr_psi,
        tr_omega,
        equal,
        strict,
        cone_compare,
        compare_endo,
        apex_endo,
        quot_endo,
        report: rep,
    })
}
