//! Command-line front end: builds the requested construction — from a JSON
//! input document or from seeded random instances — runs every associated
//! exactness and certificate check, and writes a JSON report.
//!
//! Exit codes: 0 all checks passed, 1 a verified mathematical property
//! failed, 2 malformed input or flags, 3 shape mismatch, 4 violated
//! differential identity (d² ≠ 0, a required chain map that is not one,
//! a glue that fails to anticommute).

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use serde_json::{json, Value};

use chaincert::wire::{
    complex_to_json, exactness_to_json, homotopy_to_json, map_body_to_json, parse_input,
    parse_ring, require_chain_map, Input, WireError,
};
use chaincert::{
    additivity_run, build_tc3, build_tc3prime, build_tc5a, case_seeds, check_orientation_naturality,
    check_tc1, check_tc2, check_tc4, check_tc5_dual, check_tc5b, cone, cylinder,
    duality_unit_counit, euler_trace_oracle, homology, lef, random_chain_map, random_complex,
    random_endo, random_endo_square, random_extension, run_batch, tensor, tr, BraidDiagram,
    ChainMap, CheckReport, ComplexError, Cx, GenParams, Orientation, RingSpec, SemiSplitSES,
};

#[derive(Parser)]
#[command(
    name = "chaincert",
    about = "Exact chain-level constructions with re-verifiable certificates",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Common {
    /// Coefficient ring: Z, Q, or Fp:<p> with p prime.
    #[arg(long, default_value = "Z")]
    ring: String,
    /// Master seed for generated instances.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of generated instances (tc-check and fuzz).
    #[arg(long)]
    cases: Option<usize>,
    /// Lowest degree for generated complexes (default depends on the command).
    #[arg(long, allow_hyphen_values = true)]
    min_deg: Option<i64>,
    /// Highest degree for generated complexes.
    #[arg(long, allow_hyphen_values = true)]
    max_deg: Option<i64>,
    /// Largest per-degree rank for generated complexes.
    #[arg(long)]
    max_rank: Option<usize>,
    /// Input JSON document; generated instances are used when absent.
    #[arg(long = "in", value_name = "PATH")]
    input: Option<PathBuf>,
    /// Also write the report to this path.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrientationKind {
    /// Coefficients in the unit complex; the plain pairing trace.
    Trivial,
    /// The built-in demonstration assignment into cones over the unit.
    Boundary,
}

#[derive(Clone, Copy, ValueEnum)]
enum Axiom {
    #[value(name = "1")]
    Shift,
    #[value(name = "2")]
    ConeFunctors,
    #[value(name = "3")]
    Braid,
    #[value(name = "4")]
    BraidSymmetry,
    #[value(name = "5a")]
    EvalApex,
    #[value(name = "5b")]
    EvalCollapse,
    #[value(name = "5dual")]
    EvalDual,
}

impl Axiom {
    fn label(self) -> &'static str {
        match self {
            Axiom::Shift => "1",
            Axiom::ConeFunctors => "2",
            Axiom::Braid => "3",
            Axiom::BraidSymmetry => "4",
            Axiom::EvalApex => "5a",
            Axiom::EvalCollapse => "5b",
            Axiom::EvalDual => "5dual",
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Cohomology of a complex in every degree.
    Homology(Common),
    /// Mapping cone of a chain map, with its triangle edges checked.
    Cone(Common),
    /// Mapping cylinder of a chain map, with the collapse certificate.
    Cyl(Common),
    /// Tensor product of two complexes.
    Tensor(Common),
    /// Dual complex, evaluation/coevaluation, and the double-dual comparison.
    Dual(Common),
    /// Pairing trace of an endomorphism against the componentwise oracle.
    Trace(Common),
    /// Trace with values in the cohomology of a coefficient complex.
    Lef {
        #[command(flatten)]
        common: Common,
        /// Which coefficient assignment to use.
        #[arg(long, value_enum, default_value_t = OrientationKind::Boundary)]
        orientation: OrientationKind,
    },
    /// One compatibility axiom over generated instances, with certificates.
    TcCheck {
        /// Which axiom: 1, 2, 3, 4, 5a, 5b, or 5dual.
        #[arg(value_enum)]
        axiom: Axiom,
        #[command(flatten)]
        common: Common,
    },
    /// Full trace-additivity run on one extension with endomorphism data.
    Additivity(Common),
    /// Batch additivity fuzzing, deterministic in the seed.
    Fuzz(Common),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let started = Instant::now();
    match run(cli.cmd, started) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cmd: Cmd, started: Instant) -> Result<u8, WireError> {
    match cmd {
        Cmd::Homology(c) => cmd_homology(c, started),
        Cmd::Cone(c) => cmd_cone(c, started),
        Cmd::Cyl(c) => cmd_cyl(c, started),
        Cmd::Tensor(c) => cmd_tensor(c, started),
        Cmd::Dual(c) => cmd_dual(c, started),
        Cmd::Trace(c) => cmd_trace(c, started),
        Cmd::Lef { common, orientation } => cmd_lef(common, orientation, started),
        Cmd::TcCheck { axiom, common } => cmd_tc_check(axiom, common, started),
        Cmd::Additivity(c) => cmd_additivity(c, started),
        Cmd::Fuzz(c) => cmd_fuzz(c, started),
    }
}

// ---------------------------------------------------------------------------
// shared plumbing

fn ring_of(common: &Common) -> Result<RingSpec, WireError> {
    parse_ring(&common.ring)
}

/// Per-command default generation budgets. The additivity pipeline tensors
/// the total complex with its dual, and the evaluation axioms additionally
/// solve for homotopies on cones over that, so their instances default
/// smaller than the structural commands'.
#[derive(Clone, Copy)]
enum Budget {
    Structural,
    Additivity,
    EvalAxiom,
}

fn params_of(common: &Common, ring: RingSpec, budget: Budget) -> Result<GenParams, WireError> {
    let (dlo, dhi, drank) = match budget {
        Budget::Structural => (-2, 2, 3),
        Budget::Additivity => (-1, 1, 2),
        Budget::EvalAxiom => (-1, 1, 1),
    };
    let p = GenParams {
        ring,
        min_deg: common.min_deg.unwrap_or(dlo),
        max_deg: common.max_deg.unwrap_or(dhi),
        max_rank: common.max_rank.unwrap_or(drank),
    };
    if p.min_deg > p.max_deg {
        return Err(WireError::Malformed("--min-deg exceeds --max-deg".into()));
    }
    if p.max_rank == 0 {
        return Err(WireError::Malformed("--max-rank must be positive".into()));
    }
    Ok(p)
}

fn load_input(common: &Common) -> Result<Option<Input>, WireError> {
    match &common.input {
        None => Ok(None),
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| {
                WireError::Malformed(format!("cannot read {}: {e}", path.display()))
            })?;
            parse_input(&text).map(Some)
        }
    }
}

fn get_complex(input: &Input, name: &str) -> Result<Cx, WireError> {
    input
        .complexes
        .get(name)
        .cloned()
        .ok_or_else(|| WireError::Malformed(format!("input does not define complex `{name}`")))
}

fn from_complex_error(e: ComplexError) -> WireError {
    match e {
        ComplexError::DifferentialSquare(n) => WireError::Differential(format!(
            "differential does not square to zero at degree {n}"
        )),
        other => WireError::Shape(other.to_string()),
    }
}

fn rng_for(seed: u64) -> ChaCha12Rng {
    ChaCha12Rng::seed_from_u64(seed)
}

fn reports_json(reports: &[CheckReport]) -> Value {
    Value::Array(
        reports.iter().map(|r| serde_json::to_value(r).expect("report serializes")).collect(),
    )
}

/// Assembles the report envelope, prints it, optionally writes it, and turns
/// the verdict into the exit code.
fn finish(
    command: &str,
    common: &Common,
    ring: RingSpec,
    reports: Vec<CheckReport>,
    data: Value,
    started: Instant,
) -> Result<u8, WireError> {
    let ok = reports.iter().all(CheckReport::ok);
    let report = json!({
        "command": command,
        "ring": ring.to_string(),
        "seed": common.seed,
        "ok": ok,
        "checks": reports_json(&reports),
        "data": data,
        "timing_ms": started.elapsed().as_millis() as u64,
    });
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    println!("{text}");
    if let Some(path) = &common.out {
        fs::write(path, text + "\n").map_err(|e| {
            WireError::Malformed(format!("cannot write {}: {e}", path.display()))
        })?;
    }
    Ok(u8::from(!ok))
}

/// The complex named `E`, or a generated one.
fn one_complex(common: &Common, ring: RingSpec) -> Result<Cx, WireError> {
    // With an input document its ring wins; --ring only steers generation.
    match load_input(common)? {
        Some(input) => get_complex(&input, "E"),
        None => {
            let params = params_of(common, ring, Budget::Structural)?;
            Ok(random_complex(&mut rng_for(common.seed), &params).complex)
        }
    }
}

/// The chain map named `f`, or a generated one between random complexes.
fn one_chain_map(common: &Common, ring: RingSpec) -> Result<ChainMap, WireError> {
    match load_input(common)? {
        Some(input) => require_chain_map(&input, "f"),
        None => {
            let params = params_of(common, ring, Budget::Structural)?;
            let mut rng = rng_for(common.seed);
            let a = random_complex(&mut rng, &params);
            let b = random_complex(&mut rng, &params);
            Ok(random_chain_map(&mut rng, &a, &b))
        }
    }
}

/// The degree-0 endomorphism named `phi`, or a generated one. Returns the
/// generator's predicted trace when it built the instance itself.
fn one_endo(
    common: &Common,
    ring: RingSpec,
) -> Result<(ChainMap, Option<chaincert::Scalar>), WireError> {
    match load_input(common)? {
        Some(input) => {
            let phi = require_chain_map(&input, "phi")?;
            if phi.degree() != 0 || *phi.source() != *phi.target() {
                return Err(WireError::Shape(
                    "`phi` must be a degree-0 endomorphism of a single complex".into(),
                ));
            }
            Ok((phi, None))
        }
        None => {
            let params = params_of(common, ring, Budget::Structural)?;
            let mut rng = rng_for(common.seed);
            let rc = random_complex(&mut rng, &params);
            let e = random_endo(&mut rng, &rc);
            Ok((e.map, Some(e.trace)))
        }
    }
}

fn verify_d_squares(cx: &Cx, report: &mut CheckReport, what: &str) {
    let ok = cx.degrees().all(|n| cx.d(n + 1).mul(&cx.d(n)).is_zero());
    report.push(format!("{what} differential squares to zero"), ok);
}

// ---------------------------------------------------------------------------
// structural commands

fn cmd_homology(common: Common, started: Instant) -> Result<u8, WireError> {
    let ring = ring_of(&common)?;
    let cx = one_complex(&common, ring)?;
    let ring = cx.ring();
    let mut report = CheckReport::new("cohomology");
    verify_d_squares(&cx, &mut report, "the");
    let mut groups = serde_json::Map::new();
    for n in cx.degrees() {
        let h = homology(&cx, n);
        groups.insert(
            n.to_string(),
            json!({
                "free_rank": h.free_rank,
                "torsion": h.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            }),
        );
    }
    let data = json!({ "complex": complex_to_json(&cx), "homology": groups });
    finish("homology", &common, ring, vec![report], data, started)
}

fn cmd_cone(common: Common, started: Instant) -> Result<u8, WireError> {
    let ring = ring_of(&common)?;
    let f = one_chain_map(&common, ring)?;
    if f.degree() != 0 {
        return Err(WireError::Shape("cone input must have degree 0".into()));
    }
    let ring = f.ring();
    let c = cone(&f);
    let mut report = CheckReport::new("mapping cone");
    verify_d_squares(&c.complex, &mut report, "cone");
    report.push("inclusion is a chain map", c.incl.is_chain_map());
    report.push("projection is a chain map", c.proj.is_chain_map());
    report.push("projection after inclusion vanishes", c.incl.then(&c.proj).is_zero());
    let data = json!({
        "f": map_body_to_json(&f),
        "cone": complex_to_json(&c.complex),
        "incl": map_body_to_json(&c.incl),
        "proj": map_body_to_json(&c.proj),
    });
    finish("cone", &common, ring, vec![report], data, started)
}

fn cmd_cyl(common: Common, started: Instant) -> Result<u8, WireError> {
    let ring = ring_of(&common)?;
    let f = one_chain_map(&common, ring)?;
    if f.degree() != 0 {
        return Err(WireError::Shape("cylinder input must have degree 0".into()));
    }
    let ring = f.ring();
    let cyl = cylinder(&f);
    let mut report = CheckReport::new("mapping cylinder");
    verify_d_squares(&cyl.complex, &mut report, "cylinder");
    report.push("source face is a chain map", cyl.from_source.is_chain_map());
    report.push("target section is a chain map", cyl.from_target.is_chain_map());
    report.push("collapse is a chain map", cyl.to_target.is_chain_map());
    report.push(
        "collapse after the section is the identity",
        cyl.from_target.then(&cyl.to_target) == ChainMap::identity(f.target()),
    );
    report.push(
        "source face then collapse recovers the map",
        cyl.from_source.then(&cyl.to_target) == f,
    );
    report.push("contraction certifies the other composite", cyl.contraction.verify());
    report.push("collapse onto the cone is a chain map", cyl.to_cone.is_chain_map());
    let data = json!({
        "f": map_body_to_json(&f),
        "cylinder": complex_to_json(&cyl.complex),
        "from_source": map_body_to_json(&cyl.from_source),
        "from_target": map_body_to_json(&cyl.from_target),
        "to_target": map_body_to_json(&cyl.to_target),
        "to_cone": map_body_to_json(&cyl.to_cone),
        "contraction": homotopy_to_json(&cyl.contraction),
    });
    finish("cyl", &common, ring, vec![report], data, started)
}

fn cmd_tensor(common: Common, started: Instant) -> Result<u8, WireError> {
    let ring = ring_of(&common)?;
    let (e, f) = match load_input(&common)? {
        Some(input) => (get_complex(&input, "E")?, get_complex(&input, "F")?),
        None => {
            let params = params_of(&common, ring, Budget::Structural)?;
            let mut rng = rng_for(common.seed);
            (random_complex(&mut rng, &params).complex, random_complex(&mut rng, &params).complex)
        }
    };
    if e.ring() != f.ring() {
        return Err(WireError::Shape("tensor factors live over different rings".into()));
    }
    let ring = e.ring();
    let t = tensor(&e, &f);
    let mut report = CheckReport::new("tensor product");
    verify_d_squares(&t.complex, &mut report, "tensor");
    let ranks_ok = t.complex.degrees().chain(e.degrees()).chain(f.degrees()).all(|n| {
        let expect: usize =
            e.degrees().map(|i| e.rank(i) * f.rank(n - i)).sum();
        t.complex.rank(n) == expect
    });
    report.push("graded ranks multiply along the diagonal", ranks_ok);
    let data = json!({
        "left": complex_to_json(&e),
        "right": complex_to_json(&f),
        "tensor": complex_to_json(&t.complex),
    });
    finish("tensor", &common, ring, vec![report], data, started)
}

fn cmd_dual(common: Common, started: Instant) -> Result<u8, WireError> {
    let ring = ring_of(&common)?;
    let e = one_complex(&common, ring)?;
    let ring = e.ring();
    let d = duality_unit_counit(&e);
    let mut report = CheckReport::new("duality");
    verify_d_squares(&d.dual, &mut report, "dual");
    report.push("evaluation is a chain map", d.eval.is_chain_map());
    report.push("coevaluation is a chain map", d.coeval.is_chain_map());
    report.push("double-dual comparison is a chain map", d.double_dual.is_chain_map());
    report.push(
        "double-dual comparison is invertible in every degree",
        d.double_dual.invert_degreewise().is_some(),
    );
    let data = json!({
        "dual": complex_to_json(&d.dual),
        "eval": map_body_to_json(&d.eval),
        "coeval": map_body_to_json(&d.coeval),
        "double_dual": map_body_to_json(&d.double_dual),
    });
    finish("dual", &common, ring, vec![report], data, started)
}

// ---------------------------------------------------------------------------
// traces

fn cmd_trace(common: Common, started: Instant) -> Result<u8, WireError> {
    let ring = ring_of(&common)?;
    let (phi, predicted) = one_endo(&common, ring)?;
    let ring = phi.ring();
    let value = tr(&phi).map_err(|e| WireError::Differential(e.to_string()))?;
    let oracle = euler_trace_oracle(&phi);
    let mut report = CheckReport::new("pairing trace");
    report.push("pairing trace matches the componentwise alternating-sum oracle", value == oracle);
    if let Some(p) = &predicted {
        report.push("generator's predicted trace matches", value == *p);
    }
    let data = json!({
        "phi": map_body_to_json(&phi),
        "trace": ring.format_scalar(&value),
        "oracle": ring.format_scalar(&oracle),
    });
    finish("trace", &common, ring, vec![report], data, started)
}

fn cmd_lef(
    common: Common,
    orientation: OrientationKind,
    started: Instant,
) -> Result<u8, WireError> {
    let ring = ring_of(&common)?;
    let (phi, _) = one_endo(&common, ring)?;
    let ring = phi.ring();
    let (orient, label) = match orientation {
        OrientationKind::Trivial => (chaincert::trivial_orientation(ring), "trivial"),
        OrientationKind::Boundary => (Orientation::boundary(ring), "boundary"),
    };
    let value = lef(&phi, &orient).map_err(|e| WireError::Differential(e.to_string()))?;
    let nat = check_orientation_naturality(&orient, &phi)
        .map_err(|e| WireError::Differential(e.to_string()))?;
    let mut report = CheckReport::new("coefficient trace");
    report.push("assignment is natural at the endomorphism", nat.holds());
    let nf = &value.normal_form;
    let data = json!({
        "orientation": label,
        "phi": map_body_to_json(&phi),
        "value": {
            "free": nf.free.iter().map(|s| ring.format_scalar(s)).collect::<Vec<_>>(),
            "torsion": nf.torsion.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
            "factors": nf.factors.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        },
        "representative": map_body_to_json(&value.representative),
    });
    finish("lef", &common, ring, vec![report], data, started)
}

// ---------------------------------------------------------------------------
// axiom checks

fn braid_cells_json(w: &BraidDiagram) -> Value {
    Value::Array(
        w.cells
            .iter()
            .map(|c| json!({ "name": c.name, "status": exactness_to_json(c.witness.as_ref()) }))
            .collect(),
    )
}

fn cmd_tc_check(axiom: Axiom, common: Common, started: Instant) -> Result<u8, WireError> {
    let ring = ring_of(&common)?;
    let budget = if matches!(axiom, Axiom::EvalApex | Axiom::EvalCollapse | Axiom::EvalDual) {
        Budget::EvalAxiom
    } else {
        Budget::Structural
    };
    let params = params_of(&common, ring, budget)?;
    let cases = common.cases.unwrap_or(if matches!(axiom, Axiom::Shift) { 1 } else { 5 });
    let mut reports = Vec::new();
    let mut case_data = Vec::new();

    if matches!(axiom, Axiom::Shift) {
        reports.push(check_tc1(ring));
    } else {
        for (i, seed) in case_seeds(common.seed, cases).into_iter().enumerate() {
            let mut rng = rng_for(seed);
            let mut cells = json!([]);
            let mut report = CheckReport::new(format!("case {i}"));
            match axiom {
                Axiom::Shift => unreachable!(),
                Axiom::ConeFunctors => {
                    let a = random_complex(&mut rng, &params);
                    let b = random_complex(&mut rng, &params);
                    let f = random_chain_map(&mut rng, &a, &b);
                    let x = random_complex(&mut rng, &params).complex;
                    report.absorb("cone compatibilities", check_tc2(&f, &x));
                }
                Axiom::Braid | Axiom::BraidSymmetry => {
                    let left = random_extension(&mut rng, &params, true);
                    let right = random_extension(&mut rng, &params, true);
                    let w = build_tc3(&left.ses, &right.ses);
                    let v = build_tc3prime(&left.ses, &right.ses);
                    if matches!(axiom, Axiom::Braid) {
                        report.absorb("kernel-side braid", w.verify());
                        report.absorb("quotient-side braid", v.verify());
                        cells = json!({
                            "kernel_side": braid_cells_json(&w),
                            "quotient_side": braid_cells_json(&v),
                        });
                    } else {
                        report.absorb("braid symmetry", check_tc4(&w, &v));
                        cells = json!({
                            "kernel_side": braid_cells_json(&w),
                            "quotient_side": braid_cells_json(&v),
                        });
                    }
                }
                Axiom::EvalApex => {
                    let ext = random_extension(&mut rng, &params, true);
                    let (wit, rep) = build_tc5a(&ext.ses);
                    report.absorb("evaluation apex", rep);
                    cells = Value::Array(
                        wit.cells
                            .iter()
                            .map(|c| {
                                json!({
                                    "name": c.name,
                                    "status": exactness_to_json(c.witness.as_ref()),
                                })
                            })
                            .collect(),
                    );
                }
                Axiom::EvalCollapse => {
                    let ext = random_extension(&mut rng, &params, true);
                    report.absorb("evaluation collapse", check_tc5b(&ext.ses));
                }
                Axiom::EvalDual => {
                    let ext = random_extension(&mut rng, &params, true);
                    report.absorb("dual evaluation", check_tc5_dual(&ext.ses));
                }
            }
            case_data.push(json!({ "index": i, "ok": report.ok(), "cells": cells }));
            reports.push(report);
        }
    }
    let data = json!({ "axiom": axiom.label(), "cases": case_data });
    finish(&format!("tc-check {}", axiom.label()), &common, ring, reports, data, started)
}

// ---------------------------------------------------------------------------
// additivity

struct AdditivityInstance {
    ses: SemiSplitSES,
    phi: ChainMap,
    psi: ChainMap,
    s: ChainMap,
    predicted: Option<[chaincert::Scalar; 3]>,
}

fn additivity_instance(common: &Common, ring: RingSpec) -> Result<AdditivityInstance, WireError> {
    match load_input(common)? {
        Some(input) => {
            let sub = get_complex(&input, "E")?;
            let quot = get_complex(&input, "G")?;
            let total_given = get_complex(&input, "F")?;
            let w = input
                .maps
                .get("w")
                .cloned()
                .ok_or_else(|| WireError::Malformed("input does not define map `w`".into()))?;
            if *w.source() != quot || *w.target() != sub || w.degree() != 1 {
                return Err(WireError::Shape(
                    "`w` must be a degree-1 map from `G` to `E`".into(),
                ));
            }
            let ses = SemiSplitSES::new(&sub, &quot, w).map_err(from_complex_error)?;
            if *total_given != **ses.total() {
                return Err(WireError::Shape(
                    "`F` does not match the twisted sum of `E` and `G` under `w`".into(),
                ));
            }
            let phi = require_chain_map(&input, "phi")?;
            if *phi.source() != sub || *phi.target() != sub || phi.degree() != 0 {
                return Err(WireError::Shape("`phi` must be a degree-0 endomorphism of `E`".into()));
            }
            let psi = require_chain_map(&input, "psi")?
                .rehouse(ses.total(), ses.total());
            let s = input
                .maps
                .get("s")
                .cloned()
                .ok_or_else(|| WireError::Malformed("input does not define map `s`".into()))?;
            if *s.source() != sub || *s.target() != total_given || s.degree() != -1 {
                return Err(WireError::Shape(
                    "`s` must be a degree -1 map from `E` to `F`".into(),
                ));
            }
            let s = s.rehouse(&sub, ses.total());
            Ok(AdditivityInstance { ses, phi, psi, s, predicted: None })
        }
        None => {
            let params = params_of(common, ring, Budget::Additivity)?;
            let mut rng = rng_for(common.seed);
            let ext = random_extension(&mut rng, &params, true);
            let sq = random_endo_square(&mut rng, &ext);
            Ok(AdditivityInstance {
                ses: ext.ses,
                phi: sq.phi,
                psi: sq.psi,
                s: sq.s,
                predicted: Some([sq.tr_sub, sq.tr_total, sq.tr_quot]),
            })
        }
    }
}

fn cmd_additivity(common: Common, started: Instant) -> Result<u8, WireError> {
    let ring = ring_of(&common)?;
    let inst = additivity_instance(&common, ring)?;
    let ring = inst.ses.sub().ring();
    let run = additivity_run(&inst.ses, &inst.phi, &inst.psi, &inst.s)
        .map_err(|e| WireError::Differential(e.to_string()))?;
    let mut report = run.report.clone();
    if let Some([a, b, c]) = &inst.predicted {
        report.push("computed sub trace matches the generator's prediction", run.tr_phi == *a);
        report.push("computed total trace matches the generator's prediction", run.tr_psi == *b);
        report
            .push("computed quotient trace matches the generator's prediction", run.tr_omega == *c);
    }
    let data = json!({
        "traces": {
            "sub": ring.format_scalar(&run.tr_phi),
            "total": ring.format_scalar(&run.tr_psi),
            "quotient": ring.format_scalar(&run.tr_omega),
        },
        "additive": run.equal,
        "glue": map_body_to_json(inst.ses.glue()),
        "slack": map_body_to_json(&inst.s),
        "witnesses": {
            "strict_total_endomorphism": map_body_to_json(&run.strict.psi_prime),
            "strict_quotient_endomorphism": map_body_to_json(&run.strict.omega_prime),
            "cylinder_collapse": homotopy_to_json(&run.strict.compare),
            "cone_comparison": map_body_to_json(&run.cone_compare),
            "transported_quotient_endomorphism": map_body_to_json(&run.quot_endo),
        },
    });
    finish("additivity", &common, ring, vec![report], data, started)
}

fn cmd_fuzz(common: Common, started: Instant) -> Result<u8, WireError> {
    let ring = ring_of(&common)?;
    let params = params_of(&common, ring, Budget::Additivity)?;
    let cases = common.cases.unwrap_or(20);
    let results = run_batch(&params, common.seed, cases);
    let mut report = CheckReport::new("batch additivity");
    report.push(
        format!("all {cases} generated instances pass every check"),
        results.iter().all(|c| c.ok),
    );
    report.push(
        "at least one instance exercises a nonzero glue",
        cases == 0 || results.iter().any(|c| c.glue_nonzero),
    );
    report.push(
        "at least one instance exercises a nonzero homotopy slack",
        cases == 0 || results.iter().any(|c| c.slack_nonzero),
    );
    let case_rows: Vec<Value> = results
        .iter()
        .map(|c| {
            json!({
                "index": c.index,
                "ok": c.ok,
                "glue_nonzero": c.glue_nonzero,
                "slack_nonzero": c.slack_nonzero,
                "traces": {
                    "sub": ring.format_scalar(&c.tr_sub),
                    "total": ring.format_scalar(&c.tr_total),
                    "quotient": ring.format_scalar(&c.tr_quot),
                },
            })
        })
        .collect();
    let data = json!({
        "cases": case_rows,
        "passed": results.iter().filter(|c| c.ok).count(),
        "failed": results.iter().filter(|c| !c.ok).count(),
    });
    finish("fuzz", &common, ring, vec![report], data, started)
}
