//! Batch additivity fuzzing: generate a semi-split extension with a
//! homotopy-coherent endomorphism of it, run the full strictification and
//! trace comparison, and cross-check the computed traces against the
//! generator's closed-form predictions.
//!
//! Each case owns an independent RNG seeded from a value drawn serially from
//! the master seed, so the parallel and sequential drivers produce identical
//! results case for case.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha12Rng;

use crate::gen::{random_endo_square, random_extension, GenParams};
use crate::report::CheckReport;
use crate::ring::Scalar;
use crate::trace::additivity_run;

/// Outcome of one fuzzed additivity run. `ok` folds in every certified
/// square, the trace equality, and agreement with the predicted traces.
#[derive(Clone, Debug)]
pub struct FuzzCase {
    pub index: usize,
    pub ok: bool,
    pub glue_nonzero: bool,
    pub slack_nonzero: bool,
    pub tr_sub: Scalar,
    pub tr_total: Scalar,
    pub tr_quot: Scalar,
    pub report: CheckReport,
}

/// Runs a single case from its own seed.
pub fn additivity_case(params: &GenParams, case_seed: u64, index: usize) -> FuzzCase {
    let mut rng = ChaCha12Rng::seed_from_u64(case_seed);
    let ext = random_extension(&mut rng, params, true);
    let sq = random_endo_square(&mut rng, &ext);
    let run = additivity_run(&ext.ses, &sq.phi, &sq.psi, &sq.s)
        .expect("generated endomorphism squares satisfy the construction's preconditions");
    let mut report = run.report;
    report.push("computed sub trace matches the generator's prediction", run.tr_phi == sq.tr_sub);
    report.push(
        "computed total trace matches the generator's prediction",
        run.tr_psi == sq.tr_total,
    );
    report.push(
        "computed quotient trace matches the generator's prediction",
        run.tr_omega == sq.tr_quot,
    );
    FuzzCase {
        index,
        ok: report.ok(),
        glue_nonzero: !ext.ses.glue().is_zero(),
        slack_nonzero: !sq.s.is_zero(),
        tr_sub: run.tr_phi,
        tr_total: run.tr_psi,
        tr_quot: run.tr_omega,
        report,
    }
}

/// Derives one independent seed per case from the master seed. Drawn
/// serially up front so the execution order of cases cannot matter.
pub fn case_seeds(master_seed: u64, cases: usize) -> Vec<u64> {
    let mut rng = ChaCha12Rng::seed_from_u64(master_seed);
    (0..cases).map(|_| rng.next_u64()).collect()
}

/// Sequential driver, always available.
pub fn run_batch_seq(params: &GenParams, master_seed: u64, cases: usize) -> Vec<FuzzCase> {
    case_seeds(master_seed, cases)
        .into_iter()
        .enumerate()
        .map(|(i, s)| additivity_case(params, s, i))
        .collect()
}

/// Parallel driver over the same per-case seeds.
#[cfg(feature = "parallel")]
pub fn run_batch_par(params: &GenParams, master_seed: u64, cases: usize) -> Vec<FuzzCase> {
    use rayon::prelude::*;
    case_seeds(master_seed, cases)
        .into_par_iter()
        .enumerate()
        .map(|(i, s)| additivity_case(params, s, i))
        .collect()
}

/// Default driver: parallel when the feature is on, sequential otherwise.
pub fn run_batch(params: &GenParams, master_seed: u64, cases: usize) -> Vec<FuzzCase> {
    #[cfg(feature = "parallel")]
    {
        run_batch_par(params, master_seed, cases)
    }
    #[cfg(not(feature = "parallel"))]
    {
        run_batch_seq(params, master_seed, cases)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingSpec;

    fn small(ring: RingSpec) -> GenParams {
        GenParams { ring, min_deg: -1, max_deg: 1, max_rank: 2 }
    }

    #[test]
    fn batches_pass_and_reproduce_from_the_seed() {
        let params = small(RingSpec::PrimeField(7));
        let a = run_batch(&params, 7, 6);
        let b = run_batch(&params, 7, 6);
        assert!(a.iter().all(|c| c.ok), "{a:?}");
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.tr_total, y.tr_total);
            assert_eq!(x.ok, y.ok);
        }
        assert!(a.iter().any(|c| c.glue_nonzero));
    }

    #[test]
    fn parallel_and_sequential_batches_agree_case_for_case() {
        let params = small(RingSpec::Integers);
        let seq = run_batch_seq(&params, 11, 5);
        let par = run_batch(&params, 11, 5);
        assert_eq!(seq.len(), par.len());
        for (s, p) in seq.iter().zip(&par) {
            assert_eq!(s.tr_sub, p.tr_sub);
            assert_eq!(s.tr_total, p.tr_total);
            assert_eq!(s.tr_quot, p.tr_quot);
            assert_eq!(s.glue_nonzero, p.glue_nonzero);
            assert_eq!(s.slack_nonzero, p.slack_nonzero);
            assert_eq!(s.ok, p.ok);
        }
    }
}
