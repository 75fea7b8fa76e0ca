//! Verification suites: each suite is a list of independent jobs, run in
//! parallel, whose reports are returned sorted by claim id.

use clap::ValueEnum;
use rayon::prelude::*;
use wba_core::algebra22::a22_checks;
use wba_core::contraction33::{
    arc_conjugation_facts, single_arc_trace_check, squeeze_reports, unit_decomposition_check, Squeezer,
};
use wba_core::gram::{gram_matrix, DENSE_LIMIT, overlap_check, overlap_samples, GhatFamily};
use wba_core::matrixunits::{expansion_check, unit_product_law_check, UnitRegistry};
use wba_core::oracle::{scalar_deviation, VerificationReport};
use wba_core::walled::{appendix_check, arc_algebra_check, q_projector_check, q_sandwich_check};
use wba_core::{Error, Result};

/// Environment variable capping the number of worker threads.
pub const THREADS_VAR: &str = "WBA_THREADS";

/// Overlap samples per orientation in the `gram` suite.
const OVERLAP_SAMPLES: usize = 6;

/// Named group of claims.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Suite {
    /// Matrix-unit laws of `C[S_p]`.
    Units,
    /// Arc operators and the `Q^(k)` resolution of identity.
    Q,
    /// `Ĝ` quasi-law, Gram entries, pure basis and overlaps (`p ≥ 2`).
    Gram,
    /// Explicit construction of `A^d_{2,2}` (`p = 2`).
    A22,
    /// Single-arc squeezing of `C[S_3] ⊗ C[S_3]` (`p = 3`).
    Squeeze,
    /// Trace and sandwich coefficients (`p ≥ 2`).
    Appendix,
    /// Every suite applicable to the given `p`.
    All,
}

impl Suite {
    /// Whether the suite can run at this `p`.
    pub fn supports(self, p: usize) -> bool {
        match self {
            Suite::Units | Suite::Q | Suite::All => (1..=3).contains(&p),
            Suite::Gram | Suite::Appendix => (2..=3).contains(&p),
            Suite::A22 => p == 2,
            Suite::Squeeze => p == 3,
        }
    }

    fn leaves(self, p: usize) -> Vec<Suite> {
        match self {
            Suite::All => [Suite::Units, Suite::Q, Suite::Gram, Suite::A22, Suite::Squeeze, Suite::Appendix]
                .into_iter()
                .filter(|s| s.supports(p))
                .collect(),
            s => vec![s],
        }
    }
}

type Job = Box<dyn Fn() -> Result<Vec<VerificationReport>> + Send + Sync>;

fn one(f: impl Fn() -> Result<VerificationReport> + Send + Sync + 'static) -> Job {
    Box::new(move || f().map(|r| vec![r]))
}

fn jobs(suite: Suite, p: usize, d: usize, tol: f64) -> Vec<Job> {
    match suite {
        Suite::Units => vec![one(move || unit_product_law_check(p, d, tol)), one(move || expansion_check(p, d, tol))],
        Suite::Q => vec![one(move || q_projector_check(p, d, tol)), one(move || arc_algebra_check(p, d, tol))],
        Suite::Appendix => vec![one(move || appendix_check(p, d, tol)), one(move || q_sandwich_check(p, d, tol))],
        Suite::Gram => {
            let mut v: Vec<Job> = vec![Box::new(move || {
                let fam = GhatFamily::new(p, d)?;
                let pure = fam.pure_basis(true)?;
                Ok(vec![fam.quasi_law_check(tol)?, gram_entry_check(&fam, tol)?, pure.law_check(tol)])
            })];
            // the overlap comparison needs dense operators on the full space
            if d.checked_pow(2 * p as u32).is_some_and(|n| n <= DENSE_LIMIT) {
                v.push(one(move || {
                    let reg = UnitRegistry::new(p, d)?;
                    overlap_check(&reg, &overlap_samples(p, OVERLAP_SAMPLES)?, 0, tol).map(|(rep, _)| rep)
                }));
            }
            v
        }
        Suite::A22 => vec![Box::new(move || a22_checks(d, tol))],
        Suite::Squeeze => {
            // the single-arc facts are checked on both the two- and three-slot sides
            let mut v: Vec<Job> = vec![Box::new(move || Ok(squeeze_reports(d, &Squeezer::new(d)?.squeeze_all()?, tol)))];
            for q in [2, 3] {
                v.push(one(move || single_arc_trace_check(q, d, tol)));
                v.push(one(move || arc_conjugation_facts(q, d, tol)));
                v.push(one(move || unit_decomposition_check(q, d, tol)));
            }
            v
        }
        Suite::All => unreachable!("expanded by Suite::leaves"),
    }
}

/// Closed-form Gram entries against the measured `U_Δ† U_Λ` scalars.
fn gram_entry_check(fam: &GhatFamily, tol: f64) -> Result<VerificationReport> {
    let closed = gram_matrix(fam.p(), fam.d())?.matrix();
    let measured = fam.measured_gram();
    let mut rep = VerificationReport::new("gram.entries", fam.p(), fam.d(), tol);
    for a in 0..closed.nrows() {
        for b in 0..closed.ncols() {
            rep.record(scalar_deviation(measured[(a, b)], closed[(a, b)]), || format!("B̂[{a}][{b}]"));
        }
    }
    Ok(rep)
}

/// Runs a suite at `(p, d)` and returns its reports sorted by claim id (then `p`).
pub fn run_suite(suite: Suite, p: usize, d: usize, tol: f64) -> Result<Vec<VerificationReport>> {
    if !suite.supports(p) {
        return Err(Error::Unsupported(format!("suite {suite:?} does not run at p = {p}")));
    }
    if d < 2 {
        return Err(Error::Unsupported(format!("verification needs d ≥ 2, got {d}")));
    }
    let all: Vec<Job> = suite.leaves(p).into_iter().flat_map(|s| jobs(s, p, d, tol)).collect();
    let run = || all.par_iter().map(|job| job()).collect::<Result<Vec<_>>>();
    let mut reports: Vec<VerificationReport> = match thread_cap() {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?
            .install(run)?,
        None => run()?,
    }
    .into_iter()
    .flatten()
    .collect();
    reports.sort_by(|a, b| (&a.claim_id, a.p, a.d).cmp(&(&b.claim_id, b.p, b.d)));
    Ok(reports)
}

fn thread_cap() -> Option<usize> {
    std::env::var(THREADS_VAR).ok()?.trim().parse().ok().filter(|&n| n > 0)
}

/// The failing report furthest beyond its tolerance.
pub fn worst_offender(reports: &[VerificationReport]) -> Option<&VerificationReport> {
    let excess = |r: &VerificationReport| {
        if r.max_abs_deviation.is_nan() {
            f64::INFINITY
        } else {
            r.max_abs_deviation / r.tolerance.max(f64::MIN_POSITIVE)
        }
    };
    reports.iter().filter(|r| !r.pass).max_by(|a, b| excess(a).total_cmp(&excess(b)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_support() {
        assert!(Suite::Units.supports(1));
        assert!(!Suite::Gram.supports(1));
        assert!(!Suite::A22.supports(3));
        assert!(!Suite::Squeeze.supports(2));
        assert_eq!(Suite::All.leaves(1), vec![Suite::Units, Suite::Q]);
        assert_eq!(Suite::All.leaves(2), vec![Suite::Units, Suite::Q, Suite::Gram, Suite::A22, Suite::Appendix]);
        assert!(run_suite(Suite::A22, 3, 3, 1e-9).is_err());
        assert!(run_suite(Suite::Units, 2, 1, 1e-9).is_err());
    }

    #[test]
    fn reports_are_sorted_and_pass() {
        let reps = run_suite(Suite::All, 2, 3, 1e-9).unwrap();
        assert!(reps.windows(2).all(|w| w[0].claim_id <= w[1].claim_id));
        assert!(reps.iter().all(|r| r.pass), "{:?}", worst_offender(&reps));
        assert!(worst_offender(&reps).is_none());
    }

    #[test]
    fn worst_offender_ranks_by_excess() {
        let mut a = VerificationReport::new("a", 2, 2, 1e-9);
        a.record_plain(1e-6);
        let mut b = VerificationReport::new("b", 2, 2, 1e-3);
        b.record_plain(1e-2);
        let reps = [a, b];
        assert_eq!(worst_offender(&reps).unwrap().claim_id, "a");
    }
}
