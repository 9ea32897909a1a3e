//! Range verification of a catalog across primes.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::context::{build_context_with, ContextOptions, DEFAULT_CROSS_CHECK_CEILING};
use crate::dsl::{check_congruence, CongruenceSpec};
use crate::residue::Residue;

/// Largest prime a sweep may reach; keeps `p^4` well inside `u128`.
pub const MAX_PRIME: u64 = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Error,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
            Status::Error => "error",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerificationResult {
    pub congruence_id: String,
    pub p: u64,
    pub status: Status,
    pub lhs: Option<Residue>,
    pub rhs: Option<Residue>,
    pub message: Option<String>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub error: usize,
}

impl Summary {
    pub fn tally<'a>(results: impl IntoIterator<Item = &'a VerificationResult>) -> Self {
        let mut s = Summary::default();
        for r in results {
            match r.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Skipped => s.skipped += 1,
                Status::Error => s.error += 1,
            }
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub lo: u64,
    pub hi: u64,
    /// Sorted by catalog position, then by `p`.
    pub results: Vec<VerificationResult>,
    pub elapsed: Duration,
}

impl VerificationReport {
    pub fn summary(&self) -> Summary {
        Summary::tally(&self.results)
    }

    /// No failures and no errors.
    pub fn is_clean(&self) -> bool {
        let s = self.summary();
        s.fail == 0 && s.error == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("empty range: lo = {lo} > hi = {hi}")]
    InvalidRange { lo: u64, hi: u64 },
    #[error("upper bound {0} exceeds the supported maximum {MAX_PRIME}")]
    RangeTooLarge(u64),
    #[error("jobs must be positive")]
    NoJobs,
    #[error("thread pool: {0}")]
    ThreadPool(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VerifyOptions {
    pub jobs: usize,
    pub cross_check_ceiling: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self {
            jobs: 1,
            cross_check_ceiling: DEFAULT_CROSS_CHECK_CEILING,
        }
    }
}

/// All primes in `[lo, hi]`, ascending.
pub fn sieve_primes(lo: u64, hi: u64) -> Vec<u64> {
    if hi < 2 || lo > hi {
        return Vec::new();
    }
    let n = hi as usize;
    let mut composite = vec![false; n + 1];
    let mut i = 2;
    while i * i <= n {
        if !composite[i] {
            for j in (i * i..=n).step_by(i) {
                composite[j] = true;
            }
        }
        i += 1;
    }
    (lo.max(2) as usize..=n)
        .filter(|&k| !composite[k])
        .map(|k| k as u64)
        .collect()
}

pub fn verify_range(
    catalog: &[CongruenceSpec],
    lo: u64,
    hi: u64,
    jobs: usize,
) -> Result<VerificationReport, VerifyError> {
    verify_range_with(
        catalog,
        lo,
        hi,
        &VerifyOptions {
            jobs,
            ..VerifyOptions::default()
        },
    )
}

pub fn verify_range_with(
    catalog: &[CongruenceSpec],
    lo: u64,
    hi: u64,
    opts: &VerifyOptions,
) -> Result<VerificationReport, VerifyError> {
    if lo > hi {
        return Err(VerifyError::InvalidRange { lo, hi });
    }
    if hi > MAX_PRIME {
        return Err(VerifyError::RangeTooLarge(hi));
    }
    if opts.jobs == 0 {
        return Err(VerifyError::NoJobs);
    }
    let start = Instant::now();
    let primes = sieve_primes(lo, hi);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| VerifyError::ThreadPool(e.to_string()))?;
    let per_prime: Vec<Vec<VerificationResult>> = pool.install(|| {
        primes
            .par_iter()
            .map(|&p| verify_prime(catalog, p, opts))
            .collect()
    });

    let mut columns: Vec<_> = per_prime.into_iter().map(Vec::into_iter).collect();
    let mut results = Vec::with_capacity(catalog.len() * primes.len());
    for _ in catalog {
        for col in columns.iter_mut() {
            results.push(col.next().expect("one result per spec"));
        }
    }
    Ok(VerificationReport {
        lo,
        hi,
        results,
        elapsed: start.elapsed(),
    })
}

/// Checks every spec at one prime, in catalog order.
pub fn verify_prime(catalog: &[CongruenceSpec], p: u64, opts: &VerifyOptions) -> Vec<VerificationResult> {
    let e_max = catalog
        .iter()
        .filter(|s| s.precondition.admits(p))
        .map(|s| s.mod_exponent)
        .max();
    let skipped = |s: &CongruenceSpec| VerificationResult {
        congruence_id: s.id.clone(),
        p,
        status: Status::Skipped,
        lhs: None,
        rhs: None,
        message: None,
    };
    let Some(e_max) = e_max else {
        return catalog.iter().map(skipped).collect();
    };
    let ctx_opts = ContextOptions {
        cross_check_ceiling: opts.cross_check_ceiling,
    };
    match build_context_with(p, e_max, &ctx_opts) {
        Ok(ctx) => catalog.iter().map(|s| check_congruence(s, &ctx)).collect(),
        Err(e) => catalog
            .iter()
            .map(|s| {
                let mut r = skipped(s);
                if s.precondition.admits(p) {
                    r.status = Status::Error;
                    r.message = Some(e.to_string());
                }
                r
            })
            .collect(),
    }
}

/// Evaluates the `p > 5` entries at `p = 5` with the bound relaxed.
/// The outcome is informational only.
pub fn informational_p5(catalog: &[CongruenceSpec]) -> Vec<VerificationResult> {
    let relaxed: Vec<CongruenceSpec> = catalog
        .iter()
        .filter(|s| s.precondition.greater_than == 5)
        .map(|s| {
            let mut s = s.clone();
            s.precondition.greater_than = 4;
            s
        })
        .collect();
    verify_prime(&relaxed, 5, &VerifyOptions::default())
}
