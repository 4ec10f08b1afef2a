//! The full verification matrix behind `verify all`.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::Result;
use crate::field::FieldCtx;
use crate::identity::{verify_randomized, verify_remark5_all, RandomizedConfig, Which};
use crate::linear::LinearSeries;
use crate::powersum::{check_inverse_conjecture, counterexamples, suite_bound, theorem_suite, Tables};
use crate::report::{VerifyReport, SCHEMA};
use crate::tower::CarlitzCtx;
use crate::zeta::{euler_carlitz_crosscheck, multizeta_instances, verify_multizeta_identity};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "CARLITZ_LAB_THREADS";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    Quick,
    Full,
}

impl Profile {
    pub fn label(self) -> &'static str {
        match self {
            Profile::Quick => "quick",
            Profile::Full => "full",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "quick" => Some(Profile::Quick),
            "full" => Some(Profile::Full),
            _ => None,
        }
    }
}

/// A rayon pool sized by `CARLITZ_LAB_THREADS` when set.
pub fn thread_pool() -> rayon::ThreadPool {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        b = b.num_threads(n);
    }
    b.build().expect("thread pool")
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub profile: Profile,
    pub seed: u64,
    /// Status counts keyed by check id, then status label.
    pub counts: BTreeMap<String, BTreeMap<String, u64>>,
    /// Reports whose status is not ok, in canonical order.
    pub failures: Vec<VerifyReport>,
}

impl Summary {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "schema": SCHEMA,
            "kind": "summary",
            "profile": self.profile.label(),
            "seed": self.seed,
            "ok": self.is_ok(),
            "counts": self.counts,
            "failures": self.failures.iter().map(VerifyReport::to_json).collect::<Vec<_>>(),
        })
    }

    fn from_reports(profile: Profile, seed: u64, reports: Vec<VerifyReport>) -> Self {
        let mut counts: BTreeMap<String, BTreeMap<String, u64>> = BTreeMap::new();
        let mut failures = Vec::new();
        for r in reports {
            *counts.entry(r.id.clone()).or_default().entry(r.status.label().to_string()).or_default() += 1;
            if !r.is_ok() {
                failures.push(r);
            }
        }
        Summary { profile, seed, counts, failures }
    }
}

/// Theorem 1/3/4/6 instances for one `q`, over the Carlitz exponential, the
/// binomials `d ≤ 2` and `random_count` random polynomials over `F_{q^4}`.
pub fn theorem_matrix(q: u64, k_max: usize, random_count: u64, seed: u64) -> Result<Vec<VerifyReport>> {
    let n = suite_bound(q, k_max);
    let ctx = CarlitzCtx::of_order(q)?;
    let mut out = Vec::new();
    let mut tag = |mut reps: Vec<VerifyReport>, series: &str| {
        for r in reps.iter_mut() {
            if let Some(p) = r.params.as_object_mut() {
                p.insert("series".into(), json!(series));
            }
        }
        out.extend(reps);
    };
    // order k_max suffices for the h table bound q^{order+1} - 2 ≥ suite_bound
    let exp = ctx.carlitz_exp(k_max);
    tag(theorem_suite(&Tables::build(&exp, n)?, k_max)?, "carlitz-exp");
    for d in 0..=2 {
        let f = ctx.carlitz_binomial(d)?;
        tag(theorem_suite(&Tables::build(&f, n)?, k_max)?, &format!("carlitz-binomial:{d}"));
    }
    let big = FieldCtx::of_order(q.pow(4))?;
    let randoms: Vec<Vec<VerifyReport>> = (0..random_count)
        .into_par_iter()
        .map(|i| {
            let s = seed ^ (q << 32) ^ i;
            let f = LinearSeries::random(&big, q, 1 + (i as usize % 3), s)?;
            theorem_suite(&Tables::build(&f, n)?, k_max)
        })
        .collect::<Result<_>>()?;
    for (i, reps) in randoms.into_iter().enumerate() {
        tag(reps, &format!("random:{}", seed ^ (q << 32) ^ i as u64));
    }
    Ok(out)
}

fn matrix(profile: Profile, seed: u64) -> Result<Vec<VerifyReport>> {
    let full = profile == Profile::Full;
    let mut reports = Vec::new();

    let qs: &[u64] = if full { &[2, 3, 4] } else { &[2, 3] };
    let (k_max, randoms) = if full { (3, 20) } else { (2, 3) };
    for &q in qs {
        reports.extend(theorem_matrix(q, k_max, randoms, seed)?);
    }
    reports.extend(counterexamples()?);

    let trials = if full { 100 } else { 20 };
    let d_max = if full { 3 } else { 2 };
    let mut configs = Vec::new();
    for q in [2u64, 3] {
        for d in 1..=d_max {
            for s in 1..=(q as usize).min(d + 1) {
                configs.push(RandomizedConfig::new(Which::Thm2, q, d, s, 8, trials, seed));
                if (s as u64) < q {
                    configs.push(RandomizedConfig::new(Which::Thm5, q, d, s, 8, trials, seed));
                }
            }
        }
    }
    let randomized: Vec<VerifyReport> = configs.par_iter().map(verify_randomized).collect::<Result<_>>()?;
    reports.extend(randomized);

    for (q, ks) in [(3u64, vec![1u32, 1]), (3, vec![1, 2]), (3, vec![2, 2]), (5, vec![1, 2]), (5, vec![2, 2])] {
        reports.extend(verify_remark5_all(q, 2, &ks)?);
    }

    let zeta_qs: &[u64] = if full { &[3, 5] } else { &[3] };
    for &q in zeta_qs {
        let ctx = CarlitzCtx::of_order(q)?;
        let n_max = if full { 2 } else { 1 };
        let inst = multizeta_instances(q, n_max);
        let reps: Vec<VerifyReport> =
            inst.par_iter().map(|(n, ks)| verify_multizeta_identity(&ctx, *n, ks, 40)).collect::<Result<_>>()?;
        reports.extend(reps);
    }
    reports.push(euler_carlitz_crosscheck(&CarlitzCtx::of_order(3)?, 2, 4, 40)?);

    for q in [2u64, 3] {
        let ctx = CarlitzCtx::of_order(q)?;
        let order = if q == 2 { 5 } else { 3 };
        let t = Tables::build(&ctx.carlitz_exp(order), (q as usize).pow(4))?;
        reports.push(check_inverse_conjecture(&t, 4)?);
        let k_top = if full { 3 } else { 2 };
        for k in 1..=k_top {
            reports.push(ctx.verify_bernoulli_factors(k)?);
        }
    }
    Ok(reports)
}

/// Runs the verification matrix on a pool honoring `CARLITZ_LAB_THREADS`.
/// The summary depends only on `profile` and `seed`.
pub fn verify_all(profile: Profile, seed: u64) -> Result<Summary> {
    let reports = thread_pool().install(|| matrix(profile, seed))?;
    Ok(Summary::from_reports(profile, seed, reports))
}
