use super::{RunnerError, Threads};
use rayon::prelude::*;
use serde::Serialize;
use std::panic::{catch_unwind, AssertUnwindSafe};

/// Environment variable consulted when `threads = "auto"`.
pub const THREADS_ENV: &str = "POLARING_THREADS";

/// Fraction of realizations that may be excluded before a run fails.
pub const EXCLUSION_BUDGET: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RealizationRecord {
    pub index: usize,
    pub status: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma_dev: Option<f64>,
}

impl RealizationRecord {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }
}

pub fn resolve_threads(t: Threads) -> usize {
    match t {
        Threads::Count(n) => n.max(1),
        Threads::Auto => std::env::var(THREADS_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&n| n > 0)
            .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)),
    }
}

fn panic_message(p: Box<dyn std::any::Any + Send>) -> String {
    if let Some(s) = p.downcast_ref::<&str>() {
        format!("panic: {s}")
    } else if let Some(s) = p.downcast_ref::<String>() {
        format!("panic: {s}")
    } else {
        "panic".into()
    }
}

/// Evaluate `work(0..n)` on a pool of `threads` workers and hand each success to
/// `collect` in ascending index order. Failures and panics are recorded as
/// exclusions; the caller's reduction never sees completion order.
pub fn run_ordered<T, W, C>(n: usize, threads: usize, work: W, mut collect: C) -> Result<Vec<RealizationRecord>, RunnerError>
where
    T: Send,
    W: Fn(usize) -> Result<T, String> + Sync,
    C: FnMut(usize, T) -> Option<f64>,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| RunnerError::Io(format!("thread pool: {e}")))?;
    let chunk = (threads.max(1) * 4).max(16);
    let mut records = Vec::with_capacity(n);
    let mut lo = 0;
    while lo < n {
        let hi = (lo + chunk).min(n);
        let results: Vec<Result<T, String>> = pool.install(|| {
            (lo..hi)
                .into_par_iter()
                .map(|r| catch_unwind(AssertUnwindSafe(|| work(r))).unwrap_or_else(|p| Err(panic_message(p))))
                .collect()
        });
        for (r, res) in (lo..hi).zip(results) {
            match res {
                Ok(v) => {
                    let sigma_dev = collect(r, v);
                    records.push(RealizationRecord { index: r, status: "ok", reason: None, sigma_dev });
                }
                Err(reason) => {
                    log::warn!("realization {r} excluded: {reason}");
                    records.push(RealizationRecord { index: r, status: "excluded", reason: Some(reason), sigma_dev: None });
                }
            }
        }
        lo = hi;
    }
    Ok(records)
}

/// Number of excluded realizations, or an error when it exceeds the budget.
pub fn check_budget(records: &[RealizationRecord]) -> Result<usize, RunnerError> {
    let excluded = records.iter().filter(|r| !r.ok()).count();
    if excluded as f64 > EXCLUSION_BUDGET * records.len() as f64 {
        return Err(RunnerError::ExclusionBudget { excluded, total: records.len() });
    }
    Ok(excluded)
}
