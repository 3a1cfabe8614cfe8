//! Replication scheduling.
//!
//! Work items are indexed by replication number and results come back in
//! index order, so any downstream reduction sees the same sequence of floats
//! whatever the worker count.

/// Environment variable that overrides the worker count.
pub const WORKERS_ENV: &str = "QSL2_WORKERS";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Rayon's global pool. Without the `parallel` feature both parallel
    /// variants run sequentially.
    #[default]
    Parallel,
    /// A dedicated pool with this many threads.
    ParallelWith(usize),
}

impl Execution {
    /// `ParallelWith(n)` if the worker variable is set to a positive integer
    /// (`1` selects sequential execution), `Parallel` otherwise.
    pub fn from_env() -> Self {
        match std::env::var(WORKERS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
            Some(0) | None => Execution::Parallel,
            Some(1) => Execution::Sequential,
            Some(n) => Execution::ParallelWith(n),
        }
    }

    /// `[f(0), f(1), …, f(count − 1)]`.
    pub fn map<T, F>(&self, count: u64, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(u64) -> T + Sync + Send,
    {
        match self {
            Execution::Sequential => (0..count).map(f).collect(),
            #[cfg(feature = "parallel")]
            Execution::Parallel => par_map(count, f),
            #[cfg(feature = "parallel")]
            Execution::ParallelWith(workers) => rayon::ThreadPoolBuilder::new()
                .num_threads(*workers)
                .build()
                .expect("thread pool")
                .install(|| par_map(count, f)),
            #[cfg(not(feature = "parallel"))]
            _ => (0..count).map(f).collect(),
        }
    }
}

#[cfg(feature = "parallel")]
fn par_map<T, F>(count: u64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync + Send,
{
    use rayon::prelude::*;
    (0..count).into_par_iter().map(f).collect()
}
