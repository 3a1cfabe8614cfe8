//! One replication of the coupling between the finite cost `Y_n` and the
//! pruned limit `Y^(ε)`, and the decomposition `Y_n − Y = W₁ + W₂ + W₃`.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::exact;
use crate::rng::StreamKey;

use super::series::evaluate_parts;
use super::tree::{run_quicksort, BstStats};

/// `μ_0, …, μ_N` rounded once from their exact values.
#[derive(Clone, Debug)]
pub struct MuTable {
    mu: Vec<f64>,
}

impl MuTable {
    pub fn new(n_max: u64) -> Self {
        let mu = exact::mu_table(n_max).iter().map(|m| m.to_f64().expect("finite")).collect();
        Self { mu }
    }

    pub fn n_max(&self) -> u64 {
        self.mu.len() as u64 - 1
    }

    pub fn mu(&self, n: u64) -> f64 {
        self.mu[n as usize]
    }

    /// `C_n(i)` from the cached means.
    pub fn toll(&self, n: u64, i: u64) -> f64 {
        assert!((1..=n).contains(&i), "C_n(i) needs 1 <= i <= n");
        ((n - 1) as f64 + self.mu(i - 1) + self.mu(n - i) - self.mu(n)) / n as f64
    }

    /// `Y_n = (K_n − μ_n)/(n + 1)`.
    pub fn normalized_cost(&self, n: u64, comparisons: u64) -> f64 {
        (comparisons as f64 - self.mu(n)) / (n + 1) as f64
    }
}

/// One coupled replication.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoupledSample {
    pub n: u64,
    pub y_n: f64,
    /// `Y^(ε)` on the same key stream.
    pub y_limit: f64,
    pub prune_width: f64,
    pub w1: f64,
    pub w2: f64,
    pub w3: f64,
    pub nu0: u64,
    /// `U`, the first key.
    pub u: f64,
}

impl CoupledSample {
    /// `(Y_n − Y^(ε)) − (W₁ + W₂ + W₃)`; zero up to round-off.
    pub fn decomposition_residual(&self) -> f64 {
        (self.y_n - self.y_limit) - (self.w1 + self.w2 + self.w3)
    }
}

/// Reusable context for coupled replications at fixed `n`.
#[derive(Clone, Debug)]
pub struct Coupling {
    n: u64,
    table: MuTable,
}

impl Coupling {
    /// # Panics
    /// If `n == 0`.
    pub fn new(n: u64) -> Self {
        assert!(n >= 1, "coupling needs n >= 1");
        Self { n, table: MuTable::new(n) }
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn table(&self) -> &MuTable {
        &self.table
    }

    /// Run QuickSort on the replication's keys, evaluate the pruned series
    /// on the same tree, and decompose the difference.
    pub fn sample(&self, eps: f64, stream: StreamKey) -> CoupledSample {
        let n = self.n;
        let (stats, tree) = run_quicksort(n, stream);
        let parts = evaluate_parts(&tree, eps);
        let t = &self.table;
        let scale = (n + 1) as f64;
        let y_n = t.normalized_cost(n, stats.total_comparisons);
        let (nu0, nu1) = (stats.left_count, stats.right_count);
        let y_left = t.normalized_cost(nu0, stats.left_comparisons);
        let y_right = t.normalized_cost(nu1, stats.right_comparisons);
        let w1 = (nu0 + 1) as f64 / scale * y_left - parts.left;
        let w2 = (nu1 + 1) as f64 / scale * y_right - parts.right;
        let w3 = n as f64 / scale * t.toll(n, nu0 + 1) - parts.root;
        CoupledSample {
            n,
            y_n,
            y_limit: parts.total(),
            prune_width: eps,
            w1,
            w2,
            w3,
            nu0,
            u: parts.root_pivot,
        }
    }
}

/// Convenience wrapper building a one-off [`Coupling`].
pub fn coupled_sample(n: u64, eps: f64, stream: StreamKey) -> CoupledSample {
    Coupling::new(n).sample(eps, stream)
}

/// Both sides of the root-split identity
/// `Y_n = (n/(n+1))C_n(ν₀+1) + ((ν₀+1)/(n+1))Y_{n,0} + ((ν₁+1)/(n+1))Y_{n,1}`.
pub fn root_split_sides(stats: &BstStats, table: &MuTable) -> (f64, f64) {
    let n = stats.n;
    let scale = (n + 1) as f64;
    let lhs = table.normalized_cost(n, stats.total_comparisons);
    let rhs = n as f64 / scale * table.toll(n, stats.left_count + 1)
        + (stats.left_count + 1) as f64 / scale
            * table.normalized_cost(stats.left_count, stats.left_comparisons)
        + (stats.right_count + 1) as f64 / scale
            * table.normalized_cost(stats.right_count, stats.right_comparisons);
    (lhs, rhs)
}

/// Absolute residual of the root-split identity on one simulated tree.
pub fn verify_ynid(n: u64, stream: StreamKey) -> f64 {
    verify_ynid_with(n, stream, &MuTable::new(n))
}

/// As [`verify_ynid`], with a caller-held table covering `n`.
pub fn verify_ynid_with(n: u64, stream: StreamKey, table: &MuTable) -> f64 {
    assert!(n >= 1 && n <= table.n_max(), "table must cover n");
    let (stats, _) = run_quicksort(n, stream);
    let (lhs, rhs) = root_split_sides(&stats, table);
    (lhs - rhs).abs()
}
