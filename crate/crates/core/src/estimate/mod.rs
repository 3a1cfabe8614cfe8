//! Seeded Monte Carlo estimators checked against the exact closed forms.
//!
//! Replication `r` of a run with master seed `s` draws everything from
//! `StreamKey::from_seed(s).split(r)`. Per-replication results are collected
//! in index order and reduced sequentially with compensated sums, so a report
//! depends only on its parameters and seed.

pub mod exec;
pub mod report;
pub mod stats;

pub use exec::{Execution, WORKERS_ENV};
pub use report::{BoundCheck, EstimateReport};
pub use stats::{compensated_sum, summarize, NeumaierSum, SampleSummary};

use crate::error::{Error, Result};
use crate::exact;
use crate::rng::{tag, StreamKey};
use crate::sim::{level_sums, run_quicksort, sample_limit, CoupledSample, Coupling, MuTable};
use crate::toll::c_of;

/// Seed used when none is given.
pub const DEFAULT_SEED: u64 = 0x5EED_C0DE_2012_0126;
/// Default gate half-width in standard errors.
pub const GATE_SIGMAS: f64 = 4.0;
/// Gate half-width for the level-sum profile.
pub const LEVEL_GATE_SIGMAS: f64 = 5.0;
pub const DEFAULT_EPS: f64 = 1e-6;
pub const DEFAULT_REPS: u64 = 200_000;
pub const DEFAULT_D2_SAMPLES: u64 = 100_000;
pub const DEFAULT_D2_EPS: f64 = 1e-4;
/// Default cap on the expected number of series nodes visited by one run.
pub const DEFAULT_NODE_BUDGET: f64 = 1e12;
pub const MIN_MOMENT_REPS: u64 = 100;
pub const MIN_D2_SAMPLES: u64 = 10_000;
pub const MIN_LEVEL_REPS: u64 = 1_000;
pub const MAX_PROFILE_DEPTH: u32 = 12;

/// `σ² = 7 − 2π²/3` as a double.
pub fn sigma_sq_f64() -> f64 {
    exact::sigma_sq().to_f64()
}

/// Run-wide settings shared by all estimators.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McConfig {
    pub seed: u64,
    pub execution: Execution,
    /// Refuse runs whose expected node count exceeds this.
    pub node_budget: f64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, execution: Execution::Parallel, node_budget: DEFAULT_NODE_BUDGET }
    }
}

impl McConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self { seed, ..Self::default() }
    }

    fn master(&self) -> StreamKey {
        StreamKey::from_seed(self.seed)
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("pruning width must lie in (0, 1], got {eps}")))
    }
}

fn check_reps(reps: u64, min: u64) -> Result<()> {
    if reps >= min {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("need at least {min} replications, got {reps}")))
    }
}

/// Expected kept nodes of `count` pruned series: `2/ε − 1` each, plus the
/// occupied keys.
pub fn expected_nodes(count: u64, eps: f64, n: u64) -> f64 {
    count as f64 * (2.0 / eps - 1.0 + n as f64)
}

fn check_budget(count: u64, eps: f64, n: u64, cfg: &McConfig) -> Result<()> {
    let nodes = expected_nodes(count, eps, n);
    if nodes > cfg.node_budget {
        Err(Error::ResourceRefusal(format!(
            "{count} series samples at eps = {eps:e} visit about {nodes:.3e} nodes, over the budget of {:.3e}",
            cfg.node_budget
        )))
    } else {
        Ok(())
    }
}

/// `E W₁²` from the exact prefix `Σ_{k<n} (k+1)² a_k²`.
pub fn ew1_sq_exact(n: u64) -> exact::PiQuadratic {
    let table = exact::HarmonicTable::new(n - 1);
    let mut prefix = exact::PiQuadratic::zero();
    for (k, a) in exact::a_sq_closed_table(&table).iter().enumerate() {
        prefix += &a.scale(&exact::rat(((k + 1) * (k + 1)) as i64, 1));
    }
    exact::ew1_sq(n, &prefix)
}

/// `R` coupled replications at fixed `(n, ε)`, kept for several reports.
#[derive(Clone, Debug)]
pub struct CoupledBatch {
    pub n: u64,
    pub eps: f64,
    pub seed: u64,
    pub samples: Vec<CoupledSample>,
}

impl CoupledBatch {
    pub fn run(n: u64, eps: f64, reps: u64, cfg: &McConfig) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidParameter("n must be at least 1".into()));
        }
        check_eps(eps)?;
        check_reps(reps, MIN_MOMENT_REPS)?;
        check_budget(reps, eps, n, cfg)?;
        let coupling = Coupling::new(n);
        let master = cfg.master();
        let samples = cfg.execution.map(reps, |r| coupling.sample(eps, master.split(r)));
        Ok(Self { n, eps, seed: cfg.seed, samples })
    }

    fn summary(&self, f: impl Fn(&CoupledSample) -> f64) -> SampleSummary {
        let values: Vec<f64> = self.samples.iter().map(f).collect();
        summarize(&values)
    }

    fn report(&self, quantity: &str, f: impl Fn(&CoupledSample) -> f64) -> EstimateReport {
        EstimateReport::from_summary(quantity, &self.summary(f), self.seed)
            .with_n(self.n)
            .with_eps(self.eps)
    }

    /// `(Y_n − Y^(ε))²` against `a_n²`, budget `σ²ε`.
    pub fn a_sq(&self) -> EstimateReport {
        let target = exact::a_sq_closed(self.n).to_f64();
        self.report("a_sq", |s| (s.y_n - s.y_limit).powi(2))
            .with_target(target, sigma_sq_f64() * self.eps, GATE_SIGMAS)
    }

    /// `W₁²` against the exact `E W₁²`. The pruned part of `U·Y⁽⁰⁾` has
    /// second moment at most `σ²·ε·E U = σ²ε/2`.
    pub fn w1_sq(&self) -> EstimateReport {
        let target = ew1_sq_exact(self.n).to_f64();
        self.report("w1_sq", |s| s.w1 * s.w1)
            .with_target(target, sigma_sq_f64() * self.eps / 2.0, GATE_SIGMAS)
    }

    pub fn w2_sq(&self) -> EstimateReport {
        let target = ew1_sq_exact(self.n).to_f64();
        self.report("w2_sq", |s| s.w2 * s.w2)
            .with_target(target, sigma_sq_f64() * self.eps / 2.0, GATE_SIGMAS)
    }

    /// `W₃²` from the coupled samples; involves no truncation.
    pub fn w3_sq(&self) -> EstimateReport {
        let target = exact::b_sq(self.n).to_f64();
        self.report("w3_sq", |s| s.w3 * s.w3).with_target(target, 0.0, GATE_SIGMAS)
    }

    /// `W₁·W₂`, mean zero by conditional independence.
    pub fn w1w2(&self) -> EstimateReport {
        self.report("w1_w2", |s| s.w1 * s.w2).with_target(0.0, sigma_sq_f64() * self.eps, GATE_SIGMAS)
    }

    /// Paired difference `(Y_n − Y^(ε))² − (2W₁² + W₃²)`, mean zero.
    pub fn decomposition(&self) -> EstimateReport {
        self.report("a_sq_minus_2w1_sq_plus_w3_sq", |s| {
            (s.y_n - s.y_limit).powi(2) - (2.0 * s.w1 * s.w1 + s.w3 * s.w3)
        })
        .with_target(0.0, sigma_sq_f64() * self.eps, GATE_SIGMAS)
    }

    /// Largest `|Y_n − Y^(ε) − (W₁+W₂+W₃)|` over the batch.
    pub fn max_identity_residual(&self) -> f64 {
        self.samples.iter().map(|s| s.decomposition_residual().abs()).fold(0.0, f64::max)
    }

    pub fn reports(&self) -> Vec<EstimateReport> {
        vec![self.a_sq(), self.w1_sq(), self.w2_sq(), self.w3_sq(), self.w1w2(), self.decomposition()]
    }
}

/// Monte Carlo `‖Y_n − Y‖₂²` through the coupling.
pub fn estimate_a_sq(n: u64, eps: f64, reps: u64, cfg: &McConfig) -> Result<EstimateReport> {
    Ok(CoupledBatch::run(n, eps, reps, cfg)?.a_sq())
}

/// Monte Carlo `E W₁²` through the coupling.
pub fn estimate_w1_sq(n: u64, eps: f64, reps: u64, cfg: &McConfig) -> Result<EstimateReport> {
    Ok(CoupledBatch::run(n, eps, reps, cfg)?.w1_sq())
}

/// Moments of `Y^(ε)` sampled on its own.
#[derive(Clone, Debug)]
pub struct YMoments {
    pub mean: EstimateReport,
    pub second: EstimateReport,
    /// Diagnostic only.
    pub third_central: f64,
}

pub fn estimate_y_moments(eps: f64, reps: u64, cfg: &McConfig) -> Result<YMoments> {
    check_eps(eps)?;
    check_reps(reps, MIN_MOMENT_REPS)?;
    check_budget(reps, eps, 0, cfg)?;
    let master = cfg.master();
    let ys = cfg.execution.map(reps, |r| sample_limit(master.split(r).split(tag::LIMIT_ONLY), eps));
    let sigma2 = sigma_sq_f64();
    let first = summarize(&ys);
    let squares: Vec<f64> = ys.iter().map(|y| y * y).collect();
    let second = summarize(&squares);
    let third_central =
        compensated_sum(ys.iter().map(|y| (y - first.mean).powi(3))) / ys.len() as f64;
    Ok(YMoments {
        mean: EstimateReport::from_summary("y_mean", &first, cfg.seed)
            .with_eps(eps)
            .with_target(0.0, (sigma2 * eps).sqrt(), GATE_SIGMAS),
        second: EstimateReport::from_summary("y_second_moment", &second, cfg.seed)
            .with_eps(eps)
            .with_target(sigma2, sigma2 * eps, GATE_SIGMAS),
        third_central,
    })
}

/// First key `U` and split count `ν₀(n)` of one replication, drawn directly.
fn root_split(n: u64, stream: StreamKey) -> (f64, u64) {
    let mut rng = stream.split(tag::AUX).counter();
    let u = rng.next_unit();
    let nu0 = (1..n).filter(|_| rng.next_unit() < u).count() as u64;
    (u, nu0)
}

/// Monte Carlo `b_n² = E W₃²` from `W₃ = (n/(n+1))C_n(ν₀+1) − C(U)`.
pub fn estimate_w3_sq(n: u64, reps: u64, cfg: &McConfig) -> Result<EstimateReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    check_reps(reps, MIN_MOMENT_REPS)?;
    let table = MuTable::new(n);
    let master = cfg.master();
    let ratio = n as f64 / (n + 1) as f64;
    let values = cfg.execution.map(reps, |r| {
        let (u, nu0) = root_split(n, master.split(r));
        let w3 = ratio * table.toll(n, nu0 + 1) - c_of(u);
        w3 * w3
    });
    let target = exact::b_sq(n).to_f64();
    Ok(EstimateReport::from_summary("w3_sq", &summarize(&values), cfg.seed)
        .with_n(n)
        .with_target(target, 0.0, GATE_SIGMAS))
}

/// Pearson statistic for uniformity of `ν₀(n)` on `{0, …, n−1}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChiSquare {
    pub statistic: f64,
    pub dof: u64,
}

pub fn split_chi_square(n: u64, reps: u64, cfg: &McConfig) -> ChiSquare {
    assert!(n >= 2, "uniformity of the split needs n >= 2");
    let master = cfg.master();
    let splits = cfg.execution.map(reps, |r| root_split(n, master.split(r)).1);
    let mut counts = vec![0u64; n as usize];
    for s in splits {
        counts[s as usize] += 1;
    }
    let expected = reps as f64 / n as f64;
    let statistic = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    ChiSquare { statistic, dof: n - 1 }
}

/// Quantile-coupling estimate of `d₂(Y_n, Y)` from `m` independent samples
/// of each law.
///
/// The sorted samples are paired; the estimate is the root mean squared
/// difference. Its standard error comes from the delta method on the mean of
/// squared differences. Two bounds are attached: `2/√n` and the exact
/// coupled distance `‖Y_n − Y‖₂`, each with `4·stderr + √(σ²ε)` slack.
pub fn estimate_d2(n: u64, eps: f64, m: u64, cfg: &McConfig) -> Result<EstimateReport> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    check_eps(eps)?;
    check_reps(m, MIN_D2_SAMPLES)?;
    check_budget(m, eps, n, cfg)?;
    let table = MuTable::new(n);
    let master = cfg.master();
    let mut finite = cfg.execution.map(m, |r| {
        let (stats, _) = run_quicksort(n, master.split(2 * r));
        table.normalized_cost(n, stats.total_comparisons)
    });
    let mut limit =
        cfg.execution.map(m, |r| sample_limit(master.split(2 * r + 1).split(tag::LIMIT_ONLY), eps));
    finite.sort_by(f64::total_cmp);
    limit.sort_by(f64::total_cmp);
    let sq: Vec<f64> = finite.iter().zip(&limit).map(|(a, b)| (a - b) * (a - b)).collect();
    let ms = summarize(&sq);
    let estimate = ms.mean.sqrt();
    let std_error = if estimate > 0.0 { ms.std_error / (2.0 * estimate) } else { 0.0 };
    let budget = (sigma_sq_f64() * eps).sqrt();
    let coupled = exact::a_sq_closed(n).to_f64().sqrt();
    Ok(EstimateReport::new("d2", estimate, std_error, m, cfg.seed)
        .with_n(n)
        .with_eps(eps)
        .with_upper_bound("two_over_root_n", 2.0 / (n as f64).sqrt(), budget, GATE_SIGMAS)
        .with_upper_bound("coupled_l2", coupled, budget, GATE_SIGMAS))
}

/// Empirical second moments of the level sums `Σ_{|θ|=j} G_θ`,
/// `j = 0..=depth`, against `(σ²/3)(2/3)^j`.
pub fn level_variance_profile(depth: u32, reps: u64, cfg: &McConfig) -> Result<Vec<EstimateReport>> {
    if depth > MAX_PROFILE_DEPTH {
        return Err(Error::ResourceRefusal(format!(
            "level profile depth {depth} exceeds the cap of {MAX_PROFILE_DEPTH}"
        )));
    }
    check_reps(reps, MIN_LEVEL_REPS)?;
    let master = cfg.master();
    let rows = cfg.execution.map(reps, |r| level_sums(depth, master.split(r).split(tag::LIMIT_ONLY)));
    let rows = rows.into_iter().collect::<Result<Vec<_>>>()?;
    let sigma2 = sigma_sq_f64();
    Ok((0..=depth)
        .map(|j| {
            let squares: Vec<f64> = rows.iter().map(|row| row[j as usize].powi(2)).collect();
            let target = sigma2 / 3.0 * (2.0f64 / 3.0).powi(j as i32);
            EstimateReport::from_summary("level_sum_sq", &summarize(&squares), cfg.seed)
                .with_level(j)
                .with_target(target, 0.0, LEVEL_GATE_SIGMAS)
        })
        .collect())
}
