//! Named pass/fail checks grouped into a quick exact suite and a full suite
//! that adds the oracles and Monte Carlo gates.

use std::time::Instant;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::estimate::{self, CoupledBatch, EstimateReport, Execution, McConfig, DEFAULT_SEED};
use crate::exact::{self, rat, HarmonicTable, PiQuadratic};
use crate::oracles;
use crate::rng::{tag, StreamKey};
use crate::sim::{self, MuTable};

/// Euler's constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
/// Upper end of the exact range checks.
pub const EXACT_RANGE: u64 = 2000;
pub const ASYMPTOTIC_N: u64 = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Quick,
    Full,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        format!("{}: {}  ({})", self.name, if self.passed { "PASS" } else { "FAIL" }, self.detail)
    }
}

/// Parameters of the Monte Carlo part of the full suite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub execution: Execution,
    pub n: u64,
    pub eps: f64,
    pub reps: u64,
    pub d2_samples: u64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { seed: DEFAULT_SEED, execution: Execution::Parallel, n: 64, eps: 1e-4, reps: 20_000, d2_samples: 10_000 }
    }
}

impl VerifyOptions {
    fn config(&self) -> McConfig {
        McConfig { seed: self.seed, execution: self.execution, ..McConfig::default() }
    }
}

fn timed(name: &str, check: impl FnOnce() -> (bool, String)) -> CheckOutcome {
    let start = Instant::now();
    let (passed, detail) = check();
    CheckOutcome { name: name.to_string(), passed, detail, seconds: start.elapsed().as_secs_f64() }
}

fn gate_detail(reports: &[EstimateReport]) -> (bool, String) {
    let passed = reports.iter().all(|r| r.passed == Some(true));
    let worst = reports
        .iter()
        .filter_map(|r| r.z_score.map(|z| (z.abs(), r)))
        .max_by(|a, b| a.0.total_cmp(&b.0));
    let detail = match worst {
        Some((z, r)) => format!("{} gates, largest |z| = {z:.2} on {}", reports.len(), r.quantity),
        None => format!("{} gates", reports.len()),
    };
    (passed, detail)
}

/// `a_n²` by all three routes, compared component-wise for `0 ≤ n ≤ n_max`.
pub fn three_routes_agree(n_max: u64) -> (bool, String) {
    let closed = exact::a_sq_closed_table(&HarmonicTable::new(n_max));
    let recursive = exact::a_sq_recursive(n_max);
    let dnc = exact::a_sq_dnc_table(n_max);
    let pi2 = rat(-2, 3);
    let bad = (0..=n_max as usize)
        .find(|&n| closed[n] != recursive[n] || closed[n] != dnc[n] || closed[n].pi2 != pi2);
    match bad {
        None => (true, format!("{} values identical", n_max + 1)),
        Some(n) => (false, format!("routes differ at n = {n}")),
    }
}

/// `Σ_i C_n(i) = 0` for `1 ≤ n ≤ n_max`, summed as integers over the common
/// denominator `lcm(1..n_max)`.
pub fn toll_sums_vanish(n_max: u64) -> (bool, String) {
    let lcm = (1..=n_max.max(1)).fold(BigInt::one(), |acc, j| acc.lcm(&BigInt::from(j)));
    let scaled: Vec<BigInt> = exact::mu_table(n_max)
        .iter()
        .map(|m| {
            let (q, r) = (&lcm * m.numer()).div_rem(m.denom());
            assert!(r.is_zero(), "lcm clears every denominator of mu");
            q
        })
        .collect();
    for n in 1..=n_max as usize {
        let base = BigInt::from(n - 1) * &lcm - &scaled[n];
        let mut sum = BigInt::zero();
        for i in 1..=n {
            sum += &base + &scaled[i - 1] + &scaled[n - i];
        }
        if !sum.is_zero() {
            return (false, format!("nonzero sum at n = {n}"));
        }
    }
    (true, format!("n = 1..{n_max}"))
}

/// `μ_n` from the closed form against the recurrence `μ_n = n − 1 + (2/n)Σ_{j<n} μ_j`.
pub fn mu_recurrence(n_max: u64) -> (bool, String) {
    let table = exact::mu_table(n_max);
    let mut prefix = exact::Rational::zero();
    for n in 1..=n_max {
        prefix += &table[n as usize - 1];
        let rec = rat(n as i64 - 1, 1) + &prefix * rat(2, n as i64);
        if rec != table[n as usize] {
            return (false, format!("mismatch at n = {n}"));
        }
    }
    (true, format!("n = 1..{n_max}"))
}

pub fn spot_values() -> (bool, String) {
    let sigma = exact::sigma_sq();
    let a3 = PiQuadratic::new(rat(503, 72), rat(-2, 3));
    let ok = sigma == PiQuadratic::new(rat(7, 1), rat(-2, 3))
        && (0..=2).all(|n| exact::a_sq_closed(n) == sigma)
        && exact::a_sq_closed(3) == a3
        && exact::b_sq(1) == sigma.scale(&rat(1, 3))
        && exact::cn_second_moment(3) == rat(2, 81)
        && (sigma.to_f64() - 0.420_263_732_607_094).abs() < 1e-14;
    (ok, format!("a_0^2 = a_1^2 = a_2^2 = {sigma}, a_3^2 = {}", exact::a_sq_closed(3)))
}

/// `n·a_n² − 2 ln n` against its limit `2γ − 3`.
pub fn asymptotic_residual(n: u64) -> (bool, String) {
    let a = exact::a_sq_closed(n).to_f64();
    let residual = n as f64 * a - 2.0 * (n as f64).ln();
    let limit = 2.0 * EULER_GAMMA - 3.0;
    ((residual - limit).abs() < 0.01, format!("n = {n}: residual {residual:.6}, limit {limit:.6}"))
}

/// `b_n² = σ²/3 − (n/(n+1))²·E[C_n(ν₀+1)²]`.
pub fn b_sq_identity(n_max: u64) -> (bool, String) {
    let third = exact::sigma_sq().scale(&rat(1, 3));
    let ok = (1..=n_max).all(|n| {
        let ratio = rat(n as i64, n as i64 + 1);
        let rhs = &third - &PiQuadratic::from_rational(&ratio * &ratio * exact::cn_second_moment(n));
        exact::b_sq(n) == rhs
    });
    (ok, format!("n = 1..{n_max}"))
}

pub fn quick_checks() -> Vec<CheckOutcome> {
    vec![
        timed("sigma_sq and a_sq spot values", spot_values),
        timed("a_sq three-route equality n ≤ 2000", || three_routes_agree(EXACT_RANGE)),
        timed("toll sums vanish n ≤ 2000", || toll_sums_vanish(EXACT_RANGE)),
        timed("mean comparisons closed form vs recurrence n ≤ 2000", || mu_recurrence(EXACT_RANGE)),
        timed("b_sq vs toll second moment n ≤ 300", || b_sq_identity(300)),
        timed("asymptotic residual n = 100000", || asymptotic_residual(ASYMPTOTIC_N)),
    ]
}

pub fn mu_oracle(n_max: u64) -> (bool, String) {
    for n in 0..=n_max {
        match oracles::mu_bruteforce(n) {
            Ok(m) if m == exact::mu(n) => {}
            Ok(m) => return (false, format!("n = {n}: enumeration {m}, closed form {}", exact::mu(n))),
            Err(e) => return (false, e.to_string()),
        }
    }
    (true, format!("n = 0..{n_max}, mu_{n_max} = {}", exact::mu(n_max)))
}

pub fn beta_log_grid() -> (bool, String) {
    let mut worst = 0.0f64;
    for (n, k) in oracles::d_grid() {
        let r = match oracles::d_quadrature(n, k) {
            Ok(r) => r,
            Err(e) => return (false, format!("({n}, {k}): {e}")),
        };
        let target = (exact::harmonic(k - 1) - exact::harmonic(n)).to_f64().expect("finite");
        let diff = (r.value - target).abs();
        worst = worst.max(diff);
        if diff > r.error_estimate.max(1e-9) {
            return (false, format!("({n}, {k}): {} vs {target}", r.value));
        }
    }
    (true, format!("{} pairs, largest deviation {worst:.1e}", oracles::d_grid().len()))
}

pub fn ec2_check() -> (bool, String) {
    match oracles::ec2_quadrature() {
        Ok(r) => {
            let target = exact::sigma_sq().to_f64() / 3.0;
            let diff = (r.value - target).abs();
            (diff < 1e-10, format!("{:.15} vs sigma^2/3, deviation {diff:.1e}", r.value))
        }
        Err(e) => (false, e.to_string()),
    }
}

/// Root-split identity on `pairs` random `(n, seed)` with `n ≤ n_max`.
pub fn root_split_residuals(pairs: u64, n_max: u64, seed: u64) -> (bool, String) {
    let table = MuTable::new(n_max);
    let mut picker = StreamKey::from_seed(seed).split(tag::AUX).counter();
    let master = StreamKey::from_seed(seed);
    let mut worst = 0.0f64;
    for r in 0..pairs {
        let n = 1 + picker.below(n_max);
        worst = worst.max(sim::coupled::verify_ynid_with(n, master.split(r), &table));
    }
    (worst < 1e-12, format!("{pairs} pairs, largest residual {worst:.1e}"))
}

/// Comparison counts of the tree-building simulator against the reference
/// QuickSort on the same keys.
pub fn reference_quicksort(trials: u64, seed: u64) -> (bool, String) {
    let master = StreamKey::from_seed(seed);
    for r in 0..trials {
        let n = 1 + r % 200;
        let stream = master.split(r);
        let mut keys = stream.split(tag::KEYS).counter();
        let keys: Vec<f64> = (0..n).map(|_| keys.next_unit()).collect();
        let (stats, _) = sim::run_quicksort(n, stream);
        if stats.total_comparisons != oracles::quicksort_comparisons(&keys) {
            return (false, format!("mismatch at n = {n}, replication {r}"));
        }
    }
    (true, format!("{trials} runs"))
}

pub fn full_checks(opts: &VerifyOptions) -> Vec<CheckOutcome> {
    let cfg = opts.config();
    let mut out = quick_checks();
    out.push(timed("mean comparisons brute force n ≤ 8", || mu_oracle(8)));
    out.push(timed("beta log-moment quadrature grid", beta_log_grid));
    out.push(timed("E C(U)^2 quadrature", ec2_check));
    out.push(timed("root split identity pathwise residual", || root_split_residuals(1000, 500, opts.seed)));
    out.push(timed("simulator vs reference QuickSort", || reference_quicksort(400, opts.seed)));
    out.push(timed("order-statistic conditional means", || {
        match oracles::beta_mean_check(6, 10_000, &cfg) {
            Ok(reports) => gate_detail(&reports),
            Err(e) => (false, e.to_string()),
        }
    }));
    out.push(timed("mixed toll moment n = 3, 10, 100", || {
        let reports: Result<Vec<_>, _> =
            [3u64, 10, 100].iter().map(|&n| oracles::cnict_check(n, 50_000, &cfg)).collect();
        match reports {
            Ok(r) => gate_detail(&r),
            Err(e) => (false, e.to_string()),
        }
    }));
    out.push(timed("W3 second moment n = 1, 2, 10, 100", || {
        let reports: Result<Vec<_>, _> =
            [1u64, 2, 10, 100].iter().map(|&n| estimate::estimate_w3_sq(n, 100_000, &cfg)).collect();
        match reports {
            Ok(r) => gate_detail(&r),
            Err(e) => (false, e.to_string()),
        }
    }));
    out.push(timed("limit mean and second moment", || {
        match estimate::estimate_y_moments(opts.eps, opts.reps, &cfg) {
            Ok(m) => gate_detail(&[m.mean, m.second]),
            Err(e) => (false, e.to_string()),
        }
    }));
    out.push(timed(&format!("coupled gates n = {}", opts.n), || {
        match CoupledBatch::run(opts.n, opts.eps, opts.reps, &cfg) {
            Ok(batch) => {
                let (passed, detail) = gate_detail(&batch.reports());
                let residual = batch.max_identity_residual();
                (passed && residual < 1e-12, format!("{detail}, identity residual {residual:.1e}"))
            }
            Err(e) => (false, e.to_string()),
        }
    }));
    out.push(timed("level sum second moments j ≤ 10", || {
        match estimate::level_variance_profile(10, 10 * opts.reps.max(1000), &cfg) {
            Ok(r) => gate_detail(&r),
            Err(e) => (false, e.to_string()),
        }
    }));
    out.push(timed("d2 bounds n = 100", || {
        match estimate::estimate_d2(100, opts.eps, opts.d2_samples.max(estimate::MIN_D2_SAMPLES), &cfg) {
            Ok(r) => (r.passed == Some(true), format!("estimate {:.5} ± {:.5}", r.estimate, r.std_error)),
            Err(e) => (false, e.to_string()),
        }
    }));
    out
}

pub fn run(level: Level, opts: &VerifyOptions) -> Vec<CheckOutcome> {
    match level {
        Level::Quick => quick_checks(),
        Level::Full => full_checks(opts),
    }
}
