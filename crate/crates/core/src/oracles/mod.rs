//! Brute-force and quadrature checks that reach the closed forms by
//! different roads: permutation enumeration for `μ_n`, numerical
//! integration for the log-moments of Beta laws and for `E C(U)²`, and
//! order-statistic sampling for the mixed moment `E[C_n(ν₀+1)·C(U)]`.

pub mod quadrature;

pub use quadrature::QuadratureResult;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};
use crate::estimate::{summarize, EstimateReport, McConfig, GATE_SIGMAS};
use crate::exact::{self, rat, Rational};
use crate::rng::{tag, CounterRng, StreamKey};

pub const MU_BRUTEFORCE_MAX: u64 = 9;
pub const D_QUADRATURE_MAX: u64 = 40;
pub const CNICT_MAX: u64 = 200;

/// Comparisons used by textbook QuickSort with first-element pivots.
/// Keys must be distinct.
pub fn quicksort_comparisons<T: PartialOrd + Copy>(keys: &[T]) -> u64 {
    let mut total = 0u64;
    let mut stack = vec![keys.to_vec()];
    while let Some(list) = stack.pop() {
        if list.len() < 2 {
            continue;
        }
        let pivot = list[0];
        let mut less = Vec::new();
        let mut greater = Vec::new();
        for &x in &list[1..] {
            total += 1;
            if x < pivot {
                less.push(x);
            } else {
                greater.push(x);
            }
        }
        stack.push(less);
        stack.push(greater);
    }
    total
}

/// Rearranges `p` into the next permutation in lexicographic order.
fn next_permutation(p: &mut [u8]) -> bool {
    let Some(i) = p.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = p.iter().rposition(|&x| x > p[i]).expect("successor exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

/// `E K_n` as the average comparison count over all `n!` rank orders.
pub fn mu_bruteforce(n: u64) -> Result<Rational> {
    if n > MU_BRUTEFORCE_MAX {
        return Err(Error::ResourceRefusal(format!(
            "enumerating {n}! orders is refused (limit n <= {MU_BRUTEFORCE_MAX})"
        )));
    }
    let mut perm: Vec<u8> = (0..n as u8).collect();
    let mut total = 0u64;
    let mut count = 0u64;
    loop {
        total += quicksort_comparisons(&perm);
        count += 1;
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(rat(total as i64, count as i64))
}

fn factorial(n: u64) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `1/B(k, n−k+1) = n!/((k−1)!(n−k)!)`.
fn beta_normalizer(n: u64, k: u64) -> f64 {
    (factorial(n) / (factorial(k - 1) * factorial(n - k))).to_f64().expect("fits a double")
}

/// `D(n, k) = B(k, n−k+1)⁻¹ ∫_0^1 t^{k−1}(1−t)^{n−k} ln t dt`, the mean log
/// of the `k`-th smallest of `n` uniforms, by quadrature.
pub fn d_quadrature(n: u64, k: u64) -> Result<QuadratureResult> {
    if !(1..=n).contains(&k) || n > D_QUADRATURE_MAX {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= k <= n <= {D_QUADRATURE_MAX}, got n = {n}, k = {k}"
        )));
    }
    let norm = beta_normalizer(n, k);
    let (a, b) = ((k - 1) as i32, (n - k) as i32);
    quadrature::integrate_unit_log_ends(|t, s| norm * t.powi(a) * s.powi(b) * t.ln(), true, false)
}

/// `H_{k−1} − H_n` in floating point, summed independently of the exact
/// harmonic routines.
pub fn d_closed_form(n: u64, k: u64) -> f64 {
    -(k..=n).map(|j| 1.0 / j as f64).sum::<f64>()
}

/// `(n, k)` pairs checked by the quadrature grid: `k = 1`, `⌈n/2⌉` and `n`.
pub fn d_grid() -> Vec<(u64, u64)> {
    let mut grid = Vec::new();
    for n in [1u64, 2, 5, 10, 20, 40] {
        for k in [1, n.div_ceil(2), n] {
            if !grid.contains(&(n, k)) {
                grid.push((n, k));
            }
        }
    }
    grid
}

fn c_pair(t: f64, s: f64) -> f64 {
    let xl = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
    1.0 + 2.0 * xl(t) + 2.0 * xl(s)
}

/// `∫_0^1 C(t)² dt`.
pub fn ec2_quadrature() -> Result<QuadratureResult> {
    quadrature::integrate_unit_log_ends(|t, s| c_pair(t, s).powi(2), true, true)
}

/// `(∫_0^{1/2} C², ∫_{1/2}^1 C²)`.
pub fn ec2_halves() -> Result<(QuadratureResult, QuadratureResult)> {
    let f = |t: f64, s: f64| c_pair(t, s).powi(2);
    let lower = quadrature::integrate_log_ends(f, 0.0, 0.5, true, false)?;
    let upper = quadrature::integrate_log_ends(f, 0.5, 1.0, false, true)?;
    Ok((lower, upper))
}

/// Split count `ν₀` uniform on `{0, …, n−1}` and the `(ν₀+1)`-th smallest
/// of `n` fresh uniforms, which is `Beta(ν₀+1, n−ν₀)`.
fn split_and_pivot(n: u64, rng: &mut CounterRng, buf: &mut Vec<f64>) -> (u64, f64) {
    let nu0 = rng.below(n);
    buf.clear();
    buf.extend((0..n).map(|_| rng.next_unit()));
    let (_, u, _) = buf.select_nth_unstable_by(nu0 as usize, f64::total_cmp);
    (nu0, *u)
}

/// Monte Carlo `E[C_n(ν₀+1)·C(U)]` against `(n/(n+1))·E[C_n(ν₀+1)²]`.
pub fn cnict_check(n: u64, reps: u64, cfg: &McConfig) -> Result<EstimateReport> {
    if !(1..=CNICT_MAX).contains(&n) || reps < 2 {
        return Err(Error::InvalidParameter(format!(
            "need 1 <= n <= {CNICT_MAX} and at least two replications, got n = {n}, R = {reps}"
        )));
    }
    let tolls: Vec<f64> = exact::c_n_vector(n).iter().map(|c| c.to_f64().expect("finite")).collect();
    let master = StreamKey::from_seed(cfg.seed);
    let values = cfg.execution.map(reps, |r| {
        let mut rng = master.split(r).split(tag::AUX).counter();
        let (nu0, u) = split_and_pivot(n, &mut rng, &mut Vec::with_capacity(n as usize));
        tolls[nu0 as usize] * c_pair(u, 1.0 - u)
    });
    let target = (rat(n as i64, n as i64 + 1) * exact::cn_second_moment(n)).to_f64().expect("finite");
    Ok(EstimateReport::from_summary("cn_times_c_of_u", &summarize(&values), cfg.seed)
        .with_n(n)
        .with_target(target, 0.0, GATE_SIGMAS))
}

/// For each `j < n`, the mean of the order-statistic pivot given `ν₀ = j`
/// against `(j+1)/(n+1)`. Replication `r` is assigned to `j = r mod n`.
pub fn beta_mean_check(n: u64, reps_per_split: u64, cfg: &McConfig) -> Result<Vec<EstimateReport>> {
    if n == 0 || reps_per_split < 2 {
        return Err(Error::InvalidParameter("need n >= 1 and at least two replications per split".into()));
    }
    let master = StreamKey::from_seed(cfg.seed);
    let draws = cfg.execution.map(n * reps_per_split, |r| {
        let mut rng = master.split(r).split(tag::AUX).counter();
        let mut buf: Vec<f64> = (0..n).map(|_| rng.next_unit()).collect();
        let j = (r % n) as usize;
        *buf.select_nth_unstable_by(j, f64::total_cmp).1
    });
    Ok((0..n)
        .map(|j| {
            let group: Vec<f64> = draws.iter().skip(j as usize).step_by(n as usize).copied().collect();
            EstimateReport::from_summary(format!("pivot_mean_given_split_{j}"), &summarize(&group), cfg.seed)
                .with_n(n)
                .with_target((j + 1) as f64 / (n + 1) as f64, 0.0, GATE_SIGMAS)
        })
        .collect())
}
