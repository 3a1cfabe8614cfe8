//! Exact closed forms for QuickSort comparison counts and the squared L²
//! distance `a_n² = E(Y_n − Y)²`.
//!
//! Everything here lives in ℚ or in ℚ + ℚ·π² ([`PiQuadratic`]). `a_n²` is
//! reachable three ways that share no algebra beyond the harmonic numbers:
//!
//! * [`a_sq_closed`]: the closed form
//!   `(n+1)⁻¹(2H_n + 1 + 6/(n+1)) − 4(π²/6 − H_n^(2))`;
//! * [`a_sq_recursive`]: `a_n² = 2·E W₁² + E W₃²` with `E W₁²` fed by the
//!   running prefix `Σ (k+1)² a_k²`;
//! * [`a_sq_dnc`]: the solved divide-and-conquer recurrence for
//!   `x_n = (n+1)² a_n²`.

mod harmonic;
mod pi_quadratic;

pub use harmonic::HarmonicTable;
pub use pi_quadratic::{ParsePiQuadraticError, PiQuadratic};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

/// Arbitrary-precision fraction, always kept in lowest terms.
pub type Rational = BigRational;

/// `p/q` as a [`Rational`].
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

fn int(v: u64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `H_n = Σ_{j≤n} 1/j`.
pub fn harmonic(n: u64) -> Rational {
    harmonic::generalized_harmonic(n, 1)
}

/// `H_n^(2) = Σ_{j≤n} 1/j²`.
pub fn harmonic2(n: u64) -> Rational {
    harmonic::generalized_harmonic(n, 2)
}

/// `Σ_{j=1..n} H_j^(2) = (n+1)·H_n^(2) − H_n`.
pub fn sum_harmonic2(n: u64) -> Rational {
    int(n + 1) * harmonic2(n) - harmonic(n)
}

fn mu_from(n: u64, h1: &Rational) -> Rational {
    int(2 * (n + 1)) * h1 - int(4 * n)
}

/// Mean comparison count `μ_n = E K_n = 2(n+1)H_n − 4n`.
pub fn mu(n: u64) -> Rational {
    mu_from(n, &harmonic(n))
}

/// `μ_0, …, μ_n`.
pub fn mu_table(n: u64) -> Vec<Rational> {
    let table = HarmonicTable::new(n);
    (0..=n).map(|k| mu_from(k, table.h1(k))).collect()
}

/// Finite-n toll `C_n(i) = (n − 1 + μ_{i−1} + μ_{n−i} − μ_n)/n`.
///
/// # Panics
/// If `i` is not in `1..=n`.
pub fn c_n(n: u64, i: u64) -> Rational {
    assert!(n >= 1 && (1..=n).contains(&i), "C_n(i) needs 1 <= i <= n, got n = {n}, i = {i}");
    (int(n - 1) + mu(i - 1) + mu(n - i) - mu(n)) / int(n)
}

/// `[C_n(1), …, C_n(n)]`, sharing one table of `μ`.
pub fn c_n_vector(n: u64) -> Vec<Rational> {
    assert!(n >= 1, "C_n needs n >= 1");
    let mus = mu_table(n);
    let mu_n = &mus[n as usize];
    let inv_n = rat(1, n as i64);
    (1..=n)
        .map(|i| {
            (int(n - 1) + &mus[(i - 1) as usize] + &mus[(n - i) as usize] - mu_n) * &inv_n
        })
        .collect()
}

/// `σ² = E Y² = 7 − (2/3)π²`.
pub fn sigma_sq() -> PiQuadratic {
    PiQuadratic::new(int(7), rat(-2, 3))
}

/// `E W₁² = Σ_{k<n}(k+1)² a_k² / (n(n+1)²) + σ²/(6(n+1))`, given the prefix sum.
///
/// # Panics
/// If `n == 0`.
pub fn ew1_sq(n: u64, prefix: &PiQuadratic) -> PiQuadratic {
    assert!(n >= 1, "E W1^2 is defined for n >= 1");
    let n1 = n + 1;
    prefix.scale(&Rational::new(BigInt::one(), BigInt::from(n) * BigInt::from(n1).pow(2)))
        + sigma_sq().scale(&rat(1, 6 * n1 as i64))
}

fn b_sq_from(n: u64, h1: &Rational, h2: &Rational) -> PiQuadratic {
    let n1 = n + 1;
    // (σ² − 7)/3 has no rational part.
    let mut rational = Rational::new(BigInt::from(4 * (n + 2)), BigInt::from(3 * n1)) * h2;
    rational += h1 * Rational::new(BigInt::from(4), BigInt::from(3 * n) * BigInt::from(n1).pow(2));
    PiQuadratic::new(rational, rat(-2, 9))
}

/// `b_n² = E W₃² = (σ²−7)/3 + (4/3)((n+2)/(n+1))H_n^(2) + 4H_n/(3n(n+1)²)`.
///
/// # Panics
/// If `n == 0`.
pub fn b_sq(n: u64) -> PiQuadratic {
    assert!(n >= 1, "b_n^2 is defined for n >= 1");
    b_sq_from(n, &harmonic(n), &harmonic2(n))
}

/// `b_n²` for every `n ≥ 1` in a harmonic table; `None` at `n = 0`.
pub fn b_sq_table(table: &HarmonicTable) -> Vec<Option<PiQuadratic>> {
    (table.first()..=table.last())
        .map(|n| (n >= 1).then(|| b_sq_from(n, table.h1(n), table.h2(n))))
        .collect()
}

/// `μ_n` for every `n` in a harmonic table.
pub fn mu_from_table(table: &HarmonicTable) -> Vec<Rational> {
    (table.first()..=table.last()).map(|n| mu_from(n, table.h1(n))).collect()
}

/// `E[C_n(ν₀(n)+1)²]` in closed form:
/// `(7/3)(1+1/n)² − (4/3)(1+2/n)(1+1/n)H_n^(2) − (4/3)n⁻³H_n`.
pub fn cn_second_moment(n: u64) -> Rational {
    assert!(n >= 1, "C_n is defined for n >= 1");
    let one_plus = rat(n as i64 + 1, n as i64);
    let two_plus = rat(n as i64 + 2, n as i64);
    rat(7, 3) * &one_plus * &one_plus
        - rat(4, 3) * two_plus * one_plus * harmonic2(n)
        - Rational::new(BigInt::from(4), BigInt::from(3) * BigInt::from(n).pow(3)) * harmonic(n)
}

fn a_sq_closed_from(n: u64, h1: &Rational, h2: &Rational) -> PiQuadratic {
    let n1 = n + 1;
    let head = (int(2) * h1 + int(1) + rat(6, n1 as i64)) / int(n1);
    PiQuadratic::from_rational(head) - PiQuadratic::zeta2_minus(h2).scale(&int(4))
}

/// `a_n² = ‖Y_n − Y‖₂² = (n+1)⁻¹(2H_n + 1 + 6/(n+1)) − 4(π²/6 − H_n^(2))`.
pub fn a_sq_closed(n: u64) -> PiQuadratic {
    a_sq_closed_from(n, &harmonic(n), &harmonic2(n))
}

/// Closed form for every `n` in a harmonic table.
pub fn a_sq_closed_table(table: &HarmonicTable) -> Vec<PiQuadratic> {
    (table.first()..=table.last())
        .map(|n| a_sq_closed_from(n, table.h1(n), table.h2(n)))
        .collect()
}

/// `(a_0², …, a_{n_max}²)` from `a_n² = 2·E W₁² + E W₃²`, `a_0² = σ²`.
///
/// The prefix `Σ (k+1)² a_k²` is carried along, so the whole table costs
/// `O(n_max)` rational operations.
pub fn a_sq_recursive(n_max: u64) -> Vec<PiQuadratic> {
    let table = HarmonicTable::new(n_max);
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut prefix = sigma_sq();
    out.push(sigma_sq());
    for n in 1..=n_max {
        let a = ew1_sq(n, &prefix).scale(&int(2)) + b_sq_from(n, table.h1(n), table.h2(n));
        prefix += &a.scale(&Rational::from_integer(BigInt::from(n + 1).pow(2)));
        out.push(a);
    }
    out
}

/// Toll `c_k` of the recurrence `x_k = (2/k) Σ_{j<k} x_j + c_k`.
fn dnc_toll(k: u64, h1: &Rational, h2: &Rational) -> PiQuadratic {
    let k1 = int(k + 1);
    let k2 = int(k + 2);
    let sigma_part = sigma_sq().scale(&(rat(1, 3) * &k2 * &k1));
    let mut rational = rat(-7, 3) * &k1 * &k1;
    rational += rat(4, 3) * &k2 * &k1 * h2;
    rational += h1 * rat(4, 3 * k as i64);
    sigma_part + PiQuadratic::from_rational(rational)
}

/// `(a_0², …, a_{n_max}²)` from the solved recurrence
/// `x_n = (n+1)[σ² + Σ_{k=1..n} (k c_k − (k−1)c_{k−1})/(k(k+1))]`.
pub fn a_sq_dnc_table(n_max: u64) -> Vec<PiQuadratic> {
    let table = HarmonicTable::new(n_max);
    let mut out = Vec::with_capacity(n_max as usize + 1);
    let mut bracket = sigma_sq();
    out.push(bracket.clone());
    // (k − 1)·c_{k−1}; zero at k = 1, where c_0 never enters.
    let mut prev_weighted = PiQuadratic::zero();
    for k in 1..=n_max {
        let weighted = dnc_toll(k, table.h1(k), table.h2(k)).scale(&int(k));
        let step = (&weighted - &prev_weighted).scale(&Rational::new(
            BigInt::one(),
            BigInt::from(k) * BigInt::from(k + 1),
        ));
        bracket += &step;
        // a_k² = x_k/(k+1)² = bracket/(k+1)
        out.push(bracket.scale(&rat(1, k as i64 + 1)));
        prev_weighted = weighted;
    }
    out
}

/// `a_n²` through the divide-and-conquer recurrence.
pub fn a_sq_dnc(n: u64) -> PiQuadratic {
    a_sq_dnc_table(n).pop().expect("table holds n + 1 entries")
}
