use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};

use super::Rational;

/// `Σ_{j=lo..=hi} j^(−power)` as an (unreduced-at-the-leaves) fraction.
///
/// Binary splitting keeps operand sizes balanced, so a single H_n for n in
/// the hundreds of thousands costs a handful of large multiplications and
/// gcds instead of n gcds on ever-growing denominators.
fn power_sum(lo: u64, hi: u64, power: u32) -> (BigInt, BigInt) {
    if hi - lo < 32 {
        let mut p = BigInt::zero();
        let mut q = BigInt::one();
        for j in lo..=hi {
            let d: BigInt = Pow::pow(BigInt::from(j), power);
            p = p * &d + &q;
            q *= d;
        }
        let g = p.gcd(&q);
        return (p / &g, q / g);
    }
    let mid = lo + (hi - lo) / 2;
    let (p1, q1) = power_sum(lo, mid, power);
    let (p2, q2) = power_sum(mid + 1, hi, power);
    let p = &p1 * &q2 + &p2 * &q1;
    let q = q1 * q2;
    let g = p.gcd(&q);
    (p / &g, q / g)
}

pub(crate) fn generalized_harmonic(n: u64, power: u32) -> Rational {
    if n == 0 {
        return Rational::zero();
    }
    let (p, q) = power_sum(1, n, power);
    Rational::new(p, q)
}

/// Consecutive harmonic numbers `H_j` and `H_j^(2)` for `j` in `first..=last`.
#[derive(Clone, Debug)]
pub struct HarmonicTable {
    first: u64,
    h1: Vec<Rational>,
    h2: Vec<Rational>,
}

impl HarmonicTable {
    /// Table for `0..=last`.
    pub fn new(last: u64) -> Self {
        Self::range(0, last)
    }

    /// Table for `first..=last`; the first entry is computed by binary
    /// splitting and the rest incrementally.
    pub fn range(first: u64, last: u64) -> Self {
        assert!(first <= last, "empty harmonic range {first}..={last}");
        let len = (last - first + 1) as usize;
        let mut h1 = Vec::with_capacity(len);
        let mut h2 = Vec::with_capacity(len);
        h1.push(generalized_harmonic(first, 1));
        h2.push(generalized_harmonic(first, 2));
        for j in first + 1..=last {
            let inv = Rational::new(BigInt::one(), BigInt::from(j));
            let next1 = h1.last().unwrap() + &inv;
            let next2 = h2.last().unwrap() + &inv * &inv;
            h1.push(next1);
            h2.push(next2);
        }
        Self { first, h1, h2 }
    }

    pub fn first(&self) -> u64 {
        self.first
    }

    pub fn last(&self) -> u64 {
        self.first + self.h1.len() as u64 - 1
    }

    fn index(&self, n: u64) -> usize {
        assert!(
            n >= self.first && n <= self.last(),
            "n = {n} outside table {}..={}",
            self.first,
            self.last()
        );
        (n - self.first) as usize
    }

    pub fn h1(&self, n: u64) -> &Rational {
        &self.h1[self.index(n)]
    }

    pub fn h2(&self, n: u64) -> &Rational {
        &self.h2[self.index(n)]
    }
}
