/// Kahan–Babuška–Neumaier running sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().collect::<NeumaierSum>().value()
}

/// Mean, unbiased variance and standard error of a sample.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SampleSummary {
    pub count: usize,
    pub mean: f64,
    pub variance: f64,
    pub std_error: f64,
}

/// Two-pass summary with compensated sums in both passes.
///
/// # Panics
/// With fewer than two values.
pub fn summarize(values: &[f64]) -> SampleSummary {
    assert!(values.len() >= 2, "a standard error needs at least two values");
    let count = values.len();
    let mean = compensated_sum(values.iter().copied()) / count as f64;
    let ss = compensated_sum(values.iter().map(|&x| (x - mean) * (x - mean)));
    let variance = ss / (count - 1) as f64;
    SampleSummary { count, mean, variance, std_error: (variance / count as f64).sqrt() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;
    use num_traits::{ToPrimitive, Zero};

    #[test]
    fn compensated_sum_matches_exact_sum_of_floats() {
        // Terms of wildly different magnitude where naive summation drifts.
        let mut state = 0x1234_5678_u64;
        let values: Vec<f64> = (0..200_000)
            .map(|i| {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                let u = (state >> 11) as f64 / (1u64 << 53) as f64;
                let scale = [1e8, 1.0, 1e-8][i % 3];
                (u - 0.5) * scale
            })
            .collect();
        let exact = values
            .iter()
            .fold(BigRational::zero(), |acc, &x| acc + BigRational::from_float(x).unwrap())
            .to_f64()
            .unwrap();
        let got = compensated_sum(values.iter().copied());
        assert!(((got - exact) / exact).abs() < 1e-10, "{got} vs {exact}");
    }

    #[test]
    fn summary_of_known_sample() {
        let s = summarize(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(s.mean, 2.5);
        assert!((s.variance - 5.0 / 3.0).abs() < 1e-15);
        assert!((s.std_error - (5.0f64 / 12.0).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn summary_survives_large_offset() {
        let values: Vec<f64> = (0..1000).map(|i| 1e9 + (i % 2) as f64).collect();
        let s = summarize(&values);
        assert!((s.variance - 0.25 * 1000.0 / 999.0).abs() < 1e-9);
    }

    #[test]
    #[should_panic(expected = "at least two")]
    fn summary_needs_two_values() {
        summarize(&[1.0]);
    }
}
