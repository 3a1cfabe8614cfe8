use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use proptest::prelude::*;

use qsl2_core::estimate::{compensated_sum, CoupledBatch, Execution, McConfig};
use qsl2_core::exact::{self, rat, PiQuadratic};
use qsl2_core::rng::{tag, unit_from_bits, StreamKey};
use qsl2_core::sim::{self, coupled_sample, run_quicksort, verify_ynid};
use qsl2_core::toll::c_of;

fn cheap() -> ProptestConfig {
    ProptestConfig { cases: 32, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(cheap())]

    #[test]
    fn tolls_sum_to_zero(n in 1u64..400) {
        let total = exact::c_n_vector(n).iter().fold(rat(0, 1), |acc, c| acc + c);
        prop_assert!(total.is_zero());
    }

    #[test]
    fn toll_second_moment_is_mean_square(n in 1u64..150) {
        let squares = exact::c_n_vector(n).iter().fold(rat(0, 1), |acc, c| acc + c * c);
        prop_assert_eq!(exact::cn_second_moment(n), squares / rat(n as i64, 1));
    }

    #[test]
    fn sum_of_second_order_harmonics(n in 0u64..250) {
        let direct = (0..=n).fold(rat(0, 1), |acc, j| acc + exact::harmonic2(j));
        prop_assert_eq!(exact::sum_harmonic2(n), direct);
    }

    #[test]
    fn routes_agree_and_pi_part_is_fixed(n in 0u64..300) {
        let closed = exact::a_sq_closed(n);
        prop_assert_eq!(&closed, &exact::a_sq_dnc(n));
        prop_assert_eq!(&closed, &exact::a_sq_recursive(n)[n as usize]);
        prop_assert_eq!(closed.pi2, rat(-2, 3));
    }

    #[test]
    fn a_sq_positive_and_decreasing(n in 2u64..3000) {
        let here = exact::a_sq_closed(n).to_f64();
        let next = exact::a_sq_closed(n + 1).to_f64();
        prop_assert!(next > 0.0 && next < here, "n = {}: {} then {}", n, here, next);
    }

    #[test]
    fn pi_quadratic_text_round_trip(a in any::<i32>(), b in 1i32..i32::MAX, c in any::<i32>(), d in 1i32..i32::MAX) {
        let x = PiQuadratic::new(rat(a as i64, b as i64), rat(c as i64, d as i64));
        let back: PiQuadratic = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }
}

proptest! {
    #[test]
    fn units_are_strictly_inside(bits in any::<u64>()) {
        let u = unit_from_bits(bits);
        prop_assert!(u > 0.0 && u < 1.0);
    }

    #[test]
    fn toll_is_symmetric(x in 0.0f64..=1.0) {
        prop_assert!((c_of(x) - c_of(1.0 - x)).abs() < 1e-15);
    }

    #[test]
    fn compensated_sum_is_accurate(values in prop::collection::vec(-1e6f64..1e6, 2..2000)) {
        let exact = values
            .iter()
            .fold(BigRational::zero(), |acc, &x| acc + BigRational::from_float(x).unwrap());
        let got = compensated_sum(values.iter().copied());
        let err = (BigRational::from_float(got).unwrap() - &exact).abs();
        let scale: f64 = values.iter().map(|x| x.abs()).sum();
        prop_assert!(err.to_f64().unwrap() <= 1e-15 * scale.max(1.0));
    }

    #[test]
    fn child_intervals_partition_parent(n in 1u64..300, seed in any::<u64>()) {
        let (_, tree) = run_quicksort(n, StreamKey::from_seed(seed));
        for node in tree.nodes() {
            let (l0, r0) = node.child_interval(false).unwrap();
            let (l1, r1) = node.child_interval(true).unwrap();
            let parent = node.width();
            let sum = (r0 - l0) + (r1 - l1);
            prop_assert!((sum - parent).abs() <= 4.0 * f64::EPSILON * parent);
            prop_assert!(l0 == node.left_end && r1 == node.right_end && r0 == l1);
        }
    }

    #[test]
    fn new_key_costs_its_depth(n in 1u64..300, seed in any::<u64>()) {
        let stream = StreamKey::from_seed(seed);
        let (before, mut tree) = run_quicksort(n, stream);
        let (after, _) = run_quicksort(n + 1, stream);
        let mut keys = stream.split(tag::KEYS).counter();
        (0..n).for_each(|_| { keys.next_unit(); });
        let key = keys.next_unit();
        let depth = tree.insert(key) as u64;
        prop_assert!(after.total_comparisons >= before.total_comparisons);
        prop_assert_eq!(after.total_comparisons - before.total_comparisons, depth);
    }

    #[test]
    fn root_split_identity_holds(n in 1u64..500, seed in any::<u64>()) {
        prop_assert!(verify_ynid(n, StreamKey::from_seed(seed)) < 1e-12);
    }
}

proptest! {
    #![proptest_config(cheap())]

    #[test]
    fn coupled_samples_are_bit_reproducible(n in 1u64..200, seed in any::<u64>()) {
        let stream = StreamKey::from_seed(seed);
        let a = coupled_sample(n, 1e-3, stream);
        let b = coupled_sample(n, 1e-3, stream);
        prop_assert_eq!(a.y_limit.to_bits(), b.y_limit.to_bits());
        prop_assert_eq!(a, b);
        prop_assert!(a.decomposition_residual().abs() < 1e-12);
    }

    #[test]
    fn reports_ignore_worker_count(seed in any::<u64>(), workers in 2usize..6) {
        let seq = McConfig { seed, execution: Execution::Sequential, ..McConfig::default() };
        let par = McConfig { seed, execution: Execution::ParallelWith(workers), ..McConfig::default() };
        let a = CoupledBatch::run(12, 1e-2, 200, &seq).unwrap().reports();
        let b = CoupledBatch::run(12, 1e-2, 200, &par).unwrap().reports();
        prop_assert_eq!(a, b);
    }
}

#[test]
fn nested_prunings_differ_by_at_most_the_tail_bound() {
    let sigma2 = exact::sigma_sq().to_f64();
    let widths = [2f64.powi(-4), 2f64.powi(-8), 2f64.powi(-12)];
    let reps = 20_000u64;
    let master = StreamKey::from_seed(77);
    let samples: Vec<Vec<f64>> = (0..reps)
        .map(|r| widths.iter().map(|&e| sim::sample_limit(master.split(r), e)).collect())
        .collect();
    for k in 0..widths.len() - 1 {
        let diffs: Vec<f64> = samples.iter().map(|s| s[k] - s[k + 1]).collect();
        let var = qsl2_core::estimate::summarize(&diffs).variance;
        assert!(var <= sigma2 * widths[k], "eps {}: variance {var} above {}", widths[k], sigma2 * widths[k]);
    }
}
