//! The limiting toll `C(x) = 1 + 2x ln x + 2(1−x) ln(1−x)`.

/// `x ln x`, continuously extended by `0` at `x = 0`.
#[inline]
pub fn xlogx(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// `C(x)` for `x ∈ [0, 1]`; the endpoints take the limit value `1`.
///
/// # Panics
/// If `x` lies outside `[0, 1]` (or is NaN).
#[inline]
pub fn c_of(x: f64) -> f64 {
    assert!((0.0..=1.0).contains(&x), "C(x) needs 0 <= x <= 1, got {x}");
    1.0 + 2.0 * xlogx(x) + 2.0 * xlogx(1.0 - x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_and_quarter() {
        assert!((c_of(0.5) - (1.0 - 2.0 * std::f64::consts::LN_2)).abs() < 1e-15);
        assert!((c_of(0.5) + 0.386_294).abs() < 1e-6);
        let quarter = 1.0 + 0.5 * 0.25f64.ln() + 1.5 * 0.75f64.ln();
        assert!((c_of(0.25) - quarter).abs() < 1e-15);
        assert!((c_of(0.25) + 0.124_670).abs() < 1e-6);
    }

    #[test]
    fn endpoints_take_limit_value() {
        assert_eq!(c_of(0.0), 1.0);
        assert_eq!(c_of(1.0), 1.0);
        assert!((c_of(1e-300) - 1.0).abs() < 1e-290);
    }

    #[test]
    fn symmetric_about_half() {
        for x in [0.01, 0.1, 0.3, 0.45] {
            assert!((c_of(x) - c_of(1.0 - x)).abs() < 1e-14);
        }
    }

    #[test]
    #[should_panic(expected = "0 <= x <= 1")]
    fn rejects_values_outside_unit_interval() {
        c_of(1.5);
    }

    #[test]
    #[should_panic(expected = "0 <= x <= 1")]
    fn rejects_nan() {
        c_of(f64::NAN);
    }
}
