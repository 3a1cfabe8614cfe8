//! Counter-based random streams.
//!
//! Every random quantity is a pure function of `(master seed, path)`: a
//! replication index, a purpose tag, a node label, or a counter. Nothing
//! depends on the order in which work is executed, so results are
//! bit-identical for any worker count.
//!
//! The mixing function is the SplitMix64 finalizer; a stream that walks a
//! counter through it is exactly SplitMix64.

const GOLDEN_GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;
const LEFT_TAG: u64 = 0x3c6e_f372_fe94_f82b;
const RIGHT_TAG: u64 = 0xa54f_f53a_5f1d_36f1;

#[inline(always)]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Map 64 random bits to the open interval (0, 1).
#[inline(always)]
pub fn unit_from_bits(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}

/// Purpose tags that separate independent sub-streams of one replication.
pub mod tag {
    pub const KEYS: u64 = 1;
    pub const LABELS: u64 = 2;
    pub const AUX: u64 = 3;
    pub const LIMIT_ONLY: u64 = 4;
}

/// Identifier of an independent random stream.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct StreamKey(u64);

impl StreamKey {
    pub fn from_seed(seed: u64) -> Self {
        Self(mix64(seed ^ 0x5eed_5eed_5eed_5eed))
    }

    /// Independent child stream number `index`.
    #[inline]
    pub fn split(self, index: u64) -> Self {
        Self(mix64(self.0 ^ mix64(index.wrapping_mul(GOLDEN_GAMMA).wrapping_add(GOLDEN_GAMMA))))
    }

    /// Key of the left (`right == false`) or right child in a label tree.
    #[inline(always)]
    pub fn child(self, right: bool) -> Self {
        Self(mix64(self.0 ^ if right { RIGHT_TAG } else { LEFT_TAG }))
    }

    /// The single uniform attached to this key.
    #[inline(always)]
    pub fn unit(self) -> f64 {
        unit_from_bits(self.0)
    }

    pub fn counter(self) -> CounterRng {
        CounterRng { key: self.0, counter: 0 }
    }

    pub fn raw(self) -> u64 {
        self.0
    }
}

/// Sequential draws `mix(key + i·γ)`, `i = 1, 2, …`.
#[derive(Clone, Debug)]
pub struct CounterRng {
    key: u64,
    counter: u64,
}

impl CounterRng {
    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.counter = self.counter.wrapping_add(1);
        mix64(self.key.wrapping_add(self.counter.wrapping_mul(GOLDEN_GAMMA)))
    }

    /// Uniform on (0, 1).
    #[inline]
    pub fn next_unit(&mut self) -> f64 {
        unit_from_bits(self.next_u64())
    }

    /// Uniform on `{0, …, bound − 1}` (Lemire's multiply-shift with rejection).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0);
        let threshold = bound.wrapping_neg() % bound;
        loop {
            let wide = (self.next_u64() as u128) * (bound as u128);
            if (wide as u64) >= threshold {
                return (wide >> 64) as u64;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn units_lie_strictly_inside_unit_interval() {
        assert!(unit_from_bits(0) > 0.0);
        assert!(unit_from_bits(u64::MAX) < 1.0);
    }

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let root = StreamKey::from_seed(42);
        assert_eq!(root.split(7), StreamKey::from_seed(42).split(7));
        assert_ne!(root.split(7), root.split(8));
        assert_ne!(root.child(false), root.child(true));
        let a: Vec<u64> = {
            let mut r = root.counter();
            (0..5).map(|_| r.next_u64()).collect()
        };
        let b: Vec<u64> = {
            let mut r = root.counter();
            (0..5).map(|_| r.next_u64()).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn uniform_moments_are_plausible() {
        let mut r = StreamKey::from_seed(1).counter();
        let m = 200_000;
        let (mut s1, mut s2) = (0.0, 0.0);
        for _ in 0..m {
            let u = r.next_unit();
            s1 += u;
            s2 += u * u;
        }
        assert!((s1 / m as f64 - 0.5).abs() < 4.0 * (1.0 / 12.0f64 / m as f64).sqrt());
        assert!((s2 / m as f64 - 1.0 / 3.0).abs() < 0.003);
    }

    #[test]
    fn below_is_in_range_and_roughly_uniform() {
        let mut r = StreamKey::from_seed(9).counter();
        let mut counts = [0u32; 7];
        for _ in 0..70_000 {
            counts[r.below(7) as usize] += 1;
        }
        for c in counts {
            assert!((c as i64 - 10_000).abs() < 500, "{counts:?}");
        }
    }
}
