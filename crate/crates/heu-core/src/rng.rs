//! Deterministic pseudo-random instance generation (splitmix64).
//!
//! Hand-rolled so that harness output is byte-identical across platforms
//! and toolchain versions; seeds are fixed by the callers.

use crate::act::Act;
use crate::measure::Measure;
use crate::rational::Rational;

pub(crate) struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next() % bound
    }

    /// Nonnegative rational with numerator in `0..=max_num` and
    /// denominator in `1..=max_den`.
    pub fn rational(&mut self, max_num: u64, max_den: u64) -> Rational {
        let num = self.below(max_num + 1) as i64;
        let den = (self.below(max_den) + 1) as i64;
        Rational::ratio(num, den)
    }

    pub fn act(&mut self, n: usize, max_num: u64, max_den: u64) -> Act {
        Act::new((0..n).map(|_| self.rational(max_num, max_den)).collect())
            .expect("generated payoffs are nonnegative")
    }

    /// Full-support measure: integer weights in `1..=max_weight`,
    /// normalized by their sum.
    pub fn full_support_measure(&mut self, n: usize, max_weight: u64) -> Measure {
        let raw: Vec<i64> = (0..n)
            .map(|_| (self.below(max_weight) + 1) as i64)
            .collect();
        let total: i64 = raw.iter().sum();
        Measure::new(raw.into_iter().map(|k| Rational::ratio(k, total)).collect())
            .expect("positive weights normalized by their sum")
    }
}
