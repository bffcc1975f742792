//! Deterministic pseudo-random draws for seeded checks and reports.
//!
//! All randomized checks in this crate (combination draws, seeded
//! polynomials, seeded test functions) use this one generator so that runs
//! with the same seed are bit-reproducible across platforms. The generator
//! is the 64-bit linear congruential generator
//!
//! ```text
//! state <- state * 6364136223846793005 + 1442695040888963407   (mod 2^64)
//! ```
//!
//! (Knuth's MMIX multiplier and increment), with outputs taken from the
//! high 32 bits of the state, where the LCG is strongest.

/// Default seed for all reports and seeded suites.
pub const DEFAULT_SEED: u64 = 0x5EED;

const MULTIPLIER: u64 = 6364136223846793005;
const INCREMENT: u64 = 1442695040888963407;

/// 64-bit linear congruential generator.
#[derive(Debug, Clone)]
pub struct Lcg {
    state: u64,
}

impl Lcg {
    pub fn new(seed: u64) -> Self {
        // Mix the seed once so that small seeds do not start in the
        // low-entropy region of the state space.
        let mut lcg = Lcg {
            state: seed.wrapping_add(INCREMENT),
        };
        lcg.step();
        lcg
    }

    fn step(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(MULTIPLIER)
            .wrapping_add(INCREMENT);
        self.state
    }

    /// Next 32 high bits as a `u32`.
    pub fn next_u32(&mut self) -> u32 {
        (self.step() >> 32) as u32
    }

    /// Uniform draw from `[0, 1)` with 32 bits of resolution.
    pub fn next_f64(&mut self) -> f64 {
        f64::from(self.next_u32()) / f64::from(u32::MAX) * (1.0 - 1e-9)
    }

    /// Uniform draw from `[lo, hi)`.
    pub fn range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform integer in `[0, n)`. `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        debug_assert!(n > 0);
        // Modulo bias is irrelevant at the small ranges used here.
        u64::from(self.next_u32()) % n
    }

    /// Uniform integer in `[lo, hi]` inclusive.
    pub fn range_u64(&mut self, lo: u64, hi: u64) -> u64 {
        lo + self.below(hi - lo + 1)
    }

    /// Pick one element of a nonempty slice.
    pub fn choose<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u64) as usize]
    }

    /// Nonzero integer in `[-bound, bound]`.
    pub fn nonzero_int(&mut self, bound: i64) -> i64 {
        loop {
            let v = self.range_u64(0, (2 * bound) as u64) as i64 - bound;
            if v != 0 {
                return v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_stream() {
        let mut a = Lcg::new(DEFAULT_SEED);
        let mut b = Lcg::new(DEFAULT_SEED);
        for _ in 0..1000 {
            assert_eq!(a.next_u32(), b.next_u32());
        }
    }

    #[test]
    fn unit_draws_stay_in_range() {
        let mut rng = Lcg::new(7);
        for _ in 0..10_000 {
            let x = rng.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }

    #[test]
    fn nonzero_int_never_zero() {
        let mut rng = Lcg::new(3);
        for _ in 0..1000 {
            let v = rng.nonzero_int(4);
            assert!(v != 0 && v.abs() <= 4);
        }
    }
}
