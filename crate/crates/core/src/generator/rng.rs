use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

/// Deterministic generator stream: ChaCha8 seeded through `seed_from_u64`,
/// with unbiased bounded integers by rejection sampling.
///
/// Every draw consumes whole 64-bit words, so a given seed yields the same
/// sequence on every platform.
#[derive(Debug, Clone)]
pub struct GenRng(ChaCha8Rng);

impl GenRng {
    pub fn new(seed: u64) -> Self {
        GenRng(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform integer in the closed range `[lo, hi]`; `lo <= hi`.
    pub fn uniform(&mut self, lo: u64, hi: u64) -> u64 {
        assert!(lo <= hi, "empty range [{lo}, {hi}]");
        let range = (hi - lo).wrapping_add(1);
        if range == 0 {
            return self.next_u64();
        }
        // Values below `threshold` would bias the low residues.
        let threshold = range.wrapping_neg() % range;
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return lo + x % range;
            }
        }
    }

    /// Uniform index in `0..len`; `len > 0`.
    pub fn index(&mut self, len: usize) -> usize {
        self.uniform(0, len as u64 - 1) as usize
    }

    /// True with probability `num / den`.
    pub fn chance(&mut self, num: u64, den: u64) -> bool {
        self.uniform(0, den - 1) < num
    }

    /// `k` distinct values of `1..=n`, ascending (partial Fisher-Yates).
    pub fn subset(&mut self, n: u32, k: usize) -> Vec<u32> {
        let mut pool: Vec<u32> = (1..=n).collect();
        for i in 0..k {
            let j = i + self.index(pool.len() - i);
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool.sort_unstable();
        pool
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_stays_in_range() {
        let mut rng = GenRng::new(3);
        for _ in 0..10_000 {
            let x = rng.uniform(2, 6);
            assert!((2..=6).contains(&x));
        }
        assert_eq!(rng.uniform(9, 9), 9);
    }

    #[test]
    fn uniform_hits_every_value() {
        let mut rng = GenRng::new(11);
        let mut seen = [false; 10];
        for _ in 0..1000 {
            seen[rng.uniform(1, 10) as usize - 1] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }

    #[test]
    fn subset_is_sorted_and_distinct() {
        let mut rng = GenRng::new(5);
        for k in 0..=8 {
            let s = rng.subset(8, k);
            assert_eq!(s.len(), k);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert!(s.iter().all(|&v| (1..=8).contains(&v)));
        }
    }

    #[test]
    fn same_seed_same_stream() {
        let mut a = GenRng::new(42);
        let mut b = GenRng::new(42);
        for _ in 0..100 {
            assert_eq!(a.uniform(0, 1000), b.uniform(0, 1000));
        }
    }
}
