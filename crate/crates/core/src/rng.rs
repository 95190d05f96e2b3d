//! Self-contained xoshiro256** generator.
//!
//! The benchmark generators must reproduce identical streams from a 64-bit
//! seed across implementations, so the algorithm is pinned here rather than
//! delegated to a library: state is seeded with splitmix64 (constants
//! 0x9e3779b97f4a7c15, 0xbf58476d1ce4e5b9, 0x94d049bb133111eb) and advanced
//! with the xoshiro256** update (result = rotl(s1 * 5, 7) * 9).

#[derive(Debug, Clone)]
pub struct Xoshiro256 {
    s: [u64; 4],
}

impl Xoshiro256 {
    pub fn seed_from_u64(seed: u64) -> Xoshiro256 {
        let mut sm = seed;
        let mut s = [0u64; 4];
        for slot in &mut s {
            *slot = splitmix64(&mut sm);
        }
        Xoshiro256 { s }
    }

    pub fn next_u64(&mut self) -> u64 {
        let result = self.s[1].wrapping_mul(5).rotate_left(7).wrapping_mul(9);
        let t = self.s[1] << 17;
        self.s[2] ^= self.s[0];
        self.s[3] ^= self.s[1];
        self.s[1] ^= self.s[2];
        self.s[0] ^= self.s[3];
        self.s[2] ^= t;
        self.s[3] = self.s[3].rotate_left(45);
        result
    }

    /// Uniform draw from `0..bound` by modulo reduction. The bias is below
    /// 2^-32 for any bound this crate uses.
    pub fn below(&mut self, bound: u64) -> u64 {
        debug_assert!(bound > 0);
        self.next_u64() % bound
    }

    pub fn bool(&mut self) -> bool {
        self.next_u64() & 1 == 1
    }

    /// Draws `k` distinct values from `0..n` by a partial Fisher-Yates
    /// shuffle; order of the result is part of the pinned stream.
    pub fn sample_distinct(&mut self, n: u64, k: usize) -> Vec<u64> {
        debug_assert!(k as u64 <= n);
        let mut pool: Vec<u64> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below(n - i as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}

fn splitmix64(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_stream_is_stable() {
        // First outputs for seed 0, frozen so accidental algorithm changes
        // are caught immediately.
        let mut rng = Xoshiro256::seed_from_u64(0);
        let got: Vec<u64> = (0..4).map(|_| rng.next_u64()).collect();
        assert_eq!(
            got,
            vec![
                11091344671253066420,
                13793997310169335082,
                1900383378846508768,
                7684712102626143532,
            ]
        );
    }

    #[test]
    fn sample_distinct_draws_unique_values() {
        let mut rng = Xoshiro256::seed_from_u64(42);
        let mut got = rng.sample_distinct(10, 6);
        got.sort_unstable();
        got.dedup();
        assert_eq!(got.len(), 6);
        assert!(got.iter().all(|&v| v < 10));
    }
}
