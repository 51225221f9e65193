//! Deterministic, platform-independent pseudo-randomness.
//!
//! Everything seeded in this crate goes through splitmix64 (Vigna's mixer,
//! the one used to seed xoshiro generators). It is pure 64-bit integer
//! arithmetic, so the same seed yields bit-identical streams on every
//! platform, and because each draw is keyed by its index rather than by
//! generator state, draws are order-independent.

/// The splitmix64 stream increment (odd, 2^64 / golden ratio).
pub const GAMMA: u64 = 0x9e37_79b9_7f4a_7c15;

/// The splitmix64 output mixer.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// The `index`-th output of the splitmix64 stream seeded with `seed`.
///
/// Equals `mix(seed + (index + 1) * GAMMA)`, so any element of the stream
/// can be computed without the ones before it.
pub fn stream(seed: u64, index: u64) -> u64 {
    splitmix64(seed.wrapping_add(index.wrapping_add(1).wrapping_mul(GAMMA)))
}

/// Derives an independent child seed from `(master, a, b)`.
///
/// Used for per-level, per-block inner tournaments so that every level of an
/// experiment is reproducible in isolation.
pub fn derive_seed(master: u64, a: u64, b: u64) -> u64 {
    stream(stream(master, a), b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stream_is_order_independent() {
        let fwd: Vec<u64> = (0..8).map(|i| stream(42, i)).collect();
        let rev: Vec<u64> = (0..8).rev().map(|i| stream(42, i)).collect();
        assert_eq!(fwd, rev.into_iter().rev().collect::<Vec<_>>());
    }

    #[test]
    fn splitmix64_reference_values() {
        // First three outputs of the splitmix64 stream for seed 1234567,
        // cross-checked against Vigna's reference C implementation.
        assert_eq!(stream(1234567, 0), 0x599e_d017_fb08_fc85);
        assert_eq!(stream(1234567, 1), 0x2c73_f084_5854_0fa5);
        assert_eq!(stream(1234567, 2), 0x883e_bce5_a3f2_7c77);
    }

    #[test]
    fn derived_seeds_differ_per_coordinate() {
        let s = derive_seed(7, 0, 0);
        assert_ne!(s, derive_seed(7, 0, 1));
        assert_ne!(s, derive_seed(7, 1, 0));
        assert_eq!(s, derive_seed(7, 0, 0));
    }
}
