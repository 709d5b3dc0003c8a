//! Seed plumbing. Every random draw in the crate comes from a ChaCha stream
//! derived from `(seed, tag, index)`, so results do not depend on execution
//! order or thread count.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

/// SplitMix64 finalizer.
fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Child seed for the `index`-th item of the stream labelled `tag`.
pub fn derive_seed(seed: u64, tag: u64, index: u64) -> u64 {
    mix(mix(seed ^ mix(tag)).wrapping_add(index))
}

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Generator for `(seed, tag, index)`.
pub fn stream(seed: u64, tag: u64, index: u64) -> Rng {
    rng_from_seed(derive_seed(seed, tag, index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng as _;

    #[test]
    fn streams_are_reproducible_and_distinct() {
        let a: u64 = stream(7, 1, 0).random();
        let b: u64 = stream(7, 1, 0).random();
        let c: u64 = stream(7, 1, 1).random();
        let d: u64 = stream(7, 2, 0).random();
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }
}
