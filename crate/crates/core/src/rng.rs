//! Seeded random streams.
//!
//! Every random quantity in the crate comes from a ChaCha8 generator keyed by
//! `(seed, purpose, index)`. Work is split into fixed-size blocks, and each
//! block owns its stream. That makes results a pure function of the seed and
//! the problem size, independent of how many threads do the work.
//!
//! Normal variates use the ziggurat transform of `rand_distr::StandardNormal`
//! applied to the ChaCha8 output words.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// Points per independently seeded block.
pub(crate) const BLOCK: usize = 4096;

#[derive(Debug, Clone, Copy)]
#[repr(u64)]
pub(crate) enum Purpose {
    Centers = 1,
    Points = 2,
    Moments = 3,
    Draws = 4,
}

pub(crate) fn stream(seed: u64, purpose: Purpose, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((purpose as u64) << 56) | (index & ((1 << 56) - 1)));
    rng
}

/// Seed for the `index`-th independent sub-experiment of `seed`.
pub(crate) fn child_seed(seed: u64, index: u64) -> u64 {
    stream(seed, Purpose::Draws, index).next_u64()
}

#[inline]
pub(crate) fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Number of blocks covering `count` items.
pub(crate) fn blocks(count: usize) -> usize {
    count.div_ceil(BLOCK)
}

pub(crate) fn block_len(count: usize, block: usize) -> usize {
    (count - block * BLOCK).min(BLOCK)
}
