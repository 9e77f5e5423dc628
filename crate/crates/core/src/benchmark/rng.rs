//! Counter-based random streams.
//!
//! Trial `t` of sweep point `i` under master seed `s` draws from
//! `Pcg64Mcg::seed_from_u64(trial_seed(s, i, t))`, where `trial_seed` chains
//! the SplitMix64 finalizer over the three integers. Each stream depends only
//! on its own coordinates, so trials can run in any order on any thread.

use rand::distr::{Bernoulli, Distribution};
use rand::SeedableRng;
use rand_pcg::Pcg64Mcg;

use crate::homology::ErasurePattern;

const GOLDEN: u64 = 0x9e37_79b9_7f4a_7c15;
const POINT_SALT: u64 = 0x632b_e59b_d9b4_e019;
const TRIAL_SALT: u64 = 0x8cb9_2ba7_2f3d_8dd7;

/// SplitMix64 output function.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed of the stream for `(master_seed, point_index, trial_index)`.
pub fn trial_seed(master_seed: u64, point_index: u64, trial_index: u64) -> u64 {
    let h = mix64(master_seed ^ GOLDEN);
    let h = mix64(h ^ mix64(point_index.wrapping_add(POINT_SALT)));
    mix64(h ^ mix64(trial_index.wrapping_add(TRIAL_SALT)))
}

pub type TrialRng = Pcg64Mcg;

pub fn trial_stream(master_seed: u64, point_index: u64, trial_index: u64) -> TrialRng {
    Pcg64Mcg::seed_from_u64(trial_seed(master_seed, point_index, trial_index))
}

/// Erases each of `n` qubits independently with probability `p`.
///
/// Panics if `p` lies outside `[0, 1]`.
pub fn sample_erasure<R: rand::Rng + ?Sized>(n: usize, p: f64, stream: &mut R) -> ErasurePattern {
    let mut pattern = ErasurePattern::empty(n);
    let coin = Bernoulli::new(p).expect("erasure probability must lie in [0, 1]");
    sample_into(&mut pattern, &coin, stream);
    pattern
}

/// Refills `pattern` in place, one Bernoulli draw per qubit in index order.
pub fn sample_into<R: rand::Rng + ?Sized>(
    pattern: &mut ErasurePattern,
    coin: &Bernoulli,
    stream: &mut R,
) {
    pattern.clear();
    let bits = pattern.bits_mut();
    for q in 0..bits.len() {
        if coin.sample(stream) {
            bits.insert(q);
        }
    }
}
