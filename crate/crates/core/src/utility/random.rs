//! Seeded random strictly-positive profiles for tests and benchmarks.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PiecewiseDensity, UtilityProfile};
use crate::rational::{int, rat};

/// A density with 1 to 5 segments on breakpoints `k / 64` and integer values in `1..=20`.
pub fn random_density<R: Rng>(rng: &mut R) -> PiecewiseDensity {
    let segments = rng.gen_range(1..=5usize);
    let mut cuts: Vec<i128> = Vec::new();
    while cuts.len() < segments - 1 {
        let c = rng.gen_range(1..64i128);
        if !cuts.contains(&c) {
            cuts.push(c);
        }
    }
    cuts.sort_unstable();
    let mut bps = Vec::with_capacity(segments + 1);
    bps.push(int(0));
    bps.extend(cuts.into_iter().map(|c| rat(c, 64)));
    bps.push(int(1));
    let values = (0..segments).map(|_| int(rng.gen_range(1..=20))).collect();
    PiecewiseDensity::new(bps, values).unwrap()
}

/// `d + 1` independent random densities, deterministic in `seed`.
pub fn random_profile(d: usize, seed: u64) -> UtilityProfile {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let players = (0..=d).map(|_| random_density(&mut rng)).collect();
    UtilityProfile::new(players).unwrap()
}
