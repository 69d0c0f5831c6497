//! Shared inputs for the criterion benchmarks.

use neqr_core::bitplane::SplitMix64;
use neqr_core::{extract_planes, random_image, Basis, CoefficientVector, ImagePlanes};

/// A minterm vector over `vars` variables with roughly half its bits set.
pub fn random_vector(vars: u32, seed: u64) -> CoefficientVector {
    let mut rng = SplitMix64::new(seed);
    let words = (1usize << vars).div_ceil(64);
    let mut w: Vec<u64> = (0..words).map(|_| rng.next_u64()).collect();
    if vars < 6 {
        w[0] &= (1u64 << (1u32 << vars)) - 1;
    }
    CoefficientVector::from_words(vars, Basis::Minterm, w).expect("word count follows from vars")
}

/// Bitplanes of a seeded random 8-bit image of order `n`.
pub fn random_planes(n: u32, seed: u64) -> ImagePlanes {
    extract_planes(&random_image(n, 8, seed).expect("order within range"))
}
