use super::{check_shape, GrayImage, ImageError};

/// SplitMix64 generator (Steele, Lea & Flood). Bit-exact so that seeded
/// random images are reproducible across implementations.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        let mut x = self.state;
        x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
        x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
        x ^ (x >> 31)
    }
}

impl Iterator for SplitMix64 {
    type Item = u64;

    fn next(&mut self) -> Option<u64> {
        Some(self.next_u64())
    }
}

/// Uniformly random `2^n x 2^n` image: one SplitMix64 draw per pixel in index
/// order, truncated to the low `q` bits.
pub fn random_image(n: u32, q: u32, seed: u64) -> Result<GrayImage, ImageError> {
    check_shape(n, q)?;
    let mask = (1u64 << q) - 1;
    let pixels = SplitMix64::new(seed)
        .take(1 << (2 * n))
        .map(|x| (x & mask) as u16)
        .collect();
    GrayImage::new(n, q, pixels)
}
