//! Grayscale images and their per-bit decomposition.
//!
//! A `2^n x 2^n` image with `q`-bit pixels is stored row-major, pixel `(Y, X)`
//! at index `Y·2^n + X`. Read as a `2n`-bit coordinate, `X` occupies the low
//! `n` bits (variables `x_0 .. x_{n-1}`) and `Y` the high `n` bits
//! (`x_n .. x_{2n-1}`). Bitplane `i` collects bit `i` of every pixel and is
//! the minterm coefficient vector of grayscale qubit `i`.

mod pgm;
mod random;

pub use pgm::{parse_pgm, PgmError};
pub use random::{random_image, SplitMix64};

use rayon::prelude::*;
use thiserror::Error;

use crate::rm_transform::{Basis, CoefficientVector};

pub const MAX_ORDER: u32 = 16;
pub const MAX_DEPTH: u32 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImageError {
    #[error("image order n = {n} outside 1..={MAX_ORDER}")]
    OrderOutOfRange { n: u32 },
    #[error("bit depth q = {q} outside 1..={MAX_DEPTH}")]
    DepthOutOfRange { q: u32 },
    #[error("expected {expected} pixels for a 2^{n} x 2^{n} image, found {found}")]
    PixelCount {
        n: u32,
        expected: usize,
        found: usize,
    },
    #[error("pixel {index} has value {value}, above the {q}-bit maximum")]
    PixelOutOfRange { index: usize, value: u16, q: u32 },
    #[error("expected {expected} bitplanes, found {found}")]
    PlaneCount { expected: usize, found: usize },
    #[error("bitplane {plane} does not cover {vars} coordinate variables")]
    PlaneShape { plane: usize, vars: u32 },
}

/// A square power-of-two grayscale image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GrayImage {
    n: u32,
    q: u32,
    pixels: Vec<u16>,
}

impl GrayImage {
    pub fn new(n: u32, q: u32, pixels: Vec<u16>) -> Result<Self, ImageError> {
        check_shape(n, q)?;
        let expected = 1usize << (2 * n);
        if pixels.len() != expected {
            return Err(ImageError::PixelCount {
                n,
                expected,
                found: pixels.len(),
            });
        }
        let max = max_value(q);
        if let Some((index, &value)) = pixels.iter().enumerate().find(|(_, &p)| p > max) {
            return Err(ImageError::PixelOutOfRange { index, value, q });
        }
        Ok(Self { n, q, pixels })
    }

    /// Coordinate order: the image is `2^n` pixels on a side.
    pub fn order(&self) -> u32 {
        self.n
    }

    /// Bits per pixel.
    pub fn depth(&self) -> u32 {
        self.q
    }

    pub fn side(&self) -> usize {
        1 << self.n
    }

    /// Number of coordinate qubits, `2n`.
    pub fn coordinate_vars(&self) -> u32 {
        2 * self.n
    }

    pub fn pixels(&self) -> &[u16] {
        &self.pixels
    }

    pub fn pixel(&self, y: usize, x: usize) -> u16 {
        self.pixels[(y << self.n) | x]
    }

    /// Total number of one bits across all pixel values.
    pub fn set_bits(&self) -> u64 {
        self.pixels.iter().map(|p| u64::from(p.count_ones())).sum()
    }
}

pub(crate) fn check_shape(n: u32, q: u32) -> Result<(), ImageError> {
    if !(1..=MAX_ORDER).contains(&n) {
        return Err(ImageError::OrderOutOfRange { n });
    }
    if !(1..=MAX_DEPTH).contains(&q) {
        return Err(ImageError::DepthOutOfRange { q });
    }
    Ok(())
}

fn max_value(q: u32) -> u16 {
    (((1u32) << q) - 1) as u16
}

/// The `q` bitplanes of an image, each a minterm coefficient vector over the
/// `2n` coordinate variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImagePlanes {
    n: u32,
    q: u32,
    planes: Vec<CoefficientVector>,
}

impl ImagePlanes {
    /// Assembles planes directly. Each must be a minterm vector over `2n`
    /// variables.
    pub fn new(n: u32, q: u32, planes: Vec<CoefficientVector>) -> Result<Self, ImageError> {
        check_shape(n, q)?;
        if planes.len() != q as usize {
            return Err(ImageError::PlaneCount {
                expected: q as usize,
                found: planes.len(),
            });
        }
        if let Some(plane) = planes
            .iter()
            .position(|p| p.vars() != 2 * n || p.basis() != Basis::Minterm)
        {
            return Err(ImageError::PlaneShape { plane, vars: 2 * n });
        }
        Ok(Self { n, q, planes })
    }

    pub fn order(&self) -> u32 {
        self.n
    }

    pub fn depth(&self) -> u32 {
        self.q
    }

    pub fn coordinate_vars(&self) -> u32 {
        2 * self.n
    }

    pub fn planes(&self) -> &[CoefficientVector] {
        &self.planes
    }

    pub fn plane(&self, i: usize) -> &CoefficientVector {
        &self.planes[i]
    }

    /// Reassembles pixel values from the planes.
    pub fn recombine(&self) -> GrayImage {
        let mut pixels = vec![0u16; 1 << (2 * self.n)];
        for (i, plane) in self.planes.iter().enumerate() {
            for k in plane.iter_ones() {
                pixels[k] |= 1 << i;
            }
        }
        GrayImage {
            n: self.n,
            q: self.q,
            pixels,
        }
    }
}

/// Splits an image into its bitplanes: bit `k` of plane `i` is bit `i` of
/// pixel `k`.
pub fn extract_planes(img: &GrayImage) -> ImagePlanes {
    let vars = img.coordinate_vars();
    let planes = (0..img.q)
        .into_par_iter()
        .map(|i| {
            let words: Vec<u64> = img
                .pixels
                .chunks(64)
                .map(|chunk| {
                    chunk
                        .iter()
                        .enumerate()
                        .fold(0u64, |w, (b, &p)| w | (u64::from(p >> i & 1) << b))
                })
                .collect();
            CoefficientVector::from_words(vars, Basis::Minterm, words)
                .expect("plane built from a validated image")
        })
        .collect();
    ImagePlanes {
        n: img.n,
        q: img.q,
        planes,
    }
}
