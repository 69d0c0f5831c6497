use std::path::PathBuf;

use clap::Args;
use neqr_core::{parse_pgm, random_image, GrayImage};

use crate::commands::CliError;

/// Where an image comes from: a PGM file or a seeded random generator.
#[derive(Args, Debug)]
pub struct ImageSource {
    /// PGM (P2 or P5) image with equal power-of-two sides.
    #[arg(value_name = "IMAGE", conflicts_with = "random")]
    pub image: Option<PathBuf>,
    /// Random 2^N x 2^N image with Q-bit pixels from SplitMix64(SEED).
    #[arg(long, num_args = 3, value_names = ["N", "Q", "SEED"])]
    pub random: Option<Vec<u64>>,
}

impl ImageSource {
    pub fn is_given(&self) -> bool {
        self.image.is_some() || self.random.is_some()
    }

    /// Image order without generating or decoding pixels, when cheap to know.
    pub fn declared_order(&self) -> Option<u64> {
        self.random.as_ref().map(|r| r[0])
    }

    pub fn load(&self) -> Result<GrayImage, CliError> {
        match (&self.image, &self.random) {
            (Some(path), None) => {
                let bytes = std::fs::read(path).map_err(|source| CliError::Io {
                    path: path.clone(),
                    source,
                })?;
                Ok(parse_pgm(&bytes)
                    .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?)
            }
            (None, Some(r)) => {
                let n = u32::try_from(r[0])
                    .map_err(|_| CliError::Usage(format!("order {} out of range", r[0])))?;
                let q = u32::try_from(r[1])
                    .map_err(|_| CliError::Usage(format!("depth {} out of range", r[1])))?;
                Ok(random_image(n, q, r[2])?)
            }
            _ => Err(CliError::Usage(
                "give an IMAGE path or --random N Q SEED".into(),
            )),
        }
    }
}
