//! NetPBM graymap reader (P2 ASCII and P5 binary).

use thiserror::Error;

use super::{GrayImage, ImageError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PgmError {
    #[error("unsupported magic number {found:?}: expected P2 or P5")]
    UnsupportedMagic { found: String },
    #[error("malformed header field `{field}`: {reason}")]
    MalformedHeader { field: &'static str, reason: String },
    #[error("{field} {value} is not a power of two")]
    NonPowerOfTwoDimension { field: &'static str, value: u64 },
    #[error("image is not square: width {width}, height {height}")]
    NonSquare { width: u64, height: u64 },
    #[error("raster truncated: expected {expected} samples, found {found}")]
    TruncatedData { expected: usize, found: usize },
    #[error("sample {index}: {reason}")]
    InvalidSample { index: usize, reason: String },
    #[error(transparent)]
    Image(#[from] ImageError),
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|&c| c != b'\n' && c != b'\r')
                {
                    self.pos += 1;
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn token(&mut self) -> Option<&'a [u8]> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self
            .bytes
            .get(self.pos)
            .is_some_and(|b| !b.is_ascii_whitespace() && *b != b'#')
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }

    fn header_number(&mut self, field: &'static str) -> Result<u64, PgmError> {
        let tok = self.token().ok_or_else(|| PgmError::MalformedHeader {
            field,
            reason: "missing".into(),
        })?;
        parse_decimal(tok).ok_or_else(|| PgmError::MalformedHeader {
            field,
            reason: format!(
                "{:?} is not a decimal integer",
                String::from_utf8_lossy(tok)
            ),
        })
    }
}

fn parse_decimal(tok: &[u8]) -> Option<u64> {
    if tok.is_empty() || !tok.iter().all(u8::is_ascii_digit) {
        return None;
    }
    std::str::from_utf8(tok).ok()?.parse().ok()
}

fn side_order(field: &'static str, value: u64) -> Result<u32, PgmError> {
    if value == 0 {
        return Err(PgmError::MalformedHeader {
            field,
            reason: "must be positive".into(),
        });
    }
    if !value.is_power_of_two() {
        return Err(PgmError::NonPowerOfTwoDimension { field, value });
    }
    Ok(value.trailing_zeros())
}

/// Parses a P2 or P5 graymap whose sides are equal powers of two.
///
/// `maxval <= 255` yields an 8-bit image, larger values (up to 65535) a
/// 16-bit one, regardless of the pixel values actually present. P5 samples
/// wider than one byte are big-endian.
pub fn parse_pgm(bytes: &[u8]) -> Result<GrayImage, PgmError> {
    let ascii = match bytes.get(..2) {
        Some(b"P2") => true,
        Some(b"P5") => false,
        _ => {
            let found = String::from_utf8_lossy(&bytes[..bytes.len().min(2)]).into_owned();
            return Err(PgmError::UnsupportedMagic { found });
        }
    };
    let mut cur = Cursor { bytes, pos: 2 };
    if !cur
        .bytes
        .get(2)
        .is_some_and(|b| b.is_ascii_whitespace() || *b == b'#')
    {
        return Err(PgmError::MalformedHeader {
            field: "magic",
            reason: "must be followed by whitespace".into(),
        });
    }

    let width = cur.header_number("width")?;
    let height = cur.header_number("height")?;
    let n = side_order("width", width)?;
    let n_height = side_order("height", height)?;
    if n != n_height {
        return Err(PgmError::NonSquare { width, height });
    }
    let maxval = cur.header_number("maxval")?;
    if maxval == 0 || maxval > 65_535 {
        return Err(PgmError::MalformedHeader {
            field: "maxval",
            reason: format!("{maxval} outside 1..=65535"),
        });
    }
    let q = if maxval <= 255 { 8 } else { 16 };
    super::check_shape(n, q)?;

    let count = 1usize << (2 * n);
    let pixels = if ascii {
        read_ascii_raster(&mut cur, count, maxval)?
    } else {
        // exactly one whitespace byte separates maxval from the raster
        if !cur.bytes.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
            return Err(PgmError::MalformedHeader {
                field: "maxval",
                reason: "missing whitespace before raster".into(),
            });
        }
        read_binary_raster(&bytes[cur.pos + 1..], count, maxval)?
    };
    Ok(GrayImage::new(n, q, pixels)?)
}

fn read_ascii_raster(
    cur: &mut Cursor<'_>,
    count: usize,
    maxval: u64,
) -> Result<Vec<u16>, PgmError> {
    let mut pixels = Vec::with_capacity(count);
    for index in 0..count {
        let tok = cur.token().ok_or(PgmError::TruncatedData {
            expected: count,
            found: index,
        })?;
        let value = parse_decimal(tok).ok_or_else(|| PgmError::InvalidSample {
            index,
            reason: format!(
                "{:?} is not a decimal integer",
                String::from_utf8_lossy(tok)
            ),
        })?;
        pixels.push(check_sample(index, value, maxval)?);
    }
    Ok(pixels)
}

fn read_binary_raster(raster: &[u8], count: usize, maxval: u64) -> Result<Vec<u16>, PgmError> {
    let width = if maxval <= 255 { 1 } else { 2 };
    if raster.len() < count * width {
        return Err(PgmError::TruncatedData {
            expected: count,
            found: raster.len() / width,
        });
    }
    raster[..count * width]
        .chunks_exact(width)
        .enumerate()
        .map(|(index, s)| {
            let value = s.iter().fold(0u64, |acc, &b| acc << 8 | u64::from(b));
            check_sample(index, value, maxval)
        })
        .collect()
}

fn check_sample(index: usize, value: u64, maxval: u64) -> Result<u16, PgmError> {
    if value > maxval {
        return Err(PgmError::InvalidSample {
            index,
            reason: format!("value {value} exceeds maxval {maxval}"),
        });
    }
    Ok(value as u16)
}
