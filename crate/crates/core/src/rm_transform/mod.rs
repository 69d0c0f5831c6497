//! Minterm to positive-polarity Reed-Muller conversion over GF(2).
//!
//! A Boolean function of `m` variables is carried as a [`CoefficientVector`]
//! of length `2^m`. In the minterm basis bit `k` is the function value at
//! assignment `k`; in the PPRM basis bit `j` is the coefficient of the product
//! of the variables `{x_i : bit i of j is set}`, so index 0 is the constant
//! term and index `2^m - 1` the full product `x_{m-1} ... x_0`.
//!
//! The change of basis is the GF(2) matrix `R(m)`, the `m`-fold Kronecker
//! power of `[[1, 0], [1, 1]]`. It is its own inverse, so the same routine
//! converts in both directions. [`pprm_forward`] computes it with a packed
//! block-XOR butterfly; [`RmMatrix`] materializes `R(m)` for cross-checking.

mod oracle;
mod vector;

pub use oracle::{pprm_naive, RmMatrix, MAX_ORACLE_VARIABLES};
pub use vector::{Basis, CoefficientVector, MAX_VARIABLES};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("{vars} variables exceeds the supported maximum of {MAX_VARIABLES}")]
    TooManyVariables { vars: u32 },
    #[error("coefficient count {len} is not a power of two")]
    LengthNotPowerOfTwo { len: usize },
    #[error("expected {expected} packed words, found {found}")]
    WordCountMismatch { expected: usize, found: usize },
    #[error("bits set beyond index 2^{vars} - 1")]
    StrayHighBits { vars: u32 },
    #[error("the dense R(m) oracle supports at most {MAX_ORACLE_VARIABLES} variables, got {vars}")]
    OrderTooLargeForOracle { vars: u32 },
    #[error("term index {index} out of range for {vars} variables")]
    IndexOutOfRange { index: u64, vars: u32 },
}

/// For block size `2^k < 64`: ones on every bit position whose bit `k` is
/// clear, i.e. the lower block of each aligned pair.
const LOWER_BLOCK_MASKS: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0f0f_0f0f_0f0f_0f0f,
    0x00ff_00ff_00ff_00ff,
    0x0000_ffff_0000_ffff,
    0x0000_0000_ffff_ffff,
];

/// Converts between minterm and PPRM coefficients, returning a new vector
/// with the basis flipped. The input is left untouched.
pub fn pprm_forward(v: &CoefficientVector) -> CoefficientVector {
    let mut out = v.clone().with_basis(v.basis().flipped());
    butterfly_in_place(out.words_mut(), v.vars());
    out
}

/// In-place form of [`pprm_forward`] on raw packed words.
///
/// Runs `vars` passes. Pass `k` XORs every lower block of size `2^k` into the
/// upper block beside it. Below block size 64 this is a masked shift within
/// each word; from 64 up it is a word-slice XOR at a stride of `2^(k-6)`.
///
/// Panics if `words.len()` does not match `vars`.
pub fn butterfly_in_place(words: &mut [u64], vars: u32) {
    assert_eq!(
        words.len(),
        vector::word_count(vars),
        "word count does not match {vars} variables"
    );
    let in_word = vars.min(6) as usize;
    for word in words.iter_mut() {
        let mut w = *word;
        for (k, &mask) in LOWER_BLOCK_MASKS.iter().enumerate().take(in_word) {
            w ^= (w & mask) << (1u32 << k);
        }
        *word = w;
    }
    for k in 6..vars {
        let stride = 1usize << (k - 6);
        for pair in words.chunks_exact_mut(2 * stride) {
            let (lower, upper) = pair.split_at_mut(stride);
            for (u, l) in upper.iter_mut().zip(lower.iter()) {
                *u ^= *l;
            }
        }
    }
}

/// Variables present in the product term at PPRM index `index`, ascending.
pub fn term_literals(index: u64, vars: u32) -> Result<Vec<u32>, TransformError> {
    if vars > MAX_VARIABLES || index >> vars != 0 {
        return Err(TransformError::IndexOutOfRange { index, vars });
    }
    Ok((0..vars).filter(|i| index >> i & 1 == 1).collect())
}
