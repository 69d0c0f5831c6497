//! Dense `R(m)` matrix, used only to cross-check the butterfly.

use super::vector::word_count;
use super::{CoefficientVector, TransformError};

/// Largest order for which `R(m)` is materialized (`2^28` bits, 32 MiB).
pub const MAX_ORACLE_VARIABLES: u32 = 14;

/// The `2^m x 2^m` GF(2) matrix `R(m)`, built as the iterated Kronecker
/// product of `R(1) = [[1, 0], [1, 1]]`.
///
/// Stored column-major: column `k` is a packed bit vector over rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RmMatrix {
    vars: u32,
    columns: Vec<u64>,
}

impl RmMatrix {
    pub fn build(vars: u32) -> Result<Self, TransformError> {
        if vars > MAX_ORACLE_VARIABLES {
            return Err(TransformError::OrderTooLargeForOracle { vars });
        }
        let r1 = Self {
            vars: 1,
            columns: vec![0b11, 0b10],
        };
        let mut acc = Self {
            vars: 0,
            columns: vec![0b1],
        };
        for _ in 0..vars {
            acc = r1.kronecker(&acc);
        }
        Ok(acc)
    }

    pub fn vars(&self) -> u32 {
        self.vars
    }

    fn dim(&self) -> usize {
        1 << self.vars
    }

    fn column(&self, k: usize) -> &[u64] {
        let wc = word_count(self.vars);
        &self.columns[k * wc..(k + 1) * wc]
    }

    pub fn entry(&self, row: usize, col: usize) -> bool {
        self.column(col)[row / 64] >> (row % 64) & 1 == 1
    }

    /// `self ⊗ rhs`: entry `(i1·d + i2, k1·d + k2) = self[i1][k1] & rhs[i2][k2]`
    /// where `d` is the dimension of `rhs`.
    fn kronecker(&self, rhs: &Self) -> Self {
        let vars = self.vars + rhs.vars;
        let wc = word_count(vars);
        let (outer, inner) = (self.dim(), rhs.dim());
        let mut columns = vec![0u64; (1usize << vars) * wc];
        for k1 in 0..outer {
            for k2 in 0..inner {
                let col = &mut columns[(k1 * inner + k2) * wc..][..wc];
                let src = rhs.column(k2);
                for i1 in (0..outer).filter(|&i1| self.entry(i1, k1)) {
                    let base = i1 * inner;
                    if inner >= 64 {
                        col[base / 64..base / 64 + src.len()].copy_from_slice(src);
                    } else {
                        col[base / 64] |= src[0] << (base % 64);
                    }
                }
            }
        }
        Self { vars, columns }
    }

    /// The `*` product `R(m) * v`: each output bit is the XOR-reduction of a
    /// row ANDed with `v`. Accumulated column-wise, as the XOR of the columns
    /// selected by the set bits of `v`.
    ///
    /// Panics if `v` has a different variable count.
    pub fn apply(&self, v: &CoefficientVector) -> CoefficientVector {
        assert_eq!(
            v.vars(),
            self.vars,
            "vector order does not match the matrix"
        );
        let mut out = vec![0u64; word_count(self.vars)];
        for k in v.iter_ones() {
            for (o, c) in out.iter_mut().zip(self.column(k)) {
                *o ^= c;
            }
        }
        CoefficientVector::from_words(self.vars, v.basis().flipped(), out)
            .expect("columns of R(m) never exceed 2^m rows")
    }
}

/// Reference transform: materializes `R(m)` and multiplies.
pub fn pprm_naive(v: &CoefficientVector) -> Result<CoefficientVector, TransformError> {
    Ok(RmMatrix::build(v.vars())?.apply(v))
}
