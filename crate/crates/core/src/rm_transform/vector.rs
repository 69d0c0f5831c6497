use std::fmt;
use std::ops::BitXor;

use serde::{Deserialize, Serialize};

use super::TransformError;

/// Largest variable count a coefficient vector may have. Product-term masks
/// are 32-bit, so a 32-variable function is the ceiling.
pub const MAX_VARIABLES: u32 = 32;

/// Which basis a [`CoefficientVector`] is expressed in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// Minterm coefficients `a_k`: bit `k` is the function value at assignment `k`.
    Minterm,
    /// Positive-polarity Reed-Muller coefficients `b_j`: bit `j` says whether
    /// the positive product of the variables in `j` appears in the XOR sum.
    Pprm,
}

impl Basis {
    pub fn flipped(self) -> Self {
        match self {
            Basis::Minterm => Basis::Pprm,
            Basis::Pprm => Basis::Minterm,
        }
    }
}

/// A length-`2^m` bit vector over GF(2), packed little-endian into `u64`
/// words: index `j` lives in word `j / 64` at bit `j % 64`.
///
/// Bit `i` of an index corresponds to variable `x_i`. Bits past `2^m` in the
/// last word are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CoefficientVector {
    vars: u32,
    basis: Basis,
    words: Vec<u64>,
}

pub(crate) fn word_count(vars: u32) -> usize {
    if vars >= 6 {
        1usize << (vars - 6)
    } else {
        1
    }
}

pub(crate) fn tail_mask(vars: u32) -> u64 {
    if vars >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << vars)) - 1
    }
}

impl CoefficientVector {
    pub fn zeros(vars: u32, basis: Basis) -> Result<Self, TransformError> {
        check_vars(vars)?;
        Ok(Self {
            vars,
            basis,
            words: vec![0; word_count(vars)],
        })
    }

    /// Builds a vector from unpacked bits. The length must be a power of two.
    pub fn from_bits(basis: Basis, bits: &[bool]) -> Result<Self, TransformError> {
        if !bits.len().is_power_of_two() {
            return Err(TransformError::LengthNotPowerOfTwo { len: bits.len() });
        }
        let vars = bits.len().trailing_zeros();
        let mut v = Self::zeros(vars, basis)?;
        for (j, &bit) in bits.iter().enumerate() {
            if bit {
                v.words[j / 64] |= 1 << (j % 64);
            }
        }
        Ok(v)
    }

    /// Builds a vector from packed words, rejecting a wrong word count or any
    /// set bit beyond index `2^vars - 1`.
    pub fn from_words(vars: u32, basis: Basis, words: Vec<u64>) -> Result<Self, TransformError> {
        check_vars(vars)?;
        let expected = word_count(vars);
        if words.len() != expected {
            return Err(TransformError::WordCountMismatch {
                expected,
                found: words.len(),
            });
        }
        if words[expected - 1] & !tail_mask(vars) != 0 {
            return Err(TransformError::StrayHighBits { vars });
        }
        Ok(Self { vars, basis, words })
    }

    /// Variable count `m`; the vector holds `2^m` coefficients.
    pub fn vars(&self) -> u32 {
        self.vars
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn len(&self) -> usize {
        1usize << self.vars
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub fn into_words(self) -> Vec<u64> {
        self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    /// Relabels the basis without touching the bits.
    pub fn with_basis(mut self, basis: Basis) -> Self {
        self.basis = basis;
        self
    }

    pub fn get(&self, index: usize) -> bool {
        assert!(
            index < self.len(),
            "index {index} out of range for 2^{}",
            self.vars
        );
        self.words[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn set(&mut self, index: usize, value: bool) {
        assert!(
            index < self.len(),
            "index {index} out of range for 2^{}",
            self.vars
        );
        let bit = 1u64 << (index % 64);
        if value {
            self.words[index / 64] |= bit;
        } else {
            self.words[index / 64] &= !bit;
        }
    }

    pub fn toggle(&mut self, index: usize) {
        assert!(
            index < self.len(),
            "index {index} out of range for 2^{}",
            self.vars
        );
        self.words[index / 64] ^= 1 << (index % 64);
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Indices of set coefficients in ascending order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &word)| {
            let mut rest = word;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * 64 + bit)
            })
        })
    }

    /// Index of the lowest coefficient where `self` and `other` differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        self.words
            .iter()
            .zip(&other.words)
            .enumerate()
            .find(|(_, (a, b))| a != b)
            .map(|(wi, (a, b))| wi * 64 + (a ^ b).trailing_zeros() as usize)
    }

    /// Evaluates the Boolean function these coefficients describe at one
    /// assignment of `x_{m-1} .. x_0`, read directly from the basis definition:
    /// a minterm vector is the truth table itself, a PPRM vector is the XOR of
    /// every `b_j` whose literal set is contained in the assignment.
    pub fn evaluate(&self, assignment: u64) -> bool {
        assert!(
            assignment < self.len() as u64,
            "assignment {assignment} out of range for {} variables",
            self.vars
        );
        match self.basis {
            Basis::Minterm => self.get(assignment as usize),
            Basis::Pprm => {
                let mut acc = false;
                let mut sub = assignment;
                loop {
                    acc ^= self.get(sub as usize);
                    if sub == 0 {
                        break;
                    }
                    sub = (sub - 1) & assignment;
                }
                acc
            }
        }
    }
}

fn check_vars(vars: u32) -> Result<(), TransformError> {
    if vars > MAX_VARIABLES {
        return Err(TransformError::TooManyVariables { vars });
    }
    Ok(())
}

impl BitXor for &CoefficientVector {
    type Output = CoefficientVector;

    /// Coefficient-wise XOR. Panics on a variable-count or basis mismatch.
    fn bitxor(self, rhs: Self) -> CoefficientVector {
        assert_eq!(self.vars, rhs.vars, "variable count mismatch");
        assert_eq!(self.basis, rhs.basis, "basis mismatch");
        CoefficientVector {
            vars: self.vars,
            basis: self.basis,
            words: self
                .words
                .iter()
                .zip(&rhs.words)
                .map(|(a, b)| a ^ b)
                .collect(),
        }
    }
}

impl fmt::Debug for CoefficientVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("CoefficientVector");
        s.field("vars", &self.vars).field("basis", &self.basis);
        if self.vars <= 8 {
            let bits: String = (0..self.len())
                .map(|j| if self.get(j) { '1' } else { '0' })
                .collect();
            s.field("bits", &bits);
        } else {
            s.field("ones", &self.count_ones());
        }
        s.finish()
    }
}
