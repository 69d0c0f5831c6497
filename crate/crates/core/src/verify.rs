//! Boolean semantics of NEQR circuits.
//!
//! All data gates are X gates controlled by coordinate qubits, so in the
//! computational basis grayscale qubit `i` at coordinate `k` ends up holding
//! the XOR of every plane-`i` gate whose control pattern matches `k`. That
//! value is what a measurement of the encoded image returns, which makes
//! exhaustive Boolean evaluation a complete check of what a circuit encodes.

use rayon::prelude::*;
use thiserror::Error;

use crate::bitplane::GrayImage;
use crate::circuit::{full_mask, Circuit, ProductTerm};
use crate::rm_transform::{Basis, CoefficientVector};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("circuits differ in shape: n={left_n} q={left_q} vs n={right_n} q={right_q}")]
    DimensionMismatch {
        left_n: u32,
        left_q: u32,
        right_n: u32,
        right_q: u32,
    },
}

/// Target value after applying `gates` to `|0>` with the coordinate register
/// in basis state `assignment`.
pub fn eval_plane(gates: &[ProductTerm], assignment: u32) -> bool {
    gates
        .iter()
        .fold(false, |acc, g| acc ^ g.matches(assignment))
}

/// The truth table of one plane's gate list over `vars` variables.
///
/// Each gate flips a subcube: its fixed bits come from the control masks and
/// it ranges over every subset of the uncontrolled variables. Work is the sum
/// of the subcube sizes, one bit per minterm gate.
pub fn plane_truth_table(gates: &[ProductTerm], vars: u32) -> CoefficientVector {
    let mut table = CoefficientVector::zeros(vars, Basis::Minterm).expect("vars within range");
    let full = full_mask(vars);
    for g in gates {
        let free = full & !(g.positive | g.negative);
        let mut sub = free;
        loop {
            table.toggle((g.positive | sub) as usize);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & free;
        }
    }
    table
}

/// The image a circuit writes into the grayscale register.
pub fn reconstruct_image(c: &Circuit) -> GrayImage {
    let vars = c.coordinate_vars();
    let tables: Vec<CoefficientVector> = c
        .planes()
        .par_iter()
        .map(|gates| plane_truth_table(gates, vars))
        .collect();
    let mut pixels = vec![0u16; 1 << vars];
    for (i, table) in tables.iter().enumerate() {
        for k in table.iter_ones() {
            pixels[k] |= 1 << i;
        }
    }
    GrayImage::new(c.order(), c.depth(), pixels).expect("circuit shape already validated")
}

/// First disagreement between two circuits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Counterexample {
    pub plane: usize,
    pub coordinate: u32,
    order: u32,
}

impl Counterexample {
    pub fn y(&self) -> u32 {
        self.coordinate >> self.order
    }

    pub fn x(&self) -> u32 {
        self.coordinate & ((1 << self.order) - 1)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Equivalence {
    Equivalent,
    Differs(Counterexample),
}

impl Equivalence {
    pub fn holds(&self) -> bool {
        matches!(self, Equivalence::Equivalent)
    }
}

/// Compares two circuits on every plane and every coordinate. On failure the
/// counterexample is the smallest `(plane, coordinate)` pair that differs.
pub fn equivalent(left: &Circuit, right: &Circuit) -> Result<Equivalence, VerifyError> {
    if left.order() != right.order() || left.depth() != right.depth() {
        return Err(VerifyError::DimensionMismatch {
            left_n: left.order(),
            left_q: left.depth(),
            right_n: right.order(),
            right_q: right.depth(),
        });
    }
    let vars = left.coordinate_vars();
    let first = (0..left.depth() as usize)
        .into_par_iter()
        .filter_map(|p| {
            let a = plane_truth_table(left.gates(p), vars);
            let b = plane_truth_table(right.gates(p), vars);
            a.first_difference(&b).map(|k| (p, k as u32))
        })
        .min();
    Ok(match first {
        None => Equivalence::Equivalent,
        Some((plane, coordinate)) => Equivalence::Differs(Counterexample {
            plane,
            coordinate,
            order: left.order(),
        }),
    })
}
