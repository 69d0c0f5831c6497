//! NEQR gate lists and their quantum cost.
//!
//! Every data gate is a multi-controlled X on one grayscale qubit, described
//! by a [`ProductTerm`] over the `2n` coordinate variables. The naive
//! ([`Form::Esop`]) circuit has one full-polarity minterm gate per set pixel
//! bit; the optimized ([`Form::Pprm`]) circuit has one positive-control gate
//! per nonzero PPRM coefficient.

mod cost;
mod qasm;

pub use cost::{circuit_cost, coefficient_cost, qc_gate, CostModel};
pub use qasm::{export_qasm, parse_qasm, QasmError, QASM_HEADER};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitplane::{check_shape, ImageError, ImagePlanes};
use crate::rm_transform::pprm_forward;

/// Control pattern of one multi-controlled X gate: the target flips when
/// every variable in `positive` is 1 and every variable in `negative` is 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProductTerm {
    pub positive: u32,
    pub negative: u32,
}

impl ProductTerm {
    /// Full-polarity minterm for assignment `k` over `vars` variables.
    pub fn minterm(k: u32, vars: u32) -> Self {
        Self {
            positive: k,
            negative: !k & full_mask(vars),
        }
    }

    /// Positive-literal product of the variables set in `mask`.
    pub fn positive(mask: u32) -> Self {
        Self {
            positive: mask,
            negative: 0,
        }
    }

    /// Number of control qubits.
    pub fn controls(&self) -> u32 {
        (self.positive | self.negative).count_ones()
    }

    pub fn matches(&self, assignment: u32) -> bool {
        assignment & self.positive == self.positive && assignment & self.negative == 0
    }
}

pub(crate) fn full_mask(vars: u32) -> u32 {
    if vars >= 32 {
        u32::MAX
    } else {
        (1u32 << vars) - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Form {
    Esop,
    Pprm,
}

impl Form {
    pub fn name(self) -> &'static str {
        match self {
            Form::Esop => "esop",
            Form::Pprm => "pprm",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error(transparent)]
    Shape(#[from] ImageError),
    #[error("expected {expected} gate lists, found {found}")]
    PlaneCount { expected: usize, found: usize },
    #[error("plane {plane} gate {gate}: {reason}")]
    InvalidGate {
        plane: usize,
        gate: usize,
        reason: &'static str,
    },
}

/// Per-plane gate lists for a `2^n x 2^n`, `q`-bit image.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circuit {
    n: u32,
    q: u32,
    form: Form,
    planes: Vec<Vec<ProductTerm>>,
}

impl Circuit {
    /// Validates and wraps gate lists. ESOP gates must be full-polarity
    /// minterms; PPRM gates must be positive-only and distinct within a plane.
    pub fn new(
        n: u32,
        q: u32,
        form: Form,
        planes: Vec<Vec<ProductTerm>>,
    ) -> Result<Self, CircuitError> {
        check_shape(n, q)?;
        if planes.len() != q as usize {
            return Err(CircuitError::PlaneCount {
                expected: q as usize,
                found: planes.len(),
            });
        }
        let full = full_mask(2 * n);
        for (p, gates) in planes.iter().enumerate() {
            let mut seen = std::collections::HashSet::new();
            for (g, t) in gates.iter().enumerate() {
                let reason = if (t.positive | t.negative) & !full != 0 {
                    Some("control outside the coordinate register")
                } else if t.positive & t.negative != 0 {
                    Some("variable controlled with both polarities")
                } else {
                    match form {
                        Form::Esop if t.positive | t.negative != full => {
                            Some("ESOP gate is not a full minterm")
                        }
                        Form::Pprm if t.negative != 0 => Some("PPRM gate has a negative control"),
                        Form::Pprm if !seen.insert(t.positive) => Some("duplicate PPRM term"),
                        _ => None,
                    }
                };
                if let Some(reason) = reason {
                    return Err(CircuitError::InvalidGate {
                        plane: p,
                        gate: g,
                        reason,
                    });
                }
            }
        }
        Ok(Self { n, q, form, planes })
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

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn planes(&self) -> &[Vec<ProductTerm>] {
        &self.planes
    }

    pub fn gates(&self, plane: usize) -> &[ProductTerm] {
        &self.planes[plane]
    }

    pub fn gate_count(&self) -> usize {
        self.planes.iter().map(Vec::len).sum()
    }

    /// Iterates `(plane, gate)` in plane-major, ascending-mask order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &ProductTerm)> {
        self.planes
            .iter()
            .enumerate()
            .flat_map(|(p, gates)| gates.iter().map(move |g| (p, g)))
    }
}

/// One minterm gate per set bit of each plane.
pub fn synthesize_esop(planes: &ImagePlanes) -> Circuit {
    let vars = planes.coordinate_vars();
    let gates = planes
        .planes()
        .par_iter()
        .map(|plane| {
            plane
                .iter_ones()
                .map(|k| ProductTerm::minterm(k as u32, vars))
                .collect()
        })
        .collect();
    Circuit {
        n: planes.order(),
        q: planes.depth(),
        form: Form::Esop,
        planes: gates,
    }
}

/// One positive-control gate per nonzero PPRM coefficient of each plane.
/// The constant term becomes an uncontrolled X.
pub fn synthesize_pprm(planes: &ImagePlanes) -> Circuit {
    let gates = planes
        .planes()
        .par_iter()
        .map(|plane| {
            pprm_forward(plane)
                .iter_ones()
                .map(|j| ProductTerm::positive(j as u32))
                .collect()
        })
        .collect();
    Circuit {
        n: planes.order(),
        q: planes.depth(),
        form: Form::Pprm,
        planes: gates,
    }
}
