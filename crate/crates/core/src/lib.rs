//! NEQR image circuits and their positive-polarity Reed-Muller optimization.
//!
//! The pipeline:
//!
//! 1. [`bitplane`]: load or generate a `2^n x 2^n` grayscale image and split
//!    it into `q` bitplanes, each the minterm coefficient vector of one
//!    grayscale qubit over the `2n` coordinate variables.
//! 2. [`rm_transform`]: convert each plane to PPRM coefficients.
//! 3. [`circuit`]: emit the minterm (ESOP) and PPRM gate lists and price them
//!    under the ancilla-free and reset-ancilla MCNOT cost models.
//! 4. [`verify`]: check both circuits encode the same image.
//! 5. [`metrics`] and [`fit`]: compression ratio and optimization rate over
//!    random images, and exponential regression over the results.

pub mod bitplane;
pub mod circuit;
pub mod fit;
pub mod metrics;
pub mod rm_transform;
pub mod verify;

pub use bitplane::{
    extract_planes, parse_pgm, random_image, GrayImage, ImageError, ImagePlanes, PgmError,
};
pub use circuit::{
    circuit_cost, export_qasm, parse_qasm, qc_gate, synthesize_esop, synthesize_pprm, Circuit,
    CircuitError, CostModel, Form, ProductTerm, QasmError,
};
pub use fit::{fit, model_eval, Family, FitError, FitModel, FitResult};
pub use metrics::{
    compression_ratio, optimization_rate, sweep, MetricsError, SweepConfig, SweepRecord,
};
pub use rm_transform::{
    pprm_forward, pprm_naive, term_literals, Basis, CoefficientVector, TransformError,
};
pub use verify::{
    equivalent, eval_plane, reconstruct_image, Counterexample, Equivalence, VerifyError,
};

use thiserror::Error;

/// Any error the pipeline can produce.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Image(#[from] ImageError),
    #[error(transparent)]
    Pgm(#[from] PgmError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Qasm(#[from] QasmError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Fit(#[from] FitError),
}
