//! `neqr`: encode grayscale images as NEQR circuits, optimize them into PPRM
//! form, and measure the quantum-cost reduction.
//!
//! Exit status is 0 on success, 1 when `verify` finds the circuits differ,
//! and 2 for usage or input errors.

mod commands;
mod source;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use neqr_core::{CostModel, Family, Form};

use crate::source::ImageSource;

#[derive(Parser, Debug)]
#[command(
    name = "neqr",
    version,
    about = "NEQR circuit synthesis and PPRM optimization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quantum cost of the naive and PPRM circuits of one image.
    Cost(CostArgs),
    /// Check that the PPRM circuit encodes the same image as the naive one.
    Verify(VerifyArgs),
    /// Cost reduction over seeded random images of increasing size.
    Sweep(SweepArgs),
    /// Fit an exponential model to sweep output.
    Fit(FitArgs),
    /// Write a circuit as OpenQASM 3.
    Export(ExportArgs),
    /// Per-plane term counts of an image.
    Info(InfoArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum ModelArg {
    Plain,
    Reset,
}

impl From<ModelArg> for CostModel {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Plain => CostModel::McnotPlain,
            ModelArg::Reset => CostModel::McnotReset,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FormArg {
    Esop,
    Pprm,
}

impl From<FormArg> for Form {
    fn from(f: FormArg) -> Self {
        match f {
            FormArg::Esop => Form::Esop,
            FormArg::Pprm => Form::Pprm,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Growth,
    Decay,
    NegDecay,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Self {
        match f {
            FamilyArg::Growth => Family::GrowthExp,
            FamilyArg::Decay => Family::DecayExp { negated: false },
            FamilyArg::NegDecay => Family::DecayExp { negated: true },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Column {
    Rate,
    RatioPercent,
}

#[derive(Args, Debug)]
struct CostArgs {
    #[command(flatten)]
    source: ImageSource,
    #[arg(long, value_enum, default_value = "plain")]
    model: ModelArg,
    /// Also charge two X gates per negative control in the naive circuit.
    #[arg(long)]
    polarity_x: bool,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[command(flatten)]
    source: ImageSource,
    /// Compare two exported QASM files instead of synthesizing from an image.
    #[arg(long, num_args = 2, value_names = ["LEFT", "RIGHT"], conflicts_with_all = ["image", "random"])]
    circuits: Option<Vec<PathBuf>>,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Inclusive range of image orders, e.g. `1..8`.
    #[arg(long, value_name = "A..B")]
    n_range: String,
    #[arg(long, default_value_t = 8)]
    q: u32,
    /// Number of seeds per order.
    #[arg(long, default_value_t = 20)]
    seeds: u64,
    /// First seed; seeds run consecutively from here.
    #[arg(long, default_value_t = 0)]
    seed_start: u64,
    #[arg(long, value_enum, default_value = "plain")]
    model: ModelArg,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    /// Emit per-order mean and standard deviation instead of raw records.
    #[arg(long)]
    summary: bool,
}

#[derive(Args, Debug)]
struct FitArgs {
    #[arg(long, value_enum)]
    family: FamilyArg,
    /// Sweep output (CSV or JSON); `-` or absent reads standard input.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Response variable to fit against `m`.
    #[arg(long, value_enum, default_value = "rate")]
    column: Column,
    /// Comma-separated initial parameters.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    init: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[command(flatten)]
    source: ImageSource,
    #[arg(long, value_enum)]
    form: FormArg,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct InfoArgs {
    #[command(flatten)]
    source: ImageSource,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Cost(a) => commands::cost(a),
        Command::Verify(a) => commands::verify(a),
        Command::Sweep(a) => commands::sweep(a),
        Command::Fit(a) => commands::fit(a),
        Command::Export(a) => commands::export(a),
        Command::Info(a) => commands::info(a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
