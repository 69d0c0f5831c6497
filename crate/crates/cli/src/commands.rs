use std::fmt::Write as _;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use neqr_core::metrics::{
    measure, parse_records, records_to_csv, round_sig6, summaries_to_csv, summarize,
};
use neqr_core::{
    compression_ratio, equivalent, export_qasm, extract_planes, optimization_rate, parse_qasm,
    pprm_forward, synthesize_esop, synthesize_pprm, Circuit, CostModel, Equivalence, Family, Form,
    SweepConfig,
};
use serde_json::json;
use thiserror::Error;

use crate::{Column, CostArgs, ExportArgs, FitArgs, Format, InfoArgs, SweepArgs, VerifyArgs};

/// Exhaustive verification walks all `4^n` coordinates of every plane.
const MAX_VERIFY_ORDER: u32 = 8;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Input(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] neqr_core::Error),
}

macro_rules! core_error {
    ($($t:ty),*) => {$(
        impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Core(e.into())
            }
        }
    )*};
}

core_error!(
    neqr_core::ImageError,
    neqr_core::MetricsError,
    neqr_core::FitError,
    neqr_core::VerifyError
);

type CmdResult = Result<ExitCode, CliError>;

fn read_file(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn cost(args: CostArgs) -> CmdResult {
    let img = args.source.load()?;
    let model = CostModel::from(args.model);
    let (nonopt, opt) = measure(&extract_planes(&img), model, args.polarity_x);
    let rate = optimization_rate(nonopt, opt)?;
    let ratio = compression_ratio(nonopt, opt)?;
    let out = match args.format {
        Format::Csv => format!(
            "n,q,model,polarity_x,qc_nonopt,qc_opt,rate,ratio_percent\n{},{},{},{},{},{},{},{}\n",
            img.order(),
            img.depth(),
            model,
            args.polarity_x,
            nonopt,
            opt,
            round_sig6(rate),
            round_sig6(ratio)
        ),
        Format::Json => {
            let v = json!({
                "n": img.order(),
                "q": img.depth(),
                "model": model.name(),
                "polarity_x": args.polarity_x,
                "qc_nonopt": nonopt,
                "qc_opt": opt,
                "rate": round_sig6(rate),
                "ratio_percent": round_sig6(ratio),
            });
            format!("{v}\n")
        }
    };
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn guard_order(n: u64) -> Result<(), CliError> {
    if n > u64::from(MAX_VERIFY_ORDER) {
        return Err(CliError::Usage(format!(
            "exhaustive verification is limited to n <= {MAX_VERIFY_ORDER} (got n = {n}); \
             it evaluates every plane at all 4^n coordinates"
        )));
    }
    Ok(())
}

fn load_circuit(path: &Path) -> Result<Circuit, CliError> {
    parse_qasm(&read_file(path)?).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub fn verify(args: VerifyArgs) -> CmdResult {
    let (left, right) = match &args.circuits {
        Some(paths) => {
            let (left, right) = (load_circuit(&paths[0])?, load_circuit(&paths[1])?);
            guard_order(u64::from(left.order().max(right.order())))?;
            (left, right)
        }
        None => {
            if !args.source.is_given() {
                return Err(CliError::Usage(
                    "give an IMAGE, --random N Q SEED, or --circuits LEFT RIGHT".into(),
                ));
            }
            if let Some(n) = args.source.declared_order() {
                guard_order(n)?;
            }
            let img = args.source.load()?;
            guard_order(u64::from(img.order()))?;
            let planes = extract_planes(&img);
            (synthesize_esop(&planes), synthesize_pprm(&planes))
        }
    };
    match equivalent(&left, &right)? {
        Equivalence::Equivalent => {
            println!("EQUIVALENT");
            Ok(ExitCode::SUCCESS)
        }
        Equivalence::Differs(cx) => {
            println!(
                "NOT EQUIVALENT: plane {}, Y {}, X {}",
                cx.plane,
                cx.y(),
                cx.x()
            );
            Ok(ExitCode::from(1))
        }
    }
}

fn parse_range(text: &str) -> Result<(u32, u32), CliError> {
    let bad = || {
        CliError::Usage(format!(
            "invalid --n-range {text:?}; expected A..B with 1 <= A <= B <= 16"
        ))
    };
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let (a, b): (u32, u32) = (
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    );
    if a < 1 || a > b || b > neqr_core::bitplane::MAX_ORDER {
        return Err(bad());
    }
    Ok((a, b))
}

pub fn sweep(args: SweepArgs) -> CmdResult {
    let (n_min, n_max) = parse_range(&args.n_range)?;
    let seeds: Vec<u64> = (0..args.seeds)
        .map(|i| args.seed_start.checked_add(i))
        .collect::<Option<_>>()
        .ok_or_else(|| CliError::Usage("seed range overflows u64".into()))?;
    let config = SweepConfig {
        n_min,
        n_max,
        q: args.q,
        seeds,
        model: args.model.into(),
    };
    let records = neqr_core::sweep(&config)?;
    for r in records.iter().filter(|r| r.is_regression()) {
        eprintln!(
            "warning: PPRM circuit costs more than the naive circuit at m={} seed={} ({} > {})",
            r.m, r.seed, r.qc_opt, r.qc_nonopt
        );
    }
    let out = match (args.summary, args.format) {
        (false, Format::Csv) => records_to_csv(&records),
        (false, Format::Json) => to_json(&records)?,
        (true, Format::Csv) => summaries_to_csv(&summarize(&records)),
        (true, Format::Json) => to_json(&summarize(&records))?,
    };
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

fn to_json<T: serde::Serialize + ?Sized>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Input(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn fit(args: FitArgs) -> CmdResult {
    let text = match &args.input {
        Some(p) if p.as_os_str() != "-" => read_file(p)?,
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|source| CliError::Io {
                    path: PathBuf::from("<stdin>"),
                    source,
                })?;
            s
        }
    };
    let records = parse_records(&text)?;
    if let Some(first) = records.first() {
        if records.iter().any(|r| r.model != first.model) {
            return Err(CliError::Input(
                "input mixes cost models; fit one model at a time".into(),
            ));
        }
    }
    let points: Vec<(f64, f64)> = records
        .iter()
        .map(|r| {
            let y = match args.column {
                Column::Rate => r.rate,
                Column::RatioPercent => r.ratio_percent,
            };
            (f64::from(r.m), y)
        })
        .collect();
    let family = Family::from(args.family);
    let result = neqr_core::fit(&points, family, args.init.as_deref())?;
    let out = match args.format {
        Format::Json => format!("{}\n", result.to_json()),
        Format::Csv => {
            let params: Vec<String> = result.model.params.iter().map(f64::to_string).collect();
            format!(
                "family,params,rss,iterations,converged\n{},{},{},{},{}\n",
                family.name(),
                params.join(";"),
                result.residual_sum_squares,
                result.iterations,
                result.converged
            )
        }
    };
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}

pub fn export(args: ExportArgs) -> CmdResult {
    let planes = extract_planes(&args.source.load()?);
    let circuit = match Form::from(args.form) {
        Form::Esop => synthesize_esop(&planes),
        Form::Pprm => synthesize_pprm(&planes),
    };
    std::fs::write(&args.out, export_qasm(&circuit)).map_err(|source| CliError::Io {
        path: args.out.clone(),
        source,
    })?;
    Ok(ExitCode::SUCCESS)
}

pub fn info(args: InfoArgs) -> CmdResult {
    let img = args.source.load()?;
    let planes = extract_planes(&img);
    let rows: Vec<(u64, u64)> = planes
        .planes()
        .iter()
        .map(|p| (p.count_ones(), pprm_forward(p).count_ones()))
        .collect();
    let out = match args.format {
        Format::Csv => {
            let mut s = String::from("plane,minterms,pprm_terms\n");
            for (i, (a, b)) in rows.iter().enumerate() {
                let _ = writeln!(s, "{i},{a},{b}");
            }
            s
        }
        Format::Json => {
            let planes: Vec<_> = rows
                .iter()
                .enumerate()
                .map(|(i, (a, b))| json!({ "plane": i, "minterms": a, "pprm_terms": b }))
                .collect();
            to_json(&json!({ "n": img.order(), "q": img.depth(), "planes": planes }))?
        }
    };
    print!("{out}");
    Ok(ExitCode::SUCCESS)
}
