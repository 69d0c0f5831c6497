//! OpenQASM 3 text for NEQR circuits.
//!
//! Layout of an exported file:
//!
//! ```text
//! OPENQASM 3.0;
//! include "stdgates.inc";
//! // neqr form=<esop|pprm> n=<n> q=<q>
//! qubit[<2n>] coord;
//! qubit[<q>] gray;
//! h coord[0];            one line per coordinate qubit, ascending
//! ...
//! <gate lines>           plane-major, ascending control mask
//! ```
//!
//! Coordinate qubit `coord[i]` is variable `x_i` (X bits low, Y bits high).
//! A gate line is one of
//!
//! ```text
//! x gray[t];
//! ctrl(p) @ x coord[..], ..., gray[t];
//! negctrl(k) @ x coord[..], ..., gray[t];
//! ctrl(p) @ negctrl(k) @ x <p positive controls>, <k negative controls>, gray[t];
//! ```
//!
//! with each control group listed in descending qubit index. The metadata
//! comment is what [`parse_qasm`] uses to recover the circuit form.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Circuit, CircuitError, Form, ProductTerm};

pub const QASM_HEADER: &str = "OPENQASM 3.0;\ninclude \"stdgates.inc\";\n";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QasmError {
    #[error("line {line}: {reason}")]
    Syntax { line: usize, reason: String },
    #[error("missing `// neqr form=.. n=.. q=..` metadata line")]
    MissingMetadata,
    #[error(transparent)]
    Circuit(#[from] CircuitError),
}

fn push_controls(out: &mut String, mask: u32) {
    for i in (0..32).rev().filter(|i| mask >> i & 1 == 1) {
        let _ = write!(out, "coord[{i}], ");
    }
}

pub fn export_qasm(c: &Circuit) -> String {
    let mut out = String::from(QASM_HEADER);
    let vars = c.coordinate_vars();
    let _ = writeln!(
        out,
        "// neqr form={} n={} q={}",
        c.form().name(),
        c.order(),
        c.depth()
    );
    let _ = writeln!(out, "qubit[{vars}] coord;");
    let _ = writeln!(out, "qubit[{}] gray;", c.depth());
    for i in 0..vars {
        let _ = writeln!(out, "h coord[{i}];");
    }
    for (plane, t) in c.iter() {
        let (p, k) = (t.positive.count_ones(), t.negative.count_ones());
        if p > 0 {
            let _ = write!(out, "ctrl({p}) @ ");
        }
        if k > 0 {
            let _ = write!(out, "negctrl({k}) @ ");
        }
        out.push_str("x ");
        push_controls(&mut out, t.positive);
        push_controls(&mut out, t.negative);
        let _ = writeln!(out, "gray[{plane}];");
    }
    out
}

fn syntax(line: usize, reason: impl Into<String>) -> QasmError {
    QasmError::Syntax {
        line,
        reason: reason.into(),
    }
}

fn parse_index(operand: &str, register: &str, size: u32, line: usize) -> Result<u32, QasmError> {
    let idx = operand
        .strip_prefix(register)
        .and_then(|s| s.strip_prefix('['))
        .and_then(|s| s.strip_suffix(']'))
        .and_then(|s| s.parse::<u32>().ok())
        .ok_or_else(|| syntax(line, format!("expected {register}[i], found {operand:?}")))?;
    if idx >= size {
        return Err(syntax(
            line,
            format!("{register}[{idx}] outside register of size {size}"),
        ));
    }
    Ok(idx)
}

fn parse_modifier(text: &str, name: &str, line: usize) -> Result<Option<(u32, String)>, QasmError> {
    let Some(rest) = text.strip_prefix(name).and_then(|r| r.strip_prefix('(')) else {
        return Ok(None);
    };
    let (count, rest) = rest
        .split_once(')')
        .ok_or_else(|| syntax(line, format!("unterminated {name}(..)")))?;
    let count: u32 = count
        .trim()
        .parse()
        .map_err(|_| syntax(line, format!("bad {name} count {count:?}")))?;
    let rest = rest
        .trim_start()
        .strip_prefix('@')
        .ok_or_else(|| syntax(line, format!("expected `@` after {name}({count})")))?;
    Ok(Some((count, rest.trim_start().to_string())))
}

/// Reads back a circuit written by [`export_qasm`].
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let mut meta: Option<(Form, u32, u32)> = None;
    let mut planes: Vec<Vec<ProductTerm>> = Vec::new();
    let mut declared = (false, false);

    for (lineno, raw) in text.lines().enumerate() {
        let line = lineno + 1;
        let stmt = raw.trim();
        if let Some(comment) = stmt.strip_prefix("//") {
            if let Some(fields) = comment.trim().strip_prefix("neqr ") {
                meta = Some(parse_metadata(fields, line)?);
                planes = vec![Vec::new(); meta.map_or(0, |(_, _, q)| q as usize)];
            }
            continue;
        }
        if stmt.is_empty() || stmt == "OPENQASM 3.0;" || stmt == "include \"stdgates.inc\";" {
            continue;
        }
        let (_, n, q) = meta.ok_or(QasmError::MissingMetadata)?;
        let vars = 2 * n;
        let body = stmt
            .strip_suffix(';')
            .ok_or_else(|| syntax(line, "statement must end with `;`"))?
            .trim();

        if let Some(decl) = body.strip_prefix("qubit[") {
            let (size, name) = decl
                .split_once(']')
                .ok_or_else(|| syntax(line, "malformed qubit declaration"))?;
            let size: u32 = size
                .parse()
                .map_err(|_| syntax(line, "malformed register size"))?;
            match (name.trim(), size) {
                ("coord", s) if s == vars => declared.0 = true,
                ("gray", s) if s == q => declared.1 = true,
                (name, s) => return Err(syntax(line, format!("unexpected register {name}[{s}]"))),
            }
            continue;
        }
        if !(declared.0 && declared.1) {
            return Err(syntax(line, "gate before register declarations"));
        }
        if let Some(operand) = body.strip_prefix("h ") {
            parse_index(operand.trim(), "coord", vars, line)?;
            continue;
        }

        let (positive_count, rest) =
            parse_modifier(body, "ctrl", line)?.unwrap_or((0, body.to_string()));
        let (negative_count, rest) = parse_modifier(&rest, "negctrl", line)?.unwrap_or((0, rest));
        let operands = rest
            .strip_prefix("x ")
            .ok_or_else(|| syntax(line, format!("unrecognized statement {stmt:?}")))?;
        let operands: Vec<&str> = operands.split(',').map(str::trim).collect();
        let expected = (positive_count + negative_count + 1) as usize;
        if operands.len() != expected {
            return Err(syntax(
                line,
                format!("expected {expected} operands, found {}", operands.len()),
            ));
        }
        let mut term = ProductTerm::positive(0);
        for (slot, operand) in operands[..expected - 1].iter().enumerate() {
            let bit = 1u32 << parse_index(operand, "coord", vars, line)?;
            if (term.positive | term.negative) & bit != 0 {
                return Err(syntax(line, format!("control {operand} repeated")));
            }
            if (slot as u32) < positive_count {
                term.positive |= bit;
            } else {
                term.negative |= bit;
            }
        }
        let target = parse_index(operands[expected - 1], "gray", q, line)?;
        planes[target as usize].push(term);
    }

    let (form, n, q) = meta.ok_or(QasmError::MissingMetadata)?;
    Ok(Circuit::new(n, q, form, planes)?)
}

fn parse_metadata(fields: &str, line: usize) -> Result<(Form, u32, u32), QasmError> {
    let (mut form, mut n, mut q) = (None, None, None);
    for field in fields.split_whitespace() {
        match field.split_once('=') {
            Some(("form", "esop")) => form = Some(Form::Esop),
            Some(("form", "pprm")) => form = Some(Form::Pprm),
            Some(("n", v)) => n = v.parse().ok(),
            Some(("q", v)) => q = v.parse().ok(),
            _ => return Err(syntax(line, format!("bad metadata field {field:?}"))),
        }
    }
    match (form, n, q) {
        (Some(form), Some(n), Some(q)) => Ok((form, n, q)),
        _ => Err(syntax(line, "metadata needs form, n and q")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bitplane::{extract_planes, random_image, GrayImage};
    use crate::circuit::{synthesize_esop, synthesize_pprm};

    #[test]
    fn single_toffoli_line() {
        let img = GrayImage::new(1, 1, vec![0, 0, 0, 1]).unwrap();
        let text = export_qasm(&synthesize_esop(&extract_planes(&img)));
        assert!(
            text.ends_with("h coord[1];\nctrl(2) @ x coord[1], coord[0], gray[0];\n"),
            "{text}"
        );
    }

    #[test]
    fn empty_circuit_is_preamble_only() {
        let c = Circuit::new(1, 2, Form::Pprm, vec![vec![], vec![]]).unwrap();
        assert_eq!(
            export_qasm(&c),
            "OPENQASM 3.0;\ninclude \"stdgates.inc\";\n// neqr form=pprm n=1 q=2\n\
             qubit[2] coord;\nqubit[2] gray;\nh coord[0];\nh coord[1];\n"
        );
    }

    #[test]
    fn constant_term_and_mixed_polarity_lines() {
        let c = Circuit::new(
            1,
            2,
            Form::Pprm,
            vec![
                vec![],
                vec![ProductTerm::positive(0), ProductTerm::positive(1)],
            ],
        )
        .unwrap();
        let text = export_qasm(&c);
        assert!(text.contains("\nx gray[1];\nctrl(1) @ x coord[0], gray[1];\n"));

        let c = Circuit::new(
            1,
            1,
            Form::Esop,
            vec![vec![
                ProductTerm::minterm(0b10, 2),
                ProductTerm::minterm(0, 2),
            ]],
        )
        .unwrap();
        let text = export_qasm(&c);
        assert!(text.contains("\nctrl(1) @ negctrl(1) @ x coord[1], coord[0], gray[0];\n"));
        assert!(text.contains("\nnegctrl(2) @ x coord[1], coord[0], gray[0];\n"));
    }

    #[test]
    fn export_parse_round_trip() {
        for seed in 0..5 {
            let planes = extract_planes(&random_image(2, 4, seed).unwrap());
            for c in [synthesize_esop(&planes), synthesize_pprm(&planes)] {
                assert_eq!(parse_qasm(&export_qasm(&c)).unwrap(), c);
            }
        }
    }

    #[test]
    fn parse_rejects_bad_input() {
        let good = export_qasm(&synthesize_pprm(&extract_planes(
            &random_image(1, 2, 3).unwrap(),
        )));
        assert_eq!(
            parse_qasm(&good.replace("// neqr form=pprm n=1 q=2\n", "")),
            Err(QasmError::MissingMetadata)
        );
        assert!(matches!(
            parse_qasm(&good.replace("qubit[2] gray;", "qubit[3] gray;")),
            Err(QasmError::Syntax { line: 5, .. })
        ));
        let with_bad_gate = format!("{good}ctrl(2) @ x coord[0], gray[0];\n");
        assert!(matches!(
            parse_qasm(&with_bad_gate),
            Err(QasmError::Syntax { .. })
        ));
        let repeated = format!("{good}ctrl(2) @ x coord[0], coord[0], gray[0];\n");
        assert!(matches!(
            parse_qasm(&repeated),
            Err(QasmError::Syntax { .. })
        ));
        let out_of_range = format!("{good}x gray[2];\n");
        assert!(matches!(
            parse_qasm(&out_of_range),
            Err(QasmError::Syntax { .. })
        ));
        let negated = format!("{good}negctrl(1) @ x coord[1], gray[0];\n");
        assert!(matches!(parse_qasm(&negated), Err(QasmError::Circuit(_))));
    }
}
