//! Ledger checkpoint files: line-oriented `x<TAB>E<TAB>F` with 15
//! significant digits. Re-reading and re-writing a file reproduces it byte
//! for byte (the decimal representation is a fixed point of parse∘format).

use std::fs;
use std::path::Path;

use mospec_core::{AdditiveSpec, Checkpoint, PrimeSumLedger};

use crate::error::{CliError, Result};

/// 15 significant digits.
fn fmt15(v: f64) -> String {
    format!("{v:.14e}")
}

pub fn write_ledger(path: &Path, ledger: &PrimeSumLedger) -> Result<()> {
    let mut out = String::new();
    for c in &ledger.checkpoints {
        out.push_str(&format!("{}\t{}\t{}\n", c.x, fmt15(c.e_sum), fmt15(c.f_sum)));
    }
    fs::write(path, out).map_err(CliError::io(path))
}

pub fn read_ledger(path: &Path, spec: &AdditiveSpec) -> Result<PrimeSumLedger> {
    let text = fs::read_to_string(path).map_err(CliError::io(path))?;
    let mut checkpoints = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.is_empty() {
            continue;
        }
        let mut cols = line.split('\t');
        let parse_err = |col: &str| {
            CliError::Usage(format!(
                "{}: malformed checkpoint at line {}: bad value `{col}`",
                path.display(),
                lineno + 1
            ))
        };
        let x = cols
            .next()
            .ok_or_else(|| parse_err(""))
            .and_then(|c| c.parse::<u64>().map_err(|_| parse_err(c)))?;
        let e_sum = cols
            .next()
            .ok_or_else(|| parse_err(""))
            .and_then(|c| c.parse::<f64>().map_err(|_| parse_err(c)))?;
        let f_sum = cols
            .next()
            .ok_or_else(|| parse_err(""))
            .and_then(|c| c.parse::<f64>().map_err(|_| parse_err(c)))?;
        if cols.next().is_some() {
            return Err(CliError::Usage(format!(
                "{}: malformed checkpoint at line {}: too many columns",
                path.display(),
                lineno + 1
            )));
        }
        checkpoints.push(Checkpoint { x, e_sum, f_sum });
    }
    Ok(PrimeSumLedger {
        spec_id: spec.id(),
        checkpoints,
    })
}

/// File name for one spec's ledger inside the checkpoint directory.
pub fn ledger_file_name(spec: &AdditiveSpec) -> String {
    format!("{}.ledger", crate::report::sanitize(&spec.id()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_byte_stable() {
        let spec = AdditiveSpec::AllOnes;
        let ledger = PrimeSumLedger::build(&spec, 10_000, &[1024]);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("omega.ledger");
        write_ledger(&path, &ledger).unwrap();
        let bytes1 = fs::read(&path).unwrap();
        let read = read_ledger(&path, &spec).unwrap();
        write_ledger(&path, &read).unwrap();
        let bytes2 = fs::read(&path).unwrap();
        assert_eq!(bytes1, bytes2);
        // and values match to parsing precision
        for (a, b) in ledger.checkpoints.iter().zip(&read.checkpoints) {
            assert_eq!(a.x, b.x);
            assert!((a.e_sum - b.e_sum).abs() <= 1e-14 * a.e_sum.max(1.0));
        }
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.ledger");
        fs::write(&path, "1024\tabc\t0e0\n").unwrap();
        let err = read_ledger(&path, &AdditiveSpec::AllOnes).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("line 1") && msg.contains("abc"), "{msg}");
    }
}
