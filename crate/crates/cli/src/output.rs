use std::io::{self, Write};

use clap::ValueEnum;
use num_bigint::BigInt;
use podcong_core::congruence::{Candidate, SkippedInstance, VerificationReport};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

const REPORT_HEADER: [&str; 8] = [
    "family",
    "instance",
    "modulus",
    "n_max",
    "checked",
    "status",
    "counterexamples",
    "elapsed_ms",
];

/// Writes reports as NDJSON, one CSV row each, or a readable block each.
pub fn write_reports(
    out: &mut impl Write,
    format: Format,
    reports: &[VerificationReport],
) -> io::Result<()> {
    match format {
        Format::Json => {
            for r in reports {
                serde_json::to_writer(&mut *out, r)?;
                writeln!(out)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(REPORT_HEADER)?;
            for r in reports {
                let counterexamples: Vec<String> = r
                    .counterexamples
                    .iter()
                    .map(|c| {
                        format!(
                            "{}:{}:{}:{}",
                            c.n, c.index, c.pod_residue, c.expected_residue
                        )
                    })
                    .collect();
                w.write_record([
                    r.family.clone(),
                    r.instance.clone(),
                    r.modulus.to_string(),
                    r.n_max.to_string(),
                    r.checked.to_string(),
                    r.status.to_string(),
                    counterexamples.join(";"),
                    r.elapsed_ms.to_string(),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for r in reports {
                writeln!(out, "{:<9} {}  {}", r.status, r.family, r.instance)?;
                writeln!(
                    out,
                    "          checked {} (n ≤ {}) in {} ms",
                    r.checked, r.n_max, r.elapsed_ms
                )?;
                for c in &r.counterexamples {
                    writeln!(
                        out,
                        "          n={} index={} residue {} expected {}",
                        c.n, c.index, c.pod_residue, c.expected_residue
                    )?;
                }
                let hidden = r.violations.saturating_sub(r.counterexamples.len() as u64);
                if hidden > 0 {
                    writeln!(out, "          ... {hidden} more violations")?;
                }
            }
        }
    }
    Ok(())
}

/// `n,value` rows; JSON rows carry the value as a bare integer literal.
pub fn write_table(
    out: &mut impl Write,
    format: Format,
    label: &str,
    values: impl Iterator<Item = BigInt>,
) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(out, "n,value")?;
            for (n, v) in values.enumerate() {
                writeln!(out, "{n},{v}")?;
            }
        }
        Format::Json => {
            for (n, v) in values.enumerate() {
                writeln!(out, "{{\"n\":{n},\"value\":{v}}}")?;
            }
        }
        Format::Text => {
            for (n, v) in values.enumerate() {
                writeln!(out, "{label}({n}) = {v}")?;
            }
        }
    }
    Ok(())
}

pub fn write_candidates(
    out: &mut impl Write,
    format: Format,
    found: &[Candidate],
) -> io::Result<()> {
    match format {
        Format::Json => {
            for c in found {
                serde_json::to_writer(&mut *out, c)?;
                writeln!(out)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["a", "b", "modulus", "n_max", "checked"])?;
            for c in found {
                w.write_record([c.a, c.b, c.modulus, c.n_max, c.checked].map(|v| v.to_string()))?;
            }
            w.flush()?;
        }
        Format::Text => {
            for c in found {
                writeln!(
                    out,
                    "pod({}n+{}) ≡ 0 (mod {})  for 0 ≤ n ≤ {}",
                    c.a, c.b, c.modulus, c.n_max
                )?;
            }
        }
    }
    Ok(())
}

pub fn log_skipped(skipped: &[SkippedInstance]) {
    if skipped.is_empty() {
        return;
    }
    eprintln!("skipped {} admissible grid points:", skipped.len());
    for s in skipped {
        eprintln!("  {} {}: {}", s.family, s.substitution, s.reason);
    }
}
