//! Serialization of conformance reports, digit laws, samples and histograms.

use std::fmt::Write as _;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use benford_core::{ConformanceReport, DigitPmf, LogValue, MantissaHistogram};
use clap::ValueEnum;
use serde_json::json;

use crate::error::CliError;
use crate::ingest::SAMPLE_COLUMN;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Text,
}

/// Writes `body` to `path`, or to standard output when `path` is `None`.
pub fn write_output(path: Option<&Path>, body: &str) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let file = File::create(p).map_err(|e| CliError::io(p, e))?;
            let mut w = BufWriter::new(file);
            w.write_all(body.as_bytes())
                .and_then(|_| w.flush())
                .map_err(|e| CliError::io(p, e))
        }
        None => {
            let mut out = io::stdout().lock();
            out.write_all(body.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::io("<stdout>", e))
        }
    }
}

pub fn render_report(report: &ConformanceReport, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        OutputFormat::Text => report_table(report),
    }
}

fn report_table(report: &ConformanceReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "base {} position {}, {} samples",
        report.spec.base(),
        report.spec.position(),
        report.sample_size
    );
    let _ = writeln!(
        s,
        "{:>5} {:>10} {:>10} {:>10}",
        "digit", "expected", "observed", "diff"
    );
    for (digit, expected) in &report.expected {
        let observed = report.observed.get(digit).copied().unwrap_or(0.0);
        let _ = writeln!(
            s,
            "{:>5} {:>10.6} {:>10.6} {:>+10.6}",
            digit,
            expected,
            observed,
            observed - expected
        );
    }
    let stats = [
        ("chi_square", report.chi_square),
        ("chi_square_critical", report.chi_square_critical),
        ("mad", report.mad),
        ("ks_mantissa", report.ks_mantissa),
        ("decades_spanned", report.decades_spanned),
    ];
    for (label, value) in stats {
        let _ = writeln!(s, "{label:>19} {value:>14.6}");
    }
    let _ = writeln!(s, "verdict: {}", report.verdict);
    s
}

/// Emits a report as JSON or as a text table.
pub fn emit_report(
    report: &ConformanceReport,
    format: OutputFormat,
    path: Option<&Path>,
) -> Result<(), CliError> {
    write_output(path, &render_report(report, format))
}

/// `digit,expected,observed`, one row per digit.
pub fn plot_data_csv(report: &ConformanceReport) -> String {
    let mut s = String::from("digit,expected,observed\n");
    for (digit, expected) in &report.expected {
        let observed = report.observed.get(digit).copied().unwrap_or(0.0);
        let _ = writeln!(s, "{digit},{expected},{observed}");
    }
    s
}

pub fn render_pmf(pmf: &DigitPmf, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => pmf.iter().map(|(d, p)| format!("{d} {p:.10}\n")).collect(),
        OutputFormat::Json => {
            let probabilities: serde_json::Map<String, serde_json::Value> =
                pmf.iter().map(|(d, p)| (d.to_string(), json!(p))).collect();
            let mut s = serde_json::to_string_pretty(&json!({
                "base": pmf.spec().base(),
                "position": pmf.spec().position(),
                "probabilities": probabilities,
            }))
            .expect("pmf serializes");
            s.push('\n');
            s
        }
    }
}

/// Single-column `log10_value` CSV. `f64` display is the shortest string
/// that parses back to the same bits.
pub fn samples_csv(values: &[LogValue]) -> String {
    let mut s = String::with_capacity(values.len() * 20 + 16);
    s.push_str(SAMPLE_COLUMN);
    s.push('\n');
    for v in values {
        let _ = writeln!(s, "{}", v.log10());
    }
    s
}

pub fn render_mantissa(hist: &MantissaHistogram, ks: f64, format: OutputFormat) -> String {
    match format {
        OutputFormat::Text => {
            let mut s = String::from("bin_lo,bin_hi,count,frequency\n");
            for (i, (count, freq)) in hist.counts().iter().zip(hist.frequencies()).enumerate() {
                let (lo, hi) = hist.bin_edges(i);
                let _ = writeln!(s, "{lo},{hi},{count},{freq}");
            }
            s
        }
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(&json!({
                "bin_count": hist.bin_count(),
                "total": hist.total(),
                "counts": hist.counts(),
                "frequencies": hist.frequencies(),
                "ks_mantissa": ks,
            }))
            .expect("histogram serializes");
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use benford_core::{benford_pmf, conformance_report, DigitLawSpec};
    use proptest::prelude::*;

    fn report(values: &[f64]) -> ConformanceReport {
        let logs: Vec<LogValue> = values.iter().map(|&v| LogValue::new(v).unwrap()).collect();
        conformance_report(&logs, DigitLawSpec::leading(10).unwrap(), 0.01).unwrap()
    }

    #[test]
    fn plot_data_has_one_row_per_digit() {
        let r = report(&[0.0, 0.5, 0.9]);
        let csv = plot_data_csv(&r);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "digit,expected,observed");
        assert_eq!(lines.len(), 10);
        assert!(lines[1].starts_with("1,0.30102999566398"));
    }

    #[test]
    fn text_table_ends_with_verdict() {
        let text = render_report(&report(&[0.1, 0.2]), OutputFormat::Text);
        assert!(text.ends_with("verdict: insufficient_data\n"));
        assert!(text.contains("    1   0.301030"));
    }

    #[test]
    fn pmf_text_lines() {
        let text = render_pmf(
            &benford_pmf(DigitLawSpec::leading(10).unwrap()),
            OutputFormat::Text,
        );
        assert_eq!(text.lines().count(), 9);
        assert_eq!(text.lines().next(), Some("1 0.3010299957"));
    }

    proptest! {
        #[test]
        fn json_report_round_trips(raw in prop::collection::vec(-400.0f64..400.0, 1..200)) {
            let r = report(&raw);
            let json = render_report(&r, OutputFormat::Json);
            let back: ConformanceReport = serde_json::from_str(&json).unwrap();
            prop_assert_eq!(&back, &r);
        }

        #[test]
        fn sample_csv_round_trips(raw in prop::collection::vec(-1e4f64..1e4, 1..200)) {
            let logs: Vec<LogValue> = raw.iter().map(|&v| LogValue::new(v).unwrap()).collect();
            let text = samples_csv(&logs);
            let back: Vec<f64> = text.lines().skip(1).map(|l| l.parse().unwrap()).collect();
            prop_assert_eq!(back, raw);
        }
    }
}
