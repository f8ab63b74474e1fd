//! Column-aligned text rendering of benchmark rows.

use super::records::ExperimentRecord;
use crate::{Error, Result};

const HEADERS: [&str; 7] = ["Basis", "PSNR(dB)", "SNR(dB)", "CR", "Time (s)", "Solver", "Experiment"];

/// Reference rows of the published dictionary comparison (BSBL-BO, CR 0.5).
pub const REFERENCE_TABLE_JSONL: &str = include_str!("../../data/published_reference.jsonl");

pub fn reference_records() -> Vec<ExperimentRecord> {
    REFERENCE_TABLE_JSONL
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| serde_json::from_str(l).expect("embedded reference table is valid"))
        .collect()
}

/// Rounds to 4 decimals and trims trailing zeros: `30.0193`, `25.32`, `0.5`.
pub fn format_number(v: f64) -> String {
    let s = format!("{v:.4}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" | "" => "0".to_string(),
        other => other.to_string(),
    }
}

pub fn render_table(records: &[ExperimentRecord]) -> Result<String> {
    if records.is_empty() {
        return Err(Error::invalid("records", "cannot render an empty table"));
    }
    let rows: Vec<[String; 7]> = records
        .iter()
        .map(|r| {
            [
                r.basis.label().to_string(),
                format_number(r.psnr_db),
                format_number(r.snr_db),
                format_number(r.cr),
                format_number(r.runtime_s),
                r.solver.name().to_string(),
                r.experiment.clone(),
            ]
        })
        .collect();
    let mut widths = HEADERS.map(str::len);
    for row in &rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let mut out = String::new();
    let mut push_row = |cells: &[&str]| {
        let line: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    };
    push_row(&HEADERS);
    for row in &rows {
        push_row(&row.iter().map(String::as_str).collect::<Vec<_>>());
    }
    Ok(out)
}

/// Collapses runs of whitespace to single spaces; handy for comparing rendered rows.
pub fn normalize_whitespace(line: &str) -> String {
    line.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_format() {
        assert_eq!(format_number(30.0193), "30.0193");
        assert_eq!(format_number(25.32), "25.32");
        assert_eq!(format_number(0.5), "0.5");
        assert_eq!(format_number(0.075), "0.075");
        assert_eq!(format_number(300.0), "300");
        assert_eq!(format_number(0.0), "0");
        assert_eq!(format_number(-1.23456), "-1.2346");
        assert_eq!(format_number(-0.00001), "0");
    }

    #[test]
    fn reference_table_rows() {
        let text = render_table(&reference_records()).unwrap();
        let lines: Vec<String> = text.lines().map(normalize_whitespace).collect();
        assert!(lines[0].starts_with("Basis PSNR(dB) SNR(dB) CR Time (s)"));
        let expected = [
            "Discrete Cosine 30.0193 13.7786 0.5 0.075",
            "Fourier 30.1583 13.9176 0.5 0.182",
            "Gabor 25.32 9.0793 0.5 0.078",
            "DPSS 28.1563 11.9156 0.5 0.078",
            "Noiselet 21.0742 4.8335 0.5 0.201",
            "Real Sinusoidal 28.9772 12.7365 0.5 0.086",
            "Wavelet 21.9056 5.6649 0.5 0.303",
        ];
        assert_eq!(lines.len(), 8);
        for (line, exp) in lines[1..].iter().zip(expected) {
            assert!(line.starts_with(exp), "{line}");
        }
    }

    #[test]
    fn empty_is_an_error() {
        assert!(render_table(&[]).is_err());
    }
}
