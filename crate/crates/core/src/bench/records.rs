//! Persistence of benchmark rows as JSON lines plus a CSV mirror.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dictionaries::BasisKind;
use crate::solvers::SolverKind;
use crate::{Error, Result};

/// One benchmark run. Field order is the serialized key order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub basis: BasisKind,
    pub solver: SolverKind,
    pub n: usize,
    pub m: usize,
    pub cr: f64,
    pub snr_db: f64,
    pub psnr_db: f64,
    pub spike_snr_db: Option<f64>,
    pub runtime_s: f64,
    pub iterations: usize,
    pub converged: bool,
    pub trial_seed: u64,
}

/// `records.jsonl` -> `records.csv`.
pub fn csv_sibling(path: &Path) -> PathBuf {
    path.with_extension("csv")
}

/// Writes one JSON object per line to `path` and the same rows to its CSV sibling.
pub fn write_records(records: &[ExperimentRecord], path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
    let mut out = BufWriter::new(file);
    for r in records {
        serde_json::to_writer(&mut out, r)?;
        out.write_all(b"\n")
            .map_err(|e| Error::io(format!("writing {}", path.display()), e))?;
    }
    out.flush()
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))?;

    let csv_path = csv_sibling(path);
    let mut w = csv::Writer::from_path(&csv_path)?;
    for r in records {
        w.serialize(r)?;
    }
    w.flush()
        .map_err(|e| Error::io(format!("writing {}", csv_path.display()), e))?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io(format!("reading {}", path.display()), e))?;
        if line.trim().is_empty() {
            continue;
        }
        let rec = serde_json::from_str(&line)
            .map_err(|e| Error::Config(format!("{}: line {}: {e}", path.display(), i + 1)))?;
        records.push(rec);
    }
    Ok(records)
}

pub fn read_records_csv(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn sample(i: usize) -> ExperimentRecord {
        ExperimentRecord {
            experiment: "dict_compare".into(),
            basis: BasisKind::ALL[i % 8],
            solver: SolverKind::ALL[i % 2],
            n: 256,
            m: 128,
            cr: 0.5,
            snr_db: 10.0 + i as f64 * 0.123456789,
            psnr_db: 25.5,
            spike_snr_db: if i.is_multiple_of(2) { Some(7.25) } else { None },
            runtime_s: 0.01 * i as f64,
            iterations: 17 + i,
            converged: !i.is_multiple_of(3),
            trial_seed: u64::MAX - i as u64,
        }
    }

    #[test]
    fn round_trip_jsonl_and_csv() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("records.jsonl");
        let recs: Vec<_> = (0..6).map(sample).collect();
        write_records(&recs, &p).unwrap();
        assert_eq!(read_records(&p).unwrap(), recs);
        assert_eq!(read_records_csv(&csv_sibling(&p)).unwrap(), recs);
    }

    proptest::proptest! {
        #[test]
        fn floats_round_trip_bit_exact(snr in -1e3f64..1e3, psnr in proptest::num::f64::NORMAL, t in 0f64..1e4) {
            let dir = tempfile::tempdir().unwrap();
            let p = dir.path().join("r.jsonl");
            let rec = ExperimentRecord { snr_db: snr, psnr_db: psnr, runtime_s: t, ..sample(0) };
            write_records(std::slice::from_ref(&rec), &p).unwrap();
            proptest::prop_assert_eq!(&read_records(&p).unwrap()[0], &rec);
            proptest::prop_assert_eq!(&read_records_csv(&csv_sibling(&p)).unwrap()[0], &rec);
        }
    }

    #[test]
    fn stable_key_order() {
        let line = serde_json::to_string(&sample(0)).unwrap();
        let keys = [
            "experiment",
            "basis",
            "solver",
            "n",
            "m",
            "cr",
            "snr_db",
            "psnr_db",
            "spike_snr_db",
            "runtime_s",
            "iterations",
            "converged",
            "trial_seed",
        ];
        let mut last = 0;
        for k in keys {
            let pos = line.find(&format!("\"{k}\":")).unwrap();
            assert!(pos >= last, "{k} out of order in {line}");
            last = pos;
        }
    }

    #[test]
    fn unwritable_path() {
        let recs = vec![sample(1)];
        assert!(write_records(&recs, Path::new("/nonexistent-dir/x/records.jsonl")).is_err());
    }
}
