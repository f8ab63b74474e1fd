//! Dense matrices as CSV: one row per line, shortest round-trip float text.

use std::path::Path;

use nalgebra::DMatrix;

use crate::{Error, Result};

pub fn write_matrix_csv(m: &DMatrix<f64>, path: &Path) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_path(path)?;
    for row in m.row_iter() {
        w.write_record(row.iter().map(|v| v.to_string()))?;
    }
    w.flush()
        .map_err(|e| Error::io(format!("writing {}", path.display()), e))
}

pub fn read_matrix_csv(path: &Path) -> Result<DMatrix<f64>> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_path(path)?;
    let mut values = Vec::new();
    let mut ncols = None;
    let mut nrows = 0;
    for (line, rec) in r.records().enumerate() {
        let rec = rec?;
        if *ncols.get_or_insert(rec.len()) != rec.len() {
            return Err(Error::mismatch("matrix csv row width", ncols.unwrap(), rec.len()));
        }
        for field in rec.iter() {
            let v = field.trim().parse::<f64>().map_err(|_| Error::ParseLine {
                path: path.to_path_buf(),
                line: line + 1,
                content: field.to_string(),
            })?;
            values.push(v);
        }
        nrows += 1;
    }
    let ncols = ncols.ok_or_else(|| Error::EmptyFile {
        path: path.to_path_buf(),
    })?;
    Ok(DMatrix::from_row_slice(nrows, ncols, &values))
}
