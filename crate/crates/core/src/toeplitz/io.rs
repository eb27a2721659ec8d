//! JSON and CSV export of complex matrices. Floats are written in shortest
//! round-trip form, so reading back reproduces every bit.

use std::io::{Read, Write};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Nested rows of `[re, im]` pairs.
pub fn matrix_to_json(m: &DMatrix<Complex64>) -> String {
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect();
    serde_json::to_string(&rows).expect("finite floats serialize")
}

pub fn matrix_from_json(text: &str) -> Result<DMatrix<Complex64>> {
    let rows: Vec<Vec<[f64; 2]>> =
        serde_json::from_str(text).map_err(|e| Error::Io(format!("matrix JSON: {e}")))?;
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(Error::Io("matrix JSON rows have different lengths".into()));
    }
    Ok(DMatrix::from_fn(nrows, ncols, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

/// Flattened `m,n,re,im` records in row-major order.
pub fn matrix_to_csv<W: Write>(m: &DMatrix<Complex64>, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Io(e.to_string());
    w.write_record(["m", "n", "re", "im"]).map_err(io)?;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            let v = m[(i, j)];
            w.write_record([i.to_string(), j.to_string(), v.re.to_string(), v.im.to_string()])
                .map_err(io)?;
        }
    }
    w.flush().map_err(|e| Error::Io(e.to_string()))
}

pub fn matrix_from_csv<R: Read>(input: R) -> Result<DMatrix<Complex64>> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers().map_err(|e| Error::Io(e.to_string()))?;
    if headers != vec!["m", "n", "re", "im"] {
        return Err(Error::Io(format!("unexpected matrix CSV header {headers:?}")));
    }
    let mut entries = Vec::new();
    let (mut rows, mut cols) = (0, 0);
    for rec in r.deserialize::<(usize, usize, f64, f64)>() {
        let (i, j, re, im) = rec.map_err(|e| Error::Io(e.to_string()))?;
        rows = rows.max(i + 1);
        cols = cols.max(j + 1);
        entries.push((i, j, Complex64::new(re, im)));
    }
    if entries.len() != rows * cols {
        return Err(Error::Io(format!(
            "matrix CSV has {} records for a {rows}x{cols} matrix",
            entries.len()
        )));
    }
    let mut m = DMatrix::zeros(rows, cols);
    for (i, j, v) in entries {
        m[(i, j)] = v;
    }
    Ok(m)
}
