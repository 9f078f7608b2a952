//! Study results as CSV.
//!
//! Columns: `method, dt, error, rhs_evals_total, rhs_evals_op1 .. opN,
//! wall_seconds`. Floats use 17 significant digits so that reading a file
//! back reproduces the rows bit for bit. Blown-up rows carry `inf`.

use std::path::Path;

use crate::error::{io_err, HarnessError, Result};
use crate::study::{Row, StudyResult};

pub fn header(n_operators: usize) -> Vec<String> {
    let mut h: Vec<String> = ["method", "dt", "error", "rhs_evals_total"].map(String::from).to_vec();
    h.extend((1..=n_operators).map(|k| format!("rhs_evals_op{k}")));
    h.push("wall_seconds".into());
    h
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn to_csv(result: &StudyResult) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header(result.n_operators))?;
    for r in &result.rows {
        if r.rhs_evals_per_op.len() != result.n_operators {
            return Err(HarnessError::CsvContent(format!(
                "row for {} has {} operator counts, expected {}",
                r.method,
                r.rhs_evals_per_op.len(),
                result.n_operators
            )));
        }
        let mut rec = vec![
            r.method.clone(),
            float(r.dt),
            float(r.error),
            r.rhs_evals_total.to_string(),
        ];
        rec.extend(r.rhs_evals_per_op.iter().map(u64::to_string));
        rec.push(float(r.wall_seconds));
        w.write_record(&rec)?;
    }
    let bytes = w.into_inner().map_err(|e| HarnessError::CsvContent(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| HarnessError::CsvContent(e.to_string()))
}

pub fn from_csv(text: &str) -> Result<StudyResult> {
    let mut rd = csv::Reader::from_reader(text.as_bytes());
    let head: Vec<String> = rd.headers()?.iter().map(String::from).collect();
    if head.len() < 6 {
        return Err(HarnessError::CsvContent(format!("only {} columns", head.len())));
    }
    let n = head.len() - 5;
    if head != header(n) {
        return Err(HarnessError::CsvContent(format!("unexpected header {head:?}")));
    }
    let bad = |line: usize, what: &str| HarnessError::CsvContent(format!("record {line}: bad {what}"));
    let mut rows = Vec::new();
    for (k, rec) in rd.records().enumerate() {
        let rec = rec?;
        let line = k + 1;
        let f = |i: usize, what: &str| rec[i].trim().parse::<f64>().map_err(|_| bad(line, what));
        let u = |i: usize, what: &str| rec[i].trim().parse::<u64>().map_err(|_| bad(line, what));
        let per_op = (0..n).map(|j| u(4 + j, "operator count")).collect::<Result<Vec<_>>>()?;
        let row = Row {
            method: rec[0].to_string(),
            dt: f(1, "dt")?,
            error: f(2, "error")?,
            rhs_evals_total: u(3, "total")?,
            rhs_evals_per_op: per_op,
            wall_seconds: f(4 + n, "wall time")?,
        };
        if row.rhs_evals_per_op.iter().sum::<u64>() != row.rhs_evals_total {
            return Err(HarnessError::CsvContent(format!(
                "record {line}: operator counts do not add up"
            )));
        }
        rows.push(row);
    }
    Ok(StudyResult { n_operators: n, rows })
}

pub fn write(path: &Path, result: &StudyResult) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(io_err(dir))?;
    }
    std::fs::write(path, to_csv(result)?).map_err(io_err(path))
}

pub fn read(path: &Path) -> Result<StudyResult> {
    from_csv(&std::fs::read_to_string(path).map_err(io_err(path))?)
}
