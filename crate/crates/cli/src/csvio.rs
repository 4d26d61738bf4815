//! CSV trajectories: header `t,<columns>`, 12 significant digits, `inf` for
//! the point at infinity.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use liesys_core::{ProjValue, Trajectory};

use crate::error::CliError;

/// Column-major-free table: one row per time, first column `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        let mut header = vec!["t".to_string()];
        header.extend(columns.iter().map(|c| c.to_string()));
        Table { header, rows: Vec::new() }
    }

    pub fn push(&mut self, t: f64, values: &[f64]) {
        let mut row = Vec::with_capacity(values.len() + 1);
        row.push(t);
        row.extend_from_slice(values);
        self.rows.push(row);
    }

    pub fn from_trajectory(traj: &Trajectory, columns: &[&str]) -> Self {
        let mut table = Table::new(columns);
        for (i, &t) in traj.times().iter().enumerate() {
            table.push(t, traj.state(i));
        }
        table
    }

    pub fn times(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r[0]).collect()
    }

    /// Column `j` of the state part (0 is the first column after `t`).
    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r[j + 1]).collect()
    }

    pub fn width(&self) -> usize {
        self.header.len() - 1
    }

    /// State columns as a trajectory with finite-difference slopes.
    pub fn to_trajectory(&self, path: &Path) -> Result<Trajectory, CliError> {
        let states: Vec<f64> = self.rows.iter().flat_map(|r| r[1..].iter().copied()).collect();
        if states.iter().any(|v| !v.is_finite()) {
            return Err(CliError::Usage(format!("{}: values must be finite", path.display())));
        }
        Trajectory::from_samples(self.width(), self.times(), states)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
    }
}

/// 12 significant digits, shortest form that round-trips that rounding.
pub fn format_value(v: f64) -> String {
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let rounded: f64 = format!("{v:.11e}").parse().expect("formatted float parses");
    format!("{rounded:?}")
}

pub fn proj_to_f64(p: ProjValue) -> f64 {
    match p {
        ProjValue::Finite(x) => x,
        ProjValue::Infinity => f64::INFINITY,
    }
}

pub fn write_table(table: &Table, out: &mut dyn Write) -> Result<(), CliError> {
    let io = |e: csv::Error| CliError::Usage(format!("cannot write CSV: {e}"));
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.header).map_err(io)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|&v| format_value(v))).map_err(io)?;
    }
    w.flush().map_err(|e| CliError::Usage(format!("cannot write CSV: {e}")))
}

pub fn write_file(table: &Table, path: &Path) -> Result<(), CliError> {
    let mut file = File::create(path).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", path.display())))?;
    write_table(table, &mut file)
}

pub fn read_file(path: &Path) -> Result<Table, CliError> {
    let bad = |msg: String| CliError::Usage(format!("{}: {msg}", path.display()));
    let mut r = csv::Reader::from_path(path).map_err(|e| bad(e.to_string()))?;
    let header: Vec<String> = r.headers().map_err(|e| bad(e.to_string()))?.iter().map(str::to_string).collect();
    if header.len() < 2 || header[0] != "t" {
        return Err(bad("expected a header `t,<columns>`".into()));
    }
    let mut rows = Vec::new();
    for (i, record) in r.records().enumerate() {
        let record = record.map_err(|e| bad(e.to_string()))?;
        let row = record
            .iter()
            .map(|s| match s.trim().parse::<f64>() {
                Ok(v) if !v.is_nan() => Ok(v),
                _ => Err(bad(format!("row {}: `{s}` is not a number", i + 2))),
            })
            .collect::<Result<Vec<f64>, _>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(bad("no data rows".into()));
    }
    Ok(Table { header, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(format_value(1.0f64.tan()), "1.55740772465");
        assert_eq!(format_value(1.0), "1.0");
        assert_eq!(format_value(-2.5e-9), "-2.5e-9");
        assert_eq!(format_value(1.0 / 3.0), "0.333333333333");
        assert_eq!(format_value(f64::INFINITY), "inf");
        assert_eq!(format_value(f64::NEG_INFINITY), "-inf");
    }

    #[test]
    fn round_trip_through_text() {
        let mut t = Table::new(&["x"]);
        t.push(0.0, &[0.5]);
        t.push(0.25, &[f64::INFINITY]);
        let mut buf = Vec::new();
        write_table(&t, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text, "t,x\n0.0,0.5\n0.25,inf\n");
    }
}
