//! Long-format CSVs for surfaces and crossing curves.
//!
//! The surface file has header `year,length_m,clear_a,clear_b` with one row
//! per grid cell, years outermost. The crossing file has header
//! `year,crossing_length_m`; the length cell is empty when the two
//! technologies do not cross in range.

use std::io::{Read, Write};

use clearfom_core::{CrossingResult, SurfaceGrid};

use crate::numfmt::fmt_f64;
use crate::FormatError;

pub const GRID_HEADER: [&str; 4] = ["year", "length_m", "clear_a", "clear_b"];
pub const CROSSING_HEADER: [&str; 2] = ["year", "crossing_length_m"];

/// Grid axes and matrices as read back from a surface CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct GridValues {
    pub years: Vec<f64>,
    pub lengths: Vec<f64>,
    pub values_a: Vec<Vec<f64>>,
    pub values_b: Vec<Vec<f64>>,
}

impl GridValues {
    pub fn matches(&self, grid: &SurfaceGrid) -> bool {
        self.years == grid.years
            && self.lengths == grid.lengths
            && self.values_a == grid.values_a
            && self.values_b == grid.values_b
    }
}

fn sink_err(e: csv::Error) -> FormatError {
    FormatError::SinkWrite(e.into())
}

/// Writes the surface in long format and returns the number of data rows.
pub fn emit_grid_csv<W: Write>(grid: &SurfaceGrid, sink: W) -> Result<usize, FormatError> {
    grid.validate()?;
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(GRID_HEADER).map_err(sink_err)?;
    let mut rows = 0;
    for (i, &year) in grid.years.iter().enumerate() {
        for (j, &len) in grid.lengths.iter().enumerate() {
            let row = [fmt_f64(year), fmt_f64(len), fmt_f64(grid.values_a[i][j]), fmt_f64(grid.values_b[i][j])];
            w.write_record(&row).map_err(sink_err)?;
            rows += 1;
        }
    }
    w.flush().map_err(FormatError::SinkWrite)?;
    Ok(rows)
}

fn check_header(found: &csv::StringRecord, expected: &[&str]) -> Result<(), FormatError> {
    if found.iter().ne(expected.iter().copied()) {
        return Err(FormatError::MalformedHeader(format!(
            "expected `{}`, got `{}`",
            expected.join(","),
            found.iter().collect::<Vec<_>>().join(",")
        )));
    }
    Ok(())
}

fn number(rec: &csv::StringRecord, idx: usize, column: &str) -> Result<f64, FormatError> {
    let row = rec.position().map_or(0, |p| p.line());
    rec[idx].parse().map_err(|_| FormatError::MalformedRow {
        row,
        column: column.to_string(),
        reason: format!("{:?} is not a number", &rec[idx]),
    })
}

fn records<R: Read>(source: R, header: &[&str]) -> Result<Vec<csv::StringRecord>, FormatError> {
    let mut reader = csv::Reader::from_reader(source);
    let found = reader.headers().map_err(|e| FormatError::MalformedHeader(e.to_string()))?.clone();
    check_header(&found, header)?;
    reader
        .records()
        .map(|r| {
            r.map_err(|e| FormatError::MalformedRow {
                row: e.position().map_or(0, |p| p.line()),
                column: "(record)".into(),
                reason: e.to_string(),
            })
        })
        .collect()
}

/// Reads a surface CSV written by [`emit_grid_csv`].
pub fn read_grid_csv<R: Read>(source: R) -> Result<GridValues, FormatError> {
    let rows = records(source, &GRID_HEADER)?;
    if rows.is_empty() {
        return Err(FormatError::EmptyDataset);
    }
    let mut years: Vec<f64> = Vec::new();
    let mut lengths: Vec<f64> = Vec::new();
    let mut values_a: Vec<Vec<f64>> = Vec::new();
    let mut values_b: Vec<Vec<f64>> = Vec::new();
    for rec in &rows {
        let year = number(rec, 0, "year")?;
        let len = number(rec, 1, "length_m")?;
        let (a, b) = (number(rec, 2, "clear_a")?, number(rec, 3, "clear_b")?);
        if years.last() != Some(&year) {
            years.push(year);
            values_a.push(Vec::new());
            values_b.push(Vec::new());
        }
        let col = values_a.last().map_or(0, Vec::len);
        if years.len() == 1 {
            lengths.push(len);
        } else if lengths.get(col) != Some(&len) {
            return Err(FormatError::MalformedRow {
                row: rec.position().map_or(0, |p| p.line()),
                column: "length_m".into(),
                reason: "lengths differ between years".into(),
            });
        }
        values_a.last_mut().expect("row pushed").push(a);
        values_b.last_mut().expect("row pushed").push(b);
    }
    if values_a.iter().any(|row| row.len() != lengths.len()) {
        return Err(FormatError::InvalidArgument("surface CSV is not a complete year x length grid".into()));
    }
    Ok(GridValues { years, lengths, values_a, values_b })
}

/// Writes one `year,crossing_length_m` row per year.
pub fn emit_crossing_csv<W: Write>(curve: &[(f64, CrossingResult)], sink: W) -> Result<usize, FormatError> {
    let mut w = csv::Writer::from_writer(sink);
    w.write_record(CROSSING_HEADER).map_err(sink_err)?;
    for (year, result) in curve {
        let len = result.length_m().map(fmt_f64).unwrap_or_default();
        w.write_record([fmt_f64(*year), len]).map_err(sink_err)?;
    }
    w.flush().map_err(FormatError::SinkWrite)?;
    Ok(curve.len())
}

/// Reads a crossing CSV; `None` marks years without a crossing.
pub fn read_crossing_csv<R: Read>(source: R) -> Result<Vec<(f64, Option<f64>)>, FormatError> {
    records(source, &CROSSING_HEADER)?
        .iter()
        .map(|rec| {
            let year = number(rec, 0, "year")?;
            let len = if rec[1].is_empty() { None } else { Some(number(rec, 1, "crossing_length_m")?) };
            Ok((year, len))
        })
        .collect()
}
