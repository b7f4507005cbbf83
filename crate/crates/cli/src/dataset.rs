//! Historical-record CSV.
//!
//! The header is exactly
//! `year,label,tech_class,component_count,mips,size_m3,power_w,cost_usd,instruction_length_bits`,
//! optionally followed by a `latency_s` column. Empty cells are absent
//! optional values. Rows are returned sorted by year.

use std::io::{Read, Write};

use clearfom_core::{Dataset, HistoricalRecord, TechClass};

use crate::numfmt::fmt_f64;
use crate::FormatError;

pub const HEADER: [&str; 9] = [
    "year",
    "label",
    "tech_class",
    "component_count",
    "mips",
    "size_m3",
    "power_w",
    "cost_usd",
    "instruction_length_bits",
];
pub const LATENCY_COLUMN: &str = "latency_s";

fn malformed(row: u64, column: &str, reason: impl Into<String>) -> FormatError {
    FormatError::MalformedRow { row, column: column.to_string(), reason: reason.into() }
}

fn optional_f64(row: u64, column: &str, cell: &str) -> Result<Option<f64>, FormatError> {
    if cell.is_empty() {
        return Ok(None);
    }
    let v: f64 = cell.parse().map_err(|_| malformed(row, column, format!("{cell:?} is not a number")))?;
    if !(v.is_finite() && v > 0.0) {
        return Err(malformed(row, column, format!("{cell} must be strictly positive")));
    }
    Ok(Some(v))
}

/// Reads and validates a dataset.
pub fn ingest_csv<R: Read>(source: R) -> Result<Dataset, FormatError> {
    let mut reader = csv::ReaderBuilder::new().has_headers(true).flexible(true).from_reader(source);
    let header = reader.headers().map_err(|e| FormatError::MalformedHeader(e.to_string()))?.clone();
    let names: Vec<&str> = header.iter().collect();
    let with_latency = match names.len() {
        9 => false,
        10 if names[9] == LATENCY_COLUMN => true,
        _ => {
            return Err(FormatError::MalformedHeader(format!(
                "expected `{}` (optionally followed by `{LATENCY_COLUMN}`), got `{}`",
                HEADER.join(","),
                names.join(",")
            )))
        }
    };
    if names[..9] != HEADER {
        return Err(FormatError::MalformedHeader(format!(
            "expected `{}`, got `{}`",
            HEADER.join(","),
            names.join(",")
        )));
    }

    let mut records = Vec::new();
    for result in reader.records() {
        let rec = result.map_err(|e| {
            let row = e.position().map_or(0, |p| p.line());
            malformed(row, "(record)", e.to_string())
        })?;
        let row = rec.position().map_or(0, |p| p.line());
        if rec.len() != names.len() {
            return Err(malformed(row, "(record)", format!("expected {} fields, found {}", names.len(), rec.len())));
        }
        let year: f64 = rec[0].parse().map_err(|_| malformed(row, "year", format!("{:?} is not a number", &rec[0])))?;
        if !(year.is_finite() && (1900.0..=2100.0).contains(&year)) {
            return Err(malformed(row, "year", format!("{year} outside [1900, 2100]")));
        }
        let tech_class: TechClass =
            rec[2].parse().map_err(|_| malformed(row, "tech_class", format!("unknown class {:?}", &rec[2])))?;
        let component_count = match &rec[3] {
            "" => None,
            cell => match cell.parse::<u64>() {
                Ok(0) | Err(_) => {
                    return Err(malformed(row, "component_count", format!("{cell:?} is not a positive integer")))
                }
                Ok(n) => Some(n),
            },
        };
        let record = HistoricalRecord {
            year,
            label: rec[1].to_string(),
            tech_class,
            component_count,
            mips: optional_f64(row, "mips", &rec[4])?,
            size_m3: optional_f64(row, "size_m3", &rec[5])?,
            power_w: optional_f64(row, "power_w", &rec[6])?,
            cost_usd: optional_f64(row, "cost_usd", &rec[7])?,
            instruction_length_bits: optional_f64(row, "instruction_length_bits", &rec[8])?,
            latency_s: if with_latency { optional_f64(row, LATENCY_COLUMN, &rec[9])? } else { None },
        };
        records.push(record);
    }
    if records.is_empty() {
        return Err(FormatError::EmptyDataset);
    }
    Ok(Dataset::new(records)?)
}

fn cell(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

/// Writes `data` in the ingest format; `latency_s` is emitted only when a
/// record carries it.
pub fn write_csv<W: Write>(data: &Dataset, sink: W) -> Result<(), FormatError> {
    let with_latency = data.records().iter().any(|r| r.latency_s.is_some());
    let mut w = csv::Writer::from_writer(sink);
    let mut header: Vec<&str> = HEADER.to_vec();
    if with_latency {
        header.push(LATENCY_COLUMN);
    }
    let to_io = |e: csv::Error| FormatError::SinkWrite(e.into());
    w.write_record(&header).map_err(to_io)?;
    for r in data.records() {
        let mut row = vec![
            fmt_f64(r.year),
            r.label.clone(),
            r.tech_class.as_str().to_string(),
            r.component_count.map(|c| c.to_string()).unwrap_or_default(),
            cell(r.mips),
            cell(r.size_m3),
            cell(r.power_w),
            cell(r.cost_usd),
            cell(r.instruction_length_bits),
        ];
        if with_latency {
            row.push(cell(r.latency_s));
        }
        w.write_record(&row).map_err(to_io)?;
    }
    w.flush().map_err(FormatError::SinkWrite)?;
    Ok(())
}
