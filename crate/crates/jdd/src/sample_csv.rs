//! Paired-sample CSV.
//!
//! Header `x_0,...,x_{dx-1},y_0,...,y_{dy-1}`, one pair per row, plain
//! decimal numbers. Lines starting with `#` are comments. Numbers are
//! written in the shortest form that parses back to the same `f64`.

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use jdd_core::PairedSample;

use crate::error::{Error, Result};

/// Splits a header into `(dx, dy)`, or explains why it is malformed.
fn parse_header(fields: &csv::StringRecord) -> std::result::Result<(usize, usize), String> {
    let dx = fields.iter().take_while(|f| f.starts_with("x_")).count();
    let dy = fields.len() - dx;
    if dx == 0 || dy == 0 {
        return Err("header needs at least one x_ and one y_ column".into());
    }
    for (i, name) in fields.iter().enumerate() {
        let want = if i < dx {
            format!("x_{i}")
        } else {
            format!("y_{}", i - dx)
        };
        if name != want {
            return Err(format!("column {i} is named {name:?}, expected {want:?}"));
        }
    }
    Ok((dx, dy))
}

pub fn read_sample<R: Read>(reader: R, path: &Path) -> Result<PairedSample> {
    let mut csv = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let (dx, _) = parse_header(csv.headers()?).map_err(|m| Error::format(path, m))?;
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (row, record) in csv.records().enumerate() {
        let record = record?;
        let values = record
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<std::result::Result<Vec<f64>, _>>()
            .map_err(|e| Error::format(path, format!("data row {}: {e}", row + 1)))?;
        let mut values = values;
        ys.push(values.split_off(dx));
        xs.push(values);
    }
    if xs.is_empty() {
        return Err(Error::format(path, "no data rows"));
    }
    PairedSample::from_rows(xs, ys).map_err(|e| Error::format(path, e.to_string()))
}

pub fn load_sample(path: &Path) -> Result<PairedSample> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_sample(file, path)
}

pub fn write_sample<W: Write>(writer: W, sample: &PairedSample) -> Result<()> {
    let mut csv = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(writer);
    let header: Vec<String> = (0..sample.dim_x())
        .map(|i| format!("x_{i}"))
        .chain((0..sample.dim_y()).map(|i| format!("y_{i}")))
        .collect();
    csv.write_record(&header)?;
    for (x, y) in sample.pairs() {
        csv.write_record(x.iter().chain(y.iter()).map(|v| v.to_string()))?;
    }
    csv.flush().map_err(|e| Error::io("<output>", e))
}
