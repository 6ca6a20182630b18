//! CSV datasets with `#`-prefixed metadata headers.
//!
//! A file is a block of `# key: value` lines followed by an ordinary CSV table
//! with a header row. Complex values occupy two columns, `re` and `im`.

use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::chain::CorrelationGrid;
use crate::kagome::KagomeGrid;
use crate::{Error, Result};

/// Ordered `key: value` metadata.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Metadata(pub Vec<(String, String)>);

impl Metadata {
    pub fn new() -> Self {
        Metadata(Vec::new())
    }

    pub fn push(&mut self, key: &str, value: impl ToString) -> &mut Self {
        self.0.push((key.to_string(), value.to_string()));
        self
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationRow {
    pub x: i64,
    pub t: usize,
    pub re: f64,
    pub im: f64,
    pub on_ray: u8,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyRow {
    pub t: usize,
    pub seed: u64,
    pub phi: f64,
    #[serde(rename = "S2_bits")]
    pub s2_bits: f64,
    #[serde(rename = "SvN_bits")]
    pub svn_bits: f64,
    pub flatness_residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KagomeRow {
    pub i1: i64,
    pub i2: i64,
    pub sublattice: String,
    pub cycles: usize,
    pub re: f64,
    pub im: f64,
    pub on_ray: u8,
}

pub fn correlation_rows(grid: &CorrelationGrid) -> Vec<CorrelationRow> {
    grid.entries
        .iter()
        .map(|e| CorrelationRow { x: e.x, t: e.t, re: e.value.re, im: e.value.im, on_ray: e.on_ray() as u8 })
        .collect()
}

/// One row per grid site; `sublattice` holds the site's axis letter, which
/// fixes its position inside the unit cell.
pub fn kagome_rows(grid: &KagomeGrid) -> Vec<KagomeRow> {
    grid.entries
        .iter()
        .map(|e| KagomeRow {
            i1: e.i1,
            i2: e.i2,
            sublattice: e.axis.to_string(),
            cycles: grid.cycles,
            re: e.value.re,
            im: e.value.im,
            on_ray: e.on_ray as u8,
        })
        .collect()
}

/// Writes the metadata block and then `rows` with a header row.
pub fn write_csv<W: Write, T: Serialize>(mut out: W, meta: &Metadata, rows: &[T]) -> Result<()> {
    for (k, v) in &meta.0 {
        if k.contains(':') || k.contains('\n') || v.contains('\n') {
            return Err(Error::InvalidParameter(format!("metadata entry {k:?} cannot be encoded")));
        }
        writeln!(out, "# {k}: {v}")?;
    }
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a file written by [`write_csv`].
pub fn read_csv<R: Read, T: DeserializeOwned>(mut input: R) -> Result<(Metadata, Vec<T>)> {
    let mut text = String::new();
    input.read_to_string(&mut text)?;
    let mut meta = Metadata::new();
    for line in text.lines().take_while(|l| l.starts_with('#')) {
        let body = line.trim_start_matches('#').trim_start();
        let (k, v) = body
            .split_once(": ")
            .or_else(|| body.split_once(':'))
            .ok_or_else(|| Error::Parse(format!("metadata line without a key: {line:?}")))?;
        meta.push(k.trim(), v);
    }
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    let rows = reader.deserialize().collect::<std::result::Result<Vec<T>, _>>()?;
    Ok((meta, rows))
}

/// The table part of a CSV file, without metadata.
pub fn csv_body(text: &str) -> String {
    text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect()
}
