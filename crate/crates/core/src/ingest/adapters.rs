//! Readers for the public sensor datasets this tool was evaluated on.
//!
//! None of the datasets ship with the crate. Each adapter turns one stream
//! of a downloaded file into windowed [`StreamSegment`]s with ids that
//! point back at the source line.

use std::io::{BufRead, BufReader};
use std::path::Path;

use super::{open, parse_value, window_series, ColumnRef, CorpusSpec};
use crate::error::{Error, Result};
use crate::transform::StreamSegment;

/// Measurement columns of the Intel Berkeley lab deployment
/// (`date time epoch moteid temperature humidity light voltage`,
/// whitespace separated, no header).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntelField {
    Temperature,
    Humidity,
    Light,
    Voltage,
}

impl IntelField {
    fn position(self) -> usize {
        match self {
            IntelField::Temperature => 4,
            IntelField::Humidity => 5,
            IntelField::Light => 6,
            IntelField::Voltage => 7,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            IntelField::Temperature => "temperature",
            IntelField::Humidity => "humidity",
            IntelField::Light => "light",
            IntelField::Voltage => "voltage",
        }
    }
}

impl std::str::FromStr for IntelField {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "temperature" => Ok(IntelField::Temperature),
            "humidity" => Ok(IntelField::Humidity),
            "light" => Ok(IntelField::Light),
            "voltage" => Ok(IntelField::Voltage),
            other => Err(Error::ColumnMissing(other.to_string())),
        }
    }
}

/// One field of the Intel lab log, optionally restricted to a single mote.
///
/// The public file has truncated lines where a mote dropped readings; those
/// lines are skipped rather than treated as errors. Fields that are present
/// but not numbers are errors.
pub fn read_intel_lab(
    path: &Path,
    field: IntelField,
    mote: Option<u32>,
    window: usize,
    stride: usize,
) -> Result<Vec<StreamSegment>> {
    let reader = BufReader::new(open(path)?);
    let mut values = Vec::new();
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let row = i + 1;
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() <= field.position() {
            continue;
        }
        if let Some(want) = mote {
            if parts[3].parse::<u32>().ok() != Some(want) {
                continue;
            }
        }
        values.push(parse_value(parts[field.position()], row)?);
        rows.push(row);
    }
    let label = match mote {
        Some(m) => format!("intel-lab-mote{m}-{}", field.name()),
        None => format!("intel-lab-{}", field.name()),
    };
    window_series(&values, &rows, window, stride, &label)
}

/// One feature of the gas sensor array drift batches (`.dat` files in
/// sparse `label;concentration idx:value ...` form), read line by line as a
/// stream. `feature` is the 1-based index used in the file.
pub fn read_gas_drift(
    path: &Path,
    feature: usize,
    window: usize,
    stride: usize,
) -> Result<Vec<StreamSegment>> {
    let reader = BufReader::new(open(path)?);
    let prefix = format!("{feature}:");
    let mut values = Vec::new();
    let mut rows = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let row = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let token = line
            .split_whitespace()
            .skip(1)
            .find_map(|t| t.strip_prefix(&prefix))
            .ok_or_else(|| Error::ColumnMissing(format!("feature {feature} on line {row}")))?;
        values.push(parse_value(token, row)?);
        rows.push(row);
    }
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    window_series(
        &values,
        &rows,
        window,
        stride,
        &format!("gas-{stem}-f{feature}"),
    )
}

/// Smart-home meter exports are plain `timestamp,power` rows without a
/// header; the generic reader handles them given this spec.
pub fn smart_home_spec(path: &Path, window: usize) -> CorpusSpec {
    CorpusSpec::new(path, ColumnRef::Index(1), window).without_header()
}
