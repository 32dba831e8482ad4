//! Delimited-text corpora in and out, and windowing into segments.
//!
//! Input is one value column of a delimited file with a single header
//! line. Output holds one sample per row as `segment_id,value`, with every
//! value printed to 17 significant digits so it parses back to the same
//! `f64`. The codec depends on that: payload bits sit at the 1e-4 grid and
//! any rounding in transit destroys them.

pub mod adapters;
pub mod synthetic;

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::transform::{StreamSegment, MAX_SEGMENT_LEN, MIN_SEGMENT_LEN};

/// Which column holds the values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnRef {
    Name(String),
    /// Zero-based position.
    Index(usize),
}

impl std::fmt::Display for ColumnRef {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ColumnRef::Name(n) => write!(f, "{n:?}"),
            ColumnRef::Index(i) => write!(f, "#{i}"),
        }
    }
}

impl std::str::FromStr for ColumnRef {
    type Err = std::convert::Infallible;

    /// All-digit strings are indices, anything else a header name.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s.parse::<usize>() {
            Ok(i) => ColumnRef::Index(i),
            Err(_) => ColumnRef::Name(s.to_string()),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorpusSpec {
    pub path: PathBuf,
    pub column: ColumnRef,
    pub window: usize,
    pub stride: usize,
    /// Prefix of every segment id; defaults to the file stem.
    pub source_label: String,
    pub delimiter: u8,
    pub has_header: bool,
}

impl CorpusSpec {
    /// Comma-delimited file with a header; non-overlapping windows.
    pub fn new(path: impl Into<PathBuf>, column: ColumnRef, window: usize) -> Self {
        let path = path.into();
        let source_label = path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        Self {
            path,
            column,
            window,
            stride: window,
            source_label,
            delimiter: b',',
            has_header: true,
        }
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.source_label = label.into();
        self
    }

    pub fn with_delimiter(mut self, delimiter: u8) -> Self {
        self.delimiter = delimiter;
        self
    }

    pub fn without_header(mut self) -> Self {
        self.has_header = false;
        self
    }

    pub fn validate(&self) -> Result<()> {
        check_window(self.window, self.stride)
    }
}

pub(crate) fn check_window(window: usize, stride: usize) -> Result<()> {
    if !(MIN_SEGMENT_LEN..=MAX_SEGMENT_LEN).contains(&window) {
        return Err(Error::LengthOutOfRange {
            len: window,
            min: MIN_SEGMENT_LEN,
            max: MAX_SEGMENT_LEN,
        });
    }
    if stride == 0 {
        return Err(Error::InvalidParameters("stride must be at least 1".into()));
    }
    Ok(())
}

pub(crate) fn open(path: &Path) -> Result<File> {
    File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })
}

/// Parse one textual sample; only finite values are accepted.
pub(crate) fn parse_value(text: &str, row: usize) -> Result<f64> {
    let trimmed = text.trim();
    match trimmed.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(Error::UnparsableValue {
            row,
            value: trimmed.to_string(),
        }),
    }
}

fn csv_error(e: csv::Error, path: &Path) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidParameters(format!("{}: {other:?}", path.display())),
    }
}

/// Read the value column of a delimited file. Rows are numbered from 1,
/// not counting the header.
pub fn read_column(spec: &CorpusSpec) -> Result<Vec<f64>> {
    let file = open(&spec.path)?;
    let mut reader = csv::ReaderBuilder::new()
        .delimiter(spec.delimiter)
        .has_headers(spec.has_header)
        .flexible(true)
        .from_reader(file);

    let index = match &spec.column {
        ColumnRef::Index(i) => *i,
        ColumnRef::Name(name) => {
            if !spec.has_header {
                return Err(Error::ColumnMissing(spec.column.to_string()));
            }
            let headers = reader.headers().map_err(|e| csv_error(e, &spec.path))?;
            headers
                .iter()
                .position(|h| h.trim() == name)
                .ok_or_else(|| Error::ColumnMissing(spec.column.to_string()))?
        }
    };

    let mut values = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| csv_error(e, &spec.path))?;
        let field = record
            .get(index)
            .ok_or_else(|| Error::ColumnMissing(spec.column.to_string()))?;
        values.push(parse_value(field, row)?);
    }
    Ok(values)
}

/// Cut `values` into windows. `rows[i]` is the source row of `values[i]`
/// and becomes part of the segment id `"<label>:<row>"`.
pub fn window_series(
    values: &[f64],
    rows: &[usize],
    window: usize,
    stride: usize,
    label: &str,
) -> Result<Vec<StreamSegment>> {
    check_window(window, stride)?;
    debug_assert_eq!(values.len(), rows.len());
    if values.len() < window {
        return Err(Error::WindowTooLong {
            window,
            rows: values.len(),
        });
    }
    (0..=values.len() - window)
        .step_by(stride)
        .map(|start| {
            StreamSegment::new(
                values[start..start + window].to_vec(),
                format!("{label}:{}", rows[start]),
                label,
            )
        })
        .collect()
}

/// Number of windows `read_segments` yields for `rows` values.
pub fn segment_count(rows: usize, window: usize, stride: usize) -> usize {
    if rows < window || stride == 0 {
        0
    } else {
        (rows - window) / stride + 1
    }
}

pub fn read_segments(spec: &CorpusSpec) -> Result<Vec<StreamSegment>> {
    spec.validate()?;
    let values = read_column(spec)?;
    let rows: Vec<usize> = (1..=values.len()).collect();
    window_series(&values, &rows, spec.window, spec.stride, &spec.source_label)
}

/// Header of files produced by [`write_segments`].
pub const SEGMENT_FILE_HEADER: &str = "segment_id,value";

/// Text form of a sample: 17 significant digits, scientific notation.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_segments<'a>(
    segments: impl IntoIterator<Item = &'a StreamSegment>,
    path: &Path,
) -> Result<()> {
    let mut out = BufWriter::new(File::create(path)?);
    write_segments_to(segments, &mut out)?;
    out.flush()?;
    Ok(())
}

pub fn write_segments_to<'a, W: Write>(
    segments: impl IntoIterator<Item = &'a StreamSegment>,
    out: &mut W,
) -> Result<()> {
    writeln!(out, "{SEGMENT_FILE_HEADER}")?;
    for seg in segments {
        if seg.segment_id().contains([',', '"', '\n']) {
            return Err(Error::InvalidParameters(format!(
                "segment id {:?} cannot be written unquoted",
                seg.segment_id()
            )));
        }
        for &v in seg.samples() {
            writeln!(out, "{},{}", seg.segment_id(), format_value(v))?;
        }
    }
    Ok(())
}

/// Read a file produced by [`write_segments`], regrouping consecutive rows
/// by segment id. The source label is the id up to its last `:`.
pub fn read_written_segments(path: &Path) -> Result<Vec<StreamSegment>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(open(path)?);
    let headers = reader.headers().map_err(|e| csv_error(e, path))?;
    let id_col = headers.iter().position(|h| h == "segment_id");
    let value_col = headers.iter().position(|h| h == "value");
    let (Some(id_col), Some(value_col)) = (id_col, value_col) else {
        return Err(Error::ColumnMissing("segment_id/value".into()));
    };

    let mut groups: Vec<(String, Vec<f64>)> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record.map_err(|e| csv_error(e, path))?;
        let id = record.get(id_col).unwrap_or_default();
        let value = parse_value(record.get(value_col).unwrap_or_default(), i + 1)?;
        match groups.last_mut() {
            Some((last, values)) if last == id => values.push(value),
            _ => groups.push((id.to_string(), vec![value])),
        }
    }
    groups
        .into_iter()
        .map(|(id, values)| {
            let source = id
                .rsplit_once(':')
                .map_or(id.as_str(), |(s, _)| s)
                .to_string();
            StreamSegment::new(values, id, source)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn write_file(dir: &Path, name: &str, text: &str) -> PathBuf {
        let path = dir.join(name);
        std::fs::File::create(&path)
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
        path
    }

    fn column_file(dir: &Path, n: usize) -> PathBuf {
        let mut text = String::from("time,temp\n");
        for i in 0..n {
            text.push_str(&format!("{i},{}\n", 20.0 + i as f64 * 0.01));
        }
        write_file(dir, "temps.csv", &text)
    }

    #[test]
    fn window_count_arithmetic() {
        let dir = tempfile::tempdir().unwrap();
        let path = column_file(dir.path(), 1024);
        let segs =
            read_segments(&CorpusSpec::new(&path, ColumnRef::Name("temp".into()), 512)).unwrap();
        assert_eq!(segs.len(), 2);
        assert_eq!(segs[0].segment_id(), "temps:1");
        assert_eq!(segs[1].segment_id(), "temps:513");
        assert_eq!(segs[1].source(), "temps");

        let spec = CorpusSpec::new(&path, ColumnRef::Index(1), 512).with_stride(100);
        assert_eq!(
            read_segments(&spec).unwrap().len(),
            segment_count(1024, 512, 100)
        );
        assert_eq!(segment_count(1024, 512, 100), 6);
    }

    #[test]
    fn nan_row_reported() {
        let dir = tempfile::tempdir().unwrap();
        let mut text = String::from("v\n");
        for i in 1..=100 {
            text.push_str(if i == 7 { "NaN\n" } else { "1.5\n" });
        }
        let path = write_file(dir.path(), "bad.csv", &text);
        let err = read_segments(&CorpusSpec::new(&path, ColumnRef::Name("v".into()), 64));
        assert!(matches!(err, Err(Error::UnparsableValue { row: 7, .. })));
    }

    #[test]
    fn structural_errors() {
        let dir = tempfile::tempdir().unwrap();
        let path = column_file(dir.path(), 100);
        assert!(matches!(
            read_segments(&CorpusSpec::new(
                dir.path().join("nope.csv"),
                ColumnRef::Index(0),
                64
            )),
            Err(Error::FileNotFound(_))
        ));
        assert!(matches!(
            read_segments(&CorpusSpec::new(
                &path,
                ColumnRef::Name("humidity".into()),
                64
            )),
            Err(Error::ColumnMissing(_))
        ));
        assert!(matches!(
            read_segments(&CorpusSpec::new(&path, ColumnRef::Index(1), 128)),
            Err(Error::WindowTooLong {
                window: 128,
                rows: 100
            })
        ));
        assert!(matches!(
            read_segments(&CorpusSpec::new(&path, ColumnRef::Index(1), 64).with_stride(0)),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn semicolon_delimiter() {
        let dir = tempfile::tempdir().unwrap();
        let mut text = String::from("a;b\n");
        for i in 0..64 {
            text.push_str(&format!("x;{i}\n"));
        }
        let path = write_file(dir.path(), "semi.csv", &text);
        let spec = CorpusSpec::new(&path, ColumnRef::Name("b".into()), 64).with_delimiter(b';');
        let segs = read_segments(&spec).unwrap();
        assert_eq!(segs[0].samples()[63], 63.0);
    }

    #[test]
    fn empty_list_writes_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("empty.csv");
        write_segments(&[], &path).unwrap();
        assert_eq!(
            std::fs::read_to_string(&path).unwrap(),
            "segment_id,value\n"
        );
        assert!(read_written_segments(&path).unwrap().is_empty());
    }

    #[test]
    fn point_one_survives_text() {
        let text = format_value(0.1);
        assert_eq!(text, "1.0000000000000001e-1");
        assert_eq!(text.parse::<f64>().unwrap().to_bits(), 0.1f64.to_bits());
    }

    #[test]
    fn written_segments_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        let a = StreamSegment::new((0..64).map(|i| i as f64 / 3.0).collect(), "s:1", "s").unwrap();
        let b =
            StreamSegment::new((0..70).map(|i| -(i as f64) * 1e-7).collect(), "s:65", "s").unwrap();
        write_segments([&a, &b], &path).unwrap();
        let back = read_written_segments(&path).unwrap();
        assert_eq!(back, vec![a, b]);
    }
}
