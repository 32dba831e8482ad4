//! Versioned tabular reports.
//!
//! CSV output starts with `#schema=<name>` and optional `#key=value`
//! metadata lines, followed by a header row and one row per record.

use std::io::Write;

use super::{BenchReport, PrdReport, SweepRow};
use crate::error::Result;

pub const SCHEMA_SWEEP: &str = "dctstego.sweep.v1";
pub const SCHEMA_PRD: &str = "dctstego.prd.v1";
pub const SCHEMA_BENCH: &str = "dctstego.bench.v1";
pub const SCHEMA_COMPACTION: &str = "dctstego.compaction.v1";

#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub schema: String,
    pub meta: Vec<(String, String)>,
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(schema: &str, header: &[&str]) -> Self {
        Self {
            schema: schema.to_string(),
            meta: Vec::new(),
            header: header.iter().map(|h| h.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_meta(&mut self, key: &str, value: impl ToString) {
        self.meta.push((key.to_string(), value.to_string()));
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    /// Append the rows of another table with the same columns.
    pub fn extend(&mut self, other: Table) {
        self.rows.extend(other.rows);
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "#schema={}", self.schema)?;
        for (k, v) in &self.meta {
            writeln!(out, "#{k}={v}")?;
        }
        let mut writer = csv::Writer::from_writer(out);
        writer.write_record(&self.header).map_err(csv_err)?;
        for row in &self.rows {
            writer.write_record(row).map_err(csv_err)?;
        }
        writer.flush()?;
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv output is utf-8")
    }

    /// Column-aligned plain text for terminals.
    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.header.iter().map(|h| h.len()).collect();
        for row in &self.rows {
            for (w, cell) in widths.iter_mut().zip(row) {
                *w = (*w).max(cell.len());
            }
        }
        let line = |cells: &[String]| {
            cells
                .iter()
                .zip(&widths)
                .map(|(c, w)| format!("{c:>w$}"))
                .collect::<Vec<_>>()
                .join("  ")
                .trim_end()
                .to_string()
        };
        let mut out = String::new();
        out.push_str(&line(&self.header));
        out.push('\n');
        let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
        out.push_str(&line(&rule));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&line(row));
            out.push('\n');
        }
        for (k, v) in &self.meta {
            out.push_str(&format!("{k}: {v}\n"));
        }
        out
    }
}

fn csv_err(e: csv::Error) -> crate::error::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => io.into(),
        other => std::io::Error::other(format!("{other:?}")).into(),
    }
}

pub fn sweep_table(segment_id: &str, rows: &[SweepRow]) -> Table {
    let mut t = Table::new(
        SCHEMA_SWEEP,
        &[
            "segment_id",
            "bits",
            "prd_stego_percent",
            "prd_recovered_percent",
        ],
    );
    for r in rows {
        t.push_row(vec![
            segment_id.to_string(),
            r.bits.to_string(),
            r.prd_stego.to_string(),
            r.prd_recovered.to_string(),
        ]);
    }
    t
}

pub fn prd_table(reports: &[PrdReport]) -> Table {
    let mut t = Table::new(
        SCHEMA_PRD,
        &["segment_id", "prd_stego_percent", "prd_recovered_percent"],
    );
    for r in reports {
        t.push_row(vec![
            r.segment_id.clone(),
            r.prd_stego_percent.to_string(),
            r.prd_recovered_percent.to_string(),
        ]);
    }
    t
}

pub fn compaction_table(segment_id: &str, profile: &[(usize, f64)]) -> Table {
    let mut t = Table::new(SCHEMA_COMPACTION, &["segment_id", "kept", "prd_percent"]);
    for (kept, prd) in profile {
        t.push_row(vec![
            segment_id.to_string(),
            kept.to_string(),
            prd.to_string(),
        ]);
    }
    t
}

/// Benchmark records plus fit, scaling ratios and machine metadata as
/// `#key=value` lines. Peak memory is in bytes and approximate.
pub fn bench_table(report: &BenchReport) -> Table {
    let mut t = Table::new(
        SCHEMA_BENCH,
        &[
            "segment_length",
            "embed_seconds",
            "extract_seconds",
            "peak_bytes_approx",
        ],
    );
    for r in &report.records {
        t.push_row(vec![
            r.segment_length.to_string(),
            r.embed_seconds.to_string(),
            r.extract_seconds.to_string(),
            r.peak_bytes
                .map_or_else(|| "NA".to_string(), |b| b.to_string()),
        ]);
    }
    let m = &report.machine;
    t.push_meta("trials", report.trials);
    t.push_meta("statistic", "median");
    t.push_meta("cpu_model", &m.cpu_model);
    t.push_meta("logical_cpus", m.logical_cpus);
    t.push_meta("os", &m.os);
    t.push_meta("arch", &m.arch);
    t.push_meta(
        "pinned_cpu",
        m.pinned_cpu
            .map_or_else(|| "none".to_string(), |c| c.to_string()),
    );
    t.push_meta("debug_build", m.debug_build);
    for (name, fit) in [("embed", report.embed_fit), ("extract", report.extract_fit)] {
        if let Some(f) = fit {
            t.push_meta(&format!("{name}_fit_slope_s_per_sample"), f.slope);
            t.push_meta(&format!("{name}_fit_intercept_s"), f.intercept);
            t.push_meta(&format!("{name}_fit_r_squared"), f.r_squared);
        }
    }
    for r in &report.ratios {
        t.push_meta(&format!("embed_ratio_{}x4", r.length), r.embed_ratio);
        t.push_meta(&format!("extract_ratio_{}x4", r.length), r.extract_ratio);
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_has_schema_line_and_header() {
        let t = sweep_table(
            "s:1",
            &[SweepRow {
                bits: 1,
                prd_stego: 0.5,
                prd_recovered: 0.75,
            }],
        );
        let csv = t.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("#schema=dctstego.sweep.v1"));
        assert_eq!(
            lines.next(),
            Some("segment_id,bits,prd_stego_percent,prd_recovered_percent")
        );
        assert_eq!(lines.next(), Some("s:1,1,0.5,0.75"));
    }

    #[test]
    fn text_is_aligned() {
        let mut t = Table::new("x", &["a", "long_name"]);
        t.push_row(vec!["123456".into(), "1".into()]);
        let text = t.to_text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "     a  long_name");
        assert_eq!(lines[2], "123456          1");
    }
}
