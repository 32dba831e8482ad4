use std::ffi::OsString;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use dctstego::codec::{
    capacity_bits, capacity_from_counts, embed, embed_with_nonce, extract, EmbedConfig,
    EmbedResult, Extraction, GRID_LIMIT,
};
use dctstego::ingest::synthetic::write_corpus;
use dctstego::ingest::{
    read_segments, read_written_segments, write_segments, ColumnRef, CorpusSpec,
    SEGMENT_FILE_HEADER,
};
use dctstego::keying::{
    format_possibilities, key_entropy_bits, search_space_log2, StegoKey, SymbolSet, NONCE_LEN,
};
use dctstego::metrics::{
    bench_table, compaction_table, distortion_sweep, distortion_sweep_with_nonce, prd_table,
    timing_benchmark, PrdReport, Table,
};
use dctstego::transform::{compaction_profile, dct, StreamSegment};
use dctstego::{Error, Result};

use crate::args::*;

pub const SCHEMA_EMBED: &str = "dctstego.embed.v1";
pub const SCHEMA_EXTRACT: &str = "dctstego.extract.v1";
pub const SCHEMA_CAPACITY: &str = "dctstego.capacity.v1";
pub const SCHEMA_KEYINFO: &str = "dctstego.keyinfo.v1";
pub const SCHEMA_CALIBRATE: &str = "dctstego.calibrate.v1";

const SAMPLE_PAYLOAD: &[u8] = b"ID=STN-042;lat=-37.8136;lon=144.9631;ts=2019-03-01T10:00:00Z";

/// An error tagged with the segment it happened on.
#[derive(Debug)]
pub struct Failure {
    pub error: Error,
    pub segment: Option<String>,
}

impl From<Error> for Failure {
    fn from(error: Error) -> Self {
        Self {
            error,
            segment: None,
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e).into()
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match &self.segment {
            Some(id) => write!(f, "segment {id}: {}", self.error),
            None => write!(f, "{}", self.error),
        }
    }
}

fn on_segment<T>(seg: &StreamSegment, r: Result<T>) -> std::result::Result<T, Failure> {
    r.map_err(|error| Failure {
        error,
        segment: Some(seg.segment_id().to_string()),
    })
}

type CmdResult = std::result::Result<(), Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Error::InvalidParameters(msg.into()).into()
}

pub fn run(command: Command) -> CmdResult {
    match command {
        Command::Embed(a) => cmd_embed(a),
        Command::Extract(a) => cmd_extract(a),
        Command::Analyze(a) => cmd_analyze(a),
        Command::Capacity(a) => cmd_capacity(a),
        Command::Keyinfo(a) => cmd_keyinfo(a),
        Command::Bench(a) => cmd_bench(a),
        Command::CalibratePhi(a) => cmd_calibrate(a),
        Command::Synth(a) => cmd_synth(a),
    }
}

fn load_key(args: &KeyArgs) -> std::result::Result<StegoKey, Failure> {
    let mut bytes = match (&args.key_file, &args.key_env) {
        (Some(path), None) => read_file(path)?,
        (None, Some(var)) => {
            let value: OsString = std::env::var_os(var)
                .ok_or_else(|| usage(format!("environment variable {var} is not set")))?;
            os_bytes(value)
        }
        _ => return Err(usage("supply the key with --key-file or --key-env")),
    };
    if bytes.ends_with(b"\n") {
        bytes.pop();
        if bytes.ends_with(b"\r") {
            bytes.pop();
        }
    }
    Ok(StegoKey::new(bytes)?)
}

#[cfg(unix)]
fn os_bytes(value: OsString) -> Vec<u8> {
    use std::os::unix::ffi::OsStringExt;
    value.into_vec()
}

#[cfg(not(unix))]
fn os_bytes(value: OsString) -> Vec<u8> {
    value.to_string_lossy().into_owned().into_bytes()
}

fn read_file(path: &Path) -> Result<Vec<u8>> {
    fs::read(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })
}

fn load_config(args: &ConfigArgs) -> Result<EmbedConfig> {
    let mut config = match &args.config {
        Some(path) => EmbedConfig::load(path)?,
        None => EmbedConfig::default(),
    };
    if let Some(b) = args.bits {
        config.bits_per_coeff = b;
    }
    if let Some(r) = args.protect_fraction {
        config.protect_fraction = r;
    }
    if let Some(p) = args.phi {
        config.phi = p;
    }
    if let Some(t) = args.theta {
        config.theta = t;
    }
    if let Some(c) = args.cols {
        config.matrix_cols = c;
    }
    config.validate()?;
    Ok(config)
}

fn corpus_spec(input: &Path, args: &CorpusArgs) -> Result<CorpusSpec> {
    if !args.delimiter.is_ascii() {
        return Err(Error::InvalidParameters(
            "delimiter must be a single ASCII character".into(),
        ));
    }
    let column: ColumnRef = args.column.parse().unwrap();
    let mut spec = CorpusSpec::new(input, column, args.window)
        .with_delimiter(args.delimiter as u8)
        .with_stride(args.stride.unwrap_or(args.window));
    if args.no_header {
        spec = spec.without_header();
    }
    if let Some(label) = &args.label {
        spec = spec.with_label(label.clone());
    }
    Ok(spec)
}

fn nonce_stream(seed_hex: Option<&str>, count: usize) -> Result<Option<Vec<[u8; NONCE_LEN]>>> {
    let Some(hex_text) = seed_hex else {
        return Ok(None);
    };
    let bytes = hex::decode(hex_text)
        .map_err(|e| Error::InvalidParameters(format!("--nonce-seed: {e}")))?;
    if bytes.is_empty() || bytes.len() > 32 {
        return Err(Error::InvalidParameters(
            "--nonce-seed must be 1 to 32 bytes of hex".into(),
        ));
    }
    let mut seed = [0u8; 32];
    seed[..bytes.len()].copy_from_slice(&bytes);
    let mut rng = ChaCha8Rng::from_seed(seed);
    Ok(Some(
        (0..count)
            .map(|_| {
                let mut n = [0u8; NONCE_LEN];
                rng.fill_bytes(&mut n);
                n
            })
            .collect(),
    ))
}

fn emit(table: &Table, format: Format) {
    match format {
        Format::Table => print!("{}", table.to_text()),
        Format::CsvColumns => print!("{}", table.to_csv()),
    }
}

fn save(table: &Table, dir: &Path, name: &str) -> Result<PathBuf> {
    let path = dir.join(name);
    table.write_csv(fs::File::create(&path)?)?;
    Ok(path)
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn cmd_embed(a: EmbedArgs) -> CmdResult {
    let key = load_key(&a.key)?;
    let config = load_config(&a.config)?;
    let secret = read_file(&a.payload)?;
    let segments = read_segments(&corpus_spec(&a.input, &a.corpus)?)?;
    let nonces = nonce_stream(a.nonce_seed.as_deref(), segments.len())?;

    let results: Vec<EmbedResult> = segments
        .par_iter()
        .enumerate()
        .map(|(i, seg)| {
            let r = match &nonces {
                Some(n) => embed_with_nonce(seg, &key, &secret, &config, n[i]),
                None => embed(seg, &key, &secret, &config),
            };
            on_segment(seg, r)
        })
        .collect::<std::result::Result<_, _>>()?;

    create_dir(&a.out)?;
    write_segments(results.iter().map(|r| &r.stego), &a.out.join("stego.csv"))?;

    let mut table = Table::new(
        SCHEMA_EMBED,
        &[
            "segment_id",
            "length",
            "frame_bytes",
            "used_cells",
            "capacity_bits",
            "prd_stego_percent",
        ],
    );
    for r in &results {
        table.push_row(vec![
            r.stego.segment_id().to_string(),
            r.stego.len().to_string(),
            r.frame_len.to_string(),
            r.used_cells.to_string(),
            r.capacity_bits.to_string(),
            r.prd_stego.to_string(),
        ]);
    }
    save(&table, &a.out, "embed_report.csv")?;
    emit(&table, a.format);
    Ok(())
}

fn load_original(path: &Path, corpus: &CorpusArgs) -> Result<Vec<StreamSegment>> {
    let mut first = String::new();
    BufReader::new(dctstego_open(path)?).read_line(&mut first)?;
    if first.trim_end() == SEGMENT_FILE_HEADER {
        read_written_segments(path)
    } else {
        read_segments(&corpus_spec(path, corpus)?)
    }
}

fn dctstego_open(path: &Path) -> Result<fs::File> {
    fs::File::open(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
        _ => Error::Io(e),
    })
}

fn cmd_extract(a: ExtractArgs) -> CmdResult {
    let key = load_key(&a.key)?;
    let config = load_config(&a.config)?;
    let stego = read_written_segments(&a.input)?;
    if stego.is_empty() {
        return Err(usage(format!("{} holds no segments", a.input.display())));
    }
    let originals = a
        .original
        .as_deref()
        .map(|p| load_original(p, &a.corpus))
        .transpose()?;

    let results: Vec<Extraction> = stego
        .par_iter()
        .map(|seg| on_segment(seg, extract(seg, &key, &config)))
        .collect::<std::result::Result<_, _>>()?;

    let secret = &results[0].secret;
    if let Some((seg, _)) = stego
        .iter()
        .zip(&results)
        .find(|(_, r)| &r.secret != secret)
    {
        return Err(Failure {
            error: Error::InvalidParameters("segments carry different payloads".into()),
            segment: Some(seg.segment_id().to_string()),
        });
    }
    fs::write(&a.payload_out, secret)?;

    let mut table = Table::new(
        SCHEMA_EXTRACT,
        &["segment_id", "used_cells", "payload_bytes"],
    );
    for (seg, r) in stego.iter().zip(&results) {
        table.push_row(vec![
            seg.segment_id().to_string(),
            r.used_cells.to_string(),
            r.secret.len().to_string(),
        ]);
    }

    let prd = match &originals {
        Some(originals) => {
            let mut reports = Vec::with_capacity(stego.len());
            for (seg, r) in stego.iter().zip(&results) {
                let original = originals
                    .iter()
                    .find(|o| o.segment_id() == seg.segment_id())
                    .ok_or_else(|| Failure {
                        error: Error::InvalidParameters("no matching original segment".into()),
                        segment: Some(seg.segment_id().to_string()),
                    })?;
                reports.push(on_segment(
                    seg,
                    PrdReport::measure(original, seg, &r.recovered),
                )?);
            }
            Some(prd_table(&reports))
        }
        None => None,
    };

    if let Some(dir) = &a.out {
        create_dir(dir)?;
        write_segments(
            results.iter().map(|r| &r.recovered),
            &dir.join("recovered.csv"),
        )?;
        save(&table, dir, "extract_report.csv")?;
        if let Some(p) = &prd {
            save(p, dir, "prd.csv")?;
        }
    }
    emit(prd.as_ref().unwrap_or(&table), a.format);
    Ok(())
}

fn cmd_analyze(a: AnalyzeArgs) -> CmdResult {
    let key = load_key(&a.key)?;
    let config = load_config(&a.config)?;
    let payload = match &a.payload {
        Some(p) => read_file(p)?,
        None => SAMPLE_PAYLOAD.to_vec(),
    };
    let segments = read_segments(&corpus_spec(&a.input, &a.corpus)?)?;
    let nonces = nonce_stream(a.nonce_seed.as_deref(), segments.len())?;

    let tables: Vec<(Table, Table)> = segments
        .par_iter()
        .enumerate()
        .map(|(i, seg)| {
            let sweep = match &nonces {
                Some(n) => distortion_sweep_with_nonce(seg, &key, &config, &payload, n[i]),
                None => distortion_sweep(seg, &key, &config, &payload),
            };
            let sweep = on_segment(seg, sweep)?;
            let keep: Vec<usize> = a.keep.iter().copied().filter(|&k| k <= seg.len()).collect();
            let profile = on_segment(seg, compaction_profile(seg, &keep))?;
            Ok((
                dctstego::metrics::sweep_table(seg.segment_id(), &sweep),
                compaction_table(seg.segment_id(), &profile),
            ))
        })
        .collect::<std::result::Result<_, Failure>>()?;

    let mut iter = tables.into_iter();
    let (mut sweep, mut compaction) = iter.next().expect("at least one segment");
    for (s, c) in iter {
        sweep.extend(s);
        compaction.extend(c);
    }
    if let Some(dir) = &a.out {
        create_dir(dir)?;
        save(&sweep, dir, "sweep.csv")?;
        save(&compaction, dir, "compaction.csv")?;
    }
    emit(&sweep, a.format);
    if a.format == Format::Table {
        println!();
    }
    emit(&compaction, a.format);
    Ok(())
}

fn cmd_capacity(a: CapacityArgs) -> CmdResult {
    let config = load_config(&a.config)?;
    let (cells, protected, bits) = match (a.length, a.cells, a.protected) {
        (Some(len), _, _) => (
            len as u64,
            config.protected_count(len) as u64,
            capacity_bits(len, &config)?,
        ),
        (None, Some(cells), Some(protected)) => (
            cells,
            protected,
            capacity_from_counts(cells, protected, config.bits_per_coeff),
        ),
        _ => return Err(usage("give --length, or --cells with --protected")),
    };
    let mut table = Table::new(
        SCHEMA_CAPACITY,
        &[
            "cells",
            "protected",
            "bits_per_coeff",
            "capacity_bits",
            "capacity_bytes",
        ],
    );
    table.push_row(vec![
        cells.to_string(),
        protected.to_string(),
        config.bits_per_coeff.to_string(),
        bits.to_string(),
        (bits / 8).to_string(),
    ]);
    emit(&table, a.format);
    Ok(())
}

fn cmd_keyinfo(a: KeyinfoArgs) -> CmdResult {
    let rows: Vec<(u64, SymbolSet)> = if a.table {
        [64u64, 128]
            .iter()
            .flat_map(|&l| SymbolSet::ALL.iter().map(move |&s| (l, s)))
            .collect()
    } else {
        vec![(a.length, a.symbols.parse::<SymbolSet>()?)]
    };
    let grid = a.grid_rows.zip(a.grid_cols);
    let mut header = vec![
        "key_length",
        "symbol_set",
        "symbol_count",
        "entropy_bits",
        "possibilities",
    ];
    if grid.is_some() {
        header.push("search_space_log2");
    }
    let mut table = Table::new(SCHEMA_KEYINFO, &header);
    for (length, set) in rows {
        let bits = key_entropy_bits(set.symbol_count(), length)?;
        let mut row = vec![
            length.to_string(),
            set.name().to_string(),
            set.symbol_count().to_string(),
            bits.to_string(),
            format_possibilities(bits),
        ];
        if let Some((r, c)) = grid {
            let space =
                search_space_log2(r, c, a.row_offset, a.col_offset, set.symbol_count(), length)?;
            row.push(format!("{space:.3}"));
        }
        table.push_row(row);
    }
    emit(&table, a.format);
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> CmdResult {
    let report = timing_benchmark(&a.lengths, a.trials)?;
    let table = bench_table(&report);
    if let Some(dir) = &a.out {
        create_dir(dir)?;
        save(&table, dir, "bench.csv")?;
    }
    emit(&table, a.format);
    Ok(())
}

fn cmd_calibrate(a: CalibrateArgs) -> CmdResult {
    let config = load_config(&a.config)?;
    let segments = read_segments(&corpus_spec(&a.input, &a.corpus)?)?;
    let extremes: Vec<(f64, f64)> = segments
        .par_iter()
        .map(|seg| {
            let coeffs = on_segment(seg, dct(seg.samples()))?;
            let h = config.protected_count(seg.len());
            let tail = &coeffs[h..];
            Ok(tail
                .iter()
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &c| {
                    (lo.min(c), hi.max(c))
                }))
        })
        .collect::<std::result::Result<_, Failure>>()?;
    let lo = extremes.iter().map(|e| e.0).fold(f64::INFINITY, f64::min);
    let hi = extremes
        .iter()
        .map(|e| e.1)
        .fold(f64::NEG_INFINITY, f64::max);
    if !lo.is_finite() {
        return Err(usage(
            "no unprotected coefficients; lower --protect-fraction",
        ));
    }
    let suggested = (lo.abs().ceil() * 2.0).max(1.0);
    let fits = (hi + suggested) * config.theta < GRID_LIMIT;

    let mut table = Table::new(
        SCHEMA_CALIBRATE,
        &[
            "segments",
            "min_coefficient",
            "max_coefficient",
            "suggested_phi",
            "fits_grid",
        ],
    );
    table.push_row(vec![
        segments.len().to_string(),
        lo.to_string(),
        hi.to_string(),
        suggested.to_string(),
        fits.to_string(),
    ]);
    emit(&table, a.format);
    Ok(())
}

fn cmd_synth(a: SynthArgs) -> CmdResult {
    write_corpus(&a.out, a.rows, a.seed)?;
    eprintln!("wrote {} rows to {}", a.rows, a.out.display());
    Ok(())
}
