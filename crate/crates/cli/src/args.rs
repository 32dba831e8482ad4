use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "dctstego",
    version,
    about = "Hide keyed, authenticated payloads in sensor streams"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Embed a payload into every segment of a corpus.
    Embed(EmbedArgs),
    /// Recover the payload from a stego corpus and write the sanitised stream.
    Extract(ExtractArgs),
    /// Distortion sweep over 1..10 bits and energy-compaction profile.
    Analyze(AnalyzeArgs),
    /// Payload capacity of a carrier.
    Capacity(CapacityArgs),
    /// Key entropy and brute-force search space.
    Keyinfo(KeyinfoArgs),
    /// Time embed and extract across segment lengths.
    Bench(BenchArgs),
    /// Suggest a shift (phi) that keeps every coefficient on the grid.
    CalibratePhi(CalibrateArgs),
    /// Write the synthetic three-family corpus.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    CsvColumns,
}

#[derive(Debug, Args)]
pub struct KeyArgs {
    /// File holding the shared key; one trailing newline is ignored.
    #[arg(long, value_name = "FILE", conflicts_with = "key_env")]
    pub key_file: Option<PathBuf>,
    /// Environment variable holding the shared key.
    #[arg(long, value_name = "VAR")]
    pub key_env: Option<String>,
}

#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Shared config file; flags below override its values.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Payload bits per coefficient (1..=10).
    #[arg(long)]
    pub bits: Option<u32>,
    /// Fraction of leading coefficients never modified.
    #[arg(long)]
    pub protect_fraction: Option<f64>,
    /// Shift added to coefficients before scaling.
    #[arg(long)]
    pub phi: Option<f64>,
    /// Grid scale.
    #[arg(long)]
    pub theta: Option<f64>,
    /// Coefficient matrix width.
    #[arg(long)]
    pub cols: Option<usize>,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Value column, by header name or zero-based index.
    #[arg(long, default_value = "value")]
    pub column: String,
    /// Segment length in samples.
    #[arg(long, default_value_t = 512)]
    pub window: usize,
    /// Hop between windows; defaults to the window length.
    #[arg(long)]
    pub stride: Option<usize>,
    #[arg(long, default_value_t = ',')]
    pub delimiter: char,
    /// The input has no header line.
    #[arg(long)]
    pub no_header: bool,
    /// Segment id prefix; defaults to the file stem.
    #[arg(long)]
    pub label: Option<String>,
}

#[derive(Debug, Args)]
pub struct EmbedArgs {
    /// Delimited corpus to use as carrier.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub key: KeyArgs,
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Secret to embed.
    #[arg(long, value_name = "FILE")]
    pub payload: PathBuf,
    /// Directory for stego.csv and embed_report.csv.
    #[arg(long, value_name = "DIR")]
    pub out: PathBuf,
    /// Derive nonces from this seed instead of the system RNG (testing only).
    #[arg(long, value_name = "HEX")]
    pub nonce_seed: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct ExtractArgs {
    /// Stego corpus written by `embed`.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    #[command(flatten)]
    pub key: KeyArgs,
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Where to write the recovered secret.
    #[arg(long, value_name = "FILE")]
    pub payload_out: PathBuf,
    /// Directory for recovered.csv and the distortion report.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Original carrier, for distortion figures. Either a segment file or a
    /// raw corpus read with the corpus flags.
    #[arg(long, value_name = "FILE")]
    pub original: Option<PathBuf>,
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub key: KeyArgs,
    #[command(flatten)]
    pub config: ConfigArgs,
    /// Payload for the sweep; a fixed 60-byte sample if omitted.
    #[arg(long, value_name = "FILE")]
    pub payload: Option<PathBuf>,
    /// Comma-separated coefficient counts for the compaction profile.
    #[arg(long, value_delimiter = ',', default_value = "10,20,30,50,100,200")]
    pub keep: Vec<usize>,
    #[arg(long, value_name = "HEX")]
    pub nonce_seed: Option<String>,
    /// Directory for sweep.csv and compaction.csv.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CapacityArgs {
    /// Segment length; the protected count follows from the config.
    #[arg(long, conflicts_with_all = ["cells", "protected"], required_unless_present = "cells")]
    pub length: Option<usize>,
    /// Matrix cells (R*C), with --protected.
    #[arg(long, requires = "protected")]
    pub cells: Option<u64>,
    /// Protected coefficient count.
    #[arg(long)]
    pub protected: Option<u64>,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct KeyinfoArgs {
    /// Symbol set: us-ascii, utf-8 or utf-16.
    #[arg(long, default_value = "us-ascii")]
    pub symbols: String,
    /// Key length in symbols.
    #[arg(long, default_value_t = 64)]
    pub length: u64,
    /// Print every symbol set at lengths 64 and 128.
    #[arg(long)]
    pub table: bool,
    /// Grid rows, to include the hiding-order search space.
    #[arg(long, requires = "grid_cols")]
    pub grid_rows: Option<u64>,
    #[arg(long, requires = "grid_rows")]
    pub grid_cols: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub row_offset: u64,
    #[arg(long, default_value_t = 1)]
    pub col_offset: u64,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Comma-separated segment lengths.
    #[arg(long, value_delimiter = ',', default_value = "512,1024,2048,4096")]
    pub lengths: Vec<usize>,
    #[arg(long, default_value_t = 9)]
    pub trials: usize,
    /// Directory for bench.csv.
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    #[command(flatten)]
    pub corpus: CorpusArgs,
    #[command(flatten)]
    pub config: ConfigArgs,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, value_name = "FILE")]
    pub out: PathBuf,
    #[arg(long, default_value_t = 4096)]
    pub rows: usize,
    #[arg(long, default_value_t = dctstego::ingest::synthetic::BUNDLED_SEED)]
    pub seed: u64,
}
