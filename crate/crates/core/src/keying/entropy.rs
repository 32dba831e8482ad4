//! Brute-force search-space estimates for the shared key and the hiding grid.

use crate::error::{Error, Result};

/// Above this many bits the number of possibilities no longer fits in an
/// `f64`; it is reported as effectively unbounded.
pub const UNBOUNDED_BITS: f64 = 1024.0;

/// Symbol alphabets a key may be drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymbolSet {
    UsAscii,
    Utf8,
    Utf16,
}

impl SymbolSet {
    pub const ALL: [SymbolSet; 3] = [SymbolSet::UsAscii, SymbolSet::Utf8, SymbolSet::Utf16];

    pub fn symbol_count(self) -> u64 {
        match self {
            SymbolSet::UsAscii => 128,
            SymbolSet::Utf8 => 256,
            SymbolSet::Utf16 => 65536,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            SymbolSet::UsAscii => "US-ASCII",
            SymbolSet::Utf8 => "UTF-8",
            SymbolSet::Utf16 => "UTF-16",
        }
    }
}

impl std::str::FromStr for SymbolSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('_', "-").as_str() {
            "us-ascii" | "ascii" => Ok(SymbolSet::UsAscii),
            "utf-8" | "utf8" => Ok(SymbolSet::Utf8),
            "utf-16" | "utf16" => Ok(SymbolSet::Utf16),
            other => Err(Error::InvalidParameters(format!(
                "unknown symbol set {other:?}"
            ))),
        }
    }
}

/// `L * log2(N_sym)`: bits of entropy of a key of `key_length` symbols.
pub fn key_entropy_bits(symbol_count: u64, key_length: u64) -> Result<f64> {
    if symbol_count < 2 || key_length < 1 {
        return Err(Error::InvalidParameters(format!(
            "need symbol_count >= 2 and key_length >= 1, got {symbol_count} and {key_length}"
        )));
    }
    Ok(key_length as f64 * (symbol_count as f64).log2())
}

/// `2^bits` in scientific notation with a truncated one-digit mantissa
/// (`7.2e+134`), or `"effectively unbounded"` at and beyond
/// [`UNBOUNDED_BITS`].
pub fn format_possibilities(bits: f64) -> String {
    if bits >= UNBOUNDED_BITS {
        return "effectively unbounded".to_string();
    }
    let log10 = bits * std::f64::consts::LOG10_2;
    let mut exponent = log10.floor();
    let mut mantissa = 10f64.powf(log10 - exponent);
    // guard against 9.999.. rounding up to 10
    if mantissa >= 10.0 {
        mantissa /= 10.0;
        exponent += 1.0;
    }
    let truncated = (mantissa * 10.0 + 1e-9).floor() / 10.0;
    format!("{truncated:.1}e+{exponent}")
}

fn ln_factorial(n: u64) -> f64 {
    libm::lgamma(n as f64 + 1.0)
}

fn log_sum_exp(terms: impl Iterator<Item = f64> + Clone) -> f64 {
    let max = terms.clone().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + terms.map(|t| (t - max).exp()).sum::<f64>().ln()
}

/// log2 of `sum_{i=t_r..R} R!  *  sum_{j=t_c..C} C!  *  N_sym^L`.
///
/// Evaluated entirely in the log domain so grid sizes in the thousands do
/// not overflow.
pub fn search_space_log2(
    rows: u64,
    cols: u64,
    row_offset: u64,
    col_offset: u64,
    symbol_count: u64,
    key_length: u64,
) -> Result<f64> {
    if row_offset < 1 || row_offset > rows || col_offset < 1 || col_offset > cols {
        return Err(Error::InvalidParameters(format!(
            "offsets must satisfy 1 <= t_r <= R and 1 <= t_c <= C \
             (R={rows}, C={cols}, t_r={row_offset}, t_c={col_offset})"
        )));
    }
    let key_bits = key_entropy_bits(symbol_count, key_length)?;
    let ln_rows = log_sum_exp((row_offset..=rows).map(|_| ln_factorial(rows)));
    let ln_cols = log_sum_exp((col_offset..=cols).map(|_| ln_factorial(cols)));
    Ok((ln_rows + ln_cols) / std::f64::consts::LN_2 + key_bits)
}
