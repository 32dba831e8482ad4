//! Distortion measurement, the bits-per-coefficient sweep, and the runtime
//! benchmark.

mod alloc;
mod bench;
mod report;

use crate::codec::{capacity_bits, embed_with_nonce, extract, EmbedConfig, MAX_BITS_PER_COEFF};
use crate::error::{Error, Result};
use crate::keying::{random_nonce, StegoKey, FRAME_OVERHEAD, NONCE_LEN};
use crate::transform::StreamSegment;

pub use alloc::CountingAlloc;
pub use bench::{
    timing_benchmark, BenchRecord, BenchReport, LinearFit, MachineInfo, ScalingRatio, MIN_TRIALS,
};
pub use report::{
    bench_table, compaction_table, prd_table, sweep_table, Table, SCHEMA_BENCH, SCHEMA_COMPACTION,
    SCHEMA_PRD, SCHEMA_SWEEP,
};

/// Percentage residual difference of `other` against the reference
/// `original`: `100 * sqrt(sum((x - y)^2) / sum(x^2))`.
///
/// Not symmetric: the reference energy is the denominator.
pub fn prd(original: &[f64], other: &[f64]) -> Result<f64> {
    if original.len() != other.len() {
        return Err(Error::LengthMismatch {
            left: original.len(),
            right: other.len(),
        });
    }
    let energy: f64 = original.iter().map(|x| x * x).sum();
    if energy == 0.0 {
        return Err(Error::ZeroReference);
    }
    let residual: f64 = original
        .iter()
        .zip(other)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();
    Ok(100.0 * (residual / energy).sqrt())
}

/// PRD between two labelled segments.
pub fn prd_segments(original: &StreamSegment, other: &StreamSegment) -> Result<f64> {
    prd(original.samples(), other.samples())
}

/// Stego and recovered distortion of one segment, in percent.
#[derive(Debug, Clone, PartialEq)]
pub struct PrdReport {
    pub segment_id: String,
    pub prd_stego_percent: f64,
    pub prd_recovered_percent: f64,
}

impl PrdReport {
    pub fn measure(
        original: &StreamSegment,
        stego: &StreamSegment,
        recovered: &StreamSegment,
    ) -> Result<Self> {
        Ok(Self {
            segment_id: original.segment_id().to_string(),
            prd_stego_percent: prd_segments(original, stego)?,
            prd_recovered_percent: prd_segments(original, recovered)?,
        })
    }
}

/// One point of the distortion curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub bits: u32,
    pub prd_stego: f64,
    pub prd_recovered: f64,
}

/// Embed and extract `payload` at every width from 1 to 10 bits per
/// coefficient, everything else held at `base`.
pub fn distortion_sweep(
    segment: &StreamSegment,
    key: &StegoKey,
    base: &EmbedConfig,
    payload: &[u8],
) -> Result<Vec<SweepRow>> {
    distortion_sweep_with_nonce(segment, key, base, payload, random_nonce())
}

/// Reproducible sweep: the same nonce is used at every width so only `B`
/// varies between rows.
pub fn distortion_sweep_with_nonce(
    segment: &StreamSegment,
    key: &StegoKey,
    base: &EmbedConfig,
    payload: &[u8],
    nonce: [u8; NONCE_LEN],
) -> Result<Vec<SweepRow>> {
    let narrowest = EmbedConfig {
        bits_per_coeff: 1,
        ..*base
    };
    let available = capacity_bits(segment.len(), &narrowest)?;
    let needed = 8 * (FRAME_OVERHEAD + payload.len()) as u64;
    if needed > available {
        return Err(Error::CapacityExceeded { needed, available });
    }
    (1..=MAX_BITS_PER_COEFF)
        .map(|bits| {
            let config = EmbedConfig {
                bits_per_coeff: bits,
                ..*base
            };
            let stego = embed_with_nonce(segment, key, payload, &config, nonce)?;
            let got = extract(&stego.stego, key, &config)?;
            Ok(SweepRow {
                bits,
                prd_stego: stego.prd_stego,
                prd_recovered: prd_segments(segment, &got.recovered)?,
            })
        })
        .collect()
}
