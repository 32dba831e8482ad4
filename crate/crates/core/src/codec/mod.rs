//! Hiding an authenticated frame in the DCT coefficients of a segment.
//!
//! Sender: DCT, scatter the coefficients over an `M x N` matrix, shift and
//! scale the unprotected ones onto an integer grid, overwrite the `B` least
//! significant bits of cells in keyed order with the frame bits, inverse DCT.
//!
//! Receiver: the same forward steps recover the grid exactly, the frame is
//! read back in the same order and opened, then the written bits are zeroed
//! to produce a sanitised stream for downstream use.

mod bits;
mod config;
mod grid;

use crate::error::{Error, Result};
use crate::keying::{
    derive_material, FrameHeader, KeyMaterial, PayloadFrame, StegoKey, FRAME_HEADER_LEN, NONCE_LEN,
};
use crate::metrics;
use crate::transform::{DctPlan, StreamSegment};

use bits::{FieldReader, FieldWriter};
pub use config::{EmbedConfig, MAX_BITS_PER_COEFF, MIN_BITS_PER_COEFF};
pub use grid::{grid_to_real, inverse_rescale, rescale_to_grid, CoefficientMatrix, GRID_LIMIT};

/// `(cells - protected) * bits`: payload bits a carrier can hold.
pub fn capacity_from_counts(cells: u64, protected: u64, bits_per_coeff: u32) -> u64 {
    cells.saturating_sub(protected) * u64::from(bits_per_coeff)
}

/// Payload bits available in a segment of `len` samples.
pub fn capacity_bits(len: usize, config: &EmbedConfig) -> Result<u64> {
    config.validate()?;
    Ok(capacity_from_counts(
        len as u64,
        config.protected_count(len) as u64,
        config.bits_per_coeff,
    ))
}

/// Cells needed to carry `frame_len` bytes at `bits_per_coeff` bits per cell.
pub fn cells_for_frame(frame_len: usize, bits_per_coeff: u32) -> usize {
    (frame_len * 8).div_ceil(bits_per_coeff as usize)
}

/// One written cell, as the receiver will see it on the grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CellWrite {
    pub dct_index: usize,
    pub cell: usize,
    pub value: u64,
}

#[derive(Debug, Clone)]
pub struct EmbedResult {
    pub stego: StreamSegment,
    pub frame_len: usize,
    pub used_cells: usize,
    pub capacity_bits: u64,
    /// Distortion of the stego stream relative to the carrier, in percent.
    pub prd_stego: f64,
    pub cell_writes: Vec<CellWrite>,
}

#[derive(Debug, Clone)]
pub struct Extraction {
    pub secret: Vec<u8>,
    /// Stego stream with every written bit zeroed.
    pub recovered: StreamSegment,
    pub used_cells: usize,
}

struct Prepared {
    plan: DctPlan,
    coeffs: Vec<f64>,
    grid: CoefficientMatrix,
    slots: Vec<usize>,
}

fn prepare(samples: &[f64], material: &KeyMaterial, config: &EmbedConfig) -> Result<Prepared> {
    let plan = DctPlan::new(samples.len())?;
    let coeffs = plan.forward(samples)?;
    let grid = rescale_to_grid(&coeffs, config, &material.scatter_seed)?;
    let order = material.hiding_order(grid.rows(), grid.cols())?;
    let slots = grid.embeddable_cells(&order);
    Ok(Prepared {
        plan,
        coeffs,
        grid,
        slots,
    })
}

/// Embed `secret` with a fresh random nonce.
pub fn embed(
    carrier: &StreamSegment,
    key: &StegoKey,
    secret: &[u8],
    config: &EmbedConfig,
) -> Result<EmbedResult> {
    embed_with_nonce(carrier, key, secret, config, crate::keying::random_nonce())
}

/// Embed `secret` with a caller-chosen nonce. Reusing a nonce under the same
/// key for different secrets breaks confidentiality.
pub fn embed_with_nonce(
    carrier: &StreamSegment,
    key: &StegoKey,
    secret: &[u8],
    config: &EmbedConfig,
    nonce: [u8; NONCE_LEN],
) -> Result<EmbedResult> {
    config.validate()?;
    let material = derive_material(key)?;
    let frame = material.seal(secret, nonce)?.to_bytes();

    let capacity = capacity_bits(carrier.len(), config)?;
    let needed = 8 * frame.len() as u64;
    if needed > capacity {
        return Err(Error::CapacityExceeded {
            needed,
            available: capacity,
        });
    }

    let Prepared {
        plan,
        mut coeffs,
        mut grid,
        slots,
    } = prepare(carrier.samples(), &material, config)?;

    let width = config.bits_per_coeff;
    let keep_mask = !config.field_mask();
    let used = cells_for_frame(frame.len(), width);
    let mut reader = FieldReader::new(&frame);
    let mut cell_writes = Vec::with_capacity(used);
    for &pos in &slots[..used] {
        let value = (grid.cell(pos) & keep_mask) | reader.next_field(width);
        grid.set_cell(pos, value);
        let j = grid.index_at(pos).expect("slot is not padding");
        coeffs[j] = grid_to_real(value, config);
        cell_writes.push(CellWrite {
            dct_index: j,
            cell: pos,
            value,
        });
    }

    let stego = carrier.with_samples(plan.inverse(&coeffs)?)?;
    let prd_stego = metrics::prd(carrier.samples(), stego.samples())?;
    Ok(EmbedResult {
        stego,
        frame_len: frame.len(),
        used_cells: used,
        capacity_bits: capacity,
        prd_stego,
        cell_writes,
    })
}

/// Recover the secret from a stego segment and return the sanitised stream.
///
/// Any inconsistency in the recovered frame, including a header that does
/// not parse or announces more data than the carrier can hold, is reported
/// as [`Error::AuthenticationFailed`]: with the wrong key those bytes are
/// noise, and callers should not be able to tell the cases apart.
pub fn extract(stego: &StreamSegment, key: &StegoKey, config: &EmbedConfig) -> Result<Extraction> {
    config.validate()?;
    let material = derive_material(key)?;
    let Prepared {
        plan,
        mut coeffs,
        grid,
        slots,
    } = prepare(stego.samples(), &material, config)?;

    let width = config.bits_per_coeff;
    let mut writer = FieldWriter::default();
    let mut next = slots.iter();
    let mut read_until = |writer: &mut FieldWriter, bytes: usize| -> Result<()> {
        while writer.complete_bytes().len() < bytes {
            let &pos = next.next().ok_or(Error::AuthenticationFailed)?;
            writer.push_field(grid.cell(pos) & config.field_mask(), width);
        }
        Ok(())
    };

    read_until(&mut writer, FRAME_HEADER_LEN)?;
    let header =
        FrameHeader::parse(writer.complete_bytes()).map_err(|_| Error::AuthenticationFailed)?;
    let frame_len = header.frame_len();
    let capacity_bits = (slots.len() * width as usize) as u64;
    if 8 * frame_len as u64 > capacity_bits {
        return Err(Error::AuthenticationFailed);
    }
    read_until(&mut writer, frame_len)?;
    let frame = PayloadFrame::from_bytes(&writer.complete_bytes()[..frame_len])
        .map_err(|_| Error::AuthenticationFailed)?;
    let secret = material.open(&frame)?;

    let used = cells_for_frame(frame_len, width);
    let keep_mask = !config.field_mask();
    for &pos in &slots[..used] {
        let j = grid.index_at(pos).expect("slot is not padding");
        coeffs[j] = grid_to_real(grid.cell(pos) & keep_mask, config);
    }
    let recovered = stego.with_samples(plan.inverse(&coeffs)?)?;
    Ok(Extraction {
        secret,
        recovered,
        used_cells: used,
    })
}

/// Grid a receiver would compute for `stego`; useful for verifying that
/// written cells survive the transform round trip.
pub fn receiver_grid(
    stego: &StreamSegment,
    key: &StegoKey,
    config: &EmbedConfig,
) -> Result<CoefficientMatrix> {
    let material = derive_material(key)?;
    let coeffs = DctPlan::new(stego.len())?.forward(stego.samples())?;
    rescale_to_grid(&coeffs, config, &material.scatter_seed)
}
