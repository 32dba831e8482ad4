use super::config::EmbedConfig;
use crate::error::{Error, Result};
use crate::keying::permutation_from_bytes;

/// Largest grid value (exclusive) whose round trip through `v / theta - phi`
/// and back stays exact in an `f64`.
pub const GRID_LIMIT: f64 = 4_503_599_627_370_496.0 * 1e-4;

/// The DCT coefficients of one segment laid out as an `M x N` matrix.
///
/// DCT index `j` is stored at the linear cell given by the key-derived
/// scatter map; the trailing `M*N - L` cells are padding. The first
/// `ceil(rho * L)` indices are protected: their exact real values are kept
/// and their cells are never written.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientMatrix {
    rows: usize,
    cols: usize,
    len: usize,
    protected: usize,
    cells: Vec<u64>,
    cell_to_index: Vec<Option<usize>>,
    index_to_cell: Vec<usize>,
    protected_values: Vec<f64>,
}

impl CoefficientMatrix {
    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Number of real coefficients (the segment length).
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn protected_count(&self) -> usize {
        self.protected
    }

    /// Grid value at a linear cell position. Padding and protected cells
    /// read as 0.
    pub fn cell(&self, pos: usize) -> u64 {
        self.cells[pos]
    }

    pub fn cell_at(&self, row: usize, col: usize) -> u64 {
        self.cells[row * self.cols + col]
    }

    /// DCT index stored in a cell, `None` for padding.
    pub fn index_at(&self, pos: usize) -> Option<usize> {
        self.cell_to_index[pos]
    }

    /// Linear cell holding DCT index `j`.
    pub fn cell_of_index(&self, j: usize) -> usize {
        self.index_to_cell[j]
    }

    pub fn is_pad(&self, pos: usize) -> bool {
        self.cell_to_index[pos].is_none()
    }

    pub fn is_protected(&self, pos: usize) -> bool {
        matches!(self.cell_to_index[pos], Some(j) if j < self.protected)
    }

    pub fn protected_values(&self) -> &[f64] {
        &self.protected_values
    }

    pub(crate) fn set_cell(&mut self, pos: usize, value: u64) {
        debug_assert!(!self.is_pad(pos) && !self.is_protected(pos));
        self.cells[pos] = value;
    }

    /// Writable cells in the order given by `order` (1-based `(row, col)`).
    pub fn embeddable_cells(&self, order: &[(usize, usize)]) -> Vec<usize> {
        order
            .iter()
            .map(|&(r, c)| (r - 1) * self.cols + (c - 1))
            .filter(|&pos| !self.is_pad(pos) && !self.is_protected(pos))
            .collect()
    }
}

/// Shift, scale and round every unprotected coefficient onto the integer
/// grid: `v = round((y + phi) * theta)`.
pub fn rescale_to_grid(
    coeffs: &[f64],
    config: &EmbedConfig,
    scatter_seed: &[u8],
) -> Result<CoefficientMatrix> {
    config.validate()?;
    let len = coeffs.len();
    if len == 0 {
        return Err(Error::ZeroLength);
    }
    if let Some(index) = coeffs.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFiniteInput { index });
    }
    let cols = config.matrix_cols;
    let rows = config.matrix_rows(len);
    let protected = config.protected_count(len);

    let scatter = permutation_from_bytes(scatter_seed, len)?;
    let index_to_cell: Vec<usize> = scatter.iter().map(|p| p - 1).collect();
    let mut cell_to_index = vec![None; rows * cols];
    for (j, &pos) in index_to_cell.iter().enumerate() {
        cell_to_index[pos] = Some(j);
    }

    let mut cells = vec![0u64; rows * cols];
    for (j, &y) in coeffs.iter().enumerate().skip(protected) {
        let shifted = y + config.phi;
        if shifted < 0.0 {
            return Err(Error::PhiTooSmall { index: j, value: y });
        }
        let v = (shifted * config.theta).round();
        if v >= GRID_LIMIT {
            return Err(Error::GridOverflow { index: j, value: v });
        }
        cells[index_to_cell[j]] = v as u64;
    }

    Ok(CoefficientMatrix {
        rows,
        cols,
        len,
        protected,
        cells,
        cell_to_index,
        index_to_cell,
        protected_values: coeffs[..protected].to_vec(),
    })
}

/// Real coefficient represented by a grid value.
pub fn grid_to_real(value: u64, config: &EmbedConfig) -> f64 {
    value as f64 / config.theta - config.phi
}

/// Coefficients in natural order: protected values verbatim, everything
/// else read back from the grid.
pub fn inverse_rescale(matrix: &CoefficientMatrix, config: &EmbedConfig) -> Vec<f64> {
    (0..matrix.len)
        .map(|j| {
            if j < matrix.protected {
                matrix.protected_values[j]
            } else {
                grid_to_real(matrix.cells[matrix.index_to_cell[j]], config)
            }
        })
        .collect()
}
