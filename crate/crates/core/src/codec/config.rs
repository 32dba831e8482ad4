use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_BITS_PER_COEFF: u32 = 1;
pub const MAX_BITS_PER_COEFF: u32 = 10;

/// Shared embedding parameters. Sender and receiver must hold identical
/// copies; nothing here is derived from the carrier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EmbedConfig {
    /// Payload bits written into each selected coefficient.
    #[serde(rename = "bits")]
    pub bits_per_coeff: u32,
    /// Fraction of leading (low-frequency) coefficients that are never touched.
    pub protect_fraction: f64,
    /// Shift added to every selected coefficient before scaling.
    pub phi: f64,
    /// Grid scale; 10^4 keeps four decimal places.
    pub theta: f64,
    /// Width of the coefficient matrix.
    #[serde(rename = "cols")]
    pub matrix_cols: usize,
}

impl Default for EmbedConfig {
    fn default() -> Self {
        Self {
            bits_per_coeff: MAX_BITS_PER_COEFF,
            protect_fraction: 0.2,
            phi: 1000.0,
            theta: 1e4,
            matrix_cols: 16,
        }
    }
}

const CONFIG_HEADER: &str = "# dctstego shared embedding config v1\n";

impl EmbedConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidConfig(msg));
        if !(MIN_BITS_PER_COEFF..=MAX_BITS_PER_COEFF).contains(&self.bits_per_coeff) {
            return fail(format!(
                "bits per coefficient must be in [{MIN_BITS_PER_COEFF}, {MAX_BITS_PER_COEFF}], got {}",
                self.bits_per_coeff
            ));
        }
        if !(self.protect_fraction >= 0.0 && self.protect_fraction < 1.0) {
            return fail(format!(
                "protect fraction must be in [0, 1), got {}",
                self.protect_fraction
            ));
        }
        if !(self.phi.is_finite() && self.phi > 0.0) {
            return fail(format!("phi must be finite and positive, got {}", self.phi));
        }
        if !(self.theta.is_finite() && self.theta > 0.0) {
            return fail(format!(
                "theta must be finite and positive, got {}",
                self.theta
            ));
        }
        if self.matrix_cols == 0 {
            return fail("matrix must have at least one column".into());
        }
        Ok(())
    }

    /// Number of leading DCT coefficients left untouched: `ceil(rho * L)`.
    pub fn protected_count(&self, len: usize) -> usize {
        // the epsilon absorbs products like 0.1 * 30 = 3.0000000000000004
        let h = (self.protect_fraction * len as f64 - 1e-9).ceil().max(0.0) as usize;
        h.min(len)
    }

    /// Row count of the coefficient matrix for a segment of `len` samples.
    pub fn matrix_rows(&self, len: usize) -> usize {
        len.div_ceil(self.matrix_cols)
    }

    pub fn field_mask(&self) -> u64 {
        (1u64 << self.bits_per_coeff) - 1
    }

    /// Flat `key = value` text form, suitable for checking into both ends.
    pub fn to_config_string(&self) -> String {
        let body = toml::to_string(self).expect("config serializes");
        format!("{CONFIG_HEADER}{body}")
    }

    pub fn from_config_str(text: &str) -> Result<Self> {
        let config: EmbedConfig =
            toml::from_str(text).map_err(|e| Error::InvalidConfig(e.message().to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
            _ => Error::Io(e),
        })?;
        Self::from_config_str(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_config_string())?;
        Ok(())
    }
}
