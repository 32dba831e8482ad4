//! Everything derived from the shared secret: payload sealing, the keyed
//! hiding order, the coefficient scatter map, and key-strength analytics.
//!
//! A single user key is expanded into four independent secrets with
//! HKDF-SHA256, one per role, so the cipher key never doubles as a
//! permutation seed.

mod entropy;
mod frame;
mod permutation;

use std::fmt;

use ring::hkdf;

use crate::error::{Error, Result};

pub use entropy::{
    format_possibilities, key_entropy_bits, search_space_log2, SymbolSet, UNBOUNDED_BITS,
};
pub(crate) use frame::random_nonce;
pub use frame::{
    decrypt_payload, encrypt_payload, encrypt_payload_with_nonce, FrameHeader, PayloadFrame,
    FRAME_HEADER_LEN, FRAME_MAGIC, FRAME_OVERHEAD, FRAME_VERSION, NONCE_LEN, TAG_LEN,
};
pub use permutation::{
    expand_seed, hiding_order, order_from_permutations, permutation_from_bytes, rank_permutation,
};

/// Minimum accepted key length in bytes.
pub const MIN_KEY_LEN: usize = 16;
/// Key length at which the analytics tables start.
pub const RECOMMENDED_KEY_LEN: usize = 64;

const HKDF_SALT: &[u8] = b"dctstego/key-material/v1";
const SEED_LEN: usize = 32;

/// The pre-shared secret.
#[derive(Clone, PartialEq, Eq)]
pub struct StegoKey {
    secret: Vec<u8>,
}

impl StegoKey {
    pub fn new(secret: impl Into<Vec<u8>>) -> Result<Self> {
        let secret = secret.into();
        if secret.len() < MIN_KEY_LEN {
            return Err(Error::KeyTooShort {
                len: secret.len(),
                min: MIN_KEY_LEN,
            });
        }
        Ok(Self { secret })
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.secret
    }

    pub fn len(&self) -> usize {
        self.secret.len()
    }

    pub fn is_empty(&self) -> bool {
        self.secret.is_empty()
    }
}

impl fmt::Debug for StegoKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StegoKey")
            .field("len", &self.secret.len())
            .finish_non_exhaustive()
    }
}

/// Role-separated secrets derived from a [`StegoKey`].
#[derive(Clone, PartialEq, Eq)]
pub struct KeyMaterial {
    pub cipher_key: [u8; 32],
    pub order_seed_rows: Vec<u8>,
    pub order_seed_cols: Vec<u8>,
    pub scatter_seed: Vec<u8>,
}

impl fmt::Debug for KeyMaterial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("KeyMaterial { .. }")
    }
}

struct OutLen(usize);

impl hkdf::KeyType for OutLen {
    fn len(&self) -> usize {
        self.0
    }
}

fn expand_label(prk: &hkdf::Prk, label: &[u8], out: &mut [u8]) {
    let info = [label];
    prk.expand(&info, OutLen(out.len()))
        .and_then(|okm| okm.fill(out))
        // only fails for outputs longer than 255 hash blocks
        .expect("HKDF output length within limits");
}

pub fn derive_material(key: &StegoKey) -> Result<KeyMaterial> {
    if key.len() < MIN_KEY_LEN {
        return Err(Error::KeyTooShort {
            len: key.len(),
            min: MIN_KEY_LEN,
        });
    }
    let prk = hkdf::Salt::new(hkdf::HKDF_SHA256, HKDF_SALT).extract(key.as_bytes());

    let mut cipher_key = [0u8; 32];
    expand_label(&prk, b"cipher", &mut cipher_key);
    let seed = |label: &[u8]| {
        let mut out = vec![0u8; SEED_LEN];
        expand_label(&prk, label, &mut out);
        out
    };
    Ok(KeyMaterial {
        cipher_key,
        order_seed_rows: seed(b"rows"),
        order_seed_cols: seed(b"cols"),
        scatter_seed: seed(b"scatter"),
    })
}

impl KeyMaterial {
    /// Row and column permutations (1-based) for an `m x n` grid.
    pub fn order_permutations(&self, m: usize, n: usize) -> Result<(Vec<usize>, Vec<usize>)> {
        let rows = permutation_from_bytes(&self.order_seed_rows, m)?;
        let reversed: Vec<u8> = self.order_seed_cols.iter().rev().copied().collect();
        let cols = permutation_from_bytes(&reversed, n)?;
        Ok((rows, cols))
    }

    /// Keyed visiting order over an `m x n` grid as 1-based `(row, col)` pairs.
    pub fn hiding_order(&self, m: usize, n: usize) -> Result<Vec<(usize, usize)>> {
        let (rows, cols) = self.order_permutations(m, n)?;
        Ok(order_from_permutations(&rows, &cols))
    }
}
