//! Authenticated payload container.
//!
//! ```text
//! offset  size  field
//! 0       4     magic "IOTS" (0x49 0x4F 0x54 0x53)
//! 4       1     version 0x01
//! 5       12    AES-256-GCM nonce
//! 17      4     ciphertext length, big-endian u32
//! 21      len   ciphertext
//! 21+len  16    GCM tag
//! ```
//!
//! The 21 header bytes are bound to the tag as associated data.

use ring::aead::{Aad, LessSafeKey, Nonce, UnboundKey, AES_256_GCM};
use ring::rand::{SecureRandom, SystemRandom};

use super::{derive_material, KeyMaterial, StegoKey};
use crate::error::{Error, Result};

pub const FRAME_MAGIC: [u8; 4] = *b"IOTS";
pub const FRAME_VERSION: u8 = 0x01;
pub const NONCE_LEN: usize = 12;
pub const TAG_LEN: usize = 16;
pub const FRAME_HEADER_LEN: usize = 4 + 1 + NONCE_LEN + 4;
/// Bytes added around the ciphertext.
pub const FRAME_OVERHEAD: usize = FRAME_HEADER_LEN + TAG_LEN;

/// Parsed fixed-size frame prefix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FrameHeader {
    pub nonce: [u8; NONCE_LEN],
    pub length: u32,
}

impl FrameHeader {
    pub fn parse(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < FRAME_HEADER_LEN {
            return Err(Error::MalformedFrame("truncated header"));
        }
        if bytes[..4] != FRAME_MAGIC {
            return Err(Error::MalformedFrame("bad magic"));
        }
        if bytes[4] != FRAME_VERSION {
            return Err(Error::MalformedFrame("unsupported version"));
        }
        let mut nonce = [0u8; NONCE_LEN];
        nonce.copy_from_slice(&bytes[5..17]);
        let length = u32::from_be_bytes(bytes[17..21].try_into().unwrap());
        Ok(Self { nonce, length })
    }

    pub fn to_bytes(&self) -> [u8; FRAME_HEADER_LEN] {
        let mut out = [0u8; FRAME_HEADER_LEN];
        out[..4].copy_from_slice(&FRAME_MAGIC);
        out[4] = FRAME_VERSION;
        out[5..17].copy_from_slice(&self.nonce);
        out[17..].copy_from_slice(&self.length.to_be_bytes());
        out
    }

    /// Total size of the frame this header announces.
    pub fn frame_len(&self) -> usize {
        FRAME_OVERHEAD + self.length as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayloadFrame {
    pub nonce: [u8; NONCE_LEN],
    pub ciphertext: Vec<u8>,
    pub tag: [u8; TAG_LEN],
}

impl PayloadFrame {
    fn header(&self) -> FrameHeader {
        FrameHeader {
            nonce: self.nonce,
            length: self.ciphertext.len() as u32,
        }
    }

    /// Size of the serialized frame in bytes.
    pub fn encoded_len(&self) -> usize {
        FRAME_OVERHEAD + self.ciphertext.len()
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.encoded_len());
        out.extend_from_slice(&self.header().to_bytes());
        out.extend_from_slice(&self.ciphertext);
        out.extend_from_slice(&self.tag);
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let header = FrameHeader::parse(bytes)?;
        if bytes.len() != header.frame_len() {
            return Err(Error::MalformedFrame(
                "length field does not match frame size",
            ));
        }
        let body = &bytes[FRAME_HEADER_LEN..];
        let (ciphertext, tag) = body.split_at(body.len() - TAG_LEN);
        Ok(Self {
            nonce: header.nonce,
            ciphertext: ciphertext.to_vec(),
            tag: tag.try_into().unwrap(),
        })
    }
}

fn cipher(material: &KeyMaterial) -> LessSafeKey {
    let unbound = UnboundKey::new(&AES_256_GCM, &material.cipher_key).expect("32-byte AES-256 key");
    LessSafeKey::new(unbound)
}

impl KeyMaterial {
    pub fn seal(&self, secret: &[u8], nonce: [u8; NONCE_LEN]) -> Result<PayloadFrame> {
        let length = u32::try_from(secret.len())
            .map_err(|_| Error::PayloadTooLarge { len: secret.len() })?;
        let header = FrameHeader { nonce, length }.to_bytes();
        let mut ciphertext = secret.to_vec();
        let tag = cipher(self)
            .seal_in_place_separate_tag(
                Nonce::assume_unique_for_key(nonce),
                Aad::from(&header[..]),
                &mut ciphertext,
            )
            .map_err(|_| Error::PayloadTooLarge { len: secret.len() })?;
        Ok(PayloadFrame {
            nonce,
            ciphertext,
            tag: tag.as_ref().try_into().unwrap(),
        })
    }

    pub fn open(&self, frame: &PayloadFrame) -> Result<Vec<u8>> {
        let header = frame.header().to_bytes();
        let mut in_out = Vec::with_capacity(frame.ciphertext.len() + TAG_LEN);
        in_out.extend_from_slice(&frame.ciphertext);
        in_out.extend_from_slice(&frame.tag);
        let plain_len = cipher(self)
            .open_in_place(
                Nonce::assume_unique_for_key(frame.nonce),
                Aad::from(&header[..]),
                &mut in_out,
            )
            .map_err(|_| Error::AuthenticationFailed)?
            .len();
        in_out.truncate(plain_len);
        Ok(in_out)
    }
}

pub(crate) fn random_nonce() -> [u8; NONCE_LEN] {
    let mut nonce = [0u8; NONCE_LEN];
    SystemRandom::new()
        .fill(&mut nonce)
        .expect("system entropy source available");
    nonce
}

/// Seal `secret` under the key with a fresh random nonce.
pub fn encrypt_payload(key: &StegoKey, secret: &[u8]) -> Result<PayloadFrame> {
    encrypt_payload_with_nonce(key, secret, random_nonce())
}

/// Deterministic variant for tests and reproducible runs. Never reuse a
/// nonce with the same key for different secrets.
pub fn encrypt_payload_with_nonce(
    key: &StegoKey,
    secret: &[u8],
    nonce: [u8; NONCE_LEN],
) -> Result<PayloadFrame> {
    derive_material(key)?.seal(secret, nonce)
}

pub fn decrypt_payload(key: &StegoKey, frame: &PayloadFrame) -> Result<Vec<u8>> {
    derive_material(key)?.open(frame)
}
