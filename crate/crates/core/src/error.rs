use std::path::PathBuf;

use thiserror::Error;

/// Broad failure categories, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Io,
    Capacity,
    Auth,
    Numeric,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite sample at index {index}")]
    NonFiniteInput { index: usize },

    #[error("segment length {len} outside the supported range [{min}, {max}]")]
    LengthOutOfRange { len: usize, min: usize, max: usize },

    #[error("keep count {keep} outside [1, {len}]")]
    KeepCountOutOfRange { keep: usize, len: usize },

    #[error("key is {len} bytes; at least {min} are required")]
    KeyTooShort { len: usize, min: usize },

    #[error("payload of {len} bytes exceeds the frame length field")]
    PayloadTooLarge { len: usize },

    #[error("authentication failed")]
    AuthenticationFailed,

    #[error("malformed frame: {0}")]
    MalformedFrame(&'static str),

    #[error("permutation seed is empty")]
    EmptyBytes,

    #[error("permutation length must be at least 1")]
    ZeroLength,

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("invalid embedding config: {0}")]
    InvalidConfig(String),

    #[error("phi too small: coefficient {index} is {value}, shifted value is negative")]
    PhiTooSmall { index: usize, value: f64 },

    #[error("grid overflow: coefficient {index} maps to {value} grid units")]
    GridOverflow { index: usize, value: f64 },

    #[error("capacity exceeded: frame needs {needed} bits, carrier holds {available}")]
    CapacityExceeded { needed: u64, available: u64 },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("reference stream is all zeros")]
    ZeroReference,

    #[error("file not found: {}", .0.display())]
    FileNotFound(PathBuf),

    #[error("column {0} not present")]
    ColumnMissing(String),

    #[error("unparsable value {value:?} at row {row}")]
    UnparsableValue { row: usize, value: String },

    #[error("window {window} is longer than the {rows} available rows")]
    WindowTooLong { window: usize, rows: usize },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::AuthenticationFailed | Error::MalformedFrame(_) => ErrorClass::Auth,
            Error::CapacityExceeded { .. } | Error::PayloadTooLarge { .. } => ErrorClass::Capacity,
            Error::FileNotFound(_) | Error::Io(_) => ErrorClass::Io,
            Error::NonFiniteInput { .. }
            | Error::PhiTooSmall { .. }
            | Error::GridOverflow { .. }
            | Error::ZeroReference
            | Error::UnparsableValue { .. } => ErrorClass::Numeric,
            Error::LengthOutOfRange { .. }
            | Error::KeepCountOutOfRange { .. }
            | Error::KeyTooShort { .. }
            | Error::EmptyBytes
            | Error::ZeroLength
            | Error::InvalidParameters(_)
            | Error::InvalidConfig(_)
            | Error::LengthMismatch { .. }
            | Error::ColumnMissing(_)
            | Error::WindowTooLong { .. } => ErrorClass::Usage,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
