//! Keyed data hiding in the DCT coefficients of numeric sensor streams.
//!
//! A secret (for example a device identity and location) is sealed in an
//! authenticated frame and written into the least significant bits of
//! selected DCT coefficients of a time-series window. Which coefficients,
//! and in which order, is derived from a pre-shared key. The receiver
//! recovers the secret, checks it, and gets back a sanitised copy of the
//! stream.
//!
//! ```
//! use dctstego::codec::{embed, extract, EmbedConfig};
//! use dctstego::keying::StegoKey;
//! use dctstego::transform::StreamSegment;
//!
//! let samples: Vec<f64> = (0..512).map(|i| 21.0 + (i as f64 / 30.0).sin()).collect();
//! let carrier = StreamSegment::new(samples, "room-3:1", "room-3").unwrap();
//! let key = StegoKey::new(b"0123456789abcdef0123456789abcdef".to_vec()).unwrap();
//! let config = EmbedConfig::default();
//!
//! let sent = embed(&carrier, &key, b"ID=STN-042", &config).unwrap();
//! assert!(sent.prd_stego < 1.0);
//! let got = extract(&sent.stego, &key, &config).unwrap();
//! assert_eq!(got.secret, b"ID=STN-042");
//! ```

pub mod codec;
pub mod error;
pub mod ingest;
pub mod keying;
pub mod metrics;
pub mod transform;

pub use error::{Error, ErrorClass, Result};
