#![allow(dead_code)]

use std::f64::consts::PI;

use dctstego::ingest::synthetic::{generate, SignalFamily};
use dctstego::transform::StreamSegment;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn weight(k: usize, n: usize) -> f64 {
    if k == 0 {
        (1.0 / n as f64).sqrt()
    } else {
        (2.0 / n as f64).sqrt()
    }
}

/// `cos(pi * (2i + 1) * k / 2n)` with the angle reduced exactly in integers.
fn basis(i: usize, k: usize, n: usize) -> f64 {
    let m = ((2 * i + 1) * k) % (4 * n);
    (PI * m as f64 / (2 * n) as f64).cos()
}

/// Direct O(N^2) evaluation of the orthonormal DCT-II.
pub fn naive_dct(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    (0..n)
        .map(|k| weight(k, n) * (0..n).map(|i| x[i] * basis(i, k, n)).sum::<f64>())
        .collect()
}

/// Direct O(N^2) evaluation of the inverse (DCT-III).
pub fn naive_idct(y: &[f64]) -> Vec<f64> {
    let n = y.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|k| weight(k, n) * y[k] * basis(i, k, n))
                .sum::<f64>()
        })
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A carrier drawn from one of the synthetic families or from bounded white
/// noise, labelled with its origin.
pub fn random_carrier(rng: &mut ChaCha8Rng, len: usize) -> StreamSegment {
    let pick = rng.random_range(0..4);
    let seed: u64 = rng.random();
    let (samples, label) = match pick {
        0 => (generate(SignalFamily::Chemical, len, seed), "chemical"),
        1 => (
            generate(SignalFamily::Environment, len, seed),
            "environment",
        ),
        2 => (generate(SignalFamily::SmartHome, len, seed), "smart_home"),
        _ => {
            let scale = rng.random_range(1.0..100.0);
            let offset = rng.random_range(-50.0..50.0);
            let noise = (0..len)
                .map(|_| offset + scale * rng.random_range(-1.0..1.0))
                .collect();
            (noise, "noise")
        }
    };
    StreamSegment::new(samples, format!("{label}:{seed}"), label).unwrap()
}

pub fn random_bytes(rng: &mut ChaCha8Rng, len: usize) -> Vec<u8> {
    (0..len).map(|_| rng.random()).collect()
}

/// Smooth test signal used by the compaction and sweep fixtures.
pub fn sinusoid_plus_trend(len: usize) -> Vec<f64> {
    (0..len)
        .map(|i| {
            let t = i as f64;
            50.0 + 0.02 * t + 8.0 * (2.0 * PI * t / 128.0).sin() + 3.0 * (2.0 * PI * t / 45.0).cos()
        })
        .collect()
}
