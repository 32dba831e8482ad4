//! Seeded stand-ins for the three sensor families, so every test and demo
//! runs offline.
//!
//! * chemical: gas-sensor resistance in the low thousands with exposure
//!   cycles (fast rise, slow recovery) and baseline drift;
//! * environment: room temperature between roughly 20 and 30 degrees with a
//!   daily cycle, a faster HVAC oscillation and sensor noise;
//! * smart home: household power draw in watts, base load plus fridge
//!   cycling and appliance bursts in the hundreds to thousands.

use std::f64::consts::PI;
use std::io::Write;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use super::{format_value, read_segments, window_series, ColumnRef, CorpusSpec};
use crate::error::Result;
use crate::transform::StreamSegment;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalFamily {
    Chemical,
    Environment,
    SmartHome,
}

impl SignalFamily {
    pub const ALL: [SignalFamily; 3] = [
        SignalFamily::Chemical,
        SignalFamily::Environment,
        SignalFamily::SmartHome,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SignalFamily::Chemical => "chemical",
            SignalFamily::Environment => "environment",
            SignalFamily::SmartHome => "smart_home",
        }
    }

    fn salt(self) -> u64 {
        match self {
            SignalFamily::Chemical => 0x11,
            SignalFamily::Environment => 0x22,
            SignalFamily::SmartHome => 0x33,
        }
    }
}

/// Rows in the bundled corpus file.
pub const BUNDLED_ROWS: usize = 4096;
/// Seed the bundled corpus was generated with.
pub const BUNDLED_SEED: u64 = 20190301;
/// Window lengths the bundled corpus is cut into (non-overlapping).
pub const BUNDLED_WINDOWS: [usize; 4] = [512, 1024, 2048, 4096];

/// Path of the bundled corpus inside the source tree.
pub fn bundled_corpus_path() -> &'static Path {
    Path::new(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/synthetic_corpus.csv"
    ))
}

fn smoothstep(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    0.5 - 0.5 * (PI * x).cos()
}

/// Window of height 1 between `start` and `end` with raised-cosine edges
/// `ramp` samples long.
fn soft_pulse(t: f64, start: f64, end: f64, ramp: f64) -> f64 {
    smoothstep((t - start) / ramp) * (1.0 - smoothstep((t - end) / ramp))
}

pub fn generate(family: SignalFamily, len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ family.salt().rotate_left(56));
    match family {
        SignalFamily::Chemical => chemical(len, &mut rng),
        SignalFamily::Environment => environment(len, &mut rng),
        SignalFamily::SmartHome => smart_home(len, &mut rng),
    }
}

fn chemical(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let noise = Normal::new(0.0, 4.0).unwrap();
    let base = rng.random_range(2000.0..2600.0);
    let drift = rng.random_range(-0.15..0.15);
    let mut out = Vec::with_capacity(len);
    let mut cycle_start = 0usize;
    let mut cycle_len = rng.random_range(300..600);
    let mut amplitude = rng.random_range(500.0..1500.0);
    for i in 0..len {
        if i - cycle_start >= cycle_len {
            cycle_start = i;
            cycle_len = rng.random_range(300..600);
            amplitude = rng.random_range(500.0..1500.0);
        }
        let t = (i - cycle_start) as f64;
        let exposure = cycle_len as f64 * 0.4;
        let response = if t < exposure {
            1.0 - (-t / 35.0).exp()
        } else {
            (1.0 - (-exposure / 35.0).exp()) * (-(t - exposure) / 90.0).exp()
        };
        out.push(base + drift * i as f64 + amplitude * response + noise.sample(rng));
    }
    out
}

fn environment(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let noise = Normal::new(0.0, 0.04).unwrap();
    let mean = rng.random_range(22.0..26.0);
    let phase = rng.random_range(0.0..2.0 * PI);
    let hvac_period = rng.random_range(150.0..300.0);
    let mut wander = 0.0;
    (0..len)
        .map(|i| {
            let t = i as f64;
            wander = 0.98 * wander + noise.sample(rng);
            mean + 3.0 * (2.0 * PI * t / 1440.0 + phase).sin()
                + 0.6 * (2.0 * PI * t / hvac_period).sin()
                + wander
        })
        .collect()
}

fn smart_home(len: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let noise = Normal::new(0.0, 6.0).unwrap();
    let base = rng.random_range(150.0..250.0);
    let fridge_period = rng.random_range(80.0..110.0);
    let mut events = Vec::new();
    let mut t = rng.random_range(20.0..200.0);
    while t < len as f64 {
        let duration = rng.random_range(12.0..60.0);
        let power = rng.random_range(400.0..1800.0);
        events.push((t, t + duration, power));
        t += duration + rng.random_range(80.0..400.0);
    }
    (0..len)
        .map(|i| {
            let t = i as f64;
            let cycle = (t % fridge_period) / fridge_period;
            let fridge = 110.0 * soft_pulse(cycle, 0.0, 0.35, 0.05);
            let evening = 350.0 * (2.0 * PI * t / 1440.0).sin().max(0.0).powi(2);
            let bursts: f64 = events
                .iter()
                .map(|&(s, e, p)| p * soft_pulse(t, s, e, 6.0))
                .sum();
            base + fridge + evening + bursts + noise.sample(rng)
        })
        .collect()
}

/// Three-column CSV text (`chemical,environment,smart_home`).
pub fn corpus_text(rows: usize, seed: u64) -> String {
    let columns: Vec<Vec<f64>> = SignalFamily::ALL
        .iter()
        .map(|&f| generate(f, rows, seed))
        .collect();
    let mut out = Vec::new();
    let names: Vec<&str> = SignalFamily::ALL.iter().map(|f| f.name()).collect();
    writeln!(out, "{}", names.join(",")).unwrap();
    for i in 0..rows {
        let row: Vec<String> = columns.iter().map(|c| format_value(c[i])).collect();
        writeln!(out, "{}", row.join(",")).unwrap();
    }
    String::from_utf8(out).unwrap()
}

pub fn write_corpus(path: &Path, rows: usize, seed: u64) -> Result<()> {
    std::fs::write(path, corpus_text(rows, seed))?;
    Ok(())
}

/// Every family, cut into non-overlapping windows of each length in
/// `windows`, from freshly generated data.
pub fn corpus_segments(rows: usize, seed: u64, windows: &[usize]) -> Result<Vec<StreamSegment>> {
    let index: Vec<usize> = (1..=rows).collect();
    let mut out = Vec::new();
    for family in SignalFamily::ALL {
        let values = generate(family, rows, seed);
        for &w in windows {
            out.extend(window_series(&values, &index, w, w, family.name())?);
        }
    }
    Ok(out)
}

/// Segments of a corpus file written by [`write_corpus`].
pub fn read_corpus_segments(path: &Path, windows: &[usize]) -> Result<Vec<StreamSegment>> {
    let mut out = Vec::new();
    for family in SignalFamily::ALL {
        for &w in windows {
            let spec = CorpusSpec::new(path, ColumnRef::Name(family.name().into()), w)
                .with_label(family.name());
            out.extend(read_segments(&spec)?);
        }
    }
    Ok(out)
}

/// The bundled corpus, read from the source tree.
pub fn bundled_segments() -> Result<Vec<StreamSegment>> {
    read_corpus_segments(bundled_corpus_path(), &BUNDLED_WINDOWS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_per_seed() {
        for f in SignalFamily::ALL {
            assert_eq!(generate(f, 300, 7), generate(f, 300, 7));
            assert_ne!(generate(f, 300, 7), generate(f, 300, 8));
        }
    }

    #[test]
    fn families_have_their_scales() {
        let chem = generate(SignalFamily::Chemical, 4096, 1);
        assert!(chem.iter().all(|&v| (1000.0..6000.0).contains(&v)));
        let env = generate(SignalFamily::Environment, 4096, 1);
        assert!(env.iter().all(|&v| (17.0..32.0).contains(&v)));
        let home = generate(SignalFamily::SmartHome, 4096, 1);
        assert!(home.iter().all(|&v| (50.0..3000.0).contains(&v)));
        assert!(home.iter().any(|&v| v > 500.0));
    }

    #[test]
    fn segment_count() {
        let segs = corpus_segments(4096, 3, &BUNDLED_WINDOWS).unwrap();
        assert_eq!(segs.len(), 3 * (8 + 4 + 2 + 1));
        assert_eq!(segs[0].segment_id(), "chemical:1");
        assert_eq!(segs.last().unwrap().segment_id(), "smart_home:1");
    }
}
