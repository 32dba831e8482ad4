use std::time::Instant;

use super::alloc::CountingAlloc;
use crate::codec::{embed_with_nonce, extract, EmbedConfig};
use crate::error::{Error, Result};
use crate::keying::StegoKey;
use crate::transform::{StreamSegment, MAX_SEGMENT_LEN, MIN_SEGMENT_LEN};

pub const MIN_TRIALS: usize = 3;

const BENCH_KEY: &[u8] = b"benchmark key, not secret, 64 bytes long for parity with tables..";
const BENCH_PAYLOAD: &[u8] = b"ID=STN-042;lat=-37.8136;lon=144.9631;ts=2019-03-01T10:00:00Z";

/// Median timings for one segment length.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRecord {
    pub segment_length: usize,
    pub embed_seconds: f64,
    pub extract_seconds: f64,
    /// Approximate peak heap growth during one embed + extract, in bytes.
    /// `None` unless [`CountingAlloc`] is the global allocator.
    pub peak_bytes: Option<u64>,
}

/// Least-squares line `seconds = slope * n + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

/// `time(4n) / time(n)` for lengths where both were measured.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingRatio {
    pub length: usize,
    pub embed_ratio: f64,
    pub extract_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MachineInfo {
    pub cpu_model: String,
    pub logical_cpus: usize,
    pub os: String,
    pub arch: String,
    pub pinned_cpu: Option<usize>,
    pub debug_build: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub trials: usize,
    pub records: Vec<BenchRecord>,
    pub embed_fit: Option<LinearFit>,
    pub extract_fit: Option<LinearFit>,
    pub ratios: Vec<ScalingRatio>,
    pub machine: MachineInfo,
}

/// Time embed and extract at each length, `trials` times each, on one
/// dedicated thread pinned to a single logical CPU where the platform
/// allows it.
pub fn timing_benchmark(lengths: &[usize], trials: usize) -> Result<BenchReport> {
    if trials < MIN_TRIALS {
        return Err(Error::InvalidParameters(format!(
            "at least {MIN_TRIALS} trials required, got {trials}"
        )));
    }
    if lengths.is_empty() {
        return Err(Error::InvalidParameters("no segment lengths given".into()));
    }
    if let Some(&bad) = lengths
        .iter()
        .find(|n| !(MIN_SEGMENT_LEN..=MAX_SEGMENT_LEN).contains(n))
    {
        return Err(Error::LengthOutOfRange {
            len: bad,
            min: MIN_SEGMENT_LEN,
            max: MAX_SEGMENT_LEN,
        });
    }

    let lengths = lengths.to_vec();
    let (records, pinned_cpu) = std::thread::spawn(move || {
        let pinned = pin_current_thread();
        let records = lengths
            .iter()
            .map(|&n| measure(n, trials))
            .collect::<Result<Vec<_>>>();
        records.map(|r| (r, pinned))
    })
    .join()
    .map_err(|_| Error::InvalidParameters("benchmark thread panicked".into()))??;

    let embed_fit = fit(&records, |r| r.embed_seconds);
    let extract_fit = fit(&records, |r| r.extract_seconds);
    let ratios = records
        .iter()
        .filter_map(|small| {
            let large = records
                .iter()
                .find(|r| r.segment_length == 4 * small.segment_length)?;
            Some(ScalingRatio {
                length: small.segment_length,
                embed_ratio: large.embed_seconds / small.embed_seconds,
                extract_ratio: large.extract_seconds / small.extract_seconds,
            })
        })
        .collect();

    Ok(BenchReport {
        trials,
        records,
        embed_fit,
        extract_fit,
        ratios,
        machine: machine_info(pinned_cpu),
    })
}

fn bench_segment(n: usize) -> Result<StreamSegment> {
    let samples = (0..n)
        .map(|i| {
            let t = i as f64;
            21.5 + 2.0 * (t / 96.0).sin() + 0.3 * (t / 7.0).cos() + 0.0005 * t
        })
        .collect();
    StreamSegment::new(samples, format!("bench:{n}"), "bench")
}

fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

fn measure(n: usize, trials: usize) -> Result<BenchRecord> {
    let key = StegoKey::new(BENCH_KEY)?;
    let config = EmbedConfig::default();
    let segment = bench_segment(n)?;

    // warm-up, also the memory probe
    CountingAlloc::reset_peak();
    let base = CountingAlloc::current_bytes();
    let warm = embed_with_nonce(&segment, &key, BENCH_PAYLOAD, &config, [0; 12])?;
    extract(&warm.stego, &key, &config)?;
    let peak_bytes =
        CountingAlloc::is_active().then(|| CountingAlloc::peak_bytes().saturating_sub(base) as u64);

    let mut embed_times = Vec::with_capacity(trials);
    let mut extract_times = Vec::with_capacity(trials);
    for trial in 0..trials {
        let nonce = [trial as u8; 12];
        let start = Instant::now();
        let out = embed_with_nonce(&segment, &key, BENCH_PAYLOAD, &config, nonce)?;
        embed_times.push(start.elapsed().as_secs_f64());

        let start = Instant::now();
        let got = extract(&out.stego, &key, &config)?;
        extract_times.push(start.elapsed().as_secs_f64());
        debug_assert_eq!(got.secret, BENCH_PAYLOAD);
    }
    Ok(BenchRecord {
        segment_length: n,
        embed_seconds: median(&mut embed_times),
        extract_seconds: median(&mut extract_times),
        peak_bytes,
    })
}

fn fit(records: &[BenchRecord], y: impl Fn(&BenchRecord) -> f64) -> Option<LinearFit> {
    if records.len() < 2 {
        return None;
    }
    let n = records.len() as f64;
    let xs: Vec<f64> = records.iter().map(|r| r.segment_length as f64).collect();
    let ys: Vec<f64> = records.iter().map(y).collect();
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mean_x).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - mean_x) * (y - mean_y))
        .sum();
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let ss_tot: f64 = ys.iter().map(|y| (y - mean_y).powi(2)).sum();
    let ss_res: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - slope * x - intercept).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

#[cfg(target_os = "linux")]
fn pin_current_thread() -> Option<usize> {
    // SAFETY: cpu_set_t is plain data; both calls only read/write the set we own.
    unsafe {
        let mut set: libc::cpu_set_t = std::mem::zeroed();
        let size = std::mem::size_of::<libc::cpu_set_t>();
        if libc::sched_getaffinity(0, size, &mut set) != 0 {
            return None;
        }
        let cpu = (0..libc::CPU_SETSIZE as usize).find(|&c| libc::CPU_ISSET(c, &set))?;
        let mut only = std::mem::zeroed::<libc::cpu_set_t>();
        libc::CPU_SET(cpu, &mut only);
        (libc::sched_setaffinity(0, size, &only) == 0).then_some(cpu)
    }
}

#[cfg(not(target_os = "linux"))]
fn pin_current_thread() -> Option<usize> {
    None
}

fn cpu_model() -> String {
    std::fs::read_to_string("/proc/cpuinfo")
        .ok()
        .and_then(|info| {
            info.lines()
                .find(|l| l.starts_with("model name"))
                .and_then(|l| l.split_once(':'))
                .map(|(_, v)| v.trim().to_string())
        })
        .unwrap_or_else(|| "unknown".to_string())
}

fn machine_info(pinned_cpu: Option<usize>) -> MachineInfo {
    MachineInfo {
        cpu_model: cpu_model(),
        logical_cpus: std::thread::available_parallelism().map_or(1, |n| n.get()),
        os: std::env::consts::OS.to_string(),
        arch: std::env::consts::ARCH.to_string(),
        pinned_cpu,
        debug_build: cfg!(debug_assertions),
    }
}
