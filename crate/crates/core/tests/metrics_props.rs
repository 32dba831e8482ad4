mod common;

use common::{naive_dct, naive_idct, sinusoid_plus_trend};
use dctstego::codec::EmbedConfig;
use dctstego::keying::StegoKey;
use dctstego::metrics::{
    bench_table, distortion_sweep_with_nonce, prd, sweep_table, timing_benchmark, SCHEMA_BENCH,
    SCHEMA_SWEEP,
};
use dctstego::transform::{compaction_profile, StreamSegment};
use dctstego::Error;
use proptest::prelude::*;

proptest! {
    #[test]
    fn prd_is_scale_invariant(
        pair in (2usize..200).prop_flat_map(|n| (
            prop::collection::vec(-1e3f64..1e3, n),
            prop::collection::vec(-1e3f64..1e3, n),
        )),
        alpha in prop_oneof![-1e3f64..-1e-3, 1e-3f64..1e3],
    ) {
        let (x, y) = pair;
        prop_assume!(x.iter().any(|v| v.abs() > 1e-6));
        let base = prd(&x, &y).unwrap();
        let sx: Vec<f64> = x.iter().map(|v| alpha * v).collect();
        let sy: Vec<f64> = y.iter().map(|v| alpha * v).collect();
        let scaled = prd(&sx, &sy).unwrap();
        prop_assert!((scaled - base).abs() <= 1e-10 * base.max(1.0));
    }

    #[test]
    fn prd_of_identical_streams_is_zero(x in prop::collection::vec(-1e6f64..1e6, 1..300)) {
        prop_assume!(x.iter().any(|&v| v != 0.0));
        prop_assert_eq!(prd(&x, &x).unwrap(), 0.0);
    }
}

#[test]
fn prd_examples() {
    assert_eq!(prd(&[3.0, 4.0], &[0.0, 0.0]).unwrap(), 100.0);
    let third = prd(&[1.0, 2.0, 2.0], &[1.0, 2.0, 1.0]).unwrap();
    assert!((third - 100.0 / 3.0).abs() < 1e-12);
}

#[test]
fn prd_is_not_symmetric() {
    let x = [1.0, 2.0, 3.0, 4.0];
    let y = [1.5, 2.0, 2.0, 5.0];
    let forward = prd(&x, &y).unwrap();
    let backward = prd(&y, &x).unwrap();
    assert!((forward - backward).abs() > 1e-3, "{forward} vs {backward}");
}

#[test]
fn prd_errors() {
    assert!(matches!(
        prd(&[0.0, 0.0], &[1.0, 1.0]),
        Err(Error::ZeroReference)
    ));
    assert!(matches!(
        prd(&[1.0], &[1.0, 2.0]),
        Err(Error::LengthMismatch { .. })
    ));
}

#[test]
fn pure_dc_compacts_into_one_coefficient() {
    let seg = StreamSegment::from_samples(vec![7.25; 256]).unwrap();
    assert!(compaction_profile(&seg, &[1]).unwrap()[0].1 < 1e-12);
}

#[test]
fn compaction_regression_at_thirty_coefficients() {
    // Truncation oracle: naive DCT, zero all but the first 30 coefficients,
    // naive inverse. First evaluated value, frozen.
    const FROZEN: f64 = 0.24510672553631385;
    let x = sinusoid_plus_trend(512);
    let mut y = naive_dct(&x);
    y[30..].iter_mut().for_each(|c| *c = 0.0);
    let oracle = prd(&x, &naive_idct(&y)).unwrap();
    assert!((oracle - FROZEN).abs() <= 1e-9 * FROZEN);

    let seg = StreamSegment::from_samples(x).unwrap();
    let fast = compaction_profile(&seg, &[30]).unwrap()[0].1;
    assert!((fast - FROZEN).abs() <= 1e-9 * FROZEN, "{fast}");
}

const SWEEP_KEY: &[u8] = b"sweep-fixture-key-0123456789abcdef";
const SWEEP_PAYLOAD: &[u8] = b"STN-042;T=22.5";

// First evaluated output of the sweep on the 512-sample smooth signal,
// frozen as a regression curve: (B, stego PRD %, recovered PRD %).
const SWEEP_CURVE: [(u32, f64, f64); 10] = [
    (1, 0.00012216101439875874, 0.00012464251228173714),
    (2, 0.00018891541247493596, 0.0002165110996181559),
    (3, 0.0003257586923559547, 0.0004044698335016623),
    (4, 0.0005268178995302441, 0.0007336949641689661),
    (5, 0.0010117152361819818, 0.0013765873541250267),
    (6, 0.0019410594410392782, 0.002429468011047089),
    (7, 0.0035620238605759153, 0.005380465994300374),
    (8, 0.004864907924947398, 0.00691903512491977),
    (9, 0.010805026924091066, 0.012948625993151615),
    (10, 0.020161808335714043, 0.0280408696393938),
];

#[test]
fn sweep_matches_frozen_curve() {
    let seg = StreamSegment::from_samples(sinusoid_plus_trend(512)).unwrap();
    let key = StegoKey::new(SWEEP_KEY).unwrap();
    let rows = distortion_sweep_with_nonce(
        &seg,
        &key,
        &EmbedConfig::default(),
        SWEEP_PAYLOAD,
        [0x42; 12],
    )
    .unwrap();
    assert_eq!(rows.len(), 10);
    for (row, &(bits, stego, recovered)) in rows.iter().zip(&SWEEP_CURVE) {
        assert_eq!(row.bits, bits);
        assert!(
            (row.prd_stego - stego).abs() <= 1e-9 * stego,
            "B={bits}: {}",
            row.prd_stego
        );
        assert!(
            (row.prd_recovered - recovered).abs() <= 1e-9 * recovered,
            "B={bits}: {}",
            row.prd_recovered
        );
    }
    assert!(rows[9].prd_stego >= rows[0].prd_stego);
    assert!(rows
        .iter()
        .all(|r| r.prd_stego < 1.0 && r.prd_recovered < 1.0));

    let table = sweep_table("smooth:1", &rows);
    let csv = table.to_csv();
    assert!(csv.starts_with(&format!("#schema={SCHEMA_SWEEP}\n")));
    assert_eq!(csv.lines().filter(|l| !l.starts_with('#')).count(), 11);
}

#[test]
fn sweep_with_empty_payload_is_monotone_at_endpoints() {
    let seg = StreamSegment::from_samples(sinusoid_plus_trend(1024)).unwrap();
    let key = StegoKey::new(SWEEP_KEY).unwrap();
    let rows =
        distortion_sweep_with_nonce(&seg, &key, &EmbedConfig::default(), b"", [1; 12]).unwrap();
    assert_eq!(rows.len(), 10);
    assert!(rows[9].prd_stego >= rows[0].prd_stego);
}

#[test]
fn sweep_rejects_payload_that_does_not_fit_one_bit() {
    let seg = StreamSegment::from_samples(sinusoid_plus_trend(512)).unwrap();
    let key = StegoKey::new(SWEEP_KEY).unwrap();
    let err = distortion_sweep_with_nonce(&seg, &key, &EmbedConfig::default(), &[0; 15], [0; 12]);
    assert!(matches!(
        err,
        Err(Error::CapacityExceeded {
            needed: 416,
            available: 409
        })
    ));
}

#[test]
fn benchmark_parameter_checks() {
    for trials in [0, 1, 2] {
        assert!(matches!(
            timing_benchmark(&[512], trials),
            Err(Error::InvalidParameters(_))
        ));
    }
    assert!(matches!(
        timing_benchmark(&[], 5),
        Err(Error::InvalidParameters(_))
    ));
    assert!(matches!(
        timing_benchmark(&[10], 5),
        Err(Error::LengthOutOfRange { .. })
    ));
}

#[test]
fn benchmark_report_shape() {
    let report = timing_benchmark(&[256, 1024], 3).unwrap();
    assert_eq!(report.records.len(), 2);
    assert_eq!(report.ratios.len(), 1);
    assert_eq!(report.ratios[0].length, 256);
    assert!(report
        .records
        .iter()
        .all(|r| r.embed_seconds > 0.0 && r.extract_seconds > 0.0));
    // no counting allocator is installed in this test binary
    assert!(report.records.iter().all(|r| r.peak_bytes.is_none()));
    assert!(report.embed_fit.is_some());
    let csv = bench_table(&report).to_csv();
    assert!(csv.starts_with(&format!("#schema={SCHEMA_BENCH}\n")));
    assert!(csv.contains("#statistic=median"));
}
