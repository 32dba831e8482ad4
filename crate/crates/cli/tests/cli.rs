use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const KEY: &str = "cli-test-key: 0123456789abcdefghijklmnopqrstuvwxyz";

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dctstego"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn dctstego")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

struct Workspace {
    dir: tempfile::TempDir,
}

impl Workspace {
    fn new() -> Self {
        let ws = Self {
            dir: tempfile::tempdir().unwrap(),
        };
        fs::write(ws.path("key.txt"), format!("{KEY}\n")).unwrap();
        fs::write(
            ws.path("secret.bin"),
            b"lat=-37.8136;lon=144.9631;id=STN-042\x00\xff",
        )
        .unwrap();
        let o = ws.run(&["synth", "--out", "corpus.csv", "--rows", "2048"]);
        assert!(o.status.success(), "{}", stderr(&o));
        ws
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn cmd(&self) -> Command {
        let mut c = bin();
        c.current_dir(self.dir.path());
        c
    }

    fn run(&self, args: &[&str]) -> Output {
        self.cmd().args(args).output().expect("spawn dctstego")
    }

    fn embed(&self, column: &str, extra: &[&str]) -> Output {
        let mut args = vec![
            "embed",
            "--input",
            "corpus.csv",
            "--column",
            column,
            "--window",
            "512",
            "--key-file",
            "key.txt",
            "--payload",
            "secret.bin",
            "--out",
            "out",
        ];
        args.extend_from_slice(extra);
        self.run(&args)
    }
}

fn data_rows(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn embed_then_extract_round_trip() {
    let ws = Workspace::new();
    let o = ws.embed("environment", &["--nonce-seed", "00ff"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = data_rows(&ws.path("out/embed_report.csv"));
    assert_eq!(report.len(), 4);
    assert_eq!(report[0][0], "corpus:1");
    assert_eq!(report[3][0], "corpus:1537");

    let o = ws.run(&[
        "extract",
        "--input",
        "out/stego.csv",
        "--key-file",
        "key.txt",
        "--payload-out",
        "recovered.bin",
        "--out",
        "extracted",
        "--original",
        "corpus.csv",
        "--column",
        "environment",
        "--window",
        "512",
        "--format",
        "csv-columns",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read(ws.path("recovered.bin")).unwrap(),
        fs::read(ws.path("secret.bin")).unwrap()
    );
    assert!(stdout(&o).starts_with("#schema=dctstego.prd.v1\n"));

    let prd = data_rows(&ws.path("extracted/prd.csv"));
    assert_eq!(prd.len(), 4);
    for row in &prd {
        let stego: f64 = row[1].parse().unwrap();
        let recovered: f64 = row[2].parse().unwrap();
        assert!(stego > 0.0 && stego < 1.0 && recovered < 1.0, "{row:?}");
    }
    assert!(ws.path("extracted/recovered.csv").exists());
    assert!(ws.path("extracted/extract_report.csv").exists());

    // the original may also be given as a segment file
    let o = ws.run(&[
        "extract",
        "--input",
        "out/stego.csv",
        "--key-env",
        "DCTSTEGO_TEST_KEY",
        "--payload-out",
        "again.bin",
        "--original",
        "extracted/recovered.csv",
    ]);
    assert!(!o.status.success(), "key variable is unset here");
    assert_eq!(o.status.code(), Some(2));
    let o = ws
        .cmd()
        .args([
            "extract",
            "--input",
            "out/stego.csv",
            "--key-env",
            "DCTSTEGO_TEST_KEY",
            "--payload-out",
            "again.bin",
            "--original",
            "extracted/recovered.csv",
        ])
        .env("DCTSTEGO_TEST_KEY", KEY)
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(
        fs::read(ws.path("again.bin")).unwrap(),
        fs::read(ws.path("secret.bin")).unwrap()
    );
}

#[test]
fn nonce_seed_makes_output_reproducible() {
    let ws = Workspace::new();
    assert!(ws
        .embed("chemical", &["--nonce-seed", "abcd"])
        .status
        .success());
    let first = fs::read(ws.path("out/stego.csv")).unwrap();
    assert!(ws
        .embed("chemical", &["--nonce-seed", "abcd"])
        .status
        .success());
    assert_eq!(fs::read(ws.path("out/stego.csv")).unwrap(), first);
    assert!(ws
        .embed("chemical", &["--nonce-seed", "abce"])
        .status
        .success());
    assert_ne!(fs::read(ws.path("out/stego.csv")).unwrap(), first);
}

#[test]
fn wrong_key_is_rejected_without_output() {
    let ws = Workspace::new();
    assert!(ws.embed("smart_home", &[]).status.success());
    fs::write(
        ws.path("other.txt"),
        "a different shared key of decent length",
    )
    .unwrap();
    let o = ws.run(&[
        "extract",
        "--input",
        "out/stego.csv",
        "--key-file",
        "other.txt",
        "--payload-out",
        "leak.bin",
    ]);
    assert_eq!(o.status.code(), Some(5));
    assert!(
        stderr(&o).contains("authentication failed"),
        "{}",
        stderr(&o)
    );
    assert!(!ws.path("leak.bin").exists());
}

#[test]
fn mismatched_config_is_rejected() {
    let ws = Workspace::new();
    assert!(ws.embed("chemical", &["--bits", "6"]).status.success());
    let o = ws.run(&[
        "extract",
        "--input",
        "out/stego.csv",
        "--key-file",
        "key.txt",
        "--payload-out",
        "p.bin",
        "--bits",
        "7",
    ]);
    assert_eq!(o.status.code(), Some(5));
}

#[test]
fn config_file_with_flag_override() {
    let ws = Workspace::new();
    fs::write(
        ws.path("shared.toml"),
        "bits = 4\nprotect_fraction = 0.25\nphi = 2000.0\ntheta = 10000.0\ncols = 32\n",
    )
    .unwrap();
    let o = ws.embed("environment", &["--config", "shared.toml", "--bits", "8"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let extract = |extra: &[&str]| {
        let mut args = vec![
            "extract",
            "--input",
            "out/stego.csv",
            "--key-file",
            "key.txt",
            "--payload-out",
            "p.bin",
            "--config",
            "shared.toml",
        ];
        args.extend_from_slice(extra);
        ws.run(&args)
    };
    assert_eq!(extract(&[]).status.code(), Some(5));
    assert!(extract(&["--bits", "8"]).status.success());

    fs::write(ws.path("bad.toml"), "bits = 4\ncolour = 3\n").unwrap();
    let o = ws.embed("environment", &["--config", "bad.toml"]);
    assert_eq!(o.status.code(), Some(2), "{}", stderr(&o));
}

#[test]
fn keyinfo_reports_entropy() {
    let o = run(&["keyinfo"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("448") && out.contains("7.2e+134"), "{out}");

    let o = run(&["keyinfo", "--table", "--format", "csv-columns"]);
    let out = stdout(&o);
    assert!(out.contains("128,US-ASCII,128,896,5.2e+269"), "{out}");
    assert!(out.contains("64,UTF-8,256,512,1.3e+154"), "{out}");
    assert!(out.contains("effectively unbounded"), "{out}");

    let o = run(&["keyinfo", "--grid-rows", "32", "--grid-cols", "16"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("search_space_log2"));
}

#[test]
fn capacity_fixture() {
    let o = run(&[
        "capacity",
        "--cells",
        "8192",
        "--protected",
        "50",
        "--bits",
        "9",
        "--format",
        "csv-columns",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(
        stdout(&o).contains("8192,50,9,73278,9159"),
        "{}",
        stdout(&o)
    );

    let o = run(&["capacity", "--length", "512", "--format", "csv-columns"]);
    assert!(stdout(&o).contains("512,103,10,4090,511"), "{}", stdout(&o));
}

#[test]
fn analyze_writes_sweep_and_compaction() {
    let ws = Workspace::new();
    let o = ws.run(&[
        "analyze",
        "--input",
        "corpus.csv",
        "--column",
        "chemical",
        "--window",
        "1024",
        "--key-file",
        "key.txt",
        "--nonce-seed",
        "01",
        "--keep",
        "10,30,1024",
        "--out",
        "analysis",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let sweep = data_rows(&ws.path("analysis/sweep.csv"));
    assert_eq!(sweep.len(), 2 * 10);
    assert!(sweep.iter().all(|r| r[2].parse::<f64>().unwrap() < 1.0));
    let compaction = data_rows(&ws.path("analysis/compaction.csv"));
    assert_eq!(compaction.len(), 2 * 3);
    let full: f64 = compaction[2][2].parse().unwrap();
    assert!(full < 1e-9);
}

#[test]
fn calibrate_phi_suggests_shift() {
    let ws = Workspace::new();
    let o = ws.run(&[
        "calibrate-phi",
        "--input",
        "corpus.csv",
        "--column",
        "smart_home",
        "--format",
        "csv-columns",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let out = stdout(&o);
    let row: Vec<&str> = out.lines().last().unwrap().split(',').collect();
    let min: f64 = row[1].parse().unwrap();
    let phi: f64 = row[3].parse().unwrap();
    assert_eq!(phi, (min.abs().ceil() * 2.0).max(1.0));
    assert_eq!(row[4], "true");
}

#[test]
fn error_exit_codes() {
    let o = run(&["embed"]);
    assert_eq!(o.status.code(), Some(2));

    let ws = Workspace::new();
    let o = ws.run(&[
        "embed",
        "--input",
        "missing.csv",
        "--key-file",
        "key.txt",
        "--payload",
        "secret.bin",
        "--out",
        "out",
    ]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));

    fs::write(ws.path("big.bin"), vec![1u8; 600]).unwrap();
    let o = ws.run(&[
        "embed",
        "--input",
        "corpus.csv",
        "--column",
        "chemical",
        "--key-file",
        "key.txt",
        "--payload",
        "big.bin",
        "--out",
        "out",
    ]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
    assert!(stderr(&o).contains("segment corpus:1"), "{}", stderr(&o));

    fs::write(ws.path("short.txt"), "too short").unwrap();
    let o = ws.run(&[
        "embed",
        "--input",
        "corpus.csv",
        "--column",
        "chemical",
        "--key-file",
        "short.txt",
        "--payload",
        "secret.bin",
        "--out",
        "out",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("key"), "{}", stderr(&o));

    let o = ws.embed("chemical", &["--phi", "0.5"]);
    assert_eq!(o.status.code(), Some(6), "{}", stderr(&o));

    let o = ws.embed("no_such_column", &[]);
    assert_eq!(o.status.code(), Some(2));
}
