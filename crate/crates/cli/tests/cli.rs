//! End-to-end tests of the command-line interface, driving the compiled
//! binary through its subcommands.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_archipelago")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn workdir(name: &str) -> PathBuf {
    let dir = Path::new(env!("CARGO_TARGET_TMPDIR")).join(name);
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn run_ok(args: &[&str]) {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

fn partition(input: &Path, rd: &str, out: &Path) {
    run_ok(&[
        "partition",
        "--input",
        input.to_str().unwrap(),
        "--rd",
        rd,
        "--out",
        out.to_str().unwrap(),
    ]);
}

/// CSV field by header name from a two-line metrics file.
fn csv_field(csv: &str, name: &str) -> String {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let k = header.iter().position(|h| *h == name).unwrap();
    row[k].to_string()
}

#[test]
fn round_trip_and_formats() {
    let dir = workdir("round_trip");
    let filt = dir.join("filtration.json");
    partition(&fixture("mini.tsv"), "1.0", &filt);
    let text = std::fs::read_to_string(&filt).unwrap();
    assert!(text.contains("\"merges\""));

    let svg = dir.join("out.svg");
    run_ok(&[
        "draw",
        "--filtration",
        filt.to_str().unwrap(),
        "--t",
        "3.0",
        "--out",
        svg.to_str().unwrap(),
    ]);
    let svg_text = std::fs::read_to_string(&svg).unwrap();
    assert!(svg_text.starts_with("<?xml") || svg_text.starts_with("<svg"));
    assert!(svg_text.contains("</svg>"));

    let csv = dir.join("metrics.csv");
    run_ok(&[
        "metrics",
        "--filtration",
        filt.to_str().unwrap(),
        "--t",
        "3.0",
        "--out",
        csv.to_str().unwrap(),
    ]);
    let csv_text = std::fs::read_to_string(&csv).unwrap();
    assert!(csv_text.starts_with("shapes,"));
    assert_eq!(csv_text.lines().count(), 2);
}

#[test]
fn json_ingest_matches_tsv() {
    let dir = workdir("json_ingest");
    // The same dataset expressed in the JSON input format.
    let tsv = std::fs::read_to_string(fixture("mini.tsv")).unwrap();
    let mut labels: Vec<&str> = Vec::new();
    let mut records = Vec::new();
    for (id, line) in tsv.lines().enumerate() {
        let f: Vec<&str> = line.split('\t').collect();
        let category = match labels.iter().position(|l| *l == f[2]) {
            Some(k) => k,
            None => {
                labels.push(f[2]);
                labels.len() - 1
            }
        };
        records.push(format!(
            "{{\"id\":{id},\"pos\":{{\"x\":{},\"y\":{}}},\"category\":{category}}}",
            f[0].parse::<f64>().unwrap(),
            f[1].parse::<f64>().unwrap()
        ));
    }
    let json_path = dir.join("mini.json");
    std::fs::write(&json_path, format!("[{}]", records.join(","))).unwrap();

    let from_tsv = dir.join("from_tsv.json");
    let from_json = dir.join("from_json.json");
    partition(&fixture("mini.tsv"), "1.0", &from_tsv);
    partition(&json_path, "1.0", &from_json);
    assert_eq!(
        std::fs::read(&from_tsv).unwrap(),
        std::fs::read(&from_json).unwrap(),
        "TSV and JSON ingestion must produce identical filtrations"
    );
}

#[test]
fn repeated_runs_are_byte_identical() {
    let dir = workdir("determinism");
    let (f1, f2) = (dir.join("f1.json"), dir.join("f2.json"));
    partition(&fixture("mini.tsv"), "1.0", &f1);
    partition(&fixture("mini.tsv"), "1.0", &f2);
    assert_eq!(std::fs::read(&f1).unwrap(), std::fs::read(&f2).unwrap());

    let (s1, s2) = (dir.join("s1.svg"), dir.join("s2.svg"));
    for s in [&s1, &s2] {
        run_ok(&[
            "draw",
            "--filtration",
            f1.to_str().unwrap(),
            "--out",
            s.to_str().unwrap(),
        ]);
    }
    assert_eq!(std::fs::read(&s1).unwrap(), std::fs::read(&s2).unwrap());

    let (m1, m2) = (dir.join("m1.csv"), dir.join("m2.csv"));
    for m in [&m1, &m2] {
        run_ok(&[
            "metrics",
            "--filtration",
            f1.to_str().unwrap(),
            "--out",
            m.to_str().unwrap(),
        ]);
    }
    assert_eq!(std::fs::read(&m1).unwrap(), std::fs::read(&m2).unwrap());
}

#[test]
fn time_zero_draws_one_disk_per_point() {
    let dir = workdir("time_zero");
    let filt = dir.join("filtration.json");
    partition(&fixture("mini.tsv"), "1.0", &filt);
    let csv = dir.join("metrics.csv");
    run_ok(&[
        "metrics",
        "--filtration",
        filt.to_str().unwrap(),
        "--t",
        "0",
        "--out",
        csv.to_str().unwrap(),
    ]);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(csv_field(&text, "shapes"), "13"); // one singleton per point
}

#[test]
fn golden_svg() {
    let dir = workdir("golden");
    let filt = dir.join("filtration.json");
    partition(&fixture("mini.tsv"), "1.0", &filt);
    let svg = dir.join("out.svg");
    run_ok(&[
        "draw",
        "--filtration",
        filt.to_str().unwrap(),
        "--t",
        "3.0",
        "--out",
        svg.to_str().unwrap(),
    ]);
    let got = std::fs::read_to_string(&svg).unwrap();
    let want = std::fs::read_to_string(fixture("golden.svg")).unwrap();
    assert_eq!(got, want, "rendered SVG deviates from the golden fixture");
}

#[test]
fn sweep_outputs_and_monotonicity() {
    let dir = workdir("sweep");
    run_ok(&[
        "sweep",
        "--input",
        fixture("mini.tsv").to_str().unwrap(),
        "--rd",
        "1.0",
        "--out",
        dir.to_str().unwrap(),
    ]);
    assert!(dir.join("filtration.json").exists());
    for k in 0..4 {
        assert!(dir.join(format!("drawing-{k}.svg")).exists());
    }
    let csv = std::fs::read_to_string(dir.join("metrics.csv")).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    assert_eq!(header[0], "t");
    let shapes_col = header.iter().position(|h| *h == "shapes").unwrap();
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 4);
    let counts: Vec<usize> = rows
        .iter()
        .map(|r| r[shapes_col].parse().unwrap())
        .collect();
    assert!(
        counts.windows(2).all(|w| w[1] <= w[0]),
        "shape count must not increase with t: {counts:?}"
    );
    // The sweep shares one filtration: re-partitioning gives the same bytes.
    let again = dir.join("again.json");
    partition(&fixture("mini.tsv"), "1.0", &again);
    assert_eq!(
        std::fs::read(dir.join("filtration.json")).unwrap(),
        std::fs::read(&again).unwrap()
    );
}

#[test]
fn exit_codes() {
    let dir = workdir("exit_codes");
    let filt = dir.join("filtration.json");
    partition(&fixture("mini.tsv"), "1.0", &filt);

    // Usage error: negative time.
    let out = run(&[
        "draw",
        "--filtration",
        filt.to_str().unwrap(),
        "--t=-1",
        "--out",
        dir.join("x.svg").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));

    // Data errors: missing file, malformed row, duplicate point, empty input.
    let missing = run(&[
        "partition",
        "--input",
        dir.join("nope.tsv").to_str().unwrap(),
        "--out",
        dir.join("f.json").to_str().unwrap(),
    ]);
    assert_eq!(missing.status.code(), Some(2));

    let bad = dir.join("bad.tsv");
    std::fs::write(&bad, "1\ttwo\tc\n").unwrap();
    let malformed = run(&[
        "partition",
        "--input",
        bad.to_str().unwrap(),
        "--out",
        dir.join("f.json").to_str().unwrap(),
    ]);
    assert_eq!(malformed.status.code(), Some(2));

    let dup = dir.join("dup.tsv");
    std::fs::write(&dup, "1\t2\tc\n1\t2\tc\n").unwrap();
    let duplicate = run(&[
        "partition",
        "--input",
        dup.to_str().unwrap(),
        "--out",
        dir.join("f.json").to_str().unwrap(),
    ]);
    assert_eq!(duplicate.status.code(), Some(2));

    let empty = dir.join("empty.tsv");
    std::fs::write(&empty, "").unwrap();
    let empty_out = run(&[
        "partition",
        "--input",
        empty.to_str().unwrap(),
        "--out",
        dir.join("f.json").to_str().unwrap(),
    ]);
    assert_eq!(empty_out.status.code(), Some(2));
}
