use std::fs;
use std::path::Path;
use std::process::Command;

use banditgv_cli::commands::{cmd_game_to, cmd_run_to, cmd_sweep_to, diagnose, EXIT_CONFIG};
use banditgv_cli::config::ExperimentConfig;
use banditgv_cli::output::{one_point_header, two_point_header, weights_header, SUMMARY_HEADER};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_banditgv"))
}

fn first_line(path: &Path) -> String {
    fs::read_to_string(path)
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string()
}

const TWO_POINT: &str = "algorithm = gv_convex
horizon = 200
seeds = 2
domain.kind = cube
domain.dim = 2
domain.half_width = 1
adversary.family = rademacher_linear
adversary.base = 0, 0
adversary.scale = 0.5
";

#[test]
fn unknown_key_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.cfg");
    fs::write(&path, format!("{TWO_POINT}adversary.sclae = 0.5\n")).unwrap();
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_CONFIG));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("adversary.sclae"), "{err}");
    assert!(err.contains("line 10"), "{err}");
}

#[test]
fn missing_config_file_is_a_config_error() {
    let out = bin()
        .arg("run")
        .arg("/nonexistent/banditgv.cfg")
        .output()
        .unwrap();
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn run_writes_documented_headers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::parse(TWO_POINT).unwrap();
    cmd_run_to(&cfg, dir.path()).unwrap();
    assert_eq!(
        first_line(&dir.path().join("rows_seed0.csv")),
        two_point_header(2)
    );
    assert_eq!(first_line(&dir.path().join("summary.csv")), SUMMARY_HEADER);
    let summary = fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert_eq!(summary.lines().count(), 3);
    let rows = fs::read_to_string(dir.path().join("rows_seed1.csv")).unwrap();
    assert_eq!(rows.lines().count(), 201);
}

#[test]
fn binary_run_matches_library_run() {
    let dir = tempfile::tempdir().unwrap();
    let via_bin = dir.path().join("bin");
    let path = dir.path().join("run.cfg");
    fs::write(
        &path,
        format!("{TWO_POINT}output.dir = {}\n", via_bin.display()),
    )
    .unwrap();
    let out = bin().arg("run").arg(&path).output().unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let via_lib = dir.path().join("lib");
    cmd_run_to(&ExperimentConfig::load(&path).unwrap(), &via_lib).unwrap();
    for name in ["rows_seed0.csv", "rows_seed1.csv", "summary.csv"] {
        assert_eq!(
            fs::read(via_bin.join(name)).unwrap(),
            fs::read(via_lib.join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn one_point_and_ensemble_headers() {
    let dir = tempfile::tempdir().unwrap();
    let one = TWO_POINT.replace("gv_convex", "one_point");
    cmd_run_to(
        &ExperimentConfig::parse(&one).unwrap(),
        &dir.path().join("one"),
    )
    .unwrap();
    assert_eq!(
        first_line(&dir.path().join("one/rows_seed0.csv")),
        one_point_header(2)
    );
    assert_eq!(one_point_header(2), "t,i,sign,w0,w1,x0,x1,v,z");

    let uni = TWO_POINT
        .replace("gv_convex", "universal")
        .replace("horizon = 200", "horizon = 64");
    cmd_run_to(
        &ExperimentConfig::parse(&uni).unwrap(),
        &dir.path().join("uni"),
    )
    .unwrap();
    let header = first_line(&dir.path().join("uni/weights_seed0.csv"));
    assert!(header.starts_with("t,dominant,p0,"), "{header}");
    let n = header.split(',').count() - 2;
    assert_eq!(header, weights_header(n));
    let rows = fs::read_to_string(dir.path().join("uni/weights_seed0.csv")).unwrap();
    for line in rows.lines().skip(1) {
        let total: f64 = line
            .split(',')
            .skip(2)
            .map(|v| v.parse::<f64>().unwrap())
            .sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}

#[test]
fn sweep_reports_a_slope() {
    let dir = tempfile::tempdir().unwrap();
    let text = TWO_POINT.replace("horizon = 200", "horizons = 64, 128, 256");
    cmd_sweep_to(&ExperimentConfig::parse(&text).unwrap(), dir.path()).unwrap();
    let sweep = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    assert_eq!(sweep.lines().count(), 4);
    let slope = fs::read_to_string(dir.path().join("slope.csv")).unwrap();
    let value: f64 = slope
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!(value.is_finite());
}

#[test]
fn game_writes_every_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let text = "horizon = 100
seeds = 2
game.matrix = 0.5, -0.5, 0.5, 0.5
game.rows = 2
game.cols = 2
";
    cmd_game_to(&ExperimentConfig::parse(text).unwrap(), dir.path()).unwrap();
    let mean = fs::read_to_string(dir.path().join("gap_mean.csv")).unwrap();
    let ts: Vec<&str> = mean
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(ts, ["1", "2", "4", "8", "16", "32", "64", "100"]);
    let gaps = fs::read_to_string(dir.path().join("gaps.csv")).unwrap();
    assert_eq!(gaps.lines().count(), 1 + 2 * ts.len());
}

#[test]
fn diagnose_matches_coupon_collector() {
    let (d, _, _) = diagnose(3, 100_000, None, 0).unwrap();
    assert!(
        (d.mean_collection - 5.5).abs() <= 0.05 * 5.5,
        "{}",
        d.mean_collection
    );
    assert!((d.mean_wait - 3.0).abs() <= 0.05 * 3.0, "{}", d.mean_wait);
    assert!((d.coupon_oracle - 5.5).abs() < 1e-12);
}

#[test]
fn diagnose_binary_writes_histogram() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "diagnose",
            "--dim",
            "4",
            "--trials",
            "20000",
            "--horizon",
            "1000",
            "--out",
        ])
        .arg(dir.path())
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(dir.path().join("diagnose.csv").exists());
    assert!(dir.path().join("rho_histogram.csv").exists());
}
