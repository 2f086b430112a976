use std::path::Path;
use std::process::{Command, Output};

use stablehcm::cli::{parse_args, Command as Sub, Format, Spacing};

fn run(args: &[&str], out_dir: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_stablehcm"));
    cmd.args(args);
    match out_dir {
        Some(d) => cmd.env("STABLEHCM_OUT_DIR", d),
        None => cmd.env_remove("STABLEHCM_OUT_DIR"),
    };
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn eval_half_at_one() {
    let o = run(&["eval", "--alpha", "0.5", "--x", "1"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,G"));
    let v: f64 = lines.next().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((v - 0.219_695_644_733_861).abs() < 1e-12, "{v}");
}

#[test]
fn usage_errors_exit_one() {
    let o = run(&[], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Usage"));

    let o = run(&["eval", "--alpha", "1.2", "--x", "1"], None);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("1.2") && err.contains("(0,1)"), "{err}");
    assert_eq!(err.lines().filter(|l| l.starts_with("error kind=")).count(), 1);

    let o = run(&["eval", "--alpha", "0.5", "--x", "abc"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("abc"));

    let o = run(&["eval", "--alpha", "0.5", "--bogus"], None);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("--bogus"));
}

#[test]
fn help_exits_zero() {
    let o = run(&["--help"], None);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for sub in ["eval", "theta", "classify", "envelope", "verify", "sample"] {
        assert!(text.contains(sub), "{sub} missing from help");
    }
    let o = run(&["eval", "--help"], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("--rel-tol"));
}

#[test]
fn theta_config_parses() {
    let c = parse_args(["stablehcm", "theta", "--alpha", "0.4", "--rmin", "1e-4", "--rmax", "1e4", "--n", "200", "--format", "csv"]).unwrap();
    match c.command {
        Sub::Theta(t) => {
            assert_eq!((t.alpha, t.rmin, t.rmax, t.n), (0.4, 1e-4, 1e4, 200));
            assert_eq!(t.common.format, Some(Format::Csv));
            assert_eq!(t.common.rel_tol, 1e-10);
        }
        other => panic!("parsed as {other:?}"),
    }
    let c = parse_args(["stablehcm", "eval", "--alpha", "0.3", "--xmin", "1", "--xmax", "5", "--n", "4", "--spacing", "linear"]).unwrap();
    match c.command {
        Sub::Eval(e) => assert_eq!(e.grid.spacing, Spacing::Linear),
        other => panic!("parsed as {other:?}"),
    }
}

#[test]
fn classify_quarter_is_neither() {
    let o = run(&["classify", "--alpha", "0.25"], None);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["verdict"], "Neither");
    assert_eq!(v["schema_version"], 1);

    let o = run(&["classify", "--alpha", "0.35,0.6", "--format", "csv"], None);
    let text = stdout(&o);
    assert!(text.starts_with("alpha,verdict,margin,extrema\n"));
    assert!(text.contains("0.35,HCM,") && text.contains("0.6,AntiHCM,"));
}

#[test]
fn verify_roundtrip_passes() {
    let o = run(&["verify", "--alpha", "0.4", "--suite", "roundtrip"], None);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("roundtrip,"));
}

#[test]
fn numeric_failure_exits_two() {
    let o = run(&["eval", "--alpha", "0.3", "--x", "5", "--max-subdivisions", "1", "--rel-tol", "1e-15"], None);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).lines().any(|l| l.starts_with("error kind=numeric")));
}

#[test]
fn outputs_are_deterministic_and_atomic() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["sample", "--alpha", "0.4", "--n", "500", "--seed", "11", "--out", "a.csv"];
    assert_eq!(run(&args, Some(dir.path())).status.code(), Some(0));
    let first = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(run(&args, Some(dir.path())).status.code(), Some(0));
    assert_eq!(first, std::fs::read(dir.path().join("a.csv")).unwrap());
    assert!(first.starts_with(b"x\n"));

    // A failing run leaves no file behind.
    let o = run(&["eval", "--alpha", "0.5", "--xmin", "5", "--xmax", "1", "--out", "bad.csv"], Some(dir.path()));
    assert_eq!(o.status.code(), Some(1));
    assert!(!dir.path().join("bad.csv").exists());
    let names: Vec<_> = std::fs::read_dir(dir.path()).unwrap().map(|e| e.unwrap().file_name()).collect();
    assert_eq!(names.len(), 1, "{names:?}");
}

#[test]
fn precision_warning_outside_band() {
    let o = run(&["eval", "--alpha", "0.02", "--x", "1"], None);
    assert!(stderr(&o).contains("warning"));
}
