use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_conway-ramond"));
    c.env_remove("CONWAY_RAMOND_FRAMES").env("NO_COLOR", "1");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn frame_parse_reports_invariants() {
    let o = run(&["frame", "parse", "1^8 2^8"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.contains("trace (k1):     8"), "{s}");
    assert!(
        s.contains("(0, 0, 0, 0, 0, 0, 0, 0, 1/2, 1/2, 1/2, 1/2)"),
        "{s}"
    );
    assert!(s.contains("balanced:       true (N = 2)"), "{s}");
}

#[test]
fn frame_parse_rejects_bad_degree() {
    let o = run(&["frame", "parse", "1^8 2^7"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("1^8 2^7"));
}

#[test]
fn missing_frames_file() {
    let o = run(&["classify", "--frames", "definitely/missing.csv"]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("file not found"), "{}", stderr(&o));
}

#[test]
fn bad_row_is_located() {
    let dir = std::env::temp_dir().join(format!("cr-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.csv");
    std::fs::write(
        &path,
        "co0_class,co1_class,frame_shape\n1A,1A,1^24\n2A,1A,2^^3\n",
    )
    .unwrap();
    let o = run(&["classify", "--frames", path.to_str().unwrap()]);
    assert!(!o.status.success());
    let e = stderr(&o);
    assert!(e.contains("bad.csv") && e.contains("row 3"), "{e}");
}

#[test]
fn frames_from_environment() {
    let dir = std::env::temp_dir().join(format!("cr-cli-env-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("one.csv");
    std::fs::write(&path, "co0_class,co1_class,frame_shape\n1A,1A,1^24\n").unwrap();
    let o = bin()
        .env("CONWAY_RAMOND_FRAMES", &path)
        .args(["classify", "--format", "csv", "-T", "2"])
        .output()
        .unwrap();
    assert!(o.status.success());
    let s = stdout(&o);
    assert_eq!(s.lines().filter(|l| !l.starts_with('#')).count(), 2, "{s}");
    assert!(s.contains("# 1 conspiratorial, 0 susy-breaking, 0 nonconspiratorial"));
}

#[test]
fn class_filter_is_byte_identical_row() {
    for format in ["csv", "md"] {
        let full = stdout(&run(&["classify", "--format", format]));
        let one = run(&["classify", "--format", format, "--class", "9B"]);
        assert!(one.status.success());
        let one = stdout(&one);
        let row = one.lines().last().unwrap();
        assert!(full.lines().any(|l| l == row), "{format}: {row}");
        let skip = if format == "csv" { 1 } else { 2 };
        assert_eq!(
            one.lines().take(skip).collect::<Vec<_>>(),
            full.lines().take(skip).collect::<Vec<_>>()
        );
    }
}

#[test]
fn unknown_class_fails() {
    let o = run(&["classify", "--class", "99Z"]);
    assert!(!o.status.success());
}

#[test]
fn markdown_summary_line() {
    let s = stdout(&run(&["classify"]));
    assert!(
        s.contains("55 conspiratorial, 39 susy-breaking, 7 nonconspiratorial (101 Co1 classes)")
    );
    assert!(!s.contains('\x1b'), "colour leaked into a pipe");
}

#[test]
fn truncation_must_be_exact_and_positive() {
    assert!(!run(&["classify", "-T", "0.5"]).status.success());
    assert!(!run(&["classify", "-T", "1/2"]).status.success());
}

#[test]
fn theta_prints_series() {
    let z = "0,0,0,0,0,0,0,0,0,0,0,0";
    let o = run(&[
        "theta", "--lambda", z, "--sign", "-", "--coset", "z12", "-T", "1",
    ]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.lines().any(|l| l == "1/2 -24"), "{s}");
    let o = run(&["theta", "--lambda", z, "--coset", "d12plus", "-T", "2"]);
    assert!(stdout(&o).lines().any(|l| l == "3/2 2048"));
    assert!(!run(&["theta", "--lambda", "0,0", "-T", "1"])
        .status
        .success());
}

#[test]
fn version_and_usage() {
    let o = run(&["version"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("conway-ramond "));
    let o = run(&[]);
    assert!(!o.status.success());
    assert!(stderr(&o).contains("Usage"));
}

#[test]
fn selfcheck_passes() {
    let o = run(&["selfcheck"]);
    assert!(o.status.success(), "{}", stdout(&o));
    assert_eq!(
        stdout(&o).lines().filter(|l| l.starts_with("PASS")).count(),
        4
    );
}
