use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn cohcalc(dir: &TempDir, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cohcalc"))
        .current_dir(dir.path())
        .env_remove("COHCALC_DEGREE")
        .env_remove("COHCALC_FIELD")
        .env_remove("COHCALC_OUT")
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn report_path(o: &Output) -> PathBuf {
    let line = stdout(o)
        .lines()
        .find_map(|l| l.strip_prefix("report: ").map(str::to_string))
        .expect("report line");
    PathBuf::from(line)
}

fn read_report(dir: &TempDir, o: &Output) -> Value {
    let text = fs::read_to_string(dir.path().join(report_path(o))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn setup() -> TempDir {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "s2.json", r#"{"name": "S^2", "spheres": [2]}"#);
    write(dir.path(), "s3.json", r#"{"name": "S^3", "spheres": [3]}"#);
    write(dir.path(), "w.json", r#"{"name": "W", "spheres": [2, 3]}"#);
    dir
}

#[test]
fn verify_two_spheres_passes() {
    let dir = setup();
    let o = cohcalc(&dir, &["verify", "s2.json", "s2.json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r = read_report(&dir, &o);
    assert_eq!(r["pass"], Value::Bool(true));
    assert_eq!(r["result"].as_array().unwrap().len(), 7);
    assert!(report_path(&o).starts_with("cohcalc-reports"));
}

#[test]
fn verify_single_identity() {
    let dir = setup();
    let o = cohcalc(&dir, &["verify", "w.json", "s3.json", "--identity", "join"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().next(), Some("PASS join"));
}

#[test]
fn malformed_json_exits_2() {
    let dir = setup();
    write(dir.path(), "bad.json", "{\"name\": ");
    let o = cohcalc(&dir, &["verify", "bad.json", "s2.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn degree_one_sphere_exits_2() {
    let dir = setup();
    write(dir.path(), "s1.json", r#"{"name": "S^1", "spheres": [1]}"#);
    let o = cohcalc(&dir, &["verify", "s1.json", "s2.json"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("not simply connected"));
}

#[test]
fn missing_file_exits_2() {
    let dir = setup();
    let o = cohcalc(&dir, &["verify", "nope.json", "s2.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bad_flags_exit_2() {
    let dir = setup();
    assert_eq!(
        cohcalc(&dir, &["--field", "10", "verify", "s2.json", "s2.json"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        cohcalc(&dir, &["--degree", "3", "verify", "s2.json", "s2.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let dir = setup();
    let a = cohcalc(
        &dir,
        &["--out", "a", "peel", "s2.json", "s3.json", "--k", "3"],
    );
    let b = cohcalc(
        &dir,
        &["--out", "b", "peel", "s2.json", "s3.json", "--k", "3"],
    );
    let (pa, pb) = (report_path(&a), report_path(&b));
    assert_eq!(pa.file_name(), pb.file_name());
    let ta = fs::read(dir.path().join(pa)).unwrap();
    let tb = fs::read(dir.path().join(pb)).unwrap();
    assert_eq!(ta, tb);
}

#[test]
fn report_name_depends_on_parameters() {
    let dir = setup();
    let a = cohcalc(&dir, &["--degree", "12", "verify", "s2.json", "s2.json"]);
    let b = cohcalc(&dir, &["--degree", "16", "verify", "s2.json", "s2.json"]);
    assert_ne!(report_path(&a), report_path(&b));
}

#[test]
fn peel_to_four_conserves() {
    let dir = setup();
    let o = cohcalc(
        &dir,
        &[
            "peel",
            "s2.json",
            "s2.json",
            "--k",
            "4",
            "--basis-below",
            "3",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let r = read_report(&dir, &o);
    let steps = r["result"]["steps"].as_array().unwrap();
    assert_eq!(steps.len(), 4);
    assert!(steps.iter().all(|s| s["conservation"] == Value::Bool(true)));
    assert_eq!(r["result"]["basis_below"].as_array().unwrap().len(), 3);
}

#[test]
fn oracle_cap_eight_passes() {
    let dir = setup();
    let o = cohcalc(&dir, &["oracle", "s2.json", "s2.json", "--cap", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let r = read_report(&dir, &o);
    assert_eq!(r["result"]["degrees"].as_array().unwrap().len(), 8);
    assert_eq!(r["result"]["field"], "F_101");
}

#[test]
fn oracle_over_rationals() {
    let dir = setup();
    let o = cohcalc(
        &dir,
        &["--field", "Q", "oracle", "w.json", "s2.json", "--cap", "5"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read_report(&dir, &o)["result"]["field"], "Q");
}

#[test]
fn oracle_cap_beyond_degree_exits_2() {
    let dir = setup();
    let o = cohcalc(
        &dir,
        &[
            "--degree", "6", "oracle", "s2.json", "s2.json", "--cap", "7",
        ],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn telescope_split_and_precondition() {
    let dir = setup();
    write(
        dir.path(),
        "e.json",
        r#"{"2": [[-1, 0, 0], [0, 0, 0], [0, 0, 0]], "3": [[2, 1], [2, 1]]}"#,
    );
    // degree 3 block is 2x2 with E² = 3E over F_101: not -1
    let o = cohcalc(&dir, &["telescope", "split", "e.json"]);
    assert_eq!(o.status.code(), Some(2));

    write(
        dir.path(),
        "p.json",
        r#"{"2": [[-1, 0, 0], [0, 0, 0], [0, 0, 0]], "3": [["-1/2", "1/2"], ["1/2", "-1/2"]]}"#,
    );
    let o = cohcalc(&dir, &["--field", "Q", "telescope", "split", "p.json"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let r = read_report(&dir, &o);
    assert_eq!(r["result"]["image_series"], serde_json::json!([0, 0, 1, 1]));
    assert_eq!(
        r["result"]["kernel_series"],
        serde_json::json!([0, 0, 2, 1])
    );
}

#[test]
fn telescope_swap_reports_mismatch_as_error() {
    let dir = setup();
    write(dir.path(), "a.json", r#"{"2": [[0, 1], [0, 0]]}"#);
    write(dir.path(), "b.json", r#"{"2": [[1, 0], [0, 0]]}"#);
    write(dir.path(), "c.json", r#"{"2": [[1]]}"#);
    assert_eq!(
        cohcalc(&dir, &["telescope", "swap", "a.json", "b.json"])
            .status
            .code(),
        Some(0)
    );
    assert_eq!(
        cohcalc(&dir, &["telescope", "swap", "a.json", "c.json"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn telescope_circle_of_spheres() {
    let dir = setup();
    let o = cohcalc(
        &dir,
        &["telescope", "circle", "s2.json", "s2.json", "--cap", "6"],
    );
    assert_eq!(o.status.code(), Some(0));
    let r = read_report(&dir, &o);
    assert_eq!(
        r["result"]["telescope"],
        serde_json::json!([0, 0, 0, 1, 0, 0, 0])
    );

    write(
        dir.path(),
        "m.json",
        r#"{"name": "M", "reduced_dims": {"2": 1, "4": 1}}"#,
    );
    let o = cohcalc(&dir, &["telescope", "circle", "m.json", "s2.json"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn env_overrides_defaults() {
    let dir = setup();
    let o = Command::new(env!("CARGO_BIN_EXE_cohcalc"))
        .current_dir(dir.path())
        .env("COHCALC_DEGREE", "10")
        .env("COHCALC_OUT", "env-out")
        .args(["verify", "s2.json", "s3.json"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(report_path(&o).starts_with("env-out"));
    let r = read_report(&dir, &o);
    assert_eq!(
        r["params"].as_str().unwrap().split(';').next(),
        Some("degree=10")
    );
}
