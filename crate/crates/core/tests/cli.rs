use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ramify::cli::{verify_suite, RunOptions, Status};

fn ramify(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ramify")).args(args).output().expect("binary runs")
}

fn config(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name).display().to_string()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn every_stock_config_runs_and_is_deterministic() {
    for name in ["quadratic_breaks.toml", "klein_four.toml", "imperfect_rsw.toml", "base_change.toml", "eisenstein.json"] {
        let path = config(name);
        let first = ramify(&["run", &path]);
        assert_eq!(first.status.code(), Some(0), "{name}: {}", stderr(&first));
        let second = ramify(&["run", &path]);
        assert_eq!(first.stdout, second.stdout, "{name} output differs between runs");
        let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
        assert_eq!(v["passed"], true, "{name}");
    }
}

#[test]
fn quadratic_breaks_golden_values() {
    let out = stdout(&ramify(&["run", &config("quadratic_breaks.toml")]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let breaks = &v["tasks"][0]["result"];
    assert_eq!(breaks["largest"]["r"], "2/1");
    assert_eq!(breaks["different"], 2);
    assert_eq!(breaks["lower"], serde_json::json!(["1/1"]));
    assert_eq!(breaks["polynomial"], "X^2 + t*X + t");
    assert!(out.ends_with("}\n"));
}

#[test]
fn eisenstein_json_config() {
    let v: serde_json::Value = serde_json::from_slice(&ramify(&["run", &config("eisenstein.json")]).stdout).unwrap();
    assert_eq!(v["tasks"][0]["result"]["largest"]["r"], "3/1");
}

#[test]
fn markdown_and_precision_flags() {
    let md = ramify(&["run", &config("klein_four.toml"), "--format", "md", "--precision", "48"]);
    assert_eq!(md.status.code(), Some(0));
    let text = stdout(&md);
    assert!(text.starts_with('#'), "{text}");
    assert!(text.contains("48"));
}

#[test]
fn herbrand_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("phi.csv");
    let out = ramify(&["run", &config("klein_four.toml"), "--emit-herbrand-csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(&csv).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("task,subject,x,phi,slope_right"));
    let rows: Vec<&str> = lines.collect();
    assert!(rows.iter().any(|r| r.ends_with(",1/2")), "{body}");
    assert!(rows.iter().any(|r| r.ends_with(",1/4")), "{body}");
}

#[test]
fn builtin_verify_passes() {
    let out = ramify(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], true);
}

#[test]
fn verify_a_config_corpus() {
    let out = ramify(&["verify", "--corpus", &config("imperfect_rsw.toml")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
}

#[test]
fn mutation_exits_one_with_reproducer() {
    let out = ramify(&["verify", "--inject-b1-sign-error"]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("check_diagrams.right_square"), "{err}");
    let repro = err.split("reproducer config:\n").nth(1).expect("reproducer printed");
    let dir = tempfile::tempdir().unwrap();
    let path = write(&dir, "repro.toml", repro);
    let again = ramify(&["verify", "--corpus", path.to_str().unwrap(), "--inject-b1-sign-error"]);
    assert_eq!(again.status.code(), Some(1), "reproducer does not reproduce");
    let clean = ramify(&["run", path.to_str().unwrap()]);
    assert_eq!(clean.status.code(), Some(0), "{}", stderr(&clean));
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("unknown_key.toml", "[[field]]\nname = \"K\"\np = 2\ncolour = 3\n", "colour"),
        ("bad_syntax.toml", "[[field]\nname = ", ""),
        ("missing_field.toml", "[[extension]]\nname = \"L\"\nfield = \"K\"\nartin_schreier = [\"t^-1\"]\n", "K"),
        ("bad_prime.toml", "[[field]]\nname = \"K\"\np = 4\n", ""),
        ("bad_series.toml", "[[field]]\nname = \"K\"\np = 2\n\n[[character]]\nname = \"c\"\nfield = \"K\"\na = \"t^-1 +\"\n", ""),
        ("bad_task.toml", "[[field]]\nname = \"K\"\np = 2\n\n[[task]]\nkind = \"breaks\"\n", ""),
        ("unknown.json", "{\"field\": [], \"extra\": 1}", "extra"),
    ];
    for (name, body, needle) in cases {
        let path = write(&dir, name, body);
        let out = ramify(&["run", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(2), "{name}: {}", stdout(&out));
        assert!(stderr(&out).contains(needle), "{name}: {}", stderr(&out));
    }
    let out = ramify(&["run", dir.path().join("absent.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn low_precision_degrades_to_errors_and_retry_recovers() {
    let mut surfaced = 0;
    for cap in 1..=8 {
        let opts = RunOptions { precision: Some(cap), retry: false, ..Default::default() };
        let out = verify_suite(None, &opts).unwrap();
        for t in &out.report.tasks {
            assert_ne!(t.status, Status::Fail, "cap {cap}: wrong answer in task {} {}", t.kind, t.subject);
            if t.status == Status::Error {
                assert_eq!(t.error_kind.as_deref(), Some("insufficient-precision"), "cap {cap}: {:?}", t.error);
                surfaced += 1;
            }
        }
    }
    assert!(surfaced > 0, "no precision errors surfaced at small caps");
    let opts = RunOptions { precision: Some(4), retry: true, ..Default::default() };
    let out = verify_suite(None, &opts).unwrap();
    assert!(out.passed, "{:?}", out.failures());
    assert!(out.report.tasks.iter().any(|t| t.retried && t.precision == 8));
}
