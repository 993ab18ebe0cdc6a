use std::path::Path;
use std::process::{Command, Output};

fn divclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_divclass")).args(args).output().expect("binary runs")
}

fn gen(dir: &Path, name: &str, extra: &[&str]) -> String {
    let path = dir.join(name).to_str().unwrap().to_string();
    let mut args = vec!["gen", "--out", &path];
    args.extend_from_slice(extra);
    let out = divclass(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn gen_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let flags = ["--genus", "2", "--prime", "1009", "--seed", "7"];
    let a = gen(dir.path(), "a.json", &flags);
    let b = gen(dir.path(), "b.json", &flags);
    assert_eq!(std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    let c = gen(dir.path(), "c.json", &["--genus", "2", "--prime", "1009", "--seed", "8"]);
    assert_ne!(std::fs::read(dir.path().join("a.json")).unwrap(), std::fs::read(c).unwrap());
}

#[test]
fn gen_errors_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("x.json");
    let out = divclass(&["gen", "--prime", "4", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("not prime"));
    let out = divclass(&["gen", "--genus", "2", "--prime", "5", "--rep", "b0", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("affine rational points"));
    assert!(!out_path.exists());
}

#[test]
fn verify_fixture_and_report_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "fixture.json", &["--fixture"]);
    let out = divclass(&["verify", "--bundle", &path, "--suite", "fixture"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<serde_json::Value> = stdout.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let cases: Vec<&str> = lines.iter().map(|l| l["case"].as_str().unwrap()).collect();
    assert!(cases.contains(&"T_2*T_3=U_5") && cases.contains(&"T_3*T_3=U_1+U_6"));
    for l in &lines {
        assert_eq!(l["suite"], "fixture");
        assert_eq!(l["pass"], true);
        assert!(l.get("seed").is_some() && l.get("details").is_some());
    }
}

#[test]
fn verify_failure_exits_nonzero() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "g2.json", &["--genus", "2"]);
    let out = divclass(&["verify", "--bundle", &path, "--suite", "fixture"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL"));
    let out = divclass(&["verify", "--bundle", &path, "--suite", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
    // b0 requested but the bundle has no point data
    let out = divclass(&["verify", "--bundle", &path, "--suite", "oracle", "--rep", "b0"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_suites_on_small_curve() {
    let dir = tempfile::tempdir().unwrap();
    let path = gen(dir.path(), "g2.json", &["--genus", "2", "--rep", "b0", "--seed", "3"]);
    for suite in ["oracle", "axioms", "membership", "igs-stats"] {
        for rep in ["a", "b0"] {
            let out = divclass(&[
                "verify", "--bundle", &path, "--suite", suite, "--trials", "10", "--seed", "5", "--rep", rep,
            ]);
            assert!(out.status.success(), "{suite} {rep}: {}", String::from_utf8_lossy(&out.stderr));
        }
    }
    // replay: same seed, same report
    let run = || divclass(&["verify", "--bundle", &path, "--suite", "oracle", "--trials", "5", "--seed", "9"]).stdout;
    assert_eq!(run(), run());
}

#[test]
fn scale_single_genus_has_no_slope() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("s.csv");
    let out =
        divclass(&["scale", "--genus-list", "2", "--op", "flip", "--trials", "3", "--out-csv", csv.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("slope: n/a"));
    let text = std::fs::read_to_string(csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("genus,op,median_ns,trials"));
    assert!(lines.next().unwrap().starts_with("2,flip,"));
}

#[test]
fn scale_work_is_reproducible() {
    let run = || {
        let out = divclass(&["scale", "--genus-list", "1,2", "--op", "addflip-small", "--trials", "3", "--seed", "4"]);
        assert!(out.status.success());
        let err = String::from_utf8(out.stderr).unwrap();
        err.lines()
            .filter(|l| l.contains("deflation attempts"))
            .map(|l| l.split("deflation").nth(1).unwrap().to_string())
            .collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}
