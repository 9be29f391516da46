use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use regrates::verify::SuiteReport;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_regrates"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_problem(dir: &tempfile::TempDir, name: &str, json: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, json).unwrap();
    p.to_str().unwrap().to_string()
}

fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let i = header.iter().position(|h| *h == name).unwrap();
    lines.map(|l| l.split(',').nth(i).unwrap().to_string()).collect()
}

#[test]
fn diag_norms_golden() {
    let o = run(&["norms", "--problem", data("diag_norms.json").to_str().unwrap()]);
    assert!(o.status.success());
    let golden = std::fs::read_to_string(data("diag_norms.csv")).unwrap();
    assert_eq!(stdout(&o), golden);

    // independent sums: sum n^-3 and sum n^-1 over n <= 1000
    let norm: f64 = (1..=1000).rev().map(|n| (n as f64).powi(-3)).sum::<f64>().sqrt();
    let h1: f64 = (1..=1000).rev().map(|n| 1.0 / n as f64).sum::<f64>().sqrt();
    let got: f64 = column(&golden, "norm")[0].parse().unwrap();
    assert!((got - norm).abs() < 1e-14);
    let got: f64 = column(&golden, "hilbert_gamma")[0].parse().unwrap();
    assert!((got - h1).abs() < 1e-14);
}

#[test]
fn dirac_norms_rows() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_problem(
        &dir,
        "d.json",
        r#"{"version":1,"example":{"kind":"dirac","lambda0":1.0}}"#,
    );
    let o = run(&["norms", "--problem", &p, "--nu", "0,0.25,0.5"]);
    assert!(o.status.success());
    let out = stdout(&o);
    // nu = 0 row equals the norm column
    assert_eq!(column(&out, "interp")[0], column(&out, "norm")[0]);
    assert_eq!(column(&out, "triple")[0], column(&out, "norm")[0]);
    let interp: Vec<f64> = column(&out, "interp").iter().map(|s| s.parse().unwrap()).collect();
    for (theta, v) in [(0.25f64, interp[1]), (0.5, interp[2])] {
        let n = (theta.powf(theta) * (1.0 - theta).powf(1.0 - theta)).powf(-0.5);
        assert!((v - 1.0 / n).abs() < 1e-12, "{v}");
    }
    assert!(column(&out, "sandwich_pass").iter().all(|s| s == "true"));
}

#[test]
fn empty_nu_range_is_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_problem(
        &dir,
        "d.json",
        r#"{"version":1,"example":{"kind":"dirac","lambda0":1.0}}"#,
    );
    for cmd in ["rates", "norms"] {
        let o = run(&[cmd, "--problem", &p, "--nu", "0:1:0"]);
        assert!(o.status.success());
        assert_eq!(stdout(&o).lines().count(), 1, "{cmd}");
    }
}

#[test]
fn rate_bounds_pass_on_builtins() {
    let dir = tempfile::tempdir().unwrap();
    let problems = [
        r#"{"version":1,"example":{"kind":"dirac","lambda0":0.3},"method":{"nu":{"start":0.1,"stop":1.0,"steps":4}}}"#,
        r#"{"version":1,"example":{"kind":"diag_example","n":2000},"method":{"nu":[0.25,0.5,1.0],"k":2}}"#,
        r#"{"version":1,"example":{"kind":"diag_example","n":2000},"method":{"filter":"landweber","nu":[0.5,1.0]}}"#,
        r#"{"version":1,"example":{"kind":"power_law","nu":0.5,"atoms":500},"method":{"filter":"cutoff","nu":[0.25,0.5]}}"#,
        r#"{"version":1,"example":{"kind":"bvp_sign","n":512},"method":{"nu":[0.1,0.25]}}"#,
    ];
    for (i, json) in problems.iter().enumerate() {
        let p = write_problem(&dir, &format!("p{i}.json"), json);
        let o = run(&["rates", "--problem", &p]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let pass = column(&stdout(&o), "pass");
        assert!(!pass.is_empty());
        assert!(pass.iter().all(|s| s == "true"), "{json}\n{}", stdout(&o));
    }
}

#[test]
fn noisy_sweep_rows_and_footer() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_problem(
        &dir,
        "l.json",
        r#"{"version":1,"example":{"kind":"diag_example","n":20000},
            "noise":{"deltas":[0,1e-1,1e-2,1e-3,1e-4]},
            "method":{"filter":"landweber","nu":[1.0],"tau":1.5}}"#,
    );
    let o = run(&["noisy", "--problem", &p]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let out = stdout(&o);
    assert_eq!(column(&out, "error")[0], "0.0");
    let fit = out.lines().find(|l| l.starts_with("# fit,error,")).unwrap();
    let slope: f64 = fit.split(',').nth(2).unwrap().parse().unwrap();
    assert!((slope - 2.0 / 3.0).abs() < 0.1, "{slope}");
}

#[test]
fn seeded_runs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_problem(
        &dir,
        "r.json",
        r#"{"version":1,"example":{"kind":"diag_example","n":5000},
            "noise":{"deltas":[1e-1,1e-2,1e-3],"strategy":"random","seed":3},
            "method":{"rule":"optimal"}}"#,
    );
    let single = bin()
        .args(["noisy", "--problem", &p, "--seed", "11", "--format", "json"])
        .env("REGRATES_THREADS", "1")
        .output()
        .unwrap();
    let multi = bin()
        .args(["noisy", "--problem", &p, "--seed", "11", "--format", "json"])
        .env("REGRATES_THREADS", "3")
        .output()
        .unwrap();
    assert!(single.status.success());
    assert_eq!(single.stdout, multi.stdout);
    let other = run(&["noisy", "--problem", &p, "--seed", "12", "--format", "json"]);
    assert_ne!(single.stdout, other.stdout);
}

#[test]
fn verify_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["verify", "--suite", "constants", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report: SuiteReport = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert!(report.pass);
    assert!(report.checks.iter().any(|c| c.id.contains("c2")));
    let csv = run(&["verify", "--suite", "constants", "--format", "csv"]);
    assert_eq!(stdout(&csv).lines().count(), report.checks.len() + 1);
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_problem(&dir, "bad.json", r#"{"version":1,"atoms":[[1.0,1.0],[-2.0,1.0]]}"#);
    let o = run(&["norms", "--problem", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("atoms[1]"));

    let typo = write_problem(
        &dir,
        "typo.json",
        "{\"version\":1,\n \"example\":{\"kind\":\"dirac\",\"lambda0\":1},\n \"methd\":{}}",
    );
    let o = run(&["rates", "--problem", &typo]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 3"));

    let ok = write_problem(
        &dir,
        "ok.json",
        r#"{"version":1,"example":{"kind":"dirac","lambda0":1.0}}"#,
    );
    let o = run(&["rates", "--problem", &ok, "--gamma", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["noisy", "--problem", &ok]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["verify", "--suite", "everything"]);
    assert_eq!(o.status.code(), Some(2));
}
