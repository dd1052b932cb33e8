use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_resolvent"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn generate(dir: &Path, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let mut full = vec!["examples"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", path.to_str().unwrap()]);
    let out = run(&full);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    path
}

struct Files {
    _dir: TempDir,
    diag: PathBuf,
    shift2: PathBuf,
    shift4: PathBuf,
    remark4: PathBuf,
    dir: PathBuf,
}

fn files() -> Files {
    let dir = TempDir::new().unwrap();
    let p = dir.path().to_path_buf();
    Files {
        diag: generate(&p, "diag.json", &["diagonal", "--re", "0,3"]),
        shift2: generate(&p, "shift2.json", &["shift", "--weights", "2,1"]),
        shift4: generate(&p, "shift4.json", &["gen", "shift", "--weights", "2,1,1,1"]),
        remark4: generate(&p, "remark4.json", &["remark42", "--n", "4"]),
        dir: p,
        _dir: dir,
    }
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_cases_and_singular_exit() {
    let f = files();
    let out = run(&["analyze", s(&f.diag), "--z", "1,0"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["case"], "linear");
    assert!((v["theta0"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-12);

    let v = json(&run(&["analyze", s(&f.shift4), "--z", "0,0"]));
    assert_eq!(v["case"], "local_min");
    assert!(v["theta0"].is_null());

    let out = run(&["analyze", s(&f.diag), "--z", "0,0"]);
    assert_eq!(code(&out), 3);
    assert_eq!(json(&out)["error"], "near_singular");

    let out = run(&["analyze", s(&f.diag), "--z", "-1,0.5"]);
    assert_eq!(code(&out), 0);
}

#[test]
fn growth_fits_and_bound_failure() {
    let f = files();
    let out = run(&["growth", s(&f.diag), "--z", "1,0"]);
    assert_eq!(code(&out), 0);
    let d = json(&out)["fitted_delta"].as_f64().unwrap();
    assert!((d - 1.0).abs() < 0.05, "{d}");

    let csv = f.dir.join("seg.csv");
    let out = run(&["growth", s(&f.shift2), "--z", "0,0", "--csv", s(&csv)]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert!((v["fitted_delta"].as_f64().unwrap() - 2.0).abs() < 0.05);
    assert_eq!(v["verdict"]["holds"], true);
    assert!(std::fs::read_to_string(&csv).unwrap().starts_with("t,re_zeta,im_zeta,norm\n"));

    assert_eq!(code(&run(&["growth", s(&f.shift2), "--z", "0,0", "--expect", "linear"])), 4);
    assert_eq!(code(&run(&["growth", s(&f.diag), "--z", "1,0", "--samples", "3"])), 2);
    assert_eq!(code(&run(&["growth", s(&f.diag), "--z", "1,0", "--a0", "2"])), 2);
}

#[test]
fn path_success_domain_error_and_output_file() {
    let f = files();
    let target = f.dir.join("path.json");
    let out = run(&["path", s(&f.diag), "--epsilon", "0.75", "--z", "0.5,0", "-o", s(&target)]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(v["eigenvalue"][0].as_f64(), Some(0.0));
    assert_eq!(v["certificate"]["valid"], true);

    // f(1) = 1 < 1/0.1: the query point is outside the pseudospectrum.
    assert_eq!(code(&run(&["path", s(&f.diag), "--epsilon", "0.1", "--z", "1,0"])), 2);

    // A one-step budget cannot reach the eigenvalue from far away on a Jordan block.
    let j = generate(&f.dir, "jordan.json", &["jordan", "--n", "6"]);
    let out = run(&["path", s(&j), "--epsilon", "0.5", "--z", "0.9,0.4", "--max-steps", "1"]);
    if code(&out) == 5 {
        let v = json(&out);
        assert_eq!(v["error"], "search_failure");
        assert!(!v["partial_path"]["vertices"].as_array().unwrap().is_empty());
    } else {
        assert_eq!(code(&out), 0);
    }
}

#[test]
fn grid_csv_and_metadata() {
    let f = files();
    let csv = f.dir.join("grid.csv");
    let out = run(&["grid", s(&f.diag), "--bounds=-1,4,-1.5,1.5", "--nx", "50", "--ny", "30", "--epsilon", "0.5", "-o", s(&csv)]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&csv).unwrap();
    assert!(text.starts_with("re,im,sigma_min\n"));
    assert_eq!(text.lines().count(), 1 + 50 * 30);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(f.dir.join("grid.csv.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["component_count"], 2);
    assert_eq!(meta["nx"], 50);

    let meta_path = f.dir.join("r4.meta.json");
    let out = run(&[
        "grid",
        s(&f.remark4),
        "--bounds=-0.5,5.5,-2.5,2.5",
        "--nx",
        "120",
        "--ny",
        "100",
        "--epsilon",
        "1.08",
        "-o",
        s(&f.dir.join("r4.csv")),
        "--meta",
        s(&meta_path),
    ]);
    assert_eq!(code(&out), 0);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(meta_path).unwrap()).unwrap();
    assert_eq!(meta["complement_count"], 3);

    assert_eq!(code(&run(&["grid", s(&f.diag), "--bounds", "1,-1,0,1", "--epsilon", "0.5"])), 2);
    assert_eq!(code(&run(&["grid", s(&f.diag), "--bounds", "0,1,0", "--epsilon", "0.5"])), 2);
}

#[test]
fn examples_files_and_bad_params() {
    let f = files();
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&f.remark4).unwrap()).unwrap();
    assert_eq!(v["n"], 4);
    assert_eq!(v["entries"].as_array().unwrap().len(), 16);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&f.shift4).unwrap()).unwrap();
    assert_eq!(v["n"], 4);

    assert_eq!(code(&run(&["examples", "shift", "--weights", "2,0"])), 2);
    assert_eq!(code(&run(&["examples", "remark42", "--n", "1"])), 2);

    let r = generate(&f.dir, "rnd.json", &["random", "--n", "3", "--seed", "9"]);
    let meta: Value = serde_json::from_str(&std::fs::read_to_string(f.dir.join("rnd.json.meta.json")).unwrap()).unwrap();
    assert_eq!(meta["seed"], 9);
    let again = generate(&f.dir, "rnd2.json", &["random", "--n", "3", "--seed", "9"]);
    assert_eq!(std::fs::read(r).unwrap(), std::fs::read(again).unwrap());
}

#[test]
fn localmin_and_taylor() {
    let f = files();
    let v = json(&run(&["localmin", s(&f.shift4), "--z", "0,0"]));
    assert_eq!(v["is_local_min"], true);
    let v = json(&run(&["localmin", s(&f.diag), "--z", "1,0"]));
    assert_eq!(v["is_local_min"], false);

    let v = json(&run(&["taylor", s(&f.diag), "--z", "1,0"]));
    let order = v["fitted_order"].as_f64().unwrap();
    assert!((order - 3.0).abs() < 0.3, "{order}");
}

#[test]
fn config_file_and_bad_input() {
    let f = files();
    let cfg = f.dir.join("cfg.json");
    std::fs::write(&cfg, r#"{"tol_zero": 1e-7}"#).unwrap();
    assert_eq!(code(&run(&["--config", s(&cfg), "analyze", s(&f.diag), "--z", "1,0"])), 0);

    std::fs::write(&cfg, r#"{"tol_zero": -1}"#).unwrap();
    assert_eq!(code(&run(&["analyze", s(&f.diag), "--z", "1,0", "--config", s(&cfg)])), 2);
    std::fs::write(&cfg, r#"{"bogus": 1}"#).unwrap();
    assert_eq!(code(&run(&["analyze", s(&f.diag), "--z", "1,0", "--config", s(&cfg)])), 2);

    let bad = f.dir.join("bad.json");
    std::fs::write(&bad, r#"{"n": 2, "entries": [[1, 0]]}"#).unwrap();
    assert_eq!(code(&run(&["analyze", s(&bad), "--z", "1,0"])), 2);
    assert_eq!(code(&run(&["analyze", s(&f.dir.join("missing.json")), "--z", "1,0"])), 2);
    assert_eq!(code(&run(&["analyze", s(&f.diag), "--z", "1;0"])), 2);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let f = files();
    for args in [
        vec!["analyze", s(&f.shift2), "--z", "0.1,-0.2"],
        vec!["path", s(&f.remark4), "--epsilon", "1.08", "--z", "2.5,0"],
        vec!["growth", s(&f.diag), "--z", "1,0"],
    ] {
        let a = run(&args);
        let b = run(&args);
        assert_eq!(code(&a), 0, "{}", String::from_utf8_lossy(&a.stderr));
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn help_lists_every_command() {
    let out = run(&["--help"]);
    let text = String::from_utf8(out.stdout).unwrap();
    for cmd in ["analyze", "growth", "path", "grid", "examples", "localmin", "taylor", "--config", "--output"] {
        assert!(text.contains(cmd), "missing {cmd}");
    }
}
