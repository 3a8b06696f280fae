use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use clifft::io::{load_field_csv, parse_spec};
use clifft_core::field::sample;
use clifft_core::grid::Grid;
use tempfile::TempDir;

fn clifft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_clifft")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const GAUSSIAN: &str = r#"{"m":2,"kind":"gaussian","a":0.5}"#;

fn value_after(text: &str, key: &str) -> f64 {
    text.lines().find_map(|l| l.strip_prefix(key)).unwrap().trim().parse().unwrap()
}

#[test]
fn transform_writes_csv_and_plancherel_ratio() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "gaussian.json", GAUSSIAN);
    let out = dir.path().join("out.csv");
    let o = clifft(&["transform", "--m", "2", "--sign", "plus", "--spec", s(&spec), "--n", "256", "--radius", "8", "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!((value_after(&stdout(&o), "plancherel_ratio") - 1.0).abs() <= 1e-5);
    // The Gaussian e^{-|x|^2/2} is its own transform.
    let grid = Grid::cartesian(2, 256, 8.0).unwrap();
    let ff = load_field_csv(&out, &grid).unwrap();
    let f = sample(&parse_spec(GAUSSIAN).unwrap(), &grid).unwrap();
    assert!(ff.sub(&f).unwrap().sup_norm() <= 1e-6);
}

#[test]
fn transform_validation_errors() {
    let dir = TempDir::new().unwrap();
    let missing = dir.path().join("absent.json");
    let o = clifft(&["transform", "--m", "2", "--spec", s(&missing)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("spec not found"));

    let spec = write(&dir, "g.json", GAUSSIAN);
    let o = clifft(&["transform", "--m", "3", "--spec", s(&spec)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("m must be even"));

    let bad = write(&dir, "bad.json", r#"{"m":2,"kind":"gaussian"}"#);
    assert_eq!(clifft(&["transform", "--spec", s(&bad)]).status.code(), Some(2));
}

#[test]
fn transform_of_a_field_csv() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "p.json", r#"{"m":2,"kind":"poly_gaussian","a":0.5,"poly":[{"coeff":{"blade":"","re":1,"im":0},"monomial":[1,0]}]}"#);
    let once = dir.path().join("once.csv");
    let twice = dir.path().join("twice.csv");
    let grid_args = ["--n", "64", "--radius", "8"];
    let o = clifft(&[&["transform", "--sign", "plus", "--spec", s(&spec), "--out", s(&once)], &grid_args[..]].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    let o = clifft(&[&["transform", "--sign", "plus", "--field", s(&once), "--out", s(&twice)], &grid_args[..]].concat());
    assert!(o.status.success(), "{}", stderr(&o));
    // F_+ is an involution.
    let grid = Grid::cartesian(2, 64, 8.0).unwrap();
    let back = load_field_csv(&twice, &grid).unwrap();
    let f = sample(&parse_spec(&std::fs::read_to_string(&spec).unwrap()).unwrap(), &grid).unwrap();
    assert!(back.sub(&f).unwrap().sup_norm() <= 1e-4 * f.sup_norm());
}

#[test]
fn transform_on_polar_output_grid() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "g.json", GAUSSIAN);
    let out = dir.path().join("polar.csv");
    let o = clifft(&["transform", "--spec", s(&spec), "--n", "64", "--n-r", "16", "--n-theta", "32", "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    assert!(text.starts_with("x1,x2,re_0,im_0"));
}

#[test]
fn kernel_examples() {
    let o = clifft(&["kernel", "--x", "1,0", "--y", "0,0", "--sign", "minus"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().next(), Some("1+0i"));
    let o = clifft(&["kernel", "--x", "0,0", "--y", "2,1"]);
    assert_eq!(stdout(&o).lines().next(), Some("1+0i"));
    assert_eq!(clifft(&["kernel", "--x", "1,,2", "--y", "0,0"]).status.code(), Some(2));
    assert_eq!(clifft(&["kernel", "--x", "1,0,0", "--y", "0,0,1"]).status.code(), Some(2));

    let o = clifft(&["kernel", "--x", "-1.5,2", "--y", "0.5,-3", "--oracle"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(value_after(&stdout(&o), "oracle_diff") <= 1e-8);
}

#[test]
fn uncertainty_reports() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "gaussian.json", GAUSSIAN);
    let verdict = |args: &[&str]| {
        let o = clifft(args);
        assert!(o.status.success(), "{}", stderr(&o));
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        v
    };
    let six = verdict(&["uncertainty", "beurling", "--spec", s(&spec), "--N", "6", "--radii", "4,6,8"]);
    assert_eq!(six["verdict"], "converged");
    assert_eq!(six["functional"], "beurling");
    assert_eq!(six["N"], 6);
    assert_eq!(six["values"].as_array().unwrap().len(), 3);
    assert!((six["fit"]["a"].as_f64().unwrap() - 0.5).abs() < 1e-6);
    assert_eq!(six["fit"]["degree"], 0);
    let zero = verdict(&["uncertainty", "beurling", "--spec", s(&spec), "--N", "0", "--radii", "4,6,8"]);
    assert_eq!(zero["verdict"], "diverging");
    let hardy = verdict(&["uncertainty", "hardy", "--spec", s(&spec), "--N", "0"]);
    assert!((hardy["estimates"]["ab"].as_f64().unwrap() - 0.25).abs() < 0.0075);
    let cp = verdict(&["uncertainty", "cowling-price", "--spec", s(&spec), "--alpha", "1", "--N", "4"]);
    assert_eq!(cp["verdict"], "diverging");

    let o = clifft(&["uncertainty", "cowling-price", "--spec", s(&spec), "--p", "2", "--q", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("conjugate"));
    assert_eq!(clifft(&["uncertainty", "beurling", "--spec", s(&spec), "--radii", "6,4"]).status.code(), Some(2));

    let path = dir.path().join("report.json");
    let o = clifft(&["uncertainty", "gelfand-shilov", "--spec", s(&spec), "--out", s(&path)]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["expected_a"], 0.5);
}

#[test]
fn identical_runs_are_byte_identical() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "gaussian.json", GAUSSIAN);
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for out in [&a, &b] {
        assert!(clifft(&["transform", "--spec", s(&spec), "--n", "64", "--out", s(out)]).status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let r1 = clifft(&["uncertainty", "beurling", "--spec", s(&spec), "--n", "128"]);
    let r2 = clifft(&["uncertainty", "beurling", "--spec", s(&spec), "--n", "128"]);
    assert_eq!(r1.stdout, r2.stdout);
}

#[test]
fn worker_count_does_not_change_results() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "gaussian.json", GAUSSIAN);
    let run = |threads: &str, out: &Path| {
        Command::new(env!("CARGO_BIN_EXE_clifft"))
            .env("CLIFFT_THREADS", threads)
            .args(["translate", "--spec", s(&spec), "--y", "1,-0.5", "--n", "32", "--kernel", "--out", s(out)])
            .output()
            .unwrap()
    };
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    assert!(run("1", &a).status.success());
    assert!(run("3", &b).status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(run("zero", &a).status.code(), Some(2));
}

#[test]
fn translate_and_convolve() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "gaussian.json", GAUSSIAN);
    let narrow = write(&dir, "narrow.json", r#"{"m":2,"kind":"gaussian","a":1}"#);
    let o = clifft(&["translate", "--spec", s(&spec), "--y", "1.5,-1", "--n", "128"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(value_after(&stdout(&o), "sup_error_vs_exact") <= 1e-8);
    assert_eq!(clifft(&["translate", "--spec", s(&spec), "--y", "1,0", "--kernel"]).status.code(), Some(2));

    let out = dir.path().join("conv.csv");
    let o = clifft(&["convolve", "--f", s(&spec), "--g", s(&narrow), "--n", "128", "--check", "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(value_after(&text, "theorem_sup") <= 1e-4);
    assert!(value_after(&text, "commutativity_sup") <= 1e-4);
    // e^{-|x|^2/2} * e^{-|x|^2} = e^{-|x|^2/3} / 3 at the origin.
    assert!((value_after(&text, "sup") - 1.0 / 3.0).abs() < 1e-3);
    assert!(out.exists());
}

#[test]
fn angular_modes_match_oracle() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "p.json", r#"{"m":2,"kind":"poly_gaussian","a":0.5,"poly":[{"coeff":{"blade":"1","re":1},"monomial":[2,1]}]}"#);
    let out = dir.path().join("oracle.csv");
    let o = clifft(&["angular", "--spec", s(&spec), "--oracle", "--out", s(&out)]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(value_after(&stdout(&o), "sup_modes_vs_oracle") <= 1e-8);
    assert!(std::fs::read_to_string(&out).unwrap().starts_with("x1,x2,"));
}
