use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bohr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bohr"))
        .args(args)
        .env_remove("BOHR_OUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn csv_field(text: &str, row: usize, col: usize) -> String {
    text.lines().nth(row).unwrap().split(',').nth(col).unwrap().to_string()
}

#[test]
fn norm_dalpha_row() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.ds", "1 1 0\n2 1 0\n6 1 0\n");
    let o = bohr(&["norm", "--space", "Dalpha", "--alpha", "1", "-i", &f]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert_eq!(out.lines().next().unwrap(), "space,params,strategy,value,stderr,samples,seed");
    let v: f64 = csv_field(&out, 1, 3).parse().unwrap();
    assert!((v - 1.75f64.sqrt()).abs() < 1e-15);
}

#[test]
fn norm_hardy_one_by_monte_carlo() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.ds", "1 1 0\n2 1 0\n");
    let o = bohr(&["norm", "--space", "Hp", "--p", "1", "--mc", "100000", "--seed", "7", "-i", &f]);
    assert!(o.status.success());
    let out = stdout(&o);
    let v: f64 = csv_field(&out, 1, 3).parse().unwrap();
    let se: f64 = csv_field(&out, 1, 4).parse().unwrap();
    assert!(se > 0.0 && (v - 4.0 / PI).abs() <= 4.0 * se);
    assert_eq!(csv_field(&out, 1, 5), "100000");
    assert_eq!(csv_field(&out, 1, 6), "7");
    assert_eq!(out, stdout(&bohr(&["norm", "--space", "Hp", "--p", "1", "--mc", "100000", "--seed", "7", "-i", &f])));
}

#[test]
fn norm_of_empty_series_and_halfplane() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.ds", "# nothing here\n");
    let o = bohr(&["norm", "--space", "HbetaOmega", "--beta", "2", "-i", &f]);
    assert_eq!(csv_field(&stdout(&o), 1, 3), "0");
    let one = write(dir.path(), "one.ds", "1 1 0\n");
    let o = bohr(&["norm", "--space", "HalfPlaneD", "--beta", "0.5", "-i", &one]);
    assert!(o.status.success());
    let v: f64 = csv_field(&stdout(&o), 1, 3).parse().unwrap();
    assert!((v - 1.0).abs() < 1e-12);
}

#[test]
fn compose_examples() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.ds", "2 1 0\n");
    let stretch = write(dir.path(), "s.sym", "c0 2\n");
    let o = bohr(&["compose", "-i", &f, "--symbol", &stretch]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "4 1 0\n");

    let g = write(dir.path(), "g.ds", "# arbitrary\n3 0.25 -1\n1 2 0\n10 1e-3 5\n");
    let id = write(dir.path(), "id.sym", "c0 1\n");
    let o = bohr(&["compose", "-i", &g, "--symbol", &id]);
    assert_eq!(stdout(&o), "1 2 0\n3 0.25 -1\n10 0.001 5\n");

    let worked = write(dir.path(), "w.sym", "c0 1\n2 1 0\n");
    let o = bohr(&["compose", "-i", &f, "--symbol", &worked, "--horizon", "64"]);
    let l = 2f64.ln();
    let expected = [(2u64, 1.0), (4, -l), (8, l * l / 2.0), (16, -l * l * l / 6.0)];
    let out = stdout(&o);
    for (line, (n, v)) in out.lines().zip(expected) {
        let mut it = line.split(' ');
        assert_eq!(it.next().unwrap().parse::<u64>().unwrap(), n);
        assert!((it.next().unwrap().parse::<f64>().unwrap() - v).abs() < 1e-15);
    }
    assert_eq!(out.lines().count(), 6);
}

#[test]
fn compose_warns_on_falsified_symbol() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.ds", "2 1 0\n");
    let bad = write(dir.path(), "bad.sym", "c0 0\n1 0.25 0\n");
    let o = bohr(&["compose", "-i", &f, "--symbol", &bad, "--horizon", "16"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("warning"));
    assert!(!o.stdout.is_empty());
}

#[test]
fn verify_suites() {
    let o = bohr(&["verify", "contraction", "--trials", "200", "--seed", "1"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("passed=200/200"), "{out}");
    assert!(out.contains("seed=1"));

    let o = bohr(&["verify", "moments", "--alpha", "2"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = bohr(&["verify", "lemma25", "--trials", "50"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("passed=50/50"));

    let o = bohr(&["verify", "beta-search", "--trials", "3"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("INFO"));
}

#[test]
fn usage_and_input_errors_exit_two() {
    assert_eq!(bohr(&["verify", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(bohr(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bohr(&["norm", "--space", "Dalpha", "-i", "/does/not/exist"]).status.code(), Some(2));
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "bad.ds", "1 1 0\n2 x 0\n");
    let o = bohr(&["norm", "--space", "Dalpha", "-i", &f]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let g = write(dir.path(), "g.ds", "1 1 0\n2 1 0\n");
    let o = bohr(&["norm", "--space", "Hp", "--p", "3", "-i", &g]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn asymptotic_rows() {
    let o = bohr(&["asymptotic", "--alpha", "0", "--x", "10,100,1000"]);
    let out = stdout(&o);
    for (line, x) in out.lines().skip(1).zip(["10", "100", "1000"]) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[0], x);
        assert_eq!(f[1], x);
        assert_eq!(f[2], "1");
    }
    let o = bohr(&["asymptotic", "--alpha", "1", "--x", "4"]);
    assert_eq!(csv_field(&stdout(&o), 1, 1), "8");
    let o = bohr(&["asymptotic", "--alpha", "1", "--x", "1000,10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn sample_rows_and_out_dir() {
    let o = bohr(&["sample", "--measure", "HaarTorus", "--dim", "4", "--count", "100", "--seed", "3"]);
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 401);
    for line in out.lines().skip(1) {
        let m: f64 = line.split(',').nth(4).unwrap().parse().unwrap();
        assert!((m - 1.0).abs() < 1e-15);
    }
    assert_eq!(out, stdout(&bohr(&["sample", "--measure", "HaarTorus", "--dim", "4", "--count", "100", "--seed", "3"])));

    let o = bohr(&["sample", "--measure", "NuAlpha", "--alpha", "1", "--count", "100000", "--seed", "11"]);
    let r2: Vec<f64> = stdout(&o)
        .lines()
        .skip(1)
        .map(|l| l.split(',').nth(4).unwrap().parse::<f64>().unwrap().powi(2))
        .collect();
    let n = r2.len() as f64;
    let mean = r2.iter().sum::<f64>() / n;
    let var = r2.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    assert!((mean - 0.5).abs() <= 4.0 * (var / n).sqrt());

    let dir = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_bohr"))
        .args(["sample", "--measure", "UniformDisc", "--count", "5"])
        .env("BOHR_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let written = fs::read_to_string(dir.path().join("sample.csv")).unwrap();
    assert_eq!(written.lines().count(), 6);
}
