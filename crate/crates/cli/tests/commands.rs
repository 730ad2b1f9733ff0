use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use slr_core::{Matrix64, TargetPair};
use slr_tool::io::{format_matrix, read_matrix};
use tempfile::TempDir;

fn slr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_slr")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn path(dir: &TempDir, name: &str) -> PathBuf {
    dir.path().join(name)
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write(dir: &TempDir, name: &str, m: &Matrix64) -> PathBuf {
    let p = path(dir, name);
    fs::write(&p, format_matrix(m)).unwrap();
    p
}

fn json(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn f(v: &Value, key: &str) -> f64 {
    v[key].as_f64().unwrap_or_else(|| panic!("{key} missing in {v}"))
}

fn generate(dir: &TempDir, extra: &[&str]) -> String {
    let prefix = path(dir, "inst");
    let mut args = vec!["generate", "--out-prefix", s(&prefix)];
    args.extend_from_slice(extra);
    let out = slr(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    prefix.to_str().unwrap().to_owned()
}

fn decompose(dir: &TempDir, input: &str, extra: &[&str]) -> (Output, Value, PathBuf, PathBuf) {
    let (sp, lp, rp) = (path(dir, "s.csv"), path(dir, "l.csv"), path(dir, "r.json"));
    let mut args = vec![
        "decompose",
        "--input",
        input,
        "--out-sparse",
        s(&sp),
        "--out-lowrank",
        s(&lp),
        "--report",
        s(&rp),
    ];
    args.extend_from_slice(extra);
    let out = slr(&args);
    let report = if rp.exists() { json(&rp) } else { Value::Null };
    (out, report, sp, lp)
}

#[test]
fn zero_input_gives_zero_parts() {
    let dir = TempDir::new().unwrap();
    let y = write(&dir, "y.csv", &Matrix64::zeros(5, 4));
    let (out, report, sp, lp) =
        decompose(&dir, s(&y), &["--mode", "regularized", "--lambda", "0.3", "--mu", "0.1"]);
    assert_eq!(code(&out), 0);
    assert!(read_matrix(&sp).unwrap().is_zero());
    assert!(read_matrix(&lp).unwrap().is_zero());
    assert_eq!(report["converged"], Value::Bool(true));
}

#[test]
fn bad_input_exits_with_code_one() {
    let dir = TempDir::new().unwrap();
    let ragged = path(&dir, "ragged.csv");
    fs::write(&ragged, "1,2\n3,4\n5\n").unwrap();
    let (out, _, _, _) = decompose(&dir, s(&ragged), &["--mode", "constrained", "--lambda", "0.3"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
    let nan = path(&dir, "nan.csv");
    fs::write(&nan, "1,2\nNaN,4\n").unwrap();
    let (out, _, _, _) = decompose(&dir, s(&nan), &["--mode", "constrained", "--lambda", "0.3"]);
    assert_eq!(code(&out), 1);
    assert!(!path(&dir, "r.json").exists());
    assert_eq!(code(&slr(&["decompose", "--input", s(&nan)])), 1);
}

#[test]
fn report_residuals_match_the_written_matrices() {
    let dir = TempDir::new().unwrap();
    let prefix = generate(
        &dir,
        &["--m", "18", "--n", "15", "--rank", "2", "--ktilde", "20", "--sigma", "0.01", "--seed", "4"],
    );
    let y_path = format!("{prefix}_y.csv");
    let y = read_matrix(Path::new(&y_path)).unwrap();
    for mode in [
        vec!["--mode", "regularized", "--lambda", "0.25", "--mu", "0.05"],
        vec!["--mode", "constrained", "--lambda", "0.25"],
        vec![
            "--mode",
            "constrained",
            "--lambda",
            "0.25",
            "--eps-v1",
            "2",
            "--eps-star",
            "0.5",
            "--max-iter",
            "300",
        ],
    ] {
        let (out, report, sp, lp) = decompose(&dir, &y_path, &mode);
        assert!(code(&out) == 0 || code(&out) == 2);
        assert_eq!(code(&out) == 0, report["converged"] == Value::Bool(true));
        let r = &(&read_matrix(&sp).unwrap() + &read_matrix(&lp).unwrap()) - &y;
        assert!((slr_core::norms::l1(&r) - f(&report, "residual_v1")).abs() <= 1e-9);
        assert!((slr_core::trace_norm(&r).unwrap() - f(&report, "residual_star")).abs() <= 1e-9);
        assert!((r.frobenius_norm() - f(&report, "residual_v2")).abs() <= 1e-9);
    }
}

#[test]
fn constrained_mode_recovers_a_generated_exact_instance() {
    let dir = TempDir::new().unwrap();
    let prefix = generate(
        &dir,
        &["--m", "40", "--n", "40", "--rank", "1", "--ktilde", "40", "--seed", "8", "--model", "incoherent"],
    );
    let diag = path(&dir, "d.json");
    let sparse = format!("{prefix}_sparse.csv");
    let lowrank = format!("{prefix}_lowrank.csv");
    assert_eq!(
        code(&slr(&["diagnose", "--sparse", &sparse, "--lowrank", &lowrank, "--report", s(&diag)])),
        0
    );
    let lambda = f(&json(&diag), "constrained_lambda").to_string();
    let (out, report, _, _) = decompose(
        &dir,
        &format!("{prefix}_y.csv"),
        &[
            "--mode",
            "constrained",
            "--lambda",
            &lambda,
            "--eps-v1",
            "0",
            "--eps-star",
            "0",
            "--target-sparse",
            &sparse,
            "--target-lowrank",
            &lowrank,
        ],
    );
    assert_eq!(code(&out), 0);
    assert!(f(&report, "sparse_relative_error") <= 1e-6);
    assert!(f(&report, "low_rank_relative_error") <= 1e-6);
}

#[test]
fn decompose_report_has_the_documented_keys() {
    let dir = TempDir::new().unwrap();
    let y = write(&dir, "y.csv", &slr_core::gaussian_matrix(6, 5, slr_core::Seed(1)));
    let (_, report, _, _) =
        decompose(&dir, s(&y), &["--mode", "regularized", "--lambda", "0.4", "--mu", "0.2"]);
    let mut keys: Vec<&str> = report.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(
        keys,
        [
            "converged",
            "iterations",
            "lambda",
            "mode",
            "mu_or_eps",
            "objective",
            "residual_star",
            "residual_v1",
            "residual_v2",
            "wall_time_seconds",
        ]
    );
    assert_eq!(report["mode"], "regularized");
    assert_eq!(f(&report, "mu_or_eps"), 0.2);
}

#[test]
fn iteration_cap_exits_with_code_two() {
    let dir = TempDir::new().unwrap();
    let prefix = generate(&dir, &["--m", "20", "--n", "20", "--rank", "2", "--ktilde", "30", "--seed", "2"]);
    let (out, report, sp, _) = decompose(
        &dir,
        &format!("{prefix}_y.csv"),
        &["--mode", "constrained", "--lambda", "0.2", "--max-iter", "3"],
    );
    assert_eq!(code(&out), 2);
    assert_eq!(report["converged"], Value::Bool(false));
    assert!(sp.exists());
}

#[test]
fn generated_files_assemble_exactly() {
    let dir = TempDir::new().unwrap();
    let prefix = generate(
        &dir,
        &["--m", "12", "--n", "9", "--rank", "2", "--ktilde", "15", "--sigma", "0.1", "--seed", "5"],
    );
    let read = |suffix: &str| read_matrix(Path::new(&format!("{prefix}_{suffix}.csv"))).unwrap();
    let sum = &(&read("sparse") + &read("lowrank")) + &read("noise");
    assert_eq!(sum, read("y"));
    let profile = json(Path::new(&format!("{prefix}_profile.json")));
    assert_eq!(profile["seed"], 5);
    assert!(f(&profile, "eps_2to2") > 0.0);
}

fn diagnose(dir: &TempDir, xs: &Matrix64, xl: &Matrix64) -> Value {
    let sp = write(dir, "xs.csv", xs);
    let lp = write(dir, "xl.csv", xl);
    let rp = path(dir, "diag.json");
    assert_eq!(code(&slr(&["diagnose", "--sparse", s(&sp), "--lowrank", s(&lp), "--report", s(&rp)])), 0);
    json(&rp)
}

#[test]
fn diagnose_examples() {
    let dir = TempDir::new().unwrap();
    let t =
        slr_core::gen_incoherent_target::<f64>(24, 24, 1, 24, Default::default(), slr_core::Seed(3)).unwrap();
    let ok = diagnose(&dir, &t.sparse, &t.low_rank);
    assert_eq!(ok["identifiable"], true);
    assert!(f(&ok, "alpha_beta") < 1.0);
    assert_eq!(ok["constrained_passed"], true);

    let x = slr_core::gaussian_matrix(7, 6, slr_core::Seed(9));
    let same = diagnose(&dir, &x, &x);
    assert!(f(&same, "alpha_beta") >= 1.0 - 1e-9);
    assert_eq!(same["identifiable"], false);

    let empty = diagnose(&dir, &Matrix64::zeros(10, 8), &t.low_rank.clone().sub_block(10, 8));
    assert_eq!(f(&empty, "alpha"), 0.0);
    assert_eq!(empty["support_size"], 0);
}

trait SubBlock {
    fn sub_block(self, m: usize, n: usize) -> Matrix64;
}

impl SubBlock for Matrix64 {
    fn sub_block(self, m: usize, n: usize) -> Matrix64 {
        Matrix64::from_fn(m, n, |i, j| self[(i, j)])
    }
}

fn certify(dir: &TempDir, t: &TargetPair<f64>, noise: Option<&Matrix64>, lambda: f64) -> (i32, Value) {
    let sp = write(dir, "cs.csv", &t.sparse);
    let lp = write(dir, "cl.csv", &t.low_rank);
    let rp = path(dir, "cert.json");
    let lam = lambda.to_string();
    let mut args = vec![
        "certify",
        "--sparse",
        s(&sp),
        "--lowrank",
        s(&lp),
        "--lambda",
        &lam,
        "--mu",
        "1",
        "--c",
        "2",
        "--report",
        s(&rp),
    ];
    let np;
    if let Some(e) = noise {
        np = write(dir, "ce.csv", e);
        args.extend_from_slice(&["--noise", s(&np)]);
    }
    let out = slr(&args);
    (code(&out), json(&rp))
}

#[test]
fn certify_examples() {
    let dir = TempDir::new().unwrap();
    let t =
        slr_core::gen_incoherent_target::<f64>(20, 20, 1, 12, Default::default(), slr_core::Seed(6)).unwrap();
    let (rc, clean) = certify(&dir, &t, None, 0.25);
    assert_eq!(rc, 0);
    assert_eq!(clean["all_satisfied"], true);
    assert!(f(&clean, "feasibility_support") <= 1e-9 && f(&clean, "feasibility_tangent") <= 1e-9);

    let (rc, outside) = certify(&dir, &t, None, 5.0);
    assert_eq!(rc, 3);
    assert_eq!(outside["lambda_upper_ok"], false);
    assert!(outside["contraction"].is_null());

    let e = slr_core::gaussian_matrix::<f64>(20, 20, slr_core::Seed(1));
    let e = e.scale(1e-8 / e.frobenius_norm());
    let (rc, noisy) = certify(&dir, &t, Some(&e), 0.25);
    assert_eq!(rc, 0);
    for key in ["feasibility_support", "feasibility_tangent", "complement_support", "complement_tangent"] {
        assert!((f(&clean, key) - f(&noisy, key)).abs() <= 1e-6, "{key}");
    }
}

/// Singular vectors on e0, e1 and one support cell at (3, 3): αβ = 3, so the
/// recovery conditions fail and the certificate is refused.
#[test]
fn decoupled_four_by_four_is_refused() {
    let dir = TempDir::new().unwrap();
    let xs = Matrix64::from_fn(4, 4, |i, j| if (i, j) == (3, 3) { 1.0 } else { 0.0 });
    let xl = Matrix64::from_fn(4, 4, |i, j| if i == j && i < 2 { 1.0 } else { 0.0 });
    let t = TargetPair::new(xs, xl).unwrap();
    let (rc, report) = certify(&dir, &t, None, 0.5);
    assert_eq!(rc, 3);
    assert_eq!(report["product_ok"], false);
}

#[test]
fn sweep_trend_and_determinism() {
    let dir = TempDir::new().unwrap();
    let run = |name: &str, threads: &str| {
        let out = path(&dir, name);
        let o = slr(&[
            "sweep",
            "--m",
            "20",
            "--n",
            "20",
            "--ranks",
            "1:2",
            "--densities",
            "0:0.2:0.05",
            "--trials",
            "4",
            "--seed",
            "11",
            "--out",
            s(&out),
            "--threads",
            threads,
        ]);
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        (fs::read(&out).unwrap(), fs::read(slr_tool::sweep::summary_path(&out)).unwrap())
    };
    let a = run("a.csv", "1");
    let b = run("b.csv", "2");
    assert_eq!(a, b);

    let mut reader = csv::Reader::from_reader(a.1.as_slice());
    let rows: Vec<(usize, f64, f64)> = reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap(), r[4].parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 10);
    for rank in 1..=2 {
        let rates: Vec<(f64, f64)> = rows.iter().filter(|r| r.0 == rank).map(|r| (r.1, r.2)).collect();
        assert_eq!(rates[0], (0.0, 1.0));
        let inversions = rates.windows(2).filter(|w| w[1].1 > w[0].1).count();
        assert!(inversions <= 1, "{rates:?}");
    }
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(code(&slr(&["--help"])), 0);
    assert_eq!(code(&slr(&["frobnicate"])), 1);
    assert_eq!(code(&slr(&["sweep", "--ranks", "3:1"])), 1);
}
