//! End-to-end tests running the built binary.

use std::path::Path;
use std::process::{Command, Output};

fn bmt_bin() -> &'static str {
    env!("CARGO_BIN_EXE_bmt")
}

fn run(args: &[&str]) -> Output {
    Command::new(bmt_bin())
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf8 output")
}

fn write_file(dir: &Path, name: &str, content: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, content).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn sample_is_deterministic_and_header_only_when_empty() {
    let a = stdout_of(&[
        "sample",
        "--kappa-l",
        "0.5",
        "--kappa-r",
        "0.5",
        "-n",
        "50",
        "--seed",
        "7",
    ]);
    let b = stdout_of(&[
        "sample",
        "--kappa-l",
        "0.5",
        "--kappa-r",
        "0.5",
        "-n",
        "50",
        "--seed",
        "7",
    ]);
    assert_eq!(a, b);
    let c = stdout_of(&[
        "sample",
        "--kappa-l",
        "0.5",
        "--kappa-r",
        "0.5",
        "-n",
        "50",
        "--seed",
        "8",
    ]);
    assert_ne!(a, c);
    assert_eq!(a.lines().count(), 51);
    assert!(a.starts_with("x\n"));

    let empty = stdout_of(&[
        "sample",
        "--kappa-l",
        "0.5",
        "--kappa-r",
        "0.5",
        "-n",
        "0",
        "--seed",
        "7",
    ]);
    assert_eq!(empty, "x\n");
}

#[test]
fn sample_mean_matches_closed_form() {
    // mean of BMT(0.9, 0.1) is 0.5 - 0.3 (0.1 - 0.9) = 0.74
    let out = stdout_of(&[
        "sample",
        "--kappa-l",
        "0.9",
        "--kappa-r",
        "0.1",
        "-n",
        "10000",
        "--seed",
        "3",
    ]);
    let xs: Vec<f64> = out.lines().skip(1).map(|l| l.parse().unwrap()).collect();
    assert_eq!(xs.len(), 10_000);
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    // population sd of this parameter pair is about 0.2, CLT band of 3 sd
    let band = 3.0 * 0.21 / (xs.len() as f64).sqrt();
    assert!((mean - 0.74).abs() <= band, "mean={mean}");
}

#[test]
fn curve_cdf_endpoints_and_pdf_mass() {
    let cdf = stdout_of(&[
        "curve",
        "--kappa-l",
        "0.3",
        "--kappa-r",
        "0.7",
        "--domain",
        "2,5",
        "--which",
        "cdf",
        "--points",
        "11",
    ]);
    let rows: Vec<(f64, f64)> = cdf
        .lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split(',');
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[0], (2.0, 0.0));
    assert_eq!(rows[10], (5.0, 1.0));
    for w in rows.windows(2) {
        assert!(w[1].1 >= w[0].1);
    }

    let pdf = stdout_of(&[
        "curve",
        "--kappa-l",
        "0.3",
        "--kappa-r",
        "0.7",
        "--domain",
        "2,5",
        "--which",
        "pdf",
        "--points",
        "10001",
    ]);
    let rows: Vec<(f64, f64)> = pdf
        .lines()
        .skip(1)
        .map(|l| {
            let mut it = l.split(',');
            (
                it.next().unwrap().parse().unwrap(),
                it.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    assert!(rows.iter().all(|r| r.1 >= 0.0));
    // trapezoid mass over the tabulated grid
    let mut mass = 0.0;
    for w in rows.windows(2) {
        mass += 0.5 * (w[0].1 + w[1].1) * (w[1].0 - w[0].0);
    }
    assert!((mass - 1.0).abs() <= 1e-4, "mass={mass}");
}

#[test]
fn describe_two_point_file_and_column_selection() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "data.csv", "id,x\n1,0\n2,1\n");
    let json = stdout_of(&["describe", "--input", &path, "--column", "x"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["n"], 2);
    assert_eq!(v["mean"].as_f64().unwrap(), 0.5);
    assert_eq!(v["skewness"].as_f64().unwrap(), 0.0);
    assert_eq!(v["kurtosis"].as_f64().unwrap(), 1.0);
    assert!((v["sd"].as_f64().unwrap() - 0.5f64.sqrt()).abs() <= 1e-15);

    let by_index = stdout_of(&["describe", "--input", &path, "--column", "1"]);
    assert_eq!(json, by_index);

    // dot-decimal parsing regardless of locale conventions
    let p2 = write_file(dir.path(), "dot.csv", "x\n0.44\n0.56\n");
    let out = stdout_of(&["describe", "--input", &p2, "--column", "x"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["mean"].as_f64().unwrap(), 0.5);
}

#[test]
fn fit_recovers_simulated_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let data_path = dir.path().join("sim.csv").to_string_lossy().into_owned();
    let out = run(&[
        "sample",
        "--kappa-l",
        "0.2",
        "--kappa-r",
        "0.4",
        "-n",
        "2000",
        "--seed",
        "11",
        "--output",
        &data_path,
    ]);
    assert!(out.status.success());

    let json = stdout_of(&[
        "fit",
        "--input",
        &data_path,
        "--models",
        "bmt",
        "--methods",
        "mle,mpse",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let fits = doc["fits"].as_array().unwrap();
    assert_eq!(fits.len(), 2);
    for fit in fits {
        assert_eq!(fit["model"], "bmt");
        assert_eq!(fit["converged"], true);
        let est = fit["estimate"].as_array().unwrap();
        let kl = est[0].as_f64().unwrap();
        let kr = est[1].as_f64().unwrap();
        assert!((kl - 0.2).abs() <= 0.06, "kl={kl}");
        assert!((kr - 0.4).abs() <= 0.06, "kr={kr}");
    }
    // exactly one row carries the best mark per objective column
    let best_ll: usize = fits
        .iter()
        .filter(|f| f["best_log_likelihood"] == true)
        .count();
    assert!(best_ll >= 1);

    // determinism plus bit-exact JSON round trip of the finite fields
    let json2 = stdout_of(&[
        "fit",
        "--input",
        &data_path,
        "--models",
        "bmt",
        "--methods",
        "mle,mpse",
    ]);
    assert_eq!(json, json2);
    let doc2: serde_json::Value = serde_json::from_str(&json2).unwrap();
    for (a, b) in doc["fits"]
        .as_array()
        .unwrap()
        .iter()
        .zip(doc2["fits"].as_array().unwrap())
    {
        for field in ["log_likelihood", "sum_log_spacings", "aic", "bic"] {
            let x = a[field].as_f64().unwrap();
            let y = b[field].as_f64().unwrap();
            assert_eq!(x.to_bits(), y.to_bits(), "{field} not bit-exact");
        }
    }
}

#[test]
fn fit_uniform_data_lands_near_uniform_corners() {
    let dir = tempfile::tempdir().unwrap();
    let data_path = dir.path().join("unif.csv").to_string_lossy().into_owned();
    // the uniform limit of the family: kappa at the guard boundary
    let out = run(&[
        "sample",
        "--kappa-l",
        "1e-9",
        "--kappa-r",
        "1e-9",
        "-n",
        "3000",
        "--seed",
        "5",
        "--output",
        &data_path,
    ]);
    assert!(out.status.success());

    let json = stdout_of(&[
        "fit",
        "--input",
        &data_path,
        "--models",
        "beta,kumaraswamy,bmt",
        "--methods",
        "mle",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    for fit in doc["fits"].as_array().unwrap() {
        let est = fit["estimate"].as_array().unwrap();
        let (a, b) = (est[0].as_f64().unwrap(), est[1].as_f64().unwrap());
        match fit["model"].as_str().unwrap() {
            "bmt" => {
                assert!(a <= 0.05 && b <= 0.05, "bmt estimate ({a}, {b})");
            }
            _ => {
                assert!((a - 1.0).abs() <= 0.1, "shape1 {a}");
                assert!((b - 1.0).abs() <= 0.1, "shape2 {b}");
            }
        }
    }
}

#[test]
fn fit_four_parameter_brackets_height_like_data() {
    let dir = tempfile::tempdir().unwrap();
    let data_path = dir.path().join("height.csv").to_string_lossy().into_owned();
    let out = run(&[
        "sample",
        "--kappa-l",
        "0.72",
        "--kappa-r",
        "0.70",
        "--domain",
        "148.6,199.1",
        "-n",
        "1000",
        "--seed",
        "13",
        "--output",
        &data_path,
    ]);
    assert!(out.status.success());
    let values: Vec<f64> = std::fs::read_to_string(&data_path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| l.parse().unwrap())
        .collect();
    let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
    let max = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);

    let json = stdout_of(&[
        "fit",
        "--input",
        &data_path,
        "--models",
        "bmt",
        "--methods",
        "mle",
        "--n-params",
        "4",
    ]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let est = doc["fits"][0]["estimate"].as_array().unwrap();
    let c = est[0].as_f64().unwrap();
    let d = est[1].as_f64().unwrap();
    assert!(c < min && d > max, "({c}, {d}) must bracket [{min}, {max}]");
    assert!(min - c <= 5.0, "c={c} vs min={min}");
    assert!(d - max <= 5.0, "d={d} vs max={max}");
}

#[test]
fn region_and_grid_have_expected_shape() {
    let region = stdout_of(&["region", "--resolution", "8"]);
    let lines: Vec<&str> = region.lines().collect();
    assert_eq!(lines[0], "kappa_l,kappa_r,skew2,kurt");
    assert_eq!(lines.len(), 1 + 64);
    for line in &lines[1..] {
        let fields: Vec<f64> = line.split(',').map(|f| f.parse().unwrap()).collect();
        let (skew2, kurt) = (fields[2], fields[3]);
        assert!(kurt > 1.0 + skew2);
    }

    let grid = stdout_of(&["grid", "--resolution", "4"]);
    let lines: Vec<&str> = grid.lines().collect();
    assert_eq!(lines[0], "kappa_l,kappa_r,measure,value");
    assert_eq!(lines.len(), 1 + 4 * 4 * 8);
    assert!(lines[1].contains(",mean,"));

    let grid_json = stdout_of(&["grid", "--resolution", "4", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&grid_json).unwrap();
    assert_eq!(v["cells"].as_array().unwrap().len(), 16);
}

#[test]
fn simulate_small_study_is_deterministic() {
    let args = [
        "simulate",
        "--replicates",
        "4",
        "--sizes",
        "30",
        "--thetas",
        "0.5,0.5",
        "--methods",
        "mle",
        "--seed",
        "99",
    ];
    let a = stdout_of(&args);
    let b = stdout_of(&args);
    assert_eq!(a, b);
    let lines: Vec<&str> = a.lines().collect();
    assert_eq!(
        lines[0],
        "n,kappa_l,kappa_r,method,statistic,abs_err_kappa_l,abs_err_kappa_r,failures"
    );
    assert_eq!(lines.len(), 1 + 3); // mean, median, sd rows for the one cell
    assert!(lines[1].starts_with("30,"));
}

#[test]
fn usage_and_data_errors_exit_with_code_two() {
    let missing = run(&["describe", "--input", "/nonexistent/file.csv"]);
    assert_eq!(missing.status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let path = write_file(dir.path(), "outside.csv", "x\n0.5\n2.5\n");
    // 2.5 lies outside the fixed unit domain of a two-parameter fit
    let outside = run(&[
        "fit",
        "--input",
        &path,
        "--models",
        "bmt",
        "--methods",
        "mle",
    ]);
    assert_eq!(outside.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&outside.stderr);
    assert!(msg.contains("2.5"), "error should name the value: {msg}");

    let bad_flag = run(&["fit", "--input", &path, "--n-params", "3"]);
    assert_eq!(bad_flag.status.code(), Some(2));

    let contradictory = run(&[
        "fit", "--input", &path, "--n-params", "4", "--domain", "0,1",
    ]);
    assert_eq!(contradictory.status.code(), Some(2));

    let unwritable = run(&[
        "sample",
        "--kappa-l",
        "0.5",
        "--kappa-r",
        "0.5",
        "-n",
        "1",
        "--seed",
        "1",
        "--output",
        "/nonexistent-dir/out.csv",
    ]);
    assert_eq!(unwritable.status.code(), Some(2));

    // non-numeric rows are rejected with their row numbers
    let dirty = write_file(dir.path(), "dirty.csv", "x\n0.5\nnot-a-number\n");
    let bad_rows = run(&["describe", "--input", &dirty]);
    assert_eq!(bad_rows.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad_rows.stderr).contains("3"));
}
