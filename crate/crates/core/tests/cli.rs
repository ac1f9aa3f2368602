use std::fs;
use std::path::Path;

use assert_cmd::Command;

fn pmcorr() -> Command {
    Command::cargo_bin("pmcorr").unwrap()
}

fn stdout_of(args: &[&str]) -> String {
    let out = pmcorr().arg("--quiet").args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn records(csv_text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_reader(csv_text.as_bytes());
    let headers = reader.headers().unwrap().iter().map(String::from).collect();
    let rows = reader
        .records()
        .map(|r| r.unwrap().iter().map(String::from).collect())
        .collect();
    (headers, rows)
}

fn column(headers: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let j = headers.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[j].parse().unwrap()).collect()
}

fn value_after_equals(line: &str) -> f64 {
    line.split('=').nth(1).unwrap().trim().parse().unwrap()
}

const SWEEP: [&str; 11] = [
    "sweep", "--axis", "gamma", "--min", "-150", "--max", "150", "--points", "301", "--lambda", "1e15",
];

#[test]
fn sweep_row_count_and_determinism() {
    let mut args = SWEEP.to_vec();
    args.extend(["--t", "50e-6"]);
    let first = stdout_of(&args);
    let (headers, rows) = records(&first);
    assert_eq!(rows.len(), 301);
    assert_eq!(headers[0], "gamma");
    assert!(headers.iter().any(|h| h == "qfi_numeric_gamma"));
    assert!(!first.contains('\r'));
    assert_eq!(first, stdout_of(&args));
}

#[test]
fn time_suffixes_match_seconds() {
    let base = ["qfi", "--gamma", "5", "--lambda", "1e20"];
    let a = stdout_of(&[&base[..], &["--t", "1us"]].concat());
    let b = stdout_of(&[&base[..], &["--t", "1e-6"]].concat());
    assert_eq!(a, b);
}

#[test]
fn manifest_accompanies_output_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sweep.csv");
    pmcorr()
        .args(["--out", out.to_str().unwrap()])
        .args(["sweep", "--axis", "time", "--points", "5", "--target", "lambda"])
        .assert()
        .success();
    let manifest: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("sweep.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["tool"], "pmcorr");
    assert_eq!(manifest["parameters"]["lambda_m2s"], 1e15);
    assert_eq!(manifest["settings"]["axis"], "t");
    assert!(manifest["constants"]["hbar"].as_f64().unwrap() > 0.0);
    assert!(manifest["wall_clock_seconds"].as_f64().is_some());
    let (_, rows) = records(&fs::read_to_string(&out).unwrap());
    assert_eq!(rows.len(), 5);
}

#[test]
fn manifest_goes_to_stderr_for_stdout_output() {
    let out = pmcorr().args(["convert", "--to-temp", "1e20"]).output().unwrap();
    let manifest: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(manifest["settings"]["lambda_m2s"], 1e20);
}

#[test]
fn convert_both_directions() {
    let text = stdout_of(&["convert", "--to-lambda", "0.442"]);
    let mut lines = text.lines();
    let lambda = value_after_equals(lines.next().unwrap());
    assert!((lambda / 1e15 - 1.0).abs() < 0.02);
    let provenance = lines.next().unwrap();
    assert!(provenance.contains("m_air_kg") && provenance.contains("number_density_m3"));

    let temp = value_after_equals(stdout_of(&["convert", "--to-temp", "1e20"]).lines().next().unwrap());
    assert!((temp / 952.0 - 1.0).abs() < 0.02);

    let zero = value_after_equals(stdout_of(&["convert", "--to-lambda", "0"]).lines().next().unwrap());
    assert_eq!(zero, 0.0);

    let dense = stdout_of(&["convert", "--to-lambda", "300", "--number-density", "1.8e8"]);
    assert!((value_after_equals(dense.lines().next().unwrap()) / 3.2e15 - 1.0).abs() < 0.03);
}

#[test]
fn validation_errors_exit_2() {
    pmcorr().args(["--quiet", "convert", "--to-temp", "-1"]).assert().code(2);
    pmcorr().args(["--quiet", "sweep", "--axis", "gamma", "--points", "1"]).assert().code(2);
    pmcorr()
        .args(["--quiet", "sweep", "--axis", "lambda", "--min", "0", "--log"])
        .assert()
        .code(2);
    pmcorr().args(["--quiet", "purity", "--t", "abc"]).assert().code(2);
    pmcorr().args(["--quiet", "purity", "--sigma0", "-1"]).assert().code(2);
    pmcorr().args(["--quiet", "sweep"]).assert().code(2);
}

#[test]
fn numerical_failure_exits_3_and_names_the_row() {
    // A pure probe without scattering: the Λ information diverges at Λ = 0.
    let out = pmcorr()
        .args(["--quiet", "sweep", "--axis", "lambda", "--target", "lambda", "--scale", "linear"])
        .args(["--min", "0", "--max", "1e15", "--points", "3", "--ell0", "inf"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("row 0"), "{err}");
}

#[test]
fn unwritable_output_exits_4() {
    pmcorr()
        .args(["--quiet", "--out", "/nonexistent-dir/x.csv", "purity"])
        .assert()
        .code(4);
    pmcorr()
        .args(["--quiet", "--config", "/nonexistent-dir/params.conf", "purity"])
        .assert()
        .code(4);
}

#[test]
fn config_file_and_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("params.conf");
    fs::write(&config, "gamma = 5\nlambda_m2s = 1e20\nt_s = 1us\n").unwrap();
    let c = config.to_str().unwrap();

    let from_config = stdout_of(&["--config", c, "qfi"]);
    let direct = stdout_of(&["qfi", "--gamma", "5", "--lambda", "1e20", "--t", "1e-6"]);
    assert_eq!(from_config, direct);

    let overridden = stdout_of(&["--config", c, "qfi", "--gamma", "-3"]);
    let direct = stdout_of(&["qfi", "--gamma", "-3", "--lambda", "1e20", "--t", "1e-6"]);
    assert_eq!(overridden, direct);

    fs::write(&config, "colour = blue\n").unwrap();
    pmcorr().args(["--quiet", "--config", c, "qfi"]).assert().code(2);
}

#[test]
fn table1_default_single_and_rescaled() {
    let (headers, rows) = records(&stdout_of(&["table1"]));
    assert_eq!(rows.len(), 7);
    for resid in column(&headers, &rows, "resid_tau_max_rel") {
        assert!(resid.abs() < 0.01);
    }
    for resid in column(&headers, &rows, "resid_tgi_db_abs") {
        assert!(resid.abs() < 0.1);
    }
    let base_tau = column(&headers, &rows, "tau_max_us");

    let (h1, r1) = records(&stdout_of(&["table1", "--gammas", "0"]));
    assert_eq!(r1.len(), 1);
    assert_eq!(column(&h1, &r1, "tgi_db"), vec![0.0]);

    // τ_max ∝ Λ^{-1/3}
    let (h4, r4) = records(&stdout_of(&["table1", "--lambda", "4e15"]));
    let shrink = 4f64.cbrt();
    for (a, b) in base_tau.iter().zip(column(&h4, &r4, "tau_max_us")) {
        assert!((a / b / shrink - 1.0).abs() < 0.02, "{a} {b}");
    }
    assert!(r4[0][h4.iter().position(|h| h == "ref_tau_max_us").unwrap()].is_empty());
}

#[test]
fn point_commands_report_quantities() {
    let purity = stdout_of(&["purity", "--t", "0"]);
    let (h, rows) = records(&purity);
    assert_eq!(h, ["quantity", "value", "unit"]);
    let exact: f64 = rows.iter().find(|r| r[0] == "purity_exact").unwrap()[1].parse().unwrap();
    assert!((exact - 0.9766).abs() < 1e-4);

    let cfi = stdout_of(&["cfi", "--gamma", "3", "--t", "1us"]);
    let (_, rows) = records(&cfi);
    let vals: Vec<f64> = rows.iter().take(3).map(|r| r[1].parse().unwrap()).collect();
    assert!((vals[1] / vals[0] - 1.0).abs() < 1e-6 && (vals[2] / vals[0] - 1.0).abs() < 1e-6);

    let tgi = stdout_of(&["tgi", "--gamma", "150"]);
    let (_, rows) = records(&tgi);
    let gain: f64 = rows.iter().find(|r| r[0] == "tgi").unwrap()[1].parse().unwrap();
    assert!((gain - 14.45).abs() < 0.1);

    let lens = stdout_of(&["lens", "--curvature", "1"]);
    assert!(lens.contains("focal_length") && lens.contains("gamma_from_curvature"));

    pmcorr().args(["--quiet", "--format", "svg", "qfi"]).assert().code(2);
}

#[test]
fn figure_presets() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    pmcorr()
        .args(["--quiet", "--format", "svg", "figures", "--preset", "fig2", "--outdir", d])
        .assert()
        .success();
    for panel in ["fig2a", "fig2b", "fig2c", "fig2d"] {
        assert!(dir.path().join(format!("{panel}.csv")).exists());
        assert!(dir.path().join(format!("{panel}.csv.manifest.json")).exists());
        assert!(dir.path().join(format!("{panel}.svg")).exists());
    }
    let (h, rows) = records(&fs::read_to_string(dir.path().join("fig2a.csv")).unwrap());
    let purity = column(&h, &rows, "purity");
    assert!(purity.iter().all(|&p| p == purity[0]));
    assert!(column(&h, &rows, "qfi_purity_term_gamma").iter().all(|&q| q == 0.0));

    pmcorr()
        .args(["--quiet", "figures", "--preset", "fig5", "--outdir", d])
        .assert()
        .success();
    let (h, rows) = records(&fs::read_to_string(dir.path().join("fig5_exact.csv")).unwrap());
    assert_eq!(rows.len(), 7);
    assert!(column(&h, &rows, "difference_db").iter().all(|d| d.abs() <= 0.2));
    let (_, curve) = records(&fs::read_to_string(dir.path().join("fig5_curve.csv")).unwrap());
    assert_eq!(curve.len(), 301);

    pmcorr()
        .args(["--quiet", "figures", "--preset", "fig3", "--outdir", d])
        .assert()
        .success();
    let (h, rows) = records(&fs::read_to_string(dir.path().join("fig3a.csv")).unwrap());
    let gammas = column(&h, &rows, "gamma");
    let info = column(&h, &rows, "qfi_analytic_lambda_m4s2");
    let best = (0..info.len()).max_by(|&a, &b| info[a].total_cmp(&info[b])).unwrap();
    assert_ne!(gammas[best], 0.0);
}

#[test]
fn figures_into_unwritable_directory_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "").unwrap();
    let target = Path::new(&blocker).join("sub");
    pmcorr()
        .args(["--quiet", "figures", "--preset", "fig5", "--outdir", target.to_str().unwrap()])
        .assert()
        .code(4);
}
