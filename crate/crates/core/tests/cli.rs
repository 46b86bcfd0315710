use std::f64::consts::PI;
use std::path::Path;
use std::process::{Command, Output};

use dpplab::lab::{parse_report, Hyperuniformity, REPORT_HEADER};

fn dpplab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dpplab")).args(args).output().unwrap()
}

fn ok(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

const UNIT_AREA: &str = "disk:0.5641895835477563";

#[test]
fn spectrum_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.csv");
    ok(&dpplab(&[
        "spectrum",
        "--kernel",
        "ginibre",
        "--domain",
        UNIT_AREA,
        "--quad-order",
        "12",
        "--out",
        out.to_str().unwrap(),
    ]));
    let text = std::fs::read_to_string(out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("index,lambda,raw_lambda"));
    let lambda0: f64 = lines.next().unwrap().split(',').nth(1).unwrap().parse().unwrap();
    assert!((lambda0 - (1.0 - (-1.0f64).exp())).abs() < 1e-9);
}

#[test]
fn functionals_to_stdout() {
    let text = ok(&dpplab(&["functionals", "--kernel", "ginibre", "--domain", UNIT_AREA, "--quad-order", "16"]));
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("expected_count,variance,entropy,schatten_0.5,schatten_1,S_over_V"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((row[1] - 0.523777611803).abs() < 1e-9);
    assert!((row[2] - 1.63904909174).abs() < 1e-9);
}

#[test]
fn sweep_is_deterministic_and_classifiable() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sweep.cfg",
        "# small Ginibre sweep\nkernel = ginibre\ndomain = disk:1\nL_grid = 1, 1.25, 1.5, 1.75, 2\nquad_order = 12\n",
    );
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        let out = dpplab(&["sweep", "--config", &cfg, "--out", p.to_str().unwrap()]);
        ok(&out);
        assert!(String::from_utf8_lossy(&out.stderr).contains("classification:"));
    }
    let bytes = std::fs::read(&a).unwrap();
    assert_eq!(bytes, std::fs::read(&b).unwrap());
    let text = String::from_utf8(bytes).unwrap();
    assert!(text.starts_with(REPORT_HEADER));
    let report = parse_report(&text, 0.05).unwrap();
    assert_eq!(report.records.len(), 5);
    assert!(report.records.iter().all(|r| r.s_over_v >= 4.0 * std::f64::consts::LN_2));

    let classified = ok(&dpplab(&["classify", "--report", a.to_str().unwrap()]));
    let line = classified.lines().nth(1).unwrap();
    assert!(["class_one", "class_two", "inconclusive"].contains(&line.split(',').next().unwrap()));
    assert_ne!(report.fits.unwrap().classification.class, Hyperuniformity::ClassTwo);
}

#[test]
fn finite_and_sample() {
    let dir = tempfile::tempdir().unwrap();
    let text =
        ok(&dpplab(&["finite", "--kernel", "ginibre", "--domain", "disk:1.1283791670955126", "--quad-order", "16"]));
    let get = |key: &str| -> f64 {
        text.lines().find(|l| l.starts_with(&format!("{key},"))).unwrap().split(',').nth(1).unwrap().parse().unwrap()
    };
    assert_eq!(get("rank"), 4.0);
    assert!((get("gap") - 0.781467259253).abs() < 1e-9);
    assert!((get("l1_deviation") - get("l1_identity")).abs() < 1e-8);
    assert_eq!(get("variance_le_twice_gap"), 1.0);

    let points = dir.path().join("p.csv");
    let cfg = write(dir.path(), "s.cfg", &format!("stats_out = {}\n", dir.path().join("st.csv").display()));
    ok(&dpplab(&[
        "sample",
        "--config",
        &cfg,
        "--kernel",
        "ginibre",
        "--domain",
        "disk:1.1283791670955126",
        "--quad-order",
        "16",
        "--seed",
        "5",
        "--samples",
        "30",
        "--out",
        points.to_str().unwrap(),
    ]));
    let pts = std::fs::read_to_string(points).unwrap();
    assert!(pts.starts_with("sample,x,y\n"));
    assert_eq!(pts.lines().count(), 1 + 30 * 4);
    let stats = std::fs::read_to_string(dir.path().join("st.csv")).unwrap();
    assert!(stats.starts_with("n_samples,mean_count,var_count,stderr_mean\n30,"));
}

#[test]
fn failures_exit_nonzero_with_a_diagnostic() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.cfg", "kernel = ginibre\ndomain = disk:1\nL_grid = 2, 1\n");
    let out = dpplab(&["sweep", "--config", &bad]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error:") && err.contains("line 3"), "{err}");

    let capped = write(dir.path(), "cap.cfg", "kernel = landau:1\ndomain = rect:2x2\ndimension_cap = 10\n");
    let out = dpplab(&["functionals", "--config", &capped]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));

    let out = dpplab(&["spectrum", "--kernel", "gaussian", "--domain", "disk:1"]);
    assert!(!out.status.success());
    let out = dpplab(&["spectrum", "--config", "/nonexistent/cfg"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("/nonexistent/cfg"));
}

#[test]
fn sampled_window_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = String::from("# h0 window\n");
    let dt = 0.002;
    for k in 0..=4000 {
        let t = -4.0 + k as f64 * dt;
        text.push_str(&format!("{t} {}\n", (-PI * t * t).exp()));
    }
    let window = write(dir.path(), "h0.txt", &text);
    let out = ok(&dpplab(&[
        "functionals",
        "--kernel",
        &format!("wh-file:{window}"),
        "--domain",
        "rect:0.8x0.8",
        "--quad-order",
        "6",
    ]));
    let row: Vec<f64> = out.lines().nth(1).unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((row[0] - 0.64).abs() < 1e-6, "{row:?}");
}
