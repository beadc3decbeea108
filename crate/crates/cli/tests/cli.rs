use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_discount-osc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let header = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|rec| rec.unwrap().iter().map(String::from).collect())
        .collect();
    (header, rows)
}

#[test]
fn sequences_table_plot_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let out = run(&[
        "sequences",
        "--n-min",
        "3",
        "--n-max",
        "6",
        "--plot",
        "--out",
        a.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let out = run(&[
        "sequences",
        "--n-min",
        "3",
        "--n-max",
        "6",
        "--jobs",
        "3",
        "--out",
        b.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());

    let (header, rows) = read_csv(&a);
    assert_eq!(
        header,
        [
            "n",
            "seq",
            "lambda_exact",
            "lambda_float",
            "w_plus",
            "w_minus",
            "N",
            "stability_gap"
        ]
    );
    assert_eq!(rows.len(), 8);
    let w = |n: &str, seq: &str| -> f64 {
        rows.iter().find(|r| r[0] == n && r[1] == seq).unwrap()[4]
            .parse()
            .unwrap()
    };
    assert!((w("6", "lambda") - std::f64::consts::FRAC_1_SQRT_2).abs() < 0.02);
    assert!(w("6", "mu") >= 0.75);
    assert_eq!(rows[0][2], "3/16+1/8*sqrt2");
    assert_eq!(rows[0][6], "13");

    let svg = std::fs::read_to_string(dir.path().join("a.svg")).unwrap();
    assert!(svg.starts_with("<svg") && svg.contains("0.70711"));
    assert_eq!(svg.matches("<polyline").count(), 2);
}

#[test]
fn sequences_domain_errors() {
    let out = run(&["sequences", "--n-min", "1", "--n-max", "4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("discount exceeds 1"));
    assert_eq!(run(&["sequences", "--n-max", "11"]).status.code(), Some(2));
    assert_eq!(
        run(&["sequences", "--n-min", "5", "--n-max", "4"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["sequences", "--plot"]).status.code(), Some(2));
}

#[test]
fn verify_passes_and_detects_fault() {
    let out = run(&["verify"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.contains("w_λ(ω₋₁) ≤ w_λ(ω₁) ≤ w_λ(ω₋₁)+2"));
    assert!(text.contains("(w_λ(ω₁)) does not have a limit when λ → 0"));
    assert!(!text.contains("FAIL"));

    let out = run(&["verify", "--perturb"]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text
        .lines()
        .any(|l| l.starts_with("shapley fixed point") && l.contains("FAIL")));
}

#[test]
fn pde_summary_within_tolerance() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pde.csv");
    let out = run(&[
        "pde",
        "--lambda",
        "0.1",
        "--grid",
        "400",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    let sup: f64 = stderr
        .split_whitespace()
        .find_map(|t| t.strip_prefix("sup_error="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(sup <= 0.05);
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["x", "v_numeric", "u_exact", "gap"]);
    assert_eq!(rows.len(), 400);
    let max_gap = rows
        .iter()
        .map(|r| r[3].parse::<f64>().unwrap().abs())
        .fold(0.0, f64::max);
    assert!((max_gap - sup).abs() < 1e-9);

    assert_eq!(run(&["pde", "--lambda", "0.01"]).status.code(), Some(2));
    assert_eq!(run(&["pde", "--grid", "401"]).status.code(), Some(2));
}

#[test]
fn hamiltonian_anchor_rows() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.csv");
    let out = run(&[
        "hamiltonian",
        "--exact",
        "--digits",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let (header, rows) = read_csv(&path);
    assert_eq!(header, ["x", "p", "h", "h_exact"]);
    let at = |x: &str, p: &str| {
        rows.iter()
            .find(|r| r[0] == x && r[1] == p)
            .unwrap()
            .clone()
    };
    assert_eq!(at("1.00000", "0.00000")[2], "-0.70343");
    assert_eq!(at("1.00000", "0.00000")[3], "17/8-2*sqrt2");
    assert_eq!(at("0.00000", "0.00000")[2], "0.64829");
    assert_eq!(rows.len(), 9 * 25);
}

#[test]
fn sweep_json_is_ordered() {
    let out = run(&[
        "sweep",
        "--lambda",
        "1/2,0.1,3-2*sqrt2",
        "--truncation",
        "10",
        "--jobs",
        "3",
        "--format",
        "json",
        "--exact",
    ]);
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc.as_array().unwrap();
    let lambdas: Vec<&str> = rows
        .iter()
        .map(|r| r["lambda_exact"].as_str().unwrap())
        .collect();
    assert_eq!(lambdas, ["1/2", "1/10", "3-2*sqrt2"]);
    assert!(rows.iter().all(|r| r["N"] == 10));
    assert_eq!(run(&["sweep", "--lambda", "2"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--lambda", "x"]).status.code(), Some(2));
}
