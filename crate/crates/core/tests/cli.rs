//! End-to-end runs of the command-line binary.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gauss-bernstein"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("gauss-bernstein-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn verify_writes_a_passing_report() {
    let path = scratch("report.json");
    let o = run(&[
        "verify",
        "--tolerance",
        "1e-5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["pass"], true);
    assert!(report["catalog"]["entries"].as_array().unwrap().len() >= 10);
    assert!(report["discrepancies"].as_array().unwrap().len() >= 2);
}

#[test]
fn verify_below_noise_floor_lists_failures() {
    let o = run(&["verify", "--tolerance", "1e-15"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("failure:"));
}

#[test]
fn verify_subset() {
    let o = run(&["verify", "--only", "catalog"]);
    assert_eq!(o.status.code(), Some(0));
    let report: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report.get("catalog").is_some());
    assert!(report.get("calibration").is_none());
    assert_eq!(
        run(&["verify", "--only", "nothing"]).status.code(),
        Some(64)
    );
}

#[test]
fn bound_sweeps() {
    let o = run(&["bound", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,R,lhs,ball_term,paper_tail,exact_tail,chain_ok");
    assert_eq!(lines.len(), 13);
    assert!(lines[1..].iter().all(|l| l.ends_with(",true")));

    let o = run(&["bound", "--n", "1", "--rmax", "0.5", "--steps", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 2);

    assert_eq!(run(&["bound", "--n", "4"]).status.code(), Some(64));
    assert_eq!(
        run(&["bound", "--rmin", "3", "--rmax", "1"]).status.code(),
        Some(64)
    );
}

#[test]
fn flow_converges() {
    let o = run(&["flow", "--n", "1", "--init", "sinusoid"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("t,weighted_area,oscillation,max_abs_hf\n"));
    assert!(text
        .trim_end()
        .lines()
        .last()
        .unwrap()
        .starts_with("verdict: converged_to_constant"));

    let o = run(&["flow", "--n", "1", "--init", "constant:0.7"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("converged_to_constant a=0.700000000000 t=0.000000"));

    assert_eq!(run(&["flow", "--n", "3"]).status.code(), Some(64));
    assert_eq!(run(&["flow", "--init", "spiral"]).status.code(), Some(64));
}

#[test]
fn flow_output_is_deterministic() {
    let mut files = Vec::new();
    for run_id in 0..2 {
        let series = scratch(&format!("series{run_id}.csv"));
        let field = scratch(&format!("field{run_id}.csv"));
        let o = run(&[
            "flow",
            "--n",
            "2",
            "--grid",
            "65",
            "--init",
            "random_bump",
            "--seed",
            "42",
            "--tmax",
            "1",
            "--out",
            series.to_str().unwrap(),
            "--field-out",
            field.to_str().unwrap(),
        ]);
        assert_eq!(
            o.status.code(),
            Some(1),
            "t_max = 1 is too short to flatten"
        );
        assert!(stdout(&o).starts_with("verdict: max_time_reached"));
        files.push((fs::read(&series).unwrap(), fs::read(&field).unwrap()));
    }
    assert_eq!(files[0], files[1]);
    assert!(String::from_utf8_lossy(&files[0].1).starts_with("x,y,u\n"));
}

#[test]
fn curvature_reports() {
    let o = run(&[
        "curvature",
        "--surface",
        "cylinder",
        "--params",
        "r=1",
        "--at",
        "0,0",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(
        v["report"]["weighted_mean_curvature"]
            .as_f64()
            .unwrap()
            .abs()
            < 1e-12
    );

    let o = run(&[
        "curvature",
        "--surface",
        "x_theta",
        "--params",
        "theta=1.5707963",
        "--at",
        "0.3,0.5",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["report"]["weighted_mean_curvature"].as_f64().unwrap() - 1.0).abs() < 1e-6);

    let o = run(&[
        "curvature",
        "--surface",
        "cylinder",
        "--params",
        "r=1",
        "--at",
        "0,9",
    ]);
    assert_eq!(o.status.code(), Some(64), "outside the chart");
    let o = run(&["curvature", "--surface", "cylinder", "--params", "r=-1"]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn planes_root_and_printed_mismatch() {
    let o = run(&[
        "planes",
        "--profile",
        "paper_example",
        "--lo",
        "0",
        "--hi",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let roots = v["roots"].as_array().unwrap();
    assert_eq!(roots.len(), 1);
    assert!((roots[0].as_f64().unwrap() - 0.3903882).abs() < 1e-7);
    assert_eq!(v["printed_root_check"]["mismatch"], true);

    let o = run(&["planes", "--profile", "constant"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["roots"], "identically_zero");
}

#[test]
fn measure_agrees_with_closed_form() {
    let o = run(&["measure", "--n", "2", "--R", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["gaussian_ball_volume"].as_f64().unwrap() - (1.0 - (-0.5f64).exp())).abs() < 1e-12);
    assert_eq!(v["monte_carlo"]["seed"], 0xD1CE);
}

#[test]
fn config_file_with_flag_override() {
    let cfg = scratch("config.json");
    fs::write(&cfg, r#"{"n": 1, "rmin": 1.0, "rmax": 2.0, "steps": 3}"#).unwrap();
    let o = run(&["bound", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    assert!(text.lines().nth(1).unwrap().starts_with("1,1,"));

    let o = run(&["bound", "--config", cfg.to_str().unwrap(), "--n", "3"]);
    assert!(stdout(&o).lines().nth(1).unwrap().starts_with("3,1,"));

    fs::write(&cfg, "[1, 2]").unwrap();
    assert_eq!(
        run(&["bound", "--config", cfg.to_str().unwrap()])
            .status
            .code(),
        Some(64)
    );
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(run(&[]).status.code(), Some(64));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["bound", "--n", "two"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}
