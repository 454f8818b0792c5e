//! End-to-end checks of the `aniso-emit` binary: output schemas, exit codes,
//! config-file merging and determinism.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_aniso-emit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

#[test]
fn rate_closed_form_json() {
    let out = run(&["rate", "--eps", "4,4,4", "--dipole", "0,0,1"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).expect("valid json");
    assert_eq!(json["method"], "closed-form");
    let gamma: f64 = json["gamma"].as_f64().unwrap();
    assert!((gamma - 2.0).abs() < 1e-14);
}

#[test]
fn rate_uniaxial_closed_value() {
    let out = run(&["rate", "--eps", "1.5,1.5,5", "--dipole", "0,0,1"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let gamma = json["gamma"].as_f64().unwrap();
    assert!((gamma - 1.5f64.sqrt()).abs() < 1e-12);
}

#[test]
fn rate_model_value() {
    let out = run(&["rate", "--eps", "1.5,3,5", "--dipole", "0,0,1", "--method", "model"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["method"], "interpolation-model");
    let gamma = json["gamma"].as_f64().unwrap();
    assert!((gamma - 1.5061034949221839).abs() < 1e-12);
}

#[test]
fn rate_csv_schema() {
    let out = run(&["rate", "--eps", "4,4,4", "--output", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with(
        "gamma,method,branch_a_label,branch_a_gamma,branch_b_label,branch_b_gamma,quad_order,quad_err,gamma_si,gamma_vac_si\n"
    ));
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn rate_si_conversion() {
    let out = run(&[
        "rate", "--eps", "1,1,1", "--si", "--omega", "2.4e15", "--dipole-si", "3.33564e-30",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let gamma_vac = json["gamma_vac_si"].as_f64().unwrap();
    let gamma_si = json["gamma_si"].as_f64().unwrap();
    assert!((gamma_vac - 648685.1328538083).abs() / gamma_vac < 1e-10);
    // Vacuum medium: absolute rate equals gamma_vac.
    assert!((gamma_si - gamma_vac).abs() / gamma_vac < 1e-12);
    // --si without --omega is a config error.
    let bad = run(&["rate", "--eps", "1,1,1", "--si", "--dipole-si", "1e-30"]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn rate_frame_rotates_dipole() {
    // Rotation about y mapping the lab z axis onto the crystal x axis: the
    // dipole then sits along the distinguished axis of eps = (7,1,1).
    let out = run(&[
        "rate",
        "--eps",
        "7,1,1",
        "--dipole",
        "0,0,1",
        "--frame",
        "0,0,1,0,1,0,-1,0,0",
    ]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let gamma = json["gamma"].as_f64().unwrap();
    assert!((gamma - 1.0).abs() < 1e-12, "gamma {gamma}");
}

#[test]
fn rate_local_field_warns_on_zero_entry() {
    let out = run(&[
        "rate", "--eps", "2,3,4", "--dipole", "1,1,1", "--local-field", "0,1,1",
    ]);
    assert!(out.status.success());
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("zero entry"), "stderr: {err}");
}

#[test]
fn rate_invalid_inputs_exit_2() {
    assert_eq!(run(&["rate", "--eps", "0,1,1"]).status.code(), Some(2));
    assert_eq!(run(&["rate", "--eps", "1,2"]).status.code(), Some(2));
    assert_eq!(run(&["rate", "--eps", "2,3,4", "--method", "closed"]).status.code(), Some(2));
    assert_eq!(run(&["rate", "--eps", "1,2,3", "--dipole", "0,0,0"]).status.code(), Some(2));
    // clap usage errors share the same code.
    assert_eq!(run(&["rate", "--no-such-flag"]).status.code(), Some(2));
}

#[test]
fn rate_unreachable_tolerance_exits_3_with_best_value() {
    let out = run(&["rate", "--eps", "1.5,3,5", "--tol", "1e-300"]);
    assert_eq!(out.status.code(), Some(3));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["converged"], serde_json::Value::Bool(false));
    let gamma = json["gamma"].as_f64().unwrap();
    assert!((gamma - 1.5073728868154).abs() / gamma < 1e-9);
}

#[test]
fn angular_csv_schema_and_peaks() {
    let out = run(&["angular", "--eps", "1,7,7", "--samples", "19"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("theta_rad,f_theta"));
    assert_eq!(text.lines().count(), 20);
    // Peak angles on stderr: pi/2 -+ arccos(1/3).
    let err = String::from_utf8(out.stderr.clone()).unwrap();
    assert!(err.contains("peak_theta_rad:"), "stderr: {err}");
    let peaks: Vec<f64> = err
        .trim()
        .trim_start_matches("peak_theta_rad:")
        .split(',')
        .map(|p| p.trim().parse().unwrap())
        .collect();
    let dtheta = (1.0f64 / 3.0).acos();
    assert!((peaks[0] - (std::f64::consts::FRAC_PI_2 - dtheta)).abs() < 1e-12);
    assert!((peaks[1] - (std::f64::consts::FRAC_PI_2 + dtheta)).abs() < 1e-12);
}

#[test]
fn angular_isotropic_is_sine_squared() {
    let out = run(&["angular", "--eps", "1,1,1", "--samples", "9"]);
    assert!(out.status.success());
    for line in stdout(&out).lines().skip(1) {
        let mut parts = line.split(',');
        let theta: f64 = parts.next().unwrap().parse().unwrap();
        let f: f64 = parts.next().unwrap().parse().unwrap();
        assert!((f - theta.sin().powi(2)).abs() < 1e-13);
    }
}

#[test]
fn angular_rejects_biaxial_and_accepts_degrees() {
    assert_eq!(run(&["angular", "--eps", "1,2,3"]).status.code(), Some(2));
    let out = run(&["angular", "--eps", "1,7,7", "--samples", "3", "--theta-max", "90deg"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let last = text.lines().last().unwrap();
    let theta: f64 = last.split(',').next().unwrap().parse().unwrap();
    assert!((theta - std::f64::consts::FRAC_PI_2).abs() < 1e-12);
}

#[test]
fn sweep_csv_schema_and_closed_column() {
    let out = run(&[
        "sweep", "--eps-x", "1.5", "--eps-z", "5", "--sweep", "eps_y", "--range", "1.5:5:5",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("eps_sweep,gamma_numeric,gamma_model,gamma_closed,rel_error,quad_order,quad_err")
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 5);
    // Endpoint rows are uniaxial: gamma_closed populated, tiny rel_error.
    for idx in [0usize, 4] {
        let cols: Vec<&str> = rows[idx].split(',').collect();
        assert!(!cols[3].is_empty(), "endpoint row should carry gamma_closed");
        let rel: f64 = cols[4].parse().unwrap();
        assert!(rel <= 1e-8);
    }
    // Interior rows are biaxial: gamma_closed empty.
    let cols: Vec<&str> = rows[2].split(',').collect();
    assert!(cols[3].is_empty());
    let gamma_numeric: f64 = cols[1].parse().unwrap();
    assert!(gamma_numeric > 0.0);
}

#[test]
fn sweep_requires_axis_and_range() {
    assert_eq!(
        run(&["sweep", "--eps-x", "1.5", "--eps-z", "5", "--range", "1:2:3"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&["sweep", "--eps-x", "1.5", "--eps-z", "5", "--sweep", "eps_y"]).status.code(),
        Some(2)
    );
    assert_eq!(
        run(&[
            "sweep", "--eps-x", "1.5", "--eps-z", "5", "--sweep", "eps_q", "--range", "1:2:3",
        ])
        .status
        .code(),
        Some(2)
    );
    // count < 2 and non-positive bounds are config errors.
    assert_eq!(
        run(&[
            "sweep", "--eps-x", "1.5", "--eps-z", "5", "--sweep", "eps_y", "--range", "1:2:1",
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn greens_routes_agree() {
    let out = run(&["greens", "--eps", "2,3,4", "--dipole", "1,0,0"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(json["rel_diff"].as_f64().unwrap() <= 1e-9);
    assert_eq!(json["probe_directions"], serde_json::Value::from(26));
    assert!(json["completeness_max_defect"].as_f64().unwrap() <= 1e-12);

    let uni = run(&["greens", "--eps", "7,1,1", "--dipole", "1,0,0"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&uni)).unwrap();
    let fermi = json["gamma_fermi"].as_f64().unwrap();
    let greens = json["gamma_greens"].as_f64().unwrap();
    assert!((fermi - 1.0).abs() < 1e-8);
    assert!((greens - 1.0).abs() < 1e-8);
}

#[test]
fn config_file_merging_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("run.json");
    std::fs::write(
        &config,
        r#"{"eps": [1.5, 3.0, 5.0], "dipole": [0.0, 0.0, 1.0], "method": "model"}"#,
    )
    .unwrap();
    let out = run(&["rate", "--config", config.to_str().unwrap()]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["method"], "interpolation-model");

    // Flag overrides the file's method.
    let out = run(&["rate", "--config", config.to_str().unwrap(), "--method", "numeric"]);
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["method"], "quadrature");

    // Unknown keys are rejected.
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"epsilon": [1,2,3]}"#).unwrap();
    assert_eq!(run(&["rate", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn env_tolerance_is_used_and_flag_wins() {
    let out = bin()
        .args(["rate", "--eps", "2,3,4"])
        .env("ANISO_EMIT_TOL", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));

    // Flag takes precedence, so the bad env value is never consulted.
    let out = bin()
        .args(["rate", "--eps", "2,3,4", "--tol", "1e-8"])
        .env("ANISO_EMIT_TOL", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));

    let out = bin()
        .args(["rate", "--eps", "2,3,4"])
        .env("ANISO_EMIT_TOL", "1e-6")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn rate_output_is_deterministic() {
    let a = run(&["rate", "--eps", "1.5,3,5", "--dipole", "1,2,3"]);
    let b = run(&["rate", "--eps", "1.5,3,5", "--dipole", "1,2,3"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn validate_is_deterministic_and_fault_injectable() {
    let a = run(&["validate", "--seed", "42"]);
    assert_eq!(a.status.code(), Some(0));
    let b = run(&["validate", "--seed", "42"]);
    assert_eq!(a.stdout, b.stdout, "same seed must give byte-identical JSON");

    let json: serde_json::Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(json["passed"], serde_json::Value::Bool(true));
    assert!(json["checks"].as_array().unwrap().len() >= 25);

    let faulted = run(&["validate", "--seed", "42", "--inject-fault"]);
    assert_eq!(faulted.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_str(&stdout(&faulted)).unwrap();
    assert_eq!(json["passed"], serde_json::Value::Bool(false));
}
