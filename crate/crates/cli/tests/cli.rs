//! End-to-end tests of the command-line interface: report content, file
//! outputs, byte determinism, and the exit-code contract (0 success,
//! 1 computation failure, 2 configuration or usage error).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::tempdir;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wsladder")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("config.json");
    fs::write(&path, body).unwrap();
    path
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

fn stderr(output: &Output) -> String {
    String::from_utf8_lossy(&output.stderr).into_owned()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn predict_reports_the_interval_and_target() {
    let dir = tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"n_sites": 10, "delta": 10.0, "tau": 1.0,
            "pulse": {"kind": "sigmoid_pair"}, "gamma": 20.0}"#,
    );
    let out = run(&["predict", "--config", config.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("n=2, cell 1"), "report: {text}");
    assert!(text.contains("1.414214 < gamma/delta <= 3.464102"), "report: {text}");
    assert!(text.contains("mixing angle"), "report: {text}");
}

#[test]
fn predict_flags_exact_boundary_couplings() {
    let dir = tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"n_sites": 8, "delta": 1.0, "tau": 1.0,
            "pulse": {"kind": "sigmoid_pair"}, "gamma": 1.4142135623730951}"#,
    );
    let out = run(&["predict", "--config", config.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("n=1, cell 0"), "report: {}", stdout(&out));
    assert!(stderr(&out).contains("boundary"), "warning: {}", stderr(&out));
}

#[test]
fn predict_caps_the_quantum_number_at_the_top_cell() {
    let dir = tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"n_sites": 8, "delta": 1.0, "tau": 1.0,
            "pulse": {"kind": "sigmoid_pair"}, "gamma": 8.0}"#,
    );
    let out = run(&["predict", "--config", config.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("n=4, cell 3"), "report: {text}");
    assert!(text.contains("capped"), "report: {text}");
}

#[test]
fn spectrum_tabulates_both_decoupled_limits() {
    let dir = tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"n_sites": 8, "delta": 1.0, "tau": 1.0,
            "pulse": {"kind": "sigmoid_pair"},
            "gamma_sweep": {"min": 0.0, "max": 6.0, "steps": 13}}"#,
    );
    let out_dir = dir.path().join("out");
    let out = run(&[
        "spectrum",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    for name in ["spectrum_early.csv", "spectrum_late.csv"] {
        let text = fs::read_to_string(out_dir.join(name)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 13 * 8, "{name} row count");
        assert_eq!(lines[0], "gamma_over_delta,rank,eigenvalue_over_delta");
        // With the couplings off, both limits reduce to the bare ladder.
        assert_eq!(lines[1], "0.00000000000e0,1,3.50000000000e0", "{name} first row");
        // The top rung stays pinned at 3.5 delta in the early spectrum.
        if name == "spectrum_early.csv" {
            assert!(text.contains("\n1.00000000000e0,1,3.50000000000e0\n"), "{name}");
        }
    }
}

#[test]
fn evolve_writes_a_normalized_trajectory_and_summary() {
    let dir = tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"n_sites": 10, "delta": 10.0, "tau": 1.0,
            "pulse": {"kind": "sigmoid_pair"}, "gamma": 20.0,
            "integrator": {"dt": 0.002}}"#,
    );
    let out_dir = dir.path().join("out");
    let out = run(&[
        "evolve",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));

    let text = stdout(&out);
    let mean: f64 = text
        .split("final mean cell ")
        .nth(1)
        .and_then(|rest| rest.split(',').next())
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((mean - 1.0).abs() <= 0.05, "mean cell {mean} should be near 1 for n=2 transport");

    let table = fs::read_to_string(out_dir.join("trajectory.csv")).unwrap();
    let lines: Vec<&str> = table.lines().collect();
    assert_eq!(lines[0], "t,p_1,p_2,p_3,p_4,p_5,p_6,p_7,p_8,p_9,p_10,norm");
    assert!(lines[1].starts_with("-2.50000000000e1,1.00000000000e0,"), "row: {}", lines[1]);
    for line in &lines[1..] {
        let norm: f64 = line.rsplit(',').next().unwrap().parse().unwrap();
        assert!((norm - 1.0).abs() <= 1e-8, "norm column drifted: {line}");
    }
}

#[test]
fn evolve_can_skip_the_table_and_emit_a_chart() {
    let dir = tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"n_sites": 8, "delta": 10.0, "tau": 1.0,
            "pulse": {"kind": "sigmoid_pair"}, "gamma": 5.0,
            "integrator": {"dt": 0.002},
            "output": {"emit_trajectory": false, "emit_svg": true}}"#,
    );
    let out_dir = dir.path().join("out");
    let out = run(&[
        "evolve",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert!(!out_dir.join("trajectory.csv").exists());
    let svg = fs::read_to_string(out_dir.join("trajectory.svg")).unwrap();
    assert!(svg.starts_with("<svg "));
    assert!(svg.contains("<polyline"));
}

#[test]
fn sweep_is_byte_deterministic_and_marks_boundaries() {
    let dir = tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"n_sites": 8, "delta": 10.0, "tau": 1.0,
            "pulse": {"kind": "sigmoid_pair"},
            "gamma_sweep": {"min": 5.0, "max": 20.0, "steps": 4},
            "integrator": {"dt": 0.002},
            "output": {"emit_svg": true}}"#,
    );
    let dir_a = dir.path().join("a");
    let dir_b = dir.path().join("b");
    let first = run(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir_a.to_str().unwrap(),
    ]);
    let second = run(&[
        "sweep",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir_b.to_str().unwrap(),
    ]);
    assert_eq!(code(&first), 0, "stderr: {}", stderr(&first));
    assert_eq!(code(&second), 0);

    let csv_a = fs::read(dir_a.join("sweep.csv")).unwrap();
    let csv_b = fs::read(dir_b.join("sweep.csv")).unwrap();
    assert_eq!(csv_a, csv_b, "sweep.csv must be byte-for-byte reproducible");

    let text = String::from_utf8(csv_a).unwrap();
    assert!(text.starts_with(
        "gamma,gamma_over_delta,mean_cell,variance,predicted_n,predicted_cell,fidelity,norm_drift\n"
    ));
    assert!(stdout(&first).contains("transition across mean cell 0.5"));

    let svg = fs::read_to_string(dir_a.join("sweep.svg")).unwrap();
    assert!(svg.contains("stroke-dasharray"), "boundary markers missing");
}

#[test]
fn sweep_requires_a_coupling_grid() {
    let dir = tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"n_sites": 8, "delta": 10.0, "tau": 1.0,
            "pulse": {"kind": "sigmoid_pair"}, "gamma": 5.0}"#,
    );
    let out = run(&["sweep", "--config", config.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("gamma_sweep"), "stderr: {}", stderr(&out));
}

#[test]
fn evolve_requires_a_scalar_coupling() {
    let dir = tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"n_sites": 8, "delta": 10.0, "tau": 1.0,
            "pulse": {"kind": "sigmoid_pair"},
            "gamma_sweep": {"min": 1.0, "max": 2.0, "steps": 3}}"#,
    );
    let out = run(&["evolve", "--config", config.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("scalar gamma"), "stderr: {}", stderr(&out));
}

#[test]
fn bad_configs_are_rejected_with_usage_errors() {
    let cases: &[(&str, &str)] = &[
        (
            r#"{"n_sites": 8, "delta": 10.0, "tau": 1.0, "pulse": {"kind": "sigmoid_pair"},
                "gamma_sweep": {"min": 1.0, "max": 2.0, "steps": 0}}"#,
            "steps",
        ),
        (
            r#"{"n_sites": 8, "delta": 10.0, "tau": 1.0, "pulse": {"kind": "sigmoid_pair"},
                "gamma": 5.0, "extra": 1}"#,
            "unknown field",
        ),
        (
            r#"{"n_sites": 9, "delta": 10.0, "tau": 1.0, "pulse": {"kind": "sigmoid_pair"},
                "gamma": 5.0}"#,
            "even",
        ),
        (
            r#"{"n_sites": 8, "delta": 10.0, "tau": 1.0, "pulse": {"kind": "sigmoid_pair"},
                "gamma": 5.0, "gamma_sweep": {"min": 1.0, "max": 2.0, "steps": 3}}"#,
            "not both",
        ),
        (
            r#"{"n_sites": 8, "delta": 10.0, "tau": 1.0, "pulse": {"kind": "sigmoid_pair"}}"#,
            "required",
        ),
        (
            r#"{"n_sites": 8, "delta": 10.0, "tau": 1.0,
                "pulse": {"kind": "truncated_sigmoid_pair"}, "gamma": 5.0}"#,
            "requires pulse.T",
        ),
        (
            r#"{"n_sites": 8, "delta": 10.0, "tau": 1.0,
                "pulse": {"kind": "sigmoid_pair", "T": 7.0}, "gamma": 5.0}"#,
            "applies only",
        ),
        (
            r#"{"n_sites": 8, "delta": 10.0, "tau": 1.0, "pulse": {"kind": "sigmoid_pair"},
                "gamma": 5.0, "integrator": {"dt": -0.001}}"#,
            "dt",
        ),
        (
            r#"{"n_sites": 8, "delta": 10.0, "tau": 1.0, "pulse": {"kind": "sigmoid_pair"},
                "gamma": 5.0, "integrator": {"window": [5.0, -5.0]}}"#,
            "window",
        ),
    ];
    let dir = tempdir().unwrap();
    for (i, (body, needle)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("bad_{i}.json"));
        fs::write(&path, body).unwrap();
        let out = run(&["predict", "--config", path.to_str().unwrap()]);
        assert_eq!(code(&out), 2, "case {i} should be a usage error: {}", stderr(&out));
        assert!(
            stderr(&out).contains(needle),
            "case {i} message should mention {needle:?}: {}",
            stderr(&out)
        );
    }
}

#[test]
fn runtime_failures_exit_with_one() {
    let dir = tempdir().unwrap();
    let config = write_config(
        dir.path(),
        r#"{"n_sites": 10, "delta": 10.0, "tau": 1.0,
            "pulse": {"kind": "sigmoid_pair"}, "gamma": 70.0,
            "integrator": {"dt": 0.1}}"#,
    );
    let out = run(&["evolve", "--config", config.to_str().unwrap()]);
    assert_eq!(code(&out), 1, "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("time step"), "stderr: {}", stderr(&out));
}
