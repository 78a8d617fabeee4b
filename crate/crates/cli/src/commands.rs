//! Subcommand implementations and the CSV writers they share.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use wsladder::dynamics::{default_dt, default_time_window, initial_state, propagate};
use wsladder::spectrum::{
    asymptotic_spectrum_early, asymptotic_spectrum_late, interval_bounds, predict_transport,
};
use wsladder::sweep::{detect_transitions, run_sweep, SweepConfig, SweepRow};
use wsladder::observables::{cell_distribution, prediction_fidelity};
use wsladder::Error;

use crate::config::RunConfig;
use crate::svg::{Chart, Series, PALETTE};
use crate::CliError;

fn compute_err(e: impl std::fmt::Display) -> CliError {
    CliError::Compute(e.to_string())
}

/// Scientific notation with 12 significant digits keeps every table
/// byte-for-byte reproducible for a fixed configuration.
fn fmt_sig(v: f64) -> String {
    if v.is_nan() {
        "NaN".to_string()
    } else {
        format!("{v:.11e}")
    }
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(dir)
        .map_err(|e| CliError::Compute(format!("cannot create {}: {e}", dir.display())))?;
    let path = dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| CliError::Compute(format!("cannot write {}: {e}", path.display())))
}

pub fn cmd_predict(config: &RunConfig, _out: &Path) -> Result<(), CliError> {
    let spec = config.lattice()?;
    let gamma = config.scalar_gamma()?;
    let prediction = predict_transport(&spec, gamma);
    let ratio = gamma / spec.delta();
    let (lo, hi) = interval_bounds(prediction.quantum_number);

    println!(
        "lattice: {} sites ({} cells), delta = {}",
        spec.n_sites(),
        spec.n_sites() / 2,
        spec.delta()
    );
    println!("coupling: gamma = {gamma} (gamma/delta = {ratio:.6})");
    if ratio > hi {
        println!(
            "interval: gamma/delta = {ratio:.6} lies beyond the last boundary {hi:.6}; \
             the quantum number is capped at the top cell of this lattice"
        );
    } else {
        println!("interval: {lo:.6} < gamma/delta <= {hi:.6}");
    }
    println!(
        "predicted transport: n={}, cell {}",
        prediction.quantum_number, prediction.target_cell
    );
    println!("mixing angle: theta = {:.6} rad", prediction.theta);
    let site = 2 * prediction.quantum_number - 1;
    println!(
        "target state: {:.6} |{site}> + {:.6} |{}>",
        prediction.theta.cos(),
        prediction.theta.sin(),
        site + 1
    );
    if prediction.on_boundary {
        eprintln!(
            "warning: gamma/delta sits exactly on an interval boundary; \
             the lower interval applies by convention"
        );
    }
    Ok(())
}

pub fn cmd_spectrum(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    let spec = config.lattice()?;
    let gammas = config.gamma_values();
    let header = "gamma_over_delta,rank,eigenvalue_over_delta\n";
    let mut early = String::from(header);
    let mut late = String::from(header);
    for &gamma in &gammas {
        let ratio = gamma / spec.delta();
        for (table, spectrum) in [
            (&mut early, asymptotic_spectrum_early(&spec, gamma)),
            (&mut late, asymptotic_spectrum_late(&spec, gamma)),
        ] {
            let mut values: Vec<f64> = spectrum.into_iter().map(|(value, _)| value).collect();
            values.sort_by(|a, b| b.partial_cmp(a).unwrap());
            for (i, value) in values.iter().enumerate() {
                let _ = writeln!(
                    table,
                    "{},{},{}",
                    fmt_sig(ratio),
                    i + 1,
                    fmt_sig(value / spec.delta())
                );
            }
        }
    }
    write_file(out, "spectrum_early.csv", &early)?;
    write_file(out, "spectrum_late.csv", &late)?;
    println!(
        "wrote spectrum_early.csv and spectrum_late.csv ({} couplings x {} ranks) in {}",
        gammas.len(),
        spec.n_sites(),
        out.display()
    );
    Ok(())
}

pub fn cmd_evolve(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    let spec = config.lattice()?;
    let gamma = config.scalar_gamma()?;
    let schedule =
        config.template().at_gamma(gamma).map_err(|e| CliError::Config(e.to_string()))?;
    let window = match config.integrator.window {
        Some(window) => window,
        None => default_time_window(&schedule).expect("pulse pairs have a natural window"),
    };
    let dt = config.integrator.dt.unwrap_or_else(|| default_dt(&spec, &schedule));
    let record = config.output.emit_trajectory || config.output.emit_svg;
    let run = propagate(&spec, &schedule, &initial_state(spec.n_sites()), window, dt, record)
        .map_err(compute_err)?;

    let distribution = cell_distribution(&run.final_state).map_err(compute_err)?;
    let prediction = predict_transport(&spec, gamma);
    let fidelity =
        prediction_fidelity(&run.final_state, &prediction.target_state).map_err(compute_err)?;
    println!(
        "evolved {} steps at dt = {:.6e} over [{}, {}]",
        run.n_steps, run.dt_eff, window.0, window.1
    );
    println!(
        "final mean cell {:.6}, variance {:.6}, fidelity {:.6} against the n={} target, \
         norm drift {:.2e}",
        distribution.mean(),
        distribution.variance(),
        fidelity,
        prediction.quantum_number,
        run.norm_drift
    );

    let Some(samples) = &run.trajectory else {
        return Ok(());
    };
    if config.output.emit_trajectory {
        let mut table = String::from("t");
        for j in 1..=spec.n_sites() {
            let _ = write!(table, ",p_{j}");
        }
        table.push_str(",norm\n");
        for sample in samples {
            let _ = write!(table, "{}", fmt_sig(sample.t));
            for p in &sample.probabilities {
                let _ = write!(table, ",{}", fmt_sig(*p));
            }
            let _ = writeln!(table, ",{}", fmt_sig(sample.norm));
        }
        write_file(out, "trajectory.csv", &table)?;
        println!("wrote trajectory.csv ({} samples) in {}", samples.len(), out.display());
    }
    if config.output.emit_svg {
        let series = (0..spec.n_sites())
            .map(|j| Series {
                points: samples.iter().map(|s| (s.t, s.probabilities[j])).collect(),
                color: PALETTE[j % PALETTE.len()],
                width: 1.5,
                label: None,
            })
            .collect();
        let chart = Chart {
            title: format!("site populations, gamma = {gamma}, delta = {}", spec.delta()),
            x_label: "t".to_string(),
            y_label: "site population".to_string(),
            series,
            dashed_verticals: vec![0.0],
        };
        write_file(out, "trajectory.svg", &chart.render())?;
        println!("wrote trajectory.svg in {}", out.display());
    }
    Ok(())
}

pub fn cmd_sweep(config: &RunConfig, out: &Path) -> Result<(), CliError> {
    let spec = config.lattice()?;
    let grid = config.sweep_grid()?;
    if grid.steps < 2 {
        return Err(CliError::Config("gamma_sweep.steps must be at least 2 for a sweep".into()));
    }
    if grid.min <= 0.0 {
        return Err(CliError::Config("gamma_sweep.min must be positive for a sweep".into()));
    }
    let sweep_config = SweepConfig {
        spec,
        template: config.template(),
        gamma_min: grid.min,
        gamma_max: grid.max,
        n_points: grid.steps,
        dt: config.integrator.dt,
        window: config.integrator.window,
    };
    let rows = run_sweep(&sweep_config).map_err(|e| match e {
        Error::BadSweepGrid => CliError::Config(e.to_string()),
        other => CliError::Compute(other.to_string()),
    })?;

    let mut table = String::from(
        "gamma,gamma_over_delta,mean_cell,variance,predicted_n,predicted_cell,fidelity,norm_drift\n",
    );
    for row in &rows {
        let _ = writeln!(
            table,
            "{},{},{},{},{},{},{},{}",
            fmt_sig(row.gamma),
            fmt_sig(row.gamma_over_delta),
            fmt_sig(row.mean_cell),
            fmt_sig(row.variance),
            row.predicted_n,
            row.predicted_cell,
            fmt_sig(row.fidelity),
            fmt_sig(row.norm_drift)
        );
    }
    write_file(out, "sweep.csv", &table)?;
    println!("wrote sweep.csv ({} points) in {}", rows.len(), out.display());

    for transition in detect_transitions(&rows) {
        println!(
            "transition across mean cell {:.1} near gamma = {:.4} (gamma/delta = {:.4})",
            transition.level, transition.gamma, transition.gamma_over_delta
        );
    }

    if config.output.emit_svg {
        write_file(out, "sweep.svg", &staircase_chart(config, &rows, grid.min, grid.max))?;
        println!("wrote sweep.svg in {}", out.display());
    }

    let failures: Vec<&SweepRow> = rows.iter().filter(|r| r.error.is_some()).collect();
    if !failures.is_empty() {
        for row in &failures {
            eprintln!(
                "sweep point gamma = {} failed: {}",
                row.gamma,
                row.error.as_deref().unwrap_or("unknown")
            );
        }
        return Err(CliError::Compute(format!(
            "{} of {} sweep points failed",
            failures.len(),
            rows.len()
        )));
    }
    Ok(())
}

fn staircase_chart(config: &RunConfig, rows: &[SweepRow], min: f64, max: f64) -> String {
    let measured: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.error.is_none())
        .map(|r| (r.gamma, r.mean_cell))
        .collect();
    let mut predicted: Vec<(f64, f64)> = Vec::new();
    for row in rows {
        let cell = row.predicted_cell as f64;
        if let Some(&(_, prev)) = predicted.last() {
            if prev != cell {
                predicted.push((row.gamma, prev));
            }
        }
        predicted.push((row.gamma, cell));
    }

    let mut boundaries = Vec::new();
    for k in 1usize.. {
        let boundary = config.delta * (((2 * k - 1) * (2 * k)) as f64).sqrt();
        if boundary > max {
            break;
        }
        if boundary >= min {
            boundaries.push(boundary);
        }
    }

    let chart = Chart {
        title: format!(
            "final mean cell vs peak coupling, {} sites, delta = {}",
            config.n_sites, config.delta
        ),
        x_label: "gamma".to_string(),
        y_label: "mean cell".to_string(),
        series: vec![
            Series {
                points: predicted,
                color: "#bbbbbb",
                width: 1.5,
                label: Some("predicted cell".to_string()),
            },
            Series {
                points: measured,
                color: "#3465a4",
                width: 2.0,
                label: Some("measured mean cell".to_string()),
            },
        ],
        dashed_verticals: boundaries,
    };
    chart.render()
}
