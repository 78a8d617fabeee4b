//! Coupling-strength sweeps: evolve the same pulse shape across a grid of
//! peak amplitudes and extract the transport staircase.
//!
//! Each grid point is independent, so the sweep is data-parallel. With the
//! `parallel` feature (on by default) points are distributed over a rayon
//! pool; without it they run sequentially. Both paths evaluate points through
//! the same function in the same order, so results are identical bit for bit.

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::dynamics::{default_dt, default_time_window, initial_state, propagate};
use crate::error::{Error, Result};
use crate::model::{LatticeSpec, PulseSchedule};
use crate::observables::{cell_distribution, prediction_fidelity};
use crate::spectrum::{eigen_decompose, predict_transport};

/// Pulse shape with the peak amplitude left open, filled in per sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseTemplate {
    /// Complementary sigmoid crossing with switching time `tau`.
    Sigmoid { tau: f64 },
    /// The same crossing cut to a box of total length `duration`.
    TruncatedSigmoid { tau: f64, duration: f64 },
}

impl PulseTemplate {
    pub fn at_gamma(&self, gamma: f64) -> Result<PulseSchedule> {
        match *self {
            Self::Sigmoid { tau } => PulseSchedule::sigmoid_pair(gamma, tau),
            Self::TruncatedSigmoid { tau, duration } => {
                PulseSchedule::truncated_sigmoid_pair(gamma, tau, duration)
            }
        }
    }
}

/// Full description of a staircase sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub spec: LatticeSpec,
    pub template: PulseTemplate,
    /// Inclusive peak-amplitude range, linearly gridded.
    pub gamma_min: f64,
    pub gamma_max: f64,
    pub n_points: usize,
    /// Integrator step; `None` picks a conservative default per point.
    pub dt: Option<f64>,
    /// Integration window; `None` uses the schedule's natural window.
    pub window: Option<(f64, f64)>,
}

/// One evaluated sweep point.
///
/// When the evolution at a point fails, `error` holds the failure text and the
/// measured fields are NaN; the prediction fields stay valid because they do
/// not depend on the evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub gamma: f64,
    pub gamma_over_delta: f64,
    pub mean_cell: f64,
    pub variance: f64,
    pub predicted_n: usize,
    pub predicted_cell: usize,
    pub fidelity: f64,
    pub norm_drift: f64,
    pub error: Option<String>,
}

/// Evaluates one point: builds the schedule at `gamma`, evolves the particle
/// from site 1 across the window, and measures the final state against the
/// interval-rule prediction.
pub fn evaluate_sweep_point(
    spec: &LatticeSpec,
    template: PulseTemplate,
    gamma: f64,
    dt: Option<f64>,
    window: Option<(f64, f64)>,
) -> SweepRow {
    let prediction = predict_transport(spec, gamma);
    let mut row = SweepRow {
        gamma,
        gamma_over_delta: gamma / spec.delta(),
        mean_cell: f64::NAN,
        variance: f64::NAN,
        predicted_n: prediction.quantum_number,
        predicted_cell: prediction.target_cell,
        fidelity: f64::NAN,
        norm_drift: f64::NAN,
        error: None,
    };
    let outcome = (|| -> Result<(f64, f64, f64, f64)> {
        let schedule = template.at_gamma(gamma)?;
        let window = window
            .or_else(|| default_time_window(&schedule))
            .ok_or(Error::BadWindow { t_start: f64::NAN, t_end: f64::NAN })?;
        let dt = dt.unwrap_or_else(|| default_dt(spec, &schedule));
        let result = propagate(spec, &schedule, &initial_state(spec.n_sites()), window, dt, false)?;
        let cells = cell_distribution(&result.final_state)?;
        let fidelity = prediction_fidelity(&result.final_state, &prediction.target_state)?;
        Ok((cells.mean(), cells.variance(), fidelity, result.norm_drift))
    })();
    match outcome {
        Ok((mean, variance, fidelity, drift)) => {
            row.mean_cell = mean;
            row.variance = variance;
            row.fidelity = fidelity;
            row.norm_drift = drift;
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Runs the whole sweep. Point failures are recorded in their rows rather
/// than aborting the grid; only a malformed grid is an error.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    let gammas = gamma_grid(config)?;
    let eval = |&gamma: &f64| {
        evaluate_sweep_point(&config.spec, config.template, gamma, config.dt, config.window)
    };

    #[cfg(feature = "parallel")]
    let rows: Vec<SweepRow> = gammas.par_iter().map(eval).collect();
    #[cfg(not(feature = "parallel"))]
    let rows: Vec<SweepRow> = gammas.iter().map(eval).collect();

    Ok(rows)
}

fn gamma_grid(config: &SweepConfig) -> Result<Vec<f64>> {
    let (lo, hi, n) = (config.gamma_min, config.gamma_max, config.n_points);
    if !lo.is_finite() || !hi.is_finite() || lo <= 0.0 || hi < lo || n == 0 {
        return Err(Error::BadSweepGrid);
    }
    if n == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect())
}

/// An upward crossing of a half-integer mean-cell level.
#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    /// The half-integer level crossed, `k - 0.5` between cells `k-1` and `k`.
    pub level: f64,
    /// Peak amplitude at the crossing, linearly interpolated between rows.
    pub gamma: f64,
    pub gamma_over_delta: f64,
}

/// Finds every upward crossing of a half-integer mean-cell level between
/// consecutive valid rows, in sweep order. Rows carrying errors are skipped.
pub fn detect_transitions(rows: &[SweepRow]) -> Vec<Transition> {
    let valid: Vec<&SweepRow> = rows.iter().filter(|r| r.error.is_none()).collect();
    let mut out = Vec::new();
    for pair in valid.windows(2) {
        let (r0, r1) = (pair[0], pair[1]);
        if !(r1.mean_cell > r0.mean_cell) {
            continue;
        }
        // Half-integer levels inside (mean0, mean1].
        let mut k = r0.mean_cell.floor() as i64;
        loop {
            let level = k as f64 + 0.5;
            if level <= r0.mean_cell {
                k += 1;
                continue;
            }
            if level > r1.mean_cell {
                break;
            }
            let frac = (level - r0.mean_cell) / (r1.mean_cell - r0.mean_cell);
            let gamma = r0.gamma + frac * (r1.gamma - r0.gamma);
            let delta_ratio =
                r0.gamma_over_delta + frac * (r1.gamma_over_delta - r0.gamma_over_delta);
            out.push(Transition { level, gamma, gamma_over_delta: delta_ratio });
            k += 1;
        }
    }
    out
}

/// Instantaneous spectral gap around one level across the pulse window.
#[derive(Debug, Clone, PartialEq)]
pub struct GapScan {
    /// `(t, gap)` samples; the gap is the distance from the tracked level to
    /// its nearest neighbour in energy.
    pub samples: Vec<(f64, f64)>,
    pub min_gap: f64,
    pub min_gap_time: f64,
}

/// Scans the adjacent-level gap of the level with descending rank `rank`
/// (1-based) over `n_samples` evenly spaced times. The minimum gap controls
/// how slow the crossing must be to stay adiabatic.
pub fn gap_scan(
    spec: &LatticeSpec,
    schedule: &PulseSchedule,
    rank: usize,
    window: (f64, f64),
    n_samples: usize,
) -> Result<GapScan> {
    assert!(rank >= 1 && rank <= spec.n_sites(), "rank out of range");
    assert!(n_samples >= 2, "need at least two samples");
    let (t_start, t_end) = window;
    if !t_start.is_finite() || !t_end.is_finite() || t_end <= t_start {
        return Err(Error::BadWindow { t_start, t_end });
    }

    let mut samples = Vec::with_capacity(n_samples);
    let mut min_gap = f64::INFINITY;
    let mut min_gap_time = t_start;
    for i in 0..n_samples {
        let t = t_start + (t_end - t_start) * i as f64 / (n_samples - 1) as f64;
        let h = crate::model::hamiltonian_at(spec, schedule, t)?;
        let dec = eigen_decompose(&h)?;
        let idx = rank - 1;
        let mut gap = f64::INFINITY;
        if idx > 0 {
            gap = gap.min(dec.eigenvalues[idx - 1] - dec.eigenvalues[idx]);
        }
        if idx + 1 < dec.dim() {
            gap = gap.min(dec.eigenvalues[idx] - dec.eigenvalues[idx + 1]);
        }
        samples.push((t, gap));
        if gap < min_gap {
            min_gap = gap;
            min_gap_time = t;
        }
    }
    Ok(GapScan { samples, min_gap, min_gap_time })
}
