//! JSON run configuration shared by every subcommand.
//!
//! One file describes one reproducible run: the lattice, the pulse shape,
//! either a single peak coupling or a coupling grid, integrator overrides,
//! and output options. Unknown keys are rejected so that a typo cannot
//! silently fall back to a default.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Deserialize;
use wsladder::{LatticeSpec, PulseTemplate};

use crate::CliError;

fn default_true() -> bool {
    true
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub n_sites: usize,
    pub delta: f64,
    /// Switch time of the sigmoid pulse pair, in the inverse units of delta.
    pub tau: f64,
    pub pulse: PulseConfig,
    /// Single peak coupling; exactly one of `gamma` and `gamma_sweep` is set.
    #[serde(default)]
    pub gamma: Option<f64>,
    #[serde(default)]
    pub gamma_sweep: Option<GammaSweepConfig>,
    #[serde(default)]
    pub integrator: IntegratorConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PulseConfig {
    pub kind: PulseKind,
    /// Total duration of the truncated pulse pair, in the same time units as
    /// `tau`. Required by `truncated_sigmoid_pair`, rejected otherwise.
    #[serde(rename = "T", default)]
    pub duration: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PulseKind {
    SigmoidPair,
    TruncatedSigmoidPair,
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaSweepConfig {
    pub min: f64,
    pub max: f64,
    pub steps: usize,
}

#[derive(Debug, Clone, Copy, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorConfig {
    /// Integrator step; omitted picks a conservative default.
    #[serde(default)]
    pub dt: Option<f64>,
    /// Integration window `[t_start, t_end]`; omitted uses the pulse's
    /// natural window.
    #[serde(default)]
    pub window: Option<(f64, f64)>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    /// Output directory; the `--out` flag overrides it, `out` is the fallback.
    #[serde(default)]
    pub dir: Option<PathBuf>,
    /// Whether `evolve` writes the sampled trajectory table.
    #[serde(default = "default_true")]
    pub emit_trajectory: bool,
    /// Whether `evolve` and `sweep` also render an SVG chart.
    #[serde(default)]
    pub emit_svg: bool,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: None, emit_trajectory: true, emit_svg: false }
    }
}

fn config_err(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path)
            .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
        let config: RunConfig = serde_json::from_str(&text)
            .map_err(|e| config_err(format!("{}: {e}", path.display())))?;
        config.validate()?;
        Ok(config)
    }

    /// Structural checks shared by every command. Command-specific
    /// requirements (scalar coupling vs grid) are enforced at dispatch.
    fn validate(&self) -> Result<(), CliError> {
        self.lattice()?;
        if !(self.tau.is_finite() && self.tau > 0.0) {
            return Err(config_err(format!("tau must be finite and positive, got {}", self.tau)));
        }
        match (self.pulse.kind, self.pulse.duration) {
            (PulseKind::SigmoidPair, Some(_)) => {
                return Err(config_err("pulse.T applies only to truncated_sigmoid_pair"));
            }
            (PulseKind::TruncatedSigmoidPair, None) => {
                return Err(config_err("truncated_sigmoid_pair requires pulse.T"));
            }
            (PulseKind::TruncatedSigmoidPair, Some(t)) if !(t.is_finite() && t > 0.0) => {
                return Err(config_err(format!("pulse.T must be finite and positive, got {t}")));
            }
            _ => {}
        }
        match (self.gamma, &self.gamma_sweep) {
            (Some(_), Some(_)) => {
                return Err(config_err("set either gamma or gamma_sweep, not both"));
            }
            (None, None) => return Err(config_err("one of gamma or gamma_sweep is required")),
            (Some(g), None) if !(g.is_finite() && g > 0.0) => {
                return Err(config_err(format!("gamma must be finite and positive, got {g}")));
            }
            (None, Some(s)) => {
                if s.steps == 0 {
                    return Err(config_err("gamma_sweep.steps must be at least 1"));
                }
                if !s.min.is_finite() || !s.max.is_finite() || s.min < 0.0 || s.max < s.min {
                    return Err(config_err(format!(
                        "gamma_sweep range [{}, {}] must be finite, non-negative and ascending",
                        s.min, s.max
                    )));
                }
            }
            _ => {}
        }
        if let Some(dt) = self.integrator.dt {
            if !(dt.is_finite() && dt > 0.0) {
                return Err(config_err(format!(
                    "integrator.dt must be finite and positive, got {dt}"
                )));
            }
        }
        if let Some((t_start, t_end)) = self.integrator.window {
            if !t_start.is_finite() || !t_end.is_finite() || t_end <= t_start {
                return Err(config_err(format!(
                    "integrator.window [{t_start}, {t_end}] must be finite and ascending"
                )));
            }
        }
        Ok(())
    }

    pub fn lattice(&self) -> Result<LatticeSpec, CliError> {
        LatticeSpec::new(self.n_sites, self.delta).map_err(|e| config_err(e.to_string()))
    }

    pub fn template(&self) -> PulseTemplate {
        match self.pulse.kind {
            PulseKind::SigmoidPair => PulseTemplate::Sigmoid { tau: self.tau },
            PulseKind::TruncatedSigmoidPair => PulseTemplate::TruncatedSigmoid {
                tau: self.tau,
                duration: self.pulse.duration.expect("checked during validation"),
            },
        }
    }

    pub fn scalar_gamma(&self) -> Result<f64, CliError> {
        self.gamma.ok_or_else(|| config_err("this command needs a scalar gamma"))
    }

    pub fn sweep_grid(&self) -> Result<GammaSweepConfig, CliError> {
        self.gamma_sweep.ok_or_else(|| config_err("this command needs gamma_sweep"))
    }

    /// Coupling values for tabulating commands: the grid when present,
    /// otherwise the single scalar.
    pub fn gamma_values(&self) -> Vec<f64> {
        match (self.gamma_sweep, self.gamma) {
            (Some(s), _) => {
                if s.steps == 1 {
                    vec![s.min]
                } else {
                    (0..s.steps)
                        .map(|i| s.min + (s.max - s.min) * i as f64 / (s.steps - 1) as f64)
                        .collect()
                }
            }
            (None, Some(g)) => vec![g],
            (None, None) => unreachable!("validation requires one form of gamma"),
        }
    }

    pub fn out_dir(&self, cli_override: Option<&Path>) -> PathBuf {
        cli_override
            .map(Path::to_path_buf)
            .or_else(|| self.output.dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"))
    }
}
