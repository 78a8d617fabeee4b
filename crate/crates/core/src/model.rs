//! Lattice geometry, pulse shapes and Hamiltonian assembly.
//!
//! The system is a single particle on a finite superlattice of `n_sites = M + 1`
//! sites (`M` odd). A static field tilts the ladder so that site `j` (0-based)
//! sits at energy `(M/2 - j) * delta`, and two interleaved hopping amplitudes
//! `alpha` and `beta` couple neighbours: the off-diagonal of the Hamiltonian
//! alternates `alpha, beta, alpha, ...` starting from the (1,2) bond. Everything
//! uses hbar = 1, so energies are angular frequencies.

use crate::error::{Error, Result};

/// Static description of the tilted superlattice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    n_sites: usize,
    delta: f64,
}

impl LatticeSpec {
    /// Validates the lattice geometry.
    ///
    /// `n_sites` must be even (so the chain decomposes into two-site cells) and
    /// at least 2. `delta` must be finite and non-negative; a zero spacing is
    /// allowed for dynamics-only fixtures, while the transport predictions all
    /// require `delta > 0`.
    pub fn new(n_sites: usize, delta: f64) -> Result<Self> {
        if n_sites < 2 || n_sites % 2 != 0 {
            return Err(Error::BadSiteCount { n_sites });
        }
        if !delta.is_finite() || delta < 0.0 {
            return Err(Error::BadLevelSpacing { delta });
        }
        Ok(Self { n_sites, delta })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// Number of doubled cells; cell `k` holds sites `2k+1` and `2k+2` (1-based).
    pub fn n_cells(&self) -> usize {
        self.n_sites / 2
    }

    /// On-site energy of site `j` (0-based): `(M/2 - j) * delta` with `M = n_sites - 1`.
    ///
    /// `M` is odd, so `M/2` is a half-integer and the diagonal is exactly
    /// antisymmetric about the chain centre.
    pub fn site_energy(&self, j: usize) -> f64 {
        debug_assert!(j < self.n_sites);
        let m_half = (self.n_sites - 1) as f64 / 2.0;
        (m_half - j as f64) * self.delta
    }

    /// All on-site energies in site order.
    pub fn site_energies(&self) -> Vec<f64> {
        (0..self.n_sites).map(|j| self.site_energy(j)).collect()
    }
}

/// Time dependence of the two hopping amplitudes.
///
/// The transport protocol switches `alpha` on while `beta` switches off through
/// a pair of counter-sweeping sigmoids that share one peak amplitude `gamma`:
///
/// ```text
/// alpha(t) = gamma / sqrt(1 + exp(-t/tau))
/// beta(t)  = gamma / sqrt(1 + exp(+t/tau))
/// ```
///
/// so that `alpha(t)^2 + beta(t)^2 = gamma^2` at every instant and
/// `beta(t) = alpha(-t)`. The truncated variant multiplies both pulses by a
/// unit box of total length `duration` centred on `t = 0`; the constant variant
/// holds fixed amplitudes and exists for integrator tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PulseSchedule {
    SigmoidPair { gamma: f64, tau: f64 },
    TruncatedSigmoidPair { gamma: f64, tau: f64, duration: f64 },
    Constant { alpha: f64, beta: f64 },
}

impl PulseSchedule {
    pub fn sigmoid_pair(gamma: f64, tau: f64) -> Result<Self> {
        let s = Self::SigmoidPair { gamma, tau };
        s.validate()?;
        Ok(s)
    }

    pub fn truncated_sigmoid_pair(gamma: f64, tau: f64, duration: f64) -> Result<Self> {
        let s = Self::TruncatedSigmoidPair { gamma, tau, duration };
        s.validate()?;
        Ok(s)
    }

    pub fn constant(alpha: f64, beta: f64) -> Result<Self> {
        let s = Self::Constant { alpha, beta };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        fn positive(name: &'static str, value: f64) -> Result<()> {
            if !value.is_finite() || value <= 0.0 {
                Err(Error::BadPulseParameter { name, value })
            } else {
                Ok(())
            }
        }
        match *self {
            Self::SigmoidPair { gamma, tau } => {
                positive("gamma", gamma)?;
                positive("tau", tau)
            }
            Self::TruncatedSigmoidPair { gamma, tau, duration } => {
                positive("gamma", gamma)?;
                positive("tau", tau)?;
                positive("duration", duration)
            }
            Self::Constant { alpha, beta } => {
                if !alpha.is_finite() || !beta.is_finite() || alpha < 0.0 || beta < 0.0 {
                    Err(Error::BadHopping { alpha, beta })
                } else {
                    Ok(())
                }
            }
        }
    }

    /// Amplitude on the `alpha` bonds (1-2, 3-4, ...) at time `t`.
    pub fn alpha_at(&self, t: f64) -> f64 {
        match *self {
            Self::SigmoidPair { gamma, tau } => rising_sigmoid(gamma, t / tau),
            Self::TruncatedSigmoidPair { gamma, tau, duration } => {
                if unit_box(t, duration) {
                    rising_sigmoid(gamma, t / tau)
                } else {
                    0.0
                }
            }
            Self::Constant { alpha, .. } => alpha,
        }
    }

    /// Amplitude on the `beta` bonds (2-3, 4-5, ...) at time `t`.
    pub fn beta_at(&self, t: f64) -> f64 {
        match *self {
            Self::SigmoidPair { gamma, tau } => rising_sigmoid(gamma, -t / tau),
            Self::TruncatedSigmoidPair { gamma, tau, duration } => {
                if unit_box(t, duration) {
                    rising_sigmoid(gamma, -t / tau)
                } else {
                    0.0
                }
            }
            Self::Constant { beta, .. } => beta,
        }
    }

    /// Largest value `alpha_at` can take over all times.
    pub fn peak_alpha(&self) -> f64 {
        match *self {
            Self::SigmoidPair { gamma, .. } | Self::TruncatedSigmoidPair { gamma, .. } => gamma,
            Self::Constant { alpha, .. } => alpha,
        }
    }

    /// Largest value `beta_at` can take over all times.
    pub fn peak_beta(&self) -> f64 {
        match *self {
            Self::SigmoidPair { gamma, .. } | Self::TruncatedSigmoidPair { gamma, .. } => gamma,
            Self::Constant { beta, .. } => beta,
        }
    }
}

/// `gamma / sqrt(1 + exp(-x))`, written so that extreme arguments saturate
/// cleanly at `0` and `gamma` instead of producing NaN.
fn rising_sigmoid(gamma: f64, x: f64) -> f64 {
    gamma / (1.0 + (-x).exp()).sqrt()
}

/// True inside the centred box of total length `duration`, edges included.
fn unit_box(t: f64, duration: f64) -> bool {
    t.abs() <= duration / 2.0
}

/// Real symmetric tridiagonal Hamiltonian in the site basis.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalHamiltonian {
    /// On-site energies, length `n`.
    pub diag: Vec<f64>,
    /// Hopping amplitudes between neighbours, length `n - 1`.
    pub offdiag: Vec<f64>,
}

impl TridiagonalHamiltonian {
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// Matrix-vector product, used for residual checks.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let n = self.dim();
        assert_eq!(v.len(), n, "vector length must match the Hamiltonian dimension");
        let mut out = vec![0.0; n];
        for j in 0..n {
            let mut acc = self.diag[j] * v[j];
            if j > 0 {
                acc += self.offdiag[j - 1] * v[j - 1];
            }
            if j + 1 < n {
                acc += self.offdiag[j] * v[j + 1];
            }
            out[j] = acc;
        }
        out
    }

    /// Row-sum (infinity) norm; also a Gershgorin bound on the spectral radius.
    pub fn inf_norm(&self) -> f64 {
        let n = self.dim();
        let mut best: f64 = 0.0;
        for j in 0..n {
            let mut row = self.diag[j].abs();
            if j > 0 {
                row += self.offdiag[j - 1].abs();
            }
            if j + 1 < n {
                row += self.offdiag[j].abs();
            }
            best = best.max(row);
        }
        best
    }
}

/// Assembles the ladder Hamiltonian for fixed hopping amplitudes.
///
/// The diagonal descends in steps of `delta` and sums to zero exactly; the
/// off-diagonal alternates `alpha, beta, alpha, ...` starting from the (1,2)
/// bond.
pub fn build_hamiltonian(spec: &LatticeSpec, alpha: f64, beta: f64) -> Result<TridiagonalHamiltonian> {
    if !alpha.is_finite() || !beta.is_finite() || alpha < 0.0 || beta < 0.0 {
        return Err(Error::BadHopping { alpha, beta });
    }
    let n = spec.n_sites();
    let diag = spec.site_energies();
    let offdiag = (0..n - 1)
        .map(|bond| if bond % 2 == 0 { alpha } else { beta })
        .collect();
    Ok(TridiagonalHamiltonian { diag, offdiag })
}

/// Hamiltonian snapshot at time `t` under the given pulse schedule.
pub fn hamiltonian_at(spec: &LatticeSpec, schedule: &PulseSchedule, t: f64) -> Result<TridiagonalHamiltonian> {
    schedule.validate()?;
    build_hamiltonian(spec, schedule.alpha_at(t), schedule.beta_at(t))
}
