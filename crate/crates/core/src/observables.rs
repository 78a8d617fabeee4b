//! Population observables on evolved states: site probabilities, doubled-cell
//! distributions, and fidelity against a predicted target state.
//!
//! Cells pair consecutive sites: cell `k` holds sites `2k+1` and `2k+2` in
//! 1-based labels. The staircase observable is the mean cell index of the
//! final state; its variance distinguishes clean transport (variance near
//! zero) from the 50/50 split at an interval boundary (variance 1/4).

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Site occupation probabilities `|c_j|^2`.
pub fn site_probabilities(state: &[Complex64]) -> Vec<f64> {
    state.iter().map(|c| c.norm_sqr()).collect()
}

/// Occupation probabilities of the doubled cells.
#[derive(Debug, Clone, PartialEq)]
pub struct CellDistribution {
    /// `probabilities[k]` is the population of sites `2k+1` and `2k+2`.
    pub probabilities: Vec<f64>,
}

impl CellDistribution {
    pub fn n_cells(&self) -> usize {
        self.probabilities.len()
    }

    /// First moment of the cell index.
    pub fn mean(&self) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(k, p)| k as f64 * p)
            .sum()
    }

    /// Second central moment of the cell index.
    pub fn variance(&self) -> f64 {
        let mean = self.mean();
        let second: f64 = self
            .probabilities
            .iter()
            .enumerate()
            .map(|(k, p)| (k as f64) * (k as f64) * p)
            .sum();
        second - mean * mean
    }
}

/// Groups site probabilities into cells. The site count must be even and at
/// least two for the pairing to make sense.
pub fn cell_distribution_from_probabilities(probabilities: &[f64]) -> Result<CellDistribution> {
    let n = probabilities.len();
    if n < 2 || n % 2 != 0 {
        return Err(Error::BadSiteCount { n_sites: n });
    }
    let cells = probabilities
        .chunks_exact(2)
        .map(|pair| pair[0] + pair[1])
        .collect();
    Ok(CellDistribution { probabilities: cells })
}

/// Cell distribution of a state vector.
pub fn cell_distribution(state: &[Complex64]) -> Result<CellDistribution> {
    cell_distribution_from_probabilities(&site_probabilities(state))
}

/// Mean cell index of a state.
pub fn mean_cell(state: &[Complex64]) -> Result<f64> {
    Ok(cell_distribution(state)?.mean())
}

/// Variance of the cell index of a state.
pub fn cell_variance(state: &[Complex64]) -> Result<f64> {
    Ok(cell_distribution(state)?.variance())
}

/// Overlap magnitude `|<target|state>|` between a real predicted target and an
/// evolved state. Insensitive to the global phase of either argument; equals
/// one exactly when the state is the target up to a phase.
pub fn prediction_fidelity(state: &[Complex64], target: &[f64]) -> Result<f64> {
    if state.len() != target.len() {
        return Err(Error::DimensionMismatch { expected: target.len(), got: state.len() });
    }
    let mut dot = Complex64::new(0.0, 0.0);
    for (c, t) in state.iter().zip(target.iter()) {
        dot += t * c;
    }
    Ok(dot.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{initial_state, propagate};
    use crate::model::{LatticeSpec, PulseSchedule};
    use crate::spectrum::predict_transport;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn cells_group_adjacent_site_pairs() {
        let state = [
            c(0.5f64.sqrt(), 0.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            c(0.0, 0.3f64.sqrt()),
            c(0.0, 0.0),
            c(0.2f64.sqrt(), 0.0),
        ];
        let dist = cell_distribution(&state).unwrap();
        assert_eq!(dist.n_cells(), 3);
        assert!((dist.probabilities[0] - 0.5).abs() < 1e-15);
        assert!((dist.probabilities[1] - 0.3).abs() < 1e-15);
        assert!((dist.probabilities[2] - 0.2).abs() < 1e-15);
        assert!((dist.mean() - 0.7).abs() < 1e-15);
        assert!((dist.variance() - 0.61).abs() < 1e-15);
    }

    #[test]
    fn even_split_between_adjacent_cells_has_quarter_variance() {
        // Amplitudes (0.5, 0.5) square to exactly 0.5, so the moments are
        // exact binary values and the asserts can demand equality.
        let state = [c(0.5, 0.5), c(0.0, 0.0), c(0.5, -0.5), c(0.0, 0.0)];
        let dist = cell_distribution(&state).unwrap();
        assert_eq!(dist.probabilities, vec![0.5, 0.5]);
        assert_eq!(dist.mean(), 0.5);
        assert_eq!(dist.variance(), 0.25);
    }

    #[test]
    fn observables_ignore_a_global_phase() {
        let state = [c(0.6, 0.0), c(0.0, 0.48), c(0.4, 0.2), c(0.3, -0.3)];
        let phase = Complex64::new(0.0, 0.7).exp();
        let rotated: Vec<Complex64> = state.iter().map(|x| x * phase).collect();
        assert!((mean_cell(&state).unwrap() - mean_cell(&rotated).unwrap()).abs() < 1e-15);
        assert!(
            (cell_variance(&state).unwrap() - cell_variance(&rotated).unwrap()).abs() < 1e-15
        );
        let target = [0.5, 0.5, 0.5, 0.5];
        let f0 = prediction_fidelity(&state, &target).unwrap();
        let f1 = prediction_fidelity(&rotated, &target).unwrap();
        assert!((f0 - f1).abs() < 1e-12);
    }

    #[test]
    fn fidelity_is_one_for_the_target_up_to_phase_and_zero_when_orthogonal() {
        let theta = 0.3f64;
        let target = [theta.cos(), theta.sin()];
        let phase = Complex64::new(0.0, -1.1).exp();
        let state: Vec<Complex64> = target.iter().map(|&t| t * phase).collect();
        let f = prediction_fidelity(&state, &target).unwrap();
        assert!((f - 1.0).abs() < 1e-15);
        let orthogonal = [c(-theta.sin(), 0.0), c(theta.cos(), 0.0)];
        assert!(prediction_fidelity(&orthogonal, &target).unwrap() < 1e-15);
    }

    #[test]
    fn malformed_lengths_are_rejected() {
        let odd = [c(1.0, 0.0); 3];
        assert!(matches!(
            cell_distribution(&odd),
            Err(Error::BadSiteCount { n_sites: 3 })
        ));
        assert!(matches!(
            prediction_fidelity(&odd, &[1.0, 0.0]),
            Err(Error::DimensionMismatch { expected: 2, got: 3 })
        ));
    }

    #[test]
    fn adiabatic_crossing_lands_on_the_predicted_cell() {
        // Mid-plateau coupling, two cells over: the evolved mean cell must sit
        // within a tenth of a cell of the prediction and the population must
        // stay concentrated.
        let spec = LatticeSpec::new(10, 10.0).unwrap();
        let gamma = 20.0;
        let schedule = PulseSchedule::sigmoid_pair(gamma, 1.0).unwrap();
        let result = propagate(
            &spec,
            &schedule,
            &initial_state(10),
            (-25.0, 25.0),
            1e-3,
            false,
        )
        .unwrap();
        let prediction = predict_transport(&spec, gamma);
        assert_eq!(prediction.target_cell, 1);
        let mean = mean_cell(&result.final_state).unwrap();
        assert!((mean - 1.0).abs() <= 0.1, "mean cell {mean}");
        let var = cell_variance(&result.final_state).unwrap();
        assert!(var <= 0.15, "variance {var}");
        let fidelity = prediction_fidelity(&result.final_state, &prediction.target_state).unwrap();
        assert!(fidelity >= 0.99, "fidelity {fidelity}");
    }
}
