//! Independent reference implementations used to cross-check the fast paths.
//!
//! Everything here trades speed for simplicity and shares no code with the
//! solvers it validates: a cyclic Jacobi eigensolver on dense matrices, a
//! propagator that applies the exact exponential of the midpoint Hamiltonian
//! on every step, and an eigenvalue counter built on the characteristic
//! polynomial recurrence instead of LDL^T pivots.

use num_complex::Complex64;

use crate::dynamics::time_grid;
use crate::error::{Error, Result};
use crate::model::{build_hamiltonian, LatticeSpec, PulseSchedule, TridiagonalHamiltonian};
use crate::spectrum::SpectralDecomposition;

/// Row-major dense symmetric matrix, sized for cross-checks rather than speed.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![0.0; n * n] }
    }

    pub fn from_tridiagonal(h: &TridiagonalHamiltonian) -> Self {
        let n = h.dim();
        let mut m = Self::zeros(n);
        for j in 0..n {
            m.set(j, j, h.diag[j]);
        }
        for j in 0..n.saturating_sub(1) {
            m.set(j, j + 1, h.offdiag[j]);
            m.set(j + 1, j, h.offdiag[j]);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: f64) {
        self.data[i * self.n + j] = value;
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

const JACOBI_SWEEP_LIMIT: usize = 60;

/// Full eigendecomposition by cyclic Jacobi rotations.
///
/// Rejects matrices that are not symmetric to within rounding of their norm.
/// Rotations sweep the strict upper triangle until the off-diagonal Frobenius
/// mass falls below `1e-13` of the matrix norm; convergence is quadratic, so
/// the sweep limit is generous.
pub fn jacobi_eigen(m: &DenseMatrix) -> Result<SpectralDecomposition> {
    let n = m.dim();
    let fro = m.frobenius_norm();
    for i in 0..n {
        for j in i + 1..n {
            let asymmetry = (m.get(i, j) - m.get(j, i)).abs();
            if asymmetry > 1e-12 * (1.0 + fro) {
                return Err(Error::NotSymmetric { row: i, col: j, asymmetry });
            }
        }
    }

    let mut a = m.clone();
    // Symmetrize exactly so the iteration sees one consistent value per pair.
    for i in 0..n {
        for j in i + 1..n {
            let avg = 0.5 * (a.get(i, j) + a.get(j, i));
            a.set(i, j, avg);
            a.set(j, i, avg);
        }
    }
    let mut v = DenseMatrix::zeros(n);
    for i in 0..n {
        v.set(i, i, 1.0);
    }

    let tol = 1e-13 * fro;
    let mut converged = false;
    for _sweep in 0..JACOBI_SWEEP_LIMIT {
        if off_diagonal_norm(&a) <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&a) > tol {
        return Err(Error::JacobiNoConvergence { limit: JACOBI_SWEEP_LIMIT });
    }

    let mut pairs: Vec<(f64, Vec<f64>)> = (0..n)
        .map(|i| {
            let mut col: Vec<f64> = (0..n).map(|k| v.get(k, i)).collect();
            fix_sign(&mut col);
            (a.get(i, i), col)
        })
        .collect();
    pairs.sort_by(|x, y| y.0.partial_cmp(&x.0).expect("eigenvalues are finite"));
    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

fn off_diagonal_norm(a: &DenseMatrix) -> f64 {
    let n = a.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a.get(i, j) * a.get(i, j);
            }
        }
    }
    acc.sqrt()
}

/// One Jacobi rotation zeroing `a[p][q]`, accumulated into `v`.
fn rotate(a: &mut DenseMatrix, v: &mut DenseMatrix, p: usize, q: usize) {
    let apq = a.get(p, q);
    if apq == 0.0 {
        return;
    }
    let theta = (a.get(q, q) - a.get(p, p)) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let n = a.dim();
    for k in 0..n {
        let akp = a.get(k, p);
        let akq = a.get(k, q);
        a.set(k, p, c * akp - s * akq);
        a.set(k, q, s * akp + c * akq);
    }
    for k in 0..n {
        let apk = a.get(p, k);
        let aqk = a.get(q, k);
        a.set(p, k, c * apk - s * aqk);
        a.set(q, k, s * apk + c * aqk);
    }
    for k in 0..n {
        let vkp = v.get(k, p);
        let vkq = v.get(k, q);
        v.set(k, p, c * vkp - s * vkq);
        v.set(k, q, s * vkp + c * vkq);
    }
}

fn fix_sign(v: &mut [f64]) {
    let mut idx = 0;
    let mut best = 0.0;
    for (i, &x) in v.iter().enumerate() {
        if x.abs() > best {
            best = x.abs();
            idx = i;
        }
    }
    if v[idx] < 0.0 {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
}

/// Reference propagator: applies the exact exponential of the midpoint
/// Hamiltonian on every step of the same grid the production integrator uses.
///
/// Each step eigendecomposes `H(t_mid)` with [`jacobi_eigen`] and applies
/// `exp(-i dt lambda)` in the eigenbasis. The only surviving error is the
/// midpoint sampling of the time dependence, which the production integrator
/// shares, so the difference between the two isolates the Cayley-transform
/// defect.
pub fn expm_propagate(
    spec: &LatticeSpec,
    schedule: &PulseSchedule,
    initial: &[Complex64],
    window: (f64, f64),
    dt: f64,
) -> Result<Vec<Complex64>> {
    schedule.validate()?;
    if initial.len() != spec.n_sites() {
        return Err(Error::DimensionMismatch { expected: spec.n_sites(), got: initial.len() });
    }
    let n = spec.n_sites();
    let (n_steps, dt_eff) = time_grid(window, dt)?;

    let mut state = initial.to_vec();
    let mut in_basis = vec![Complex64::new(0.0, 0.0); n];
    for k in 0..n_steps {
        let t_mid = window.0 + (k as f64 + 0.5) * dt_eff;
        let h = build_hamiltonian(spec, schedule.alpha_at(t_mid), schedule.beta_at(t_mid))?;
        let dec = jacobi_eigen(&DenseMatrix::from_tridiagonal(&h))?;
        for (i, vec_i) in dec.eigenvectors.iter().enumerate() {
            let mut dot = Complex64::new(0.0, 0.0);
            for (vj, sj) in vec_i.iter().zip(state.iter()) {
                dot += vj * sj;
            }
            let phase = Complex64::new(0.0, -dt_eff * dec.eigenvalues[i]).exp();
            in_basis[i] = dot * phase;
        }
        for j in 0..n {
            let mut acc = Complex64::new(0.0, 0.0);
            for (i, vec_i) in dec.eigenvectors.iter().enumerate() {
                acc += vec_i[j] * in_basis[i];
            }
            state[j] = acc;
        }
    }
    Ok(state)
}

/// Counts eigenvalues below `x` through the characteristic polynomial
/// recurrence `p_k = (d_k - x) p_{k-1} - e_{k-1}^2 p_{k-2}`.
///
/// The count is the number of sign changes along the sequence, a zero taking
/// the sign opposite its predecessor. The pair `(p_k, p_{k-1})` is rescaled to
/// unit magnitude before each multiply whenever it leaves `(1e-100, 1e100)`,
/// so the recurrence neither overflows nor denormalizes for entries up to
/// about `1e150`; rescaling by a positive factor cannot change a sign. When
/// `x` is exactly an eigenvalue the count includes it.
pub fn charpoly_eigenvalue_count(h: &TridiagonalHamiltonian, x: f64) -> usize {
    let n = h.dim();
    let mut count = 0;
    let mut prev_sign: i8 = 1;
    let mut p_prev = 1.0f64;
    let mut p = match n {
        0 => return 0,
        _ => h.diag[0] - x,
    };
    let record = |value: f64, prev_sign: &mut i8, count: &mut usize| {
        let sign = if value > 0.0 {
            1
        } else if value < 0.0 {
            -1
        } else {
            -*prev_sign
        };
        if sign != *prev_sign {
            *count += 1;
        }
        *prev_sign = sign;
    };
    record(p, &mut prev_sign, &mut count);

    for k in 1..n {
        let magnitude = p.abs().max(p_prev.abs());
        if magnitude > 1e100 || (magnitude > 0.0 && magnitude < 1e-100) {
            p /= magnitude;
            p_prev /= magnitude;
        }
        let e = h.offdiag[k - 1];
        let next = (h.diag[k] - x) * p - e * e * p_prev;
        p_prev = p;
        p = next;
        record(p, &mut prev_sign, &mut count);
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{initial_state, propagate};
    use crate::spectrum::{eigen_decompose, eigenvalue_count_below};

    fn ladder(n: usize, delta: f64, alpha: f64, beta: f64) -> TridiagonalHamiltonian {
        let spec = LatticeSpec::new(n, delta).unwrap();
        build_hamiltonian(&spec, alpha, beta).unwrap()
    }

    #[test]
    fn jacobi_solves_a_two_level_system_exactly() {
        let mut m = DenseMatrix::zeros(2);
        m.set(0, 0, 1.0);
        m.set(1, 1, 1.0);
        m.set(0, 1, 2.0);
        m.set(1, 0, 2.0);
        let dec = jacobi_eigen(&m).unwrap();
        assert!((dec.eigenvalues[0] - 3.0).abs() < 1e-14);
        assert!((dec.eigenvalues[1] + 1.0).abs() < 1e-14);
        let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
        let overlap: f64 = dec.eigenvectors[0]
            .iter()
            .zip([inv_sqrt2, inv_sqrt2].iter())
            .map(|(a, b)| a * b)
            .sum();
        assert!((overlap.abs() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn jacobi_rejects_asymmetric_input() {
        let mut m = DenseMatrix::zeros(3);
        m.set(0, 1, 1.0);
        m.set(1, 0, 1.5);
        match jacobi_eigen(&m).unwrap_err() {
            Error::NotSymmetric { row: 0, col: 1, asymmetry } => {
                assert!((asymmetry - 0.5).abs() < 1e-15);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn jacobi_agrees_with_the_bisection_solver_on_the_ladder() {
        let h = ladder(10, 2.0, 1.1, 0.6);
        let fast = eigen_decompose(&h).unwrap();
        let slow = jacobi_eigen(&DenseMatrix::from_tridiagonal(&h)).unwrap();
        let scale = h.inf_norm();
        for i in 0..10 {
            assert!(
                (fast.eigenvalues[i] - slow.eigenvalues[i]).abs() <= 1e-12 * scale,
                "eigenvalue {i}"
            );
            let dot: f64 = fast.eigenvectors[i]
                .iter()
                .zip(slow.eigenvectors[i].iter())
                .map(|(a, b)| a * b)
                .sum();
            assert!(dot.abs() >= 1.0 - 1e-8, "overlap {i} = {dot}");
        }
    }

    #[test]
    fn dense_embedding_preserves_the_tridiagonal_entries() {
        let h = ladder(6, 1.5, 0.4, 0.9);
        let m = DenseMatrix::from_tridiagonal(&h);
        assert_eq!(m.get(0, 0), h.diag[0]);
        assert_eq!(m.get(2, 3), h.offdiag[2]);
        assert_eq!(m.get(3, 2), h.offdiag[2]);
        assert_eq!(m.get(0, 2), 0.0);
        assert_eq!(m.get(5, 5), h.diag[5]);
    }

    #[test]
    fn exponential_propagator_reproduces_rabi_rotation_to_rounding() {
        // For a constant Hamiltonian the stepwise exponential is the exact
        // evolution, so the error floor is pure rounding accumulation.
        let spec = LatticeSpec::new(2, 0.0).unwrap();
        let schedule = PulseSchedule::constant(0.7, 0.0).unwrap();
        let t_final = 1.3;
        let state = expm_propagate(&spec, &schedule, &initial_state(2), (0.0, t_final), 1e-3)
            .unwrap();
        let angle = 0.7 * t_final;
        // 1300 exact steps still accumulate rounding, a few ulps per step.
        assert!((state[0].re - angle.cos()).abs() < 1e-11);
        assert!((state[0].im).abs() < 1e-11);
        assert!((state[1].im + angle.sin()).abs() < 1e-11);
        let norm: f64 = state.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() < 1e-12);
    }

    #[test]
    fn integrator_tracks_the_exponential_reference_at_moderate_steps() {
        // Both schemes sample the midpoint Hamiltonian, so their difference is
        // the Cayley phase defect, about (dt L)^3/12 per step at energy L.
        // Here that accumulates to roughly 2e-3; quartering dt must cut it by
        // about sixteen.
        let spec = LatticeSpec::new(4, 1.0).unwrap();
        let schedule = PulseSchedule::sigmoid_pair(1.0, 1.0).unwrap();
        let window = (-10.0, 10.0);
        let psi0 = initial_state(4);
        let diff_at = |dt: f64| {
            let reference = expm_propagate(&spec, &schedule, &psi0, window, dt).unwrap();
            let cn = propagate(&spec, &schedule, &psi0, window, dt, false).unwrap();
            reference
                .iter()
                .zip(cn.final_state.iter())
                .map(|(a, b)| (a - b).norm_sqr())
                .sum::<f64>()
                .sqrt()
        };
        let coarse = diff_at(1e-2);
        assert!(coarse < 5e-3, "difference {coarse}");
        let fine = diff_at(2.5e-3);
        let ratio = coarse / fine;
        assert!((12.0..=20.0).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn polynomial_and_pivot_eigenvalue_counts_agree_everywhere() {
        let h = ladder(12, 1.3, 0.8, 1.7);
        let bound = h.inf_norm() + 1.0;
        // Deterministic pseudo-random shifts across and beyond the spectrum.
        let mut seed = 0x1234_5678_9ABC_DEF0u64;
        for _ in 0..100 {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let u = (seed >> 11) as f64 / (1u64 << 53) as f64;
            let x = -bound + 2.0 * bound * u;
            assert_eq!(
                charpoly_eigenvalue_count(&h, x),
                eigenvalue_count_below(&h, x),
                "shift {x}"
            );
        }
        assert_eq!(charpoly_eigenvalue_count(&h, -bound), 0);
        assert_eq!(charpoly_eigenvalue_count(&h, bound), 12);
    }

    #[test]
    fn polynomial_count_survives_extreme_scales() {
        // Entries far outside the comfortable range force the rescaling path.
        let h = TridiagonalHamiltonian {
            diag: vec![1e200, -1e200, 1e-200, -1e-200],
            offdiag: vec![1e100, 1e-100, 1e100],
        };
        assert_eq!(charpoly_eigenvalue_count(&h, 0.0), 2);
        assert_eq!(charpoly_eigenvalue_count(&h, 2e200), 4);
        assert_eq!(charpoly_eigenvalue_count(&h, -2e200), 0);
    }
}
