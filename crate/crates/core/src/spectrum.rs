//! Spectral analysis: a bisection eigensolver for the tridiagonal ladder,
//! closed-form spectra of the decoupled early/late configurations, and the
//! coupling-strength rule that predicts which eigenstate the particle is
//! carried into.
//!
//! The eigensolver counts eigenvalues below a shift through the signs of the
//! LDL^T pivots of `H - x I` (a Sturm sequence), bisects each eigenvalue to
//! machine precision, and recovers eigenvectors by shifted inverse iteration
//! with partial pivoting. Exact zeros on the off-diagonal split the matrix
//! into independent blocks first, so the fully decoupled configurations are
//! handled exactly rather than through near-singular arithmetic.

use crate::error::{Error, Result};
use crate::model::{LatticeSpec, TridiagonalHamiltonian};

/// Eigenvalues and eigenvectors of a real symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralDecomposition {
    /// Eigenvalues sorted in descending order.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[i]` is the normalized eigenvector of `eigenvalues[i]`.
    pub eigenvectors: Vec<Vec<f64>>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// 1-based descending rank of the eigenvalue closest to `value`.
    pub fn rank_of_closest(&self, value: f64) -> usize {
        let mut best = 0;
        let mut best_dist = f64::INFINITY;
        for (i, &ev) in self.eigenvalues.iter().enumerate() {
            let dist = (ev - value).abs();
            if dist < best_dist {
                best_dist = dist;
                best = i;
            }
        }
        best + 1
    }
}

/// Counts eigenvalues of the tridiagonal matrix strictly below `x`.
///
/// This runs the pivot recurrence `q_j = (d_j - x) - e_{j-1}^2 / q_{j-1}` and
/// counts negative pivots; tiny pivots are pushed away from zero so the
/// recurrence never divides by an exact zero.
pub fn eigenvalue_count_below(h: &TridiagonalHamiltonian, x: f64) -> usize {
    sturm_count_below(&h.diag, &h.offdiag, x, pivot_guard(h.inf_norm()))
}

fn pivot_guard(scale: f64) -> f64 {
    (f64::EPSILON * f64::EPSILON * scale.max(1.0)).max(f64::MIN_POSITIVE)
}

fn sturm_count_below(diag: &[f64], offdiag: &[f64], x: f64, guard: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0f64;
    for (j, &d) in diag.iter().enumerate() {
        let q_safe = if q.abs() < guard { guard.copysign(q) } else { q };
        q = if j == 0 {
            d - x
        } else {
            let e = offdiag[j - 1];
            (d - x) - e * e / q_safe
        };
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Full spectral decomposition of a real symmetric tridiagonal matrix.
///
/// Eigenvalues come from per-index bisection on the Sturm count, eigenvectors
/// from shifted inverse iteration; 1x1 and 2x2 blocks use closed forms. The
/// only error path is inverse iteration running out of its iteration budget,
/// which can happen for pathologically clustered spectra; callers may fall
/// back to [`crate::oracle::jacobi_eigen`] in that case.
pub fn eigen_decompose(h: &TridiagonalHamiltonian) -> Result<SpectralDecomposition> {
    let n = h.dim();
    let mut pairs: Vec<(f64, Vec<f64>)> = Vec::with_capacity(n);

    // Split at exact zeros of the off-diagonal.
    let mut start = 0;
    for bond in 0..=n.saturating_sub(1) {
        let is_cut = bond + 1 >= n || h.offdiag[bond] == 0.0;
        if !is_cut {
            continue;
        }
        let end = bond + 1; // block covers sites start..end
        solve_block(h, start, end, &mut pairs)?;
        start = end;
        if start >= n {
            break;
        }
    }

    // Stable sort keeps a deterministic order for exactly degenerate values.
    pairs.sort_by(|a, b| b.0.partial_cmp(&a.0).expect("eigenvalues are finite"));
    let (eigenvalues, eigenvectors) = pairs.into_iter().unzip();
    Ok(SpectralDecomposition { eigenvalues, eigenvectors })
}

fn solve_block(
    h: &TridiagonalHamiltonian,
    start: usize,
    end: usize,
    pairs: &mut Vec<(f64, Vec<f64>)>,
) -> Result<()> {
    let n = h.dim();
    let m = end - start;
    let d = &h.diag[start..end];
    match m {
        1 => {
            pairs.push((d[0], basis_vector(n, start)));
        }
        2 => {
            let c = h.offdiag[start];
            let (plus, minus, cos_t, sin_t) = two_level(d[0], d[1], c);
            let mut v_plus = vec![0.0; n];
            v_plus[start] = cos_t;
            v_plus[start + 1] = sin_t;
            let mut v_minus = vec![0.0; n];
            v_minus[start] = -sin_t;
            v_minus[start + 1] = cos_t;
            fix_sign(&mut v_plus);
            fix_sign(&mut v_minus);
            pairs.push((plus, v_plus));
            pairs.push((minus, v_minus));
        }
        _ => {
            let e = &h.offdiag[start..end - 1];
            let lambdas = block_eigenvalues_ascending(d, e);
            let vectors = block_eigenvectors(d, e, &lambdas)?;
            for (lambda, v) in lambdas.into_iter().zip(vectors) {
                let mut full = vec![0.0; n];
                full[start..end].copy_from_slice(&v);
                pairs.push((lambda, full));
            }
        }
    }
    Ok(())
}

fn basis_vector(n: usize, j: usize) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[j] = 1.0;
    v
}

/// Eigenvalues and principal-axis rotation of `[[a, c], [c, b]]`.
///
/// Returns `(mean + r, mean - r, cos, sin)` where `r = sqrt((a-b)^2/4 + c^2)`
/// and `(cos, sin)` is the eigenvector of the larger eigenvalue.
fn two_level(a: f64, b: f64, c: f64) -> (f64, f64, f64, f64) {
    let mean = 0.5 * (a + b);
    let r = f64::hypot(0.5 * (a - b), c);
    let phi = 0.5 * f64::atan2(2.0 * c, a - b);
    (mean + r, mean - r, phi.cos(), phi.sin())
}

fn block_eigenvalues_ascending(d: &[f64], e: &[f64]) -> Vec<f64> {
    let m = d.len();
    let guard = {
        let scale = d.iter().fold(0.0f64, |acc, x| acc.max(x.abs()))
            + 2.0 * e.iter().fold(0.0f64, |acc, x| acc.max(x.abs()));
        pivot_guard(scale)
    };

    // Gershgorin interval containing the whole block spectrum.
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for j in 0..m {
        let mut radius = 0.0;
        if j > 0 {
            radius += e[j - 1].abs();
        }
        if j + 1 < m {
            radius += e[j].abs();
        }
        lo = lo.min(d[j] - radius);
        hi = hi.max(d[j] + radius);
    }
    let pad = 1e-10 * (hi - lo).max(1.0);
    lo -= pad;
    hi += pad;

    (0..m)
        .map(|k| {
            let (mut a, mut b) = (lo, hi);
            for _ in 0..160 {
                let mid = 0.5 * (a + b);
                if b - a <= 2.0 * f64::EPSILON * mid.abs() + 2.0 * f64::MIN_POSITIVE {
                    break;
                }
                if sturm_count_below(d, e, mid, guard) <= k {
                    a = mid;
                } else {
                    b = mid;
                }
            }
            0.5 * (a + b)
        })
        .collect()
}

fn block_eigenvectors(d: &[f64], e: &[f64], lambdas: &[f64]) -> Result<Vec<Vec<f64>>> {
    let m = d.len();
    let scale = d
        .iter()
        .chain(e.iter())
        .fold(0.0f64, |acc, x| acc.max(x.abs()))
        .max(f64::MIN_POSITIVE);
    let cluster_gap = 1e-8 * scale;
    let residual_tol = 1e-12 * scale * (m as f64);

    let mut vectors: Vec<Vec<f64>> = Vec::with_capacity(m);
    let mut cluster_start = 0;
    for (idx, &lambda) in lambdas.iter().enumerate() {
        if idx > 0 && lambda - lambdas[idx - 1] > cluster_gap {
            cluster_start = idx;
        }
        let mates = &vectors[cluster_start..idx];
        let v = inverse_iteration(d, e, lambda, mates, scale, residual_tol)
            .ok_or(Error::EigenvectorNoConvergence { eigenvalue: lambda })?;
        vectors.push(v);
    }
    Ok(vectors)
}

fn inverse_iteration(
    d: &[f64],
    e: &[f64],
    lambda: f64,
    cluster_mates: &[Vec<f64>],
    scale: f64,
    residual_tol: f64,
) -> Option<Vec<f64>> {
    let m = d.len();
    let mut seed = 0x9E37_79B9_7F4A_7C15u64 ^ (m as u64) ^ lambda.to_bits();
    for _attempt in 0..3 {
        let mut v = pseudo_random_unit(m, &mut seed);
        for _iter in 0..8 {
            solve_shifted(d, e, lambda, &mut v, scale);
            orthogonalize(&mut v, cluster_mates);
            if !normalize(&mut v) {
                break; // solver returned a degenerate direction, reseed
            }
            if residual_norm(d, e, lambda, &v) <= residual_tol {
                fix_sign(&mut v);
                return Some(v);
            }
        }
    }
    None
}

/// Solves `(T - lambda I) x = b` in place with partial pivoting.
///
/// `T - lambda I` is nearly singular by design; a tiny pivot is replaced by a
/// scaled epsilon so the solve amplifies the target eigendirection instead of
/// overflowing.
fn solve_shifted(d: &[f64], e: &[f64], lambda: f64, x: &mut [f64], scale: f64) {
    let m = d.len();
    let tiny = f64::EPSILON * scale;
    let mut dd: Vec<f64> = d.iter().map(|&v| v - lambda).collect();
    let mut du: Vec<f64> = e.to_vec();
    du.push(0.0);
    let mut du2 = vec![0.0; m];

    for i in 0..m - 1 {
        let sub = e[i];
        if dd[i].abs() >= sub.abs() {
            let pivot = if dd[i].abs() < tiny { tiny.copysign(dd[i]) } else { dd[i] };
            dd[i] = pivot;
            let fact = sub / pivot;
            dd[i + 1] -= fact * du[i];
            x[i + 1] -= fact * x[i];
        } else {
            // Swap rows i and i+1; sub is the new pivot and cannot be tiny here.
            let fact = dd[i] / sub;
            dd[i] = sub;
            let next_diag = dd[i + 1];
            dd[i + 1] = du[i] - fact * next_diag;
            du2[i] = du[i + 1];
            du[i + 1] = -fact * du[i + 1];
            du[i] = next_diag;
            x.swap(i, i + 1);
            x[i + 1] -= fact * x[i];
        }
    }
    if dd[m - 1].abs() < tiny {
        dd[m - 1] = tiny.copysign(dd[m - 1]);
    }

    x[m - 1] /= dd[m - 1];
    if m >= 2 {
        x[m - 2] = (x[m - 2] - du[m - 2] * x[m - 1]) / dd[m - 2];
    }
    for i in (0..m.saturating_sub(2)).rev() {
        x[i] = (x[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / dd[i];
    }
}

fn orthogonalize(v: &mut [f64], mates: &[Vec<f64>]) {
    // Two passes of modified Gram-Schmidt are enough at these sizes.
    for _ in 0..2 {
        for u in mates {
            let dot: f64 = u.iter().zip(v.iter()).map(|(a, b)| a * b).sum();
            for (vi, ui) in v.iter_mut().zip(u.iter()) {
                *vi -= dot * ui;
            }
        }
        if mates.is_empty() {
            break;
        }
    }
}

fn normalize(v: &mut [f64]) -> bool {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if !norm.is_finite() || norm == 0.0 {
        return false;
    }
    for x in v.iter_mut() {
        *x /= norm;
    }
    true
}

fn residual_norm(d: &[f64], e: &[f64], lambda: f64, v: &[f64]) -> f64 {
    let m = d.len();
    let mut acc = 0.0;
    for j in 0..m {
        let mut r = (d[j] - lambda) * v[j];
        if j > 0 {
            r += e[j - 1] * v[j - 1];
        }
        if j + 1 < m {
            r += e[j] * v[j + 1];
        }
        acc += r * r;
    }
    acc.sqrt()
}

/// Flips the vector so its largest-magnitude component is positive.
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

fn pseudo_random_unit(m: usize, seed: &mut u64) -> Vec<f64> {
    let mut v: Vec<f64> = (0..m)
        .map(|_| {
            *seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((*seed >> 11) as f64 / (1u64 << 53) as f64) - 0.5
        })
        .collect();
    if !normalize(&mut v) {
        v = vec![1.0 / (m as f64).sqrt(); m];
    }
    v
}

/// Half the rotation angle that diagonalizes one doubled cell.
///
/// A coupled pair of sites with detuning `delta` and hopping `gamma` is the
/// two-level matrix `[[delta/2, gamma], [gamma, -delta/2]]` up to a shift; its
/// eigenvectors are `(cos t, sin t)` and `(-sin t, cos t)` with
/// `t = arctan(2 gamma / delta) / 2`. The angle grows from 0 for weak coupling
/// to pi/4 when the hopping dominates the tilt.
pub fn mixing_angle(gamma: f64, delta: f64) -> f64 {
    assert!(gamma >= 0.0 && gamma.is_finite(), "gamma must be finite and non-negative");
    assert!(delta >= 0.0 && delta.is_finite(), "delta must be finite and non-negative");
    0.5 * f64::atan2(2.0 * gamma, delta)
}

/// Closed-form spectrum in the early-time limit (`alpha = 0`, `beta = gamma`).
///
/// Sites 1 and N decouple at energies `+-(M/2) delta`; the interior splits
/// into pairs (2,3), (4,5), ... whose eigenvalues are the pair means shifted
/// by `+- sqrt(delta^2 + 4 gamma^2) / 2`. Returned in label order: the site-1
/// level first, then each pair's upper and lower level, then site N.
pub fn asymptotic_spectrum_early(spec: &LatticeSpec, gamma: f64) -> Vec<(f64, Vec<f64>)> {
    assert!(gamma >= 0.0 && gamma.is_finite(), "gamma must be finite and non-negative");
    let n = spec.n_sites();
    let theta = mixing_angle(gamma, spec.delta());
    let (cos_t, sin_t) = (theta.cos(), theta.sin());
    let r = f64::hypot(0.5 * spec.delta(), gamma);

    let mut out = Vec::with_capacity(n);
    out.push((spec.site_energy(0), basis_vector(n, 0)));
    for p in 1..=(n - 2) / 2 {
        let (a, b) = (2 * p - 1, 2 * p);
        let mean = 0.5 * (spec.site_energy(a) + spec.site_energy(b));
        let mut v_plus = vec![0.0; n];
        v_plus[a] = cos_t;
        v_plus[b] = sin_t;
        let mut v_minus = vec![0.0; n];
        v_minus[a] = -sin_t;
        v_minus[b] = cos_t;
        out.push((mean + r, v_plus));
        out.push((mean - r, v_minus));
    }
    out.push((spec.site_energy(n - 1), basis_vector(n, n - 1)));
    out
}

/// Closed-form spectrum in the late-time limit (`alpha = gamma`, `beta = 0`).
///
/// Every site pairs up: (1,2), (3,4), ..., (N-1,N), each contributing the pair
/// mean `+- sqrt(delta^2 + 4 gamma^2) / 2`. Returned in label order, upper
/// level of each pair first.
pub fn asymptotic_spectrum_late(spec: &LatticeSpec, gamma: f64) -> Vec<(f64, Vec<f64>)> {
    assert!(gamma >= 0.0 && gamma.is_finite(), "gamma must be finite and non-negative");
    let n = spec.n_sites();
    let theta = mixing_angle(gamma, spec.delta());
    let (cos_t, sin_t) = (theta.cos(), theta.sin());
    let r = f64::hypot(0.5 * spec.delta(), gamma);

    let mut out = Vec::with_capacity(n);
    for k in 1..=n / 2 {
        let (a, b) = (2 * k - 2, 2 * k - 1);
        let mean = 0.5 * (spec.site_energy(a) + spec.site_energy(b));
        let mut v_plus = vec![0.0; n];
        v_plus[a] = cos_t;
        v_plus[b] = sin_t;
        let mut v_minus = vec![0.0; n];
        v_minus[a] = -sin_t;
        v_minus[b] = cos_t;
        out.push((mean + r, v_plus));
        out.push((mean - r, v_minus));
    }
    out
}

fn interval_upper_boundary(k: usize) -> f64 {
    (((2 * k - 1) * (2 * k)) as f64).sqrt()
}

/// Which late-time level the particle is carried into, as a function of the
/// coupling-to-tilt ratio.
///
/// The rule: `n = k` exactly when `gamma/delta` lies in
/// `( sqrt((2k-3)(2k-2)), sqrt((2k-1) 2k) )`, capped at `n_sites / 2`. A ratio
/// exactly on a boundary is assigned to the lower interval. The comparison is
/// made against the correctly rounded square root of the integer product, so
/// a caller passing the double nearest to a boundary value lands exactly on
/// it instead of being pushed across by the rounding of `g * g`.
pub fn quantum_number(gamma_over_delta: f64, n_sites: usize) -> usize {
    assert!(
        gamma_over_delta > 0.0 && gamma_over_delta.is_finite(),
        "coupling ratio must be finite and positive"
    );
    assert!(n_sites >= 2 && n_sites % 2 == 0, "n_sites must be even and at least 2");
    let cap = n_sites / 2;
    for k in 1..cap {
        if gamma_over_delta <= interval_upper_boundary(k) {
            return k;
        }
    }
    cap
}

/// Open interval of `gamma/delta` ratios mapped to quantum number `k`
/// (ignoring the finite-size cap). The first interval starts at zero.
pub fn interval_bounds(k: usize) -> (f64, f64) {
    assert!(k >= 1, "quantum numbers start at 1");
    let lower = if k == 1 {
        0.0
    } else {
        (((2 * k - 3) * (2 * k - 2)) as f64).sqrt()
    };
    (lower, interval_upper_boundary(k))
}

/// Prediction of where the adiabatic sweep deposits a particle that starts on
/// site 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TransportPrediction {
    /// Descending rank of the late-time level the particle follows.
    pub quantum_number: usize,
    /// Index of the doubled cell holding the final population (cell 0 = sites 1,2).
    pub target_cell: usize,
    /// Mixing angle of the final two-level superposition.
    pub theta: f64,
    /// Real site-basis amplitudes of the predicted final state.
    pub target_state: Vec<f64>,
    /// Set when `gamma/delta` sits exactly on an interval boundary; the lower
    /// interval is used, but the true final state is a 50/50 split between two
    /// neighbouring cells.
    pub on_boundary: bool,
}

/// Applies the interval rule and builds the predicted final state
/// `cos(theta) |2n-1> + sin(theta) |2n>`.
pub fn predict_transport(spec: &LatticeSpec, gamma: f64) -> TransportPrediction {
    assert!(spec.delta() > 0.0, "transport prediction needs a positive level spacing");
    assert!(gamma > 0.0 && gamma.is_finite(), "gamma must be finite and positive");
    let ratio = gamma / spec.delta();
    let n = quantum_number(ratio, spec.n_sites());
    let on_boundary = ratio == interval_upper_boundary(n);
    let theta = mixing_angle(gamma, spec.delta());
    let mut target_state = vec![0.0; spec.n_sites()];
    target_state[2 * n - 2] = theta.cos();
    target_state[2 * n - 1] = theta.sin();
    TransportPrediction {
        quantum_number: n,
        target_cell: n - 1,
        theta,
        target_state,
        on_boundary,
    }
}

/// Descending rank of the site-1 level within the early-time spectrum.
///
/// This is the level the adiabatic evolution follows, so it must agree with
/// [`quantum_number`] for every coupling ratio; the equality is what makes the
/// staircase quantized.
pub fn initial_rank(spec: &LatticeSpec, gamma: f64) -> usize {
    assert!(spec.delta() > 0.0, "initial rank needs a positive level spacing");
    assert!(gamma > 0.0 && gamma.is_finite(), "gamma must be finite and positive");
    let target = spec.site_energy(0);
    let above = asymptotic_spectrum_early(spec, gamma)
        .iter()
        .filter(|(ev, _)| *ev > target)
        .count();
    above + 1
}
