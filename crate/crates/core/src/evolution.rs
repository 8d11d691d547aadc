//! Time evolution, generator spectra and trajectory diagnostics.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::{apply_full_generator, simple_superoperator, GeneratorSpec, SuperoperatorMatrix};
use crate::linalg::{
    c, ensure_same_dim, ensure_square, greedy_assignment, hermitian_eigen, hermitian_part, identity,
    null_space, operator_norm, unvectorize, vectorize, CMatrix, CVector,
};
use crate::state::{DensityMatrix, Tolerances};

/// `ρ(t) = exp(tL)ρ0` for `t ≥ 0`.
pub fn propagate(l: &SuperoperatorMatrix, rho0: &DensityMatrix, t: f64) -> Result<DensityMatrix> {
    propagate_with_tolerance(l, rho0, t, Tolerances::default().psd)
}

pub fn propagate_with_tolerance(
    l: &SuperoperatorMatrix,
    rho0: &DensityMatrix,
    t: f64,
    psd_tol: f64,
) -> Result<DensityMatrix> {
    ensure_same_dim(l.dim(), rho0.matrix())?;
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    if t == 0.0 {
        return Ok(rho0.clone());
    }
    if !t.is_finite() {
        return Err(Error::InvalidArgument("evolution time must be finite".into()));
    }
    let raw = hermitian_part(&evolve_unchecked(l, rho0.matrix(), t));
    let tr = raw.trace().re;
    if !(tr.is_finite() && tr > 0.0) {
        return Err(Error::NumericalFailure(format!("propagated trace {tr} is not positive")));
    }
    DensityMatrix::with_tolerance(raw / c(tr, 0.0), psd_tol)
        .map_err(|e| Error::NumericalFailure(format!("propagated state left the state space: {e}")))
}

/// `exp(tL)` applied to an arbitrary matrix, for any real `t`.
pub(crate) fn evolve_unchecked(l: &SuperoperatorMatrix, m: &CMatrix, t: f64) -> CMatrix {
    unvectorize(&(l.exp(t) * vectorize(m)), l.dim())
}

/// Propagates `rho0` to every time of a grid.
pub fn propagate_grid(l: &SuperoperatorMatrix, rho0: &DensityMatrix, times: &[f64]) -> Result<Trajectory> {
    let states = times.iter().map(|&t| propagate(l, rho0, t)).collect::<Result<Vec<_>>>()?;
    Trajectory::new(times.to_vec(), states)
}

/// Uniform grid `0, t_max/steps, …, t_max`.
pub fn uniform_grid(t_max: f64, steps: usize) -> Result<Vec<f64>> {
    if !(t_max > 0.0 && t_max.is_finite()) || steps == 0 {
        return Err(Error::InvalidArgument(format!(
            "time grid needs t_max > 0 and at least one step (got {t_max}, {steps})"
        )));
    }
    Ok((0..=steps).map(|k| t_max * k as f64 / steps as f64).collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
}

impl Trajectory {
    pub fn new(times: Vec<f64>, states: Vec<DensityMatrix>) -> Result<Self> {
        if times.len() != states.len() {
            return Err(Error::InvalidArgument(format!(
                "{} times for {} states",
                times.len(),
                states.len()
            )));
        }
        if times.is_empty() {
            return Err(Error::InvalidArgument("empty trajectory".into()));
        }
        if times[0] < 0.0 || times.windows(2).any(|w| w[1].partial_cmp(&w[0]) != Some(std::cmp::Ordering::Greater)) {
            return Err(Error::InvalidArgument("times must be nonnegative and strictly increasing".into()));
        }
        let n = states[0].dim();
        for s in &states {
            ensure_same_dim(n, s.matrix())?;
        }
        Ok(Trajectory { times, states })
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityVerdict {
    pub max_real_part: f64,
    pub nonzero_imaginary_axis: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenmatrix {
    pub eigenvalue: num_complex::Complex64,
    pub matrix: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumReport {
    /// All `n²` eigenvalues, sorted by decreasing real part.
    pub eigenvalues: Vec<num_complex::Complex64>,
    /// Bases of the proper eigenspaces, unit Frobenius norm.
    pub proper_eigenmatrices: Vec<Eigenmatrix>,
    /// Per entry of `eigenvalues`: whether its eigenvalue is defective.
    pub generalized_flags: Vec<bool>,
    pub stability_verdict: StabilityVerdict,
}

/// Eigenvalues, proper eigenmatrices and stability verdict of `L`.
pub fn generator_spectrum(l: &SuperoperatorMatrix) -> SpectrumReport {
    let n = l.dim();
    let m = l.matrix();
    let scale = l.norm().max(1.0);
    let mut eigenvalues = crate::linalg::eigenvalues(m);
    eigenvalues.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));

    // Group numerically coincident eigenvalues.
    let cluster_tol = 1e-6 * scale;
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for (k, z) in eigenvalues.iter().enumerate() {
        match clusters.iter_mut().find(|cl| cl.iter().any(|&j| (eigenvalues[j] - z).norm() <= cluster_tol)) {
            Some(cl) => cl.push(k),
            None => clusters.push(vec![k]),
        }
    }

    let mut proper_eigenmatrices = Vec::new();
    let mut generalized_flags = vec![false; eigenvalues.len()];
    for cl in &clusters {
        let mean = cl.iter().map(|&k| eigenvalues[k]).sum::<num_complex::Complex64>() / c(cl.len() as f64, 0.0);
        let shifted = m - identity(n * n) * mean;
        let (kernel, _) = null_space(&shifted, 1e-7 * scale);
        let mut geometric = kernel.ncols();
        if geometric == 0 {
            // the cluster mean missed the kernel; fall back to the best vector
            let best = crate::linalg::smallest_right_singular_vectors(&shifted).remove(0).1;
            proper_eigenmatrices.push(Eigenmatrix { eigenvalue: mean, matrix: unvectorize(&best, n) });
            geometric = 1;
        } else {
            for col in kernel.column_iter() {
                let v: CVector = col.into_owned();
                proper_eigenmatrices.push(Eigenmatrix { eigenvalue: mean, matrix: unvectorize(&v, n) });
            }
        }
        if geometric < cl.len() {
            for &k in cl {
                generalized_flags[k] = true;
            }
        }
    }

    let norm = l.norm();
    let max_real_part = eigenvalues.iter().map(|z| z.re).fold(f64::NEG_INFINITY, f64::max);
    let nonzero_imaginary_axis =
        eigenvalues.iter().any(|z| z.re.abs() <= 1e-10 * norm && z.im.abs() > 1e-8 * norm);
    SpectrumReport {
        eigenvalues,
        proper_eigenmatrices,
        generalized_flags,
        stability_verdict: StabilityVerdict { max_real_part, nonzero_imaginary_axis },
    }
}

/// Smallest `|Re λ|` over the nonzero eigenvalues, the asymptotic decay rate.
pub fn spectral_gap(spectrum: &SpectrumReport, zero_tol: f64) -> Option<f64> {
    spectrum
        .eigenvalues
        .iter()
        .filter(|z| z.norm() > zero_tol)
        .map(|z| z.re.abs())
        .min_by(f64::total_cmp)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryCheck {
    pub floor_ok: bool,
    pub rank_nondecreasing: bool,
    /// Smallest `r_j(t) − e^{−‖h‖²(t−t₀)} r_j(t₀)` over branches and times.
    pub min_margin: f64,
}

/// Numerical rank with threshold `1e−10·Tr ρ`.
pub fn numerical_rank(rho: &CMatrix) -> usize {
    let tr = rho.trace().re;
    hermitian_eigen(rho).values.iter().filter(|&&v| v > 1e-10 * tr).count()
}

/// Checks the exponential eigenvalue floor and rank monotonicity along a
/// trajectory of `D_h`, following eigenvalue branches by eigenvector overlap.
pub fn trajectory_checks(h: &CMatrix, traj: &Trajectory) -> Result<TrajectoryCheck> {
    let n = ensure_square(h)?;
    ensure_same_dim(n, traj.states()[0].matrix())?;
    let rate = operator_norm(h).powi(2);
    let t0 = traj.times()[0];

    let first = hermitian_eigen(traj.states()[0].matrix());
    let initial = first.values.clone();
    let mut vectors = first.vectors;
    let mut min_margin = f64::INFINITY;
    let mut floor_ok = true;
    let mut rank_ok = true;
    let mut prev_rank = numerical_rank(traj.states()[0].matrix());

    for (state, &t) in traj.states().iter().zip(traj.times()) {
        let eig = hermitian_eigen(state.matrix());
        let overlaps = DMatrix::from_fn(n, n, |i, j| vectors.column(i).dotc(&eig.vectors.column(j)).norm_sqr());
        let assignment = greedy_assignment(&overlaps);
        let decay = (-rate * (t - t0)).exp();
        let mut next = vectors.clone();
        for (branch, &col) in assignment.iter().enumerate() {
            let margin = eig.values[col] - decay * initial[branch];
            min_margin = min_margin.min(margin);
            if margin < -1e-10 {
                floor_ok = false;
            }
            next.set_column(branch, &eig.vectors.column(col));
        }
        vectors = next;
        let rank = numerical_rank(state.matrix());
        if rank < prev_rank {
            rank_ok = false;
        }
        prev_rank = rank;
    }
    Ok(TrajectoryCheck { floor_ok, rank_nondecreasing: rank_ok, min_margin })
}

const DERIVATIVE_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Time derivatives `d^k e/dt^k (0)`, `k = 1..=max_order`, of the smallest
/// eigenvalue emerging from the kernel of `rho0` under `D_h`.
///
/// The eigenvalue branch is analytic in `t`, so it is continued to negative
/// times and differentiated with central stencils, Richardson-extrapolated
/// over the step sizes `1e−2, 5e−3, 2.5e−3`.
pub fn emerging_eigenvalue_derivatives(h: &CMatrix, rho0: &DensityMatrix, max_order: usize) -> Result<Vec<f64>> {
    let n = ensure_square(h)?;
    ensure_same_dim(n, rho0.matrix())?;
    if !(1..=4).contains(&max_order) {
        return Err(Error::InvalidArgument(format!("derivative order must be 1..=4, got {max_order}")));
    }
    let start = hermitian_eigen(rho0.matrix());
    let kernel: Vec<usize> = (0..n).filter(|&k| start.values[k] <= 1e-10).collect();
    if kernel.is_empty() {
        return Err(Error::FullRank);
    }
    let l = simple_superoperator(h)?;

    // Reference eigenvector: the smallest eigenvalue at a small positive time
    // among the eigenvectors living mostly in the initial kernel.
    let reference = {
        let eig = hermitian_eigen(&hermitian_part(&evolve_unchecked(&l, rho0.matrix(), DERIVATIVE_STEPS[2])));
        let in_kernel = |j: usize| -> f64 {
            kernel.iter().map(|&k| start.vectors.column(k).dotc(&eig.vectors.column(j)).norm_sqr()).sum()
        };
        let j = (0..n)
            .filter(|&j| in_kernel(j) > 0.5)
            .min_by(|&a, &b| eig.values[a].total_cmp(&eig.values[b]))
            .ok_or_else(|| Error::NumericalFailure("emerging eigenvalue branch not found".into()))?;
        eig.vectors.column(j).into_owned()
    };
    let branch = |t: f64| -> f64 {
        let rho = hermitian_part(&evolve_unchecked(&l, rho0.matrix(), t));
        let eig = hermitian_eigen(&rho);
        let j = (0..n)
            .max_by(|&a, &b| {
                let oa = reference.dotc(&eig.vectors.column(a)).norm();
                let ob = reference.dotc(&eig.vectors.column(b)).norm();
                oa.total_cmp(&ob)
            })
            .expect("nonempty spectrum");
        eig.values[j]
    };

    let f0 = branch(0.0);
    let samples: Vec<[f64; 4]> = DERIVATIVE_STEPS
        .iter()
        .map(|&s| [branch(-2.0 * s), branch(-s), branch(s), branch(2.0 * s)])
        .collect();
    let stencil = |order: usize, s: f64, f: &[f64; 4]| -> f64 {
        let [m2, m1, p1, p2] = *f;
        match order {
            1 => (p1 - m1) / (2.0 * s),
            2 => (p1 - 2.0 * f0 + m1) / (s * s),
            3 => (p2 - 2.0 * p1 + 2.0 * m1 - m2) / (2.0 * s.powi(3)),
            _ => (p2 - 4.0 * p1 + 6.0 * f0 - 4.0 * m1 + m2) / s.powi(4),
        }
    };
    Ok((1..=max_order)
        .map(|order| {
            let d: Vec<f64> = DERIVATIVE_STEPS.iter().zip(&samples).map(|(&s, f)| stencil(order, s, f)).collect();
            let r1 = (4.0 * d[1] - d[0]) / 3.0;
            let r2 = (4.0 * d[2] - d[1]) / 3.0;
            (16.0 * r2 - r1) / 15.0
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropySample {
    pub von_neumann: f64,
    pub fermi: f64,
}

pub fn entropies(rho: &CMatrix) -> EntropySample {
    let values = hermitian_eigen(rho).values;
    let von_neumann = values.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum::<f64>();
    let fermi = rho.trace().re - rho.norm_squared();
    EntropySample { von_neumann: von_neumann.max(0.0), fermi }
}

/// Von Neumann entropy `−Tr ρ ln ρ` and Fermi entropy `Tr ρ(1−ρ)` per sample.
pub fn entropy_track(traj: &Trajectory) -> Vec<EntropySample> {
    traj.states().iter().map(|s| entropies(s.matrix())).collect()
}

/// `Tr[(ρ−ω_f)(ω−ω_f)]` for the face spanned by `face_basis`, with `ω_f` the
/// face midpoint and `ω` the maximally mixed state. Equals `Tr S / k` where
/// `S` is the part of `ρ` orthogonal to the face and `k` the face dimension.
pub fn face_coordinate(rho: &DensityMatrix, face_basis: &[CVector]) -> Result<f64> {
    let n = rho.dim();
    let k = face_basis.len();
    if k == 0 || k >= n {
        return Err(Error::InvalidArgument(format!("a face of dimension {k} is not proper in dimension {n}")));
    }
    for v in face_basis {
        if v.len() != n {
            return Err(Error::DimensionMismatch { expected: n, found: v.len() });
        }
    }
    let basis = crate::linalg::columns_to_matrix(n, face_basis);
    let deviation = (basis.adjoint() * &basis - identity(k)).norm();
    if deviation > 1e-10 {
        return Err(Error::NotOrthonormal { deviation });
    }
    let omega_f = &basis * basis.adjoint() / c(k as f64, 0.0);
    let omega = identity(n) / c(n as f64, 0.0);
    Ok(((rho.matrix() - &omega_f) * (omega - &omega_f)).trace().re)
}

/// Adaptive Dormand–Prince integration of `dρ/dt = L(ρ)` from `0` to `t`,
/// independent of the superoperator and of the matrix exponential.
pub fn integrate_rk45(spec: &GeneratorSpec, rho0: &CMatrix, t: f64, rtol: f64, atol: f64) -> Result<CMatrix> {
    ensure_same_dim(spec.dim(), rho0)?;
    if t < 0.0 || t.is_nan() {
        return Err(Error::NegativeTime(t));
    }
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const E: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    let f = |x: &CMatrix| apply_full_generator(spec, x);
    let mut y = rho0.clone();
    let mut time = 0.0;
    let mut step = (t / 100.0).max(1e-6).min(t);
    let mut k1 = f(&y)?;
    let mut guard = 0usize;
    while time < t {
        guard += 1;
        if guard > 10_000_000 {
            return Err(Error::NumericalFailure("adaptive integrator did not finish".into()));
        }
        step = step.min(t - time);
        let mut k = vec![k1.clone()];
        for row in A.iter() {
            let mut stage = y.clone();
            for (j, kj) in k.iter().enumerate() {
                if row[j] != 0.0 {
                    stage += kj * c(step * row[j], 0.0);
                }
            }
            k.push(f(&stage)?);
        }
        // k[6] is evaluated at the fifth-order solution (first-same-as-last)
        let mut y_new = y.clone();
        for (j, kj) in k.iter().take(6).enumerate() {
            if A[5][j] != 0.0 {
                y_new += kj * c(step * A[5][j], 0.0);
            }
        }
        let mut err = CMatrix::zeros(y.nrows(), y.ncols());
        for (j, kj) in k.iter().enumerate() {
            if E[j] != 0.0 {
                err += kj * c(step * E[j], 0.0);
            }
        }
        let scale = atol + rtol * y.norm().max(y_new.norm());
        let ratio = err.norm() / scale;
        if ratio <= 1.0 {
            time += step;
            y = y_new;
            k1 = k.pop().expect("seven stages");
        }
        let factor = if ratio == 0.0 { 5.0 } else { (0.9 * ratio.powf(-0.2)).clamp(0.2, 5.0) };
        step *= factor;
    }
    Ok(y)
}
