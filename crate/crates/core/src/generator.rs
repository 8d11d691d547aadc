//! Simple and general GKS–Lindblad generators, their duals and their
//! superoperator matrices.
//!
//! A simple generator is `D_h(ρ) = hρh† − ½(h†hρ + ρh†h)`; a general one adds
//! a Hamiltonian commutator and sums several simple terms. Superoperators act
//! on row-major vectorized matrices (see [`crate::linalg::vectorize`]).

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    c, canonical_phase_matrix, ensure_same_dim, ensure_square, expm, hermitian_eigen,
    hermitian_residual, identity, is_normal, kron, min_hermitian_eigenvalue, unvectorize,
    vectorize, CMatrix, I,
};

/// A Hamiltonian plus a non-empty list of jump operators.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    hamiltonian: Option<CMatrix>,
    jump_operators: Vec<CMatrix>,
}

impl GeneratorSpec {
    pub fn new(hamiltonian: Option<CMatrix>, jump_operators: Vec<CMatrix>) -> Result<Self> {
        let first = jump_operators
            .first()
            .ok_or_else(|| Error::InvalidArgument("at least one jump operator is required".into()))?;
        let n = ensure_square(first)?;
        for op in &jump_operators {
            ensure_same_dim(n, op)?;
        }
        if let Some(h) = &hamiltonian {
            ensure_same_dim(n, h)?;
            let residual = hermitian_residual(h);
            if residual > 1e-12 * h.norm().max(1.0) {
                return Err(Error::NotHermitian { residual });
            }
        }
        Ok(GeneratorSpec { hamiltonian, jump_operators })
    }

    /// The simple generator `D_h`.
    pub fn simple(h: CMatrix) -> Result<Self> {
        Self::new(None, vec![h])
    }

    /// The unitary generator `−i[H, ·]` (one vanishing jump operator).
    pub fn hamiltonian_only(hamiltonian: CMatrix) -> Result<Self> {
        let n = ensure_square(&hamiltonian)?;
        Self::new(Some(hamiltonian), vec![CMatrix::zeros(n, n)])
    }

    pub fn dim(&self) -> usize {
        self.jump_operators[0].nrows()
    }

    pub fn hamiltonian(&self) -> Option<&CMatrix> {
        self.hamiltonian.as_ref()
    }

    pub fn jump_operators(&self) -> &[CMatrix] {
        &self.jump_operators
    }

    /// The single jump operator when the spec is a simple generator.
    pub fn as_simple(&self) -> Option<&CMatrix> {
        let no_hamiltonian = self.hamiltonian.as_ref().is_none_or(|h| h.norm() == 0.0);
        (no_hamiltonian && self.jump_operators.len() == 1).then(|| &self.jump_operators[0])
    }
}

/// An `n² × n²` matrix acting on row-major vectorized `n × n` matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperoperatorMatrix {
    dim: usize,
    entries: CMatrix,
}

impl SuperoperatorMatrix {
    pub fn new(dim: usize, entries: CMatrix) -> Result<Self> {
        let n2 = dim * dim;
        if entries.nrows() != n2 || entries.ncols() != n2 {
            return Err(Error::DimensionMismatch { expected: n2, found: entries.nrows() });
        }
        Ok(SuperoperatorMatrix { dim, entries })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        ensure_same_dim(self.dim, rho)?;
        Ok(unvectorize(&(&self.entries * vectorize(rho)), self.dim))
    }

    /// The Hilbert–Schmidt adjoint (the generator of the Heisenberg picture).
    pub fn adjoint(&self) -> SuperoperatorMatrix {
        SuperoperatorMatrix { dim: self.dim, entries: self.entries.adjoint() }
    }

    /// `exp(tL)` as an `n² × n²` matrix.
    pub fn exp(&self, t: f64) -> CMatrix {
        expm(&(&self.entries * c(t, 0.0)))
    }

    pub fn norm(&self) -> f64 {
        self.entries.norm()
    }
}

impl std::ops::Sub for &SuperoperatorMatrix {
    type Output = SuperoperatorMatrix;
    fn sub(self, rhs: &SuperoperatorMatrix) -> SuperoperatorMatrix {
        SuperoperatorMatrix { dim: self.dim, entries: &self.entries - &rhs.entries }
    }
}

pub fn apply_simple_generator(h: &CMatrix, rho: &CMatrix) -> Result<CMatrix> {
    let n = ensure_square(h)?;
    ensure_same_dim(n, rho)?;
    let hdh = h.adjoint() * h;
    Ok(h * rho * h.adjoint() - (&hdh * rho + rho * &hdh) * c(0.5, 0.0))
}

/// Heisenberg-picture dual `h†Fh − ½(h†hF + Fh†h)`.
pub fn apply_dual_generator(h: &CMatrix, f: &CMatrix) -> Result<CMatrix> {
    let n = ensure_square(h)?;
    ensure_same_dim(n, f)?;
    let hdh = h.adjoint() * h;
    Ok(h.adjoint() * f * h - (&hdh * f + f * &hdh) * c(0.5, 0.0))
}

/// `−i[H, ρ] + Σ_α D_{h^α}(ρ)`.
pub fn apply_full_generator(spec: &GeneratorSpec, rho: &CMatrix) -> Result<CMatrix> {
    ensure_same_dim(spec.dim(), rho)?;
    let mut out = match spec.hamiltonian() {
        Some(ham) => (ham * rho - rho * ham) * (-I),
        None => CMatrix::zeros(spec.dim(), spec.dim()),
    };
    for h in spec.jump_operators() {
        out += apply_simple_generator(h, rho)?;
    }
    Ok(out)
}

fn simple_superoperator_entries(h: &CMatrix) -> CMatrix {
    let n = h.nrows();
    let id = identity(n);
    let hdh = h.adjoint() * h;
    kron(h, &h.map(|z| z.conj())) - (kron(&hdh, &id) + kron(&id, &hdh.transpose())) * c(0.5, 0.0)
}

fn commutator_superoperator_entries(a: &CMatrix) -> CMatrix {
    let id = identity(a.nrows());
    kron(a, &id) - kron(&id, &a.transpose())
}

pub fn build_superoperator(spec: &GeneratorSpec) -> SuperoperatorMatrix {
    let n = spec.dim();
    let mut entries = CMatrix::zeros(n * n, n * n);
    if let Some(ham) = spec.hamiltonian() {
        entries += commutator_superoperator_entries(ham) * (-I);
    }
    for h in spec.jump_operators() {
        entries += simple_superoperator_entries(h);
    }
    SuperoperatorMatrix { dim: n, entries }
}

/// Superoperator of the simple generator `D_h`.
pub fn simple_superoperator(h: &CMatrix) -> Result<SuperoperatorMatrix> {
    let n = ensure_square(h)?;
    Ok(SuperoperatorMatrix { dim: n, entries: simple_superoperator_entries(h) })
}

/// Choi matrix `Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|)` of a map given by its `n²×n²` matrix.
pub fn choi_matrix(map: &CMatrix, n: usize) -> CMatrix {
    CMatrix::from_fn(n * n, n * n, |row, col| {
        let (i, k) = (row / n, row % n);
        let (j, l) = (col / n, col % n);
        map[(k * n + l, i * n + j)]
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CpReport {
    pub is_cp: bool,
    pub min_choi_eigenvalue: f64,
}

/// Complete-positivity test of `exp(tL)` through its Choi matrix.
pub fn choi_cp_check(l: &SuperoperatorMatrix, t: f64) -> Result<CpReport> {
    if !t.is_finite() {
        return Err(Error::InvalidArgument(format!("time {t} is not finite")));
    }
    let n = l.dim();
    let choi = choi_matrix(&l.exp(t), n);
    let min = min_hermitian_eigenvalue(&choi);
    Ok(CpReport { is_cp: min >= -1e-10 * n as f64, min_choi_eigenvalue: min })
}

/// Smallest eigenvalue of `Φ_t(F†F) − Φ_t(F†)Φ_t(F)` for the Heisenberg
/// evolution `Φ_t = exp(tL†)`; non-negative for completely positive unital maps.
pub fn kadison_defect(l: &SuperoperatorMatrix, f: &CMatrix, t: f64) -> Result<f64> {
    ensure_same_dim(l.dim(), f)?;
    let dual = SuperoperatorMatrix { dim: l.dim(), entries: expm(&(l.matrix().adjoint() * c(t, 0.0))) };
    let fd = f.adjoint();
    let lhs = dual.apply(&(&fd * f))?;
    let rhs = dual.apply(&fd)? * dual.apply(f)?;
    Ok(min_hermitian_eigenvalue(&(lhs - rhs)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RecoveredGenerator {
    /// Recovered operator, phase fixed so its largest entry is real positive.
    pub h: CMatrix,
    /// False when `h` is normal and hence not determined up to a phase alone.
    pub unique_up_to_phase: bool,
    /// `‖L_h − L‖_F` of the recovered operator.
    pub residual: f64,
}

/// Recovers `k` with `L = L_{D_k}`.
///
/// The Choi matrix of `L`, compressed to the complement of the maximally
/// entangled vector, equals `|k₀⟩⟩⟨⟨k₀|` for the traceless part `k₀` of `k`;
/// the remaining scalar `k − k₀ = c·1` only enters through the commutator
/// term `½c̄[k₀,ρ] − ½c[k₀†,ρ]` and is fitted by real least squares.
pub fn recover_h(l: &SuperoperatorMatrix) -> Result<RecoveredGenerator> {
    let n = l.dim();
    let n2 = n * n;
    let choi = choi_matrix(l.matrix(), n);

    let mut omega = crate::linalg::CVector::zeros(n2);
    for i in 0..n {
        omega[i * n + i] = c(1.0, 0.0);
    }
    let proj = identity(n2) - &omega * omega.adjoint() / c(n as f64, 0.0);
    let compressed = &proj * choi * &proj;
    let eig = hermitian_eigen(&compressed);
    let top = eig.values[n2 - 1].max(0.0);
    let w = eig.vectors.column(n2 - 1) * c(top.sqrt(), 0.0);
    let mut k0 = unvectorize(&w, n).transpose();
    let tr = k0.trace() / c(n as f64, 0.0);
    k0 -= identity(n) * tr;

    // Fit the scalar part c = x + iy.
    let rest = l.matrix() - simple_superoperator_entries(&k0);
    let a = commutator_superoperator_entries(&k0);
    let b = commutator_superoperator_entries(&k0.adjoint());
    let x_dir = (&a - &b) * c(0.5, 0.0);
    let y_dir = (&a + &b) * c(0.0, -0.5);
    let re_inner = |p: &CMatrix, q: &CMatrix| crate::linalg::hs_inner(p, q).re;
    let g = [
        [re_inner(&x_dir, &x_dir), re_inner(&x_dir, &y_dir)],
        [re_inner(&y_dir, &x_dir), re_inner(&y_dir, &y_dir)],
    ];
    let rhs = [re_inner(&x_dir, &rest), re_inner(&y_dir, &rest)];
    let (x, y) = solve_sym2_min_norm(g, rhs);
    let k = k0 + identity(n) * c(x, y);

    let residual = (simple_superoperator_entries(&k) - l.matrix()).norm();
    let tol = 1e-8 * l.norm().max(1.0);
    if residual > tol {
        return Err(Error::ValidationFailure(format!(
            "no simple generator reproduces L (residual {residual:e} > {tol:e})"
        )));
    }
    let h = canonical_phase_matrix(&k);
    Ok(RecoveredGenerator { unique_up_to_phase: !is_normal(&h), h, residual })
}

/// Minimum-norm solution of a symmetric positive semidefinite 2×2 system.
fn solve_sym2_min_norm(g: [[f64; 2]; 2], rhs: [f64; 2]) -> (f64, f64) {
    let m = nalgebra::Matrix2::new(g[0][0], g[0][1], g[1][0], g[1][1]);
    let eig = nalgebra::SymmetricEigen::new(m);
    let scale = eig.eigenvalues.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let r = nalgebra::Vector2::new(rhs[0], rhs[1]);
    let mut sol = nalgebra::Vector2::zeros();
    for k in 0..2 {
        let lambda = eig.eigenvalues[k];
        if lambda.abs() > 1e-12 * scale && scale > 0.0 {
            let v = eig.eigenvectors.column(k);
            sol += v * (v.dot(&r) / lambda);
        }
    }
    (sol[0], sol[1])
}

/// Smallest `‖e^{iθ}a − b‖_F` over phases `θ`.
pub fn phase_distance(a: &CMatrix, b: &CMatrix) -> f64 {
    let overlap = crate::linalg::hs_inner(a, b);
    let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { c(1.0, 0.0) };
    (a * phase - b).norm()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct UnitaryLimitReport {
    /// `‖L_{h(λ)} − L_{−i[H,·]}‖_F`.
    pub distance: f64,
    /// `λ²‖L_{D_H}‖_F`, the exact value of `distance`.
    pub predicted: f64,
}

/// Distance between the simple generator of `h(λ) = λ⁻¹·1 − iλH` and the
/// unitary generator `−i[H,·]`; since `D_{h(λ)} = −i[H,·] + λ²D_H` it shrinks
/// quadratically in `λ`.
pub fn unitary_limit_check(hamiltonian: &CMatrix, lambda: f64) -> Result<UnitaryLimitReport> {
    let n = ensure_square(hamiltonian)?;
    let residual = hermitian_residual(hamiltonian);
    if residual > 1e-12 * hamiltonian.norm().max(1.0) {
        return Err(Error::NotHermitian { residual });
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::InvalidArgument(format!("lambda must be positive, got {lambda}")));
    }
    let h_lambda = identity(n) * c(1.0 / lambda, 0.0) - hamiltonian * (I * lambda);
    let simple = simple_superoperator_entries(&h_lambda);
    let unitary = commutator_superoperator_entries(hamiltonian) * (-I);
    Ok(UnitaryLimitReport {
        distance: (simple - unitary).norm(),
        predicted: lambda * lambda * simple_superoperator_entries(hamiltonian).norm(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{diag, hs_inner, real_diag, real_matrix, ZERO};
    use crate::sampling::{random_density, random_hermitian, random_matrix, Rng64};

    fn lowering() -> CMatrix {
        real_matrix(2, &[0.0, 1.0, 0.0, 0.0])
    }

    #[test]
    fn simple_generator_examples() {
        let out = apply_simple_generator(&lowering(), &real_diag(&[0.0, 1.0])).unwrap();
        assert!((out - real_diag(&[1.0, -1.0])).norm() < 1e-15);
        let out = apply_simple_generator(&lowering(), &real_diag(&[1.0, 0.0])).unwrap();
        assert_eq!(out.norm(), 0.0);
    }

    #[test]
    fn dual_generator_examples() {
        let mut rng = Rng64::seeded(1);
        let h = random_matrix(&mut rng, 3);
        assert!(apply_dual_generator(&h, &identity(3)).unwrap().norm() < 1e-13);
        let out = apply_dual_generator(&lowering(), &real_diag(&[1.0, 0.0])).unwrap();
        assert!((out - real_diag(&[0.0, 1.0])).norm() < 1e-15);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let err = apply_simple_generator(&identity(2), &identity(3)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
        assert!(GeneratorSpec::new(None, vec![identity(2), identity(3)]).is_err());
        assert!(GeneratorSpec::new(None, vec![]).is_err());
    }

    #[test]
    fn non_hermitian_hamiltonian_is_rejected() {
        let err = GeneratorSpec::new(Some(lowering()), vec![identity(2)]).unwrap_err();
        assert!(matches!(err, Error::NotHermitian { .. }));
    }

    #[test]
    fn full_generator_commutator_example() {
        let spec = GeneratorSpec::new(Some(real_diag(&[1.0, -1.0])), vec![CMatrix::zeros(2, 2)]).unwrap();
        let rho = real_matrix(2, &[0.5, 0.5, 0.5, 0.5]);
        let out = apply_full_generator(&spec, &rho).unwrap();
        let expected = CMatrix::from_row_slice(2, 2, &[ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]);
        assert!((out - expected).norm() < 1e-15);
    }

    #[test]
    fn full_generator_reduces_to_simple_and_is_linear() {
        let mut rng = Rng64::seeded(2);
        let h = random_matrix(&mut rng, 3);
        let rho = random_density(&mut rng, 3);
        let simple = apply_simple_generator(&h, &rho).unwrap();
        let spec = GeneratorSpec::simple(h.clone()).unwrap();
        assert!((apply_full_generator(&spec, &rho).unwrap() - &simple).norm() < 1e-14);
        let doubled = GeneratorSpec::new(Some(CMatrix::zeros(3, 3)), vec![h.clone(), h]).unwrap();
        let out = apply_full_generator(&doubled, &rho).unwrap();
        assert!((out - simple * c(2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn superoperator_diagonal_case() {
        let l = simple_superoperator(&real_diag(&[1.0, 0.0])).unwrap();
        assert!((l.matrix()[(1, 1)] - c(-0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn hamiltonian_superoperator_has_imaginary_spectrum() {
        let mut rng = Rng64::seeded(4);
        let spec = GeneratorSpec::hamiltonian_only(random_hermitian(&mut rng, 3)).unwrap();
        let l = build_superoperator(&spec);
        for z in crate::linalg::eigenvalues(l.matrix()) {
            assert!(z.re.abs() < 1e-12, "{z}");
        }
    }

    #[test]
    fn superoperator_matches_direct_application() {
        let mut rng = Rng64::seeded(5);
        let spec = GeneratorSpec::new(
            Some(random_hermitian(&mut rng, 3)),
            vec![random_matrix(&mut rng, 3), random_matrix(&mut rng, 3)],
        )
        .unwrap();
        let l = build_superoperator(&spec);
        for _ in 0..20 {
            let rho = random_matrix(&mut rng, 3);
            let direct = apply_full_generator(&spec, &rho).unwrap();
            assert!((l.apply(&rho).unwrap() - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn adjointness_in_hilbert_schmidt_product() {
        let mut rng = Rng64::seeded(6);
        let h = random_matrix(&mut rng, 4);
        let f = random_matrix(&mut rng, 4);
        let rho = random_matrix(&mut rng, 4);
        let lhs = hs_inner(&f, &apply_simple_generator(&h, &rho).unwrap());
        let rhs = hs_inner(&apply_dual_generator(&h, &f).unwrap(), &rho);
        assert!((lhs - rhs).norm() < 1e-12);
        let l = simple_superoperator(&h).unwrap();
        let dual = l.adjoint().apply(&f).unwrap();
        assert!((dual - apply_dual_generator(&h, &f).unwrap()).norm() < 1e-12);
    }

    #[test]
    fn choi_examples() {
        let l = simple_superoperator(&lowering()).unwrap();
        let at_zero = choi_cp_check(&l, 0.0).unwrap();
        assert!(at_zero.is_cp);
        assert!(at_zero.min_choi_eigenvalue.abs() < 1e-14);
        assert!(choi_cp_check(&l, 1.0).unwrap().is_cp);
        let backwards = choi_cp_check(&l, -1.0).unwrap();
        assert!(!backwards.is_cp, "{backwards:?}");
        assert!(choi_cp_check(&l, f64::NAN).is_err());
    }

    #[test]
    fn choi_psd_over_random_simple_generators() {
        let mut rng = Rng64::seeded(7);
        for _ in 0..50 {
            let n = 2 + rng.below(3);
            let l = simple_superoperator(&random_matrix(&mut rng, n)).unwrap();
            assert!(choi_cp_check(&l, 1.0).unwrap().is_cp);
        }
    }

    #[test]
    fn recover_h_examples() {
        let h = real_matrix(2, &[1.0, 1.0, 0.0, 1.0]);
        let rec = recover_h(&simple_superoperator(&h).unwrap()).unwrap();
        assert!(phase_distance(&rec.h, &h) <= 1e-8);
        assert!(rec.unique_up_to_phase);

        let rec = recover_h(&simple_superoperator(&real_diag(&[1.0, -1.0])).unwrap()).unwrap();
        assert!(!rec.unique_up_to_phase);

        let commutator = build_superoperator(&GeneratorSpec::hamiltonian_only(real_diag(&[1.0, -1.0])).unwrap());
        assert!(matches!(recover_h(&commutator), Err(Error::ValidationFailure(_))));
    }

    #[test]
    fn recover_h_rejects_sums_of_simple_generators() {
        let mut rng = Rng64::seeded(8);
        let spec = GeneratorSpec::new(None, vec![random_matrix(&mut rng, 3), random_matrix(&mut rng, 3)]).unwrap();
        assert!(recover_h(&build_superoperator(&spec)).is_err());
    }

    #[test]
    fn recover_h_phase_is_canonical() {
        let h = diag(&[c(0.0, 2.0), c(0.0, 0.5)]) + real_matrix(2, &[0.0, 0.3, 0.0, 0.0]);
        let rec = recover_h(&simple_superoperator(&h).unwrap()).unwrap();
        let largest = rec.h.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
        assert!(largest.im.abs() < 1e-12 && largest.re > 0.0);
    }

    #[test]
    fn unitary_limit_scaling() {
        let sx = real_matrix(2, &[0.0, 1.0, 1.0, 0.0]);
        let r = unitary_limit_check(&sx, 0.1).unwrap();
        let l_dh = simple_superoperator(&sx).unwrap().norm();
        assert!((r.distance - 0.01 * l_dh).abs() < 1e-10);
        let half = unitary_limit_check(&sx, 0.05).unwrap();
        assert!((half.distance * 4.0 - r.distance).abs() < 1e-10);
        let zero = unitary_limit_check(&CMatrix::zeros(2, 2), 0.3).unwrap();
        assert!(zero.distance < 1e-12);
        assert!(unitary_limit_check(&lowering(), 0.1).is_err());
        assert!(unitary_limit_check(&sx, 0.0).is_err());
    }

    #[test]
    fn kadison_inequality_holds_for_forward_time() {
        let mut rng = Rng64::seeded(9);
        for &t in &[0.1, 1.0, 10.0] {
            let l = simple_superoperator(&random_matrix(&mut rng, 3)).unwrap();
            let f = random_matrix(&mut rng, 3);
            assert!(kadison_defect(&l, &f, t).unwrap() >= -1e-10);
        }
    }
}
