//! Dense complex linear-algebra helpers shared by every module.
//!
//! Matrices are vectorized row-major: `vec(ρ)[i·n + j] = ρ[i][j]`, so that
//! `vec(A ρ B) = (A ⊗ Bᵀ) vec(ρ)`.

use nalgebra::{DMatrix, DVector, Schur, SymmetricEigen, SVD};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// Builds a matrix from real row-major entries.
pub fn real_matrix(n: usize, entries: &[f64]) -> CMatrix {
    assert_eq!(entries.len(), n * n);
    CMatrix::from_row_iterator(n, n, entries.iter().map(|&x| c(x, 0.0)))
}

pub fn diag(values: &[Complex64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_column_slice(values))
}

pub fn real_diag(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(
        values.len(),
        values.iter().map(|&x| c(x, 0.0)),
    ))
}

/// `|i⟩⟨j|` in dimension `n`.
pub fn ket_bra(n: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    m[(i, j)] = ONE;
    m
}

pub fn outer(a: &CVector, b: &CVector) -> CMatrix {
    a * b.adjoint()
}

pub fn basis_vector(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = ONE;
    v
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.norm()
}

/// Largest singular value.
pub fn operator_norm(m: &CMatrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    singular_values_desc(m).first().copied().unwrap_or(0.0)
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.trace()
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Hilbert-Schmidt inner product `Tr(a† b)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn vectorize(m: &CMatrix) -> CVector {
    let n = m.nrows();
    let cols = m.ncols();
    CVector::from_fn(n * cols, |k, _| m[(k / cols, k % cols)])
}

pub fn unvectorize(v: &CVector, n: usize) -> CMatrix {
    assert_eq!(v.len(), n * n, "vector length must be n²");
    CMatrix::from_fn(n, n, |i, j| v[i * n + j])
}

pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * c(0.5, 0.0)
}

/// `‖m − m†‖_F`.
pub fn hermitian_residual(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

pub fn is_hermitian(m: &CMatrix, tol: f64) -> bool {
    hermitian_residual(m) <= tol * m.norm().max(1.0)
}

/// Scale-invariant normality test `‖hh† − h†h‖_F ≤ 1e−10·‖h‖²_F`.
pub fn is_normal(h: &CMatrix) -> bool {
    let scale = h.norm_squared();
    let r = (h * h.adjoint() - h.adjoint() * h).norm();
    r <= 1e-10 * scale
}

pub fn ensure_square(m: &CMatrix) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::MalformedMatrix(format!(
            "matrix is {}x{}, expected square",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

pub fn ensure_same_dim(expected: usize, m: &CMatrix) -> Result<()> {
    if m.nrows() != expected || m.ncols() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: if m.nrows() != expected { m.nrows() } else { m.ncols() },
        });
    }
    Ok(())
}

/// Eigen-decomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns, in the order of `values`.
    pub vectors: CMatrix,
}

pub fn hermitian_eigen(m: &CMatrix) -> HermitianEigen {
    let n = m.nrows();
    if n == 0 {
        return HermitianEigen { values: vec![], vectors: CMatrix::zeros(0, 0) };
    }
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    HermitianEigen { values, vectors }
}

pub fn min_hermitian_eigenvalue(m: &CMatrix) -> f64 {
    hermitian_eigen(m).values.first().copied().unwrap_or(0.0)
}

/// Singular values in descending order.
pub fn singular_values_desc(m: &CMatrix) -> Vec<f64> {
    let mut s: Vec<f64> = m.singular_values().iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

/// Orthonormal basis (as columns) of `{x : m x = 0}`, using singular values
/// `≤ tol` as the numerical zero. The second element holds the smallest
/// singular value outside the kernel (or `f64::INFINITY`).
pub fn null_space(m: &CMatrix, tol: f64) -> (CMatrix, f64) {
    let cols = m.ncols();
    if cols == 0 {
        return (CMatrix::zeros(0, 0), f64::INFINITY);
    }
    let padded = if m.nrows() < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut kernel = Vec::new();
    let mut gap = f64::INFINITY;
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s <= tol {
            kernel.push(v_t.row(k).adjoint());
        } else {
            gap = gap.min(s);
        }
    }
    (columns_to_matrix(cols, &kernel), gap)
}

/// Right singular vectors ordered by ascending singular value.
pub fn smallest_right_singular_vectors(m: &CMatrix) -> Vec<(f64, CVector)> {
    let cols = m.ncols();
    let padded = if m.nrows() < cols {
        let mut p = CMatrix::zeros(cols, cols);
        p.view_mut((0, 0), (m.nrows(), cols)).copy_from(m);
        p
    } else {
        m.clone()
    };
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let mut out: Vec<(f64, CVector)> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(k, &s)| (s, v_t.row(k).adjoint()))
        .collect();
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    out
}

pub fn columns_to_matrix(rows: usize, cols: &[CVector]) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols.len());
    for (j, v) in cols.iter().enumerate() {
        m.set_column(j, v);
    }
    m
}

/// Orthonormal basis (columns) of the span of the given columns, by SVD with
/// relative rank threshold `tol`.
pub fn orthonormal_span(m: &CMatrix, tol: f64) -> CMatrix {
    if m.ncols() == 0 || m.nrows() == 0 {
        return CMatrix::zeros(m.nrows(), 0);
    }
    let svd = SVD::new(m.clone(), true, false);
    let u = svd.u.expect("left singular vectors requested");
    let smax = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let cols: Vec<CVector> = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, &s)| s > tol * smax.max(f64::MIN_POSITIVE))
        .map(|(k, _)| u.column(k).into_owned())
        .collect();
    columns_to_matrix(m.nrows(), &cols)
}

/// Orthogonal projector onto the span of the columns of `m`.
pub fn projector_onto(m: &CMatrix, tol: f64) -> CMatrix {
    let q = orthonormal_span(m, tol);
    &q * q.adjoint()
}

/// Gram-Schmidt with re-orthogonalization; vectors whose residual norm falls
/// below `tol` are dropped.
pub fn gram_schmidt(vectors: &[CVector], tol: f64) -> Vec<CVector> {
    let mut out: Vec<CVector> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &out {
                let proj = q.dotc(&w);
                w -= q * proj;
            }
        }
        let norm = w.norm();
        if norm > tol {
            out.push(w / c(norm, 0.0));
        }
    }
    out
}

/// Multiplies `v` by a phase so that its largest-magnitude entry is real
/// positive (first such entry on ties).
pub fn canonical_phase_vector(v: &CVector) -> CVector {
    match largest_entry_phase(v.iter()) {
        Some(phase) => v * phase,
        None => v.clone(),
    }
}

pub fn canonical_phase_matrix(m: &CMatrix) -> CMatrix {
    match largest_entry_phase(m.transpose().iter()) {
        Some(phase) => m * phase,
        None => m.clone(),
    }
}

fn largest_entry_phase<'a>(entries: impl Iterator<Item = &'a Complex64>) -> Option<Complex64> {
    let mut best: Option<Complex64> = None;
    let mut best_abs = 0.0;
    for z in entries {
        // strict improvement beyond round-off keeps the first maximal entry
        if z.norm() > best_abs * (1.0 + 1e-12) {
            best_abs = z.norm();
            best = Some(*z);
        }
    }
    best.filter(|z| z.norm() > 0.0).map(|z| z.conj() / z.norm())
}

/// Square root of a positive semidefinite Hermitian matrix.
pub fn psd_sqrt(m: &CMatrix) -> CMatrix {
    hermitian_function(m, |x| x.max(0.0).sqrt())
}

pub fn hermitian_function(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let eig = hermitian_eigen(m);
    let n = m.nrows();
    let mut scaled = eig.vectors.clone();
    for j in 0..n {
        let s = f(eig.values[j]);
        for i in 0..n {
            scaled[(i, j)] *= s;
        }
    }
    scaled * eig.vectors.adjoint()
}

/// Unitary polar factor `W V†` of `m = W Σ V†`.
pub fn polar_unitary(m: &CMatrix) -> CMatrix {
    let svd = SVD::new(m.clone(), true, true);
    let u = svd.u.expect("u requested");
    let v_t = svd.v_t.expect("v_t requested");
    u * v_t
}

/// Complex Schur form `h = U T U†` with `T` upper triangular.
pub fn complex_schur(h: &CMatrix) -> (CMatrix, CMatrix) {
    let n = h.nrows();
    if n == 0 {
        return (CMatrix::zeros(0, 0), CMatrix::zeros(0, 0));
    }
    let (u, mut t) = Schur::new(h.clone()).unpack();
    for i in 0..n {
        for j in 0..i {
            t[(i, j)] = ZERO;
        }
    }
    (u, t)
}

/// Eigenvalues of a general complex matrix (Schur diagonal).
pub fn eigenvalues(m: &CMatrix) -> Vec<Complex64> {
    let (_, t) = complex_schur(m);
    (0..m.nrows()).map(|i| t[(i, i)]).collect()
}

/// Swaps the adjacent diagonal entries `k`, `k+1` of an upper-triangular
/// Schur factor, updating `u` so that `u t u†` is unchanged.
pub fn schur_swap(u: &mut CMatrix, t: &mut CMatrix, k: usize) {
    let n = t.nrows();
    let t11 = t[(k, k)];
    let t22 = t[(k + 1, k + 1)];
    let t12 = t[(k, k + 1)];
    let x = t22 - t11;
    let r = (t12.norm_sqr() + x.norm_sqr()).sqrt();
    if r == 0.0 {
        return;
    }
    // first column: eigenvector of the 2x2 block for t22
    let a = t12 / r;
    let b = x / r;
    // W = [[a, -b*], [b, a*]] is unitary
    let w = [[a, -b.conj()], [b, a.conj()]];
    // rows k, k+1 : t <- W† t
    for j in 0..n {
        let p = t[(k, j)];
        let q = t[(k + 1, j)];
        t[(k, j)] = w[0][0].conj() * p + w[1][0].conj() * q;
        t[(k + 1, j)] = w[0][1].conj() * p + w[1][1].conj() * q;
    }
    // columns k, k+1 : t <- t W, u <- u W
    for mat in [&mut *t, &mut *u] {
        for i in 0..mat.nrows() {
            let p = mat[(i, k)];
            let q = mat[(i, k + 1)];
            mat[(i, k)] = p * w[0][0] + q * w[1][0];
            mat[(i, k + 1)] = p * w[0][1] + q * w[1][1];
        }
    }
    t[(k + 1, k)] = ZERO;
    t[(k, k)] = t22;
    t[(k + 1, k + 1)] = t11;
}

/// Reorders a Schur form so that the diagonal entries selected by `front`
/// come first, preserving relative order inside both groups.
pub fn schur_reorder(u: &mut CMatrix, t: &mut CMatrix, front: impl Fn(Complex64) -> bool) {
    let n = t.nrows();
    let mut placed = 0;
    for k in 0..n {
        if front(t[(k, k)]) {
            let mut pos = k;
            while pos > placed {
                schur_swap(u, t, pos - 1);
                pos -= 1;
            }
            placed += 1;
        }
    }
}

/// Dense matrix exponential (Padé approximant with scaling and squaring).
pub fn expm(m: &CMatrix) -> CMatrix {
    if m.nrows() == 0 {
        return m.clone();
    }
    m.exp()
}

/// Solves `a x = b` by LU.
pub fn solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::NumericalFailure("singular linear system".into()))
}

/// Greedy one-to-one assignment maximizing the entries of a non-negative
/// score matrix (`score[(i, j)]` pairs row item `i` with column item `j`).
pub fn greedy_assignment(score: &DMatrix<f64>) -> Vec<usize> {
    let n = score.nrows();
    let mut pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|i| (0..score.ncols()).map(move |j| (i, j))).collect();
    pairs.sort_by(|a, b| score[(b.0, b.1)].total_cmp(&score[(a.0, a.1)]));
    let mut row_to_col = vec![usize::MAX; n];
    let mut col_used = vec![false; score.ncols()];
    for (i, j) in pairs {
        if row_to_col[i] == usize::MAX && !col_used[j] {
            row_to_col[i] = j;
            col_used[j] = true;
        }
    }
    row_to_col
}
