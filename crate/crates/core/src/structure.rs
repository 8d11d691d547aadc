//! Splitting of `h` into indecomposable parts, Schur triangulation, lazy
//! subspaces and Jordan chains.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    c, columns_to_matrix, complex_schur, ensure_square, hermitian_eigen, identity, kron, null_space,
    orthonormal_span, polar_unitary, schur_reorder, smallest_right_singular_vectors, unvectorize, CMatrix,
    CVector,
};
use crate::sampling::{random_vector, Rng64};

const DECOMPOSE_SEED: u64 = 0x5eed_d15c;

/// Unitary-equivalence class of blocks.
///
/// `witnesses[i]` maps member `members[i]` onto the representative
/// `members[0]`: `W h_member W† = h_rep`.
#[derive(Debug, Clone, PartialEq)]
pub struct EquivalenceClass {
    pub members: Vec<usize>,
    pub witnesses: Vec<CMatrix>,
}

impl EquivalenceClass {
    fn witness(&self, block: usize) -> Option<&CMatrix> {
        self.members.iter().position(|&m| m == block).map(|i| &self.witnesses[i])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Decomposition {
    /// Orthogonal projectors `P_j`, summing to the identity.
    pub projectors: Vec<CMatrix>,
    /// Isometries `V_j` with `P_j = V_j V_j†`.
    pub bases: Vec<CMatrix>,
    /// Blocks `h_j = V_j† h V_j`.
    pub blocks: Vec<CMatrix>,
    pub classes: Vec<EquivalenceClass>,
    /// Class index of every block.
    pub class_of: Vec<usize>,
    /// Singular-value threshold used to decide commutant membership.
    pub threshold: f64,
}

impl Decomposition {
    /// `U_{jℓ}` with `U h_ℓ U† = h_j`, when `j` and `ℓ` are equivalent.
    pub fn intertwiner(&self, j: usize, l: usize) -> Option<CMatrix> {
        if self.class_of[j] != self.class_of[l] {
            return None;
        }
        let class = &self.classes[self.class_of[j]];
        Some(class.witness(j)?.adjoint() * class.witness(l)?)
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// `Σ_j P_j h P_j`, equal to `h` for a valid splitting.
    pub fn reassemble(&self) -> CMatrix {
        let n = self.projectors.first().map_or(0, |p| p.nrows());
        let mut out = CMatrix::zeros(n, n);
        for (v, b) in self.bases.iter().zip(&self.blocks) {
            out += v * b * v.adjoint();
        }
        out
    }
}

/// Linear map `X ↦ (Xa − bX)` on row-major vectorized `X`.
fn intertwining_operator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (na, nb) = (a.nrows(), b.nrows());
    kron(&identity(nb), &a.transpose()) - kron(b, &identity(na))
}

fn stack(top: &CMatrix, bottom: &CMatrix) -> CMatrix {
    let mut out = CMatrix::zeros(top.nrows() + bottom.nrows(), top.ncols());
    out.view_mut((0, 0), top.shape()).copy_from(top);
    out.view_mut((top.nrows(), 0), bottom.shape()).copy_from(bottom);
    out
}

/// Basis of the commutant `{X : [X,h] = [X,h†] = 0}` as matrices.
pub fn commutant(h: &CMatrix, threshold: f64) -> Vec<CMatrix> {
    let n = h.nrows();
    let system = stack(&intertwining_operator(h, h), &intertwining_operator(&h.adjoint(), &h.adjoint()));
    let (kernel, _) = null_space(&system, threshold);
    kernel.column_iter().map(|col| unvectorize(&col.into_owned(), n)).collect()
}

fn decomposition_threshold(h: &CMatrix) -> f64 {
    1e-9 * h.norm().max(f64::MIN_POSITIVE)
}

/// Maximal splitting `h = ⊕_j h_j` into indecomposable parts, with
/// equivalent parts grouped.
pub fn decompose(h: &CMatrix) -> Result<Decomposition> {
    let n = ensure_square(h)?;
    let threshold = decomposition_threshold(h);
    let mut rng = Rng64::seeded(DECOMPOSE_SEED);
    let mut bases = Vec::new();
    split_recursive(h, identity(n), threshold, &mut rng, &mut bases);

    let key = |v: &CMatrix| (0..v.nrows()).position(|i| v.row(i).norm() > 1e-6).unwrap_or(usize::MAX);
    bases.sort_by_key(|v| key(v));
    let blocks: Vec<CMatrix> = bases.iter().map(|v| v.adjoint() * h * v).collect();
    let projectors = bases.iter().map(|v| v * v.adjoint()).collect();
    let classes = equivalence_classes_scaled(&blocks, h.norm());
    let mut class_of = vec![0; blocks.len()];
    for (k, class) in classes.iter().enumerate() {
        for &m in &class.members {
            class_of[m] = k;
        }
    }
    Ok(Decomposition { projectors, bases, blocks, classes, class_of, threshold })
}

fn split_recursive(h: &CMatrix, basis: CMatrix, threshold: f64, rng: &mut Rng64, out: &mut Vec<CMatrix>) {
    let local = basis.adjoint() * h * &basis;
    let comm = commutant(&local, threshold);
    if comm.len() <= 1 {
        out.push(basis);
        return;
    }
    let parts = best_spectral_split(&comm, rng);
    if parts.len() <= 1 {
        out.push(basis);
        return;
    }
    for part in parts {
        split_recursive(h, &basis * part, threshold, rng, out);
    }
}

/// Eigenspaces of random Hermitian commutant elements; the draw with the
/// widest relative eigenvalue gap is kept.
fn best_spectral_split(comm: &[CMatrix], rng: &mut Rng64) -> Vec<CMatrix> {
    let n = comm[0].nrows();
    let mut best: Option<(f64, Vec<CMatrix>)> = None;
    for _ in 0..6 {
        let coeffs = random_vector(rng, comm.len());
        let mut x = CMatrix::zeros(n, n);
        for (coef, m) in coeffs.iter().zip(comm) {
            x += m * *coef;
        }
        let x = (&x + x.adjoint()) * c(0.5, 0.0);
        let eig = hermitian_eigen(&x);
        let spread = eig.values[n - 1] - eig.values[0];
        if spread <= 0.0 {
            continue;
        }
        let mut groups: Vec<Vec<usize>> = vec![vec![0]];
        let mut min_gap = f64::INFINITY;
        for k in 1..n {
            let gap = eig.values[k] - eig.values[k - 1];
            if gap > 1e-8 * spread {
                min_gap = min_gap.min(gap);
                groups.push(vec![k]);
            } else {
                groups.last_mut().expect("nonempty").push(k);
            }
        }
        let score = min_gap / spread;
        if best.as_ref().is_none_or(|(s, _)| score > *s) {
            let parts = groups
                .iter()
                .map(|g| {
                    let cols: Vec<CVector> = g.iter().map(|&k| eig.vectors.column(k).into_owned()).collect();
                    columns_to_matrix(n, &cols)
                })
                .collect();
            best = Some((score, parts));
        }
        if score > 0.05 {
            break;
        }
    }
    best.map(|(_, p)| p).unwrap_or_default()
}

/// Unitary invariants used to reject inequivalent blocks before solving for
/// an intertwiner: traces of all words in `h`, `h†` up to length 4.
fn word_traces(h: &CMatrix) -> Vec<Complex64> {
    let hd = h.adjoint();
    let mut out = Vec::new();
    let mut layer = vec![identity(h.nrows())];
    for _ in 0..4 {
        let mut next = Vec::with_capacity(layer.len() * 2);
        for w in &layer {
            next.push(w * h);
            next.push(w * &hd);
        }
        out.extend(next.iter().map(|w| w.trace()));
        layer = next;
    }
    out
}

fn sorted_eigenvalues(h: &CMatrix) -> Vec<Complex64> {
    let mut ev = crate::linalg::eigenvalues(h);
    ev.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    ev
}

/// Unitary `U` with `U b U† = a`, if one exists within `tol`.
pub fn find_intertwiner(a: &CMatrix, b: &CMatrix, tol: f64) -> Option<CMatrix> {
    let n = a.nrows();
    if b.nrows() != n {
        return None;
    }
    // U b = a U and U b† = a† U
    let system = stack(&intertwining_operator(b, a), &intertwining_operator(&b.adjoint(), &a.adjoint()));
    let candidates = smallest_right_singular_vectors(&system);
    let v = &candidates[0].1;
    let u = polar_unitary(&unvectorize(v, n));
    ((&u * b * u.adjoint() - a).norm() <= tol).then_some(u)
}

/// Partition of blocks into unitary-equivalence classes, with witnesses.
pub fn equivalence_classes(blocks: &[CMatrix]) -> Vec<EquivalenceClass> {
    let scale = blocks.iter().map(|b| b.norm()).fold(0.0, f64::max);
    equivalence_classes_scaled(blocks, scale)
}

fn equivalence_classes_scaled(blocks: &[CMatrix], scale: f64) -> Vec<EquivalenceClass> {
    let tol = 1e-8 * scale.max(f64::MIN_POSITIVE);
    let invariants: Vec<(Vec<Complex64>, Vec<Complex64>)> =
        blocks.iter().map(|b| (sorted_eigenvalues(b), word_traces(b))).collect();
    let loose = |len: usize| 1e-6 * scale.max(1.0).powi(len as i32) * blocks.len().max(1) as f64;
    let mut classes: Vec<EquivalenceClass> = Vec::new();
    'blocks: for (k, block) in blocks.iter().enumerate() {
        for class in classes.iter_mut() {
            let rep = class.members[0];
            let rep_block = &blocks[rep];
            if rep_block.nrows() != block.nrows() || (rep_block.norm() - block.norm()).abs() > 1e-8 * scale.max(1.0)
            {
                continue;
            }
            let (ev_a, tr_a) = &invariants[rep];
            let (ev_b, tr_b) = &invariants[k];
            if ev_a.iter().zip(ev_b).any(|(x, y)| (x - y).norm() > 1e-4 * scale.max(1.0)) {
                continue;
            }
            let mut len = 1;
            let mut width = 2;
            let mut idx = 0;
            let mut rejected = false;
            for (x, y) in tr_a.iter().zip(tr_b) {
                if (x - y).norm() > loose(len) {
                    rejected = true;
                    break;
                }
                idx += 1;
                if idx == width {
                    idx = 0;
                    width *= 2;
                    len += 1;
                }
            }
            if rejected {
                continue;
            }
            if let Some(w) = find_intertwiner(rep_block, block, tol) {
                class.members.push(k);
                class.witnesses.push(w);
                continue 'blocks;
            }
        }
        classes.push(EquivalenceClass { members: vec![k], witnesses: vec![identity(block.nrows())] });
    }
    classes
}

/// Ordering policy for the diagonal of a Schur form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EigenvalueOrder {
    #[default]
    AsComputed,
    ZerosFirst,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchurForm {
    pub u: CMatrix,
    pub t: CMatrix,
}

/// `h = U T U†` with `T` upper triangular and its first superdiagonal real
/// nonnegative.
pub fn schur_triangulate(h: &CMatrix, order: EigenvalueOrder) -> Result<SchurForm> {
    let n = ensure_square(h)?;
    let (mut u, mut t) = complex_schur(h);
    if order == EigenvalueOrder::ZerosFirst {
        let tol = zero_tolerance(h);
        schur_reorder(&mut u, &mut t, |z| z.norm() <= tol);
    }
    // diagonal phase gauge: T ← D† T D, U ← U D
    let mut phases = vec![c(1.0, 0.0); n];
    for k in 1..n {
        let z = t[(k - 1, k)];
        phases[k] = if z.norm() > 0.0 { phases[k - 1] * z.conj() / z.norm() } else { phases[k - 1] };
    }
    for i in 0..n {
        for j in 0..n {
            t[(i, j)] *= phases[i].conj() * phases[j];
            u[(i, j)] *= phases[j];
        }
    }
    for k in 1..n {
        t[(k - 1, k)] = c(t[(k - 1, k)].re.max(0.0), 0.0);
    }
    Ok(SchurForm { u, t })
}

/// `|λ| ≤ 1e−10·max(1,‖h‖)` classifies `λ` as zero.
pub fn zero_tolerance(h: &CMatrix) -> f64 {
    1e-10 * h.norm().max(1.0)
}

/// Checks that `P` is an orthogonal projector.
pub fn ensure_projector(p: &CMatrix) -> Result<()> {
    ensure_square(p)?;
    let deviation = (p * p - p).norm().max((p - p.adjoint()).norm());
    if deviation > 1e-10 * p.norm().max(1.0) {
        return Err(Error::NotProjector { deviation });
    }
    Ok(())
}

/// True when the range of `P` is invariant under `h` (`hP = PhP`).
pub fn is_lazy_subspace(h: &CMatrix, p: &CMatrix) -> Result<bool> {
    let n = ensure_square(h)?;
    crate::linalg::ensure_same_dim(n, p)?;
    ensure_projector(p)?;
    Ok((h * p - p * h * p).norm() <= 1e-10 * h.norm())
}

#[derive(Debug, Clone, PartialEq)]
pub struct EigenvalueChains {
    pub eigenvalue: Complex64,
    pub algebraic_multiplicity: usize,
    /// Each chain is `[ψ₀, ψ₁, …]` with `(h−λ)ψ₀ = 0`, `(h−λ)ψ_m = ψ_{m−1}`.
    pub chains: Vec<Vec<CVector>>,
}

impl EigenvalueChains {
    pub fn geometric_multiplicity(&self) -> usize {
        self.chains.len()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct JordanStructure {
    pub eigenvalues: Vec<EigenvalueChains>,
}

/// Jordan chains of `h`, computed cluster by cluster on a reordered Schur form.
pub fn jordan_structure(h: &CMatrix) -> Result<JordanStructure> {
    let n = ensure_square(h)?;
    let scale = h.norm().max(1.0);
    let cluster_tol = 1e-8 * scale;
    let (u0, t0) = complex_schur(h);

    let mut centers: Vec<(Complex64, usize)> = Vec::new();
    for k in 0..n {
        let z = t0[(k, k)];
        match centers.iter_mut().find(|(c0, _)| (c0 - z).norm() <= cluster_tol) {
            Some(entry) => entry.1 += 1,
            None => centers.push((z, 1)),
        }
    }

    let mut out = Vec::new();
    for (center, _) in centers {
        let (mut u, mut t) = (u0.clone(), t0.clone());
        schur_reorder(&mut u, &mut t, |z| (z - center).norm() <= cluster_tol);
        let m = (0..n).take_while(|&k| (t[(k, k)] - center).norm() <= cluster_tol).count();
        let mean = (0..m).map(|k| t[(k, k)]).sum::<Complex64>() / c(m as f64, 0.0);
        let mut nil = t.view((0, 0), (m, m)).into_owned();
        for k in 0..m {
            nil[(k, k)] = c(0.0, 0.0);
        }
        let basis = u.columns(0, m).into_owned();
        let chains = nilpotent_chains(&nil, scale)
            .into_iter()
            .map(|chain| chain.into_iter().map(|v| &basis * v).collect())
            .collect();
        out.push(EigenvalueChains { eigenvalue: mean, algebraic_multiplicity: m, chains });
    }
    Ok(JordanStructure { eigenvalues: out })
}

/// Jordan chains of a strictly upper triangular matrix.
fn nilpotent_chains(nil: &CMatrix, scale: f64) -> Vec<Vec<CVector>> {
    let m = nil.nrows();
    let mut powers = vec![identity(m)];
    let mut kernels: Vec<CMatrix> = vec![CMatrix::zeros(m, 0)];
    for k in 1..=m {
        let p = &powers[k - 1] * nil;
        let (ker, _) = null_space(&p, 1e-8 * scale.powi(k as i32));
        let done = ker.ncols() == m;
        powers.push(p);
        kernels.push(ker);
        if done {
            break;
        }
    }
    let top = kernels.len() - 1;
    let mut heads: Vec<(usize, CVector)> = Vec::new();
    for level in (1..=top).rev() {
        let dim_here = kernels[level].ncols();
        let dim_below = kernels[level - 1].ncols();
        let needed = dim_here.saturating_sub(dim_below);
        // vectors at this level already produced by longer chains
        let mut span: Vec<CVector> = kernels[level - 1].column_iter().map(|c| c.into_owned()).collect();
        for (head_level, head) in &heads {
            span.push(&powers[head_level - level] * head);
        }
        let existing = heads.len();
        if needed <= existing {
            continue;
        }
        let span_basis = orthonormal_span(&columns_to_matrix(m, &span), 1e-8);
        let complement = identity(m) - &span_basis * span_basis.adjoint();
        let candidates = orthonormal_span(&(&complement * &kernels[level]), 1e-6);
        for col in candidates.column_iter().take(needed - existing) {
            heads.push((level, col.into_owned()));
        }
    }
    heads
        .into_iter()
        .map(|(len, head)| (0..len).rev().map(|k| &powers[k] * &head).collect())
        .collect()
}

/// Projectors onto the invariant subspaces spanned by chain prefixes: every
/// nonempty choice of one prefix length per Jordan chain.
pub fn canonical_lazy_subspaces(h: &CMatrix) -> Result<Vec<CMatrix>> {
    let n = ensure_square(h)?;
    let jordan = jordan_structure(h)?;
    let chains: Vec<&Vec<CVector>> = jordan.eigenvalues.iter().flat_map(|e| e.chains.iter()).collect();
    let mut lengths = vec![0usize; chains.len()];
    let mut out: Vec<(usize, Vec<usize>, CMatrix)> = Vec::new();
    loop {
        // odometer over prefix lengths
        let mut k = 0;
        while k < chains.len() {
            if lengths[k] < chains[k].len() {
                lengths[k] += 1;
                break;
            }
            lengths[k] = 0;
            k += 1;
        }
        if k == chains.len() {
            break;
        }
        let vectors: Vec<CVector> =
            chains.iter().zip(&lengths).flat_map(|(ch, &len)| ch[..len].iter().cloned()).collect();
        let q = orthonormal_span(&columns_to_matrix(n, &vectors), 1e-10);
        out.push((q.ncols(), lengths.clone(), &q * q.adjoint()));
    }
    out.sort_by(|a, b| a.0.cmp(&b.0).then_with(|| b.1.cmp(&a.1)));
    Ok(out.into_iter().map(|(_, _, p)| p).collect())
}
