//! Stationary states of simple generators and the inverse design of a
//! generator with a prescribed unique stationary state.

use crate::error::{Error, Result};
use crate::generator::apply_simple_generator;
use crate::linalg::{
    basis_vector, c, canonical_phase_vector, columns_to_matrix, ensure_square, gram_schmidt, hermitian_eigen,
    hermitian_function, identity, is_normal, null_space, outer, singular_values_desc, CMatrix, CVector,
};
use crate::state::{DensityMatrix, Tolerances};
use crate::structure::{decompose, find_intertwiner, Decomposition};

/// Stationary behaviour of one indecomposable block, embedded in the full space.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockStationary {
    /// Invertible block: a unique stationary state of full rank on the block.
    UniqueInterior { state: CMatrix },
    /// Block with zero eigenvalues: every state supported on the span of the
    /// proper zero-eigenvectors is stationary.
    AttractiveFace { projector: CMatrix },
}

impl BlockStationary {
    pub fn tag(&self) -> &'static str {
        match self {
            BlockStationary::UniqueInterior { .. } => "UniqueInterior",
            BlockStationary::AttractiveFace { .. } => "AttractiveFace",
        }
    }

    /// Dimension of the stationary matrices supported on this block.
    pub fn dimension(&self) -> usize {
        match self {
            BlockStationary::UniqueInterior { .. } => 1,
            BlockStationary::AttractiveFace { projector } => {
                let k = projector.trace().re.round() as usize;
                k * k
            }
        }
    }
}

/// Invariant off-diagonal blocks `P_j ρ P_ℓ` between two parts.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRelation {
    pub blocks: (usize, usize),
    /// Linearly independent stationary matrices `V_j Q V_ℓ†`.
    pub basis: Vec<CMatrix>,
}

/// Eigenbasis and degeneracy pattern of a normal `h`: the stationary states
/// are exactly the states commuting with `h`.
#[derive(Debug, Clone, PartialEq)]
pub struct CommutantDescription {
    pub eigenbasis: CMatrix,
    pub degeneracies: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StationarySet {
    pub decomposition: Decomposition,
    pub blocks: Vec<BlockStationary>,
    pub commutant: Option<CommutantDescription>,
    pub phase_relations: Vec<PhaseRelation>,
    /// Largest `‖D_h(X)‖_F` over all emitted stationary matrices.
    pub residual: f64,
    /// Residual bound `tol·‖h‖²`.
    pub tolerance: f64,
}

impl StationarySet {
    pub fn kind(&self) -> &'static str {
        if self.blocks.len() == 1 {
            self.blocks[0].tag()
        } else if self.commutant.is_some() {
            "Commutant"
        } else {
            "Composite"
        }
    }

    /// Dimension of the linear space of stationary matrices.
    pub fn dimension(&self) -> usize {
        self.blocks.iter().map(BlockStationary::dimension).sum::<usize>()
            + self.phase_relations.iter().map(|p| p.basis.len()).sum::<usize>()
    }

    /// The stationary state, when it is unique.
    pub fn unique_state(&self) -> Option<DensityMatrix> {
        if self.blocks.len() != 1 {
            return None;
        }
        match &self.blocks[0] {
            BlockStationary::UniqueInterior { state } => DensityMatrix::with_tolerance(state.clone(), 1e-10).ok(),
            BlockStationary::AttractiveFace { projector } if projector.trace().re.round() as usize == 1 => {
                DensityMatrix::with_tolerance(projector.clone(), 1e-10).ok()
            }
            _ => None,
        }
    }
}

/// True when `h` is singular, judged by its smallest singular value; more
/// robust than eigenvalues for defective zero eigenvalues.
pub fn has_zero_eigenvalue(h: &CMatrix, zero_tol: f64) -> bool {
    let s = singular_values_desc(h);
    s.last().is_none_or(|&min| min <= zero_tol * h.norm().max(1.0))
}

fn kernel_basis(h: &CMatrix, zero_tol: f64) -> CMatrix {
    null_space(h, zero_tol * h.norm().max(1.0)).0
}

fn interior_formula(h: &CMatrix) -> CMatrix {
    let inv = hermitian_function(&(h.adjoint() * h), |x| 1.0 / x);
    let tr = inv.trace();
    inv / tr
}

/// `ρ∞ = (h†h)⁻¹ / Tr (h†h)⁻¹` for indecomposable invertible `h`.
pub fn interior_stationary(h: &CMatrix) -> Result<DensityMatrix> {
    ensure_square(h)?;
    if has_zero_eigenvalue(h, Tolerances::default().zero) {
        return Err(Error::ZeroEigenvalue);
    }
    let parts = decompose(h)?.len();
    if parts > 1 {
        return Err(Error::Decomposable { blocks: parts });
    }
    DensityMatrix::with_tolerance(interior_formula(h), 1e-10)
}

/// Projector onto the proper zero-eigenvectors of `h`.
pub fn attractive_face(h: &CMatrix) -> Result<CMatrix> {
    ensure_square(h)?;
    let zero = Tolerances::default().zero;
    if !has_zero_eigenvalue(h, zero) {
        return Err(Error::NoZeroEigenvalue);
    }
    let k = kernel_basis(h, zero);
    Ok(&k * k.adjoint())
}

/// Basis of stationary off-diagonal blocks `Q` between two indecomposable
/// parts: `{|v⟩⟨w|}` over kernel vectors when both are singular,
/// `{U ρ_ℓ}` when they are unitarily equivalent and invertible, else empty.
pub fn phase_relation_invariants(h_j: &CMatrix, h_l: &CMatrix) -> Result<Vec<CMatrix>> {
    for h in [h_j, h_l] {
        ensure_square(h)?;
        let parts = decompose(h)?.len();
        if parts > 1 {
            return Err(Error::Decomposable { blocks: parts });
        }
    }
    Ok(phase_relations_unchecked(h_j, h_l, Tolerances::default().zero))
}

fn phase_relations_unchecked(h_j: &CMatrix, h_l: &CMatrix, zero_tol: f64) -> Vec<CMatrix> {
    let zj = has_zero_eigenvalue(h_j, zero_tol);
    let zl = has_zero_eigenvalue(h_l, zero_tol);
    if zj && zl {
        let kj = kernel_basis(h_j, zero_tol);
        let kl = kernel_basis(h_l, zero_tol);
        let mut out = Vec::new();
        for v in kj.column_iter() {
            for w in kl.column_iter() {
                out.push(outer(&v.into_owned(), &w.into_owned()));
            }
        }
        return out;
    }
    if zj || zl || h_j.nrows() != h_l.nrows() {
        return Vec::new();
    }
    let scale = h_j.norm().max(h_l.norm());
    match find_intertwiner(h_j, h_l, 1e-8 * scale.max(f64::MIN_POSITIVE)) {
        Some(u) => vec![u * interior_formula(h_l)],
        None => Vec::new(),
    }
}

pub fn classify_stationary(h: &CMatrix) -> Result<StationarySet> {
    classify_stationary_with(h, &Tolerances::default())
}

/// Complete stationary set of `D_h`, assembled from the indecomposable parts
/// of `h` and the invariant phase relations between them.
pub fn classify_stationary_with(h: &CMatrix, tol: &Tolerances) -> Result<StationarySet> {
    ensure_square(h)?;
    let decomposition = decompose(h)?;
    let mut blocks = Vec::new();
    for (v, b) in decomposition.bases.iter().zip(&decomposition.blocks) {
        let entry = if has_zero_eigenvalue(b, tol.zero) {
            let k = v * kernel_basis(b, tol.zero);
            BlockStationary::AttractiveFace { projector: &k * k.adjoint() }
        } else {
            BlockStationary::UniqueInterior { state: v * interior_formula(b) * v.adjoint() }
        };
        blocks.push(entry);
    }

    let mut phase_relations = Vec::new();
    let parts = decomposition.len();
    for j in 0..parts {
        for l in 0..parts {
            if j == l {
                continue;
            }
            let (hj, hl) = (&decomposition.blocks[j], &decomposition.blocks[l]);
            let local = if decomposition.class_of[j] == decomposition.class_of[l]
                && !has_zero_eigenvalue(hj, tol.zero)
            {
                let u = decomposition.intertwiner(j, l).expect("same class");
                vec![u * interior_formula(hl)]
            } else {
                phase_relations_unchecked(hj, hl, tol.zero)
            };
            if !local.is_empty() {
                let (vj, vl) = (&decomposition.bases[j], &decomposition.bases[l]);
                let basis = local.into_iter().map(|q| vj * q * vl.adjoint()).collect();
                phase_relations.push(PhaseRelation { blocks: (j, l), basis });
            }
        }
    }

    let commutant = (parts > 1 && is_normal(h)).then(|| {
        let cols: Vec<CVector> =
            decomposition.bases.iter().flat_map(|v| v.column_iter().map(|c| c.into_owned())).collect();
        CommutantDescription {
            eigenbasis: columns_to_matrix(h.nrows(), &cols),
            degeneracies: decomposition.classes.iter().map(|cl| cl.members.len()).collect(),
        }
    });

    let mut residual: f64 = 0.0;
    let mut check = |m: &CMatrix| -> Result<()> {
        residual = residual.max(apply_simple_generator(h, m)?.norm());
        Ok(())
    };
    for b in &blocks {
        match b {
            BlockStationary::UniqueInterior { state } => check(state)?,
            BlockStationary::AttractiveFace { projector } => check(projector)?,
        }
    }
    for rel in &phase_relations {
        for m in &rel.basis {
            check(m)?;
        }
    }
    let tolerance = tol.stationary * h.norm_squared().max(f64::MIN_POSITIVE);
    if residual > tolerance {
        return Err(Error::NumericalFailure(format!(
            "stationary residual {residual:e} exceeds {tolerance:e}"
        )));
    }
    Ok(StationarySet { decomposition, blocks, commutant, phase_relations, residual, tolerance })
}

/// Indecomposable `h` whose unique stationary state is `rho`.
///
/// Pure targets get the shift `Σ_j |φ_j⟩⟨φ_{j+1}|` ending on the target
/// vector `φ₀`; full-rank targets get `h = U ρ^{−1/2}` with `U` the cyclic
/// shift in an eigenbasis of `ρ`.
pub fn design_generator(rho: &DensityMatrix) -> Result<CMatrix> {
    let n = rho.dim();
    let eig = hermitian_eigen(rho.matrix());
    let top = eig.values[n - 1];
    if top >= 1.0 - 1e-10 {
        let phi0 = canonical_phase_vector(&eig.vectors.column(n - 1).into_owned());
        let mut seed = vec![phi0];
        seed.extend((0..n).map(|i| basis_vector(n, i)));
        let phis = gram_schmidt(&seed, 1e-8);
        let mut h = CMatrix::zeros(n, n);
        for j in 0..n - 1 {
            h += outer(&phis[j], &phis[j + 1]);
        }
        return Ok(h);
    }
    if (rho.matrix() - identity(n) / c(n as f64, 0.0)).norm() <= 1e-12 {
        return Err(Error::MaximallyMixed);
    }
    if eig.values[0] <= 1e-10 {
        return Err(Error::NotUniquelyDesignable);
    }

    let basis = ordered_eigenbasis(rho.matrix(), &eig.values, &eig.vectors);
    let inv_sqrt = hermitian_function(rho.matrix(), |x| 1.0 / x.sqrt());
    // try the descending order first, then deterministic rotations of it
    for shift in 0..n {
        let phis: Vec<CVector> = (0..n).map(|j| basis[(j + shift) % n].clone()).collect();
        let mut u = CMatrix::zeros(n, n);
        for j in 0..n {
            u += outer(&phis[j], &phis[(j + 1) % n]);
        }
        let h = u * &inv_sqrt;
        if decompose(&h)?.len() == 1 {
            return Ok(h);
        }
    }
    Err(Error::NumericalFailure("designed operator is not indecomposable".into()))
}

/// Eigenvectors sorted by descending eigenvalue; inside a degenerate
/// eigenspace the basis comes from projecting standard basis vectors in
/// index order, so the choice is reproducible.
fn ordered_eigenbasis(rho: &CMatrix, values: &[f64], vectors: &CMatrix) -> Vec<CVector> {
    let n = rho.nrows();
    let mut order: Vec<usize> = (0..n).rev().collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]));
    let mut out = Vec::with_capacity(n);
    let mut k = 0;
    while k < n {
        let mut group = vec![order[k]];
        while k + group.len() < n && (values[order[k + group.len()]] - values[order[k]]).abs() <= 1e-10 {
            group.push(order[k + group.len()]);
        }
        let cols: Vec<CVector> = group.iter().map(|&g| vectors.column(g).into_owned()).collect();
        let q = columns_to_matrix(n, &cols);
        let proj = &q * q.adjoint();
        let projected: Vec<CVector> = (0..n).map(|i| &proj * basis_vector(n, i)).collect();
        out.extend(gram_schmidt(&projected, 1e-6).into_iter().take(group.len()).map(|v| canonical_phase_vector(&v)));
        k += group.len();
    }
    out
}
