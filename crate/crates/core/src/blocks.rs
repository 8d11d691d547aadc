//! Block-matrix form of the generator for a two-way splitting of the space,
//! and closed forms for the decay of off-diagonal blocks.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{c, ensure_square, hermitian_eigen, identity, CMatrix};

/// `h = [[A, B], [C, D]]` and `σ = [[R, Q], [M, S]]` for the splitting into
/// the first `k` basis vectors and the rest.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSplit {
    pub a: CMatrix,
    pub b: CMatrix,
    pub c: CMatrix,
    pub d: CMatrix,
    pub r: CMatrix,
    pub q: CMatrix,
    pub m: CMatrix,
    pub s: CMatrix,
}

fn corners(x: &CMatrix, k: usize) -> [CMatrix; 4] {
    let n = x.nrows();
    [
        x.view((0, 0), (k, k)).into_owned(),
        x.view((0, k), (k, n - k)).into_owned(),
        x.view((k, 0), (n - k, k)).into_owned(),
        x.view((k, k), (n - k, n - k)).into_owned(),
    ]
}

fn join(tl: &CMatrix, tr: &CMatrix, bl: &CMatrix, br: &CMatrix) -> CMatrix {
    let k = tl.nrows();
    let n = k + br.nrows();
    let mut out = CMatrix::zeros(n, n);
    out.view_mut((0, 0), (k, k)).copy_from(tl);
    out.view_mut((0, k), (k, n - k)).copy_from(tr);
    out.view_mut((k, 0), (n - k, k)).copy_from(bl);
    out.view_mut((k, k), (n - k, n - k)).copy_from(br);
    out
}

impl BlockSplit {
    pub fn new(h: &CMatrix, sigma: &CMatrix, k: usize) -> Result<Self> {
        let n = ensure_square(h)?;
        crate::linalg::ensure_same_dim(n, sigma)?;
        if k == 0 || k >= n {
            return Err(Error::InvalidArgument(format!("split point {k} must lie strictly inside 0..{n}")));
        }
        let [a, b, c, d] = corners(h, k);
        let [r, q, m, s] = corners(sigma, k);
        Ok(BlockSplit { a, b, c, d, r, q, m, s })
    }

    pub fn h(&self) -> CMatrix {
        join(&self.a, &self.b, &self.c, &self.d)
    }

    pub fn sigma(&self) -> CMatrix {
        join(&self.r, &self.q, &self.m, &self.s)
    }

    fn scale(&self) -> f64 {
        self.h().norm().max(1.0)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BlockDerivatives {
    pub rdot: CMatrix,
    pub qdot: CMatrix,
    pub mdot: CMatrix,
    pub sdot: CMatrix,
}

impl BlockDerivatives {
    pub fn assemble(&self) -> CMatrix {
        join(&self.rdot, &self.qdot, &self.mdot, &self.sdot)
    }
}

/// Which closed-form block equations to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockBranch {
    /// `C = 0`, general `σ`.
    Triangulated,
    /// `Q = M = S = 0`, general `h`.
    Boundary,
}

/// Blockwise `D_h(σ)`.
pub fn block_derivatives(split: &BlockSplit, branch: BlockBranch) -> Result<BlockDerivatives> {
    let BlockSplit { a, b, c: cc, d, r, q, m, s } = split;
    let half = c(0.5, 0.0);
    let (ad, bd, cd, dd) = (a.adjoint(), b.adjoint(), cc.adjoint(), d.adjoint());
    match branch {
        BlockBranch::Triangulated => {
            let norm = cc.norm();
            if norm > 1e-12 * split.scale() {
                return Err(Error::NotTriangular { norm });
            }
            let ata = &ad * a;
            let lower = &bd * b + &dd * d;
            let rdot = a * r * &ad + b * m * &ad + a * q * &bd + b * s * &bd
                - (&ata * r + &ad * b * m + r * &ata + q * &bd * a) * half;
            let qdot = a * q * &dd + b * s * &dd - (&ata * q + &ad * b * s + r * &ad * b + q * &lower) * half;
            let mdot = d * m * &ad + d * s * &bd - (&bd * a * r + &lower * m + m * &ata + s * &bd * a) * half;
            let sdot = d * s * &dd - (&bd * a * q + &lower * s + m * &ad * b + s * &lower) * half;
            Ok(BlockDerivatives { rdot, qdot, mdot, sdot })
        }
        BlockBranch::Boundary => {
            let rest = q.norm() + m.norm() + s.norm();
            if rest > 1e-12 * split.sigma().norm().max(1.0) {
                return Err(Error::InvalidArgument(format!(
                    "boundary formulas need Q = M = S = 0 (found norm {rest:e})"
                )));
            }
            let k11 = &ad * a + &cd * cc;
            let rdot = a * r * &ad - (&k11 * r + r * &k11) * half;
            let qdot = a * r * &cd - r * (&ad * b + &cd * d) * half;
            let mdot = cc * r * &ad - (&bd * a + &dd * cc) * r * half;
            let sdot = cc * r * &cd;
            Ok(BlockDerivatives { rdot, qdot, mdot, sdot })
        }
    }
}

/// Time derivative `A Q D† − ½(A†A Q + Q D†D)` of the block `Q` between two
/// parts `h_j = A`, `h_ℓ = D` of a decomposed `h`.
pub fn off_diagonal_derivative(h_j: &CMatrix, h_l: &CMatrix, q: &CMatrix) -> CMatrix {
    h_j * q * h_l.adjoint() - (h_j.adjoint() * h_j * q + q * h_l.adjoint() * h_l) * c(0.5, 0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct DephasingComponent {
    /// Exponential rate `−a_α/2`.
    pub rate: f64,
    /// `Q_α`, the part of `Q(0)` in the eigenspace of `A†A` for `a_α`.
    pub block: CMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub enum DephasingReport {
    /// Both parts one-dimensional: `q(t) = e^{κt} q(0)`.
    ScalarPair { rate: Complex64, modulus_decay_rate: f64 },
    /// `Q(0) D† = 0`: `Q(t) = Σ_α e^{−t a_α/2} Q_α`.
    Annihilated { components: Vec<DephasingComponent> },
    /// `h_ℓ = d` and `(A − d) Q(0) = 0`: the first two derivatives of `‖Q‖²`
    /// vanish and the third is negative.
    CommonEigenvector { norm_derivatives: [f64; 3], third_order_bound: f64 },
}

impl DephasingReport {
    pub fn mode(&self) -> &'static str {
        match self {
            DephasingReport::ScalarPair { .. } => "scalar_pair",
            DephasingReport::Annihilated { .. } => "annihilated",
            DephasingReport::CommonEigenvector { .. } => "common_eigenvector",
        }
    }
}

/// Decay of the phase relation `Q` between the parts `h_j` and `h_ℓ` in the
/// three cases with a closed form; anything else is `Unsupported`.
pub fn dephasing_analysis(h_j: &CMatrix, h_l: &CMatrix, q0: &CMatrix) -> Result<DephasingReport> {
    let nj = ensure_square(h_j)?;
    let nl = ensure_square(h_l)?;
    if q0.nrows() != nj || q0.ncols() != nl {
        return Err(Error::DimensionMismatch { expected: nj * nl, found: q0.nrows() * q0.ncols() });
    }
    let scale = h_j.norm().max(h_l.norm()).max(1.0);
    let tol = 1e-12 * scale * q0.norm().max(1.0);

    if nj == 1 && nl == 1 {
        let (a, d) = (h_j[(0, 0)], h_l[(0, 0)]);
        let rate = a * d.conj() - c(0.5 * (a.norm_sqr() + d.norm_sqr()), 0.0);
        return Ok(DephasingReport::ScalarPair { rate, modulus_decay_rate: 0.5 * (a - d).norm_sqr() });
    }

    if (q0 * h_l.adjoint()).norm() <= tol {
        let eig = hermitian_eigen(&(h_j.adjoint() * h_j));
        let mut components: Vec<DephasingComponent> = Vec::new();
        let cluster = 1e-10 * scale * scale;
        let mut k = 0;
        while k < nj {
            let mut end = k + 1;
            while end < nj && eig.values[end] - eig.values[k] <= cluster {
                end += 1;
            }
            let basis = eig.vectors.columns(k, end - k).into_owned();
            let block = &basis * basis.adjoint() * q0;
            if block.norm() > tol {
                let mean = eig.values[k..end].iter().sum::<f64>() / (end - k) as f64;
                components.push(DephasingComponent { rate: -mean / 2.0, block });
            }
            k = end;
        }
        return Ok(DephasingReport::Annihilated { components });
    }

    if nl == 1 {
        let d = h_l[(0, 0)];
        if ((h_j - identity(nj) * d) * q0).norm() <= tol {
            // Q ↦ M Q with M = d*A − ½(A†A + |d|²)
            let gen = h_j * d.conj() - (h_j.adjoint() * h_j + identity(nj) * c(d.norm_sqr(), 0.0)) * c(0.5, 0.0);
            let norm_derivatives = norm_square_derivatives(&gen, q0);
            let w = (identity(nj) * d.conj() - h_j.adjoint()) * q0 * (d * 0.5);
            let third_order_bound = -w.norm_squared().powi(2) / q0.norm_squared();
            return Ok(DephasingReport::CommonEigenvector { norm_derivatives, third_order_bound });
        }
    }

    Err(Error::Unsupported(
        "phase relation outside the scalar, annihilated and common-eigenvector cases".into(),
    ))
}

/// `d^n/dt^n ‖e^{tM}Q‖² at t = 0` for `n = 1, 2, 3`.
fn norm_square_derivatives(gen: &CMatrix, q: &CMatrix) -> [f64; 3] {
    let mut powers = vec![q.clone()];
    for k in 1..=3 {
        let next = gen * &powers[k - 1];
        powers.push(next);
    }
    let binom = |n: usize, k: usize| -> f64 { (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64) };
    let mut out = [0.0; 3];
    for (slot, n) in out.iter_mut().zip(1..=3) {
        *slot = (0..=n)
            .map(|m| binom(n, m) * crate::linalg::hs_inner(&powers[m], &powers[n - m]).re)
            .sum();
    }
    out
}
