//! Closed forms for a qubit with triangulated `h = [[a, b], [0, d]]`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{c, CMatrix, ZERO};
use crate::state::DensityMatrix;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitParams {
    pub a: Complex64,
    pub b: Complex64,
    pub d: Complex64,
}

impl QubitParams {
    pub fn new(a: Complex64, b: Complex64, d: Complex64) -> Self {
        QubitParams { a, b, d }
    }

    pub fn real(a: f64, b: f64, d: f64) -> Self {
        QubitParams { a: c(a, 0.0), b: c(b, 0.0), d: c(d, 0.0) }
    }

    pub fn h(&self) -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[self.a, self.b, ZERO, self.d])
    }

    /// `‖h‖₂² = |a|² + |b|² + |d|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr() + self.d.norm_sqr()
    }
}

/// `[[1−s, q], [q*, s]]` with `s = |a|²/‖h‖²`, `q = −a*b/‖h‖²`.
pub fn qubit_stationary(p: &QubitParams) -> Result<DensityMatrix> {
    let total = p.norm_sqr();
    if p.b.norm() <= 1e-12 * total.sqrt().max(1.0) {
        return Err(Error::NotUnique);
    }
    let s = p.a.norm_sqr() / total;
    let q = -p.a.conj() * p.b / total;
    DensityMatrix::new(CMatrix::from_row_slice(2, 2, &[c(1.0 - s, 0.0), q, q.conj(), c(s, 0.0)]))
}

/// The 3×3 matrix acting on `(q, p, s)` of a traceless eigenmatrix
/// `[[−s, q], [p, s]]`.
pub fn traceless_block(p: &QubitParams) -> [[Complex64; 3]; 3] {
    let (a, b, d) = (p.a, p.b, p.d);
    let half_norm = c(p.norm_sqr() / 2.0, 0.0);
    [
        [a * d.conj() - half_norm, ZERO, b * d.conj()],
        [ZERO, a.conj() * d - half_norm, b.conj() * d],
        [-a * b.conj() * 0.5, -a.conj() * b * 0.5, c(-p.b.norm_sqr(), 0.0)],
    ]
}

/// All four eigenvalues of `D_h`: zero and the roots of the characteristic
/// polynomial of [`traceless_block`].
pub fn qubit_spectrum(p: &QubitParams) -> Vec<Complex64> {
    if p.a.norm() == 0.0 {
        let half = c(-p.norm_sqr() / 2.0, 0.0);
        return vec![ZERO, c(-p.b.norm_sqr(), 0.0), half, half];
    }
    let m = traceless_block(p);
    let tr = m[0][0] + m[1][1] + m[2][2];
    let minors = m[0][0] * m[1][1] - m[0][1] * m[1][0] + m[0][0] * m[2][2] - m[0][2] * m[2][0] + m[1][1] * m[2][2]
        - m[1][2] * m[2][1];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    // λ³ + c2 λ² + c1 λ + c0
    let mut roots = cubic_roots([-det, minors, -tr]);
    roots.insert(0, ZERO);
    roots
}

/// Roots of the monic cubic `λ³ + k[2]λ² + k[1]λ + k[0]` by simultaneous
/// (Weierstrass) iteration followed by Newton polishing.
fn cubic_roots(k: [Complex64; 3]) -> Vec<Complex64> {
    let poly = |z: Complex64| ((z + k[2]) * z + k[1]) * z + k[0];
    let dpoly = |z: Complex64| (z * 3.0 + k[2] * 2.0) * z + k[1];
    let radius = 1.0 + k.iter().map(|x| x.norm()).fold(0.0, f64::max);
    let seed = c(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..3).map(|i| seed.powu(i as u32) * radius).collect();
    for _ in 0..2000 {
        let mut change: f64 = 0.0;
        for i in 0..3 {
            let mut denom = c(1.0, 0.0);
            for j in 0..3 {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                continue;
            }
            let step = poly(z[i]) / denom;
            z[i] -= step;
            change = change.max(step.norm());
        }
        if change <= 1e-15 * radius {
            break;
        }
    }
    for root in z.iter_mut() {
        for _ in 0..3 {
            let slope = dpoly(*root);
            if slope.norm() == 0.0 {
                break;
            }
            let step = poly(*root) / slope;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *root -= step;
        }
    }
    z.sort_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    z
}

#[derive(Debug, Clone, PartialEq)]
pub struct QubitEigenmatrices {
    /// Eigenvalues of `σ1, σ2, σ3`: `−|b|²`, `−‖h‖²/2`, `−‖h‖²/2`.
    pub eigenvalues: [f64; 3],
    pub sigma1: CMatrix,
    pub sigma2: CMatrix,
    pub sigma3: CMatrix,
    /// `σ̂1 = diag(1, −1)`, present when `|b| = |d| ≠ 0`.
    pub generalized: Option<CMatrix>,
    /// `D(σ̂1) + |b|²σ̂1 = −(bd*σ2 + b*dσ3)`, which is `−|b|²(σ2 + σ3)` for
    /// `b = d` real.
    pub generalized_image: Option<CMatrix>,
}

/// Eigenmatrices of `D_h` for `a = 0`.
pub fn qubit_eigenmatrices_a0(b: Complex64, d: Complex64) -> QubitEigenmatrices {
    let (bb, dd) = (b.norm_sqr(), d.norm_sqr());
    let sigma1 = CMatrix::from_row_slice(2, 2, &[c(bb - dd, 0.0), b * d.conj() * 2.0, b.conj() * d * 2.0, c(dd - bb, 0.0)]);
    let sigma2 = CMatrix::from_row_slice(2, 2, &[ZERO, c(1.0, 0.0), ZERO, ZERO]);
    let sigma3 = sigma2.transpose();
    let degenerate = bb > 0.0 && (b.norm() - d.norm()).abs() <= 1e-12 * b.norm().max(d.norm());
    let generalized = degenerate.then(|| CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), ZERO, ZERO, c(-1.0, 0.0)]));
    let generalized_image = degenerate.then(|| -(&sigma2 * (b * d.conj()) + &sigma3 * (b.conj() * d)));
    let half = -(bb + dd) / 2.0;
    QubitEigenmatrices { eigenvalues: [-bb, half, half], sigma1, sigma2, sigma3, generalized, generalized_image }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EmergenceConstants {
    /// `½|a|²|b|²|a−d|²`.
    pub third: f64,
    /// `⅞|a|²|b|⁶`, stated for `a = d` only.
    pub fourth: Option<f64>,
}

/// Quoted closed-form derivatives at `t = 0` of the eigenvalue emerging from
/// the lazy state `diag(1, 0)`.
///
/// The fourth-order constant is reproduced as stated; the exact Taylor
/// expansion for `a = d` starts at fifth order (see the crate tests).
pub fn qubit_emergence_constants(p: &QubitParams) -> EmergenceConstants {
    let (aa, bb) = (p.a.norm_sqr(), p.b.norm_sqr());
    let gap = (p.a - p.d).norm_sqr();
    let equal = (p.a - p.d).norm() <= 1e-12 * p.norm_sqr().sqrt().max(1.0);
    EmergenceConstants { third: 0.5 * aa * bb * gap, fourth: equal.then(|| 0.875 * aa * bb.powi(3)) }
}
