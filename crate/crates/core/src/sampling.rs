//! Seeded random ensembles of operators and states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{c, polar_unitary, CMatrix, CVector};

/// Deterministic generator used for every random ensemble in the crate.
pub struct Rng64(ChaCha8Rng);

impl Rng64 {
    pub fn seeded(seed: u64) -> Self {
        Rng64(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn normal(&mut self) -> f64 {
        self.0.sample(StandardNormal)
    }

    pub fn uniform(&mut self) -> f64 {
        self.0.random::<f64>()
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.0.random_range(0..n)
    }

    pub fn complex_normal(&mut self) -> num_complex::Complex64 {
        c(self.normal(), self.normal()) / 2f64.sqrt()
    }
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn random_matrix(rng: &mut Rng64, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |_, _| rng.complex_normal())
}

pub fn random_vector(rng: &mut Rng64, n: usize) -> CVector {
    CVector::from_fn(n, |_, _| rng.complex_normal())
}

pub fn random_hermitian(rng: &mut Rng64, n: usize) -> CMatrix {
    let a = random_matrix(rng, n);
    (&a + a.adjoint()) * c(0.5, 0.0)
}

/// Haar-distributed unitary (polar factor of a Ginibre matrix).
pub fn random_unitary(rng: &mut Rng64, n: usize) -> CMatrix {
    polar_unitary(&random_matrix(rng, n))
}

/// Full-rank density matrix `G G† / Tr(G G†)`.
pub fn random_density(rng: &mut Rng64, n: usize) -> CMatrix {
    let g = random_matrix(rng, n);
    let p = &g * g.adjoint();
    let tr = p.trace();
    p / tr
}

/// Density matrix of rank `rank` (`rank ≤ n`).
pub fn random_density_of_rank(rng: &mut Rng64, n: usize, rank: usize) -> CMatrix {
    let g = CMatrix::from_fn(n, rank, |_, _| rng.complex_normal());
    let p = &g * g.adjoint();
    let tr = p.trace();
    p / tr
}

pub fn random_pure_state(rng: &mut Rng64, n: usize) -> CMatrix {
    random_density_of_rank(rng, n, 1)
}
