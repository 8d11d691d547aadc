//! Simple GKS–Lindblad generators `D_h(ρ) = hρh† − ½{h†h, ρ}`: evolution,
//! spectra, block structure, stationary states and qubit closed forms.

pub mod blocks;
pub mod error;
pub mod evolution;
pub mod generator;
pub mod io;
pub mod linalg;
pub mod qubit;
pub mod sampling;
pub mod stationary;
pub mod structure;
pub mod state;

pub use error::{Error, Result};
pub use state::{DensityMatrix, Tolerances};
