//! JSON and CSV formats shared by the library and the command-line tool.
//!
//! Matrices are `{"dim": n, "entries": [[[re, im], ...], ...]}` with rows
//! outermost; every complex number is an `[re, im]` pair.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{EntropySample, SpectrumReport, StabilityVerdict, Trajectory};
use crate::linalg::{c, CMatrix};
use crate::state::DensityMatrix;
use crate::stationary::{BlockStationary, StationarySet};
use crate::structure::Decomposition;

pub type ComplexJson = [f64; 2];

pub fn complex_to_json(z: num_complex::Complex64) -> ComplexJson {
    [z.re, z.im]
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub dim: usize,
    pub entries: Vec<Vec<ComplexJson>>,
}

impl MatrixJson {
    pub fn from_matrix(m: &CMatrix) -> Self {
        MatrixJson {
            dim: m.nrows(),
            entries: m.row_iter().map(|row| row.iter().map(|z| complex_to_json(*z)).collect()).collect(),
        }
    }

    pub fn to_matrix(&self) -> Result<CMatrix> {
        let n = self.dim;
        if n == 0 {
            return Err(Error::MalformedMatrix("dimension must be positive".into()));
        }
        if self.entries.len() != n {
            return Err(Error::MalformedMatrix(format!("expected {n} rows, found {}", self.entries.len())));
        }
        for (i, row) in self.entries.iter().enumerate() {
            if row.len() != n {
                return Err(Error::MalformedMatrix(format!("row {i} has {} entries, expected {n}", row.len())));
            }
            if row.iter().flatten().any(|x| !x.is_finite()) {
                return Err(Error::MalformedMatrix(format!("row {i} has a non-finite entry")));
            }
        }
        Ok(CMatrix::from_fn(n, n, |i, j| {
            let [re, im] = self.entries[i][j];
            c(re, im)
        }))
    }
}

pub fn parse_matrix(text: &str) -> Result<CMatrix> {
    let json: MatrixJson = serde_json::from_str(text)?;
    json.to_matrix()
}

pub fn matrix_to_string(m: &CMatrix) -> String {
    serde_json::to_string_pretty(&MatrixJson::from_matrix(m)).expect("matrix JSON is serializable")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenmatrixJson {
    pub eigenvalue: ComplexJson,
    pub matrix: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityJson {
    pub max_real_part: f64,
    pub nonzero_imaginary_axis: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub dim: usize,
    pub eigenvalues: Vec<ComplexJson>,
    pub generalized_flags: Vec<bool>,
    pub proper_eigenmatrices: Vec<EigenmatrixJson>,
    pub stability_verdict: StabilityJson,
}

impl SpectrumJson {
    pub fn from_report(dim: usize, r: &SpectrumReport) -> Self {
        let StabilityVerdict { max_real_part, nonzero_imaginary_axis } = r.stability_verdict;
        SpectrumJson {
            dim,
            eigenvalues: r.eigenvalues.iter().map(|z| complex_to_json(*z)).collect(),
            generalized_flags: r.generalized_flags.clone(),
            proper_eigenmatrices: r
                .proper_eigenmatrices
                .iter()
                .map(|e| EigenmatrixJson {
                    eigenvalue: complex_to_json(e.eigenvalue),
                    matrix: MatrixJson::from_matrix(&e.matrix),
                })
                .collect(),
            stability_verdict: StabilityJson { max_real_part, nonzero_imaginary_axis },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlockJson {
    pub subspace_dim: usize,
    pub block: MatrixJson,
    pub class_id: usize,
    pub projector: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassJson {
    pub members: Vec<usize>,
    /// `W_i` with `W_i h_{members[i]} W_i† = h_{members[0]}`.
    pub witnesses: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionJson {
    /// Singular-value threshold that decided commutant membership.
    pub threshold: f64,
    pub blocks: Vec<BlockJson>,
    pub classes: Vec<ClassJson>,
}

impl DecompositionJson {
    pub fn from_decomposition(d: &Decomposition) -> Self {
        DecompositionJson {
            threshold: d.threshold,
            blocks: d
                .blocks
                .iter()
                .enumerate()
                .map(|(j, b)| BlockJson {
                    subspace_dim: b.nrows(),
                    block: MatrixJson::from_matrix(b),
                    class_id: d.class_of[j],
                    projector: MatrixJson::from_matrix(&d.projectors[j]),
                })
                .collect(),
            classes: d
                .classes
                .iter()
                .map(|cl| ClassJson {
                    members: cl.members.clone(),
                    witnesses: cl.witnesses.iter().map(MatrixJson::from_matrix).collect(),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryBlockJson {
    pub kind: String,
    pub subspace_dim: usize,
    /// Stationary state (interior case) or face projector, in the full space.
    pub matrix: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhaseRelationJson {
    pub blocks: [usize; 2],
    pub basis: Vec<MatrixJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommutantJson {
    pub eigenbasis: MatrixJson,
    pub degeneracies: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StationaryJson {
    pub kind: String,
    pub dimension: usize,
    pub residual: f64,
    pub tolerance: f64,
    pub unique_state: Option<MatrixJson>,
    pub blocks: Vec<StationaryBlockJson>,
    pub phase_relations: Vec<PhaseRelationJson>,
    pub commutant: Option<CommutantJson>,
}

impl StationaryJson {
    pub fn from_set(set: &StationarySet) -> Self {
        StationaryJson {
            kind: set.kind().to_string(),
            dimension: set.dimension(),
            residual: set.residual,
            tolerance: set.tolerance,
            unique_state: set.unique_state().map(|s| MatrixJson::from_matrix(s.matrix())),
            blocks: set
                .blocks
                .iter()
                .zip(&set.decomposition.blocks)
                .map(|(b, h)| {
                    let matrix = match b {
                        BlockStationary::UniqueInterior { state } => state,
                        BlockStationary::AttractiveFace { projector } => projector,
                    };
                    StationaryBlockJson {
                        kind: b.tag().to_string(),
                        subspace_dim: h.nrows(),
                        matrix: MatrixJson::from_matrix(matrix),
                    }
                })
                .collect(),
            phase_relations: set
                .phase_relations
                .iter()
                .map(|p| PhaseRelationJson {
                    blocks: [p.blocks.0, p.blocks.1],
                    basis: p.basis.iter().map(MatrixJson::from_matrix).collect(),
                })
                .collect(),
            commutant: set.commutant.as_ref().map(|cm| CommutantJson {
                eigenbasis: MatrixJson::from_matrix(&cm.eigenbasis),
                degeneracies: cm.degeneracies.clone(),
            }),
        }
    }
}

fn entry_label(n: usize, i: usize, j: usize) -> String {
    if n <= 10 {
        format!("entry_{i}{j}")
    } else {
        format!("entry_{i}_{j}")
    }
}

/// Header `t, entry_00_re, entry_00_im, …`, one row per sample, entries row-major.
pub fn write_trajectory_csv<W: Write>(traj: &Trajectory, out: W) -> Result<()> {
    let n = traj.dim();
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["t".to_string()];
    for i in 0..n {
        for j in 0..n {
            let label = entry_label(n, i, j);
            header.push(format!("{label}_re"));
            header.push(format!("{label}_im"));
        }
    }
    w.write_record(&header)?;
    for (t, state) in traj.times().iter().zip(traj.states()) {
        let mut record = vec![t.to_string()];
        for z in state.matrix().transpose().iter() {
            record.push(z.re.to_string());
            record.push(z.im.to_string());
        }
        w.write_record(&record)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_trajectory_csv<R: Read>(input: R) -> Result<Trajectory> {
    let mut r = csv::Reader::from_reader(input);
    let columns = r.headers()?.len();
    let n = (((columns.saturating_sub(1)) / 2) as f64).sqrt().round() as usize;
    if n == 0 || 1 + 2 * n * n != columns {
        return Err(Error::Parse(format!("{columns} columns do not describe a square matrix trajectory")));
    }
    let mut times = Vec::new();
    let mut states = Vec::new();
    for record in r.records() {
        let record = record?;
        let values = record
            .iter()
            .map(|s| s.trim().parse::<f64>().map_err(|e| Error::Parse(format!("{s:?}: {e}"))))
            .collect::<Result<Vec<f64>>>()?;
        times.push(values[0]);
        let m = CMatrix::from_fn(n, n, |i, j| {
            let k = 1 + 2 * (i * n + j);
            c(values[k], values[k + 1])
        });
        states.push(DensityMatrix::with_tolerance(m, 1e-9)?);
    }
    Trajectory::new(times, states)
}

pub fn write_entropy_csv<W: Write>(times: &[f64], samples: &[EntropySample], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["t", "von_neumann", "fermi"])?;
    for (t, s) in times.iter().zip(samples) {
        w.write_record([t.to_string(), s.von_neumann.to_string(), s.fermi.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_entropy_csv<R: Read>(input: R) -> Result<Vec<(f64, EntropySample)>> {
    #[derive(Deserialize)]
    struct Row {
        t: f64,
        von_neumann: f64,
        fermi: f64,
    }
    let mut r = csv::Reader::from_reader(input);
    r.deserialize::<Row>()
        .map(|row| {
            let row = row?;
            Ok((row.t, EntropySample { von_neumann: row.von_neumann, fermi: row.fermi }))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evolution::{entropy_track, propagate_grid, uniform_grid};
    use crate::generator::simple_superoperator;
    use crate::sampling::{random_density, random_matrix, Rng64};

    #[test]
    fn matrix_json_round_trip() {
        let mut rng = Rng64::seeded(51);
        let m = random_matrix(&mut rng, 3);
        assert_eq!(parse_matrix(&matrix_to_string(&m)).unwrap(), m);
    }

    #[test]
    fn malformed_matrices_are_rejected() {
        let ragged = r#"{"dim":2,"entries":[[[1,0],[0,0]],[[0,0]]]}"#;
        assert!(matches!(parse_matrix(ragged), Err(Error::MalformedMatrix(_))));
        let wrong_dim = r#"{"dim":3,"entries":[[[1,0],[0,0]],[[0,0],[1,0]]]}"#;
        assert!(matches!(parse_matrix(wrong_dim), Err(Error::MalformedMatrix(_))));
        assert!(matches!(parse_matrix("[1,2"), Err(Error::Parse(_))));
    }

    #[test]
    fn trajectory_csv_round_trip() {
        let mut rng = Rng64::seeded(52);
        let l = simple_superoperator(&random_matrix(&mut rng, 3)).unwrap();
        let rho0 = DensityMatrix::new(random_density(&mut rng, 3)).unwrap();
        let traj = propagate_grid(&l, &rho0, &uniform_grid(2.0, 5).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_trajectory_csv(&traj, &mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert!(text.starts_with("t,entry_00_re,entry_00_im,entry_01_re"));
        let back = read_trajectory_csv(buf.as_slice()).unwrap();
        assert_eq!(back, traj);

        let entropy = entropy_track(&traj);
        let mut buf = Vec::new();
        write_entropy_csv(traj.times(), &entropy, &mut buf).unwrap();
        assert!(String::from_utf8(buf.clone()).unwrap().starts_with("t,von_neumann,fermi\n"));
        let rows = read_entropy_csv(buf.as_slice()).unwrap();
        assert_eq!(rows.len(), traj.len());
        assert_eq!(rows[3].1, entropy[3]);
    }

    #[test]
    fn wide_trajectory_labels_are_separated() {
        assert_eq!(entry_label(11, 1, 10), "entry_1_10");
        assert_eq!(entry_label(2, 1, 0), "entry_10");
    }
}
