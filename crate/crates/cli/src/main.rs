//! `lindblad`: command-line access to simple Lindblad generators.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use lindblad_simple::evolution::{entropy_track, generator_spectrum, propagate_with_tolerance, uniform_grid, Trajectory};
use lindblad_simple::generator::{build_superoperator, GeneratorSpec};
use lindblad_simple::io::{
    matrix_to_string, write_entropy_csv, write_trajectory_csv, DecompositionJson, MatrixJson, SpectrumJson,
    StationaryJson,
};
use lindblad_simple::linalg::CMatrix;
use lindblad_simple::stationary::{classify_stationary_with, design_generator};
use lindblad_simple::structure::decompose;
use lindblad_simple::{DensityMatrix, Error, Result, Tolerances};
use serde::{Deserialize, Serialize};

mod verify;

#[derive(Parser)]
#[command(name = "lindblad", version, about = "Evolution, spectra, structure and stationary states of simple Lindblad generators")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Input JSON: a bare matrix or an object with `h`, `generator`, `rho0`, `target`.
    #[arg(long)]
    input: PathBuf,
    /// Output file; standard output when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = Tolerances::default().psd)]
    tol_psd: f64,
    #[arg(long, default_value_t = Tolerances::default().zero)]
    tol_zero: f64,
    #[arg(long, default_value_t = Tolerances::default().stationary)]
    tol_stationary: f64,
}

impl Common {
    fn tolerances(&self) -> Result<Tolerances> {
        for (name, v) in [("tol-psd", self.tol_psd), ("tol-zero", self.tol_zero), ("tol-stationary", self.tol_stationary)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::InvalidArgument(format!("--{name} must be a non-negative number, got {v}")));
            }
        }
        Ok(Tolerances { psd: self.tol_psd, zero: self.tol_zero, stationary: self.tol_stationary })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Propagate `rho0` (default: maximally mixed) on a uniform grid; writes
    /// trajectory and entropy CSV.
    Evolve {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10.0)]
        t_max: f64,
        #[arg(long, default_value_t = 100)]
        t_steps: usize,
        /// Entropy CSV; defaults to `<output stem>_entropy.csv` next to `--output`.
        #[arg(long)]
        entropy_output: Option<PathBuf>,
    },
    /// Spectrum, eigenmatrices and stability verdict of the generator.
    Spectrum {
        #[command(flatten)]
        common: Common,
    },
    /// Split `h` into indecomposable blocks and equivalence classes.
    Decompose {
        #[command(flatten)]
        common: Common,
    },
    /// Complete set of stationary states of `D_h`.
    Stationary {
        #[command(flatten)]
        common: Common,
    },
    /// Operator `h` whose unique stationary state is the target.
    Design {
        #[command(flatten)]
        common: Common,
    },
    /// Run the invariant checks on a generator and report residuals.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Seed for the random probe states and observables.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Largest time used by the time-dependent checks.
        #[arg(long, default_value_t = 2.0)]
        t_max: f64,
        #[arg(long, default_value_t = 40)]
        t_steps: usize,
    },
}

#[derive(Deserialize)]
struct GeneratorJson {
    #[serde(default)]
    hamiltonian: Option<MatrixJson>,
    jump_operators: Vec<MatrixJson>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct InputDoc {
    #[serde(default)]
    h: Option<MatrixJson>,
    #[serde(default)]
    generator: Option<GeneratorJson>,
    #[serde(default)]
    rho0: Option<MatrixJson>,
    #[serde(default)]
    target: Option<MatrixJson>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum InputFile {
    Matrix(MatrixJson),
    Doc(InputDoc),
}

struct Input {
    doc: InputDoc,
}

impl Input {
    fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        let file: InputFile = serde_json::from_str(&text).map_err(|e| {
            Error::Parse(format!("{}: expected a matrix or an input object ({e})", path.display()))
        })?;
        let doc = match file {
            InputFile::Matrix(m) => InputDoc { h: Some(m.clone()), generator: None, rho0: None, target: Some(m) },
            InputFile::Doc(d) => d,
        };
        Ok(Input { doc })
    }

    fn generator(&self) -> Result<GeneratorSpec> {
        match (&self.doc.h, &self.doc.generator) {
            (Some(_), Some(_)) => Err(Error::InvalidArgument("give either `h` or `generator`, not both".into())),
            (Some(h), None) => GeneratorSpec::simple(h.to_matrix()?),
            (None, Some(g)) => {
                let hamiltonian = g.hamiltonian.as_ref().map(MatrixJson::to_matrix).transpose()?;
                let ops = g.jump_operators.iter().map(MatrixJson::to_matrix).collect::<Result<Vec<_>>>()?;
                GeneratorSpec::new(hamiltonian, ops)
            }
            (None, None) => Err(Error::InvalidArgument("input has neither `h` nor `generator`".into())),
        }
    }

    fn simple_h(&self) -> Result<CMatrix> {
        let spec = self.generator()?;
        spec.as_simple().cloned().ok_or_else(|| {
            Error::Unsupported("this command needs a single jump operator `h` without Hamiltonian".into())
        })
    }

    fn rho0(&self, n: usize, tol: &Tolerances) -> Result<DensityMatrix> {
        match &self.doc.rho0 {
            Some(m) => {
                let m = m.to_matrix()?;
                lindblad_simple::linalg::ensure_same_dim(n, &m)?;
                DensityMatrix::with_tolerance(m, tol.psd)
            }
            None => Ok(DensityMatrix::maximally_mixed(n)),
        }
    }

    fn target(&self, tol: &Tolerances) -> Result<DensityMatrix> {
        let m = self.doc.target.as_ref().ok_or_else(|| Error::InvalidArgument("input has no `target`".into()))?;
        DensityMatrix::with_tolerance(m.to_matrix()?, tol.psd)
    }
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))?,
        )),
        None => Box::new(BufWriter::new(io::stdout())),
    })
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    let mut out = open_output(path)?;
    serde_json::to_writer_pretty(&mut out, value).map_err(|e| Error::Io(e.to_string()))?;
    writeln!(out)?;
    out.flush()?;
    Ok(())
}

fn entropy_path(explicit: Option<&Path>, output: Option<&Path>) -> Option<PathBuf> {
    explicit.map(Path::to_path_buf).or_else(|| {
        let out = output?;
        let stem = out.file_stem()?.to_string_lossy();
        Some(out.with_file_name(format!("{stem}_entropy.csv")))
    })
}

fn evolve(common: &Common, t_max: f64, t_steps: usize, entropy_output: Option<&Path>) -> Result<()> {
    let tol = common.tolerances()?;
    let input = Input::read(&common.input)?;
    let spec = input.generator()?;
    let l = build_superoperator(&spec);
    let rho0 = input.rho0(spec.dim(), &tol)?;
    let times = uniform_grid(t_max, t_steps)?;
    let states = times.iter().map(|&t| propagate_with_tolerance(&l, &rho0, t, tol.psd)).collect::<Result<Vec<_>>>()?;
    let traj = Trajectory::new(times, states)?;

    let mut out = open_output(common.output.as_deref())?;
    write_trajectory_csv(&traj, &mut out)?;
    out.flush()?;
    if let Some(path) = entropy_path(entropy_output, common.output.as_deref()) {
        let file = File::create(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        write_entropy_csv(traj.times(), &entropy_track(&traj), BufWriter::new(file))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match &cli.command {
        Command::Evolve { common, t_max, t_steps, entropy_output } => {
            evolve(common, *t_max, *t_steps, entropy_output.as_deref())?;
        }
        Command::Spectrum { common } => {
            common.tolerances()?;
            let spec = Input::read(&common.input)?.generator()?;
            let report = generator_spectrum(&build_superoperator(&spec));
            write_json(common.output.as_deref(), &SpectrumJson::from_report(spec.dim(), &report))?;
        }
        Command::Decompose { common } => {
            common.tolerances()?;
            let h = Input::read(&common.input)?.simple_h()?;
            write_json(common.output.as_deref(), &DecompositionJson::from_decomposition(&decompose(&h)?))?;
        }
        Command::Stationary { common } => {
            let tol = common.tolerances()?;
            let h = Input::read(&common.input)?.simple_h()?;
            write_json(common.output.as_deref(), &StationaryJson::from_set(&classify_stationary_with(&h, &tol)?))?;
        }
        Command::Design { common } => {
            let tol = common.tolerances()?;
            let target = Input::read(&common.input)?.target(&tol)?;
            let h = design_generator(&target)?;
            let mut out = open_output(common.output.as_deref())?;
            writeln!(out, "{}", matrix_to_string(&h))?;
            out.flush()?;
        }
        Command::Verify { common, seed, t_max, t_steps } => {
            let tol = common.tolerances()?;
            let spec = Input::read(&common.input)?.generator()?;
            let report = verify::run(&spec, &tol, *seed, *t_max, *t_steps)?;
            write_json(common.output.as_deref(), &report)?;
            return Ok(report.passed);
        }
    }
    Ok(true)
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: &'a str,
    message: String,
}

#[derive(Serialize)]
struct ErrorReport<'a> {
    error: ErrorBody<'a>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let report = ErrorReport { error: ErrorBody { code: e.code(), message: e.to_string() } };
            eprintln!("{}", serde_json::to_string(&report).expect("error report is serializable"));
            ExitCode::from(if e.is_numerical() { 2 } else { 1 })
        }
    }
}
