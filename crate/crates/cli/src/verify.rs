//! Invariant checks on a generator, run concurrently.

use std::thread;

use lindblad_simple::evolution::{generator_spectrum, propagate_grid, trajectory_checks, uniform_grid};
use lindblad_simple::generator::{
    build_superoperator, choi_cp_check, kadison_defect, recover_h, simple_superoperator, GeneratorSpec,
    SuperoperatorMatrix,
};
use lindblad_simple::linalg::{hermitian_residual, hs_inner, identity, vectorize, unvectorize, CMatrix};
use lindblad_simple::sampling::{random_density, random_matrix, Rng64};
use lindblad_simple::stationary::classify_stationary_with;
use lindblad_simple::structure::decompose;
use lindblad_simple::{DensityMatrix, Result, Tolerances};
use serde::Serialize;

const PROBES: usize = 8;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Measured violation; `null` when the check could not be evaluated.
    pub residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
}

impl Check {
    fn measured(name: &'static str, residual: f64, tolerance: f64) -> Self {
        Check { name, passed: residual <= tolerance, residual, tolerance, message: None }
    }

    fn failed(name: &'static str, tolerance: f64, message: String) -> Self {
        Check { name, passed: false, residual: f64::NAN, tolerance, message: Some(message) }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub passed: bool,
    pub checks: Vec<Check>,
}

struct Probes {
    states: Vec<CMatrix>,
    observables: Vec<CMatrix>,
}

type CheckFn<'a> = Box<dyn Fn() -> Check + Send + Sync + 'a>;

fn max_over<T>(items: &[T], f: impl Fn(&T) -> f64) -> f64 {
    items.iter().map(f).fold(0.0, f64::max)
}

fn evolve(l: &SuperoperatorMatrix, x: &CMatrix, t: f64) -> CMatrix {
    unvectorize(&(l.exp(t) * vectorize(x)), l.dim())
}

pub fn run(spec: &GeneratorSpec, tol: &Tolerances, seed: u64, t_max: f64, t_steps: usize) -> Result<VerifyReport> {
    let times = uniform_grid(t_max, t_steps)?;
    let n = spec.dim();
    let l = build_superoperator(spec);
    let scale = l.norm().max(1.0);
    let mut rng = Rng64::seeded(seed);
    let probes = Probes {
        states: (0..PROBES).map(|_| random_density(&mut rng, n)).collect(),
        observables: (0..PROBES).map(|_| random_matrix(&mut rng, n)).collect(),
    };
    let cp_times: Vec<f64> = times.iter().copied().step_by((times.len() / 4).max(1)).collect();

    let (l, probes, cp_times) = (&l, &probes, &cp_times);
    let mut checks: Vec<CheckFn> = vec![
        Box::new(move || {
            let r = max_over(&probes.states, |rho| l.apply(rho).map(|x| x.trace().norm()).unwrap_or(f64::NAN));
            Check::measured("trace_preservation", r, 1e-12 * scale)
        }),
        Box::new(move || {
            let r = max_over(&probes.states, |rho| l.apply(rho).map(|x| hermitian_residual(&x)).unwrap_or(f64::NAN));
            Check::measured("hermiticity_preservation", r, 1e-12 * scale)
        }),
        Box::new(move || {
            let dual = l.adjoint();
            let r = dual.apply(&identity(n)).map(|x| x.norm()).unwrap_or(f64::NAN);
            Check::measured("dual_unitality", r, 1e-12 * scale)
        }),
        Box::new(move || {
            let dual = l.adjoint();
            let r = max_over(&probes.observables, |f| {
                let rho = &probes.states[0];
                match (l.apply(rho), dual.apply(f)) {
                    (Ok(a), Ok(b)) => (hs_inner(f, &a) - hs_inner(&b, rho)).norm() / f.norm(),
                    _ => f64::NAN,
                }
            });
            Check::measured("dual_adjointness", r, 1e-12 * scale)
        }),
        Box::new(move || {
            let mut worst: f64 = 0.0;
            for &t in cp_times {
                match choi_cp_check(l, t) {
                    Ok(r) => worst = worst.max(-r.min_choi_eigenvalue),
                    Err(e) => return Check::failed("complete_positivity", 1e-10 * n as f64, e.to_string()),
                }
            }
            Check::measured("complete_positivity", worst.max(0.0), 1e-10 * n as f64)
        }),
        Box::new(move || {
            let mut worst: f64 = 0.0;
            for f in &probes.observables {
                for &t in cp_times {
                    match kadison_defect(l, f, t) {
                        Ok(d) => worst = worst.max(-d / f.norm_squared()),
                        Err(e) => return Check::failed("kadison_inequality", 1e-10, e.to_string()),
                    }
                }
            }
            Check::measured("kadison_inequality", worst.max(0.0), 1e-10)
        }),
        Box::new(move || {
            let report = generator_spectrum(l);
            let v = report.stability_verdict;
            let mut check = Check::measured("spectral_stability", v.max_real_part.max(0.0), 1e-10 * scale);
            if v.nonzero_imaginary_axis {
                check.passed = false;
                check.message = Some("nonzero eigenvalue on the imaginary axis".into());
            }
            check
        }),
        Box::new(move || {
            let (s, t) = (0.37 * t_max, 0.63 * t_max);
            let r = max_over(&probes.states, |rho| {
                (evolve(l, rho, s + t) - evolve(l, &evolve(l, rho, t), s)).norm()
            });
            Check::measured("semigroup_law", r, 1e-10)
        }),
    ];

    if let Some(h) = spec.as_simple() {
        let times = &times;
        checks.push(Box::new(move || match classify_stationary_with(h, tol) {
            Ok(set) => Check::measured("stationary_residual", set.residual, set.tolerance),
            Err(e) => Check::failed("stationary_residual", tol.stationary * h.norm_squared(), e.to_string()),
        }));
        checks.push(Box::new(move || {
            let tolerance = 1e-12 * h.norm().max(1.0);
            match decompose(h) {
                Ok(d) => Check::measured("decomposition_reassembly", (d.reassemble() - h).norm(), tolerance),
                Err(e) => Check::failed("decomposition_reassembly", tolerance, e.to_string()),
            }
        }));
        checks.push(Box::new(move || {
            let tolerance = 1e-8 * scale;
            let outcome = simple_superoperator(h).and_then(|lh| {
                let rec = recover_h(&lh)?;
                let back = simple_superoperator(&rec.h)?;
                Ok((&back - &lh).norm())
            });
            match outcome {
                Ok(r) => Check::measured("generator_recovery", r, tolerance),
                Err(e) => Check::failed("generator_recovery", tolerance, e.to_string()),
            }
        }));
        checks.push(Box::new(move || {
            let mut worst: f64 = 0.0;
            let mut rank_ok = true;
            for rho in &probes.states {
                let outcome = DensityMatrix::with_tolerance(rho.clone(), tol.psd)
                    .and_then(|rho0| propagate_grid(l, &rho0, times))
                    .and_then(|traj| trajectory_checks(h, &traj));
                match outcome {
                    Ok(c) => {
                        worst = worst.max(-c.min_margin);
                        rank_ok &= c.rank_nondecreasing;
                    }
                    Err(e) => return Check::failed("eigenvalue_floor", 1e-10, e.to_string()),
                }
            }
            let mut check = Check::measured("eigenvalue_floor", worst.max(0.0), 1e-10);
            if !rank_ok {
                check.passed = false;
                check.message = Some("numerical rank decreased along a trajectory".into());
            }
            check
        }));
    }

    let results: Vec<Check> = thread::scope(|scope| {
        let handles: Vec<_> = checks.iter().map(|check| scope.spawn(check)).collect();
        handles
            .into_iter()
            .map(|handle| handle.join().unwrap_or_else(|_| Check::failed("panicked", 0.0, "check panicked".into())))
            .collect()
    });
    let passed = results.iter().all(|c| c.passed);
    Ok(VerifyReport { passed, checks: results })
}
