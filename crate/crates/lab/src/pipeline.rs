//! geometry -> assembly -> eigensolve -> bounds, driven by a config.

use std::time::Instant;

use driftplate::assembly::{assemble, eigenfunction_functionals, AssembledForms, DomainSpec};
use driftplate::bounds::{
    constants, cor11_check, cor12_check, cor13_check, cor51_check, cor52_check, cor53_check, cor6x_check,
    general_formula_check, gram_schmidt_trial_functions, thm11_check, thm51_check, translator_gate, BoundReport,
    GeometricConstants, TheoremId, TranslatorCertificate, Variant, DELTA_GRID,
};
use driftplate::eigensolve::{smallest_eigenpairs, SolverMethod, Spectrum};
use driftplate::geometry::{
    identity_suite, lattice, translator_residual, Catalogue, DriftSpec, Factor, Immersion, Separable, SmoothFn,
};

use crate::config::{ExperimentConfig, Setup};
use crate::error::LabResult;
use crate::report::{
    CheckOutcome, CheckStatus, FunctionalCheck, GeneralFormulaSummary, GeometrySummary, IdentityMaxima,
    IdentitySection, MeshSummary, RunReport, SpectrumSummary, Timings, SCHEMA_VERSION,
};

/// Largest Gram-Schmidt orthogonality residual accepted by the general formula check.
pub const ORTHOGONALITY_TOLERANCE: f64 = 1e-8;

/// Everything a run computed, for callers that need more than the report.
pub struct RunArtifacts {
    pub setup: Setup,
    pub forms: AssembledForms,
    pub spectrum: Spectrum,
    pub samples: Vec<Vec<f64>>,
    pub report: RunReport,
}

/// Lattice with roughly `total` points spread evenly over the coordinates.
pub fn sample_lattice(domain: &DomainSpec, total: usize) -> Vec<Vec<f64>> {
    let n = domain.dim();
    let per_axis = ((total.max(1) as f64).powf(1.0 / n as f64).ceil() as usize).max(2) - 1;
    lattice(&domain.lo, &domain.hi, &vec![per_axis.max(1); n])
}

/// Probe functions for the polarization and Cauchy-Schwarz identities.
pub fn standard_probes(dim: usize) -> Vec<Separable> {
    (0..3)
        .map(|k| {
            Separable::new(
                (0..dim)
                    .map(|d| match (k + d) % 3 {
                        0 => Factor::Poly(vec![0.2, 1.0, -0.4]),
                        1 => Factor::Cos { freq: 1.3, phase: 0.2 * d as f64 },
                        _ => Factor::Exp { rate: -0.6 },
                    })
                    .collect(),
            )
        })
        .collect()
}

pub fn coordinate_identities(imm: &Catalogue, drift: &DriftSpec, samples: &[Vec<f64>]) -> LabResult<IdentityMaxima> {
    let probes = standard_probes(imm.intrinsic_dim());
    let refs: Vec<&dyn SmoothFn> = probes.iter().map(|p| p as &dyn SmoothFn).collect();
    Ok(IdentityMaxima::from(&identity_suite(imm, drift, samples, &refs)?))
}

fn method_name(m: SolverMethod) -> &'static str {
    match m {
        SolverMethod::Dense => "dense",
        SolverMethod::SubspaceIteration => "subspace_iteration",
    }
}

fn outcome(theorem: TheoremId, result: driftplate::Result<BoundReport>, tolerance: f64) -> LabResult<CheckOutcome> {
    match result {
        Ok(r) => {
            let pass = r.margin >= -tolerance * r.rhs.abs();
            Ok(CheckOutcome {
                theorem,
                status: if pass { CheckStatus::Pass } else { CheckStatus::Fail },
                report: Some(r),
                reason: None,
            })
        }
        Err(e @ (driftplate::Error::NotATranslator { .. } | driftplate::Error::VariantMismatch(_))) => {
            Ok(CheckOutcome { theorem, status: CheckStatus::Rejected, report: None, reason: Some(e.to_string()) })
        }
        Err(e) => Err(e.into()),
    }
}

fn bound_checks(
    setup: &Setup,
    eig: &[f64],
    k: &GeometricConstants,
    samples: &[Vec<f64>],
    tolerance: f64,
) -> LabResult<Vec<CheckOutcome>> {
    let n = setup.geometry.intrinsic_dim();
    let mut gate: Option<driftplate::Result<TranslatorCertificate>> = None;
    let mut out = Vec::new();
    for &t in &setup.theorems {
        let result = if t.is_translator() {
            let cert = gate.get_or_insert_with(|| translator_gate(&setup.geometry, &setup.drift, samples));
            match cert {
                Ok(c) => match t {
                    TheoremId::Thm51 => thm51_check(eig, n, c),
                    TheoremId::Cor51 => cor51_check(eig, n, c),
                    TheoremId::Cor52 => cor52_check(eig, n, c),
                    _ => cor53_check(eig, n, c),
                },
                Err(e) => Err(e.clone()),
            }
        } else {
            match t {
                TheoremId::Thm11 => thm11_check(eig, k, n),
                TheoremId::Cor11 => cor11_check(eig, k, n),
                TheoremId::Cor12 => cor12_check(eig, k, n),
                TheoremId::Cor13 => cor13_check(eig, k, n),
                TheoremId::Cor61 => cor6x_check(eig, k, n, Variant::Minimal),
                TheoremId::Cor62 => cor6x_check(eig, k, n, Variant::Sphere),
                _ => cor6x_check(eig, k, n, Variant::UnitSphere),
            }
        };
        out.push(outcome(t, result, tolerance)?);
    }
    Ok(out)
}

/// Runs one experiment. `deterministic` drops wall-clock timings from the report.
pub fn run(config: &ExperimentConfig, deterministic: bool) -> LabResult<RunArtifacts> {
    let start = Instant::now();
    let setup = config.setup()?;
    let forms = assemble(&setup.geometry, &setup.drift, &setup.domain, &setup.mesh)?;
    let t_assemble = start.elapsed().as_secs_f64();
    let spectrum = smallest_eigenpairs(&forms, config.eigen.k, config.eigen.tolerance)?;
    let t_eigen = start.elapsed().as_secs_f64() - t_assemble;

    let mut samples = setup.mesh.quadrature_points();
    samples.extend(sample_lattice(&setup.domain, config.checks.lattice));
    let consts = constants(&setup.geometry, &setup.drift, &samples)?;
    let eig = &spectrum.values;
    let bounds = bound_checks(&setup, eig, &consts, &samples, config.tolerances.bound)?;

    let tol = config.tolerances.identity;
    let coordinate = if config.checks.identities {
        Some(coordinate_identities(&setup.geometry, &setup.drift, &samples)?)
    } else {
        None
    };
    let translator = if setup.drift.unit {
        Some(translator_residual(&setup.geometry, &setup.drift, &samples)?)
    } else {
        None
    };

    let f = eigenfunction_functionals(&forms, &spectrum.vector(0));
    let s = eig[0].sqrt();
    let slack = 1.0 + config.tolerances.functional;
    let n = setup.geometry.intrinsic_dim() as f64;
    let functionals = FunctionalCheck {
        dirichlet: f.dirichlet,
        phi_hat: f.phi_hat,
        sqrt_lambda1: s,
        pass: f.dirichlet <= s * slack && f.phi_hat >= -n * s * slack,
    };

    let general_formula = if config.checks.general_formula {
        let trial = gram_schmidt_trial_functions(&setup.geometry, &setup.drift, &forms, &spectrum, &samples)?;
        let report =
            general_formula_check(&setup.geometry, &setup.drift, &forms, &spectrum, &trial, &consts, &DELTA_GRID)?;
        let pass = report.pass && trial.orthogonality <= ORTHOGONALITY_TOLERANCE;
        Some(GeneralFormulaSummary {
            trial_functions: trial.count(),
            rank_deficient: trial.rank_deficient(),
            orthogonality: trial.orthogonality,
            gradient_identity: trial.gradient_identity,
            lnu_identity: trial.lnu_identity,
            report,
            pass,
        })
    } else {
        None
    };

    let identities_pass = coordinate.map_or(true, |c| c.max_violation <= tol)
        && functionals.pass
        && general_formula.as_ref().map_or(true, |g| g.pass);
    let identities = IdentitySection {
        tolerance: tol,
        coordinate,
        translator_residual: translator,
        functionals,
        general_formula,
        pass: identities_pass,
    };
    let pass = identities.pass && bounds.iter().all(|b| b.status == CheckStatus::Pass);
    let total = start.elapsed().as_secs_f64();
    let timings = (!deterministic && !config.deterministic).then_some(Timings {
        assemble_s: t_assemble,
        eigensolve_s: t_eigen,
        checks_s: total - t_assemble - t_eigen,
        total_s: total,
    });

    let report = RunReport {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        geometry: GeometrySummary {
            name: setup.geometry.name().to_string(),
            intrinsic_dim: setup.geometry.intrinsic_dim(),
            ambient_dim: setup.geometry.ambient_dim(),
            drift: setup.drift.nu.iter().copied().collect(),
            unit_drift: setup.drift.unit,
        },
        mesh: MeshSummary {
            elements: setup.mesh.elements.clone(),
            quadrature: setup.mesh.quadrature_order,
            free_dofs: spectrum.free_dofs,
            mesh_size: spectrum.mesh_size,
        },
        spectrum: SpectrumSummary {
            eigenvalues: spectrum.values.clone(),
            residuals: spectrum.residuals.clone(),
            max_residual: spectrum.max_residual(),
            method: method_name(spectrum.method).to_string(),
            iterations: spectrum.iterations,
            clusters: spectrum.clusters.clone(),
        },
        constants: consts,
        bounds,
        identities,
        timings,
        pass,
    };
    Ok(RunArtifacts { setup, forms, spectrum, samples, report })
}
