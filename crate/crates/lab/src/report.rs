//! Machine-readable run reports. Every field round-trips through JSON.

use driftplate::bounds::{BoundReport, GeneralFormulaReport, GeometricConstants, TheoremId};
use driftplate::geometry::IdentityReport;
use driftplate::oracles::Order;
use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;

/// Bumped whenever a field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub geometry: GeometrySummary,
    pub mesh: MeshSummary,
    pub spectrum: SpectrumSummary,
    pub constants: GeometricConstants,
    pub bounds: Vec<CheckOutcome>,
    pub identities: IdentitySection,
    /// Omitted in deterministic mode.
    pub timings: Option<Timings>,
    /// All bounds pass and every identity tolerance holds.
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeometrySummary {
    pub name: String,
    pub intrinsic_dim: usize,
    pub ambient_dim: usize,
    pub drift: Vec<f64>,
    pub unit_drift: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeshSummary {
    pub elements: Vec<usize>,
    pub quadrature: usize,
    pub free_dofs: usize,
    pub mesh_size: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumSummary {
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub method: String,
    pub iterations: usize,
    /// Index ranges [start, end) of numerically repeated eigenvalues.
    pub clusters: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Hypotheses of the inequality do not hold for this geometry.
    Rejected,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub theorem: TheoremId,
    pub status: CheckStatus,
    pub report: Option<BoundReport>,
    pub reason: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityMaxima {
    pub gradient_trace: f64,
    pub mean_curvature: f64,
    pub normality: f64,
    pub drift_projection: f64,
    pub polarization: f64,
    pub cauchy_schwarz: f64,
    pub max_violation: f64,
    pub points: usize,
}

impl From<&IdentityReport> for IdentityMaxima {
    fn from(r: &IdentityReport) -> Self {
        IdentityMaxima {
            gradient_trace: r.gradient_trace,
            mean_curvature: r.mean_curvature,
            normality: r.normality,
            drift_projection: r.drift_projection,
            polarization: r.polarization,
            cauchy_schwarz: r.cauchy_schwarz,
            max_violation: r.max_violation(),
            points: r.points,
        }
    }
}

/// Integrals of the first eigenfunction u1 (unit weighted L2 norm).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FunctionalCheck {
    /// int |grad u1|^2 e^w dv, bounded by Lambda_1^{1/2}.
    pub dirichlet: f64,
    /// -n int |grad u1|^2 e^w dv, bounded below by -n Lambda_1^{1/2}.
    pub phi_hat: f64,
    pub sqrt_lambda1: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralFormulaSummary {
    pub trial_functions: usize,
    pub rank_deficient: bool,
    pub orthogonality: f64,
    pub gradient_identity: f64,
    pub lnu_identity: f64,
    pub report: GeneralFormulaReport,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentitySection {
    pub tolerance: f64,
    pub coordinate: Option<IdentityMaxima>,
    /// max |H - nu_0^N|, reported whenever the drift has unit length.
    pub translator_residual: Option<f64>,
    pub functionals: FunctionalCheck,
    pub general_formula: Option<GeneralFormulaSummary>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub assemble_s: f64,
    pub eigensolve_s: f64,
    pub checks_s: f64,
    pub total_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergeReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub levels: Vec<usize>,
    pub mesh_sizes: Vec<f64>,
    /// eigenvalues[level][i]
    pub eigenvalues: Vec<Vec<f64>>,
    /// Richardson limits from the two finest levels, assuming h^4 error.
    pub limits: Vec<f64>,
    /// orders[i][j]: order of eigenvalue i from levels j, j+1, j+2.
    pub orders: Vec<Vec<Order>>,
    pub timings: Option<Timings>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IdentitiesReport {
    pub schema_version: u32,
    pub config: ExperimentConfig,
    pub coordinate: IdentityMaxima,
    pub translator_residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub schema_version: u32,
    pub oracle: String,
    pub params: std::collections::BTreeMap<String, f64>,
    pub eigenvalues: Vec<f64>,
}
