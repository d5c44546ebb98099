//! Experiment configuration. One TOML file per experiment; every table
//! rejects keys it does not know.

use std::collections::BTreeMap;
use std::path::Path;

use driftplate::assembly::{DomainSpec, MeshC1, DEFAULT_QUADRATURE, MIN_QUADRATURE};
use driftplate::bounds::TheoremId;
use driftplate::eigensolve::DEFAULT_TOLERANCE;
use driftplate::geometry::{Catalogue, DriftSpec, Immersion};
use serde::{Deserialize, Serialize};

use crate::error::{LabError, LabResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub drift: DriftConfig,
    #[serde(default)]
    pub domain: Option<DomainConfig>,
    pub mesh: MeshConfig,
    pub eigen: EigenConfig,
    #[serde(default)]
    pub checks: ChecksConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub deterministic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

/// Constant ambient drift. Empty means zero in every ambient coordinate.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DriftConfig {
    #[serde(default)]
    pub nu: Vec<f64>,
}

/// Parameter sub-box [lo, hi]; periodic coordinates must keep their full range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeshConfig {
    /// Elements per parameter coordinate; a single entry applies to all.
    pub elements: Vec<usize>,
    #[serde(default = "default_quadrature")]
    pub quadrature: usize,
}

fn default_quadrature() -> usize {
    DEFAULT_QUADRATURE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EigenConfig {
    pub k: usize,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksConfig {
    /// Keys such as "thm11", "cor52", "cor61".
    #[serde(default)]
    pub theorems: Vec<String>,
    #[serde(default = "yes")]
    pub identities: bool,
    #[serde(default)]
    pub general_formula: bool,
    /// Approximate number of lattice points added to the quadrature points
    /// when maximizing constants and checking identities.
    #[serde(default = "default_lattice")]
    pub lattice: usize,
}

impl Default for ChecksConfig {
    fn default() -> Self {
        ChecksConfig { theorems: Vec::new(), identities: true, general_formula: false, lattice: default_lattice() }
    }
}

fn yes() -> bool {
    true
}

fn default_lattice() -> usize {
    1000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// A bound passes when margin >= -bound * RHS.
    #[serde(default = "default_bound")]
    pub bound: f64,
    #[serde(default = "default_identity")]
    pub identity: f64,
    /// Relative slack for the eigenfunction functionals.
    #[serde(default = "default_functional")]
    pub functional: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances { bound: default_bound(), identity: default_identity(), functional: default_functional() }
    }
}

fn default_bound() -> f64 {
    driftplate::bounds::REPORT_EPSILON
}

fn default_identity() -> f64 {
    1e-9
}

fn default_functional() -> f64 {
    1e-6
}

/// Report paths. Relative paths resolve against the output directory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub report: Option<String>,
    #[serde(default)]
    pub csv: Option<String>,
}

/// Geometry, drift, domain and mesh built from a validated config.
pub struct Setup {
    pub geometry: Catalogue,
    pub drift: DriftSpec,
    pub domain: DomainSpec,
    pub mesh: MeshC1,
    pub theorems: Vec<TheoremId>,
}

fn bad(msg: impl Into<String>) -> LabError {
    LabError::Config(msg.into())
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> LabResult<Self> {
        toml::from_str(text).map_err(|e| bad(e.to_string()))
    }

    pub fn load(path: &Path) -> LabResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| LabError::io(path, e))?;
        Self::parse(&text).map_err(|e| match e {
            LabError::Config(m) => bad(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    /// Validates everything that can be checked before any numerics run
    /// and builds the pipeline inputs.
    pub fn setup(&self) -> LabResult<Setup> {
        let geometry = Catalogue::build(&self.geometry.name, &self.geometry.params).map_err(|e| bad(e.to_string()))?;
        let n = geometry.intrinsic_dim();
        let m = geometry.ambient_dim();

        let nu = if self.drift.nu.is_empty() { vec![0.0; m] } else { self.drift.nu.clone() };
        if nu.len() != m {
            return Err(bad(format!(
                "drift has {} components but '{}' lives in R^{m}",
                nu.len(),
                self.geometry.name
            )));
        }
        if nu.iter().any(|v| !v.is_finite()) {
            return Err(bad("drift components must be finite"));
        }
        let drift = DriftSpec::translator(&nu).unwrap_or_else(|_| DriftSpec::new(&nu));

        let theorems = self
            .checks
            .theorems
            .iter()
            .map(|k| {
                TheoremId::from_key(k).ok_or_else(|| {
                    let known: Vec<&str> = TheoremId::ALL.iter().map(|t| t.key()).collect();
                    bad(format!("unknown theorem '{k}' (known: {})", known.join(", ")))
                })
            })
            .collect::<LabResult<Vec<_>>>()?;
        if self.eigen.k == 0 {
            return Err(bad("eigen.k must be at least 1"));
        }
        if !theorems.is_empty() && self.eigen.k < n + 1 {
            return Err(bad(format!(
                "eigen.k = {} but the requested theorems need k >= n+1 = {} eigenpairs (n = {n})",
                self.eigen.k,
                n + 1
            )));
        }
        if self.checks.general_formula && self.eigen.k < m + 1 {
            return Err(bad(format!(
                "eigen.k = {} but the general formula needs k >= {} (one more than the ambient dimension)",
                self.eigen.k,
                m + 1
            )));
        }
        if !(self.eigen.tolerance > 0.0) {
            return Err(bad("eigen.tolerance must be positive"));
        }
        for (name, t) in
            [("bound", self.tolerances.bound), ("identity", self.tolerances.identity), ("functional", self.tolerances.functional)]
        {
            if !(t >= 0.0) || !t.is_finite() {
                return Err(bad(format!("tolerances.{name} must be a finite non-negative number")));
            }
        }

        let pb = geometry.param_box();
        let domain = match &self.domain {
            None => DomainSpec::whole(&pb),
            Some(d) => DomainSpec::sub_box(&pb, d.lo.clone(), d.hi.clone()).map_err(|e| bad(e.to_string()))?,
        };
        let elements = match self.mesh.elements.as_slice() {
            [e] => vec![*e; n],
            es if es.len() == n => es.to_vec(),
            es => return Err(bad(format!("mesh.elements has {} entries; give 1 or {n}", es.len()))),
        };
        if self.mesh.quadrature < MIN_QUADRATURE {
            return Err(bad(format!("mesh.quadrature must be at least {MIN_QUADRATURE}")));
        }
        let mesh = MeshC1::new(&domain, elements, self.mesh.quadrature).map_err(|e| bad(e.to_string()))?;
        Ok(Setup { geometry, drift, domain, mesh, theorems })
    }
}
