use std::time::Instant;

use driftplate::assembly::assemble;
use driftplate::eigensolve::smallest_eigenpairs;
use driftplate::oracles::{extrapolated_limit, nested_ratios, observed_orders};

use crate::config::ExperimentConfig;
use crate::error::{LabError, LabResult};
use crate::report::{ConvergeReport, Timings, SCHEMA_VERSION};

pub const DEFAULT_LEVELS: [usize; 4] = [25, 50, 100, 200];

/// Parses "25,50,100" into levels.
pub fn parse_levels(text: &str) -> LabResult<Vec<usize>> {
    text.split(',')
        .map(|s| s.trim().parse::<usize>().map_err(|_| LabError::Config(format!("bad refinement level '{s}'"))))
        .collect()
}

/// Solves the configured problem with `level` elements per coordinate for
/// every level, then estimates limits and observed orders.
pub fn converge(config: &ExperimentConfig, levels: &[usize], deterministic: bool) -> LabResult<ConvergeReport> {
    nested_ratios(levels).map_err(|e| LabError::Config(e.to_string()))?;
    let start = Instant::now();
    let mut eigenvalues = Vec::with_capacity(levels.len());
    let mut mesh_sizes = Vec::with_capacity(levels.len());
    for &level in levels {
        let mut cfg = config.clone();
        cfg.mesh.elements = vec![level];
        let setup = cfg.setup()?;
        let forms = assemble(&setup.geometry, &setup.drift, &setup.domain, &setup.mesh)?;
        let spectrum = smallest_eigenpairs(&forms, cfg.eigen.k, cfg.eigen.tolerance)?;
        mesh_sizes.push(spectrum.mesh_size);
        eigenvalues.push(spectrum.values);
    }
    let k = config.eigen.k;
    let column = |i: usize| -> Vec<f64> { eigenvalues.iter().map(|v: &Vec<f64>| v[i]).collect() };
    let limits = (0..k).map(|i| extrapolated_limit(levels, &column(i))).collect::<driftplate::Result<Vec<_>>>()?;
    let orders = (0..k).map(|i| observed_orders(levels, &column(i))).collect::<driftplate::Result<Vec<_>>>()?;
    let total = start.elapsed().as_secs_f64();
    Ok(ConvergeReport {
        schema_version: SCHEMA_VERSION,
        config: config.clone(),
        levels: levels.to_vec(),
        mesh_sizes,
        eigenvalues,
        limits,
        orders,
        timings: (!deterministic && !config.deterministic).then_some(Timings {
            assemble_s: 0.0,
            eigensolve_s: total,
            checks_s: 0.0,
            total_s: total,
        }),
    })
}
