use std::collections::BTreeMap;

use driftplate::oracles::{beam_reference, conjugation_oracle, fd_plate_oracle};

use crate::error::{LabError, LabResult};
use crate::report::{OracleReport, SCHEMA_VERSION};

pub const ORACLE_NAMES: [&str; 3] = ["beam", "conjugation", "plate"];

/// Parses "key=value" pairs.
pub fn parse_params(pairs: &[String]) -> LabResult<BTreeMap<String, f64>> {
    pairs
        .iter()
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| LabError::Config(format!("expected key=value, got '{p}'")))?;
            let v: f64 = v.trim().parse().map_err(|_| LabError::Config(format!("'{v}' is not a number")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn take(params: &BTreeMap<String, f64>, known: &[(&str, f64)]) -> LabResult<Vec<f64>> {
    if let Some(k) = params.keys().find(|k| !known.iter().any(|(n, _)| n == k)) {
        let names: Vec<&str> = known.iter().map(|(n, _)| *n).collect();
        return Err(LabError::Config(format!("unknown oracle parameter '{k}' (known: {})", names.join(", "))));
    }
    Ok(known.iter().map(|(n, d)| params.get(*n).copied().unwrap_or(*d)).collect())
}

pub fn run_oracle(name: &str, count: usize, params: &BTreeMap<String, f64>) -> LabResult<OracleReport> {
    let eigenvalues = match name {
        "beam" => {
            take(params, &[])?;
            beam_reference(count)?
        }
        "conjugation" => {
            let p = take(params, &[("length", 1.0), ("b", 0.0)])?;
            conjugation_oracle(p[0], p[1], count)?
        }
        "plate" => {
            let p = take(params, &[("width", 1.0), ("height", 1.0), ("nu_x", 0.0), ("nu_y", 0.0)])?;
            fd_plate_oracle(p[0], p[1], &[p[2], p[3]], count)?
        }
        other => {
            return Err(LabError::Config(format!("unknown oracle '{other}' (known: {})", ORACLE_NAMES.join(", "))))
        }
    };
    Ok(OracleReport { schema_version: SCHEMA_VERSION, oracle: name.to_string(), params: params.clone(), eigenvalues })
}
