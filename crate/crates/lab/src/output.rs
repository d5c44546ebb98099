//! Where reports go and how they look.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use driftplate::assembly::AssembledForms;
use serde::Serialize;

use crate::error::{LabError, LabResult};
use crate::report::{CheckStatus, ConvergeReport, RunReport};

/// Default output directory when `--out` is not given.
pub const ENV_OUT_DIR: &str = "DRIFTPLATE_OUT_DIR";
pub const FALLBACK_OUT_DIR: &str = "driftplate-out";

/// --out, then $DRIFTPLATE_OUT_DIR, then ./driftplate-out.
pub fn out_dir(flag: Option<&Path>) -> PathBuf {
    if let Some(p) = flag {
        return p.to_path_buf();
    }
    match std::env::var_os(ENV_OUT_DIR) {
        Some(v) if !v.is_empty() => PathBuf::from(v),
        _ => PathBuf::from(FALLBACK_OUT_DIR),
    }
}

/// A configured path, absolute or relative to `dir`, or `dir/default`.
pub fn resolve(dir: &Path, configured: Option<&str>, default: &str) -> PathBuf {
    match configured {
        Some(p) if Path::new(p).is_absolute() => PathBuf::from(p),
        Some(p) => dir.join(p),
        None => dir.join(default),
    }
}

fn create_parent(path: &Path) -> LabResult<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent).map_err(|e| LabError::io(parent, e))?;
        }
    }
    Ok(())
}

pub fn to_json<T: Serialize>(value: &T) -> LabResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| LabError::Serialize(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn write_text(path: &Path, text: &str) -> LabResult<()> {
    create_parent(path)?;
    std::fs::write(path, text).map_err(|e| LabError::io(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> LabResult<()> {
    write_text(path, &to_json(value)?)
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> LabResult<()> {
    create_parent(path)?;
    let mut w = csv::Writer::from_path(path).map_err(|e| LabError::Serialize(e.to_string()))?;
    let err = |e: csv::Error| LabError::Serialize(e.to_string());
    w.write_record(header).map_err(err)?;
    for r in rows {
        w.write_record(r).map_err(err)?;
    }
    w.flush().map_err(|e| LabError::io(path, e))
}

fn num(x: f64) -> String {
    format!("{x:e}")
}

fn status(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "fail",
        CheckStatus::Rejected => "rejected",
    }
}

/// One row per requested inequality.
pub fn write_bounds_csv(path: &Path, report: &RunReport) -> LabResult<()> {
    let header: Vec<String> =
        ["theorem", "status", "n", "lambda_1", "lhs", "rhs", "margin", "relative_margin", "constant", "constant_tilde"]
            .iter()
            .map(|s| s.to_string())
            .collect();
    let rows: Vec<Vec<String>> = report
        .bounds
        .iter()
        .map(|b| {
            let mut row = vec![b.theorem.key().to_string(), status(b.status).to_string()];
            match &b.report {
                Some(r) => row.extend([
                    r.n.to_string(),
                    num(r.eigenvalues[0]),
                    num(r.lhs),
                    num(r.rhs),
                    num(r.margin),
                    num(r.relative_margin()),
                    num(r.constant),
                    num(r.constant_tilde),
                ]),
                None => row.extend(std::iter::repeat(String::new()).take(8)),
            }
            row
        })
        .collect();
    write_csv(path, &header, &rows)
}

pub fn write_spectrum_csv(path: &Path, report: &RunReport) -> LabResult<()> {
    let header = vec!["i".to_string(), "eigenvalue".to_string(), "residual".to_string()];
    let rows: Vec<Vec<String>> = report
        .spectrum
        .eigenvalues
        .iter()
        .zip(&report.spectrum.residuals)
        .enumerate()
        .map(|(i, (v, r))| vec![(i + 1).to_string(), num(*v), num(*r)])
        .collect();
    write_csv(path, &header, &rows)
}

/// Levels as rows, eigenvalues as columns, then the Richardson limits.
pub fn write_converge_csv(path: &Path, report: &ConvergeReport) -> LabResult<()> {
    let k = report.limits.len();
    let mut header = vec!["level".to_string(), "h".to_string()];
    header.extend((1..=k).map(|i| format!("lambda_{i}")));
    let mut rows: Vec<Vec<String>> = report
        .levels
        .iter()
        .zip(&report.mesh_sizes)
        .zip(&report.eigenvalues)
        .map(|((l, h), v)| {
            let mut row = vec![l.to_string(), num(*h)];
            row.extend(v.iter().map(|x| num(*x)));
            row
        })
        .collect();
    let mut limit = vec!["limit".to_string(), "0".to_string()];
    limit.extend(report.limits.iter().map(|x| num(*x)));
    rows.push(limit);
    write_csv(path, &header, &rows)
}

/// Upper-triangle nonzeros of A and M as "i j value" lines.
pub fn dump_matrices(dir: &Path, stem: &str, forms: &AssembledForms) -> LabResult<Vec<PathBuf>> {
    let mut paths = Vec::new();
    for (name, m) in [("A", &forms.a), ("M", &forms.m)] {
        let mut text = String::new();
        for j in 0..m.ncols() {
            for i in 0..=j {
                let v = m[(i, j)];
                if v != 0.0 {
                    let _ = writeln!(text, "{i} {j} {v:e}");
                }
            }
        }
        let path = dir.join(format!("{stem}_{name}.txt"));
        write_text(&path, &text)?;
        paths.push(path);
    }
    Ok(paths)
}

/// Human-readable summary for standard output.
pub fn run_table(report: &RunReport) -> String {
    let mut s = String::new();
    let g = &report.geometry;
    let _ = writeln!(s, "geometry   {} (n = {}, R^{}), drift {:?}", g.name, g.intrinsic_dim, g.ambient_dim, g.drift);
    let _ = writeln!(
        s,
        "mesh       {:?} elements, {} free DOFs, h = {:.4e}",
        report.mesh.elements, report.mesh.free_dofs, report.mesh.mesh_size
    );
    let _ = writeln!(
        s,
        "solver     {} ({} iterations), max residual {:.2e}",
        report.spectrum.method, report.spectrum.iterations, report.spectrum.max_residual
    );
    let _ = writeln!(s);
    let _ = writeln!(s, "{:>4}  {:>22}  {:>10}", "i", "eigenvalue", "residual");
    for (i, (v, r)) in report.spectrum.eigenvalues.iter().zip(&report.spectrum.residuals).enumerate() {
        let _ = writeln!(s, "{:>4}  {:>22.12}  {:>10.2e}", i + 1, v, r);
    }
    if !report.bounds.is_empty() {
        let _ = writeln!(s);
        let _ = writeln!(s, "{:<8} {:<9} {:>16} {:>16} {:>12}", "check", "status", "lhs", "rhs", "rel margin");
        for b in &report.bounds {
            match &b.report {
                Some(r) => {
                    let _ = writeln!(
                        s,
                        "{:<8} {:<9} {:>16.8} {:>16.8} {:>12.4e}",
                        b.theorem.key(),
                        status(b.status),
                        r.lhs,
                        r.rhs,
                        r.relative_margin()
                    );
                }
                None => {
                    let _ = writeln!(
                        s,
                        "{:<8} {:<9} {}",
                        b.theorem.key(),
                        status(b.status),
                        b.reason.as_deref().unwrap_or("")
                    );
                }
            }
        }
    }
    let id = &report.identities;
    let _ = writeln!(s);
    if let Some(c) = &id.coordinate {
        let _ = writeln!(s, "identities max violation {:.2e} over {} points (tol {:.0e})", c.max_violation, c.points, id.tolerance);
    }
    if let Some(t) = id.translator_residual {
        let _ = writeln!(s, "translator residual      {t:.2e}");
    }
    let f = &id.functionals;
    let _ = writeln!(
        s,
        "functionals              dirichlet {:.6} <= {:.6}, phi_hat {:.6} [{}]",
        f.dirichlet,
        f.sqrt_lambda1,
        f.phi_hat,
        if f.pass { "pass" } else { "fail" }
    );
    if let Some(g) = &id.general_formula {
        let _ = writeln!(
            s,
            "general formula          worst rel margin {:.3e}, orthogonality {:.1e} [{}]",
            g.report.worst_relative_margin,
            g.orthogonality,
            if g.pass { "pass" } else { "fail" }
        );
    }
    let _ = writeln!(s);
    let _ = writeln!(s, "overall: {}", if report.pass { "PASS" } else { "FAIL" });
    s
}

pub fn converge_table(report: &ConvergeReport) -> String {
    let mut s = String::new();
    let k = report.limits.len();
    let _ = write!(s, "{:>6} {:>12}", "level", "h");
    for i in 1..=k {
        let _ = write!(s, " {:>20}", format!("lambda_{i}"));
    }
    let _ = writeln!(s);
    for ((l, h), v) in report.levels.iter().zip(&report.mesh_sizes).zip(&report.eigenvalues) {
        let _ = write!(s, "{l:>6} {h:>12.4e}");
        for x in v {
            let _ = write!(s, " {x:>20.12}");
        }
        let _ = writeln!(s);
    }
    let _ = write!(s, "{:>6} {:>12}", "limit", "");
    for x in &report.limits {
        let _ = write!(s, " {x:>20.12}");
    }
    let _ = writeln!(s);
    let _ = writeln!(s);
    for (i, orders) in report.orders.iter().enumerate() {
        let text: Vec<String> = orders
            .iter()
            .map(|o| match o.value() {
                Some(p) => format!("{p:.3}"),
                None => "converged".to_string(),
            })
            .collect();
        let _ = writeln!(s, "observed order lambda_{}: {}", i + 1, text.join(", "));
    }
    s
}
