use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use driftplate::geometry::{Catalogue, CATALOGUE_NAMES};
use driftplate_lab::converge::{converge, parse_levels};
use driftplate_lab::oracle::{parse_params, run_oracle};
use driftplate_lab::output::{
    converge_table, dump_matrices, out_dir, resolve, run_table, write_bounds_csv, write_converge_csv, write_json,
    write_spectrum_csv, write_text,
};
use driftplate_lab::pipeline::{coordinate_identities, run, sample_lattice};
use driftplate_lab::plot::convergence_svg;
use driftplate_lab::report::{IdentitiesReport, SCHEMA_VERSION};
use driftplate_lab::{ExperimentConfig, LabError, LabResult, EXIT_CHECK_FAILED, EXIT_ERROR};

/// println! that tolerates a closed stdout (e.g. piped into `head`).
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout().lock(), $($t)*);
    }};
}

/// Clamped plate spectra of drift Laplacians and checks of universal
/// eigenvalue inequalities.
#[derive(Parser)]
#[command(name = "driftplate", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline for one experiment config.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Output directory (default: $DRIFTPLATE_OUT_DIR, then ./driftplate-out).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Leave wall-clock timings out of the machine report.
        #[arg(long)]
        deterministic: bool,
        /// Also write the assembled stiffness and mass triplets.
        #[arg(long)]
        dump_matrices: bool,
    },
    /// Eigenvalues over nested refinement levels, limits and observed orders.
    Converge {
        #[arg(long)]
        config: PathBuf,
        /// Comma-separated elements per coordinate, each a multiple of the previous.
        #[arg(long, default_value = "25,50,100,200")]
        levels: String,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write an SVG of error against mesh size.
        #[arg(long)]
        plot: bool,
        #[arg(long)]
        deterministic: bool,
    },
    /// Coordinate-function identities (and the translator residual for unit drifts).
    Identities {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        deterministic: bool,
    },
    /// Reference eigenvalues: beam, conjugation (length, b) or plate (width, height, nu_x, nu_y).
    Oracle {
        name: String,
        count: usize,
        /// Oracle parameter as key=value; repeatable.
        #[arg(long = "param")]
        params: Vec<String>,
        /// Also write a JSON report into this directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The shipped geometry catalogue.
    ListGeometries,
}

fn stem(path: &Path) -> String {
    path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "experiment".to_string())
}

fn verdict(pass: bool) -> i32 {
    if pass {
        0
    } else {
        EXIT_CHECK_FAILED
    }
}

fn execute(cmd: Command) -> LabResult<i32> {
    match cmd {
        Command::Run { config, out, deterministic, dump_matrices: dump } => {
            let cfg = ExperimentConfig::load(&config)?;
            let artifacts = run(&cfg, deterministic)?;
            let report = &artifacts.report;
            let dir = out_dir(out.as_deref());
            let name = stem(&config);
            let json = resolve(&dir, cfg.output.report.as_deref(), &format!("{name}.json"));
            let csv = resolve(&dir, cfg.output.csv.as_deref(), &format!("{name}.csv"));
            let spectrum_csv = csv.with_file_name(format!("{}_spectrum.csv", stem(&csv)));
            write_json(&json, report)?;
            write_bounds_csv(&csv, report)?;
            write_spectrum_csv(&spectrum_csv, report)?;
            if dump {
                for p in dump_matrices(&dir, &name, &artifacts.forms)? {
                    eprintln!("wrote {}", p.display());
                }
            }
            say!("{}", run_table(report).trim_end());
            say!("report: {}", json.display());
            Ok(verdict(report.pass))
        }
        Command::Converge { config, levels, out, plot, deterministic } => {
            let cfg = ExperimentConfig::load(&config)?;
            let levels = parse_levels(&levels)?;
            let report = converge(&cfg, &levels, deterministic)?;
            let dir = out_dir(out.as_deref());
            let name = format!("{}_converge", stem(&config));
            write_json(&dir.join(format!("{name}.json")), &report)?;
            write_converge_csv(&dir.join(format!("{name}.csv")), &report)?;
            if plot {
                let svg = dir.join(format!("{name}.svg"));
                write_text(&svg, &convergence_svg(&report))?;
                say!("plot: {}", svg.display());
            }
            say!("{}", converge_table(&report).trim_end());
            Ok(0)
        }
        Command::Identities { config, out, deterministic: _ } => {
            let cfg = ExperimentConfig::load(&config)?;
            let setup = cfg.setup()?;
            let samples = sample_lattice(&setup.domain, cfg.checks.lattice);
            let coordinate = coordinate_identities(&setup.geometry, &setup.drift, &samples)?;
            let translator_residual = if setup.drift.unit {
                Some(driftplate::geometry::translator_residual(&setup.geometry, &setup.drift, &samples)?)
            } else {
                None
            };
            let tolerance = cfg.tolerances.identity;
            let report = IdentitiesReport {
                schema_version: SCHEMA_VERSION,
                config: cfg,
                coordinate,
                translator_residual,
                tolerance,
                pass: coordinate.max_violation <= tolerance,
            };
            write_json(&out_dir(out.as_deref()).join(format!("{}_identities.json", stem(&config))), &report)?;
            say!("{:<18} {:.3e}", "gradient_trace", coordinate.gradient_trace);
            say!("{:<18} {:.3e}", "mean_curvature", coordinate.mean_curvature);
            say!("{:<18} {:.3e}", "normality", coordinate.normality);
            say!("{:<18} {:.3e}", "drift_projection", coordinate.drift_projection);
            say!("{:<18} {:.3e}", "polarization", coordinate.polarization);
            say!("{:<18} {:.3e}", "cauchy_schwarz", coordinate.cauchy_schwarz);
            if let Some(t) = translator_residual {
                say!("{:<18} {:.3e}", "translator", t);
            }
            say!("{} points, tolerance {:.0e}: {}", coordinate.points, tolerance, if report.pass { "PASS" } else { "FAIL" });
            Ok(verdict(report.pass))
        }
        Command::Oracle { name, count, params, out } => {
            let params = parse_params(&params)?;
            let report = run_oracle(&name, count, &params)?;
            for (i, v) in report.eigenvalues.iter().enumerate() {
                say!("{:>3}  {:.10}", i + 1, v);
            }
            if let Some(dir) = out {
                write_json(&dir.join(format!("oracle_{name}.json")), &report)?;
            }
            Ok(0)
        }
        Command::ListGeometries => {
            for name in CATALOGUE_NAMES {
                say!("{name:<18} {}", Catalogue::describe(name).unwrap_or(""));
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { 0 };
            let _ = e.print();
            return ExitCode::from(code as u8);
        }
    };
    match execute(cli.command) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            if let LabError::Pipeline(driftplate::Error::NoConvergence { eigenvalues, .. }) = &e {
                eprintln!("eigenvalues computed anyway: {eigenvalues:?}");
            }
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
