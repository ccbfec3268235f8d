//! Command-line driver for the verification suites.

mod config;
mod suites;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{parse_formats, parse_n, RunConfig, UsageError};
use suites::{SuiteError, SuiteOutcome};

#[derive(Debug, Parser)]
#[command(name = "kepler2d", version)]
#[command(about = "Numerical checks for the two-dimensional hydrogen atom")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    /// Flat `key = value` configuration file; flags override its entries.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Existing directory for report files.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Comma-separated subset of csv, json, svg.
    #[arg(long)]
    format: Option<String>,

    /// Write null runtimes so repeated runs are byte-identical.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Radial eigenvalues against E_n = -1/(n+1/2)^2, plus m-degeneracy.
    Spectrum {
        #[arg(long, allow_negative_numbers = true)]
        n_max: Option<i64>,
        #[command(flatten)]
        common: Common,
    },
    /// Scan the Bessel-Legendre integral relation over (n, m, x).
    VerifyIntegral {
        #[arg(long, allow_negative_numbers = true)]
        n_max: Option<i64>,
        /// Comma-separated x values.
        #[arg(long)]
        x: Option<String>,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Spectrum of the integral equation on the momentum sphere.
    Fock {
        #[arg(long)]
        grid_order: Option<usize>,
        /// Principal quantum number fixing q0 = 1/(n+1/2).
        #[arg(long, allow_negative_numbers = true)]
        n: Option<i64>,
        #[command(flatten)]
        common: Common,
    },
    /// Grid refinement study of the operator commutation relations.
    Commutators {
        #[arg(long)]
        preset: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Run every suite and write summary.json.
    All {
        /// Run suites concurrently.
        #[arg(long)]
        parallel: bool,
        #[arg(long)]
        preset: Option<String>,
        #[arg(long)]
        grid_order: Option<usize>,
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
}

fn base_config(common: &Common) -> Result<RunConfig, UsageError> {
    let mut cfg = RunConfig::default();
    if let Some(path) = &common.config {
        cfg.load(path)?;
    }
    if let Some(out) = &common.out {
        cfg.out = out.clone();
    }
    if let Some(f) = &common.format {
        cfg.formats = parse_formats(f)?;
    }
    if common.no_timing {
        cfg.timing = false;
    }
    Ok(cfg)
}

#[derive(Serialize)]
struct Summary<'a> {
    passed: bool,
    suites: &'a [SuiteOutcome],
}

fn report(outcomes: &[SuiteOutcome]) -> bool {
    for o in outcomes {
        let tag = if o.passed { "PASS" } else { "FAIL" };
        println!("{tag} {} (worst error {:.3e})", o.suite, o.worst_error);
        for line in &o.detail {
            println!("    {line}");
        }
    }
    outcomes.iter().all(|o| o.passed)
}

fn run_all(cfg: &RunConfig) -> Result<Vec<SuiteOutcome>, SuiteError> {
    let fock_ns: Vec<u32> = (0..=cfg.fock_n_max).collect();
    for &n in &fock_ns {
        cfg.fock_precondition(n)?;
    }
    let spectrum_n = cfg.spectrum_n_max;
    if cfg.parallel {
        std::thread::scope(|s| {
            let handles = [
                s.spawn(|| suites::spectrum(cfg, spectrum_n)),
                s.spawn(|| suites::integral(cfg, cfg.n_max)),
                s.spawn(|| suites::fock(cfg, &fock_ns)),
                s.spawn(|| suites::commutators(cfg)),
                s.spawn(|| suites::consistency(cfg)),
            ];
            handles
                .into_iter()
                .map(|h| h.join().expect("suite thread panicked"))
                .collect()
        })
    } else {
        Ok(vec![
            suites::spectrum(cfg, spectrum_n)?,
            suites::integral(cfg, cfg.n_max)?,
            suites::fock(cfg, &fock_ns)?,
            suites::commutators(cfg)?,
            suites::consistency(cfg)?,
        ])
    }
}

fn run(cli: Cli) -> Result<bool, SuiteError> {
    let outcomes = match cli.command {
        Command::Spectrum { n_max, common } => {
            let mut cfg = base_config(&common)?;
            if let Some(v) = n_max {
                cfg.spectrum_n_max = parse_n("--n-max", v)?;
            }
            cfg.validate()?;
            vec![suites::spectrum(&cfg, cfg.spectrum_n_max)?]
        }
        Command::VerifyIntegral { n_max, x, tol, common } => {
            let mut cfg = base_config(&common)?;
            if let Some(v) = n_max {
                cfg.n_max = parse_n("--n-max", v)?;
            }
            if let Some(x) = x {
                cfg.set("x", &x)?;
            }
            if let Some(t) = tol {
                cfg.integral_tol = t;
            }
            cfg.validate()?;
            vec![suites::integral(&cfg, cfg.n_max)?]
        }
        Command::Fock { grid_order, n, common } => {
            let mut cfg = base_config(&common)?;
            if let Some(g) = grid_order {
                cfg.grid_order = g;
            }
            if let Some(v) = n {
                cfg.fock_n = parse_n("--n", v)?;
            }
            cfg.validate()?;
            vec![suites::fock(&cfg, &[cfg.fock_n])?]
        }
        Command::Commutators { preset, common } => {
            let mut cfg = base_config(&common)?;
            if let Some(p) = preset {
                cfg.preset = p;
            }
            cfg.validate()?;
            vec![suites::commutators(&cfg)?]
        }
        Command::All {
            parallel,
            preset,
            grid_order,
            tol,
            common,
        } => {
            let mut cfg = base_config(&common)?;
            cfg.parallel |= parallel;
            if let Some(p) = preset {
                cfg.preset = p;
            }
            if let Some(g) = grid_order {
                cfg.grid_order = g;
            }
            if let Some(t) = tol {
                cfg.integral_tol = t;
            }
            cfg.validate()?;
            let outcomes = run_all(&cfg)?;
            let summary = Summary {
                passed: outcomes.iter().all(|o| o.passed),
                suites: &outcomes,
            };
            let mut json = serde_json::to_string_pretty(&summary).expect("summary serializes");
            json.push('\n');
            std::fs::write(cfg.out.join("summary.json"), json)?;
            outcomes
        }
    };
    Ok(report(&outcomes))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(SuiteError::Usage(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(SuiteError::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
