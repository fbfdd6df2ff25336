//! `loopspin` — run the identity checks and emit JSON reports.
//!
//! JSON goes to stdout, the human summary to stderr; exit code 0 means every
//! executed check passed. Set `LOOPSPIN_LOG=debug` for verbose logging.

use clap::{Args, Parser, Subcommand};
use loopspin_cli::{run_check, run_suite, CheckParams, CliError, Profile, CHECK_NAMES};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "loopspin", version, about = "Loop-algebra and spinor-module identity checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct ParamArgs {
    /// Simple Lie type, e.g. A1, A2, A3, B2, B3, G2
    #[arg(long)]
    algebra: Option<String>,
    /// Matrix group for path checks: SU2 or SU3
    #[arg(long)]
    group: Option<String>,
    /// Fourier cutoff N
    #[arg(long)]
    modes: Option<usize>,
    /// Sobolev exponent s
    #[arg(long)]
    sobolev: Option<f64>,
    /// Path sample count M
    #[arg(long)]
    samples: Option<usize>,
    /// Finite-difference step h
    #[arg(long)]
    fd_step: Option<f64>,
    /// Cutoff window ε for χ(∂_μ)
    #[arg(long)]
    eps: Option<f64>,
    /// Ambient dimension for linear-algebra checks
    #[arg(long)]
    dim: Option<usize>,
    /// Interpolation grid size
    #[arg(long)]
    t_steps: Option<usize>,
    /// Maximum affine Weyl length
    #[arg(long)]
    max_len: Option<usize>,
    /// Automorphism kind: id, inner, outer
    #[arg(long)]
    kappa: Option<String>,
    /// Number of random instances
    #[arg(long)]
    instances: Option<usize>,
}

impl From<ParamArgs> for CheckParams {
    fn from(a: ParamArgs) -> Self {
        CheckParams {
            algebra: a.algebra,
            group: a.group,
            modes: a.modes,
            sobolev: a.sobolev,
            samples: a.samples,
            fd_step: a.fd_step,
            eps: a.eps,
            dim: a.dim,
            t_steps: a.t_steps,
            max_len: a.max_len,
            kappa: a.kappa,
            instances: a.instances,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// List the registered checks
    List,
    /// Run a single check and print its JSON report
    Check {
        /// Check name, e.g. weyl-denominator
        name: String,
        #[command(flatten)]
        params: ParamArgs,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the JSON report to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the registered suite
    Suite {
        /// quick or full
        #[arg(long, default_value = "quick")]
        profile: String,
        /// RNG seed
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the JSON report array to this path
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn write_out(path: &PathBuf, payload: &str) -> Result<(), CliError> {
    std::fs::write(path, payload)
        .map_err(|e| CliError::Internal(format!("writing {}: {e}", path.display())))
}

fn real_main() -> Result<ExitCode, CliError> {
    env_logger::Builder::from_env(env_logger::Env::new().filter("LOOPSPIN_LOG")).init();
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            for name in CHECK_NAMES {
                println!("{name}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Check {
            name,
            params,
            seed,
            out,
        } => {
            let report = run_check(&name, &params.into(), seed)?;
            let payload = serde_json::to_string(&report)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            println!("{payload}");
            if let Some(path) = out {
                write_out(&path, &payload)?;
            }
            let mut err = std::io::stderr().lock();
            let _ = writeln!(
                err,
                "{}: {} ({} residuals, {} flags, {} ms)",
                report.check,
                if report.pass { "PASS" } else { "FAIL" },
                report.residuals.len(),
                report.flags.len(),
                report.wall_time_ms
            );
            Ok(if report.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Command::Suite { profile, seed, out } => {
            let profile = Profile::parse(&profile)?;
            let suite = run_suite(profile, seed)?;
            let payload = serde_json::to_string(&suite)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            println!("{payload}");
            if let Some(path) = out {
                write_out(&path, &payload)?;
            }
            let mut err = std::io::stderr().lock();
            let _ = writeln!(err, "suite profile={} seed={}", suite.profile, suite.seed);
            for report in &suite.reports {
                let _ = writeln!(
                    err,
                    "  {:<24} {:>28} {} ({} ms)",
                    report.check,
                    serde_json::to_string(&report.params).unwrap_or_default(),
                    if report.pass { "PASS" } else { "FAIL" },
                    report.wall_time_ms
                );
            }
            let _ = writeln!(
                err,
                "suite result: {} ({} checks)",
                if suite.pass { "PASS" } else { "FAIL" },
                suite.reports.len()
            );
            if !suite.pass {
                let _ = writeln!(err, "failed: {:?}", suite.failed);
            }
            Ok(if suite.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn main() -> ExitCode {
    match real_main() {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("loopspin: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Internal(msg)) => {
            eprintln!("loopspin: internal error: {msg}");
            ExitCode::from(3)
        }
    }
}
