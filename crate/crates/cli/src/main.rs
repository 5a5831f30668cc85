//! `calogero`: spectra, factorization checks, non-existence diagnostics and
//! cross-validation for −d²/dx² + g1/x² + g2·x² on the half-line.
//!
//! Exit codes: 0 success, 2 invalid arguments, 3 couplings without a
//! generalized oscillator representation, 4 numerical failure or failed check.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod report;

use std::f64::consts::FRAC_PI_2;
use std::path::PathBuf;
use std::process::ExitCode;

use calogero::nonexistence::ZeroCountMode;
use calogero::Couplings;
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;

use commands::{ExtensionChoice, FactorizeArgs, Failure, NonexistenceArgs, SpectrumArgs, SweepArgs};
use report::{Document, Format};

#[derive(Parser)]
#[command(
    name = "calogero",
    version,
    about = "Generalized Calogero Hamiltonian: factorized representations and spectra"
)]
struct Cli {
    /// Output format [default: csv for sweep, json otherwise].
    #[arg(long, value_enum, global = true)]
    format: Option<Format>,
    /// Write the report to this file instead of stdout.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct CouplingArgs {
    /// Coefficient of 1/x².
    #[arg(long, allow_negative_numbers = true)]
    g1: f64,
    /// Coefficient of x².
    #[arg(long, allow_negative_numbers = true)]
    g2: f64,
}

#[derive(Args, Clone, Copy)]
#[group(multiple = false)]
struct ExtensionArgs {
    /// Boundary parameter ν in radians, −π/2 ≤ ν ≤ π/2 (requires g1 < 3/4).
    #[arg(long, allow_negative_numbers = true)]
    nu: Option<f64>,
    /// The unique self-adjoint Hamiltonian (g1 ≥ 3/4).
    #[arg(long)]
    unique: bool,
    /// The Friedrichs extension ν = ±π/2 (the default).
    #[arg(long)]
    friedrichs: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Toggle {
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModeArg {
    Origin,
    Infinity,
}

#[derive(Subcommand)]
enum Command {
    /// Discrete spectrum of one self-adjoint extension.
    Spectrum {
        #[command(flatten)]
        couplings: CouplingArgs,
        #[command(flatten)]
        extension: ExtensionArgs,
        /// Number of levels.
        #[arg(long, default_value_t = 5)]
        n: usize,
        /// Cross-check against the shooting solver.
        #[arg(long, value_enum, default_value = "on")]
        oracle: Toggle,
    },
    /// The lowest levels as functions of ν (CSV by default).
    Sweep {
        #[command(flatten)]
        couplings: CouplingArgs,
        /// ν range and number of points.
        #[arg(long, num_args = 3, value_names = ["LO", "HI", "COUNT"], allow_negative_numbers = true, required = true)]
        sweep: Vec<f64>,
        /// Number of levels per point.
        #[arg(long, default_value_t = 3)]
        n: usize,
    },
    /// Checks b̌ǎf = (Ȟ + u)f, the kernel of ǎ at w = w0 and positivity of φ.
    FactorizeCheck {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        g1: f64,
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        g2: f64,
        /// Mixing angle μ ∈ [0, π/2].
        #[arg(long, default_value_t = FRAC_PI_2)]
        mu: f64,
        /// Shift parameter w ≥ w0 = −(1+κ)/2.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        w: f64,
        /// Test hook: adds a constant to the superpotential.
        #[arg(long, hide = true, default_value_t = 0.0, allow_negative_numbers = true)]
        perturb_h: f64,
    },
    /// Zero counts of solutions when g1 < −1/4 or g2 < 0.
    Nonexistence {
        #[command(flatten)]
        couplings: CouplingArgs,
        /// Interval (default 1e-8..1e-2 near the origin, 10..20 toward infinity).
        #[arg(long, num_args = 2, value_names = ["LO", "HI"])]
        interval: Option<Vec<f64>>,
        /// The constant u in φ'' = (g1/x² + g2·x² + u)φ.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        u: f64,
        /// Initial phase θ of (φ, φ') at the starting end.
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        phase: f64,
        /// Integration direction (defaults to the pathology present).
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Count zeros even in the existence region.
        #[arg(long)]
        force: bool,
    },
    /// Runs the ten acceptance criteria.
    Verify {
        /// Reduced grid.
        #[arg(long)]
        quick: bool,
        /// Test hook: corrupts Γ to prove the suite notices.
        #[arg(long, hide = true)]
        inject_gamma_fault: bool,
    },
}

fn configure_threads() {
    let Ok(raw) = std::env::var("CALOGERO_THREADS") else {
        return;
    };
    match raw.trim().parse::<usize>() {
        Ok(n) if n > 0 => {
            if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                warn!("could not size the thread pool: {e}");
            }
        }
        _ => warn!("ignoring CALOGERO_THREADS = {raw:?} (expected a positive integer)"),
    }
}

fn couplings(c: CouplingArgs) -> Couplings {
    Couplings::new(c.g1, c.g2)
}

fn run(command: &Command) -> Result<Document, Failure> {
    match *command {
        Command::Spectrum {
            couplings: c,
            extension: e,
            n,
            oracle,
        } => commands::spectrum_cmd(&SpectrumArgs {
            couplings: couplings(c),
            extension: ExtensionChoice {
                nu: e.nu,
                unique: e.unique,
                friedrichs: e.friedrichs,
            },
            n,
            oracle: oracle == Toggle::On,
        }),
        Command::Sweep {
            couplings: c,
            ref sweep,
            n,
        } => {
            let count = sweep[2];
            if !(count >= 0.0 && count.fract() == 0.0) {
                return Err(Failure::Usage(format!(
                    "sweep COUNT must be a whole number, got {count}"
                )));
            }
            commands::sweep_cmd(&SweepArgs {
                couplings: couplings(c),
                lo: sweep[0],
                hi: sweep[1],
                count: count as usize,
                levels: n,
            })
        }
        Command::FactorizeCheck {
            g1,
            g2,
            mu,
            w,
            perturb_h,
        } => commands::factorize_cmd(&FactorizeArgs {
            couplings: Couplings::new(g1, g2),
            mu,
            w,
            perturb_h,
        }),
        Command::Nonexistence {
            couplings: c,
            ref interval,
            u,
            phase,
            mode,
            force,
        } => commands::nonexistence_cmd(&NonexistenceArgs {
            couplings: couplings(c),
            interval: interval.as_ref().map(|v| (v[0], v[1])),
            u,
            phase,
            mode: mode.map(|m| match m {
                ModeArg::Origin => ZeroCountMode::Origin,
                ModeArg::Infinity => ZeroCountMode::Infinity,
            }),
            force,
        }),
        Command::Verify {
            quick,
            inject_gamma_fault,
        } => {
            calogero::specfun::set_gamma_fault(inject_gamma_fault);
            commands::verify_cmd(quick)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    configure_threads();
    let format = cli.format.unwrap_or(match cli.command {
        Command::Sweep { .. } => Format::Csv,
        _ => Format::Json,
    });
    let doc = match run(&cli.command) {
        Ok(doc) => doc,
        Err(f) => {
            eprintln!("error: {}", f.message());
            return ExitCode::from(f.exit_code());
        }
    };
    for c in &doc.checks {
        c.log();
    }
    if let Err(e) = report::emit(&doc.render(format), cli.out.as_deref()) {
        eprintln!("error: cannot write output: {e}");
        return ExitCode::from(2);
    }
    match doc.first_failed_check() {
        None => ExitCode::SUCCESS,
        Some(c) => {
            eprintln!(
                "error: check failed: {}{}",
                c.name,
                c.detail.as_ref().map_or(String::new(), |d| format!(" ({d})"))
            );
            ExitCode::from(4)
        }
    }
}
