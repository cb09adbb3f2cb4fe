use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

mod commands;
mod config;

use config::{RunConfig, UsageError};

#[derive(Debug, Parser)]
#[command(
    name = "lowdiss",
    version,
    about = "Efficiency-power bounds of low-dissipation heat engines"
)]
struct Cli {
    /// TOML configuration file; command-line flags override its values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Worker threads for sampling and scans (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Phenomenological,
    Simulated,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the bound values at one normalized power.
    Bounds {
        #[arg(long = "p", allow_negative_numbers = true)]
        p_norm: f64,
        #[arg(long, allow_negative_numbers = true)]
        zeta: f64,
        #[arg(long = "eta-c")]
        eta_c: f64,
    },
    /// Run one cycle to its steady state and append it to samples.csv.
    Simulate {
        #[arg(long = "t-h")]
        t_h: Option<f64>,
        #[arg(long = "t-c")]
        t_c: Option<f64>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Sample random stroke times, write samples.csv and audit.csv.
    Sample {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Irreversible entropy of a single stroke against its duration, to entropy.csv.
    EntropyScan {
        /// Inverse bath temperature; repeat for several scans.
        #[arg(long)]
        beta: Vec<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Bound families against normalized power, to curves.csv.
    Curves {
        #[arg(long = "eta-c")]
        eta_c: Option<f64>,
        /// Asymmetry parameter; repeat for several curves.
        #[arg(long, allow_negative_numbers = true)]
        zeta: Vec<f64>,
        #[arg(long)]
        points: Option<usize>,
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Compare the maximum power with the nonlinear-model expression over a grid of stroke times.
    MniCompare {
        /// Grid points per axis.
        #[arg(long, default_value_t = 5)]
        points: usize,
        /// Half-width of the grid around the optimal times, in decades.
        #[arg(long, default_value_t = 1.0)]
        decades: f64,
    },
}

fn is_usage_error(err: &anyhow::Error) -> bool {
    use lowdiss::Error;
    err.chain().any(|cause| {
        cause.is::<UsageError>()
            || matches!(
                cause.downcast_ref::<Error>(),
                Some(
                    Error::InvalidParameter { .. }
                        | Error::PowerOutOfRange { .. }
                        | Error::InvalidRegime(_)
                        | Error::TimeOutOfRange { .. }
                        | Error::Infeasible(_)
                )
            )
    })
}

fn run(cli: Cli) -> anyhow::Result<()> {
    if let Some(n) = cli.threads {
        if n == 0 {
            return Err(config::usage("--threads must be at least 1"));
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    let mut cfg = RunConfig::load(cli.config.as_deref())?;
    match cli.command {
        Command::Bounds { p_norm, zeta, eta_c } => commands::bounds(p_norm, zeta, eta_c),
        Command::Simulate { t_h, t_c, output_dir } => {
            if let Some(t) = t_h {
                cfg.protocol.t_h = t;
            }
            if let Some(t) = t_c {
                cfg.protocol.t_c = t;
            }
            if let Some(d) = output_dir {
                cfg.output.directory = d;
            }
            commands::simulate(&cfg)
        }
        Command::Sample {
            n,
            seed,
            mode,
            output_dir,
        } => {
            if let Some(n) = n {
                cfg.sampling.n = n;
            }
            if let Some(s) = seed {
                cfg.sampling.seed = s;
            }
            if let Some(m) = mode {
                cfg.sampling.mode = match m {
                    ModeArg::Phenomenological => "phenomenological",
                    ModeArg::Simulated => "simulated",
                }
                .into();
            }
            if let Some(d) = output_dir {
                cfg.output.directory = d;
            }
            commands::sample(&cfg)
        }
        Command::EntropyScan {
            beta,
            points,
            output_dir,
        } => {
            if !beta.is_empty() {
                cfg.scan.betas = beta;
            }
            if let Some(p) = points {
                cfg.scan.points = p;
            }
            if let Some(d) = output_dir {
                cfg.output.directory = d;
            }
            commands::entropy_scan(&cfg)
        }
        Command::Curves {
            eta_c,
            zeta,
            points,
            output_dir,
        } => {
            if let Some(e) = eta_c {
                cfg.curves.eta_c = e;
            }
            if !zeta.is_empty() {
                cfg.curves.zetas = zeta;
            }
            if let Some(p) = points {
                cfg.curves.points = p;
            }
            if let Some(d) = output_dir {
                cfg.output.directory = d;
            }
            commands::curves(&cfg)
        }
        Command::MniCompare { points, decades } => commands::mni_compare(&cfg, points, decades),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if is_usage_error(&err) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
