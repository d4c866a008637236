use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use airsea_owc::capacity::{Method, SweepAxis};
use airsea_owc::cli::{self, RunContext, SlopeKind, DEFAULT_SAMPLES, DEFAULT_SEED};
use airsea_owc::eckv::FULLY_DEVELOPED;
use airsea_owc::fitting::Family;
use airsea_owc::{Error, Result};

/// Air-sea optical link simulator.
#[derive(Parser)]
#[command(version, about)]
struct Args {
    /// Scenario TOML file; missing keys take the baseline values.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output CSV path (stdout if omitted).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Monte-Carlo sample count.
    #[arg(long, global = true, default_value_t = DEFAULT_SAMPLES)]
    samples: usize,
    /// Worker threads (defaults to all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tilt-angle PDFs of the surface models.
    SlopePdf {
        #[arg(long, value_delimiter = ',', default_values = ["cm", "mw"])]
        models: Vec<SlopeKind>,
        #[arg(long, default_value = "6,10,14")]
        winds: String,
        /// Angles in degrees: list or start:stop:step.
        #[arg(long, default_value = "0:90:0.5")]
        grid: String,
    },
    /// Fit and rank distribution families against a tilt PDF table.
    Fit {
        /// CSV with header angle_deg,density_per_deg.
        input: PathBuf,
        #[arg(long, value_delimiter = ',')]
        families: Vec<Family>,
    },
    /// Wind-speed laws for the Weibull parameters.
    Regress {
        /// CSV with header U,k,lambda (built-in reference fits if omitted).
        input: Option<PathBuf>,
    },
    /// Derived link-budget quantities.
    LinkBudget,
    /// Ergodic capacity of the scenario.
    Capacity {
        #[arg(long, default_value = "angle")]
        method: Method,
    },
    /// Capacity along one scenario axis.
    Sweep {
        /// Z, U, fov, sigma_r or L_t.
        #[arg(long)]
        axis: SweepAxis,
        /// List or start:stop:step.
        #[arg(long)]
        values: String,
        #[arg(long, default_value = "angle")]
        method: Method,
    },
    /// Monte-Carlo capacity against the quadrature value.
    Mc {
        /// Sample sizes (defaults to --samples).
        #[arg(long, value_delimiter = ',')]
        sizes: Vec<usize>,
    },
    /// Spectrum mean square slope against the Cox-Munk variance.
    EckvMss {
        #[arg(long, default_value = "3,5,8,10,12,16")]
        wind: String,
        #[arg(long, default_value_t = FULLY_DEVELOPED)]
        inverse_wave_age: f64,
    },
}

fn run(args: Args) -> Result<()> {
    if let Some(n) = args.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(e.to_string()))?;
    }
    let mut argv: Vec<String> = std::env::args().collect();
    if let Some(name) = argv.first().and_then(|a| Path::new(a).file_name()) {
        argv[0] = name.to_string_lossy().into_owned();
    }
    let command_line = argv.join(" ");
    let ctx = RunContext::new(
        command_line,
        args.config.as_deref(),
        args.seed,
        args.samples,
    )?;
    let table = match args.command {
        Command::SlopePdf {
            models,
            winds,
            grid,
        } => cli::cmd_slope_pdf(
            &ctx,
            &models,
            &cli::parse_values(&winds)?,
            &cli::parse_values(&grid)?,
        )?,
        Command::Fit { input, families } => cli::cmd_fit(&ctx, &input, &families)?,
        Command::Regress { input } => cli::cmd_regress(&ctx, input.as_deref())?,
        Command::LinkBudget => cli::cmd_link_budget(&ctx)?,
        Command::Capacity { method } => cli::cmd_capacity(&ctx, method)?,
        Command::Sweep {
            axis,
            values,
            method,
        } => cli::cmd_sweep(&ctx, axis, &cli::parse_values(&values)?, method)?,
        Command::Mc { sizes } => cli::cmd_mc(&ctx, &sizes)?,
        Command::EckvMss {
            wind,
            inverse_wave_age,
        } => cli::cmd_eckv_mss(&ctx, &cli::parse_values(&wind)?, inverse_wave_age)?,
    };
    cli::emit(&table, args.out.as_ref())
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
