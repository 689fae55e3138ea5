//! `hocl` — scenario runner, toy trainer, bound calculator, and scaling
//! benchmark for the coupled oscillator/plasticity system.
//!
//! Subcommands:
//!
//!   hocl simulate <fig2|fig3|fig4> [--seed u64] [--steps n] [--out dir] [--config file]
//!   hocl train [--config file] [--out dir]
//!   hocl bounds --eps f --sigma-c f --k f --n u --eta f --m f --gamma f
//!   hocl bench --n 256,512,1024 [--k 16] [--reps 5] [--seed 42] [--out dir]
//!
//! Exit codes: 0 success, 2 usage/config error, 3 I/O error. `HOCL_THREADS`
//! caps internal parallelism (0 = auto, 1 = sequential). Every run echoes
//! its fully resolved config into `manifest.json`; feeding that manifest
//! back through `--config` reproduces the simulation outputs byte-exactly.

mod bench;
mod manifest;
mod output;
mod simulate;
mod train;

use clap::{Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "hocl", version, about = "coupled Kuramoto/Hebbian dynamics toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ScenarioArg {
    Fig2,
    Fig3,
    Fig4,
}

#[derive(Subcommand)]
enum Command {
    /// Run a reference simulation and write trace.csv / final_state.json /
    /// manifest.json into the output directory.
    Simulate {
        #[arg(value_enum)]
        scenario: ScenarioArg,
        /// Master seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// Step-count override.
        #[arg(long)]
        steps: Option<usize>,
        /// Output directory (created if absent).
        #[arg(long, default_value = "hocl-output")]
        out: PathBuf,
        /// Full config as JSON: either a bare scenario config or a
        /// manifest.json from a previous run.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Train the toy model on its synthetic regression task.
    Train {
        /// Full config as JSON (bare train config or a previous manifest);
        /// defaults to the built-in toy preset.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "hocl-output")]
        out: PathBuf,
    },
    /// Print the analytic bounds (timescale separation, ultimate weight
    /// bound, kernel Lipschitz constant) as JSON.
    Bounds {
        /// Quasi-static approximation error budget ε.
        #[arg(long)]
        eps: f64,
        /// Compatibility-kernel bandwidth σ_C.
        #[arg(long)]
        sigma_c: f64,
        /// Coupling strength K.
        #[arg(long)]
        k: f64,
        /// Ensemble size N.
        #[arg(long)]
        n: usize,
        /// Hebbian rate η.
        #[arg(long)]
        eta: f64,
        /// Activation bound M.
        #[arg(long)]
        m: f64,
        /// Weight decay γ.
        #[arg(long)]
        gamma: f64,
    },
    /// Time one full forward step (sync + attention + message passing +
    /// Hebbian) across ensemble sizes and fit the scaling exponent. Graph
    /// construction is timed separately.
    Bench {
        /// Comma-separated ascending ensemble sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        /// Neighborhood cap k.
        #[arg(long, default_value_t = 16)]
        k: usize,
        /// Timing repetitions (median reported; one extra warm-up rep runs
        /// first and is discarded).
        #[arg(long, default_value_t = 5)]
        reps: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value = "hocl-output")]
        out: PathBuf,
    },
}

/// Failures mapped onto the exit-code contract.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags or config contents → exit 2.
    Usage(String),
    /// Filesystem trouble → exit 3.
    Io(String),
}

impl From<hocl_core::Error> for CliError {
    fn from(e: hocl_core::Error) -> Self {
        match e {
            hocl_core::Error::Io(io) => CliError::Io(io.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();

    if let Ok(threads) = std::env::var("HOCL_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) => hocl_core::exec::configure_threads(n),
            Err(_) => {
                eprintln!("error: HOCL_THREADS must be an unsigned integer, got {threads:?}");
                return ExitCode::from(2);
            }
        }
    }

    let result = match cli.command {
        Command::Simulate { scenario, seed, steps, out, config } => {
            simulate::run(scenario, seed, steps, &out, config.as_deref())
        }
        Command::Train { config, out } => train::run(config.as_deref(), &out),
        Command::Bounds { eps, sigma_c, k, n, eta, m, gamma } => {
            bounds(eps, sigma_c, k, n, eta, m, gamma)
        }
        Command::Bench { n, k, reps, seed, out } => bench::run(&n, k, reps, seed, &out),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Io(msg)) => {
            eprintln!("io error: {msg}");
            ExitCode::from(3)
        }
    }
}

fn bounds(
    eps: f64,
    sigma_c: f64,
    k: f64,
    n: usize,
    eta: f64,
    m: f64,
    gamma: f64,
) -> CliResult<()> {
    for (name, v) in [("eps", eps), ("sigma-c", sigma_c), ("k", k), ("m", m), ("gamma", gamma)] {
        if v.is_nan() || v <= 0.0 {
            return Err(CliError::Usage(format!("{name} must be > 0")));
        }
    }
    if eta.is_nan() || eta < 0.0 {
        return Err(CliError::Usage("eta must be >= 0".into()));
    }
    if n < 1 {
        return Err(CliError::Usage("n must be >= 1".into()));
    }
    let l_c = hocl_core::stability::kernel_lipschitz(sigma_c);
    let params = hocl_core::plasticity::PlasticityParams::new(
        eta,
        gamma,
        0.5,
        1.0,
        hocl_core::plasticity::GateMode::Smooth,
    )
    .map_err(CliError::from)?;
    let out = serde_json::json!({
        "separation_bound": hocl_core::stability::separation_bound(eps, l_c, k, n, eta, m),
        "weight_bound": hocl_core::plasticity::weight_bound(&params, m, n),
        "kernel_lipschitz": l_c,
    });
    println!("{}", serde_json::to_string_pretty(&out).expect("static json"));
    Ok(())
}
