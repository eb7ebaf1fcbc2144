//! Experiment runner for the spin-ensemble quantum-kernel pipeline.
//!
//! Subcommands: `profile`, `mqspec`, `regress`, `classify`, `gram`. Every
//! output is a CSV (or JSON report) that embeds the resolved configuration
//! as `# key = value` header lines; rerunning with that configuration
//! reproduces the file.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::{CommandKind, RawConfig};

/// Exit codes: 0 success, 1 I/O, 2 configuration, 3 singular system,
/// 4 optimizer non-convergence.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<qkml::Error> for CliError {
    fn from(e: qkml::Error) -> Self {
        let code = match &e {
            qkml::Error::SingularSystem { .. } => 3,
            qkml::Error::NonConvergence { .. } => 4,
            qkml::Error::Io(_) | qkml::Error::Json(_) => 1,
            _ => 2,
        };
        Self {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "qkml",
    version,
    about = "Quantum-kernel machine learning on a simulated spin ensemble"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// 1D kernel profile k(delta) over [-pi/2, pi/2], one column per tau
    Profile(CommonArgs),
    /// Multiple-quantum spectrum (coherence-order intensities), one column per tau
    Mqspec(CommonArgs),
    /// Kernel ridge regression on the 1D sin/sinc tasks
    Regress(CommonArgs),
    /// Hard-margin SVM on the circles/moons tasks with a decision grid
    Classify(CommonArgs),
    /// Gram matrix export for a dataset file
    Gram(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Flat key = value config file; command-line flags override it
    #[arg(long)]
    config: Option<PathBuf>,
    /// Spin count n
    #[arg(long)]
    spins: Option<usize>,
    /// Segment duration tau; repeat the flag for several values
    #[arg(long)]
    tau: Vec<f64>,
    /// Trotter step (substeps per segment = round(tau/dt))
    #[arg(long)]
    dt: Option<f64>,
    /// Seed for couplings and dataset draws
    #[arg(long)]
    seed: Option<u64>,
    /// Task: sin|sinc (regress), circles|moons (classify)
    #[arg(long)]
    task: Option<String>,
    /// Kernel: pure (state overlap) or trace (ensemble form, small n only)
    #[arg(long)]
    kernel: Option<String>,
    /// Input units for 1D regression data: degrees|radians
    #[arg(long)]
    units: Option<String>,
    /// Training point count
    #[arg(long)]
    count: Option<usize>,
    /// Gaussian noise width for circles/moons
    #[arg(long)]
    noise: Option<f64>,
    /// Inner circle radius for circles
    #[arg(long)]
    factor: Option<f64>,
    /// Feature-scaling halfwidth in radians for 2D tasks
    #[arg(long)]
    halfwidth: Option<f64>,
    /// Evaluation grid size for regression
    #[arg(long)]
    eval_count: Option<usize>,
    /// Evaluation set: grid, or union (grid plus training points)
    #[arg(long)]
    eval_mode: Option<String>,
    /// Sampling range lower edge for regression inputs
    #[arg(long)]
    range_min: Option<f64>,
    /// Sampling range upper edge for regression inputs
    #[arg(long)]
    range_max: Option<f64>,
    /// Smallest regularization strength on the selection grid
    #[arg(long)]
    lambda_min: Option<f64>,
    /// Largest regularization strength on the selection grid
    #[arg(long)]
    lambda_max: Option<f64>,
    /// Number of log-spaced regularization grid values
    #[arg(long)]
    lambda_count: Option<usize>,
    /// Dual-coefficient cap realizing the hard margin
    #[arg(long)]
    c_cap: Option<f64>,
    /// SVM KKT stopping tolerance
    #[arg(long)]
    svm_tol: Option<f64>,
    /// Decision grid resolution per axis
    #[arg(long)]
    grid_res: Option<usize>,
    /// Number of profile samples over [-pi/2, pi/2]
    #[arg(long)]
    profile_points: Option<usize>,
    /// Number of profile samples over one full period for the spectrum
    #[arg(long)]
    mq_samples: Option<usize>,
    /// Fill 1D Gram matrices through the shift-invariance fast path
    #[arg(long)]
    fast_1d: Option<bool>,
    /// Spin-count cap for the trace kernel
    #[arg(long)]
    trace_cap: Option<usize>,
    /// Worker threads (0 = all cores); results do not depend on this
    #[arg(long)]
    threads: Option<usize>,
    /// Input dataset CSV (gram)
    #[arg(long)]
    data: Option<PathBuf>,
    /// Output CSV path
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON report path (default: output path with .json extension)
    #[arg(long)]
    report: Option<PathBuf>,
}

impl CommonArgs {
    fn to_raw(&self) -> RawConfig {
        RawConfig {
            spins: self.spins,
            tau: if self.tau.is_empty() {
                None
            } else {
                Some(self.tau.clone())
            },
            dt: self.dt,
            seed: self.seed,
            task: self.task.clone(),
            kernel: self.kernel.clone(),
            units: self.units.clone(),
            count: self.count,
            noise: self.noise,
            factor: self.factor,
            halfwidth: self.halfwidth,
            eval_count: self.eval_count,
            eval_mode: self.eval_mode.clone(),
            range_min: self.range_min,
            range_max: self.range_max,
            lambda_min: self.lambda_min,
            lambda_max: self.lambda_max,
            lambda_count: self.lambda_count,
            c_cap: self.c_cap,
            svm_tol: self.svm_tol,
            grid_res: self.grid_res,
            profile_points: self.profile_points,
            mq_samples: self.mq_samples,
            fast_1d: self.fast_1d,
            trace_cap: self.trace_cap,
            threads: self.threads,
            data: self.data.clone(),
            out: self.out.clone(),
            report: self.report.clone(),
        }
    }
}

fn run() -> Result<(), CliError> {
    let cli = Cli::parse();
    let (kind, args) = match &cli.command {
        Command::Profile(a) => (CommandKind::Profile, a),
        Command::Mqspec(a) => (CommandKind::Mqspec, a),
        Command::Regress(a) => (CommandKind::Regress, a),
        Command::Classify(a) => (CommandKind::Classify, a),
        Command::Gram(a) => (CommandKind::Gram, a),
    };
    let file_cfg = match &args.config {
        Some(path) => RawConfig::from_file(path)?,
        None => RawConfig::default(),
    };
    let cfg = file_cfg.overlay(args.to_raw()).resolve(kind)?;
    if cfg.threads > 0 {
        // Ignore the error when a pool already exists (tests, repeat calls).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cfg.threads)
            .build_global();
    }
    match kind {
        CommandKind::Profile => commands::profile::run(&cfg),
        CommandKind::Mqspec => commands::mqspec::run(&cfg),
        CommandKind::Regress => commands::regress::run(&cfg),
        CommandKind::Classify => commands::classify::run(&cfg),
        CommandKind::Gram => commands::gram::run(&cfg),
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
