//! Command-line front end: config parsing, strip ingestion, orchestration of
//! the solvers and verifiers, and emission of meshes and CSV reports.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

pub use commands::{diagnose, hint, Outcome};
use config::{PerturbConfig, RunConfig, DEFAULT_SEED};

#[derive(Debug, Parser)]
#[command(name = "bisoliton", version, about = "Born-Infeld soliton and timelike minimal surface toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample a surface from F and G on a parameter grid.
    Surface(CommonArgs),
    /// Reconstruct F and G from a strip and solve the Björling problem.
    Bjorling {
        #[command(flatten)]
        common: CommonArgs,
        /// Bump perturbation of F, e.g. `--perturb J=1.0,1.5 amp=0.05`.
        #[arg(long, num_args = 1..=2, value_names = ["J=c,d", "amp=x"])]
        perturb: Option<Vec<String>>,
    },
    /// Solve the Björling problem for a timelike minimal surface in L3.
    BjorlingTms(CommonArgs),
    /// Run the invariant suite on a grid.
    Verify(CommonArgs),
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long)]
    pub config: PathBuf,
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
    #[arg(long)]
    pub seed: Option<u64>,
}

/// Shared state of one command invocation.
#[derive(Debug, Clone)]
pub struct Context {
    pub config: RunConfig,
    pub out_dir: PathBuf,
    pub seed: u64,
}

impl Context {
    pub fn new(args: &CommonArgs) -> Result<Self> {
        let config = RunConfig::load(&args.config)?;
        config.validate().map_err(|e| anyhow::anyhow!("{}: {e}", args.config.display()))?;
        std::fs::create_dir_all(&args.out)
            .map_err(|e| anyhow::anyhow!("cannot create output directory {}: {e}", args.out.display()))?;
        let seed = args.seed.or(config.seed).unwrap_or(DEFAULT_SEED);
        Ok(Context { config, out_dir: args.out.clone(), seed })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.out_dir.join(name)
    }
}

pub fn run(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Surface(a) => commands::surface::run(&Context::new(a)?),
        Command::Bjorling { common, perturb } => {
            let ctx = Context::new(common)?;
            let perturb = perturb.as_deref().map(PerturbConfig::from_args).transpose()?;
            commands::bjorling::run(&ctx, perturb)
        }
        Command::BjorlingTms(a) => commands::tms::run(&Context::new(a)?),
        Command::Verify(a) => commands::verify::run(&Context::new(a)?),
    }
}
