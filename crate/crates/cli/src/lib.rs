//! Batch front end for `qkramers-core`.
//!
//! Reads a flat TOML configuration, applies command-line overrides, runs one
//! command and renders CSV or JSON. Temperature sweeps run in parallel with
//! results kept in input order, so identical inputs give identical bytes.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use clap::{Parser, Subcommand};

use config::{CommonArgs, ProfileArgs, RunConfig, SeriesArgs};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "qkramers", version, about = "Quantum Kramers flux state and escape rate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Escape rate with decomposition and validity flags (JSON or CSV).
    Rate(CommonArgs),
    /// Diagonal flux form factor g(q) per theta (CSV `q,theta,g_diag`).
    FluxProfile {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        profile: ProfileArgs,
    },
    /// Crossover temperature theta_c and growth rate omega_R (JSON).
    CriticalTheta(CommonArgs),
    /// Matching ratio, plateau window and damping bound (JSON).
    Validity(CommonArgs),
    /// A(t), S(t) and the finite-time form factor on a t grid.
    Timeseries {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        series: SeriesArgs,
    },
}

/// Runs a parsed command and writes its output.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let none_p = ProfileArgs::default();
    let none_s = SeriesArgs::default();
    let (common, profile, series) = match &cli.command {
        Command::Rate(c) | Command::CriticalTheta(c) | Command::Validity(c) => (c, &none_p, &none_s),
        Command::FluxProfile { common, profile } => (common, profile, &none_s),
        Command::Timeseries { common, series } => (common, &none_p, series),
    };
    let cfg = RunConfig::from_args(common, profile, series)?;
    let text = match cli.command {
        Command::Rate(_) => commands::cmd_rate(&cfg)?,
        Command::FluxProfile { .. } => commands::cmd_flux_profile(&cfg)?,
        Command::CriticalTheta(_) => commands::cmd_critical_theta(&cfg)?,
        Command::Validity(_) => commands::cmd_validity(&cfg)?,
        Command::Timeseries { .. } => commands::cmd_timeseries(&cfg)?,
    };
    output::emit(&text, cfg.out.as_deref())
}
