//! `eplab` — sweeps, exceptional-point searches, cross sections, and figure
//! reproduction for small non-Hermitian resonance models.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use eplab::config::{self, OutputFormat};
use eplab::presets::Panel;
use eplab::runner::{self, EmitOptions};

#[derive(Parser)]
#[command(name = "eplab", version, about = "Non-Hermitian level dynamics toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonOpts {
    /// Output directory for generated files
    #[arg(short, long, default_value = ".")]
    out: PathBuf,
    /// Output format (overrides the config's [output] section)
    #[arg(long, value_parser = parse_format)]
    format: Option<OutputFormat>,
    /// Override the number of sweep steps
    #[arg(long)]
    steps: Option<usize>,
    /// Suppress the one-line summary on stdout
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured parameter sweep and write the trajectories
    Sweep {
        /// Run configuration (TOML)
        #[arg(short, long)]
        config: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Search the configured system for exceptional points
    EpFind {
        /// Run configuration (TOML)
        #[arg(short, long)]
        config: PathBuf,
        /// Suppress the result line on stdout
        #[arg(short, long)]
        quiet: bool,
    },
    /// Evaluate scattering cross sections for the configured system
    Xsec {
        /// Run configuration (TOML)
        #[arg(short, long)]
        config: PathBuf,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Reproduce a built-in figure preset (1..=9)
    Figure {
        /// Figure number
        figure_id: u8,
        /// Restrict to one panel (left, middle, right)
        #[arg(long, value_parser = parse_panel)]
        panel: Option<Panel>,
        /// Also write a gnuplot script for the generated files
        #[arg(long)]
        plot_script: bool,
        #[command(flatten)]
        common: CommonOpts,
    },
}

fn parse_panel(s: &str) -> Result<Panel, String> {
    Panel::parse(s).ok_or_else(|| format!("unknown panel \"{s}\" (use left, middle, or right)"))
}

fn parse_format(s: &str) -> Result<OutputFormat, String> {
    OutputFormat::parse(s).ok_or_else(|| format!("unknown format \"{s}\" (use csv or json)"))
}

fn load(path: &Path) -> Result<config::RunConfig> {
    config::load_config(path).with_context(|| format!("cannot load {}", path.display()))
}

fn emit_options(common: &CommonOpts, config_format: Option<OutputFormat>) -> EmitOptions {
    EmitOptions {
        out_dir: common.out.clone(),
        format: common.format.or(config_format).unwrap_or(OutputFormat::Csv),
        quiet: common.quiet,
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Sweep { config, common } => {
            let cfg = load(&config)?;
            let opts = emit_options(&common, Some(cfg.format));
            runner::sweep_action(&cfg, common.steps, &opts)?;
        }
        Command::EpFind { config, quiet } => {
            let cfg = load(&config)?;
            runner::ep_find_action(&cfg, quiet)?;
        }
        Command::Xsec { config, common } => {
            let cfg = load(&config)?;
            let opts = emit_options(&common, Some(cfg.format));
            runner::xsec_action(&cfg, &opts)?;
        }
        Command::Figure { figure_id, panel, plot_script, common } => {
            let opts = emit_options(&common, None);
            runner::figure_action(figure_id, panel, common.steps, plot_script, &opts)?;
        }
    }
    Ok(())
}
