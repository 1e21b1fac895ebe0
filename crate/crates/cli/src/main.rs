//! Command-line front end: determinacy classification and maps, impulse
//! responses (with an optional lower bound on the policy rate), and welfare
//! sweeps, driven by a key-value configuration file with overrides.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::config::Builder;

#[derive(Parser)]
#[command(
    name = "mfplt",
    version,
    about = "Monetary-fiscal policy interactions under inflation and price level targeting",
    after_help = "Configuration: --config takes a plain-text file with [model], [rule], \
                  [experiment], and [output] sections of key = value lines; --set \
                  section.key=value overrides single entries. Exit codes: 0 success, \
                  2 configuration error, 3 not determinate, 4 ZLB search failure."
)]
struct Cli {
    /// Configuration file (key = value lines under section headers).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Model kind: leeper | nk.
    #[arg(long, global = true, value_name = "KIND")]
    model: Option<String>,

    /// Rule kind: it | plt | general.
    #[arg(long, global = true, value_name = "KIND")]
    rule: Option<String>,

    /// Override one configuration entry (repeatable), e.g. model.beta=0.98.
    #[arg(long = "set", global = true, value_name = "SECTION.KEY=VALUE")]
    sets: Vec<String>,

    /// Output path; results go to stdout when omitted.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format: csv | json | text (per-command defaults apply).
    #[arg(long, global = true, value_name = "FORMAT")]
    format: Option<String>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the configured model: eigenvalues, numeric and analytic verdicts.
    Classify,
    /// Impulse response to the configured shock, optionally under a rate floor.
    Irf,
    /// Welfare-loss curves over the rule coefficient plus the configured point's loss.
    Welfare,
    /// Cross-validated determinacy map over (policy coefficient, gamma).
    Map,
}

fn build_config(cli: &Cli) -> Result<config::RunConfig, config::ConfigError> {
    let mut builder = Builder::default();
    if let Some(path) = &cli.config {
        builder.load_file(path)?;
    }
    if let Some(kind) = &cli.model {
        builder.set_model(kind, "--model")?;
    }
    if let Some(kind) = &cli.rule {
        builder.set_rule(kind, "--rule")?;
    }
    for spec in &cli.sets {
        builder.set_override(spec)?;
    }
    let mut cfg = builder.finish()?;
    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    if let Some(fmt) = &cli.format {
        cfg.format = Some(match fmt.as_str() {
            "csv" => config::OutputFormat::Csv,
            "json" => config::OutputFormat::Json,
            "text" => config::OutputFormat::Text,
            other => {
                return Err(config::ConfigError(format!(
                    "--format must be csv, json, or text, got '{other}'"
                )))
            }
        });
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match build_config(&cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("configuration error: {e}");
            return ExitCode::from(2);
        }
    };
    let result = match cli.command {
        Command::Classify => commands::cmd_classify(&cfg),
        Command::Irf => commands::cmd_irf(&cfg),
        Command::Welfare => commands::cmd_welfare(&cfg),
        Command::Map => commands::cmd_map(&cfg),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(u8::try_from(f.code).unwrap_or(1))
        }
    }
}
