use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fsc_capacity_cli::commands::{cmd_bounds, cmd_oracle, cmd_run, cmd_table};
use fsc_capacity_cli::config::ChannelKind;
use fsc_capacity_cli::CliError;

/// Markov capacities of finite-state channels by gradient ascent on
/// approximating mutual-information sequences.
#[derive(Parser)]
#[command(name = "fsc-capacity", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Audit start-up conditions, run the optimizer and write trace and report.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// `key=value`, applied over the config file.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Certified interval next to a higher-order Birch lower bound.
    Bounds {
        #[arg(long, value_parser = parse_channel)]
        channel: ChannelKind,
        #[arg(long)]
        p: Option<f64>,
        #[arg(long)]
        q: Option<f64>,
    },
    /// Forward against brute-force conditional entropy of a source.
    Oracle {
        /// coin, deterministic, ge-error, ge-output, noiseless or bec.
        #[arg(long)]
        source: String,
        #[arg(long)]
        n: usize,
        /// Input parameter for the channel output sources.
        #[arg(long, default_value_t = 0.4)]
        theta: f64,
    },
    /// Re-emit a published table (ge, bec or noiseless) with computed values.
    Table {
        #[arg(long)]
        fixture: String,
    },
}

fn parse_channel(s: &str) -> Result<ChannelKind, String> {
    match s {
        "bec" => Ok(ChannelKind::Bec),
        "noiseless" => Ok(ChannelKind::Noiseless),
        "gilbert-elliott" | "ge" => Ok(ChannelKind::GilbertElliott),
        "generic" => Ok(ChannelKind::Generic),
        _ => Err(format!("unknown channel `{s}`")),
    }
}

fn dispatch(cmd: Command) -> Result<(), CliError> {
    match cmd {
        Command::Run { config, overrides } => cmd_run(&config, &overrides),
        Command::Bounds { channel, p, q } => cmd_bounds(channel, p, q).map(|s| print!("{s}")),
        Command::Oracle { source, n, theta } => cmd_oracle(&source, n, theta).map(|s| print!("{s}")),
        Command::Table { fixture } => cmd_table(&fixture).map(|s| print!("{s}")),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // Usage errors share exit 1 with configuration errors; 2 is
            // reserved for failed start-up audits.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
