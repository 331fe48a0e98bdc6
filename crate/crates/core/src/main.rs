use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use quasiheat::scenario::{run, RawConfig, ScenarioConfig, ScenarioError};

#[derive(Parser)]
#[command(
    name = "quasiheat",
    version,
    about = "Quasilinear heat conduction with a finite front speed"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario file and write its CSV outputs.
    Run {
        config: PathBuf,
        /// Output prefix: a directory (trailing `/`) or a file-name prefix.
        #[arg(short = 'o', long = "output")]
        output: Option<String>,
        /// Replace a config value, `key=value`. Repeatable.
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
    /// Parse and validate a scenario file without running it.
    Check {
        config: PathBuf,
        #[arg(long = "override", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

fn load(path: &PathBuf, overrides: &[String]) -> Result<ScenarioConfig, ScenarioError> {
    let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let mut raw = RawConfig::parse(&text)?;
    for o in overrides {
        raw.apply_override(o)?;
    }
    ScenarioConfig::from_raw(&raw)
}

fn execute(cli: Cli) -> Result<(), ScenarioError> {
    match cli.command {
        Command::Run {
            config,
            output,
            overrides,
        } => {
            let cfg = load(&config, &overrides)?;
            let prefix = output.or_else(|| cfg.output.clone()).unwrap_or_default();
            let summary = run(&cfg, &prefix)?;
            for f in summary.files {
                println!("{}", f.display());
            }
        }
        Command::Check { config, overrides } => {
            let cfg = load(&config, &overrides)?;
            for w in &cfg.warnings {
                log::warn!("{w}");
            }
            println!("{}", cfg.describe());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            eprintln!("{}", e.to_json());
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
