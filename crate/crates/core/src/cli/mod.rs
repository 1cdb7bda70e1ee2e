//! Command-line front end: `dephase-ee <command> --config <path>
//! [--key value ...] --out <path>`.

pub mod commands;
pub mod config;
pub mod csv;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

pub use commands::{cmd_surface, cmd_sweep, cmd_tpd, cmd_trace, cmd_verify, CommandOutput};
pub use config::{Command, RunConfig};

use crate::error::{Error, Result};

/// Environment variable capping the worker count; 0 or unset means one
/// worker per core.
pub const THREADS_ENV: &str = "DEPHASE_EE_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "dephase-ee",
    version,
    about = "Dephasing dynamics and entanglement entropy of a dimer in an oscillator bath"
)]
pub struct Cli {
    /// surface, trace, tpd, verify or sweep
    pub command: String,
    /// Flat `key = value` configuration file
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output path; reports go to stdout when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Overrides as `--key value` or `--key=value`
    #[arg(trailing_var_arg = true, allow_hyphen_values = true, num_args = 0..)]
    pub overrides: Vec<String>,
}

/// Splits `--key value` / `--key=value` pairs.
pub fn parse_overrides(args: &[String]) -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    let mut it = args.iter();
    while let Some(arg) = it.next() {
        let key = arg
            .strip_prefix("--")
            .ok_or_else(|| Error::Config(format!("expected --key, got {arg:?}")))?;
        match key.split_once('=') {
            Some((k, v)) => out.push((k.to_string(), v.to_string())),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| Error::Config(format!("missing value for --{key}")))?;
                out.push((key.to_string(), v.clone()));
            }
        }
    }
    Ok(out)
}

/// Builds the run configuration: defaults, then the file, then flags.
pub fn resolve(cli: &Cli) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    let mut config_path = cli.config.clone();
    let overrides = parse_overrides(&cli.overrides)?;
    if let Some((_, v)) = overrides.iter().rev().find(|(k, _)| k == "config") {
        config_path = Some(PathBuf::from(v));
    }
    if let Some(path) = &config_path {
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?;
        config.apply_text(&text)?;
    }
    config.command = cli.command.parse()?;
    if let Some(out) = &cli.out {
        config.out = Some(out.clone());
    }
    for (k, v) in overrides.iter().filter(|(k, _)| k != "config") {
        config.set(k, v)?;
    }
    config.validate()?;
    Ok(config)
}

/// Runs a resolved configuration and writes its output.
pub fn execute(config: &RunConfig) -> Result<bool> {
    let output = match config.command {
        Command::Surface => cmd_surface(config)?,
        Command::Trace => cmd_trace(config)?,
        Command::Tpd => cmd_tpd(config)?,
        Command::Sweep => cmd_sweep(config)?,
        Command::Verify => cmd_verify(config)?.0,
    };
    let to_stdout = matches!(config.command, Command::Tpd | Command::Verify);
    if to_stdout {
        print!("{}", output.text);
    }
    match &config.out {
        Some(path) => std::fs::write(path, &output.text).map_err(|source| Error::Io {
            path: path.clone(),
            source,
        })?,
        None if !to_stdout => print!("{}", output.text),
        None => {}
    }
    Ok(output.success)
}

fn thread_count() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Error::Config(format!(
                "{THREADS_ENV} must be a non-negative integer, got {v:?}"
            ))
        }),
        Err(_) => Ok(0),
    }
}

/// Entry point of the binary. Exit code 0 on success, 1 when `verify`
/// finds a failing check, 2 on any error.
pub fn main_with_args(args: impl IntoIterator<Item = String>) -> ExitCode {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let run = || -> Result<bool> {
        let config = resolve(&cli)?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(thread_count()?)
            .build()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
        pool.install(|| execute(&config))
    };
    match run() {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn overrides() {
        let args: Vec<String> = ["--lambda", "0.5", "--model=d"]
            .iter()
            .map(|s| s.to_string())
            .collect();
        assert_eq!(
            parse_overrides(&args).unwrap(),
            vec![
                ("lambda".into(), "0.5".into()),
                ("model".into(), "d".into())
            ]
        );
        assert!(parse_overrides(&["--lambda".to_string()]).is_err());
        assert!(parse_overrides(&["lambda".to_string()]).is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.conf");
        std::fs::write(&path, "lambda = 0.1\nmodel = d\n").unwrap();
        let cli = Cli::try_parse_from([
            "dephase-ee",
            "trace",
            "--config",
            path.to_str().unwrap(),
            "--lambda",
            "0.7",
            "--out",
            "x.csv",
        ])
        .unwrap();
        let c = resolve(&cli).unwrap();
        assert_eq!(c.command, Command::Trace);
        assert_eq!(c.lambda, Some(0.7));
        assert_eq!(c.model, config::ModelKind::D);
        assert_eq!(c.out, Some(PathBuf::from("x.csv")));
    }
}
