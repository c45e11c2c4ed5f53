//! Command-line driver.
//!
//! Every command builds its whole output in memory and writes it in one go,
//! so a failure never leaves a half-written file behind.

mod commands;
mod config;
mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::protocols::Protocol;

pub use commands::{cmd_fig2, cmd_repeat, cmd_run, cmd_verify_tables, CellCheck, CorruptCell};
pub use config::{ComplexLit, ConfigFile, RunConfig, DEFAULT_MAX_TRIES, DEFAULT_TRIALS};
pub use output::sig12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Human,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ProtocolArg {
    Ramirez,
    Proposed,
}

impl From<ProtocolArg> for Protocol {
    fn from(p: ProtocolArg) -> Self {
        match p {
            ProtocolArg::Ramirez => Protocol::Ramirez,
            ProtocolArg::Proposed => Protocol::Proposed,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Protocol(String),
    #[error("{0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Protocol(_) => 3,
        }
    }
}

impl From<crate::Error> for CliError {
    fn from(e: crate::Error) -> Self {
        if e.is_protocol_violation() {
            CliError::Protocol(e.to_string())
        } else {
            CliError::Usage(e.to_string())
        }
    }
}

impl From<crate::qcore::StateError> for CliError {
    fn from(e: crate::qcore::StateError) -> Self {
        crate::Error::from(e).into()
    }
}

#[derive(Debug, Parser)]
#[command(name = "cluster-teleport", version, about = "Controlled teleportation over a four-qubit cluster channel")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check both outcome tables against simulation, cell by cell.
    VerifyTables {
        #[command(flatten)]
        common: CommonArgs,
        /// Corrupt one oracle cell, e.g. `t1:phi+:psi-` or `t2:psi+`.
        #[arg(long, hide = true)]
        corrupt_cell: Option<String>,
    },
    /// One protocol run with its full transcript.
    Run {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Repeat-until-success statistics for the information-preserving protocol.
    Repeat {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Total success probability 1 - (1-p)^N on a grid.
    Fig2 {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated p values (default: the standard sweeps).
        #[arg(long, value_delimiter = ',')]
        p_values: Option<Vec<f64>>,
        /// Comma-separated N values.
        #[arg(long, value_delimiter = ',')]
        n_values: Option<Vec<u32>>,
    },
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// Flat JSON config file; flags override its fields.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub max_tries: Option<u32>,
    #[arg(long, value_enum)]
    pub protocol: Option<ProtocolArg>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// POVM scale; defaults to max(2, ρ_min) per branch.
    #[arg(long)]
    pub rho: Option<f64>,
    /// Complex literals: `0.5` or `re,im`.
    #[arg(long, value_parser = ComplexLit::parse_flag, allow_hyphen_values = true)]
    pub alpha: Option<ComplexLit>,
    #[arg(long, value_parser = ComplexLit::parse_flag, allow_hyphen_values = true)]
    pub beta: Option<ComplexLit>,
    #[arg(long, value_parser = ComplexLit::parse_flag, allow_hyphen_values = true)]
    pub gamma: Option<ComplexLit>,
    #[arg(long, value_parser = ComplexLit::parse_flag, allow_hyphen_values = true)]
    pub eta: Option<ComplexLit>,
    /// Input amplitude of |0⟩, or `random`.
    #[arg(long, value_parser = ComplexLit::parse_flag, allow_hyphen_values = true)]
    pub a: Option<ComplexLit>,
    /// Input amplitude of |1⟩, or `random`.
    #[arg(long, value_parser = ComplexLit::parse_flag, allow_hyphen_values = true)]
    pub b: Option<ComplexLit>,
}

impl CommonArgs {
    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let flags = ConfigFile {
            a: self.a.clone(),
            b: self.b.clone(),
            alpha: self.alpha.clone(),
            beta: self.beta.clone(),
            gamma: self.gamma.clone(),
            eta: self.eta.clone(),
            rho: self.rho,
            seed: self.seed,
            trials: self.trials,
            max_tries: self.max_tries,
            protocol: self.protocol.map(Into::into),
            format: self.format,
            out: self.out.clone(),
        };
        RunConfig::resolve(base.overlay(flags))
    }
}

/// Text to emit plus the error to report after emitting it, if any.
pub struct CommandOutput {
    pub text: String,
    pub error: Option<CliError>,
}

fn dispatch(cli: &Cli) -> Result<(RunConfig, CommandOutput), CliError> {
    match &cli.command {
        Command::VerifyTables { common, corrupt_cell } => {
            let cfg = common.resolve()?;
            let corrupt = corrupt_cell.as_deref().map(CorruptCell::parse).transpose()?;
            let out = cmd_verify_tables(&cfg, corrupt)?;
            Ok((cfg, out))
        }
        Command::Run { common } => {
            let cfg = common.resolve()?;
            let out = cmd_run(&cfg)?;
            Ok((cfg, out))
        }
        Command::Repeat { common } => {
            let cfg = common.resolve()?;
            let out = cmd_repeat(&cfg)?;
            Ok((cfg, out))
        }
        Command::Fig2 {
            common,
            p_values,
            n_values,
        } => {
            let cfg = common.resolve()?;
            let out = cmd_fig2(&cfg, p_values.as_deref(), n_values.as_deref())?;
            Ok((cfg, out))
        }
    }
}

fn emit(cfg: &RunConfig, text: &str) -> Result<(), CliError> {
    let io = |e: std::io::Error| CliError::Usage(format!("cannot write output: {e}"));
    match &cfg.out {
        Some(path) => std::fs::write(path, text).map_err(io),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(io)?;
            stdout.flush().map_err(io)
        }
    }
}

/// Parses `args` (including the program name), runs the command and returns
/// the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let result = dispatch(&cli).and_then(|(cfg, out)| {
        emit(&cfg, &out.text)?;
        out.error.map_or(Ok(()), Err)
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
