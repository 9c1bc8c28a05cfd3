//! Command-line front end for the semiclassical laboratory: identity
//! verification, `h`-sweeps, kernel dumps and endpoint dynamics.
//!
//! Every command reads a [`RunConfig`] (JSON), optionally overridden by
//! flags, and writes CSV or JSON either to `--out <dir>` or to stdout.
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or
//! configuration error.

pub mod commands;
pub mod config;
pub mod error;
pub mod parse;
pub mod state;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use commands::{cmd_evolve, cmd_kernels, cmd_sweep, cmd_verify};
pub use config::RunConfig;
pub use error::{CliError, CliResult};
pub use parse::{parse_expr, ParseError};

use commands::{evolve, kernels, sweep, EvolveOutput};

#[derive(Debug, Parser)]
#[command(name = "semiclab", version, about = "h-dependent operator algebra laboratory")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Subcommand, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    /// Run the symbolic, numeric and state checks.
    Verify,
    /// Means of Q~, P~ and the observable over the configured h values.
    Sweep,
    /// Dump the r-blocks of the realized observable at one h.
    Kernels,
    /// Liouville (h = 0) or von Neumann (h = h_o) evolution.
    Evolve,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct Options {
    /// JSON run configuration; defaults apply when absent.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for the randomized checks, replacing `seed`
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Single h value, replacing `h_values`.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub h: Option<f64>,
    /// Observable expression, replacing `observable`.
    #[arg(long, global = true)]
    pub expr: Option<String>,
    /// Output format; JSON for `verify`, CSV otherwise.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
}

impl Options {
    /// Loads the config and applies flag overrides.
    pub fn config(&self) -> CliResult<RunConfig> {
        let mut cfg = match &self.config {
            Some(path) => RunConfig::load(path)?,
            None => RunConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        if let Some(h) = self.h {
            cfg.h_values = vec![h];
        }
        if let Some(expr) = &self.expr {
            cfg.observable = expr.clone();
        }
        if let Some(out) = &self.out {
            cfg.output.dir = Some(out.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Where rendered outputs go.
struct Sink {
    dir: Option<PathBuf>,
}

impl Sink {
    fn new(dir: Option<PathBuf>) -> CliResult<Self> {
        if let Some(d) = &dir {
            std::fs::create_dir_all(d)?;
        }
        Ok(Sink { dir })
    }

    fn emit(&self, name: &str, text: &str) -> CliResult<()> {
        match &self.dir {
            Some(d) => std::fs::write(d.join(name), text)?,
            None => match std::io::stdout().write_all(text.as_bytes()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                r => r?,
            },
        }
        Ok(())
    }

    fn require_dir(&self, what: &str) -> CliResult<&Path> {
        self.dir
            .as_deref()
            .ok_or_else(|| CliError::Config(format!("{} writes several files; pass --out <dir>", what)))
    }
}

fn execute(command: Command, opts: &Options) -> CliResult<bool> {
    let cfg = opts.config()?;
    let sink = Sink::new(cfg.output.dir.clone())?;
    let format = opts.format;
    match command {
        Command::Verify => {
            let report = cmd_verify(&cfg)?;
            match format.unwrap_or(Format::Json) {
                Format::Json => sink.emit("verify.json", &report.to_json())?,
                Format::Csv => sink.emit("verify.csv", &report.to_csv()?)?,
            }
            let failed = report.checks.iter().filter(|c| c.status == commands::Status::Fail).count();
            eprintln!("verify: {} checks, {} failed", report.checks.len(), failed);
            Ok(report.passed())
        }
        Command::Sweep => {
            let rows = cmd_sweep(&cfg)?;
            match format.unwrap_or(Format::Csv) {
                Format::Csv => sink.emit("sweep.csv", &sweep::sweep_csv(&rows)?)?,
                Format::Json => sink.emit("sweep.json", &sweep::sweep_json(&rows))?,
            }
            Ok(true)
        }
        Command::Kernels => {
            let ks = cmd_kernels(&cfg)?;
            match format.unwrap_or(Format::Csv) {
                Format::Csv => {
                    kernels::write_kernels_csv(&ks, sink.require_dir("kernels")?)?;
                }
                Format::Json => sink.emit("kernels.json", &kernels::kernels_json(&ks))?,
            }
            Ok(true)
        }
        Command::Evolve => {
            let json = format == Some(Format::Json);
            match cmd_evolve(&cfg)? {
                EvolveOutput::Classical(t) | EvolveOutput::Quantum(t) => {
                    if json {
                        sink.emit("trajectory.json", &evolve::trajectory_json(&t))?;
                    } else {
                        sink.emit("trajectory.csv", &evolve::trajectory_csv(&t)?)?;
                    }
                }
                EvolveOutput::Comparison(c) => {
                    for w in &c.warnings {
                        eprintln!("warning: {}", w);
                    }
                    if json {
                        sink.emit("comparison.json", &evolve::comparison_metadata_json(&c))?;
                    } else {
                        sink.emit("comparison.csv", &evolve::comparison_csv(&c)?)?;
                        if sink.dir.is_some() {
                            sink.emit("comparison.json", &evolve::comparison_metadata_json(&c))?;
                        }
                    }
                }
            }
            Ok(true)
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match execute(cli.command, &cli.opts) {
        Ok(true) => 0,
        Ok(false) => 1,
        Err(e) => {
            eprintln!("error: {}", e);
            2
        }
    }
}
