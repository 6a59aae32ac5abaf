//! The `noisygt` command line.
//!
//! All primary output goes to `--out` (or stdout) as CSV or JSON lines;
//! progress and timing go to stderr only. The exit status is 0 iff every
//! requested row succeeded, 1 if some row or the run failed, 2 on usage
//! errors.

mod args;
mod commands;
mod config;
pub mod experiment;
mod output;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

pub use args::{Alg, BoundsArgs, ChannelArgs, Cli, Command, CompareArgs, DesignArg, Format, SimArgs};
pub use commands::{noiseless_optimal_prefactor, SEED_ENV};
pub use config::ConfigFile;
pub use output::{Meta, RowSink, SCHEMA_VERSION};

use crate::bounds::{Optimizer, OptimizerConfig};
use crate::error::{Error, Result};

/// Resolved global state shared by all commands.
pub(crate) struct Context {
    config: ConfigFile,
    format: Format,
    out: Option<std::path::PathBuf>,
    optimizer: Optimizer,
}

impl Context {
    fn sink(&self, meta: &Meta) -> Result<RowSink> {
        let w: Box<dyn Write> = match &self.out {
            Some(path) => Box::new(BufWriter::new(File::create(path)?)),
            None => Box::new(io::stdout()),
        };
        RowSink::new(w, self.format, meta)
    }
}

/// Run a parsed command line; `Ok(true)` iff every row succeeded.
pub fn run(cli: Cli) -> Result<bool> {
    let config = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let format = config.choice(cli.format, "format")?.unwrap_or(Format::Csv);
    let out = config.value(cli.out, "out")?;
    let threads = config.value(cli.threads, "threads")?.unwrap_or(0);
    let mut opt = OptimizerConfig::default();
    if let Some(d_max) = config.value(cli.d_max, "d-max")? {
        if !(d_max > opt.d_min && d_max.is_finite()) {
            return Err(crate::error::domain("d-max", d_max, format!("({}, inf)", opt.d_min)));
        }
        opt.d_max = d_max;
    }
    let ctx = Context {
        config,
        format,
        out,
        optimizer: Optimizer::new(opt),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Parameter(format!("thread pool: {e}")))?;
    pool.install(|| match cli.command {
        Command::Bounds(a) => commands::cmd_bounds(&ctx, a),
        Command::Capacity(a) => commands::cmd_capacity(&ctx, a),
        Command::Simulate(a) => commands::cmd_simulate(&ctx, a, false),
        Command::Sweep(a) => commands::cmd_simulate(&ctx, a, true),
        Command::Compare(a) => commands::cmd_compare(&ctx, a),
    })
}

/// Parse `args` (including the program name) and run.
pub fn main_from<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
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
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("noisygt: some rows failed");
            ExitCode::from(1)
        }
        Err(e @ (Error::Parameter(_) | Error::Parse { .. })) => {
            eprintln!("noisygt: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("noisygt: {e}");
            ExitCode::from(1)
        }
    }
}
