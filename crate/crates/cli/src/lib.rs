//! The `hdv` command line. [`run`] parses arguments, executes one
//! subcommand and returns the process exit status:
//!
//! - 0 on success,
//! - 1 for usage errors,
//! - 2 for data errors (unreadable or malformed files, incompatible inputs),
//! - 3 when `--strict` is set and a result is not confident.

pub mod args;
mod commands;
pub mod report;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;

use clap::parser::ValueSource;
use clap::{ArgMatches, CommandFactory, FromArgMatches};
use hdv_core::HdvError;

use crate::args::{Cli, GlobalArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;
pub const EXIT_NOT_CONFIDENT: i32 = 3;

/// An argument problem found after parsing.
#[derive(Debug)]
pub struct Usage(pub String);

impl fmt::Display for Usage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Usage {}

fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<Usage>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<HdvError>() {
        Some(HdvError::PrefixLength { .. } | HdvError::InvalidOrder(_)) => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

fn source_label(matches: &ArgMatches, id: &str) -> &'static str {
    match matches.value_source(id) {
        Some(ValueSource::CommandLine) => "flag",
        Some(ValueSource::EnvVariable) => "env",
        _ => "default",
    }
}

fn echo_config(g: &GlobalArgs, matches: &ArgMatches) {
    // Globals are recorded on the innermost subcommand that saw them.
    let mut leaf = matches;
    while let Some((_, sub)) = leaf.subcommand() {
        leaf = sub;
    }
    let tau = match g.tau {
        Some(t) => format!("{t:.6}"),
        None => "4/sqrt(D)".into(),
    };
    eprintln!(
        "config: dimension={} ({}) seed={:#x} ({}) tau={} ({}) json={} strict={}",
        g.dimension,
        source_label(leaf, "dimension"),
        g.seed.0,
        source_label(leaf, "seed"),
        tau,
        source_label(leaf, "tau"),
        g.json,
        g.strict
    );
}

fn usage_for(matches: &ArgMatches) -> String {
    let mut cmd = Cli::command();
    cmd.build();
    let mut m = matches;
    while let Some((name, sub)) = m.subcommand() {
        match cmd.find_subcommand(name) {
            Some(c) => cmd = c.clone(),
            None => break,
        }
        m = sub;
    }
    cmd.render_usage().to_string()
}

/// Runs the CLI on `args` (including the program name) and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match Cli::command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return EXIT_USAGE;
        }
    };
    let level = if cli.global.verbose { "info" } else { "warn" };
    let _ = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .try_init();
    if cli.global.verbose {
        echo_config(&cli.global, &matches);
    }

    match commands::dispatch(&cli) {
        Ok(outcome) => {
            let body = if cli.global.json && !outcome.json.is_null() {
                serde_json::to_string_pretty(&outcome.json).map(|s| s + "\n")
            } else {
                Ok(outcome.text)
            };
            let written = match body {
                Ok(body) => std::io::stdout().lock().write_all(body.as_bytes()),
                Err(e) => Err(e.into()),
            };
            match written {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => {}
                Err(e) => {
                    eprintln!("error: writing output: {e}");
                    return EXIT_DATA;
                }
                Ok(()) => {}
            }
            if cli.global.strict && !outcome.confident {
                log::warn!("result is below the confidence threshold");
                EXIT_NOT_CONFIDENT
            } else {
                EXIT_OK
            }
        }
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = exit_code(&err);
            if code == EXIT_USAGE {
                eprintln!("\n{}\n\nFor more information, try '--help'.", usage_for(&matches));
            }
            code
        }
    }
}
