//! `kappa-weyl` command-line front end.
//!
//! Exit status: 0 on success, 1 when a relation or consistency check fails,
//! 2 on usage and domain errors. Every document is rendered in full before
//! anything is written, so a failing run never emits a partial table.

mod commands;
mod config;
mod render;

use std::io::Write;

use clap::Parser;

pub use config::{Format, RunConfig};

pub const SCHEMA: &str = "kappa-weyl/1";

/// Process exit statuses.
pub mod exit {
    pub const OK: i32 = 0;
    pub const CHECK_FAILED: i32 = 1;
    pub const USAGE: i32 = 2;
}

/// Outcome of a command: the rendered document and whether all checks passed.
pub(crate) struct Output {
    pub text: String,
    pub passed: bool,
}

#[derive(Debug)]
pub(crate) enum Failure {
    Usage(String),
    Check(String),
}

impl From<kappa_weyl::Error> for Failure {
    fn from(e: kappa_weyl::Error) -> Self {
        match e {
            kappa_weyl::Error::Inconsistent(_) => Failure::Check(e.to_string()),
            other => Failure::Usage(other.to_string()),
        }
    }
}

/// Run one invocation. `argv[0]` is the program name.
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match config::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            return if e.use_stderr() {
                let _ = stderr.write_all(rendered.as_bytes());
                exit::USAGE
            } else {
                let _ = stdout.write_all(rendered.as_bytes());
                exit::OK
            };
        }
    };

    let result = RunConfig::from_cli(&cli).and_then(|cfg| {
        let out = commands::dispatch(&cli.command, &cfg)?;
        Ok((cfg, out))
    });
    match result {
        Ok((cfg, out)) => {
            if let Err(e) = emit(&cfg, &out.text, stdout) {
                let _ = writeln!(stderr, "error: {e}");
                return exit::USAGE;
            }
            if out.passed {
                exit::OK
            } else {
                let _ = writeln!(stderr, "error: one or more checks failed");
                exit::CHECK_FAILED
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            exit::USAGE
        }
        Err(Failure::Check(msg)) => {
            let _ = writeln!(stderr, "error: {msg}");
            exit::CHECK_FAILED
        }
    }
}

fn emit(cfg: &RunConfig, text: &str, stdout: &mut dyn Write) -> std::io::Result<()> {
    match &cfg.out {
        None => stdout.write_all(text.as_bytes()),
        Some(path) => {
            let dir = match path.parent() {
                Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
                _ => std::path::PathBuf::from("."),
            };
            let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
            tmp.write_all(text.as_bytes())?;
            tmp.as_file().sync_all()?;
            tmp.persist(path).map_err(|e| e.error)?;
            Ok(())
        }
    }
}
