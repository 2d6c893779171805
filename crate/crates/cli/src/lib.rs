//! Text format and command-line driver for `opkit`.

pub mod ast;
pub mod commands;
pub mod diag;
pub mod elaborate;
pub mod emit;
pub mod syntax;

use clap::Parser;
use commands::{Cli, Command, Failure};
use std::ffi::OsString;
use std::io::Write;

pub const EXIT_OK: i32 = 0;
pub const EXIT_LAW: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

fn out_path(cmd: &Command) -> Option<&std::path::Path> {
    let c = match cmd {
        Command::Check(c) => c,
        Command::Compose { common, .. }
        | Command::Free { common, .. }
        | Command::Saturate { common, .. }
        | Command::Tensor { common, .. }
        | Command::Hom { common, .. }
        | Command::Adjunction { common, .. }
        | Command::Algebras { common, .. }
        | Command::End { common, .. }
        | Command::Bar { common, .. }
        | Command::Hochschild { common, .. }
        | Command::Equiv { common, .. }
        | Command::Nerve { common, .. }
        | Command::Export { common, .. } => common,
    };
    c.out.as_deref()
}

/// Runs the command line, writing the artifact to `out` (or the `--out`
/// file) and diagnostics to `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match commands::execute(&cli.command) {
        Ok(o) => {
            for d in &o.notes {
                let _ = writeln!(err, "{d}");
            }
            let text = match &o.artifact {
                serde_json::Value::String(s) => s.clone(),
                v => opkit::json::to_string(v),
            };
            let written = match out_path(&cli.command) {
                Some(p) => std::fs::write(p, text),
                None => out.write_all(text.as_bytes()),
            };
            if let Err(e) = written {
                let _ = writeln!(err, "error: {e}");
                return EXIT_USAGE;
            }
            if o.ok {
                EXIT_OK
            } else {
                EXIT_LAW
            }
        }
        Err(Failure::Laws(ds)) => {
            for d in ds {
                let _ = writeln!(err, "{d}");
            }
            EXIT_LAW
        }
        Err(Failure::Documents(ds)) => {
            for d in ds {
                let _ = writeln!(err, "{d}");
            }
            EXIT_USAGE
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Core(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}
