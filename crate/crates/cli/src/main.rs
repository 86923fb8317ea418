//! `catt2hott`: check CaTT files and translate their entries into closed
//! J-terms, kernel-verified.
//!
//! Exit status: 0 on success, 1 for errors in the input or the invocation,
//! 2 when the translation breaks one of its own invariants.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use catt_hott::catt::Environment;
use catt_hott::emit::{emit, EmitFormat};
use catt_hott::hott::{Kernel, DEFAULT_MAX_STEPS};
use catt_hott::surface::load_into;
use catt_hott::translate::{TranslateError, Translator};
use clap::{Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "catt2hott", version, about = "Check CaTT files and translate them into homotopy type theory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and check every declaration of a file.
    Check {
        file: PathBuf,
        /// Report every rejected declaration instead of stopping at the first.
        #[arg(long)]
        keep_going: bool,
    },
    /// Translate the entries of a checked file.
    Translate {
        file: PathBuf,
        /// Entries to translate, in this order (default: all, in file order).
        #[arg(long, num_args = 1..)]
        names: Option<Vec<String>>,
        #[arg(long, value_enum, default_value_t = Format::Internal)]
        format: Format,
        /// Write here instead of standard output.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print node count and printed size per entry to standard error.
        #[arg(long)]
        stats: bool,
        /// Reduction budget for conversion checking and normalization.
        #[arg(long, env = "CATT2HOTT_MAX_STEPS", default_value_t = DEFAULT_MAX_STEPS)]
        max_steps: u64,
        #[arg(long, hide = true)]
        no_verify: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Internal,
    Vernacular,
}

impl From<Format> for EmitFormat {
    fn from(f: Format) -> EmitFormat {
        match f {
            Format::Internal => EmitFormat::Internal,
            Format::Vernacular => EmitFormat::Vernacular,
        }
    }
}

const USER_ERROR: u8 = 1;
const INTERNAL_ERROR: u8 = 2;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let status = match cli.command {
        Command::Check { file, keep_going } => check(&file, keep_going).map(|env| {
            println!("{}: {} declaration(s) checked", file.display(), env.len());
        }),
        Command::Translate { file, names, format, out, stats, max_steps, no_verify } => {
            translate(&file, names, format.into(), out.as_deref(), stats, max_steps, no_verify)
        }
    };
    match status {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => ExitCode::from(code),
    }
}

fn check(file: &Path, keep_going: bool) -> Result<Environment, u8> {
    let text = fs::read_to_string(file).map_err(|e| {
        eprintln!("{}: {e}", file.display());
        USER_ERROR
    })?;
    let mut env = Environment::new();
    match load_into(&mut env, &text, keep_going) {
        Ok(_) => Ok(env),
        Err(errors) => {
            for e in &errors {
                eprintln!("{}:{e} [{}]", file.display(), e.rule());
            }
            Err(USER_ERROR)
        }
    }
}

fn translate(
    file: &Path,
    names: Option<Vec<String>>,
    format: EmitFormat,
    out: Option<&Path>,
    stats: bool,
    max_steps: u64,
    no_verify: bool,
) -> Result<(), u8> {
    let env = check(file, false)?;
    let names: Vec<String> = names.unwrap_or_else(|| env.names().map(str::to_owned).collect());
    if let Some(missing) = names.iter().find(|n| env.lookup(n).is_none()) {
        eprintln!("{}: {}", file.display(), TranslateError::UnknownName(missing.clone()));
        return Err(USER_ERROR);
    }
    let mut tr = Translator::new(&env).with_kernel(Kernel::new(max_steps));
    if no_verify {
        tr = tr.without_verification();
    }
    let mut entries = Vec::with_capacity(names.len());
    let mut code = 0;
    for (name, result) in tr.translate_all(&names) {
        match result {
            Ok(r) => entries.push((name, r)),
            Err(e) => {
                eprintln!("{}: `{name}`: {e}", file.display());
                code = code.max(if e.is_internal() { INTERNAL_ERROR } else { USER_ERROR });
            }
        }
    }
    if code != 0 {
        return Err(code);
    }
    if stats {
        for (name, r) in &entries {
            eprintln!("{name}\tnode_count={}\tprinted_size={}", r.stats.node_count, r.stats.printed_size);
        }
    }
    let text = emit(&entries, format);
    match out {
        Some(path) => fs::write(path, text).map_err(|e| {
            eprintln!("{}: {e}", path.display());
            USER_ERROR
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
