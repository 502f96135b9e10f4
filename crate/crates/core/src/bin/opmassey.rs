//! Command-line driver: validate / homology / massey / examples over JSON
//! problem documents.

use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use opmassey::commands::{
    cmd_examples, cmd_homology, cmd_massey, cmd_validate, CommandOptions, ScopeFlag, EXIT_USAGE,
};
use opmassey::document::ProblemDocument;
use opmassey::report::Report;

#[derive(Parser)]
#[command(
    name = "opmassey",
    about = "Exact-arithmetic Massey products in the homology of DG-algebras over operad presentations",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scope {
    /// Check expensive relations only on the tuples the document declares.
    Paper,
    /// Check every relation on all basis tuples.
    Full,
}

#[derive(clap::Args)]
struct RunArgs {
    /// Problem document (JSON); stdin when omitted.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Default seed for random-mode queries without their own seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Relation-check scope.
    #[arg(long, value_enum, default_value = "paper")]
    scope: Scope,
    /// Include chosen representatives and bounding chains in query reports.
    #[arg(long)]
    verbose: bool,
    /// Report format.
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Run the structural validators (d^2, derivation, symmetry, relations).
    Validate(RunArgs),
    /// Validators plus the Betti table with named representative classes.
    Homology(RunArgs),
    /// Validators, homology, and every Massey query in the document.
    Massey(RunArgs),
    /// Write the canned example documents to disk.
    Examples {
        /// Directory to write into.
        #[arg(long, default_value = ".")]
        output: PathBuf,
    },
}

fn read_document(args: &RunArgs) -> Result<ProblemDocument, String> {
    let text = match &args.input {
        Some(path) => std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read {}: {e}", path.display()))?,
        None => {
            let mut buf = String::new();
            std::io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| format!("cannot read stdin: {e}"))?;
            buf
        }
    };
    ProblemDocument::from_json(&text).map_err(|e| e.to_string())
}

fn emit(report: &Report, args: &RunArgs) -> Result<(), String> {
    let rendered = match args.format {
        Format::Json => report.to_json(),
        Format::Text => report.to_text(),
    };
    match &args.output {
        Some(path) => std::fs::write(path, rendered)
            .map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn run(
    args: &RunArgs,
    f: impl Fn(&ProblemDocument, &CommandOptions) -> opmassey::Result<(Report, i32)>,
) -> i32 {
    let doc = match read_document(args) {
        Ok(doc) => doc,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_USAGE;
        }
    };
    let opts = CommandOptions {
        seed: args.seed,
        scope: match args.scope {
            Scope::Paper => ScopeFlag::Paper,
            Scope::Full => ScopeFlag::Full,
        },
        verbose: args.verbose,
    };
    match f(&doc, &opts) {
        Ok((report, code)) => {
            if let Err(e) = emit(&report, args) {
                eprintln!("error: {e}");
                return EXIT_USAGE;
            }
            code
        }
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                opmassey::Error::Invalid(_) => opmassey::commands::EXIT_VALIDATION,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Let clap print its message (help/version go to stdout and
            // parse errors to stderr), but keep our exit-code contract.
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_USAGE as u8)
            };
        }
    };
    let code = match &cli.command {
        Command::Validate(args) => run(args, cmd_validate),
        Command::Homology(args) => run(args, cmd_homology),
        Command::Massey(args) => run(args, cmd_massey),
        Command::Examples { output } => {
            if let Err(e) = std::fs::create_dir_all(output) {
                eprintln!("error: cannot create {}: {e}", output.display());
                return ExitCode::from(EXIT_USAGE as u8);
            }
            let mut code = 0;
            for (name, json) in cmd_examples() {
                let path = output.join(&name);
                match std::fs::write(&path, json) {
                    Ok(()) => println!("wrote {}", path.display()),
                    Err(e) => {
                        eprintln!("error: cannot write {}: {e}", path.display());
                        code = EXIT_USAGE;
                    }
                }
            }
            code
        }
    };
    ExitCode::from(code as u8)
}
