use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use multiclone::algebra::{Universe, DEFAULT_ARITY_CAP};
use multiclone::compose::{GeneratorSet, DEFAULT_LIMIT};
use multiclone::five_type::ClassifyOptions;
use multiclone::group::{enumerate_boolean_groups, fg_generators};
use multiclone::opfile::{emit_opfile, parse_source};
use multiclone::report::{self, Outcome, EXIT_OK, EXIT_USAGE};

#[derive(Parser)]
#[command(name = "multiclone", version, about = "Closure and classification of multioperations on small finite sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the multiclone generated by a file into one of five types.
    Classify {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ARITY_CAP)]
        cap: usize,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
        /// Neutral element used when reading off a Boolean group.
        #[arg(long, default_value_t = 0)]
        zero: u8,
    },
    /// Print the fragment of the given arity as an operation file.
    Close {
        file: PathBuf,
        #[arg(long)]
        arity: usize,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
    },
    /// Report the classifier predicates for each operation.
    Props { file: PathBuf },
    /// Check the projection-property equivalence for a clone of operations.
    #[command(name = "theorem2")]
    Equivalence {
        file: PathBuf,
        #[arg(long, default_value_t = DEFAULT_ARITY_CAP)]
        cap: usize,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: usize,
    },
    /// Print generators of F_G for the I-th Boolean group on K elements.
    Fg {
        #[arg(long)]
        universe: usize,
        #[arg(long, default_value_t = 0)]
        index: usize,
    },
}

fn load(path: &PathBuf) -> Result<GeneratorSet, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_source(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn run(cli: &Cli) -> Result<Outcome, String> {
    let res = match &cli.command {
        Command::Classify { file, cap, limit, zero } => {
            let opts = ClassifyOptions {
                cap: *cap,
                limit: *limit,
                zero: *zero,
            };
            report::classify_report(&load(file)?, opts)
        }
        Command::Close { file, arity, limit } => report::close_report(&load(file)?, *arity, *limit),
        Command::Props { file } => report::props_report(&load(file)?),
        Command::Equivalence { file, cap, limit } => report::equivalence_report(&load(file)?, *cap, *limit),
        Command::Fg { universe, index } => {
            let u = Universe::new(*universe).map_err(|e| e.to_string())?;
            let groups = enumerate_boolean_groups(u);
            let g = groups
                .get(*index)
                .ok_or_else(|| format!("{} Boolean groups on {universe} elements, index {index} is out of range", groups.len()))?;
            return Ok(Outcome {
                text: emit_opfile(&fg_generators(g)),
                status: EXIT_OK,
                note: None,
            });
        }
    };
    res.map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which would read as "inconclusive"
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let status = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(status as u8);
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(EXIT_USAGE as u8);
        }
    };
    if let Some(note) = &outcome.note {
        eprintln!("{note}");
    }
    let written = match &cli.out {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            print!("{}", outcome.text);
            Ok(())
        }
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return ExitCode::from(EXIT_USAGE as u8);
    }
    ExitCode::from(outcome.status as u8)
}
