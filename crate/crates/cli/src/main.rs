//! `ggism` command-line tool.

mod commands;
mod error;
mod options;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::CliError;

#[derive(Debug, Parser)]
#[command(name = "ggism", version, about = "Fair stable marriages under a generalized Gini index")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Man-optimal stable matching.
    GsMan,
    /// Woman-optimal stable matching.
    GsWoman,
    /// Exhaustive search over all stable matchings.
    Brute,
    /// LP relaxation and rounding (GGI only, at most twice the optimum).
    Approx,
    /// Exact enumeration of the K worst dissatisfactions (GGI only).
    Xp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Utilitarian,
    Egalitarian,
    SexEqual,
    Balanced,
    Ggi,
}

/// Options shared by the commands that evaluate matchings.
#[derive(Debug, clap::Args)]
pub struct ScoreArgs {
    /// Aggregation of the disutility vector.
    #[arg(long, value_enum, default_value = "ggi")]
    criterion: CriterionArg,
    /// GGI weights: `gini`, `head:K` or `file:PATH` (one value per line).
    #[arg(long, default_value = "gini")]
    weights: String,
    /// Disutility of ranks: `identity`, `squared` or `file:PATH` (one value per rank).
    #[arg(long, default_value = "identity")]
    disutility: String,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute a stable matching with the chosen method.
    Solve {
        instance: PathBuf,
        #[arg(long, value_enum, default_value = "xp")]
        method: Method,
        #[command(flatten)]
        score: ScoreArgs,
        /// Solve the LP in exact rational arithmetic (approx only).
        #[arg(long)]
        exact: bool,
        /// Write the LP in CPLEX LP format to this file (approx only).
        #[arg(long, value_name = "PATH")]
        lp_dump: Option<PathBuf>,
        /// Write the enumerated K-prefixes as JSON to this file (xp only).
        #[arg(long, value_name = "PATH")]
        dump_topk: Option<PathBuf>,
        /// Worker threads for the xp enumeration.
        #[arg(long, env = "GGISM_THREADS")]
        threads: Option<usize>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// List every stable matching in canonical closed-set order.
    Enumerate {
        instance: PathBuf,
        /// Disutility of ranks: `identity`, `squared` or `file:PATH`.
        #[arg(long, default_value = "identity")]
        disutility: String,
        /// Also report the GGI under these weights.
        #[arg(long)]
        weights: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Show the rotation poset.
    Rotations {
        instance: PathBuf,
        /// Print Graphviz DOT instead of JSON.
        #[arg(long)]
        dot: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Build the stable marriage instance of a Min 2-SAT formula (DIMACS input).
    #[command(name = "reduce-2sat")]
    Reduce2Sat {
        formula: PathBuf,
        /// Instance file to write; companion files get `.json`, `.dfun` and
        /// `.weights` appended.
        #[arg(long, short, value_name = "PATH")]
        output: PathBuf,
    },
    /// Check stability of a matching and evaluate it.
    Check {
        instance: PathBuf,
        /// Matching as JSON with a `pairs` array (the output of `solve` works).
        matching: PathBuf,
        #[command(flatten)]
        score: ScoreArgs,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Generate a random instance.
    Gen {
        /// Agents per side.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write here instead of standard output.
        #[arg(long, short, value_name = "PATH")]
        output: Option<PathBuf>,
        /// Also write a random increasing disutility table.
        #[arg(long, value_name = "PATH")]
        disutility_out: Option<PathBuf>,
        /// Also write random nonincreasing weights.
        #[arg(long, value_name = "PATH")]
        weights_out: Option<PathBuf>,
        /// Emit the JSON form of the instance.
        #[arg(long)]
        json: bool,
    },
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::GsMan => "gs-man",
            Method::GsWoman => "gs-woman",
            Method::Brute => "brute",
            Method::Approx => "approx",
            Method::Xp => "xp",
        }
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Solve {
            instance,
            method,
            score,
            exact,
            lp_dump,
            dump_topk,
            threads,
            format,
        } => commands::solve(commands::SolveRequest {
            instance,
            method,
            score,
            exact,
            lp_dump,
            dump_topk,
            threads,
            format,
        }),
        Command::Enumerate {
            instance,
            disutility,
            weights,
            format,
        } => commands::enumerate(&instance, &disutility, weights.as_deref(), format),
        Command::Rotations { instance, dot, format } => commands::rotations(&instance, dot, format),
        Command::Reduce2Sat { formula, output } => commands::reduce_2sat(&formula, &output),
        Command::Check {
            instance,
            matching,
            score,
            format,
        } => commands::check(&instance, &matching, &score, format),
        Command::Gen {
            n,
            seed,
            output,
            disutility_out,
            weights_out,
            json,
        } => commands::gen(n, seed, output.as_deref(), disutility_out.as_deref(), weights_out.as_deref(), json),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.render().to_string();
            let text = text.trim_end();
            return report(CliError::Usage(text.strip_prefix("error: ").unwrap_or(text).to_string()));
        }
    };
    match run(cli) {
        Ok(mut out) => {
            if !out.ends_with('\n') {
                out.push('\n');
            }
            // A closed pipe (e.g. `| head`) is not an error worth reporting.
            let _ = std::io::stdout().lock().write_all(out.as_bytes());
            ExitCode::SUCCESS
        }
        Err(e) => report(e),
    }
}

fn report(e: CliError) -> ExitCode {
    eprintln!("{}", e.to_json());
    ExitCode::from(e.exit_code())
}
