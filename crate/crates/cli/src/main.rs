//! `ostrowski`: encode, add and decide in Ostrowski numeration systems.
//!
//! Exit codes: 0 on success (and for `decide`/`run`/`validate`, a positive
//! answer), 1 for a negative answer or a failed self test, 2 for malformed
//! input, 3 when automata are requested for a continued fraction that is
//! not eventually periodic.

mod commands;
mod selftest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ostrowski::recognizers::Relation;
use ostrowski::{ContinuedFraction, Nat};

#[derive(Debug, Parser)]
#[command(name = "ostrowski", version, about = "Ostrowski numeration: encoding, addition and automata")]
struct Cli {
    /// Print `{"command": ..., "result": ...}` instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct CfArg {
    /// Continued fraction, e.g. `1;(1)` or `0;1,(1,2)`.
    #[arg(long, allow_hyphen_values = true)]
    cf: ContinuedFraction,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Continued fraction utilities.
    Cf {
        #[command(subcommand)]
        command: CfCommand,
    },
    /// Representation of a natural number, most significant digit first.
    Encode {
        #[command(flatten)]
        cf: CfArg,
        value: Nat,
    },
    /// Value of a digit word given most significant digit first.
    Decode {
        #[command(flatten)]
        cf: CfArg,
        #[arg(required = true, num_args = 1..)]
        digits: Vec<String>,
    },
    /// Checks the representation conditions; exit 1 if they fail.
    Validate {
        #[command(flatten)]
        cf: CfArg,
        #[arg(required = true, num_args = 1..)]
        digits: Vec<String>,
    },
    /// Adds two numbers with the three-pass algorithm.
    Add {
        #[command(flatten)]
        cf: CfArg,
        left: Nat,
        right: Nat,
        /// Print every window rewrite before the result.
        #[arg(long)]
        trace: bool,
    },
    /// Builds a recognizing automaton and prints it in the text format.
    Build {
        #[command(flatten)]
        cf: CfArg,
        #[arg(long, value_parser = parse_relation)]
        relation: Relation,
        /// Write to a file instead of standard output.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Runs an automaton file on a word; exit 1 if it rejects.
    Run {
        #[arg(long)]
        automaton: PathBuf,
        /// One digit word per track, most significant digit first; shorter
        /// tracks are padded with leading zeros.
        #[arg(long = "word", required = true)]
        words: Vec<String>,
    },
    /// Decides a first-order sentence; exit 0 if true, 1 if false.
    Decide {
        #[command(flatten)]
        cf: CfArg,
        #[arg(long)]
        formula: String,
        /// Also print values for the leading existential variables.
        #[arg(long)]
        witness: bool,
    },
    /// Lists the solutions of a formula up to a bound.
    Enumerate {
        #[command(flatten)]
        cf: CfArg,
        #[arg(long)]
        formula: String,
        #[arg(long, default_value = "100")]
        bound: Nat,
    },
    /// Runs the differential checks; exit 1 on any failure.
    Selftest {
        /// Largest summand checked against arithmetic.
        #[arg(long, default_value_t = 100)]
        max: u64,
        /// Restrict to one continued fraction instead of the built-in list.
        #[arg(long, allow_hyphen_values = true)]
        cf: Option<ContinuedFraction>,
    },
}

#[derive(Debug, Subcommand)]
enum CfCommand {
    /// Partial quotients, automaton parameters and the first denominators.
    Info {
        #[command(flatten)]
        cf: CfArg,
        /// Number of denominators to list.
        #[arg(long, default_value_t = 10)]
        count: usize,
    },
}

fn parse_relation(name: &str) -> Result<Relation, String> {
    Relation::from_name(name).ok_or_else(|| {
        let names: Vec<&str> = Relation::ALL.iter().map(|r| r.name()).collect();
        format!("unknown relation `{name}`; expected one of {}", names.join(", "))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, outcome) = match cli.command {
        Command::Cf { command: CfCommand::Info { cf, count } } => ("cf info", commands::cf_info(&cf.cf, count)),
        Command::Encode { cf, value } => ("encode", commands::encode(&cf.cf, &value)),
        Command::Decode { cf, digits } => ("decode", commands::decode(&cf.cf, &digits)),
        Command::Validate { cf, digits } => ("validate", commands::validate(&cf.cf, &digits)),
        Command::Add { cf, left, right, trace } => ("add", commands::add(&cf.cf, &left, &right, trace)),
        Command::Build { cf, relation, output } => ("build", commands::build(&cf.cf, relation, output.as_deref())),
        Command::Run { automaton, words } => ("run", commands::run(&automaton, &words)),
        Command::Decide { cf, formula, witness } => ("decide", commands::decide(&cf.cf, &formula, witness)),
        Command::Enumerate { cf, formula, bound } => ("enumerate", commands::enumerate(&cf.cf, &formula, &bound)),
        Command::Selftest { max, cf } => ("selftest", selftest::run(max, cf)),
    };
    match outcome {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::json!({ "command": name, "result": report.json }));
            } else if !report.text.is_empty() {
                print!("{}", report.text);
            }
            ExitCode::from(report.code)
        }
        Err(e) => {
            if cli.json {
                println!("{}", serde_json::json!({ "command": name, "error": e.to_string() }));
            }
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
