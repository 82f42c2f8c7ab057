use std::path::PathBuf;

use clap::builder::PossibleValuesParser;
use clap::{ArgAction, Parser};
use ffuniv_cli::{run, RunOptions, COMMANDS};

/// Dirichlet L-functions over F_q[x]: identity checks and universality
/// experiments.
///
/// Exit status: 0 ok, 1 invariant violation, 2 config or usage error,
/// 3 runtime or capacity error.
#[derive(Parser, Debug)]
#[command(name = "ffuniv", version)]
struct Args {
    #[arg(value_parser = PossibleValuesParser::new(COMMANDS))]
    command: String,

    /// key = value file with [section] headers
    #[arg(long, value_name = "FILE")]
    config: PathBuf,

    /// Output directory; overrides [run] out
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Reject unknown config keys
    #[arg(long, value_name = "BOOL", default_value_t = true, action = ArgAction::Set)]
    strict: bool,
}

fn main() {
    let args = Args::parse();
    let code = run(&RunOptions {
        command: args.command,
        config: args.config,
        out: args.out,
        strict: args.strict,
    });
    std::process::exit(code);
}
