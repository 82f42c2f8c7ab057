//! One function per command. Each writes its result files and reports how
//! many invariant violations it found.

use std::path::Path;

use crate::config::Config;
use crate::error::{CliError, CliResult};
use crate::output::Output;

mod approx;
mod lfun;
mod univ;

pub const COMMANDS: &[&str] = &[
    "primes", "phi", "lpoly", "rhsweep", "hybrid", "peak", "mvg", "mvh", "mvtail", "counting",
    "fit", "sieve", "search", "guided", "splitgb",
];

pub struct Ctx<'a> {
    pub cfg: &'a Config,
    /// directory of the config file, for relative paths inside it
    pub base: &'a Path,
    pub out: &'a mut Output,
}

#[derive(Debug, Default)]
pub struct Outcome {
    pub violations: usize,
    pub summary: String,
}

impl Outcome {
    pub fn new(violations: usize, summary: impl Into<String>) -> Self {
        Outcome {
            violations,
            summary: summary.into(),
        }
    }
}

pub fn dispatch(command: &str, ctx: &mut Ctx<'_>) -> CliResult<Outcome> {
    match command {
        "primes" => lfun::primes(ctx),
        "phi" => lfun::phi(ctx),
        "lpoly" => lfun::lpoly(ctx),
        "rhsweep" => lfun::rhsweep(ctx),
        "hybrid" => lfun::hybrid(ctx),
        "peak" => approx::peak(ctx),
        "mvg" => approx::mean_value(ctx, false),
        "mvh" => approx::mean_value(ctx, true),
        "mvtail" => approx::mvtail(ctx),
        "counting" => approx::counting(ctx),
        "fit" => approx::fit(ctx),
        "sieve" => univ::sieve(ctx),
        "search" => univ::search(ctx),
        "guided" => univ::guided(ctx),
        "splitgb" => univ::splitgb(ctx),
        other => Err(CliError::Config(format!(
            "unknown command {other:?}; expected one of {}",
            COMMANDS.join(", ")
        ))),
    }
}
