//! Batch experiment runner: reads a config file, runs one command on a
//! dedicated worker pool and writes deterministic result files plus a
//! separate `meta.json` holding timing and host details.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod setup;

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::json;

use commands::{dispatch, Ctx};
use config::Config;
use error::{CliError, CliResult, EXIT_VIOLATION};
use output::Output;

pub use commands::COMMANDS;

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub command: String,
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub strict: bool,
}

pub fn load_config(path: &Path, strict: bool) -> CliResult<Config> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let cfg = Config::parse(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    let unknown = cfg.unknown_keys();
    if !unknown.is_empty() {
        let lines: Vec<String> = unknown.iter().map(|e| format!("{}: {e}", path.display())).collect();
        if strict {
            return Err(CliError::Config(lines.join("\n")));
        }
        for l in lines {
            eprintln!("warning: {l} (ignored)");
        }
    }
    Ok(cfg)
}

/// Runs a command and returns the process exit status.
pub fn run(opts: &RunOptions) -> i32 {
    match run_inner(opts) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run_inner(opts: &RunOptions) -> CliResult<i32> {
    let cfg = load_config(&opts.config, opts.strict)?;
    let dir = match (&opts.out, cfg.get::<String>("run", "out")?) {
        (Some(d), _) => d.clone(),
        (None, Some(d)) => PathBuf::from(d),
        (None, None) => PathBuf::from("out"),
    };
    let workers = cfg.get_or::<usize>("run", "workers", 0)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CliError::Config(format!("[run] workers = {workers}: {e}")))?;
    let base = opts
        .config
        .parent()
        .map(Path::to_path_buf)
        .unwrap_or_default();
    let mut out = Output::new(&dir)?;
    let start = Instant::now();
    let outcome = {
        let mut ctx = Ctx {
            cfg: &cfg,
            base: &base,
            out: &mut out,
        };
        pool.install(|| dispatch(&opts.command, &mut ctx))?
    };
    let elapsed = start.elapsed().as_secs_f64();
    let files = out.written().to_vec();
    out.json(
        "meta",
        &json!({
            "command": opts.command,
            "config": opts.config.display().to_string(),
            "elapsed_seconds": elapsed,
            "files": files,
            "summary": outcome.summary,
            "version": env!("CARGO_PKG_VERSION"),
            "violations": outcome.violations,
            "workers": pool.current_num_threads(),
        }),
    )?;
    println!("{}: {}", opts.command, outcome.summary);
    if outcome.violations > 0 {
        eprintln!(
            "{}: {} invariant violation(s); see {}",
            opts.command,
            outcome.violations,
            dir.display()
        );
        return Ok(EXIT_VIOLATION);
    }
    Ok(0)
}
