//! `affect-sim`: run, validate and pretty-print scenario logs.
//!
//! Exit codes: 0 success, 1 validation error, 2 I/O error.

mod pretty;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use affect_core::config::{ConfigError, EngineConfig};
use affect_core::harness::{run, RunError, RunOptions};
use affect_core::log::RunLog;
use affect_core::scenario::ScenarioError;
use affect_core::Scenario;
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "affect-sim", version, about = "Deterministic affect engine scenario runner")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a scenario and write the run log as JSON lines.
    Run {
        scenario: PathBuf,
        /// Overrides the scenario's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Simulated run length; defaults to the last entry plus 10 s.
        #[arg(long = "duration-ms")]
        duration_ms: Option<u64>,
        #[arg(long)]
        compression: Option<f64>,
        /// JSON config overlay applied after the scenario's own overrides.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check a scenario file without running it.
    Validate { scenario: PathBuf },
    /// Pretty-print a run log.
    Replay { log: PathBuf },
}

enum Failure {
    Validation(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Io(_) => 2,
        }
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        if e.is_validation() {
            Failure::Validation(e.to_string())
        } else {
            Failure::Io(e.to_string())
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        match e {
            ConfigError::Io { .. } => Failure::Io(e.to_string()),
            _ => Failure::Validation(e.to_string()),
        }
    }
}

impl From<RunError> for Failure {
    fn from(e: RunError) -> Self {
        match e {
            RunError::Config(c) => c.into(),
            other => Failure::Validation(other.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("reading {}: {e}", path.display())))
}

fn load_overlay(path: &Path) -> Result<serde_json::Map<String, serde_json::Value>, Failure> {
    let text = read(path)?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    let serde_json::Value::Object(map) = value else {
        return Err(Failure::Validation(format!("{}: expected a JSON object", path.display())));
    };
    // Reject bad keys up front so the message names the file.
    EngineConfig::default()
        .overlay(&map)
        .map_err(|e| Failure::Validation(format!("{}: {e}", path.display())))?;
    Ok(map)
}

fn execute(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Run { scenario, seed, duration_ms, compression, config, out } => {
            let s = Scenario::load(&scenario)?;
            let config = config.as_deref().map(load_overlay).transpose()?;
            let log = run(&s, &RunOptions { duration_ms, compression, seed, config })?;
            let text = log.to_jsonl();
            match out {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| Failure::Io(format!("writing {}: {e}", path.display())))?,
                None => std::io::stdout()
                    .lock()
                    .write_all(text.as_bytes())
                    .map_err(|e| Failure::Io(format!("writing stdout: {e}")))?,
            }
        }
        Command::Validate { scenario } => {
            let s = Scenario::load(&scenario)?;
            EngineConfig::default().overlay(&s.config)?.lexicon()?;
            println!("{}: ok, {} entries, seed {}", scenario.display(), s.entries.len(), s.seed);
        }
        Command::Replay { log } => {
            let text = read(&log)?;
            let parsed = RunLog::parse_jsonl(&text).map_err(|e| Failure::Validation(e.to_string()))?;
            let mut stdout = std::io::stdout().lock();
            for r in &parsed.records {
                writeln!(stdout, "{}", pretty::line(r)).map_err(|e| Failure::Io(format!("writing stdout: {e}")))?;
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (Failure::Validation(msg) | Failure::Io(msg)) = &f;
            eprintln!("error: {msg}");
            ExitCode::from(f.code())
        }
    }
}
