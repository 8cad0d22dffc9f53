use std::path::PathBuf;
use std::process::ExitCode;

use affect_core::EngineConfig;
use affect_service::{spawn, ServiceConfig};
use clap::Parser;

#[derive(Parser)]
#[command(name = "affect-serve", version, about = "Serve the live affect engine over WebSocket at /ws")]
struct Args {
    #[arg(long, env = "AFFECT_BIND", default_value = "127.0.0.1:8787")]
    bind: String,
    #[arg(long = "tick-hz", default_value_t = 10.0)]
    tick_hz: f64,
    /// Temperament and needs are reloaded from here on start and saved
    /// every simulated day and on shutdown.
    #[arg(long = "state-file")]
    state_file: Option<PathBuf>,
    /// JSON config overlay.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Simulated seconds per wall second; overrides the config file.
    #[arg(long)]
    compression: Option<f64>,
    /// On shutdown, write every applied input as a replayable scenario.
    #[arg(long)]
    record: Option<PathBuf>,
}

async fn serve(args: Args) -> Result<(), String> {
    let mut engine = EngineConfig::default();
    if let Some(path) = &args.config {
        engine = engine.overlay_file(path).map_err(|e| e.to_string())?;
    }
    if let Some(c) = args.compression {
        engine = engine.overlay_str(&format!("{{\"time_compression\": {c}}}")).map_err(|e| e.to_string())?;
    }
    let cfg = ServiceConfig {
        engine,
        seed: args.seed,
        tick_hz: args.tick_hz,
        state_file: args.state_file,
        ..ServiceConfig::default()
    };
    let listener = tokio::net::TcpListener::bind(&args.bind).await.map_err(|e| format!("binding {}: {e}", args.bind))?;
    let service = spawn(listener, cfg).await.map_err(|e| e.to_string())?;
    tracing::info!("listening on ws://{}/ws", service.local_addr());
    tokio::signal::ctrl_c().await.map_err(|e| e.to_string())?;
    let summary = service.shutdown().await.map_err(|e| e.to_string())?;
    tracing::info!("stopped at simulated {} ms after {} inputs", summary.end_ms, summary.trace.entries.len());
    if let Some(path) = args.record {
        std::fs::write(&path, summary.trace.to_jsonl()).map_err(|e| format!("writing {}: {e}", path.display()))?;
    }
    Ok(())
}

#[tokio::main]
async fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::try_from_default_env().unwrap_or_else(|_| "info".into()))
        .init();
    match serve(Args::parse()).await {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            tracing::error!("{e}");
            ExitCode::FAILURE
        }
    }
}
