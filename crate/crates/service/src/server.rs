//! Tick loop and WebSocket endpoint.
//!
//! One task owns the engine. Connection tasks validate frames and push
//! them onto the ingress queue; the tick loop drains the queue in arrival
//! order, stamps every input with the tick's simulated time, advances the
//! engine and fans the resulting messages out on a broadcast channel.

use std::net::SocketAddr;
use std::path::PathBuf;
use std::time::Duration;

use affect_core::config::{ConfigError, EngineConfig};
use affect_core::engine::PersistedState;
use affect_core::log::RecordBody;
use affect_core::scenario::ScenarioEntry;
use affect_core::{Engine, Scenario};
use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::IntoResponse;
use axum::routing::get;
use axum::Router;
use futures_util::{SinkExt, StreamExt};
use tokio::net::TcpListener;
use tokio::sync::{broadcast, mpsc, oneshot};
use tokio::task::JoinHandle;
use tokio::time::{Instant, MissedTickBehavior};

use crate::protocol::{parse_client, Command, ServerMessage};
use crate::state_file::{self, StateFileError};

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub engine: EngineConfig,
    pub seed: u64,
    pub tick_hz: f64,
    pub state_file: Option<PathBuf>,
    pub state_interval: Duration,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            engine: EngineConfig::default(),
            seed: 0,
            tick_hz: 10.0,
            state_file: None,
            state_interval: Duration::from_secs(1),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ServiceError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    StateFile(#[from] StateFileError),
    #[error("tick rate must be positive, got {0}")]
    TickRate(f64),
    #[error("{0}")]
    Io(#[from] std::io::Error),
    #[error("engine task ended unexpectedly")]
    EngineTask,
}

/// What the service did while it ran: every applied input at the simulated
/// time it was applied, and the simulated time of the last tick.
#[derive(Debug, Clone)]
pub struct Summary {
    pub trace: Scenario,
    pub end_ms: u64,
    pub final_state: PersistedState,
    pub restored: bool,
}

struct Ingress {
    command: Command,
    reply: mpsc::UnboundedSender<String>,
}

#[derive(Clone)]
struct Shared {
    ingress: mpsc::Sender<Ingress>,
    broadcast: broadcast::Sender<String>,
}

pub struct RunningService {
    addr: SocketAddr,
    shutdown: oneshot::Sender<()>,
    engine_task: JoinHandle<Result<Summary, ServiceError>>,
    server_task: JoinHandle<()>,
}

impl RunningService {
    pub fn local_addr(&self) -> SocketAddr {
        self.addr
    }

    /// Stops the tick loop, writes the state file and returns the summary.
    pub async fn shutdown(self) -> Result<Summary, ServiceError> {
        let _ = self.shutdown.send(());
        let summary = self.engine_task.await.map_err(|_| ServiceError::EngineTask)?;
        self.server_task.abort();
        summary
    }
}

/// Builds the engine (restoring from the state file when one exists) and
/// starts serving `/ws` on `listener`.
pub async fn spawn(listener: TcpListener, cfg: ServiceConfig) -> Result<RunningService, ServiceError> {
    if !(cfg.tick_hz.is_finite() && cfg.tick_hz > 0.0) {
        return Err(ServiceError::TickRate(cfg.tick_hz));
    }
    let persisted = match &cfg.state_file {
        Some(p) => state_file::load(p)?,
        None => None,
    };
    let engine = match &persisted {
        Some(state) => Engine::restore(cfg.engine.clone(), cfg.seed, state)?,
        None => Engine::new(cfg.engine.clone(), cfg.seed)?,
    };
    let addr = listener.local_addr()?;
    let (ingress_tx, ingress_rx) = mpsc::channel(1024);
    let (broadcast_tx, _) = broadcast::channel(4096);
    let (shutdown_tx, shutdown_rx) = oneshot::channel();

    let tick = TickLoop {
        engine,
        trace: Scenario {
            seed: cfg.seed,
            config: match serde_json::to_value(&cfg.engine) {
                Ok(serde_json::Value::Object(m)) => m,
                _ => Default::default(),
            },
            entries: Vec::new(),
        },
        compression: cfg.engine.time_compression,
        broadcast: broadcast_tx.clone(),
        state_file: cfg.state_file.clone(),
        restored: persisted.is_some(),
    };
    let engine_task = tokio::spawn(tick.run(ingress_rx, shutdown_rx, cfg.tick_hz, cfg.state_interval));

    let shared = Shared { ingress: ingress_tx, broadcast: broadcast_tx };
    let app = Router::new().route("/ws", get(ws_handler)).with_state(shared);
    let server_task = tokio::spawn(async move {
        if let Err(e) = axum::serve(listener, app).await {
            tracing::error!("server stopped: {e}");
        }
    });
    Ok(RunningService { addr, shutdown: shutdown_tx, engine_task, server_task })
}

struct TickLoop {
    engine: Engine,
    trace: Scenario,
    compression: f64,
    broadcast: broadcast::Sender<String>,
    state_file: Option<PathBuf>,
    restored: bool,
}

impl TickLoop {
    fn send(&self, msg: ServerMessage) {
        // No receivers is fine: nobody is connected.
        let _ = self.broadcast.send(msg.to_json());
    }

    fn persist(&self) {
        if let Some(path) = &self.state_file {
            if let Err(e) = state_file::save(path, &self.engine.persisted()) {
                tracing::error!("{e}");
            }
        }
    }

    async fn run(
        mut self,
        mut ingress: mpsc::Receiver<Ingress>,
        mut shutdown: oneshot::Receiver<()>,
        tick_hz: f64,
        state_interval: Duration,
    ) -> Result<Summary, ServiceError> {
        let mut out = Vec::new();
        self.engine.start(&mut out);
        self.publish(&mut out);

        let base_ms = self.engine.now_ms();
        let mut sim_ms = 0.0f64;
        let mut last_wall = Instant::now();
        let mut last_state = last_wall;
        let mut interval = tokio::time::interval(Duration::from_secs_f64(1.0 / tick_hz));
        interval.set_missed_tick_behavior(MissedTickBehavior::Delay);
        loop {
            tokio::select! {
                _ = &mut shutdown => break,
                _ = interval.tick() => {}
            }
            let now = Instant::now();
            sim_ms += (now - last_wall).as_secs_f64() * 1000.0 * self.compression;
            last_wall = now;
            let t = base_ms + sim_ms.floor() as u64;

            let mut want_state = false;
            while let Ok(Ingress { command, reply }) = ingress.try_recv() {
                match command {
                    Command::Input(sample) => match self.engine.ingest(t, &sample, &mut out) {
                        Ok(()) => self.trace.entries.push(ScenarioEntry { t_ms: t, sample }),
                        Err(e) => {
                            let _ = reply.send(ServerMessage::Error { detail: e.to_string() }.to_json());
                        }
                    },
                    Command::GetState => want_state = true,
                    Command::SetCompression(f) => self.compression = f,
                }
            }
            self.engine.advance_to(t, &mut out);
            self.publish(&mut out);
            if want_state || now - last_state >= state_interval {
                last_state = now;
                self.send(ServerMessage::State { body: self.engine.snapshot() });
            }
        }
        self.persist();
        Ok(Summary {
            end_ms: self.engine.now_ms(),
            final_state: self.engine.persisted(),
            trace: self.trace,
            restored: self.restored,
        })
    }

    /// Broadcasts acks and directives from freshly emitted records, and
    /// persists after any day boundary.
    fn publish(&mut self, out: &mut Vec<affect_core::LogRecord>) {
        let mut boundary = false;
        for r in out.drain(..) {
            match r.body {
                RecordBody::Event(e) if e.kind.is_user() => self.send(ServerMessage::EventAck { kind: e.kind }),
                RecordBody::Directive(d) => self.send(ServerMessage::Directive { body: d }),
                RecordBody::DayBoundary(_) => boundary = true,
                _ => {}
            }
        }
        if boundary {
            self.persist();
        }
    }
}

async fn ws_handler(ws: WebSocketUpgrade, State(shared): State<Shared>) -> impl IntoResponse {
    ws.on_upgrade(move |socket| client(socket, shared))
}

async fn client(socket: WebSocket, shared: Shared) {
    let (mut sink, mut stream) = socket.split();
    let mut fanout = shared.broadcast.subscribe();
    let (direct_tx, mut direct_rx) = mpsc::unbounded_channel::<String>();

    let writer = tokio::spawn(async move {
        loop {
            let text = tokio::select! {
                m = fanout.recv() => match m {
                    Ok(t) => t,
                    Err(broadcast::error::RecvError::Lagged(n)) => {
                        tracing::warn!("client fell behind, dropped {n} messages");
                        continue;
                    }
                    Err(broadcast::error::RecvError::Closed) => break,
                },
                Some(t) = direct_rx.recv() => t,
            };
            if sink.send(Message::Text(text.into())).await.is_err() {
                break;
            }
        }
    });

    while let Some(Ok(msg)) = stream.next().await {
        let text = match msg {
            Message::Text(t) => t.to_string(),
            Message::Binary(b) => match String::from_utf8(b.to_vec()) {
                Ok(t) => t,
                Err(_) => {
                    let _ = direct_tx.send(ServerMessage::Error { detail: "binary frames must be UTF-8 JSON".into() }.to_json());
                    continue;
                }
            },
            Message::Close(_) => break,
            _ => continue,
        };
        match parse_client(&text) {
            Ok(command) => {
                if shared.ingress.send(Ingress { command, reply: direct_tx.clone() }).await.is_err() {
                    break;
                }
            }
            Err(detail) => {
                let _ = direct_tx.send(ServerMessage::Error { detail }.to_json());
            }
        }
    }
    writer.abort();
}
