use std::time::Duration;

use affect_core::harness::{run, RunOptions};
use affect_core::{EngineConfig, Reason};
use affect_service::{spawn, RunningService, ServiceConfig};
use futures_util::{SinkExt, StreamExt};
use serde_json::{json, Value};
use tokio::net::TcpListener;
use tokio::sync::mpsc;
use tokio_tungstenite::tungstenite::Message;

type Sink = futures_util::stream::SplitSink<
    tokio_tungstenite::WebSocketStream<tokio_tungstenite::MaybeTlsStream<tokio::net::TcpStream>>,
    Message,
>;

struct Client {
    sink: Sink,
    inbox: mpsc::UnboundedReceiver<Value>,
}

impl Client {
    async fn connect(svc: &RunningService) -> Client {
        let (ws, _) = tokio_tungstenite::connect_async(format!("ws://{}/ws", svc.local_addr())).await.unwrap();
        let (sink, mut stream) = ws.split();
        let (tx, inbox) = mpsc::unbounded_channel();
        tokio::spawn(async move {
            while let Some(Ok(Message::Text(t))) = stream.next().await {
                if tx.send(serde_json::from_str::<Value>(&t).unwrap()).is_err() {
                    break;
                }
            }
        });
        Client { sink, inbox }
    }

    async fn send(&mut self, v: Value) {
        self.sink.send(Message::Text(v.to_string().into())).await.unwrap();
    }

    async fn send_raw(&mut self, s: &str) {
        self.sink.send(Message::Text(s.into())).await.unwrap();
    }

    /// Next message of the given type, skipping others.
    async fn next_of(&mut self, ty: &str) -> Value {
        tokio::time::timeout(Duration::from_secs(5), async {
            loop {
                let m = self.inbox.recv().await.expect("connection open");
                if m["type"] == ty {
                    return m;
                }
            }
        })
        .await
        .unwrap_or_else(|_| panic!("no {ty} message within 5 s"))
    }

    fn drain(&mut self) -> Vec<Value> {
        let mut v = Vec::new();
        while let Ok(m) = self.inbox.try_recv() {
            v.push(m);
        }
        v
    }
}

async fn start(cfg: ServiceConfig) -> RunningService {
    let listener = TcpListener::bind("127.0.0.1:0").await.unwrap();
    spawn(listener, cfg).await.unwrap()
}

fn fast(compression: f64) -> ServiceConfig {
    let engine = EngineConfig { time_compression: compression, ..EngineConfig::default() };
    ServiceConfig { engine, tick_hz: 50.0, ..ServiceConfig::default() }
}

#[tokio::test]
async fn greeting_is_acked_then_displayed() {
    let svc = start(fast(1.0)).await;
    let mut c = Client::connect(&svc).await;
    c.send(json!({"type": "word", "text": "hello"})).await;
    let ack = c.next_of("event_ack").await;
    assert_eq!(ack, json!({"type": "event_ack", "kind": "WordGreeting"}));
    let d = c.next_of("directive").await;
    assert_eq!(d["body"]["reason"], "Response");
    svc.shutdown().await.unwrap();
}

#[tokio::test]
async fn state_reply_has_needs_in_range() {
    let svc = start(fast(1.0)).await;
    let mut c = Client::connect(&svc).await;
    c.send(json!({"type": "get_state"})).await;
    let s = c.next_of("state").await;
    for need in ["touch", "rest", "social", "hunger"] {
        let x = s["body"]["needs"][need].as_f64().unwrap();
        assert!((0.0..=1.0).contains(&x), "{need} = {x}");
    }
    assert!(s["body"]["temperament"]["archetype"].is_string());
    assert!(s["body"]["clock"]["t_ms"].is_u64());
    svc.shutdown().await.unwrap();
}

#[tokio::test]
async fn bad_input_errors_only_to_sender() {
    let svc = start(fast(1.0)).await;
    let mut bad = Client::connect(&svc).await;
    let mut other = Client::connect(&svc).await;
    bad.send(json!({"type": "touch", "region": "middle"})).await;
    bad.send_raw("{not json").await;
    let e = bad.next_of("error").await;
    assert!(e["detail"].as_str().unwrap().contains("middle"));
    bad.next_of("error").await;
    // A round trip through the tick loop proves the errors were never queued.
    other.send(json!({"type": "get_state"})).await;
    other.next_of("state").await;
    assert!(other.drain().iter().all(|m| m["type"] != "error"));
    let summary = svc.shutdown().await.unwrap();
    assert!(summary.trace.entries.is_empty());
}

#[tokio::test]
async fn every_client_sees_every_broadcast() {
    let svc = start(fast(1.0)).await;
    let mut a = Client::connect(&svc).await;
    let mut b = Client::connect(&svc).await;
    a.send(json!({"type": "word", "text": "good"})).await;
    assert_eq!(a.next_of("event_ack").await["kind"], "WordPraise");
    assert_eq!(b.next_of("event_ack").await["kind"], "WordPraise");
    svc.shutdown().await.unwrap();
}

#[tokio::test]
async fn temperament_survives_restart() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.json");
    let engine = EngineConfig { day_length_s: 1.0, eta: 0.5, noise_sigma: 0.0, time_compression: 20.0, ..EngineConfig::default() };
    let cfg = ServiceConfig { engine, tick_hz: 50.0, state_file: Some(path.clone()), ..ServiceConfig::default() };

    let svc = start(cfg.clone()).await;
    let mut c = Client::connect(&svc).await;
    for _ in 0..5 {
        c.send(json!({"type": "word", "text": "good"})).await;
        tokio::time::sleep(Duration::from_millis(60)).await;
    }
    tokio::time::sleep(Duration::from_millis(200)).await;
    let first = svc.shutdown().await.unwrap();
    assert!(!first.restored);
    assert!(first.final_state.day_index > 0);
    assert_ne!(first.final_state.temperament, affect_core::VaPoint::ORIGIN);
    let saved: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(saved["day_index"], json!(first.final_state.day_index));

    let svc = start(cfg).await;
    let mut c = Client::connect(&svc).await;
    c.send(json!({"type": "get_state"})).await;
    let s = c.next_of("state").await;
    let t = &s["body"]["temperament"];
    assert_eq!(t["valence"].as_f64().unwrap(), first.final_state.temperament.valence);
    assert_eq!(t["arousal"].as_f64().unwrap(), first.final_state.temperament.arousal);
    assert!(svc.shutdown().await.unwrap().restored);
}

/// Simultaneous clients: whatever interleaving the service picked, its
/// recorded trace replays offline to the same directives and a valid log.
#[tokio::test]
async fn concurrent_clients_match_offline_replay() {
    let svc = start(fast(30.0)).await;
    let mut watcher = Client::connect(&svc).await;
    let (opened_at, _) = cut_at_state(&mut watcher).await;
    let mut tasks = Vec::new();
    for i in 0..4u64 {
        let mut c = Client::connect(&svc).await;
        tasks.push(tokio::spawn(async move {
            let regions = ["front", "top", "back", "left", "right"];
            let words = ["hello", "good", "bad", "food", "xyzzy"];
            for k in 0..25u64 {
                let msg = match (i + k) % 4 {
                    0 => json!({"type": "touch", "region": regions[((i * 7 + k) % 5) as usize]}),
                    1 => json!({"type": "word", "text": words[(k % 5) as usize]}),
                    2 => json!({"type": "gaze", "angle_deg": ((i * 37 + k * 11) % 180) as f64}),
                    _ => json!({"type": "proximity", "distance_m": ((i + k * 3) % 50) as f64 / 10.0}),
                };
                c.send(msg).await;
                tokio::time::sleep(Duration::from_millis(7 + i * 3)).await;
            }
            c
        }));
    }
    for t in tasks {
        t.await.unwrap();
    }
    tokio::time::sleep(Duration::from_millis(200)).await;
    let live = cut_at_state(&mut watcher).await;
    let summary = svc.shutdown().await.unwrap();
    assert_eq!(summary.trace.entries.len(), 100);
    let offline = offline_directives(&summary.trace, opened_at, live.0);
    assert!(!offline.is_empty());
    assert_eq!(live.1, offline);
}

/// Sends `get_state` and returns the reply's simulated time with every
/// directive broadcast before it.
async fn cut_at_state(c: &mut Client) -> (u64, Vec<Value>) {
    c.send(json!({"type": "get_state"})).await;
    let mut directives = Vec::new();
    loop {
        let m = tokio::time::timeout(Duration::from_secs(5), c.inbox.recv()).await.unwrap().unwrap();
        match m["type"].as_str() {
            Some("directive") => directives.push(m["body"].clone()),
            Some("state") => return (m["body"]["clock"]["t_ms"].as_u64().unwrap(), directives),
            _ => {}
        }
    }
}

/// Directives an offline run emits after `from_ms` up to `end_ms`.
fn offline_directives(trace: &affect_core::Scenario, from_ms: u64, end_ms: u64) -> Vec<Value> {
    let log = run(trace, &RunOptions { duration_ms: Some(end_ms), ..Default::default() }).unwrap();
    let text = log.to_jsonl();
    affect_core::RunLog::parse_jsonl(&text).expect("offline log is well formed");
    log.directives().filter(|d| d.t_ms > from_ms).map(|d| serde_json::to_value(d).unwrap()).collect()
}

#[tokio::test]
async fn prompts_reach_clients() {
    // Ten simulated minutes per wall second: the touch prompt lands in ~1.2 s.
    let svc = start(fast(600.0)).await;
    let mut c = Client::connect(&svc).await;
    let d = tokio::time::timeout(Duration::from_secs(5), async {
        loop {
            let d = c.next_of("directive").await;
            if d["body"]["reason"] == serde_json::to_value(Reason::NeedPrompt).unwrap() {
                return d;
            }
        }
    })
    .await
    .unwrap();
    assert_eq!(d["body"]["bubble"], "Hand");
    svc.shutdown().await.unwrap();
}
