//! Live-reload preview server.
//!
//! Three tasks share one generation counter: the HTTP server (static files
//! plus the reload WebSocket), a poller that rebuilds when an input file
//! changes, and the broadcast channel that tells every connected page to
//! reload. A broadcast is sent only after a rebuild has renamed all of its
//! files into place; a failed rebuild is logged and the previous output stays
//! served.

use std::io::ErrorKind;
use std::path::PathBuf;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;
use std::time::{Duration, SystemTime};

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::Response;
use axum::routing::get;
use axum::Router;
use sketch2ui_core::codegen::DEFAULT_RELOAD_ENDPOINT;
use sketch2ui_core::EmitOptions;
use tokio::sync::broadcast;
use tower_http::services::ServeDir;

use crate::error::CliError;
use crate::pipeline::{run_and_write, Mode, PipelineConfig};

pub const POLL_INTERVAL: Duration = Duration::from_millis(200);

/// Payload of every reload message.
pub const RELOAD_MESSAGE: &str = "r";

#[derive(Clone)]
struct AppState {
    reload: broadcast::Sender<u64>,
}

type Snapshot = Vec<Option<(SystemTime, u64)>>;

fn snapshot(paths: &[PathBuf]) -> Snapshot {
    paths
        .iter()
        .map(|p| std::fs::metadata(p).ok().and_then(|m| Some((m.modified().ok()?, m.len()))))
        .collect()
}

fn emit_options() -> EmitOptions {
    EmitOptions::default().with_live_reload(true)
}

fn rebuild(config: &PipelineConfig) -> Result<(), CliError> {
    run_and_write(config, Mode::Compile, &emit_options()).map(|report| {
        log::info!(
            "rebuilt {} sketches ({} elements retained, {} removed)",
            report.summary.sketches,
            report.summary.retained,
            report.summary.removed
        );
    })
}

async fn reload_socket(ws: WebSocketUpgrade, State(state): State<AppState>) -> Response {
    let rx = state.reload.subscribe();
    ws.on_upgrade(move |socket| forward_reloads(socket, rx))
}

async fn forward_reloads(mut socket: WebSocket, mut rx: broadcast::Receiver<u64>) {
    loop {
        tokio::select! {
            generation = rx.recv() => match generation {
                Ok(_) | Err(broadcast::error::RecvError::Lagged(_)) => {
                    if socket.send(Message::Text(RELOAD_MESSAGE.into())).await.is_err() {
                        return;
                    }
                }
                Err(broadcast::error::RecvError::Closed) => return,
            },
            incoming = socket.recv() => match incoming {
                Some(Ok(Message::Close(_))) | Some(Err(_)) | None => return,
                Some(Ok(_)) => {}
            },
        }
    }
}

async fn watch(config: PipelineConfig, generation: Arc<AtomicU64>, reload: broadcast::Sender<u64>, mut last: Snapshot) {
    let paths = config.watched_paths();
    let mut ticker = tokio::time::interval(POLL_INTERVAL);
    loop {
        ticker.tick().await;
        let current = snapshot(&paths);
        if current == last {
            continue;
        }
        last = current;
        let cfg = config.clone();
        let outcome = tokio::task::spawn_blocking(move || rebuild(&cfg)).await;
        match outcome {
            Ok(Ok(())) => {
                let next = generation.fetch_add(1, Ordering::SeqCst) + 1;
                // No receivers is fine: nobody is watching yet.
                let _ = reload.send(next);
            }
            Ok(Err(err)) => log::error!("rebuild failed, keeping previous output: {err}"),
            Err(err) => log::error!("rebuild task panicked: {err}"),
        }
    }
}

/// Builds once, then serves `out_dir` and rebuilds on input changes until interrupted.
pub async fn serve(config: PipelineConfig) -> Result<(), CliError> {
    config.validate()?;
    let initial = snapshot(&config.watched_paths());
    {
        let cfg = config.clone();
        tokio::task::spawn_blocking(move || rebuild(&cfg))
            .await
            .map_err(|e| CliError::Io(format!("initial build panicked: {e}")))??;
    }

    let addr = ("127.0.0.1", config.serve_port);
    let listener = tokio::net::TcpListener::bind(addr).await.map_err(|e| {
        let what = if e.kind() == ErrorKind::AddrInUse { "port in use" } else { "cannot bind" };
        CliError::Io(format!("{what}: 127.0.0.1:{}: {e}", config.serve_port))
    })?;

    let (reload, _) = broadcast::channel(16);
    let generation = Arc::new(AtomicU64::new(0));
    tokio::spawn(watch(config.clone(), generation, reload.clone(), initial));

    let app = Router::new()
        .route(DEFAULT_RELOAD_ENDPOINT, get(reload_socket))
        .fallback_service(ServeDir::new(&config.out_dir))
        .with_state(AppState { reload });

    println!("serving {} at http://127.0.0.1:{}/", config.out_dir.display(), config.serve_port);
    axum::serve(listener, app)
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
        .map_err(|e| CliError::Io(format!("server error: {e}")))
}
