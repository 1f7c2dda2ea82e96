use std::net::SocketAddr;
use std::path::PathBuf;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;
use std::time::Duration;

use axum::extract::ws::{Message, WebSocket, WebSocketUpgrade};
use axum::extract::State;
use axum::response::{IntoResponse, Response};
use axum::routing::get;
use axum::{Json, Router};
use serde::Serialize;
use tokio::sync::{watch, Notify};
use tokio::task::JoinHandle;
use tokio::time::Instant;
use tower_http::services::ServeDir;

use crate::audio::PacedSource;
use crate::decoder::{EmotionTrace, LiveEvent, LiveSession};
use crate::error::{Error, Result};

use super::{Hub, MessageKind, StatusReport, StreamMessage, WIRE_VERSION};

/// How a recorded trace is replayed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ReplayPacing {
    /// A point with time `t` is sent `t / speed` seconds after the session starts.
    Realtime { speed: f64 },
    Immediate,
}

/// What feeds the session.
#[allow(clippy::large_enum_variant)]
pub enum SessionSource {
    Replay {
        trace: EmotionTrace,
        pacing: ReplayPacing,
    },
    Live {
        session: LiveSession,
        source: PacedSource,
    },
}

impl SessionSource {
    fn describe(&self) -> String {
        match self {
            SessionSource::Replay { trace, .. } if trace.source_id.is_empty() => "replay".into(),
            SessionSource::Replay { trace, .. } => format!("replay:{}", trace.source_id),
            SessionSource::Live { .. } => "live".into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ServerConfig {
    pub addr: SocketAddr,
    /// The session starts once this many clients are connected.
    pub wait_for_clients: usize,
    /// Directory served for any path other than `/stream` and `/status`.
    pub static_dir: Option<PathBuf>,
}

impl ServerConfig {
    pub fn new(addr: SocketAddr) -> Self {
        Self {
            addr,
            wait_for_clients: 0,
            static_dir: None,
        }
    }
}

#[derive(Debug, Default)]
struct ActiveClients {
    count: AtomicUsize,
    changed: Notify,
}

struct ClientGuard(Arc<ActiveClients>);

impl ActiveClients {
    fn enter(self: &Arc<Self>) -> ClientGuard {
        self.count.fetch_add(1, Ordering::SeqCst);
        ClientGuard(Arc::clone(self))
    }

    async fn drained(&self) {
        loop {
            let notified = self.changed.notified();
            tokio::pin!(notified);
            notified.as_mut().enable();
            if self.count.load(Ordering::SeqCst) == 0 {
                return;
            }
            notified.await;
        }
    }
}

impl Drop for ClientGuard {
    fn drop(&mut self) {
        self.0.count.fetch_sub(1, Ordering::SeqCst);
        self.0.changed.notify_waiters();
    }
}

#[derive(Clone)]
struct App {
    hub: Arc<Hub>,
    active: Arc<ActiveClients>,
}

#[derive(Serialize)]
struct StatusBody {
    v: u32,
    kind: MessageKind,
    #[serde(flatten)]
    report: StatusReport,
}

/// A running server. Dropping the handle interrupts the session and stops
/// accepting connections; [`ServerHandle::wait`] lets the session run out.
pub struct ServerHandle {
    addr: SocketAddr,
    hub: Arc<Hub>,
    active: Arc<ActiveClients>,
    interrupt: watch::Sender<bool>,
    close: watch::Sender<bool>,
    source_task: Option<JoinHandle<Result<()>>>,
    source_result: Option<Result<()>>,
    server_task: JoinHandle<std::io::Result<()>>,
}

/// Binds the listener and starts both the HTTP server and the session.
pub async fn serve(config: ServerConfig, source: SessionSource) -> Result<ServerHandle> {
    let listener = tokio::net::TcpListener::bind(config.addr)
        .await
        .map_err(|e| Error::Server(format!("cannot bind {}: {e}", config.addr)))?;
    let addr = listener
        .local_addr()
        .map_err(|e| Error::Server(e.to_string()))?;

    let hub = Hub::new(source.describe());
    let active = Arc::new(ActiveClients::default());
    let app = App {
        hub: Arc::clone(&hub),
        active: Arc::clone(&active),
    };
    let mut router = Router::new()
        .route("/stream", get(stream))
        .route("/status", get(status))
        .with_state(app);
    if let Some(dir) = &config.static_dir {
        if !dir.is_dir() {
            return Err(Error::Server(format!(
                "static directory {} does not exist",
                dir.display()
            )));
        }
        router = router.fallback_service(ServeDir::new(dir));
    }

    let (close, mut close_rx) = watch::channel(false);
    let server_task = tokio::spawn(async move {
        axum::serve(listener, router)
            .with_graceful_shutdown(async move {
                let _ = close_rx.wait_for(|c| *c).await;
            })
            .await
    });

    let (interrupt, interrupt_rx) = watch::channel(false);
    let source_task = tokio::spawn(run_source(
        Arc::clone(&hub),
        source,
        config.wait_for_clients,
        interrupt_rx,
    ));

    Ok(ServerHandle {
        addr,
        hub,
        active,
        interrupt,
        close,
        source_task: Some(source_task),
        source_result: None,
        server_task,
    })
}

impl ServerHandle {
    pub fn local_addr(&self) -> SocketAddr {
        self.addr
    }

    pub fn hub(&self) -> Arc<Hub> {
        Arc::clone(&self.hub)
    }

    /// Ends the session early. Clients receive the end frame.
    pub fn interrupt(&self) {
        let _ = self.interrupt.send(true);
    }

    /// Resolves when the session has sent its end frame.
    /// Calling it again returns the stored outcome.
    pub async fn session_finished(&mut self) -> Result<()> {
        if let Some(task) = self.source_task.take() {
            self.source_result = Some(join_source(task).await);
        }
        match &self.source_result {
            Some(Ok(())) | None => Ok(()),
            Some(Err(e)) => Err(Error::Server(e.to_string())),
        }
    }

    /// Waits for the session to end, gives clients up to `linger` to
    /// drain and disconnect, then stops the server.
    pub async fn wait(mut self, linger: Duration) -> Result<()> {
        let result = self.session_finished().await;
        self.close_after(linger).await?;
        result
    }

    /// Interrupts the session and stops the server.
    pub async fn shutdown(self, linger: Duration) -> Result<()> {
        self.interrupt();
        self.wait(linger).await
    }

    async fn close_after(self, linger: Duration) -> Result<()> {
        let _ = tokio::time::timeout(linger, self.active.drained()).await;
        let _ = self.close.send(true);
        self.server_task
            .await
            .map_err(|e| Error::Server(e.to_string()))?
            .map_err(|e| Error::Server(e.to_string()))
    }
}

async fn join_source(task: JoinHandle<Result<()>>) -> Result<()> {
    match task.await {
        Ok(r) => r,
        Err(e) if e.is_cancelled() => Ok(()),
        Err(e) => Err(Error::Server(e.to_string())),
    }
}

async fn run_source(
    hub: Arc<Hub>,
    source: SessionSource,
    wait_for: usize,
    mut interrupt: watch::Receiver<bool>,
) -> Result<()> {
    tokio::select! {
        _ = hub.wait_for_clients(wait_for) => {}
        _ = interrupted(&mut interrupt) => {
            hub.finish();
            return Ok(());
        }
    }
    hub.mark_running();
    let result = match source {
        SessionSource::Replay { trace, pacing } => replay(&hub, &trace, pacing, interrupt).await,
        SessionSource::Live { session, source } => live(&hub, session, source, interrupt).await,
    };
    hub.finish();
    result
}

async fn replay(
    hub: &Hub,
    trace: &EmotionTrace,
    pacing: ReplayPacing,
    mut interrupt: watch::Receiver<bool>,
) -> Result<()> {
    let start = Instant::now();
    for p in &trace.points {
        if let ReplayPacing::Realtime { speed } = pacing {
            let due = start + Duration::from_secs_f64((p.t / speed.max(1e-9)).max(0.0));
            tokio::select! {
                _ = tokio::time::sleep_until(due) => {}
                _ = interrupted(&mut interrupt) => return Ok(()),
            }
        } else if *interrupt.borrow() {
            return Ok(());
        }
        hub.publish(&StreamMessage::point(p))?;
    }
    Ok(())
}

async fn live(
    hub: &Arc<Hub>,
    session: LiveSession,
    source: PacedSource,
    mut interrupt: watch::Receiver<bool>,
) -> Result<()> {
    let publisher = Arc::clone(hub);
    let running = session
        .on_event(move |event| {
            if let LiveEvent::Point(p) = event {
                let _ = publisher.publish(&StreamMessage::point(p));
            }
        })
        .start(source);
    let stop = running.stop_handle();
    let mut join = tokio::task::spawn_blocking(move || running.join());
    let joined = tokio::select! {
        r = &mut join => r,
        _ = interrupted(&mut interrupt) => {
            stop.stop();
            join.await
        }
    };
    joined
        .map_err(|e| Error::Server(e.to_string()))?
        .map(|_| ())
}

async fn interrupted(rx: &mut watch::Receiver<bool>) {
    let _ = rx.wait_for(|i| *i).await;
}

async fn status(State(app): State<App>) -> Json<StatusBody> {
    Json(StatusBody {
        v: WIRE_VERSION,
        kind: MessageKind::Status,
        report: app.hub.status(),
    })
}

async fn stream(ws: WebSocketUpgrade, State(app): State<App>) -> Response {
    ws.on_upgrade(move |socket| client(socket, app))
        .into_response()
}

async fn client(mut socket: WebSocket, app: App) {
    let _guard = app.active.enter();
    let (id, mut rx) = app.hub.register();
    loop {
        tokio::select! {
            frame = rx.recv() => match frame {
                Some(frame) => {
                    if socket.send(Message::Text(frame.as_ref().into())).await.is_err() {
                        break;
                    }
                }
                None => {
                    let _ = socket.send(Message::Close(None)).await;
                    break;
                }
            },
            incoming = socket.recv() => match incoming {
                Some(Ok(Message::Close(_))) | Some(Err(_)) | None => break,
                Some(Ok(_)) => {}
            },
        }
    }
    app.hub.unregister(id);
}
