use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use serde::Serialize;
use tokio::sync::{mpsc, Notify};

use crate::error::{Error, Result};

use super::{MessageKind, StreamMessage};

/// Frames buffered per client before the client is dropped.
pub const CLIENT_QUEUE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SessionState {
    Waiting,
    Running,
    Ended,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StatusReport {
    pub state: SessionState,
    pub points: usize,
    pub clients: usize,
    pub dropped_clients: usize,
    pub last_t: Option<f64>,
    pub source: String,
}

#[derive(Debug)]
struct HubState {
    clients: BTreeMap<u64, mpsc::Sender<Arc<str>>>,
    next_id: u64,
    latest_point: Option<Arc<str>>,
    last_t: Option<f64>,
    points: usize,
    state: SessionState,
    dropped: usize,
}

/// Single-producer, many-consumer message hub for one session.
///
/// Publishing never blocks: each client has a queue of [`CLIENT_QUEUE`]
/// frames and a client whose queue is full is disconnected.
#[derive(Debug)]
pub struct Hub {
    state: Mutex<HubState>,
    source: String,
    joined: Notify,
}

impl Hub {
    pub fn new(source: impl Into<String>) -> Arc<Self> {
        Arc::new(Self {
            state: Mutex::new(HubState {
                clients: BTreeMap::new(),
                next_id: 0,
                latest_point: None,
                last_t: None,
                points: 0,
                state: SessionState::Waiting,
                dropped: 0,
            }),
            source: source.into(),
            joined: Notify::new(),
        })
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, HubState> {
        self.state.lock().expect("hub lock")
    }

    /// Adds a client. Its queue starts with the latest point (if any) and,
    /// for a finished session, the end frame.
    pub fn register(&self) -> (u64, mpsc::Receiver<Arc<str>>) {
        let (tx, rx) = mpsc::channel(CLIENT_QUEUE);
        let mut st = self.lock();
        let id = st.next_id;
        st.next_id += 1;
        if let Some(latest) = &st.latest_point {
            let _ = tx.try_send(Arc::clone(latest));
        }
        if st.state == SessionState::Ended {
            let _ = tx.try_send(StreamMessage::end().to_json().into());
        } else {
            st.clients.insert(id, tx);
        }
        drop(st);
        self.joined.notify_waiters();
        (id, rx)
    }

    pub fn unregister(&self, id: u64) {
        self.lock().clients.remove(&id);
    }

    pub fn client_count(&self) -> usize {
        self.lock().clients.len()
    }

    /// Resolves once at least `n` clients are connected.
    pub async fn wait_for_clients(&self, n: usize) {
        loop {
            let notified = self.joined.notified();
            tokio::pin!(notified);
            notified.as_mut().enable();
            if self.client_count() >= n {
                return;
            }
            notified.await;
        }
    }

    pub fn mark_running(&self) {
        let mut st = self.lock();
        if st.state == SessionState::Waiting {
            st.state = SessionState::Running;
        }
    }

    /// Sends `msg` to every client. Points must have strictly increasing `t`.
    pub fn publish(&self, msg: &StreamMessage) -> Result<()> {
        let mut st = self.lock();
        if st.state == SessionState::Ended {
            return Err(Error::Server("session already ended".into()));
        }
        let frame: Arc<str> = msg.to_json().into();
        if msg.kind == MessageKind::Point {
            let t = msg
                .t
                .ok_or_else(|| Error::Server("point frame without t".into()))?;
            if st.last_t.is_some_and(|last| t <= last) {
                return Err(Error::Server(format!(
                    "point at t = {t} does not follow t = {}",
                    st.last_t.unwrap_or_default()
                )));
            }
            st.last_t = Some(t);
            st.points += 1;
            st.latest_point = Some(Arc::clone(&frame));
        }
        st.state = SessionState::Running;
        let mut dropped = 0;
        st.clients.retain(|_, tx| match tx.try_send(Arc::clone(&frame)) {
            Ok(()) => true,
            Err(_) => {
                dropped += 1;
                false
            }
        });
        st.dropped += dropped;
        Ok(())
    }

    /// Sends the end frame and releases every client queue, so client
    /// connections close once drained. Idempotent.
    pub fn finish(&self) {
        let mut st = self.lock();
        if st.state == SessionState::Ended {
            return;
        }
        let frame: Arc<str> = StreamMessage::end().to_json().into();
        for tx in st.clients.values() {
            let _ = tx.try_send(Arc::clone(&frame));
        }
        st.clients.clear();
        st.state = SessionState::Ended;
    }

    pub fn state(&self) -> SessionState {
        self.lock().state
    }

    pub fn status(&self) -> StatusReport {
        let st = self.lock();
        StatusReport {
            state: st.state,
            points: st.points,
            clients: st.clients.len(),
            dropped_clients: st.dropped,
            last_t: st.last_t,
            source: self.source.clone(),
        }
    }
}
