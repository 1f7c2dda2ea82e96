use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc::{channel, Receiver, Sender};
use std::sync::{Arc, Mutex};
use std::thread::JoinHandle;
use std::time::Duration;

use crate::audio::PacedSource;
use crate::error::{Error, Result};

use super::{Decoder, EmotionPoint};

#[derive(Debug, Clone, PartialEq)]
pub enum LiveEvent {
    Point(EmotionPoint),
    End,
}

/// Delivers every published value to all current subscribers. Dropped
/// receivers are pruned on the next publish.
#[derive(Debug)]
pub struct Fanout<T> {
    subscribers: Mutex<Vec<Sender<T>>>,
}

impl<T: Clone> Fanout<T> {
    pub fn new() -> Self {
        Self {
            subscribers: Mutex::new(Vec::new()),
        }
    }

    pub fn subscribe(&self) -> Receiver<T> {
        let (tx, rx) = channel();
        self.subscribers.lock().expect("fanout lock").push(tx);
        rx
    }

    pub fn publish(&self, value: &T) {
        self.subscribers
            .lock()
            .expect("fanout lock")
            .retain(|tx| tx.send(value.clone()).is_ok());
    }

    pub fn subscriber_count(&self) -> usize {
        self.subscribers.lock().expect("fanout lock").len()
    }
}

impl<T: Clone> Default for Fanout<T> {
    fn default() -> Self {
        Self::new()
    }
}

type Callback = Box<dyn FnMut(&LiveEvent) + Send>;

/// Real-time dynamic decoding: an ingestion thread reads the paced source
/// and an analysis thread decodes windows as soon as they are complete.
pub struct LiveSession {
    decoder: Decoder,
    fanout: Arc<Fanout<LiveEvent>>,
    callbacks: Vec<Callback>,
}

impl LiveSession {
    pub fn new(decoder: Decoder) -> Self {
        Self {
            decoder,
            fanout: Arc::new(Fanout::new()),
            callbacks: Vec::new(),
        }
    }

    pub fn subscribe(&self) -> Receiver<LiveEvent> {
        self.fanout.subscribe()
    }

    /// Runs `f` on the analysis thread for every event.
    pub fn on_event(mut self, f: impl FnMut(&LiveEvent) + Send + 'static) -> Self {
        self.callbacks.push(Box::new(f));
        self
    }

    pub fn start(self, source: PacedSource) -> RunningSession {
        let stop = Arc::new(AtomicBool::new(false));
        let (tx, rx) = channel::<Vec<f64>>();
        let rate = source.sample_rate();

        let ingest_stop = Arc::clone(&stop);
        let ingest = std::thread::Builder::new()
            .name("ingest".into())
            .spawn(move || {
                for chunk in source {
                    if ingest_stop.load(Ordering::Relaxed) || tx.send(chunk.samples).is_err() {
                        break;
                    }
                }
            })
            .expect("spawn ingestion thread");

        let fanout = Arc::clone(&self.fanout);
        let mut callbacks = self.callbacks;
        let mut streaming = self.decoder.streaming(rate);
        let analysis = std::thread::Builder::new()
            .name("analysis".into())
            .spawn(move || {
                let mut emit = |event: LiveEvent| {
                    for cb in callbacks.iter_mut() {
                        cb(&event);
                    }
                    fanout.publish(&event);
                };
                let mut points = Vec::new();
                let mut failure = None;
                for chunk in rx {
                    match streaming.push(&chunk) {
                        Ok(new) => {
                            for p in new {
                                emit(LiveEvent::Point(p));
                                points.push(p);
                            }
                        }
                        Err(e) => {
                            failure = Some(e);
                            break;
                        }
                    }
                }
                emit(LiveEvent::End);
                match failure {
                    Some(e) => Err(e),
                    None => Ok(LiveReport {
                        points,
                        latencies: streaming.latencies().to_vec(),
                    }),
                }
            })
            .expect("spawn analysis thread");

        RunningSession {
            fanout: self.fanout,
            stop,
            ingest,
            analysis,
        }
    }
}

pub struct RunningSession {
    fanout: Arc<Fanout<LiveEvent>>,
    stop: Arc<AtomicBool>,
    ingest: JoinHandle<()>,
    analysis: JoinHandle<Result<LiveReport>>,
}

impl RunningSession {
    pub fn subscribe(&self) -> Receiver<LiveEvent> {
        self.fanout.subscribe()
    }

    /// Stops ingestion; windows already complete are still decoded.
    pub fn stop(&self) {
        self.stop.store(true, Ordering::Relaxed);
    }

    /// A cloneable handle that can stop the session from another thread.
    pub fn stop_handle(&self) -> StopHandle {
        StopHandle(Arc::clone(&self.stop))
    }

    pub fn join(self) -> Result<LiveReport> {
        let _ = self.ingest.join();
        self.analysis
            .join()
            .map_err(|_| Error::InvalidParameter("analysis thread panicked".into()))?
    }
}

#[derive(Debug, Clone)]
pub struct StopHandle(Arc<AtomicBool>);

impl StopHandle {
    pub fn stop(&self) {
        self.0.store(true, Ordering::Relaxed);
    }
}

/// Points produced by a live session and the analysis time of each window.
#[derive(Debug, Clone, Default)]
pub struct LiveReport {
    pub points: Vec<EmotionPoint>,
    pub latencies: Vec<Duration>,
}

impl LiveReport {
    pub fn median_latency(&self) -> Option<Duration> {
        let mut l = self.latencies.clone();
        l.sort();
        l.get(l.len() / 2).copied()
    }

    pub fn max_latency(&self) -> Option<Duration> {
        self.latencies.iter().max().copied()
    }
}
