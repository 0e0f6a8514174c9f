//! Clients for the external services the pipeline leans on: a translator,
//! a keyword annotator, a rephraser and a semantic scorer.
//!
//! Every role is a small trait so the pipeline can run against real HTTP
//! services ([`HttpBackend`]) or the deterministic fakes in [`fake`].
//!
//! Wire contracts (JSON over HTTP POST, bearer auth):
//!
//! | role | request | response |
//! |------|---------|----------|
//! | translate | `{"text", "source", "target"}` | `{"translation"}` |
//! | annotate / rephrase | `{"role", "prompt", "temperature"?}` | `{"text"}` |
//! | score | `{"src", "mt", "ref"}` | `{"score"}` |

mod cache;
mod clock;
mod config;
pub mod fake;
mod http;
mod retry;

use std::sync::atomic::{AtomicUsize, Ordering};

use serde::{Deserialize, Serialize};

pub use cache::{cache_key, content_hash, ResponseCache};
pub use clock::{Clock, ManualClock, Pacer, SystemClock};
pub use config::{BackendConfig, BackendsFile, PromptTemplate, DEFAULT_ANNOTATE_PROMPT, DEFAULT_REPHRASE_PROMPT};
pub use http::{HttpBackend, Role};
pub use retry::RetryPolicy;

#[derive(Debug, Clone, thiserror::Error)]
pub enum BackendError {
    #[error("request timed out")]
    Timeout,
    #[error("rate limited (HTTP 429)")]
    RateLimited,
    #[error("server error (HTTP {0})")]
    Server(u16),
    #[error("connection failed: {0}")]
    Connect(String),
    #[error("bad response: {0}")]
    BadResponse(String),
    #[error("gave up after {attempts} attempts: {last}")]
    ExhaustedRetries { attempts: u32, last: Box<BackendError> },
    #[error("credential environment variable {0} is not set")]
    MissingCredential(String),
    #[error("invalid backend config: {0}")]
    InvalidConfig(String),
    #[error("cache: {0}")]
    Cache(String),
    #[error("{0}")]
    Other(String),
}

impl BackendError {
    /// Transient failures worth another attempt.
    pub fn is_retryable(&self) -> bool {
        matches!(
            self,
            BackendError::Timeout | BackendError::RateLimited | BackendError::Server(_) | BackendError::Connect(_)
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BackendResult {
    pub text: String,
    pub latency_ms: u64,
    /// Network attempts made; 0 when served from cache.
    pub attempts: u32,
    pub cache_hit: bool,
}

impl BackendResult {
    /// A result produced locally, without a network call.
    pub fn local(text: impl Into<String>) -> Self {
        Self {
            text: text.into(),
            latency_ms: 0,
            attempts: 1,
            cache_hit: false,
        }
    }
}

pub trait Translator: Send + Sync {
    fn name(&self) -> &str;
    fn translate(&self, text: &str) -> Result<BackendResult, BackendError>;
}

/// Returns the input wrapped in `<annotated>` with category tags.
pub trait Annotator: Send + Sync {
    fn name(&self) -> &str;
    fn annotate(&self, text: &str) -> Result<BackendResult, BackendError>;
}

pub trait Rephraser: Send + Sync {
    fn name(&self) -> &str;
    fn rephrase(&self, text: &str) -> Result<BackendResult, BackendError>;
}

/// Applies `f` to every item with at most `workers` calls in flight.
/// Results come back in input order.
pub fn map_bounded<T, R, F>(items: &[T], workers: usize, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync,
{
    let workers = workers.max(1).min(items.len().max(1));
    if workers == 1 {
        return items.iter().map(&f).collect();
    }
    let next = AtomicUsize::new(0);
    let mut slots: Vec<Option<R>> = std::iter::repeat_with(|| None).take(items.len()).collect();
    let results = std::sync::Mutex::new(&mut slots);
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                if i >= items.len() {
                    break;
                }
                let r = f(&items[i]);
                results.lock().unwrap()[i] = Some(r);
            });
        }
    });
    slots.into_iter().map(|r| r.expect("every slot filled")).collect()
}
