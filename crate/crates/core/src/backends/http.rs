use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Condvar, Mutex};
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::cache::{cache_key, ResponseCache};
use super::clock::{Clock, Pacer, SystemClock};
use super::config::{BackendConfig, PromptTemplate};
use super::{map_bounded, Annotator, BackendError, BackendResult, Rephraser, Translator};
use crate::metrics::{ScoreError, ScoreProvider};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Role {
    /// English to Thai.
    Translate,
    /// Thai (code-switched) to English.
    BackTranslate,
    Annotate,
    Rephrase,
    Score,
}

impl Role {
    fn as_str(self) -> &'static str {
        match self {
            Role::Translate => "translate",
            Role::BackTranslate => "back_translate",
            Role::Annotate => "annotate",
            Role::Rephrase => "rephrase",
            Role::Score => "score",
        }
    }
}

/// Counting gate bounding concurrent in-flight requests.
#[derive(Debug)]
struct Gate {
    free: Mutex<usize>,
    cv: Condvar,
}

impl Gate {
    fn new(n: usize) -> Self {
        Self {
            free: Mutex::new(n),
            cv: Condvar::new(),
        }
    }

    fn enter(&self) -> GateGuard<'_> {
        let mut free = self.free.lock().unwrap();
        while *free == 0 {
            free = self.cv.wait(free).unwrap();
        }
        *free -= 1;
        GateGuard(self)
    }
}

struct GateGuard<'a>(&'a Gate);

impl Drop for GateGuard<'_> {
    fn drop(&mut self) {
        *self.0.free.lock().unwrap() += 1;
        self.0.cv.notify_one();
    }
}

/// A JSON-over-HTTP backend for one role.
pub struct HttpBackend {
    role: Role,
    cfg: BackendConfig,
    identity: String,
    template: Option<PromptTemplate>,
    client: reqwest::blocking::Client,
    cache: Option<Arc<ResponseCache>>,
    clock: Arc<dyn Clock>,
    pacer: Pacer,
    rng: Mutex<ChaCha8Rng>,
    gate: Gate,
    round_trips: AtomicUsize,
}

impl std::fmt::Debug for HttpBackend {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HttpBackend")
            .field("role", &self.role)
            .field("endpoint", &self.cfg.endpoint)
            .finish_non_exhaustive()
    }
}

impl HttpBackend {
    pub fn new(role: Role, cfg: BackendConfig) -> Result<Self, BackendError> {
        cfg.validate()?;
        let template = match role {
            Role::Annotate | Role::Rephrase => Some(match &cfg.template {
                Some(path) => PromptTemplate::load(path)?,
                None if role == Role::Annotate => PromptTemplate::annotate_default(),
                None => PromptTemplate::rephrase_default(),
            }),
            _ => None,
        };
        let client = reqwest::blocking::Client::builder()
            .timeout(cfg.timeout())
            .build()
            .map_err(|e| BackendError::InvalidConfig(e.to_string()))?;
        Ok(Self {
            role,
            identity: format!("{}@{}", role.as_str(), cfg.endpoint),
            template,
            client,
            cache: None,
            clock: Arc::new(SystemClock::new()),
            pacer: Pacer::per_minute(cfg.rpm),
            rng: Mutex::new(ChaCha8Rng::seed_from_u64(0)),
            gate: Gate::new(cfg.max_in_flight),
            round_trips: AtomicUsize::new(0),
            cfg,
        })
    }

    pub fn with_cache(mut self, cache: Arc<ResponseCache>) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn with_clock(mut self, clock: Arc<dyn Clock>) -> Self {
        self.clock = clock;
        self
    }

    /// Seeds the backoff jitter.
    pub fn with_seed(self, seed: u64) -> Self {
        *self.rng.lock().unwrap() = ChaCha8Rng::seed_from_u64(seed);
        self
    }

    pub fn role(&self) -> Role {
        self.role
    }

    pub fn config(&self) -> &BackendConfig {
        &self.cfg
    }

    /// Network requests sent so far, retries included.
    pub fn round_trips(&self) -> usize {
        self.round_trips.load(Ordering::SeqCst)
    }

    fn send_once(&self, payload: &Value) -> Result<Value, BackendError> {
        let mut req = self.client.post(&self.cfg.endpoint).json(payload);
        if let Some(var) = &self.cfg.auth_env {
            let token = std::env::var(var).map_err(|_| BackendError::MissingCredential(var.clone()))?;
            req = req.bearer_auth(token);
        }
        self.round_trips.fetch_add(1, Ordering::SeqCst);
        let resp = req.send().map_err(|e| {
            if e.is_timeout() {
                BackendError::Timeout
            } else {
                BackendError::Connect(e.to_string())
            }
        })?;
        let status = resp.status();
        if status.as_u16() == 429 {
            return Err(BackendError::RateLimited);
        }
        if status.is_server_error() {
            return Err(BackendError::Server(status.as_u16()));
        }
        if !status.is_success() {
            return Err(BackendError::BadResponse(format!("HTTP {status}")));
        }
        resp.json::<Value>().map_err(|e| {
            if e.is_timeout() {
                BackendError::Timeout
            } else {
                BackendError::BadResponse(format!("invalid JSON: {e}"))
            }
        })
    }

    /// Cache lookup, then paced attempts with exponential backoff.
    fn call(
        &self,
        payload: Value,
        cache_input: &str,
        extract: impl Fn(&Value) -> Result<String, BackendError>,
    ) -> Result<BackendResult, BackendError> {
        let template_hash = self.template.as_ref().map_or("", |t| t.hash());
        let key = cache_key(&self.identity, template_hash, cache_input);
        let key_lock = self.cache.as_ref().map(|c| c.key_lock(&key));
        let _held = key_lock.as_ref().map(|l| l.lock().unwrap());
        if let Some(text) = self.cache.as_ref().and_then(|c| c.get(&key)) {
            return Ok(BackendResult {
                text,
                latency_ms: 0,
                attempts: 0,
                cache_hit: true,
            });
        }

        let policy = self.cfg.retry_policy();
        let started = Instant::now();
        let mut attempt = 0;
        loop {
            attempt += 1;
            let outcome = {
                let _slot = self.gate.enter();
                self.pacer.acquire(self.clock.as_ref());
                self.send_once(&payload).and_then(|v| extract(&v))
            };
            match outcome {
                Ok(text) => {
                    if let Some(c) = &self.cache {
                        c.put(&key, &text)?;
                    }
                    return Ok(BackendResult {
                        text,
                        latency_ms: started.elapsed().as_millis() as u64,
                        attempts: attempt,
                        cache_hit: false,
                    });
                }
                Err(e) if e.is_retryable() => {
                    if attempt >= policy.max_attempts() {
                        return Err(BackendError::ExhaustedRetries {
                            attempts: attempt,
                            last: Box::new(e),
                        });
                    }
                    tracing::warn!(backend = %self.identity, attempt, error = %e, "retrying");
                    let delay = policy.delay(attempt, &mut *self.rng.lock().unwrap());
                    self.clock.sleep(delay);
                }
                Err(e) => return Err(e),
            }
        }
    }

    fn string_field(v: &Value, key: &str) -> Result<String, BackendError> {
        v.get(key)
            .and_then(Value::as_str)
            .map(str::to_string)
            .ok_or_else(|| BackendError::BadResponse(format!("missing string field {key:?}")))
    }

    fn expect_role(&self, allowed: &[Role]) -> Result<(), BackendError> {
        if allowed.contains(&self.role) {
            Ok(())
        } else {
            Err(BackendError::InvalidConfig(format!(
                "{} backend used for another role",
                self.role.as_str()
            )))
        }
    }

    fn translate_call(&self, text: &str) -> Result<BackendResult, BackendError> {
        self.expect_role(&[Role::Translate, Role::BackTranslate])?;
        let (source, target) = if self.role == Role::Translate { ("en", "th") } else { ("th", "en") };
        let payload = json!({ "text": text, "source": source, "target": target });
        self.call(payload, text, |v| {
            let t = Self::string_field(v, "translation")?;
            if t.trim().is_empty() {
                Err(BackendError::BadResponse("empty translation".into()))
            } else {
                Ok(t)
            }
        })
    }

    fn completion_call(&self, text: &str) -> Result<BackendResult, BackendError> {
        let template = self.template.as_ref().expect("prompt roles carry a template");
        let mut payload = json!({ "role": self.role.as_str(), "prompt": template.render(text) });
        if let Some(t) = self.cfg.temperature {
            payload["temperature"] = json!(t);
        }
        self.call(payload, text, |v| Self::string_field(v, "text"))
    }

    /// Scores a batch with bounded concurrency; results keep input order.
    pub fn score_batch(&self, items: &[(String, String, Option<String>)]) -> Vec<Result<f64, ScoreError>> {
        map_bounded(items, self.cfg.max_in_flight, |(src, mt, reference)| {
            self.score(src, mt, reference.as_deref())
        })
    }

    /// Translates a batch with bounded concurrency; results keep input order.
    pub fn translate_batch(&self, texts: &[String]) -> Vec<Result<BackendResult, BackendError>> {
        map_bounded(texts, self.cfg.max_in_flight, |t| self.translate_call(t))
    }
}

impl Translator for HttpBackend {
    fn name(&self) -> &str {
        &self.identity
    }

    fn translate(&self, text: &str) -> Result<BackendResult, BackendError> {
        self.translate_call(text)
    }
}

impl Annotator for HttpBackend {
    fn name(&self) -> &str {
        &self.identity
    }

    fn annotate(&self, text: &str) -> Result<BackendResult, BackendError> {
        self.expect_role(&[Role::Annotate])?;
        self.completion_call(text)
    }
}

impl Rephraser for HttpBackend {
    fn name(&self) -> &str {
        &self.identity
    }

    fn rephrase(&self, text: &str) -> Result<BackendResult, BackendError> {
        self.expect_role(&[Role::Rephrase])?;
        self.completion_call(text)
    }
}

impl ScoreProvider for HttpBackend {
    fn id(&self) -> &str {
        &self.identity
    }

    fn score(&self, source: &str, hypothesis: &str, reference: Option<&str>) -> Result<f64, ScoreError> {
        let failed = |e: BackendError| ScoreError::Failed {
            provider: self.identity.clone(),
            message: e.to_string(),
        };
        self.expect_role(&[Role::Score]).map_err(failed)?;
        let payload = json!({ "src": source, "mt": hypothesis, "ref": reference });
        let cache_input = serde_json::to_string(&payload).expect("json value serializes");
        let result = self
            .call(payload, &cache_input, |v| {
                let s = v
                    .get("score")
                    .and_then(Value::as_f64)
                    .ok_or_else(|| BackendError::BadResponse("missing numeric field \"score\"".into()))?;
                if !(0.0..=1.0).contains(&s) {
                    return Err(BackendError::BadResponse(format!("score {s} outside [0, 1]")));
                }
                Ok(serde_json::to_string(&s).expect("finite f64 serializes"))
            })
            .map_err(failed)?;
        result.text.parse::<f64>().map_err(|e| ScoreError::Failed {
            provider: self.identity.clone(),
            message: format!("cached score unreadable: {e}"),
        })
    }
}
