use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::cache::content_hash;
use super::retry::RetryPolicy;
use super::BackendError;

/// Default annotator prompt: asks the model to wrap keywords in category
/// tags inside an `<annotated>` envelope.
pub const DEFAULT_ANNOTATE_PROMPT: &str = include_str!("../../data/annotate_prompt.txt");

pub const DEFAULT_REPHRASE_PROMPT: &str = "\
Rephrase the following Thai-English code-switched medical text. Keep every \
English term that appears in it in English, keep the meaning, and answer with \
the rephrased text only.

{input}
";

/// Connection settings for one remote backend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendConfig {
    pub endpoint: String,
    /// Name of the environment variable holding the bearer token.
    #[serde(default)]
    pub auth_env: Option<String>,
    #[serde(default = "default_timeout")]
    pub timeout_secs: f64,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    /// Requests-per-minute cap.
    #[serde(default = "default_rpm")]
    pub rpm: f64,
    #[serde(default = "default_in_flight")]
    pub max_in_flight: usize,
    /// Prompt template file for prompt-driven roles; must contain `{input}`.
    #[serde(default)]
    pub template: Option<PathBuf>,
    /// Passed through to completion endpoints when set.
    #[serde(default)]
    pub temperature: Option<f64>,
    #[serde(default = "default_backoff_base")]
    pub backoff_base_secs: f64,
    #[serde(default = "default_backoff_factor")]
    pub backoff_factor: f64,
    #[serde(default = "default_true")]
    pub jitter: bool,
}

fn default_timeout() -> f64 {
    30.0
}
fn default_retries() -> u32 {
    3
}
fn default_rpm() -> f64 {
    60.0
}
fn default_in_flight() -> usize {
    4
}
fn default_backoff_base() -> f64 {
    1.0
}
fn default_backoff_factor() -> f64 {
    2.0
}
fn default_true() -> bool {
    true
}

impl BackendConfig {
    pub fn new(endpoint: impl Into<String>) -> Self {
        Self {
            endpoint: endpoint.into(),
            auth_env: None,
            timeout_secs: default_timeout(),
            max_retries: default_retries(),
            rpm: default_rpm(),
            max_in_flight: default_in_flight(),
            template: None,
            temperature: None,
            backoff_base_secs: default_backoff_base(),
            backoff_factor: default_backoff_factor(),
            jitter: true,
        }
    }

    pub fn validate(&self) -> Result<(), BackendError> {
        let bad = |msg: &str| Err(BackendError::InvalidConfig(format!("{}: {msg}", self.endpoint)));
        if self.endpoint.is_empty() {
            return bad("endpoint is empty");
        }
        if self.timeout_secs.is_nan() || self.timeout_secs <= 0.0 {
            return bad("timeout_secs must be > 0");
        }
        if self.rpm.is_nan() || self.rpm <= 0.0 {
            return bad("rpm must be > 0");
        }
        if self.max_in_flight == 0 {
            return bad("max_in_flight must be >= 1");
        }
        if self.backoff_base_secs < 0.0 || self.backoff_factor < 1.0 {
            return bad("backoff must have base >= 0 and factor >= 1");
        }
        Ok(())
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_secs)
    }

    pub fn retry_policy(&self) -> RetryPolicy {
        RetryPolicy {
            max_retries: self.max_retries,
            base: Duration::from_secs_f64(self.backoff_base_secs),
            factor: self.backoff_factor,
            jitter: self.jitter,
        }
    }
}

/// A prompt with a single `{input}` slot.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptTemplate {
    text: String,
    hash: String,
}

impl PromptTemplate {
    pub fn new(text: impl Into<String>) -> Result<Self, BackendError> {
        let text = text.into();
        if !text.contains("{input}") {
            return Err(BackendError::InvalidConfig("prompt template has no {input} slot".into()));
        }
        let hash = content_hash(&text);
        Ok(Self { text, hash })
    }

    pub fn load(path: &Path) -> Result<Self, BackendError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BackendError::InvalidConfig(format!("{}: {e}", path.display())))?;
        Self::new(text)
    }

    pub fn render(&self, input: &str) -> String {
        self.text.replace("{input}", input)
    }

    pub fn hash(&self) -> &str {
        &self.hash
    }

    pub fn annotate_default() -> Self {
        Self::new(DEFAULT_ANNOTATE_PROMPT).expect("bundled prompt has a slot")
    }

    pub fn rephrase_default() -> Self {
        Self::new(DEFAULT_REPHRASE_PROMPT).expect("bundled prompt has a slot")
    }
}

/// The `--backend-config` TOML file: one optional table per role.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BackendsFile {
    #[serde(default)]
    pub translator: Option<BackendConfig>,
    #[serde(default)]
    pub annotator: Option<BackendConfig>,
    #[serde(default)]
    pub rephraser: Option<BackendConfig>,
    #[serde(default)]
    pub back_translator: Option<BackendConfig>,
    #[serde(default)]
    pub scorer: Option<BackendConfig>,
    /// Directory for the on-disk response cache.
    #[serde(default)]
    pub cache_dir: Option<PathBuf>,
}

impl BackendsFile {
    pub fn parse(text: &str) -> Result<Self, BackendError> {
        let file: BackendsFile = toml::from_str(text).map_err(|e| BackendError::InvalidConfig(e.to_string()))?;
        for cfg in [
            &file.translator,
            &file.annotator,
            &file.rephraser,
            &file.back_translator,
            &file.scorer,
        ]
        .into_iter()
        .flatten()
        {
            cfg.validate()?;
        }
        Ok(file)
    }

    pub fn load(path: &Path) -> Result<Self, BackendError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| BackendError::InvalidConfig(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }
}
