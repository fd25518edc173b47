//! Chat-completion backend over HTTP.
//!
//! Request body: `{model, messages: [{role, content, attachment?}],
//! temperature, max_tokens}`. Response body: `{text, finish_reason, usage}`.
//! The attachment is the frame's text serialization.

use std::sync::{Arc, Condvar, Mutex};
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use super::{BackendDescriptor, BackendError, PlannerBackend, TransportError};
use crate::curriculum::PromptBundle;

/// Environment variable holding the bearer token.
pub const API_KEY_ENV: &str = "CRAFTBENCH_API_KEY";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    System,
    User,
    Assistant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: Role,
    pub content: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attachment: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChatRequest {
    pub model: String,
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
    pub max_tokens: u32,
}

impl ChatRequest {
    pub fn from_bundle(bundle: &PromptBundle, cfg: &HttpConfig) -> ChatRequest {
        let mut messages = Vec::with_capacity(2);
        if !bundle.system_text.is_empty() {
            messages.push(ChatMessage { role: Role::System, content: bundle.system_text.clone(), attachment: None });
        }
        messages.push(ChatMessage {
            role: Role::User,
            content: bundle.user_text.clone(),
            attachment: bundle.attachment.as_ref().map(|f| f.to_string()),
        });
        ChatRequest { model: cfg.model.clone(), messages, temperature: cfg.temperature, max_tokens: cfg.max_tokens }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Usage {
    #[serde(default)]
    pub prompt_tokens: u64,
    #[serde(default)]
    pub completion_tokens: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatResponse {
    pub text: String,
    #[serde(default)]
    pub finish_reason: String,
    #[serde(default)]
    pub usage: Usage,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HttpConfig {
    pub endpoint: String,
    pub model: String,
    pub temperature: f64,
    pub max_tokens: u32,
    pub timeout_ms: u64,
    /// Retries after the first attempt.
    pub retry_cap: u32,
    pub backoff_base_ms: u64,
    pub backoff_max_ms: u64,
    /// Requests allowed in flight across every trial sharing a limiter.
    pub max_in_flight: usize,
}

impl Default for HttpConfig {
    fn default() -> Self {
        HttpConfig {
            endpoint: "http://127.0.0.1:8080/v1/chat".into(),
            model: "chat-default".into(),
            temperature: 0.0,
            max_tokens: 1024,
            timeout_ms: 60_000,
            retry_cap: 2,
            backoff_base_ms: 500,
            backoff_max_ms: 8_000,
            max_in_flight: 4,
        }
    }
}

/// Counting semaphore shared by clones.
#[derive(Debug, Clone)]
pub struct InflightLimiter {
    inner: Arc<(Mutex<usize>, Condvar)>,
    cap: usize,
}

pub struct Permit<'a> {
    limiter: &'a InflightLimiter,
}

impl InflightLimiter {
    pub fn new(cap: usize) -> Self {
        InflightLimiter { inner: Arc::new((Mutex::new(0), Condvar::new())), cap: cap.max(1) }
    }

    pub fn acquire(&self) -> Permit<'_> {
        let (lock, cv) = &*self.inner;
        let mut n = lock.lock().unwrap_or_else(|e| e.into_inner());
        while *n >= self.cap {
            n = cv.wait(n).unwrap_or_else(|e| e.into_inner());
        }
        *n += 1;
        Permit { limiter: self }
    }

    pub fn in_flight(&self) -> usize {
        *self.inner.0.lock().unwrap_or_else(|e| e.into_inner())
    }
}

impl Drop for Permit<'_> {
    fn drop(&mut self) {
        let (lock, cv) = &*self.limiter.inner;
        let mut n = lock.lock().unwrap_or_else(|e| e.into_inner());
        *n -= 1;
        cv.notify_one();
    }
}

pub struct HttpBackend {
    cfg: HttpConfig,
    client: reqwest::blocking::Client,
    limiter: InflightLimiter,
    api_key: Option<String>,
}

impl HttpBackend {
    /// Reads the credential from [`API_KEY_ENV`] if set.
    pub fn new(cfg: HttpConfig, limiter: InflightLimiter) -> Result<Self, BackendError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(Duration::from_millis(cfg.timeout_ms))
            .build()
            .map_err(|e| BackendError::Config(e.to_string()))?;
        let api_key = std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty());
        Ok(HttpBackend { cfg, client, limiter, api_key })
    }

    pub fn config(&self) -> &HttpConfig {
        &self.cfg
    }

    fn attempt(&self, body: &ChatRequest) -> Result<String, (TransportError, bool)> {
        let _permit = self.limiter.acquire();
        let mut req = self.client.post(&self.cfg.endpoint).json(body);
        if let Some(k) = &self.api_key {
            req = req.bearer_auth(k);
        }
        let resp = req.send().map_err(|e| {
            if e.is_timeout() {
                (TransportError::Timeout, true)
            } else {
                (TransportError::Connect { detail: e.to_string() }, true)
            }
        })?;
        let status = resp.status();
        if !status.is_success() {
            let code = status.as_u16();
            let body = resp.text().unwrap_or_default();
            let retry = status.is_server_error() || code == 408 || code == 429;
            return Err((TransportError::Status { code, body }, retry));
        }
        let bytes = resp.bytes().map_err(|e| {
            if e.is_timeout() {
                (TransportError::Timeout, true)
            } else {
                (TransportError::Malformed { detail: e.to_string() }, false)
            }
        })?;
        let parsed: ChatResponse = serde_json::from_slice(&bytes)
            .map_err(|e| (TransportError::Malformed { detail: e.to_string() }, false))?;
        Ok(parsed.text)
    }

    fn backoff(&self, attempt: u32) -> Duration {
        let ms = self.cfg.backoff_base_ms.saturating_mul(1u64 << attempt.min(16));
        Duration::from_millis(ms.min(self.cfg.backoff_max_ms))
    }
}

impl PlannerBackend for HttpBackend {
    fn descriptor(&self) -> BackendDescriptor {
        BackendDescriptor { name: "http".into(), model: self.cfg.model.clone(), deterministic: false }
    }

    fn propose(&mut self, bundle: &PromptBundle) -> Result<String, BackendError> {
        let body = ChatRequest::from_bundle(bundle, &self.cfg);
        let mut attempt = 0;
        loop {
            match self.attempt(&body) {
                Ok(text) => return Ok(text),
                Err((err, retry)) => {
                    if !retry || attempt >= self.cfg.retry_cap {
                        return Err(err.into());
                    }
                    thread::sleep(self.backoff(attempt));
                    attempt += 1;
                }
            }
        }
    }
}
