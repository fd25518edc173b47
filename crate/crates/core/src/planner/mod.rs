//! Backends that turn a prompt bundle into reply text.

mod http;
mod oracle;
mod playback;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curriculum::PromptBundle;

pub use http::{
    ChatMessage, ChatRequest, ChatResponse, HttpBackend, HttpConfig, InflightLimiter, Role, Usage, API_KEY_ENV,
};
pub use oracle::{
    conventional_proposal, oracle_conventional, oracle_predictive, predictive_plan, predictive_proposal,
    OracleBackend, PlanError,
};
pub use playback::{Mismatch, PlaybackBackend, PlaybackCall, PlaybackMode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BackendDescriptor {
    pub name: String,
    pub model: String,
    pub deterministic: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransportError {
    #[error("request timed out")]
    Timeout,
    #[error("server answered {code}")]
    Status { code: u16, body: String },
    #[error("malformed response body: {detail}")]
    Malformed { detail: String },
    #[error("connection failed: {detail}")]
    Connect { detail: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BackendError {
    #[error("transport: {0}")]
    Transport(#[from] TransportError),
    #[error("transcript exhausted at call {call}")]
    PlaybackExhausted { call: usize },
    #[error("prompt hash mismatch at call {call}: recorded {recorded}, got {actual}")]
    PromptMismatch { call: usize, recorded: String, actual: String },
    #[error("backend cannot serve this request: {0}")]
    Unsupported(String),
    #[error("backend configuration: {0}")]
    Config(String),
}

pub trait PlannerBackend: Send {
    fn descriptor(&self) -> BackendDescriptor;
    fn propose(&mut self, bundle: &PromptBundle) -> Result<String, BackendError>;
}

impl<B: PlannerBackend + ?Sized> PlannerBackend for Box<B> {
    fn descriptor(&self) -> BackendDescriptor {
        (**self).descriptor()
    }

    fn propose(&mut self, bundle: &PromptBundle) -> Result<String, BackendError> {
        (**self).propose(bundle)
    }
}
