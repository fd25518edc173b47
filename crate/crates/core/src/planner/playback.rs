use serde::{Deserialize, Serialize};

use super::{BackendDescriptor, BackendError, PlannerBackend, TransportError};
use crate::curriculum::{PromptBundle, Purpose};

/// One recorded backend call.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaybackCall {
    pub purpose: Purpose,
    pub prompt_hash: String,
    /// `Err` when the recorded call failed at the transport level.
    pub response: Result<String, TransportError>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlaybackMode {
    /// A hash mismatch is an error.
    Strict,
    /// A hash mismatch is noted and the recorded reply is returned anyway.
    Lenient,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub call: usize,
    pub recorded: String,
    pub actual: String,
}

/// Replays recorded replies in order, checking each prompt hash.
#[derive(Debug, Clone)]
pub struct PlaybackBackend {
    calls: Vec<PlaybackCall>,
    cursor: usize,
    mode: PlaybackMode,
    mismatches: Vec<Mismatch>,
    model: String,
}

impl PlaybackBackend {
    pub fn new(calls: Vec<PlaybackCall>, mode: PlaybackMode, model: impl Into<String>) -> Self {
        PlaybackBackend { calls, cursor: 0, mode, mismatches: Vec::new(), model: model.into() }
    }

    pub fn cursor(&self) -> usize {
        self.cursor
    }

    pub fn mismatches(&self) -> &[Mismatch] {
        &self.mismatches
    }
}

impl PlannerBackend for PlaybackBackend {
    fn descriptor(&self) -> BackendDescriptor {
        BackendDescriptor { name: "playback".into(), model: self.model.clone(), deterministic: true }
    }

    fn propose(&mut self, bundle: &PromptBundle) -> Result<String, BackendError> {
        let call = self.cursor;
        let rec = self.calls.get(call).ok_or(BackendError::PlaybackExhausted { call: call + 1 })?;
        let actual = bundle.hash();
        if rec.prompt_hash != actual || rec.purpose != bundle.purpose {
            let m = Mismatch { call: call + 1, recorded: rec.prompt_hash.clone(), actual: actual.clone() };
            if self.mode == PlaybackMode::Strict {
                return Err(BackendError::PromptMismatch { call: m.call, recorded: m.recorded, actual: m.actual });
            }
            self.mismatches.push(m);
        }
        self.cursor += 1;
        rec.response.clone().map_err(BackendError::from)
    }
}
