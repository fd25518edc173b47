use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use super::config::{TrialConfig, VisionMode};
use crate::craftworld::{generate_world, Executor, Item, RuleSet, Task, TaskOutcome, WorldConfig, WorldState};
use crate::curriculum::{
    adopt, build_prompt, condense, parse_planner_output, DualProposal, MilestoneTracker, ParseError, PromptBundle,
    Purpose, TaskHistory, VisionInput, MILESTONES,
};
use crate::perception::{encode_elements, observe_cheat, render_frame_with, VisionRecord};
use crate::planner::{BackendDescriptor, BackendError, PlannerBackend, PlaybackCall, TransportError};

/// Shared, read-only inputs of a trial.
#[derive(Debug, Clone)]
pub struct TrialEnv {
    pub rules: Arc<RuleSet>,
    pub world: WorldConfig,
}

impl Default for TrialEnv {
    fn default() -> Self {
        TrialEnv { rules: Arc::new(RuleSet::default()), world: WorldConfig::default() }
    }
}

/// One request sent to the backend.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CallRecord {
    pub purpose: Purpose,
    pub prompt_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub response: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transport_error: Option<TransportError>,
    /// Set for failures that are not transport errors (playback issues).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl CallRecord {
    fn from_result(bundle: &PromptBundle, r: &Result<String, BackendError>) -> Self {
        let mut rec = CallRecord {
            purpose: bundle.purpose,
            prompt_hash: bundle.hash(),
            response: None,
            transport_error: None,
            error: None,
        };
        match r {
            Ok(t) => rec.response = Some(t.clone()),
            Err(BackendError::Transport(t)) => rec.transport_error = Some(t.clone()),
            Err(e) => rec.error = Some(e.to_string()),
        }
        rec
    }

    /// `None` when the call never produced a replayable result.
    pub fn to_playback(&self) -> Option<PlaybackCall> {
        let response = match (&self.response, &self.transport_error) {
            (Some(t), _) => Ok(t.clone()),
            (None, Some(e)) => Err(e.clone()),
            (None, None) => return None,
        };
        Some(PlaybackCall { purpose: self.purpose, prompt_hash: self.prompt_hash.clone(), response })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Timestamps {
    pub started_ms: u64,
    pub finished_ms: u64,
}

fn now_ms() -> u64 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis() as u64).unwrap_or(0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterationRecord {
    pub iteration: u32,
    pub prompt_hash: String,
    pub bundle: PromptBundle,
    pub calls: Vec<CallRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vision: Option<VisionRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub raw_response: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parsed: Option<DualProposal>,
    /// Parse failures in attempt order.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub parse_errors: Vec<ParseError>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub adopted: Option<Task>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<TaskOutcome>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub milestones: Vec<Item>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub backend_error: Option<String>,
    pub timestamps: Timestamps,
}

impl IterationRecord {
    /// Counted as a failure when nothing was executed or the task failed.
    pub fn succeeded(&self) -> bool {
        self.outcome.map(|o| o.success).unwrap_or(false)
    }
}

/// When a milestone was first reached.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MilestoneHit {
    Iteration(u32),
    /// Not reached within the iteration cap (or before an abort).
    Censored,
    /// Already held in the starting state.
    Preheld,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub config: TrialConfig,
    pub rules_fingerprint: String,
    pub backend: BackendDescriptor,
    pub iterations: Vec<IterationRecord>,
    pub milestones: BTreeMap<Item, MilestoneHit>,
    pub reached_goal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aborted: Option<String>,
}

impl TrialRecord {
    pub fn first_hit(&self, m: Item) -> Option<u32> {
        match self.milestones.get(&m) {
            Some(MilestoneHit::Iteration(i)) => Some(*i),
            _ => None,
        }
    }

    /// Every backend call in order, for playback.
    pub fn playback_calls(&self) -> Vec<PlaybackCall> {
        self.iterations.iter().flat_map(|it| it.calls.iter().filter_map(CallRecord::to_playback)).collect()
    }

    /// Proposals in iteration order; `None` where nothing parsed.
    pub fn proposals(&self) -> impl Iterator<Item = Option<&DualProposal>> {
        self.iterations.iter().map(|it| it.parsed.as_ref())
    }

    pub fn vision_records(&self) -> impl Iterator<Item = &VisionRecord> {
        self.iterations.iter().filter_map(|it| it.vision.as_ref())
    }
}

/// Generates the world from `cfg.seed` and runs one trial.
pub fn run_trial(cfg: &TrialConfig, env: &TrialEnv, backend: &mut dyn PlannerBackend) -> TrialRecord {
    match generate_world(cfg.seed, &env.world) {
        Ok(world) => run_trial_from(cfg, env, backend, world),
        Err(e) => TrialRecord {
            config: cfg.clone(),
            rules_fingerprint: env.rules.fingerprint(),
            backend: backend.descriptor(),
            iterations: Vec::new(),
            milestones: MILESTONES.iter().map(|m| (*m, MilestoneHit::Censored)).collect(),
            reached_goal: false,
            aborted: Some(format!("world generation: {e}")),
        },
    }
}

/// Runs one trial from a given starting state.
pub fn run_trial_from(
    cfg: &TrialConfig,
    env: &TrialEnv,
    backend: &mut dyn PlannerBackend,
    start: WorldState,
) -> TrialRecord {
    let rules = &*env.rules;
    let executor = Executor::new(cfg.exec);
    let mut state = start;
    let mut history = TaskHistory::default();
    let mut tracker = MilestoneTracker::new(&MILESTONES);
    let preheld = tracker.observe(&state, 0);
    let mut iterations = Vec::new();
    let mut aborted = None;
    let request_mode = cfg.request_mode();

    for iteration in 1..=cfg.max_iterations {
        if state.inventory.count(cfg.goal) > 0 {
            break;
        }
        let started_ms = now_ms();
        let obs = observe_cheat(&state);
        let mut calls = Vec::new();

        let (vision_input, vision) = match cfg.vision_mode {
            VisionMode::None => (None, None),
            VisionMode::Direct => {
                let frame = render_frame_with(&state, cfg.window, &cfg.render);
                (Some(VisionInput::Direct { frame }), Some(VisionRecord::Direct))
            }
            VisionMode::ElementExtraction => {
                let report = encode_elements(&render_frame_with(&state, cfg.window, &cfg.render));
                (Some(VisionInput::Elements { report: report.clone() }), Some(VisionRecord::Elements { report }))
            }
            VisionMode::FreeDescription => {
                let frame = render_frame_with(&state, cfg.window, &cfg.render);
                let req = PromptBundle::free_description(&frame, cfg.goal);
                let r = backend.propose(&req);
                calls.push(CallRecord::from_result(&req, &r));
                // A failed description leaves the vision field empty; the
                // iteration itself goes on.
                let text = r.ok().map(|t| condense(&t, cfg.free_text_cap));
                (Some(VisionInput::Free { text: text.clone() }), Some(VisionRecord::Free { text }))
            }
        };

        let bundle = build_prompt(&obs, vision_input.as_ref(), &history, cfg.goal, request_mode);
        let mut rec = IterationRecord {
            iteration,
            prompt_hash: bundle.hash(),
            bundle: bundle.clone(),
            calls,
            vision,
            raw_response: None,
            parsed: None,
            parse_errors: Vec::new(),
            adopted: None,
            outcome: None,
            milestones: Vec::new(),
            backend_error: None,
            timestamps: Timestamps { started_ms, finished_ms: 0 },
        };

        for _ in 0..=cfg.parse_retries {
            let r = backend.propose(&bundle);
            rec.calls.push(CallRecord::from_result(&bundle, &r));
            match r {
                Ok(text) => {
                    let parsed = parse_planner_output(&text, request_mode);
                    rec.raw_response = Some(text);
                    match parsed {
                        Ok(d) => {
                            rec.parsed = Some(d);
                            break;
                        }
                        Err(e) => rec.parse_errors.push(e),
                    }
                }
                Err(e) => {
                    rec.backend_error = Some(e.to_string());
                    break;
                }
            }
        }

        if let Some(err) = &rec.backend_error {
            aborted = Some(format!("iteration {iteration}: {err}"));
            rec.timestamps.finished_ms = now_ms();
            iterations.push(rec);
            break;
        }

        if let Some(dual) = &rec.parsed {
            match adopt(dual, cfg.prompt_mode) {
                Ok(p) => {
                    let outcome = executor.execute(rules, &mut state, &p.task, cfg.step_budget);
                    history.push(p.task, outcome.success, outcome.reason);
                    rec.adopted = Some(p.task);
                    rec.outcome = Some(outcome);
                    rec.milestones = tracker.observe(&state, iteration);
                }
                Err(_) => rec.parse_errors.push(ParseError::MissingResponse2),
            }
        }
        rec.timestamps.finished_ms = now_ms();
        iterations.push(rec);
    }

    let milestones = MILESTONES
        .iter()
        .map(|m| {
            let hit = if preheld.contains(m) {
                MilestoneHit::Preheld
            } else {
                tracker.first_hit.get(m).map_or(MilestoneHit::Censored, |i| MilestoneHit::Iteration(*i))
            };
            (*m, hit)
        })
        .collect();

    TrialRecord {
        config: cfg.clone(),
        rules_fingerprint: rules.fingerprint(),
        backend: backend.descriptor(),
        iterations,
        milestones,
        reached_goal: state.inventory.count(cfg.goal) > 0,
        aborted,
    }
}
