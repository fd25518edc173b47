//! Re-runs a transcript against recorded replies and reports where the
//! new run departs from the old one.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::transcript::Transcript;
use super::trial::{run_trial_from, IterationRecord, TrialEnv, TrialRecord};
use crate::craftworld::{generate_world, RuleSet};
use crate::planner::{Mismatch, PlaybackBackend, PlaybackMode};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Divergence {
    /// 0 for trial-level fields.
    pub iteration: u32,
    pub field: String,
    pub recorded: String,
    pub replayed: String,
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "iteration {}: {} recorded {} replayed {}", self.iteration, self.field, self.recorded, self.replayed)
    }
}

#[derive(Debug, Clone)]
pub struct ReplayReport {
    pub record: TrialRecord,
    pub divergences: Vec<Divergence>,
    /// Human-readable differences between the recorded and current rules.
    pub rule_diff: Vec<String>,
    /// Hash mismatches tolerated in lenient mode.
    pub prompt_mismatches: Vec<Mismatch>,
}

impl ReplayReport {
    pub fn diverged(&self) -> bool {
        !self.divergences.is_empty()
    }

    pub fn first_divergence(&self) -> Option<&Divergence> {
        self.divergences.first()
    }
}

fn show<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).unwrap_or_default()
}

/// Lists rule entries that differ between two tables.
pub fn rule_diff(recorded: &RuleSet, current: &RuleSet) -> Vec<String> {
    let mut out = Vec::new();
    for r in &recorded.recipes {
        match current.recipes.iter().find(|c| c.id == r.id) {
            None => out.push(format!("recipe {} removed", r.id)),
            Some(c) if c != r => out.push(format!("recipe {} changed: {} -> {}", r.id, show(r), show(c))),
            _ => {}
        }
    }
    for c in &current.recipes {
        if !recorded.recipes.iter().any(|r| r.id == c.id) {
            out.push(format!("recipe {} added", c.id));
        }
    }
    for r in &recorded.mining {
        match current.mining.iter().find(|c| c.block == r.block) {
            None => out.push(format!("mining rule for {} removed", r.block)),
            Some(c) if c != r => out.push(format!("mining rule for {} changed: {} -> {}", r.block, show(r), show(c))),
            _ => {}
        }
    }
    for c in &current.mining {
        if !recorded.mining.iter().any(|r| r.block == c.block) {
            out.push(format!("mining rule for {} added", c.block));
        }
    }
    if recorded.tools != current.tools {
        out.push(format!("tool tiers changed: {} -> {}", show(&recorded.tools), show(&current.tools)));
    }
    if recorded.fuels != current.fuels {
        out.push(format!("fuels changed: {} -> {}", show(&recorded.fuels), show(&current.fuels)));
    }
    out
}

fn compare_iteration(a: &IterationRecord, b: &IterationRecord, out: &mut Vec<Divergence>) {
    let mut diff = |field: &str, x: String, y: String| {
        if x != y {
            out.push(Divergence { iteration: a.iteration, field: field.into(), recorded: x, replayed: y });
        }
    };
    diff("prompt_hash", a.prompt_hash.clone(), b.prompt_hash.clone());
    diff("adopted", show(&a.adopted), show(&b.adopted));
    diff("outcome", show(&a.outcome), show(&b.outcome));
    diff("milestones", show(&a.milestones), show(&b.milestones));
    diff("backend_error", show(&a.backend_error), show(&b.backend_error));
}

/// Replays a generated-world transcript under `rules`.
pub fn replay(transcript: &Transcript, rules: &RuleSet, mode: PlaybackMode) -> ReplayReport {
    let recorded = &transcript.record;
    let env = TrialEnv { rules: std::sync::Arc::new(rules.clone()), world: transcript.header.world.clone() };
    let mut backend = PlaybackBackend::new(recorded.playback_calls(), mode, recorded.backend.model.clone());
    let mut divergences = Vec::new();

    let record = match generate_world(recorded.config.seed, &env.world) {
        Ok(world) => run_trial_from(&recorded.config, &env, &mut backend, world),
        Err(e) => {
            divergences.push(Divergence {
                iteration: 0,
                field: "world".into(),
                recorded: "generated".into(),
                replayed: e.to_string(),
            });
            recorded.clone()
        }
    };

    let n = recorded.iterations.len().max(record.iterations.len());
    for i in 0..n {
        match (recorded.iterations.get(i), record.iterations.get(i)) {
            (Some(a), Some(b)) => compare_iteration(a, b, &mut divergences),
            (Some(a), None) => divergences.push(Divergence {
                iteration: a.iteration,
                field: "iteration".into(),
                recorded: "present".into(),
                replayed: "missing".into(),
            }),
            (None, Some(b)) => divergences.push(Divergence {
                iteration: b.iteration,
                field: "iteration".into(),
                recorded: "missing".into(),
                replayed: "present".into(),
            }),
            (None, None) => {}
        }
    }
    if recorded.milestones != record.milestones {
        divergences.push(Divergence {
            iteration: 0,
            field: "milestones".into(),
            recorded: show(&recorded.milestones),
            replayed: show(&record.milestones),
        });
    }

    let mut diff = rule_diff(&transcript.header.rules, rules);
    if diff.is_empty() && transcript.header.rules_fingerprint != rules.fingerprint() {
        diff.push("rule fingerprint differs".into());
    }
    ReplayReport { record, divergences, rule_diff: diff, prompt_mismatches: backend.mismatches().to_vec() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::craftworld::{Item, Stack};
    use crate::harness::config::{Arm, TrialConfig};
    use crate::harness::transcript::{read_transcript, transcript_string};
    use crate::harness::trial::run_trial;
    use crate::planner::OracleBackend;

    fn recorded(arm: Arm) -> (Transcript, RuleSet) {
        let env = TrialEnv::default();
        let cfg = TrialConfig { seed: 9, max_iterations: 12, ..TrialConfig::for_arm(arm) };
        let rec = run_trial(&cfg, &env, &mut OracleBackend::new(env.rules.clone()));
        let text = transcript_string(&rec, &env.rules, &env.world);
        (read_transcript(text.as_bytes()).unwrap(), (*env.rules).clone())
    }

    #[test]
    fn faithful_replay_matches() {
        for arm in [Arm::Predictive, Arm::FreeDescription] {
            let (t, rules) = recorded(arm);
            let r = replay(&t, &rules, PlaybackMode::Strict);
            assert!(!r.diverged(), "{:?}", r.divergences);
            assert!(r.rule_diff.is_empty());
        }
    }

    #[test]
    fn edited_adopted_task_is_located() {
        let (mut t, rules) = recorded(Arm::Conventional);
        let k = 3;
        let it = &mut t.record.iterations[k];
        let mut task = it.adopted.unwrap();
        task.item = if task.item == Item::Furnace { Item::Stick } else { Item::Furnace };
        it.adopted = Some(task);
        let r = replay(&t, &rules, PlaybackMode::Strict);
        let d = r.first_divergence().unwrap();
        assert_eq!((d.iteration, d.field.as_str()), (k as u32 + 1, "adopted"));
    }

    #[test]
    fn changed_rules_are_diagnosed() {
        let (t, mut rules) = recorded(Arm::Predictive);
        let id = rules.recipes.iter().find(|r| r.produces(Item::Stick)).unwrap().id.clone();
        let stick = rules.recipes.iter_mut().find(|r| r.id == id).unwrap();
        stick.outputs = vec![Stack { item: Item::Stick, count: 1 }];
        let r = replay(&t, &rules, PlaybackMode::Strict);
        assert!(r.diverged());
        assert!(r.rule_diff.iter().any(|d| d.contains(&id)), "{:?}", r.rule_diff);
    }

    #[test]
    fn lenient_mode_collects_mismatches() {
        let (mut t, rules) = recorded(Arm::NoImage);
        for it in &mut t.record.iterations {
            for c in &mut it.calls {
                c.prompt_hash = "0".repeat(64);
            }
        }
        let strict = replay(&t, &rules, PlaybackMode::Strict);
        assert!(strict.diverged());
        assert_eq!(strict.record.iterations.len(), 1);
        let lenient = replay(&t, &rules, PlaybackMode::Lenient);
        assert!(!lenient.prompt_mismatches.is_empty());
        assert_eq!(lenient.record.iterations.len(), t.record.iterations.len());
    }
}
