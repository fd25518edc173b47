//! JSON-lines transcripts: one header line, one line per iteration, one
//! summary line.

use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use super::config::TrialConfig;
use super::trial::{IterationRecord, MilestoneHit, TrialRecord};
use crate::craftworld::{Item, RuleSet, WorldConfig};
use crate::planner::BackendDescriptor;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum TranscriptError {
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("line {line}: {source}")]
    Json { line: usize, source: serde_json::Error },
    #[error("transcript schema version {found}, expected {SCHEMA_VERSION}")]
    Version { found: u32 },
    #[error("transcript is missing its {0} line")]
    Missing(&'static str),
    #[error("line {line}: unexpected {kind} record")]
    Unexpected { line: usize, kind: &'static str },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Header {
    pub schema_version: u32,
    pub config: TrialConfig,
    pub rules_fingerprint: String,
    pub rules: RuleSet,
    pub world: WorldConfig,
    pub backend: BackendDescriptor,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub milestones: BTreeMap<Item, MilestoneHit>,
    pub reached_goal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub aborted: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Line {
    Header(Box<Header>),
    Iteration(Box<IterationRecord>),
    Summary(Summary),
}

/// A parsed transcript.
#[derive(Debug, Clone, PartialEq)]
pub struct Transcript {
    pub header: Header,
    pub record: TrialRecord,
}

pub fn write_transcript<W: Write>(
    out: &mut W,
    record: &TrialRecord,
    rules: &RuleSet,
    world: &WorldConfig,
) -> Result<(), TranscriptError> {
    let header = Header {
        schema_version: SCHEMA_VERSION,
        config: record.config.clone(),
        rules_fingerprint: record.rules_fingerprint.clone(),
        rules: rules.clone(),
        world: world.clone(),
        backend: record.backend.clone(),
    };
    let mut put = |line: &Line| -> Result<(), TranscriptError> {
        serde_json::to_writer(&mut *out, line).map_err(|e| TranscriptError::Json { line: 0, source: e })?;
        out.write_all(b"\n")?;
        Ok(())
    };
    put(&Line::Header(Box::new(header)))?;
    for it in &record.iterations {
        put(&Line::Iteration(Box::new(it.clone())))?;
    }
    put(&Line::Summary(Summary {
        milestones: record.milestones.clone(),
        reached_goal: record.reached_goal,
        aborted: record.aborted.clone(),
    }))?;
    out.flush()?;
    Ok(())
}

pub fn transcript_string(record: &TrialRecord, rules: &RuleSet, world: &WorldConfig) -> String {
    let mut buf = Vec::new();
    write_transcript(&mut buf, record, rules, world).expect("in-memory write");
    String::from_utf8(buf).expect("json is utf-8")
}

pub fn read_transcript<R: BufRead>(input: R) -> Result<Transcript, TranscriptError> {
    let mut header = None;
    let mut iterations = Vec::new();
    let mut summary = None;
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let n = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: Line = serde_json::from_str(&line).map_err(|e| TranscriptError::Json { line: n, source: e })?;
        match parsed {
            Line::Header(h) => {
                if header.is_some() {
                    return Err(TranscriptError::Unexpected { line: n, kind: "header" });
                }
                if h.schema_version != SCHEMA_VERSION {
                    return Err(TranscriptError::Version { found: h.schema_version });
                }
                header = Some(*h);
            }
            Line::Iteration(it) => {
                if header.is_none() || summary.is_some() {
                    return Err(TranscriptError::Unexpected { line: n, kind: "iteration" });
                }
                iterations.push(*it);
            }
            Line::Summary(s) => {
                if header.is_none() || summary.is_some() {
                    return Err(TranscriptError::Unexpected { line: n, kind: "summary" });
                }
                summary = Some(s);
            }
        }
    }
    let header = header.ok_or(TranscriptError::Missing("header"))?;
    let summary = summary.ok_or(TranscriptError::Missing("summary"))?;
    let record = TrialRecord {
        config: header.config.clone(),
        rules_fingerprint: header.rules_fingerprint.clone(),
        backend: header.backend.clone(),
        iterations,
        milestones: summary.milestones,
        reached_goal: summary.reached_goal,
        aborted: summary.aborted,
    };
    Ok(Transcript { header, record })
}

/// Transcript lines with wall-clock fields removed, for byte comparison.
pub fn canonical_lines(text: &str) -> Vec<String> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| match serde_json::from_str::<Value>(l) {
            Ok(mut v) => {
                if let Some(o) = v.as_object_mut() {
                    o.remove("timestamps");
                }
                v.to_string()
            }
            Err(_) => l.to_string(),
        })
        .collect()
}

/// File name used for a trial's transcript.
pub fn transcript_file_name(record: &TrialRecord) -> String {
    format!("arm-{}_seed-{}.jsonl", record.config.arm, record.config.seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::config::Arm;
    use crate::harness::trial::{run_trial, TrialEnv};
    use crate::planner::OracleBackend;

    fn sample() -> (TrialRecord, TrialEnv) {
        let env = TrialEnv::default();
        let cfg = TrialConfig { seed: 5, max_iterations: 6, ..TrialConfig::for_arm(Arm::ElementExtraction) };
        (run_trial(&cfg, &env, &mut OracleBackend::new(env.rules.clone())), env)
    }

    #[test]
    fn round_trip() {
        let (rec, env) = sample();
        let text = transcript_string(&rec, &env.rules, &env.world);
        assert_eq!(text.lines().count(), rec.iterations.len() + 2);
        let t = read_transcript(text.as_bytes()).unwrap();
        assert_eq!(t.record, rec);
        assert_eq!(t.header.rules, *env.rules);
    }

    #[test]
    fn canonical_form_drops_timestamps() {
        let (mut rec, env) = sample();
        let a = canonical_lines(&transcript_string(&rec, &env.rules, &env.world));
        rec.iterations[0].timestamps.started_ms += 1000;
        let b = canonical_lines(&transcript_string(&rec, &env.rules, &env.world));
        assert_eq!(a, b);
        assert!(!a[1].contains("timestamps"));
    }

    #[test]
    fn rejects_bad_structure() {
        let (rec, env) = sample();
        let text = transcript_string(&rec, &env.rules, &env.world);
        let no_summary: String = text.lines().take(2).map(|l| format!("{l}\n")).collect();
        assert!(matches!(read_transcript(no_summary.as_bytes()), Err(TranscriptError::Missing("summary"))));
        let bumped = text.replacen("\"schema_version\":1", "\"schema_version\":9", 1);
        assert!(matches!(read_transcript(bumped.as_bytes()), Err(TranscriptError::Version { found: 9 })));
        assert!(matches!(read_transcript("{not json".as_bytes()), Err(TranscriptError::Json { line: 1, .. })));
    }
}
