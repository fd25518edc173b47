//! Trial loop, parallel experiments, transcripts, reports and replay.

mod config;
mod experiment;
mod replay;
mod report;
mod transcript;
mod trial;

pub use config::{Arm, BackendKind, ConfigError, TrialConfig, VisionMode};
pub use experiment::{expand_trials, run_experiment, BackendFactory};
pub use replay::{replay, rule_diff, Divergence, ReplayReport};
pub use report::{
    aggregate, aggregate_arms, footnotes, from_csv, render_text, to_csv, to_json, ArmSummary, MilestoneCell,
    MilestoneTable, ReportError, EMPTY_MEAN,
};
pub use transcript::{
    canonical_lines, read_transcript, transcript_file_name, transcript_string, write_transcript, Header, Line,
    Summary, Transcript, TranscriptError, SCHEMA_VERSION,
};
pub use trial::{
    run_trial, run_trial_from, CallRecord, IterationRecord, MilestoneHit, Timestamps, TrialEnv, TrialRecord,
};
