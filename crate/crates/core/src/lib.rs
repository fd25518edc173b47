//! Crafting-world simulator and curriculum-agent experiment harness.
//!
//! The crate is split along the agent loop:
//!
//! * [`craftworld`]: seeded grid world, recipe and tool tables, task executor.
//! * [`perception`]: cheat observations, rendered frames and the three
//!   visual encodings.
//! * [`curriculum`]: prompt assembly, response parsing, task matching and
//!   milestones.
//! * [`planner`]: backends that turn a prompt into response text (HTTP,
//!   deterministic oracle, transcript playback).
//! * [`harness`]: trial loop, experiments, transcripts, aggregation, reports.

pub mod craftworld;
pub mod curriculum;
pub mod harness;
pub mod perception;
pub mod planner;
