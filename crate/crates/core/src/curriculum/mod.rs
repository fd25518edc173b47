//! Prompt assembly, reply parsing, task matching and milestone tracking.

mod matching;
mod milestone;
mod prompt;
mod response;
mod text;

pub use matching::{item_class, match_rate, task_match, verb_class, MatchError, MatchStats};
pub use milestone::{milestone_check, MilestoneTracker, MILESTONES, TOOL_CHAIN};
pub use prompt::{
    build_prompt, condense, free_description_prompt, render_inventory, system_text, HistoryEntry,
    PromptBundle, PromptContext, Purpose, TaskHistory, VisionInput, TEMPLATE_VERSION,
};
pub use response::{
    adopt, parse_planner_output, render_dual, render_predictive, render_proposal, AdoptError, DualProposal,
    ParseError, PlanStep, PredictionPlan, PredictiveProposal, PromptMode, TaskProposal,
};
pub use text::{item_from_words, parse_task, render_task, TaskTextError};
