use std::fmt;

use serde::{Deserialize, Serialize};

use super::item::Item;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verb {
    Obtain,
    Mine,
    Craft,
    Smelt,
    Place,
    Explore,
}

impl Verb {
    pub const ALL: [Verb; 6] = [Verb::Obtain, Verb::Mine, Verb::Craft, Verb::Smelt, Verb::Place, Verb::Explore];

    pub fn name(self) -> &'static str {
        match self {
            Verb::Obtain => "obtain",
            Verb::Mine => "mine",
            Verb::Craft => "craft",
            Verb::Smelt => "smelt",
            Verb::Place => "place",
            Verb::Explore => "explore",
        }
    }

    pub fn from_name(s: &str) -> Option<Verb> {
        Verb::ALL.into_iter().find(|v| v.name() == s)
    }
}

/// A canonical curriculum task: verb, item from the closed vocabulary, count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Task {
    pub verb: Verb,
    pub item: Item,
    pub count: u32,
}

impl Task {
    pub fn new(verb: Verb, item: Item, count: u32) -> Self {
        debug_assert!(count >= 1);
        Task { verb, item, count: count.max(1) }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({}, {})", self.verb.name(), self.item, self.count)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeReason {
    Completed,
    NoStationPlaced,
    MissingIngredients,
    ToolTierTooLow,
    TargetNotFound,
    StepBudgetExhausted,
}

impl OutcomeReason {
    pub fn name(self) -> &'static str {
        match self {
            OutcomeReason::Completed => "completed",
            OutcomeReason::NoStationPlaced => "no_station_placed",
            OutcomeReason::MissingIngredients => "missing_ingredients",
            OutcomeReason::ToolTierTooLow => "tool_tier_too_low",
            OutcomeReason::TargetNotFound => "target_not_found",
            OutcomeReason::StepBudgetExhausted => "step_budget_exhausted",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskOutcome {
    pub success: bool,
    pub reason: OutcomeReason,
    pub steps_used: u32,
}

impl TaskOutcome {
    pub fn new(reason: OutcomeReason, steps_used: u32) -> Self {
        TaskOutcome { success: reason == OutcomeReason::Completed, reason, steps_used }
    }
}
