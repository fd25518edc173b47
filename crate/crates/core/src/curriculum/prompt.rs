use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::response::PromptMode;
use super::text::render_task;
use crate::craftworld::{Item, OutcomeReason, Task, Verb, INVENTORY_SLOTS};
use crate::perception::{distinct_by_distance, ElementReport, Observation, VisualFrame};

pub const TEMPLATE_VERSION: &str = "curriculum-v1";

const CURRICULUM_TEMPLATE: &str = include_str!("../../assets/prompts/curriculum.txt");
const PREDICTIVE_BLOCK: &str = include_str!("../../assets/prompts/predictive.txt");
const FREE_DESCRIPTION: &str = include_str!("../../assets/prompts/free_description.txt");

/// Vision prompt for the free-description encoder, as shipped.
pub fn free_description_prompt() -> &'static str {
    FREE_DESCRIPTION.strip_suffix('\n').unwrap_or(FREE_DESCRIPTION)
}

pub fn system_text(mode: PromptMode) -> String {
    let base = CURRICULUM_TEMPLATE.trim_end();
    match mode {
        PromptMode::Conventional => base.to_string(),
        PromptMode::Predictive => format!("{base}\n{}", PREDICTIVE_BLOCK.trim_end()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Purpose {
    Curriculum,
    FreeDescription,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistoryEntry {
    pub task: Task,
    pub success: bool,
    pub reason: OutcomeReason,
}

/// Every executed task so far, in order.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TaskHistory {
    pub entries: Vec<HistoryEntry>,
}

impl TaskHistory {
    pub fn push(&mut self, task: Task, success: bool, reason: OutcomeReason) {
        self.entries.push(HistoryEntry { task, success, reason });
    }

    pub fn completed(&self) -> impl Iterator<Item = &Task> {
        self.entries.iter().filter(|e| e.success).map(|e| &e.task)
    }

    pub fn failed(&self) -> impl Iterator<Item = &Task> {
        self.entries.iter().filter(|e| !e.success).map(|e| &e.task)
    }

    pub fn last(&self) -> Option<&HistoryEntry> {
        self.entries.last()
    }
}

/// Encoded visual input for one iteration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum VisionInput {
    Elements { report: ElementReport },
    /// `text` is `None` when the encoder call failed.
    Free { text: Option<String> },
    Direct { frame: VisualFrame },
}

/// Structured copy of what the prompt text says, for offline planners.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptContext {
    pub observation: Observation,
    pub history: TaskHistory,
    pub goal: Item,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptBundle {
    pub purpose: Purpose,
    pub mode: PromptMode,
    pub template_version: String,
    pub system_text: String,
    pub user_text: String,
    pub attachment: Option<VisualFrame>,
    pub context: Option<PromptContext>,
}

impl PromptBundle {
    /// sha256 over the canonical JSON form.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("bundle serializes");
        hex::encode(Sha256::digest(bytes))
    }

    /// Bundle for the free-description encoder.
    pub fn free_description(frame: &VisualFrame, goal: Item) -> PromptBundle {
        let prompt = free_description_prompt();
        let user_text = if goal == Item::GoldenPickaxe {
            prompt.to_string()
        } else {
            // "Obtain an iron pickaxe." -> "an iron pickaxe"
            let sentence = render_task(&Task::new(Verb::Obtain, goal, 1));
            let phrase = sentence["Obtain ".len()..].trim_end_matches('.');
            prompt.replace("a gold pickaxe", phrase)
        };
        PromptBundle {
            purpose: Purpose::FreeDescription,
            mode: PromptMode::Conventional,
            template_version: TEMPLATE_VERSION.to_string(),
            system_text: String::new(),
            user_text,
            attachment: Some(frame.clone()),
            context: None,
        }
    }
}

fn task_list<'a>(tasks: impl Iterator<Item = &'a Task>) -> String {
    let v: Vec<String> = tasks.map(|t| render_task(t).trim_end_matches('.').to_string()).collect();
    if v.is_empty() {
        "None".to_string()
    } else {
        v.join(", ")
    }
}

/// Dict-style dump: `{'stick': 8, 'spruce_log': 5}`.
pub fn render_inventory(obs: &Observation) -> String {
    let n = obs.inventory.slots();
    if n == 0 {
        return format!("Inventory (0/{INVENTORY_SLOTS}): Empty");
    }
    let body: Vec<String> = obs.inventory.iter().map(|(i, c)| format!("'{}': {}", i.name(), c)).collect();
    format!("Inventory ({n}/{INVENTORY_SLOTS}): {{{}}}", body.join(", "))
}

fn observation_lines(obs: &Observation) -> Vec<String> {
    let rel = |p: crate::craftworld::Pos| (p.x - obs.position.x, p.y - obs.position.y);
    let blocks = distinct_by_distance(obs.nearby_blocks.iter().map(|(b, p)| (b.name(), rel(*p))));
    let ents = distinct_by_distance(obs.nearby_entities.iter().map(|e| (e.kind.name(), rel(e.pos))));
    let placed = obs
        .placed_stations
        .iter()
        .map(|(b, p)| format!("{} at x={}, y={}", b.name(), p.x, p.y))
        .collect::<Vec<_>>()
        .join(", ");
    let or_none = |s: String| if s.is_empty() { "None".to_string() } else { s };
    vec![
        format!("Biome: {}", obs.biome.name()),
        format!("Time: {}", obs.time_of_day.name()),
        format!("Nearby blocks: {}", or_none(blocks)),
        format!("Nearby entities: {}", or_none(ents)),
        format!("Placed stations: {}", or_none(placed)),
        format!("Health: {}/20", obs.health),
        format!("Hunger: {}/20", obs.hunger),
        format!("Position: x={}, y={}", obs.position.x, obs.position.y),
        format!("Equipment: {}", obs.equipment.map_or("none", |i| i.name())),
        render_inventory(obs),
    ]
}

/// Caps free-description text at `cap` characters.
pub fn condense(text: &str, cap: usize) -> String {
    let t = text.trim();
    match t.char_indices().nth(cap) {
        Some((i, _)) => t[..i].to_string(),
        None => t.to_string(),
    }
}

pub fn build_prompt(
    obs: &Observation,
    vision: Option<&VisionInput>,
    history: &TaskHistory,
    goal: Item,
    mode: PromptMode,
) -> PromptBundle {
    let mut lines = observation_lines(obs);
    lines.push(format!("Completed tasks so far: {}", task_list(history.completed())));
    lines.push(format!("Failed tasks that are too hard: {}", task_list(history.failed())));
    let mut attachment = None;
    match vision {
        None => {}
        Some(VisionInput::Elements { report }) => {
            lines.push("Visual information (read from the play screen):".to_string());
            lines.extend(report.lines().into_iter().map(|l| format!("  {l}")));
        }
        Some(VisionInput::Free { text }) => {
            lines.push("Visual information (description of the play screen):".to_string());
            lines.push(format!("  {}", text.as_deref().map_or("N/A", str::trim)));
        }
        Some(VisionInput::Direct { frame }) => {
            lines.push("Visual information: the current play screen is attached.".to_string());
            attachment = Some(frame.clone());
        }
    }
    lines.push(format!("Final goal: {}", render_task(&Task::new(Verb::Obtain, goal, 1))));
    PromptBundle {
        purpose: Purpose::Curriculum,
        mode,
        template_version: TEMPLATE_VERSION.to_string(),
        system_text: system_text(mode),
        user_text: lines.join("\n"),
        attachment,
        context: Some(PromptContext { observation: obs.clone(), history: history.clone(), goal }),
    }
}
