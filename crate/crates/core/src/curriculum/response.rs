//! Planner response template and its parser.
//!
//! ```text
//! Response1:
//! Reasoning: <free text, may span lines>
//! Task: <task sentence>
//! Response2:
//! Reasoning: <free text>
//! Steps:
//! 1. <task sentence>
//!    Predicted State: <text>
//!    Risks: <text>
//! Task: <task sentence>
//! ```
//!
//! Labels match case-insensitively and ignore surrounding whitespace and
//! markdown emphasis. Text with no `Response1:` label is read as Response1.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::text::{parse_task, render_task, TaskTextError};
use crate::craftworld::Task;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PromptMode {
    /// Asks for Response1 only.
    Conventional,
    /// Asks for Response1 and Response2.
    Predictive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskProposal {
    pub reasoning: String,
    pub task: Task,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanStep {
    pub text: String,
    /// `None` when the step sentence is outside the task grammar.
    pub task: Option<Task>,
    pub predicted_state: String,
    pub risks: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct PredictionPlan {
    pub steps: Vec<PlanStep>,
}

impl PredictionPlan {
    pub fn tasks(&self) -> impl Iterator<Item = Task> + '_ {
        self.steps.iter().filter_map(|s| s.task)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PredictiveProposal {
    pub proposal: TaskProposal,
    pub plan: PredictionPlan,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DualProposal {
    pub response1: TaskProposal,
    pub response2: Option<PredictiveProposal>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum ParseError {
    #[error("{section}: no Task line")]
    MissingTask { section: String },
    #[error("{section}: unknown verb {verb:?}")]
    UnknownVerb { section: String, verb: String },
    #[error("{section}: unknown item {item:?}")]
    UnknownItem { section: String, item: String },
    #[error("{section}: bad task text {text:?}")]
    BadTask { section: String, text: String },
    #[error("Response2 missing from a predictive-mode reply")]
    MissingResponse2,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AdoptError {
    #[error("predictive adoption needs Response2")]
    MissingResponse2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Label {
    Response1,
    Response2,
    Reasoning,
    Task,
    Steps,
    PredictedState,
    Risks,
}

/// Splits `line` into a label and the text after its colon.
fn label_of(line: &str) -> Option<(Label, &str)> {
    let (head, rest) = line.split_once(':')?;
    let norm: String = head
        .trim()
        .trim_matches(|c: char| c == '*' || c == '#' || c == '_' || c == '-')
        .split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_lowercase();
    let label = match norm.as_str() {
        "response1" | "response 1" => Label::Response1,
        "response2" | "response 2" => Label::Response2,
        "reasoning" => Label::Reasoning,
        "task" => Label::Task,
        "steps" => Label::Steps,
        "predicted state" => Label::PredictedState,
        "risks" | "risk" => Label::Risks,
        _ => return None,
    };
    let rest = rest.trim().trim_start_matches(['*', '_']).trim();
    Some((label, rest))
}

/// Strips "1.", "2)", "-" style list markers.
fn step_body(line: &str) -> Option<&str> {
    let t = line.trim();
    if let Some(rest) = t.strip_prefix("- ") {
        return Some(rest.trim());
    }
    let digits = t.chars().take_while(|c| c.is_ascii_digit()).count();
    if digits == 0 {
        return None;
    }
    let rest = &t[digits..];
    rest.strip_prefix('.')
        .or_else(|| rest.strip_prefix(')'))
        .map(str::trim)
}

fn append(buf: &mut String, text: &str) {
    if text.is_empty() {
        return;
    }
    if !buf.is_empty() {
        buf.push('\n');
    }
    buf.push_str(text);
}

fn task_error(section: &str, text: &str, e: TaskTextError) -> ParseError {
    let section = section.to_string();
    match e {
        TaskTextError::UnknownVerb(verb) => ParseError::UnknownVerb { section, verb },
        TaskTextError::UnknownItem(item) => ParseError::UnknownItem { section, item },
        _ => ParseError::BadTask { section, text: text.to_string() },
    }
}

#[derive(Default)]
struct Section {
    reasoning: String,
    task: Option<String>,
    steps: Vec<PlanStep>,
}

fn parse_section(lines: &[&str]) -> Section {
    #[derive(PartialEq)]
    enum Ctx {
        None,
        Reasoning,
        Steps,
        StepState,
        StepRisk,
    }
    let mut s = Section::default();
    let mut ctx = Ctx::None;
    for line in lines {
        match label_of(line) {
            Some((Label::Reasoning, rest)) => {
                ctx = Ctx::Reasoning;
                append(&mut s.reasoning, rest);
            }
            Some((Label::Task, rest)) => {
                s.task = Some(rest.to_string());
                ctx = Ctx::None;
            }
            Some((Label::Steps, rest)) => {
                ctx = Ctx::Steps;
                if let Some(body) = step_body(rest).or((!rest.is_empty()).then_some(rest)) {
                    s.steps.push(new_step(body));
                }
            }
            Some((Label::PredictedState, rest)) if ctx != Ctx::None && ctx != Ctx::Reasoning => {
                if let Some(step) = s.steps.last_mut() {
                    append(&mut step.predicted_state, rest);
                }
                ctx = Ctx::StepState;
            }
            Some((Label::Risks, rest)) if ctx != Ctx::None && ctx != Ctx::Reasoning => {
                if let Some(step) = s.steps.last_mut() {
                    append(&mut step.risks, rest);
                }
                ctx = Ctx::StepRisk;
            }
            _ => {
                let t = line.trim();
                match ctx {
                    Ctx::Reasoning => append(&mut s.reasoning, t),
                    Ctx::Steps | Ctx::StepState | Ctx::StepRisk => {
                        if let Some(body) = step_body(t) {
                            s.steps.push(new_step(body));
                            ctx = Ctx::Steps;
                        } else if let Some(step) = s.steps.last_mut() {
                            match ctx {
                                Ctx::StepState => append(&mut step.predicted_state, t),
                                Ctx::StepRisk => append(&mut step.risks, t),
                                _ => {}
                            }
                        }
                    }
                    Ctx::None => {}
                }
            }
        }
    }
    s
}

fn new_step(body: &str) -> PlanStep {
    PlanStep {
        text: body.to_string(),
        task: parse_task(body).ok(),
        predicted_state: String::new(),
        risks: String::new(),
    }
}

fn proposal(section: &str, s: &Section) -> Result<TaskProposal, ParseError> {
    let text = s
        .task
        .as_deref()
        .filter(|t| !t.trim().is_empty())
        .ok_or_else(|| ParseError::MissingTask { section: section.to_string() })?;
    let task = parse_task(text).map_err(|e| task_error(section, text, e))?;
    Ok(TaskProposal { reasoning: s.reasoning.clone(), task })
}

pub fn parse_planner_output(text: &str, mode: PromptMode) -> Result<DualProposal, ParseError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut r1: Vec<&str> = Vec::new();
    let mut r2: Option<Vec<&str>> = None;
    for line in &lines {
        match label_of(line) {
            Some((Label::Response1, rest)) => {
                r2 = None;
                r1.clear();
                r1.push(rest);
            }
            Some((Label::Response2, rest)) => r2 = Some(vec![rest]),
            _ => match r2.as_mut() {
                Some(v) => v.push(line),
                None => r1.push(line),
            },
        }
    }
    let response1 = proposal("Response1", &parse_section(&r1))?;
    let response2 = match r2 {
        Some(lines) => {
            let sec = parse_section(&lines);
            let proposal = proposal("Response2", &sec)?;
            Some(PredictiveProposal { proposal, plan: PredictionPlan { steps: sec.steps } })
        }
        None if mode == PromptMode::Predictive => return Err(ParseError::MissingResponse2),
        None => None,
    };
    Ok(DualProposal { response1, response2 })
}

/// Picks Response1 (conventional) or Response2 (predictive).
pub fn adopt(dual: &DualProposal, mode: PromptMode) -> Result<TaskProposal, AdoptError> {
    match mode {
        PromptMode::Conventional => Ok(dual.response1.clone()),
        PromptMode::Predictive => dual
            .response2
            .as_ref()
            .map(|r| r.proposal.clone())
            .ok_or(AdoptError::MissingResponse2),
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub fn render_proposal(p: &TaskProposal) -> String {
    format!("Reasoning: {}\nTask: {}", one_line(&p.reasoning), render_task(&p.task))
}

pub fn render_predictive(p: &PredictiveProposal) -> String {
    let mut out = format!("Reasoning: {}\nSteps:\n", one_line(&p.proposal.reasoning));
    for (i, step) in p.plan.steps.iter().enumerate() {
        let text = step.task.map_or_else(|| one_line(&step.text), |t| render_task(&t));
        out.push_str(&format!("{}. {}\n", i + 1, text));
        out.push_str(&format!("   Predicted State: {}\n", one_line(&step.predicted_state)));
        out.push_str(&format!("   Risks: {}\n", one_line(&step.risks)));
    }
    out.push_str(&format!("Task: {}", render_task(&p.proposal.task)));
    out
}

pub fn render_dual(d: &DualProposal) -> String {
    let mut out = format!("Response1:\n{}", render_proposal(&d.response1));
    if let Some(r2) = &d.response2 {
        out.push_str(&format!("\nResponse2:\n{}", render_predictive(r2)));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::craftworld::{Item, Verb};

    const WOOD_LOG_REPLY: &str = "Reasoning: The main goal is to create a golden pickaxe. One of the essential steps in this process is to have the necessary crafting tools, such as a crafting table and sticks for crafting. Currently, we are in a forested area with spruce trees, which provides an opportunity to gather wood.\n\nTask: Obtain a wood log.";

    #[test]
    fn bare_reply_is_response1() {
        let d = parse_planner_output(WOOD_LOG_REPLY, PromptMode::Conventional).unwrap();
        assert_eq!(d.response1.task, Task::new(Verb::Obtain, Item::WoodLog, 1));
        assert!(d.response1.reasoning.starts_with("The main goal"));
        assert!(d.response2.is_none());
        assert_eq!(
            parse_planner_output(WOOD_LOG_REPLY, PromptMode::Predictive),
            Err(ParseError::MissingResponse2)
        );
    }

    #[test]
    fn dual_reply_with_steps() {
        let text = "RESPONSE1 :\nreasoning: gold first\nTASK:  Smelt 3 raw gold.\n\n**Response 2:**\nReasoning: the furnace is not placed\n  Steps:\n 1. Place the furnace.\n    Predicted State: furnace on the ground\n    Risks: none\n2) Smelt 3 raw gold\n   predicted state: 3 gold ingots\n   but no fuel yet\n   Risks: no fuel\nTask: Place the furnace.";
        let d = parse_planner_output(text, PromptMode::Predictive).unwrap();
        assert_eq!(d.response1.task, Task::new(Verb::Smelt, Item::RawGold, 3));
        let r2 = d.response2.unwrap();
        assert_eq!(r2.proposal.task, Task::new(Verb::Place, Item::Furnace, 1));
        assert_eq!(r2.plan.steps.len(), 2);
        assert_eq!(r2.plan.steps[1].task, Some(Task::new(Verb::Smelt, Item::RawGold, 3)));
        assert_eq!(r2.plan.steps[1].predicted_state, "3 gold ingots\nbut no fuel yet");
        assert_eq!(r2.plan.steps[1].risks, "no fuel");
        assert_eq!(r2.proposal.reasoning, "the furnace is not placed");
    }

    #[test]
    fn typed_errors() {
        assert_eq!(
            parse_planner_output("Reasoning: hmm", PromptMode::Conventional),
            Err(ParseError::MissingTask { section: "Response1".into() })
        );
        assert_eq!(
            parse_planner_output("Task: Dance a jig.", PromptMode::Conventional),
            Err(ParseError::UnknownVerb { section: "Response1".into(), verb: "dance".into() })
        );
        assert_eq!(
            parse_planner_output("Task: Craft a diamond.", PromptMode::Conventional),
            Err(ParseError::UnknownItem { section: "Response1".into(), item: "diamond".into() })
        );
        assert_eq!(
            parse_planner_output("Task: Craft 1 stick.\nResponse2:\nReasoning: x", PromptMode::Predictive),
            Err(ParseError::MissingTask { section: "Response2".into() })
        );
    }

    #[test]
    fn adopt_picks_side() {
        let text = "Response1:\nTask: Smelt 3 raw gold.\nResponse2:\nTask: Place the furnace.";
        let d = parse_planner_output(text, PromptMode::Predictive).unwrap();
        assert_eq!(adopt(&d, PromptMode::Conventional).unwrap().task.verb, Verb::Smelt);
        assert_eq!(adopt(&d, PromptMode::Predictive).unwrap().task.verb, Verb::Place);
        let single = parse_planner_output(WOOD_LOG_REPLY, PromptMode::Conventional).unwrap();
        assert_eq!(adopt(&single, PromptMode::Predictive), Err(AdoptError::MissingResponse2));
    }

    #[test]
    fn render_then_parse() {
        let d = DualProposal {
            response1: TaskProposal {
                reasoning: "line one\nline two".into(),
                task: Task::new(Verb::Craft, Item::Stick, 4),
            },
            response2: Some(PredictiveProposal {
                proposal: TaskProposal { reasoning: "plan".into(), task: Task::new(Verb::Obtain, Item::WoodLog, 2) },
                plan: PredictionPlan {
                    steps: vec![PlanStep {
                        text: "Obtain 2 wood logs.".into(),
                        task: Some(Task::new(Verb::Obtain, Item::WoodLog, 2)),
                        predicted_state: "wood_log +2".into(),
                        risks: "trees may be far".into(),
                    }],
                },
            }),
        };
        let back = parse_planner_output(&render_dual(&d), PromptMode::Predictive).unwrap();
        assert_eq!(back.response1.task, d.response1.task);
        assert_eq!(back.response1.reasoning, "line one line two");
        assert_eq!(back.response2.as_ref().unwrap().plan, d.response2.as_ref().unwrap().plan);
    }
}
