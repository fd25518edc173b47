//! The closed task grammar: `<Verb> [a|an|the|N] <item words>[.]`.

use thiserror::Error;

use crate::craftworld::{Item, Task, Verb};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TaskTextError {
    #[error("empty task text")]
    Empty,
    #[error("unknown verb {0:?}")]
    UnknownVerb(String),
    #[error("unknown item {0:?}")]
    UnknownItem(String),
    #[error("bad count {0:?}")]
    BadCount(String),
}

fn capitalized(s: &str) -> String {
    let mut c = s.chars();
    match c.next() {
        Some(f) => f.to_uppercase().chain(c).collect(),
        None => String::new(),
    }
}

/// Sentence form, e.g. "Obtain a wood log.", "Smelt 3 raw gold.",
/// "Place the furnace.", "Craft 1 golden pickaxe.".
pub fn render_task(task: &Task) -> String {
    let (one, many) = task.item.words();
    let verb = capitalized(task.verb.name());
    let qty = if task.count == 1 {
        match task.verb {
            Verb::Place => "the".to_string(),
            Verb::Craft | Verb::Smelt => "1".to_string(),
            _ if one == many => "1".to_string(),
            _ if one.starts_with(['a', 'e', 'i', 'o', 'u']) => "an".to_string(),
            _ => "a".to_string(),
        }
    } else {
        task.count.to_string()
    };
    let noun = if task.count == 1 { one } else { many };
    format!("{verb} {qty} {noun}.")
}

const FILLER: [&str; 6] = ["to", "find", "for", "some", "more", "of"];

/// Item vocabulary lookup over underscore-joined words, tolerant of plurals
/// and a few common aliases.
pub fn item_from_words(words: &str) -> Option<Item> {
    let key = words.trim().to_lowercase().split_whitespace().collect::<Vec<_>>().join("_");
    let alias = |k: &str| -> Option<Item> {
        Some(match k {
            "gold_pickaxe" => Item::GoldenPickaxe,
            "wood" | "log" | "wooden_log" => Item::WoodLog,
            "plank" | "wooden_planks" | "wood_planks" => Item::Planks,
            "table" | "workbench" => Item::CraftingTable,
            "coal_ores" => Item::CoalOre,
            _ => return None,
        })
    };
    let tries = [
        Some(key.clone()),
        key.strip_suffix('s').map(str::to_string),
        key.strip_suffix("es").map(str::to_string),
    ];
    for k in tries.into_iter().flatten() {
        if let Some(i) = Item::from_name(&k).or_else(|| alias(&k)) {
            return Some(i);
        }
    }
    None
}

pub fn parse_task(text: &str) -> Result<Task, TaskTextError> {
    let cleaned = text
        .trim()
        .trim_matches(|c: char| c == '"' || c == '\'' || c == '`' || c == '*')
        .trim_end_matches(['.', '!', ';'])
        .to_lowercase();
    let mut words = cleaned.split_whitespace().peekable();
    let verb_word = words.next().ok_or(TaskTextError::Empty)?;
    let verb = Verb::from_name(verb_word).ok_or_else(|| TaskTextError::UnknownVerb(verb_word.to_string()))?;
    while words.peek().is_some_and(|w| FILLER.contains(w)) {
        words.next();
    }
    let mut count = 1u32;
    if let Some(w) = words.peek().copied() {
        match w {
            "a" | "an" | "the" | "one" => {
                words.next();
            }
            _ if w.chars().all(|c| c.is_ascii_digit()) => {
                count = w.parse().map_err(|_| TaskTextError::BadCount(w.to_string()))?;
                if count == 0 {
                    return Err(TaskTextError::BadCount(w.to_string()));
                }
                words.next();
            }
            _ => {}
        }
    }
    let rest: Vec<&str> = words.collect();
    let item_text = rest.join(" ");
    let item = item_from_words(&item_text).ok_or(TaskTextError::UnknownItem(item_text))?;
    Ok(Task::new(verb, item, count))
}
