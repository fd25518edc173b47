use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::response::DualProposal;
use crate::craftworld::{Item, Task, Verb};

/// Obtain and mine are both acquisition.
pub fn verb_class(v: Verb) -> Verb {
    match v {
        Verb::Mine => Verb::Obtain,
        other => other,
    }
}

/// Species fold into their class, and ore blocks fold into what they drop.
pub fn item_class(i: Item) -> Item {
    match i {
        Item::IronOre => Item::RawIron,
        Item::GoldOre => Item::RawGold,
        Item::CoalOre => Item::Coal,
        Item::Stone => Item::Cobblestone,
        other => other.class(),
    }
}

/// Same task type on the same item type; counts ignored.
pub fn task_match(a: &Task, b: &Task) -> bool {
    verb_class(a.verb) == verb_class(b.verb) && item_class(a.item) == item_class(b.item)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MatchStats {
    pub pairs_total: u32,
    pub pairs_matched: u32,
    pub rate: f64,
    /// Iterations left out because a reply did not parse or had no Response2.
    pub excluded: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum MatchError {
    #[error("no iteration carried both responses")]
    NoEligiblePairs,
}

/// `None` entries stand for replies that failed to parse.
pub fn match_rate<'a>(
    duals: impl IntoIterator<Item = Option<&'a DualProposal>>,
) -> Result<MatchStats, MatchError> {
    let (mut total, mut matched, mut excluded) = (0u32, 0u32, 0u32);
    for d in duals {
        match d.and_then(|d| d.response2.as_ref().map(|r2| (&d.response1.task, &r2.proposal.task))) {
            Some((a, b)) => {
                total += 1;
                matched += task_match(a, b) as u32;
            }
            None => excluded += 1,
        }
    }
    if total == 0 {
        return Err(MatchError::NoEligiblePairs);
    }
    Ok(MatchStats { pairs_total: total, pairs_matched: matched, rate: matched as f64 / total as f64, excluded })
}
