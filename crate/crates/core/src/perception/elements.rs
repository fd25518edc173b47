use serde::{Deserialize, Serialize};

use super::frame::{Glyph, VisualFrame};
use crate::craftworld::{Biome, BlockKind, EntityKind, TimeOfDay};

/// Player-relative cell offset: +x east, +y south.
pub type Offset = (i32, i32);

/// The four cheat fields as read off a frame. `None` is "N/A".
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ElementReport {
    pub biome: Option<Biome>,
    pub time: Option<TimeOfDay>,
    pub nearby_blocks: Option<Vec<(BlockKind, Offset)>>,
    pub nearby_entities: Option<Vec<(EntityKind, Offset)>>,
}

pub const ELEMENT_FIELDS: [&str; 4] = ["biome", "time", "nearby_blocks", "nearby_entities"];

impl ElementReport {
    /// Per-field availability in [`ELEMENT_FIELDS`] order.
    pub fn present(&self) -> [bool; 4] {
        [
            self.biome.is_some(),
            self.time.is_some(),
            self.nearby_blocks.is_some(),
            self.nearby_entities.is_some(),
        ]
    }

    /// Prompt lines, one per field.
    pub fn lines(&self) -> Vec<String> {
        vec![
            format!("Biome: {}", self.biome.map_or("N/A", |b| b.name())),
            format!("Time: {}", self.time.map_or("N/A", |t| t.name())),
            format!(
                "Nearby blocks: {}",
                self.nearby_blocks
                    .as_ref()
                    .map_or("N/A".to_string(), |v| distinct_by_distance(v.iter().map(|(b, o)| (b.name(), *o))))
            ),
            format!(
                "Nearby entities: {}",
                self.nearby_entities
                    .as_ref()
                    .map_or("N/A".to_string(), |v| distinct_by_distance(v.iter().map(|(e, o)| (e.name(), *o))))
            ),
        ]
    }
}

/// Names listed once each, nearest first, ties by name.
pub(crate) fn distinct_by_distance<'a>(items: impl Iterator<Item = (&'a str, Offset)>) -> String {
    let mut best: Vec<(i32, &str)> = Vec::new();
    for (name, (dx, dy)) in items {
        let d = dx.abs().max(dy.abs());
        match best.iter_mut().find(|(_, n)| *n == name) {
            Some(slot) => slot.0 = slot.0.min(d),
            None => best.push((d, name)),
        }
    }
    best.sort();
    best.iter().map(|(_, n)| *n).collect::<Vec<_>>().join(", ")
}

pub fn encode_elements(frame: &VisualFrame) -> ElementReport {
    let mut blocks = Vec::new();
    let mut entities = Vec::new();
    for (off, g) in frame.cells() {
        match g {
            Glyph::Block(b) if b.is_notable() => blocks.push((b, off)),
            Glyph::Entity(e) => entities.push((e, off)),
            _ => {}
        }
    }
    ElementReport {
        biome: frame.hud.biome,
        time: frame.hud.time,
        nearby_blocks: (!blocks.is_empty()).then_some(blocks),
        nearby_entities: (!entities.is_empty()).then_some(entities),
    }
}
