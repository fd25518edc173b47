use std::collections::BTreeSet;

use super::elements::encode_elements;
use super::frame::VisualFrame;
use crate::craftworld::{BlockKind, Item, RuleSet, Station};
use crate::curriculum::PromptBundle;
use crate::planner::{BackendError, PlannerBackend};

/// Default cap on description text carried into the curriculum prompt.
pub const FREE_TEXT_CAP: usize = 600;

/// Sends the frame with the free-description prompt and returns the reply.
pub fn encode_free(frame: &VisualFrame, goal: Item, backend: &mut dyn PlannerBackend) -> Result<String, BackendError> {
    backend.propose(&PromptBundle::free_description(frame, goal))
}

/// Items that appear anywhere on the way to `goal`.
fn goal_closure(rules: &RuleSet, goal: Item) -> BTreeSet<Item> {
    let mut seen = BTreeSet::new();
    let mut stack = vec![goal];
    while let Some(item) = stack.pop() {
        let item = item.class();
        if !seen.insert(item) {
            continue;
        }
        for r in rules.recipes_for(item) {
            stack.extend(r.inputs.iter().map(|s| s.item));
            if let Some(st) = r.station.item() {
                stack.push(st);
            }
            if r.station == Station::Furnace {
                stack.extend(rules.fuels.iter().copied());
            }
        }
        for m in rules.sources_of(item) {
            if let Some(tool) = rules.tool_for_tier(m.tier) {
                stack.push(tool);
            }
        }
    }
    seen
}

/// Blocks worth mentioning for `goal`: sources of anything on the route,
/// plus placed stations the route uses.
pub fn relevant_blocks(rules: &RuleSet, goal: Item) -> BTreeSet<BlockKind> {
    let closure = goal_closure(rules, goal);
    let mut out = BTreeSet::new();
    for m in &rules.mining {
        if closure.contains(&m.yields.class()) {
            out.insert(m.block);
        }
    }
    for item in &closure {
        if let Some(b) = BlockKind::station_for(*item) {
            out.insert(b);
        }
    }
    out
}

fn direction(dx: i32, dy: i32) -> String {
    let mut parts = Vec::new();
    if dx != 0 {
        parts.push(format!("{} {}", dx.abs(), if dx > 0 { "east" } else { "west" }));
    }
    if dy != 0 {
        parts.push(format!("{} {}", dy.abs(), if dy > 0 { "south" } else { "north" }));
    }
    parts.join(" ")
}

/// Template description built only from what the frame shows. "N/A" when
/// nothing is visible.
pub fn describe_frame(frame: &VisualFrame, goal: Item, rules: &RuleSet) -> String {
    if frame.fully_unknown() {
        return "N/A".to_string();
    }
    let report = encode_elements(frame);
    let wanted = relevant_blocks(rules, goal);
    let mut sentences = Vec::new();
    let mut seen: Vec<(BlockKind, u32, (i32, i32))> = Vec::new();
    for (b, (dx, dy)) in report.nearby_blocks.iter().flatten() {
        if !wanted.contains(b) {
            continue;
        }
        let d = dx.abs().max(dy.abs());
        match seen.iter_mut().find(|(k, _, _)| k == b) {
            Some((_, n, best)) => {
                *n += 1;
                if d < best.0.abs().max(best.1.abs()) {
                    *best = (*dx, *dy);
                }
            }
            None => seen.push((*b, 1, (*dx, *dy))),
        }
    }
    seen.sort_by_key(|(_, _, (dx, dy))| (dx.abs().max(dy.abs()), *dy, *dx));
    if seen.is_empty() {
        sentences.push(format!("Nothing useful for the {} is in view.", goal.name()));
    } else {
        let parts: Vec<String> = seen
            .iter()
            .map(|(b, n, (dx, dy))| format!("{} x{} (nearest {})", b.name(), n, direction(*dx, *dy)))
            .collect();
        sentences.push(format!("Useful blocks in view: {}.", parts.join(", ")));
    }
    if let Some(ents) = &report.nearby_entities {
        let mut names: Vec<&str> = ents.iter().map(|(e, _)| e.name()).collect();
        names.sort();
        names.dedup();
        sentences.push(format!("Creatures in view: {}.", names.join(", ")));
    }
    if let Some(t) = report.time {
        sentences.push(format!("It is {}.", t.name()));
    }
    if let Some(b) = report.biome {
        sentences.push(format!("The area is {}.", b.name()));
    }
    sentences.join(" ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::craftworld::{Biome, Pos, WorldState};
    use crate::perception::frame::render_frame;
    use crate::perception::stats::is_na_text;
    use crate::planner::OracleBackend;
    use std::sync::Arc;

    #[test]
    fn blank_frame_is_na() {
        let s = WorldState::flat(16, 16, Biome::Plains);
        let f = render_frame(&s, 5).blanked();
        let mut oracle = OracleBackend::new(Arc::new(RuleSet::default()));
        let text = encode_free(&f, Item::GoldenPickaxe, &mut oracle).unwrap();
        assert_eq!(text, "N/A");
        assert!(is_na_text(&text));
    }

    #[test]
    fn mentions_visible_gold() {
        let mut s = WorldState::flat(16, 16, Biome::Hills);
        let c = s.player.pos;
        s.set_block(Pos::new(c.x + 2, c.y - 1), BlockKind::GoldOre);
        s.set_block(Pos::new(c.x - 2, c.y), BlockKind::Water);
        let f = render_frame(&s, 5);
        let mut oracle = OracleBackend::new(Arc::new(RuleSet::default()));
        let text = encode_free(&f, Item::GoldenPickaxe, &mut oracle).unwrap();
        assert!(text.contains("gold_ore x1 (nearest 2 east 1 north)"), "{text}");
        assert!(!text.contains("water"));
        assert!(text.contains("It is day."));
    }

    #[test]
    fn closure_covers_the_chain() {
        let rules = RuleSet::default();
        let rel = relevant_blocks(&rules, Item::GoldenPickaxe);
        for b in [BlockKind::GoldOre, BlockKind::IronOre, BlockKind::Stone, BlockKind::CraftingTable, BlockKind::Furnace] {
            assert!(rel.contains(&b), "{b:?}");
        }
        let wooden = relevant_blocks(&rules, Item::WoodenPickaxe);
        assert!(!wooden.contains(&BlockKind::GoldOre));
        assert!(wooden.contains(&BlockKind::CraftingTable));
    }

    #[test]
    fn free_facts_come_from_elements() {
        // Everything the description names is in the element report.
        let cfg = crate::craftworld::WorldConfig::default();
        let rules = RuleSet::default();
        for seed in 0..10 {
            let s = crate::craftworld::generate_world(seed, &cfg).unwrap();
            let f = render_frame(&s, 11);
            let text = describe_frame(&f, Item::GoldenPickaxe, &rules);
            let rep = encode_elements(&f);
            let names: BTreeSet<&str> =
                rep.nearby_blocks.iter().flatten().map(|(b, _)| b.name()).collect();
            for b in BlockKind::ALL {
                if text.contains(&format!("{} x", b.name())) {
                    assert!(names.contains(b.name()), "seed {seed}: {text}");
                }
            }
        }
    }
}
