use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::craftworld::{Item, WorldState};

/// Tech-tree checkpoints in chain order.
pub const MILESTONES: [Item; 6] = [
    Item::WoodenPickaxe,
    Item::StonePickaxe,
    Item::Furnace,
    Item::IronPickaxe,
    Item::GoldIngot,
    Item::GoldenPickaxe,
];

/// Pickaxes whose first hits must be non-decreasing.
pub const TOOL_CHAIN: [Item; 4] = [Item::WoodenPickaxe, Item::StonePickaxe, Item::IronPickaxe, Item::GoldenPickaxe];

/// Items from `milestones` that are now held and not yet in `achieved`.
pub fn milestone_check(state: &WorldState, milestones: &[Item], achieved: &BTreeMap<Item, u32>) -> Vec<Item> {
    milestones
        .iter()
        .copied()
        .filter(|m| !achieved.contains_key(m) && state.inventory.count(*m) >= 1)
        .collect()
}

/// First-hit iteration per milestone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MilestoneTracker {
    pub milestones: Vec<Item>,
    pub first_hit: BTreeMap<Item, u32>,
}

impl MilestoneTracker {
    pub fn new(milestones: &[Item]) -> Self {
        MilestoneTracker { milestones: milestones.to_vec(), first_hit: BTreeMap::new() }
    }

    /// Records anything newly held at `iteration` and returns it.
    pub fn observe(&mut self, state: &WorldState, iteration: u32) -> Vec<Item> {
        let new = milestone_check(state, &self.milestones, &self.first_hit);
        for m in &new {
            self.first_hit.insert(*m, iteration);
        }
        new
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::craftworld::{Biome, Inventory};

    #[test]
    fn first_hit_only() {
        let mut s = WorldState::flat(8, 8, Biome::Plains);
        let mut tr = MilestoneTracker::new(&MILESTONES);
        assert!(tr.observe(&s, 1).is_empty());
        s.inventory = Inventory::from_counts([(Item::WoodenPickaxe, 1)]);
        assert_eq!(tr.observe(&s, 6), vec![Item::WoodenPickaxe]);
        assert!(tr.observe(&s, 7).is_empty());
        assert_eq!(tr.first_hit[&Item::WoodenPickaxe], 6);
        s.inventory = Inventory::from_counts([(Item::WoodenPickaxe, 1), (Item::GoldenPickaxe, 1)]);
        assert_eq!(tr.observe(&s, 9), vec![Item::GoldenPickaxe]);
    }
}
