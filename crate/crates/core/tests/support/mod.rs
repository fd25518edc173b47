#![allow(dead_code)]

pub mod checks;
pub mod fuzz;
pub mod schema;
pub mod stub;

use craftbench::craftworld::{Biome, Inventory, Item, WorldState};

/// Raw gold, sticks and a furnace that has not been placed.
pub fn unplaced_furnace_state() -> WorldState {
    let mut s = WorldState::flat(24, 24, Biome::Forest);
    s.inventory = Inventory::from_counts([(Item::RawGold, 3), (Item::Stick, 2), (Item::Furnace, 1)]);
    s
}

pub const WOOD_LOG_REPLY: &str = "Reasoning: The main goal is to create a golden pickaxe. One of the essential steps in this process is to have the necessary crafting tools, such as a crafting table and sticks for crafting. Currently, we are in a forested area with spruce trees, which provides an opportunity to gather wood.\n\nTask: Obtain a wood log.";

pub const SMELT_REPLY: &str = "Reasoning: The player has mined gold ore but has not smelted it yet. Since the player's ultimate goal is to create a golden pickaxe, they need to smelt the gold ore to obtain gold ingots. The player has a furnace in their inventory, so they can use it to smelt the gold ore.\n\nTask: Smelt 3 raw gold.";

pub const PLACE_REPLY: &str = "Reasoning: The player has raw gold and sticks in the inventory, and a furnace. The player can smelt the raw gold into gold ingots using the furnace, and then use the gold ingots and sticks to craft a golden pickaxe.\n\nTask: Place the furnace.";
