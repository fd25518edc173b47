use serde::{Deserialize, Serialize};

use crate::craftworld::{Biome, BlockKind, Entity, Inventory, Item, Pos, TimeOfDay, WorldState};

/// Radius of the ground-truth observation.
pub const CHEAT_RADIUS: i32 = 8;

/// Ground-truth agent state: what the curriculum sees without vision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Observation {
    pub inventory: Inventory,
    pub equipment: Option<Item>,
    pub health: u8,
    pub hunger: u8,
    pub position: Pos,
    pub nearby_blocks: Vec<(BlockKind, Pos)>,
    pub nearby_entities: Vec<Entity>,
    /// Every station the agent has placed, wherever it is.
    pub placed_stations: Vec<(BlockKind, Pos)>,
    pub time_of_day: TimeOfDay,
    pub biome: Biome,
}

impl Observation {
    /// A placed station of `kind` within Chebyshev `radius` of the player.
    pub fn block_within(&self, kind: BlockKind, radius: i32) -> bool {
        self.nearby_blocks
            .iter()
            .any(|(b, p)| *b == kind && p.chebyshev(self.position) <= radius)
    }

    pub fn has_placed(&self, kind: BlockKind) -> bool {
        self.placed_stations.iter().any(|(b, _)| *b == kind)
    }
}

pub fn observe_cheat(state: &WorldState) -> Observation {
    Observation {
        inventory: state.inventory.clone(),
        equipment: state.player.equipped,
        health: state.health,
        hunger: state.hunger,
        position: state.player.pos,
        nearby_blocks: state.nearby_blocks(CHEAT_RADIUS),
        nearby_entities: state.nearby_entities(CHEAT_RADIUS),
        placed_stations: state
            .placed_stations
            .iter()
            .filter_map(|p| state.block(*p).filter(|b| matches!(b, BlockKind::CraftingTable | BlockKind::Furnace)).map(|b| (b, *p)))
            .collect(),
        time_of_day: state.time_of_day,
        biome: state.biome(),
    }
}
