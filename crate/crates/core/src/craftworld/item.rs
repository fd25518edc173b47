//! Closed item vocabulary, block kinds and tool tiers.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Tree species. Logs and planks come in one variant per species.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Species {
    Oak,
    Spruce,
    Birch,
}

impl Species {
    pub const ALL: [Species; 3] = [Species::Oak, Species::Spruce, Species::Birch];

    pub fn log(self) -> Item {
        match self {
            Species::Oak => Item::OakLog,
            Species::Spruce => Item::SpruceLog,
            Species::Birch => Item::BirchLog,
        }
    }

    pub fn planks(self) -> Item {
        match self {
            Species::Oak => Item::OakPlanks,
            Species::Spruce => Item::SprucePlanks,
            Species::Birch => Item::BirchPlanks,
        }
    }
}

/// Every item name the simulator, the prompts and the parser know about.
///
/// `WoodLog` and `Planks` are class names: they never sit in an inventory but
/// match any species variant when used as a recipe input or a task target.
/// `Stone` and the `*Ore` variants name blocks; mining them yields a
/// different item.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Item {
    WoodLog,
    Planks,
    OakLog,
    SpruceLog,
    BirchLog,
    OakPlanks,
    SprucePlanks,
    BirchPlanks,
    SpruceSapling,
    Stick,
    CraftingTable,
    WoodenPickaxe,
    Stone,
    Cobblestone,
    StonePickaxe,
    Furnace,
    CoalOre,
    Coal,
    IronOre,
    RawIron,
    IronIngot,
    IronPickaxe,
    GoldOre,
    RawGold,
    GoldIngot,
    GoldenPickaxe,
    RottenFlesh,
}

impl Item {
    pub const ALL: [Item; 27] = [
        Item::WoodLog,
        Item::Planks,
        Item::OakLog,
        Item::SpruceLog,
        Item::BirchLog,
        Item::OakPlanks,
        Item::SprucePlanks,
        Item::BirchPlanks,
        Item::SpruceSapling,
        Item::Stick,
        Item::CraftingTable,
        Item::WoodenPickaxe,
        Item::Stone,
        Item::Cobblestone,
        Item::StonePickaxe,
        Item::Furnace,
        Item::CoalOre,
        Item::Coal,
        Item::IronOre,
        Item::RawIron,
        Item::IronIngot,
        Item::IronPickaxe,
        Item::GoldOre,
        Item::RawGold,
        Item::GoldIngot,
        Item::GoldenPickaxe,
        Item::RottenFlesh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Item::WoodLog => "wood_log",
            Item::Planks => "planks",
            Item::OakLog => "oak_log",
            Item::SpruceLog => "spruce_log",
            Item::BirchLog => "birch_log",
            Item::OakPlanks => "oak_planks",
            Item::SprucePlanks => "spruce_planks",
            Item::BirchPlanks => "birch_planks",
            Item::SpruceSapling => "spruce_sapling",
            Item::Stick => "stick",
            Item::CraftingTable => "crafting_table",
            Item::WoodenPickaxe => "wooden_pickaxe",
            Item::Stone => "stone",
            Item::Cobblestone => "cobblestone",
            Item::StonePickaxe => "stone_pickaxe",
            Item::Furnace => "furnace",
            Item::CoalOre => "coal_ore",
            Item::Coal => "coal",
            Item::IronOre => "iron_ore",
            Item::RawIron => "raw_iron",
            Item::IronIngot => "iron_ingot",
            Item::IronPickaxe => "iron_pickaxe",
            Item::GoldOre => "gold_ore",
            Item::RawGold => "raw_gold",
            Item::GoldIngot => "gold_ingot",
            Item::GoldenPickaxe => "golden_pickaxe",
            Item::RottenFlesh => "rotten_flesh",
        }
    }

    pub fn from_name(name: &str) -> Option<Item> {
        Item::ALL.iter().copied().find(|i| i.name() == name)
    }

    /// True for class names that stand for several concrete items.
    pub fn is_class(self) -> bool {
        matches!(self, Item::WoodLog | Item::Planks)
    }

    /// Items that only exist as blocks in the grid.
    pub fn is_block_only(self) -> bool {
        matches!(self, Item::Stone | Item::CoalOre | Item::IronOre | Item::GoldOre)
    }

    /// Whether this item can occupy an inventory slot.
    pub fn is_holdable(self) -> bool {
        !self.is_class() && !self.is_block_only()
    }

    /// The species class of a concrete item (`spruce_log` -> `wood_log`).
    pub fn class(self) -> Item {
        match self {
            Item::OakLog | Item::SpruceLog | Item::BirchLog => Item::WoodLog,
            Item::OakPlanks | Item::SprucePlanks | Item::BirchPlanks => Item::Planks,
            other => other,
        }
    }

    /// True when a concrete inventory item satisfies this (possibly class) item.
    pub fn matches(self, concrete: Item) -> bool {
        self == concrete || (self.is_class() && concrete.class() == self)
    }

    pub fn is_station(self) -> bool {
        matches!(self, Item::CraftingTable | Item::Furnace)
    }

    /// Singular and plural surface words used in task sentences.
    pub(crate) fn words(self) -> (&'static str, &'static str) {
        match self {
            Item::WoodLog => ("wood log", "wood logs"),
            Item::Planks => ("planks", "planks"),
            Item::OakLog => ("oak log", "oak logs"),
            Item::SpruceLog => ("spruce log", "spruce logs"),
            Item::BirchLog => ("birch log", "birch logs"),
            Item::OakPlanks => ("oak planks", "oak planks"),
            Item::SprucePlanks => ("spruce planks", "spruce planks"),
            Item::BirchPlanks => ("birch planks", "birch planks"),
            Item::SpruceSapling => ("spruce sapling", "spruce saplings"),
            Item::Stick => ("stick", "sticks"),
            Item::CraftingTable => ("crafting table", "crafting tables"),
            Item::WoodenPickaxe => ("wooden pickaxe", "wooden pickaxes"),
            Item::Stone => ("stone", "stone"),
            Item::Cobblestone => ("cobblestone", "cobblestone"),
            Item::StonePickaxe => ("stone pickaxe", "stone pickaxes"),
            Item::Furnace => ("furnace", "furnaces"),
            Item::CoalOre => ("coal ore", "coal ore"),
            Item::Coal => ("coal", "coal"),
            Item::IronOre => ("iron ore", "iron ore"),
            Item::RawIron => ("raw iron", "raw iron"),
            Item::IronIngot => ("iron ingot", "iron ingots"),
            Item::IronPickaxe => ("iron pickaxe", "iron pickaxes"),
            Item::GoldOre => ("gold ore", "gold ore"),
            Item::RawGold => ("raw gold", "raw gold"),
            Item::GoldIngot => ("gold ingot", "gold ingots"),
            Item::GoldenPickaxe => ("golden pickaxe", "golden pickaxes"),
            Item::RottenFlesh => ("rotten flesh", "rotten flesh"),
        }
    }
}

impl fmt::Display for Item {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Item {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Item::from_name(s).ok_or_else(|| UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown name `{0}`")]
pub struct UnknownName(pub String);

/// Mining capability of the equipped tool. Ordered: a higher tier can mine
/// everything a lower one can.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToolTier {
    Hand,
    Wooden,
    Stone,
    Iron,
}

impl ToolTier {
    pub fn name(self) -> &'static str {
        match self {
            ToolTier::Hand => "hand",
            ToolTier::Wooden => "wooden",
            ToolTier::Stone => "stone",
            ToolTier::Iron => "iron",
        }
    }
}

/// One grid cell. `Unknown` never appears in a generated grid; the renderer
/// uses it for occluded cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum BlockKind {
    Ground,
    Log(Species),
    Stone,
    CoalOre,
    IronOre,
    GoldOre,
    Water,
    CraftingTable,
    Furnace,
    Unknown,
}

impl BlockKind {
    pub const ALL: [BlockKind; 12] = [
        BlockKind::Ground,
        BlockKind::Log(Species::Oak),
        BlockKind::Log(Species::Spruce),
        BlockKind::Log(Species::Birch),
        BlockKind::Stone,
        BlockKind::CoalOre,
        BlockKind::IronOre,
        BlockKind::GoldOre,
        BlockKind::Water,
        BlockKind::CraftingTable,
        BlockKind::Furnace,
        BlockKind::Unknown,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BlockKind::Ground => "ground",
            BlockKind::Log(Species::Oak) => "oak_log",
            BlockKind::Log(Species::Spruce) => "spruce_log",
            BlockKind::Log(Species::Birch) => "birch_log",
            BlockKind::Stone => "stone",
            BlockKind::CoalOre => "coal_ore",
            BlockKind::IronOre => "iron_ore",
            BlockKind::GoldOre => "gold_ore",
            BlockKind::Water => "water",
            BlockKind::CraftingTable => "crafting_table",
            BlockKind::Furnace => "furnace",
            BlockKind::Unknown => "unknown",
        }
    }

    pub fn from_name(name: &str) -> Option<BlockKind> {
        BlockKind::ALL.iter().copied().find(|b| b.name() == name)
    }

    /// The item name a task uses to refer to this block.
    pub fn as_item(self) -> Option<Item> {
        match self {
            BlockKind::Log(s) => Some(s.log()),
            BlockKind::Stone => Some(Item::Stone),
            BlockKind::CoalOre => Some(Item::CoalOre),
            BlockKind::IronOre => Some(Item::IronOre),
            BlockKind::GoldOre => Some(Item::GoldOre),
            BlockKind::CraftingTable => Some(Item::CraftingTable),
            BlockKind::Furnace => Some(Item::Furnace),
            BlockKind::Ground | BlockKind::Water | BlockKind::Unknown => None,
        }
    }

    /// The block a station item turns into when placed.
    pub fn station_for(item: Item) -> Option<BlockKind> {
        match item {
            Item::CraftingTable => Some(BlockKind::CraftingTable),
            Item::Furnace => Some(BlockKind::Furnace),
            _ => None,
        }
    }

    /// Blocks line of sight.
    pub fn is_opaque(self) -> bool {
        !matches!(self, BlockKind::Ground | BlockKind::Water | BlockKind::Unknown)
    }

    pub fn is_walkable(self) -> bool {
        self == BlockKind::Ground
    }

    /// Counted by nearby-block queries (everything but empty ground).
    pub fn is_notable(self) -> bool {
        !matches!(self, BlockKind::Ground | BlockKind::Unknown)
    }

    pub fn symbol(self) -> char {
        match self {
            BlockKind::Ground => '.',
            BlockKind::Log(Species::Oak) => 'o',
            BlockKind::Log(Species::Spruce) => 's',
            BlockKind::Log(Species::Birch) => 'b',
            BlockKind::Stone => '#',
            BlockKind::CoalOre => 'c',
            BlockKind::IronOre => 'i',
            BlockKind::GoldOre => 'g',
            BlockKind::Water => '~',
            BlockKind::CraftingTable => 'T',
            BlockKind::Furnace => 'F',
            BlockKind::Unknown => '?',
        }
    }

    pub fn from_symbol(c: char) -> Option<BlockKind> {
        BlockKind::ALL.iter().copied().find(|b| b.symbol() == c)
    }
}

impl fmt::Display for BlockKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl TryFrom<String> for BlockKind {
    type Error = UnknownName;

    fn try_from(value: String) -> Result<Self, Self::Error> {
        BlockKind::from_name(&value).ok_or(UnknownName(value))
    }
}

impl From<BlockKind> for String {
    fn from(b: BlockKind) -> String {
        b.name().to_string()
    }
}
