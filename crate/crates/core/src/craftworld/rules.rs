//! Recipe, mining-yield and tool-tier tables.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::item::{BlockKind, Item, ToolTier};

const DEFAULT_RULES: &str = include_str!("../../assets/rules.toml");

#[derive(Debug, thiserror::Error)]
pub enum RulesError {
    #[error("rules file is not valid TOML: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("recipe `{0}` has no outputs")]
    NoOutputs(String),
    #[error("recipe `{0}`: fuel_cost must be positive exactly when the station is a furnace")]
    FuelMismatch(String),
    #[error("duplicate recipe id `{0}`")]
    DuplicateRecipe(String),
    #[error("recipe `{id}` uses `{item}`, which cannot be held in an inventory")]
    NotHoldable { id: String, item: Item },
    #[error("unknown recipe `{0}`")]
    UnknownRecipe(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Station {
    #[default]
    None,
    CraftingTable,
    Furnace,
}

impl Station {
    pub fn item(self) -> Option<Item> {
        match self {
            Station::None => None,
            Station::CraftingTable => Some(Item::CraftingTable),
            Station::Furnace => Some(Item::Furnace),
        }
    }

    pub fn block(self) -> Option<BlockKind> {
        match self {
            Station::None => None,
            Station::CraftingTable => Some(BlockKind::CraftingTable),
            Station::Furnace => Some(BlockKind::Furnace),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Station::None => "none",
            Station::CraftingTable => "crafting_table",
            Station::Furnace => "furnace",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stack {
    pub item: Item,
    pub count: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Recipe {
    pub id: String,
    pub inputs: Vec<Stack>,
    pub outputs: Vec<Stack>,
    #[serde(default)]
    pub station: Station,
    #[serde(default)]
    pub fuel_cost: u32,
}

impl Recipe {
    pub fn is_smelting(&self) -> bool {
        self.station == Station::Furnace
    }

    /// Units of `item` (class-aware) produced by one application.
    pub fn yield_of(&self, item: Item) -> u32 {
        self.outputs
            .iter()
            .filter(|s| item.matches(s.item))
            .map(|s| s.count)
            .sum()
    }

    pub fn produces(&self, item: Item) -> bool {
        self.yield_of(item) > 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MiningRule {
    pub block: BlockKind,
    pub yields: Item,
    #[serde(default = "one")]
    pub count: u32,
    pub tier: ToolTier,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ToolRule {
    pub item: Item,
    pub tier: ToolTier,
}

/// The full rule table. Loaded from TOML; `RuleSet::default()` is the
/// embedded table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleSet {
    #[serde(rename = "recipe")]
    pub recipes: Vec<Recipe>,
    #[serde(rename = "mining")]
    pub mining: Vec<MiningRule>,
    #[serde(rename = "tool")]
    pub tools: Vec<ToolRule>,
    /// Fuel items in consumption order; each unit burns for one smelt.
    pub fuels: Vec<Item>,
}

impl Default for RuleSet {
    fn default() -> Self {
        RuleSet::from_toml(DEFAULT_RULES).expect("embedded rules are valid")
    }
}

impl RuleSet {
    pub fn from_toml(text: &str) -> Result<RuleSet, RulesError> {
        let rules: RuleSet = toml::from_str(text)?;
        rules.validate()?;
        Ok(rules)
    }

    pub fn validate(&self) -> Result<(), RulesError> {
        let mut seen = std::collections::BTreeSet::new();
        for r in &self.recipes {
            if !seen.insert(r.id.as_str()) {
                return Err(RulesError::DuplicateRecipe(r.id.clone()));
            }
            if r.outputs.is_empty() || r.outputs.iter().all(|s| s.count == 0) {
                return Err(RulesError::NoOutputs(r.id.clone()));
            }
            if (r.fuel_cost > 0) != (r.station == Station::Furnace) {
                return Err(RulesError::FuelMismatch(r.id.clone()));
            }
            for s in &r.outputs {
                if !s.item.is_holdable() {
                    return Err(RulesError::NotHoldable { id: r.id.clone(), item: s.item });
                }
            }
            for s in &r.inputs {
                if s.item.is_block_only() {
                    return Err(RulesError::NotHoldable { id: r.id.clone(), item: s.item });
                }
            }
        }
        Ok(())
    }

    pub fn recipe(&self, id: &str) -> Result<&Recipe, RulesError> {
        self.recipes
            .iter()
            .find(|r| r.id == id)
            .ok_or_else(|| RulesError::UnknownRecipe(id.to_string()))
    }

    /// Recipes producing `item`, in table order.
    pub fn recipes_for(&self, item: Item) -> impl Iterator<Item = &Recipe> {
        self.recipes.iter().filter(move |r| r.produces(item))
    }

    /// The smelting recipe consuming `input` (class-aware).
    pub fn smelting_for_input(&self, input: Item) -> Option<&Recipe> {
        self.recipes
            .iter()
            .filter(|r| r.is_smelting())
            .find(|r| r.inputs.iter().any(|s| s.item.matches(input) || input.matches(s.item)))
    }

    pub fn mining_rule(&self, block: BlockKind) -> Option<&MiningRule> {
        self.mining.iter().find(|m| m.block == block)
    }

    /// Mining rules that supply `item`: either `item` names the block, or
    /// the block yields it.
    pub fn sources_of(&self, item: Item) -> Vec<&MiningRule> {
        self.mining
            .iter()
            .filter(|m| m.block.as_item() == Some(item) || item.matches(m.yields))
            .collect()
    }

    pub fn tool_tier(&self, item: Item) -> Option<ToolTier> {
        self.tools.iter().find(|t| t.item == item).map(|t| t.tier)
    }

    /// Lowest-tier tool item that reaches `tier`, in table order.
    pub fn tool_for_tier(&self, tier: ToolTier) -> Option<Item> {
        self.tools
            .iter()
            .filter(|t| t.tier >= tier)
            .min_by_key(|t| t.tier)
            .map(|t| t.item)
    }

    pub fn is_fuel(&self, item: Item) -> bool {
        self.fuels.iter().any(|f| f.matches(item))
    }

    /// Stable digest of the table, recorded in transcripts.
    pub fn fingerprint(&self) -> String {
        let json = serde_json::to_vec(self).expect("rules serialize");
        hex::encode(Sha256::digest(json))
    }
}
