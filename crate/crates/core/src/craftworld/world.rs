//! World state and primitive transitions.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::inventory::{Inventory, InventoryError};
use super::item::{BlockKind, Item, ToolTier};
use super::rules::{Recipe, RuleSet, RulesError, Station};

/// Ticks per half day.
pub const DAY_LENGTH: u64 = 600;
/// Chebyshev radius within which a placed station can be used.
pub const STATION_RADIUS: i32 = 3;
pub const MAX_HEALTH: u8 = 20;
pub const MAX_HUNGER: u8 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Pos {
    pub x: i32,
    pub y: i32,
}

impl Pos {
    pub const fn new(x: i32, y: i32) -> Self {
        Pos { x, y }
    }

    pub fn chebyshev(self, other: Pos) -> i32 {
        (self.x - other.x).abs().max((self.y - other.y).abs())
    }

    pub fn manhattan(self, other: Pos) -> i32 {
        (self.x - other.x).abs() + (self.y - other.y).abs()
    }

    pub fn step(self, dir: Dir) -> Pos {
        let (dx, dy) = dir.offset();
        Pos::new(self.x + dx, self.y + dy)
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Grid directions; north is decreasing `y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Dir {
    North,
    East,
    South,
    West,
}

impl Dir {
    pub const ALL: [Dir; 4] = [Dir::North, Dir::East, Dir::South, Dir::West];

    pub fn offset(self) -> (i32, i32) {
        match self {
            Dir::North => (0, -1),
            Dir::East => (1, 0),
            Dir::South => (0, 1),
            Dir::West => (-1, 0),
        }
    }

    pub fn between(from: Pos, to: Pos) -> Option<Dir> {
        Dir::ALL.into_iter().find(|d| from.step(*d) == to)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeOfDay {
    Day,
    Night,
}

impl TimeOfDay {
    pub fn at_tick(tick: u64) -> Self {
        if (tick / DAY_LENGTH) % 2 == 0 {
            TimeOfDay::Day
        } else {
            TimeOfDay::Night
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            TimeOfDay::Day => "day",
            TimeOfDay::Night => "night",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Biome {
    Plains,
    Forest,
    Taiga,
    Hills,
}

impl Biome {
    pub const ALL: [Biome; 4] = [Biome::Plains, Biome::Forest, Biome::Taiga, Biome::Hills];

    pub fn name(self) -> &'static str {
        match self {
            Biome::Plains => "plains",
            Biome::Forest => "forest",
            Biome::Taiga => "taiga",
            Biome::Hills => "hills",
        }
    }

    pub fn from_name(s: &str) -> Option<Biome> {
        Biome::ALL.into_iter().find(|b| b.name() == s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntityKind {
    Zombie,
    Cow,
    Pig,
}

impl EntityKind {
    pub const ALL: [EntityKind; 3] = [EntityKind::Zombie, EntityKind::Cow, EntityKind::Pig];

    pub fn name(self) -> &'static str {
        match self {
            EntityKind::Zombie => "zombie",
            EntityKind::Cow => "cow",
            EntityKind::Pig => "pig",
        }
    }

    pub fn symbol(self) -> char {
        match self {
            EntityKind::Zombie => 'Z',
            EntityKind::Cow => 'W',
            EntityKind::Pig => 'P',
        }
    }

    pub fn from_symbol(c: char) -> Option<EntityKind> {
        EntityKind::ALL.into_iter().find(|e| e.symbol() == c)
    }

    /// Item left behind when the player walks over the entity.
    pub fn drop(self) -> Option<Item> {
        match self {
            EntityKind::Zombie => Some(Item::RottenFlesh),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Entity {
    pub kind: EntityKind,
    pub pos: Pos,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Player {
    pub pos: Pos,
    pub facing: Dir,
    /// Best pickaxe held; `None` is bare hand.
    pub equipped: Option<Item>,
}

/// Biome labels per square region of the grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiomeMap {
    pub region_size: i32,
    pub columns: i32,
    pub labels: Vec<Biome>,
}

impl BiomeMap {
    pub fn uniform(width: i32, height: i32, region_size: i32, biome: Biome) -> Self {
        let columns = (width + region_size - 1) / region_size;
        let rows = (height + region_size - 1) / region_size;
        BiomeMap { region_size, columns, labels: vec![biome; (columns * rows) as usize] }
    }

    pub fn at(&self, pos: Pos) -> Biome {
        let idx = (pos.y / self.region_size) * self.columns + pos.x / self.region_size;
        self.labels[idx as usize]
    }
}

/// A primitive action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "action")]
pub enum Action {
    Move { dir: Dir },
    Mine { target: Pos },
    Craft { recipe: String },
    Smelt { item: Item, count: u32 },
    Place { item: Item, at: Pos },
    Wait,
}

/// One unmet requirement reported by [`WorldState::can_craft`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum Requirement {
    Item { item: Item, missing: u32 },
    Fuel { missing: u32 },
    Station { station: Station },
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Requirement::Item { item, missing } => write!(f, "{item}x{missing}"),
            Requirement::Fuel { missing } => write!(f, "fuel x{missing}"),
            Requirement::Station { station } => write!(f, "station {} not placed", station.name()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ActionError {
    #[error("target {0} is outside the world")]
    OutOfBounds(Pos),
    #[error("cannot walk onto {0}")]
    Blocked(BlockKind),
    #[error("target {0} is not adjacent to the player")]
    NotAdjacent(Pos),
    #[error("{0} cannot be mined")]
    NotMinable(BlockKind),
    #[error("{block} needs a {required:?}-tier tool, have {have:?}")]
    ToolTierTooLow { block: BlockKind, required: ToolTier, have: ToolTier },
    #[error("missing ingredients: {0:?}")]
    MissingIngredients(Vec<Requirement>),
    #[error("no {} placed within reach", .0.name())]
    NoStationPlaced(Station),
    #[error("unknown recipe `{0}`")]
    UnknownRecipe(String),
    #[error("inventory full")]
    InventoryFull,
    #[error("{0} cannot be placed")]
    NotPlaceable(Item),
    #[error("cell {0} is occupied")]
    Occupied(Pos),
    #[error("{0} is not smeltable")]
    NotSmeltable(Item),
    #[error("count must be positive")]
    ZeroCount,
}

impl From<InventoryError> for ActionError {
    fn from(e: InventoryError) -> Self {
        match e {
            InventoryError::Full => ActionError::InventoryFull,
            InventoryError::Short { item, need, have } => {
                ActionError::MissingIngredients(vec![Requirement::Item { item, missing: need - have }])
            }
            InventoryError::NotHoldable(item) => ActionError::NotPlaceable(item),
        }
    }
}

/// Which rule produced an action's inventory delta.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum AppliedRule {
    Moved,
    PickedUp { entity: EntityKind },
    Mined { block: BlockKind },
    Crafted { recipe: String },
    Smelted { recipe: String, count: u32 },
    Placed { item: Item },
    Waited,
}

/// Ledger entry for one successful action.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionEffect {
    pub rule: AppliedRule,
    pub delta: BTreeMap<Item, i64>,
}

/// The full simulator state. A plain value: clone it to branch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WorldState {
    pub width: i32,
    pub height: i32,
    pub grid: Vec<BlockKind>,
    pub entities: Vec<Entity>,
    pub player: Player,
    pub inventory: Inventory,
    pub placed_stations: BTreeSet<Pos>,
    pub time_of_day: TimeOfDay,
    pub biome_map: BiomeMap,
    pub rng_seed: u64,
    pub tick: u64,
    pub health: u8,
    pub hunger: u8,
}

impl WorldState {
    /// An all-ground world; handy for fixtures.
    pub fn flat(width: i32, height: i32, biome: Biome) -> Self {
        WorldState {
            width,
            height,
            grid: vec![BlockKind::Ground; (width * height) as usize],
            entities: Vec::new(),
            player: Player { pos: Pos::new(width / 2, height / 2), facing: Dir::North, equipped: None },
            inventory: Inventory::new(),
            placed_stations: BTreeSet::new(),
            time_of_day: TimeOfDay::Day,
            biome_map: BiomeMap::uniform(width, height, 16, biome),
            rng_seed: 0,
            tick: 0,
            health: MAX_HEALTH,
            hunger: MAX_HUNGER,
        }
    }

    pub fn in_bounds(&self, p: Pos) -> bool {
        p.x >= 0 && p.y >= 0 && p.x < self.width && p.y < self.height
    }

    pub fn block(&self, p: Pos) -> Option<BlockKind> {
        self.in_bounds(p).then(|| self.grid[(p.y * self.width + p.x) as usize])
    }

    pub fn set_block(&mut self, p: Pos, kind: BlockKind) {
        let idx = (p.y * self.width + p.x) as usize;
        self.grid[idx] = kind;
    }

    pub fn biome(&self) -> Biome {
        self.biome_map.at(self.player.pos)
    }

    pub fn entity_at(&self, p: Pos) -> Option<&Entity> {
        self.entities.iter().find(|e| e.pos == p)
    }

    pub fn tool_tier(&self, rules: &RuleSet) -> ToolTier {
        self.player
            .equipped
            .and_then(|i| rules.tool_tier(i))
            .unwrap_or(ToolTier::Hand)
    }

    /// Re-equips the best pickaxe held (first in table order on ties).
    pub fn refresh_equipment(&mut self, rules: &RuleSet) {
        let mut best: Option<(ToolTier, Item)> = None;
        for t in &rules.tools {
            if self.inventory.count(t.item) > 0 && best.map_or(true, |(tier, _)| t.tier > tier) {
                best = Some((t.tier, t.item));
            }
        }
        self.player.equipped = best.map(|(_, i)| i);
    }

    /// A placed station of `station` kind within [`STATION_RADIUS`].
    pub fn station_nearby(&self, station: Station) -> bool {
        let Some(block) = station.block() else { return true };
        self.placed_stations.iter().any(|p| {
            p.chebyshev(self.player.pos) <= STATION_RADIUS && self.block(*p) == Some(block)
        })
    }

    /// Exact blocks within Chebyshev `radius` of the player, excluding empty
    /// ground. Sorted by position (row-major).
    pub fn nearby_blocks(&self, radius: i32) -> Vec<(BlockKind, Pos)> {
        let c = self.player.pos;
        let mut out = Vec::new();
        for y in (c.y - radius)..=(c.y + radius) {
            for x in (c.x - radius)..=(c.x + radius) {
                let p = Pos::new(x, y);
                if p == c {
                    continue;
                }
                if let Some(b) = self.block(p) {
                    if b.is_notable() {
                        out.push((b, p));
                    }
                }
            }
        }
        out
    }

    pub fn nearby_entities(&self, radius: i32) -> Vec<Entity> {
        let c = self.player.pos;
        let mut out: Vec<Entity> = self
            .entities
            .iter()
            .filter(|e| e.pos.chebyshev(c) <= radius)
            .copied()
            .collect();
        out.sort_by_key(|e| (e.pos.y, e.pos.x, e.kind));
        out
    }

    /// Feasibility of one application of `recipe_id`, with every unmet
    /// requirement listed.
    pub fn can_craft(&self, rules: &RuleSet, recipe_id: &str) -> Result<(bool, Vec<Requirement>), RulesError> {
        let recipe = rules.recipe(recipe_id)?;
        let missing = self.missing_for(rules, recipe, 1);
        Ok((missing.is_empty(), missing))
    }

    fn missing_for(&self, rules: &RuleSet, recipe: &Recipe, times: u32) -> Vec<Requirement> {
        let mut missing = Vec::new();
        for s in &recipe.inputs {
            let need = s.count * times;
            let have = self.inventory.count(s.item);
            if have < need {
                missing.push(Requirement::Item { item: s.item, missing: need - have });
            }
        }
        if recipe.fuel_cost > 0 {
            let need = recipe.fuel_cost * times;
            let have = self.fuel_units(rules);
            if have < need {
                missing.push(Requirement::Fuel { missing: need - have });
            }
        }
        if !self.station_nearby(recipe.station) {
            missing.push(Requirement::Station { station: recipe.station });
        }
        missing
    }

    pub fn fuel_units(&self, rules: &RuleSet) -> u32 {
        rules.fuels.iter().map(|f| self.inventory.count(*f)).sum()
    }

    /// Applies one primitive. On error the state is untouched; on success
    /// the tick advances and the ledger entry is returned.
    pub fn apply(&mut self, rules: &RuleSet, action: &Action) -> Result<ActionEffect, ActionError> {
        let before = self.inventory.clone();
        let rule = match action {
            Action::Move { dir } => self.do_move(*dir)?,
            Action::Mine { target } => self.do_mine(rules, *target)?,
            Action::Craft { recipe } => self.do_craft(rules, recipe)?,
            Action::Smelt { item, count } => self.do_smelt(rules, *item, *count)?,
            Action::Place { item, at } => self.do_place(*item, *at)?,
            Action::Wait => AppliedRule::Waited,
        };
        self.refresh_equipment(rules);
        self.tick += 1;
        self.time_of_day = TimeOfDay::at_tick(self.tick);
        Ok(ActionEffect { rule, delta: self.inventory.delta_since(&before) })
    }

    fn adjacent_target(&self, target: Pos) -> Result<BlockKind, ActionError> {
        let block = self.block(target).ok_or(ActionError::OutOfBounds(target))?;
        if target.manhattan(self.player.pos) != 1 {
            return Err(ActionError::NotAdjacent(target));
        }
        Ok(block)
    }

    fn do_move(&mut self, dir: Dir) -> Result<AppliedRule, ActionError> {
        let to = self.player.pos.step(dir);
        let block = self.block(to).ok_or(ActionError::OutOfBounds(to))?;
        if !block.is_walkable() {
            return Err(ActionError::Blocked(block));
        }
        self.player.pos = to;
        self.player.facing = dir;
        if let Some(idx) = self.entities.iter().position(|e| e.pos == to) {
            let kind = self.entities[idx].kind;
            if let Some(drop) = kind.drop() {
                if self.inventory.add(drop, 1).is_ok() {
                    self.entities.remove(idx);
                    return Ok(AppliedRule::PickedUp { entity: kind });
                }
            }
        }
        Ok(AppliedRule::Moved)
    }

    fn do_mine(&mut self, rules: &RuleSet, target: Pos) -> Result<AppliedRule, ActionError> {
        let block = self.adjacent_target(target)?;
        let rule = rules.mining_rule(block).ok_or(ActionError::NotMinable(block))?;
        let have = self.tool_tier(rules);
        if have < rule.tier {
            return Err(ActionError::ToolTierTooLow { block, required: rule.tier, have });
        }
        self.inventory.add(rule.yields, rule.count)?;
        self.set_block(target, BlockKind::Ground);
        if let Some(d) = Dir::between(self.player.pos, target) {
            self.player.facing = d;
        }
        Ok(AppliedRule::Mined { block })
    }

    fn do_craft(&mut self, rules: &RuleSet, id: &str) -> Result<AppliedRule, ActionError> {
        let recipe = rules.recipe(id).map_err(|_| ActionError::UnknownRecipe(id.to_string()))?;
        if recipe.is_smelting() {
            return self.smelt_recipe(rules, recipe, 1);
        }
        if !self.station_nearby(recipe.station) {
            return Err(ActionError::NoStationPlaced(recipe.station));
        }
        let missing = self.missing_for(rules, recipe, 1);
        if !missing.is_empty() {
            return Err(ActionError::MissingIngredients(missing));
        }
        let mut inv = self.inventory.clone();
        for s in &recipe.inputs {
            inv.take(s.item, s.count)?;
        }
        for s in &recipe.outputs {
            inv.add(s.item, s.count)?;
        }
        self.inventory = inv;
        Ok(AppliedRule::Crafted { recipe: recipe.id.clone() })
    }

    fn do_smelt(&mut self, rules: &RuleSet, item: Item, count: u32) -> Result<AppliedRule, ActionError> {
        let recipe = rules
            .smelting_for_input(item)
            .or_else(|| rules.recipes_for(item).find(|r| r.is_smelting()))
            .ok_or(ActionError::NotSmeltable(item))?;
        self.smelt_recipe(rules, recipe, count)
    }

    fn smelt_recipe(&mut self, rules: &RuleSet, recipe: &Recipe, count: u32) -> Result<AppliedRule, ActionError> {
        if count == 0 {
            return Err(ActionError::ZeroCount);
        }
        if !self.station_nearby(Station::Furnace) {
            return Err(ActionError::NoStationPlaced(Station::Furnace));
        }
        let missing = self.missing_for(rules, recipe, count);
        if !missing.is_empty() {
            return Err(ActionError::MissingIngredients(missing));
        }
        let mut inv = self.inventory.clone();
        for s in &recipe.inputs {
            inv.take(s.item, s.count * count)?;
        }
        let mut fuel_left = recipe.fuel_cost * count;
        for fuel in &rules.fuels {
            let t = inv.count(*fuel).min(fuel_left);
            inv.take(*fuel, t)?;
            fuel_left -= t;
        }
        for s in &recipe.outputs {
            inv.add(s.item, s.count * count)?;
        }
        self.inventory = inv;
        Ok(AppliedRule::Smelted { recipe: recipe.id.clone(), count })
    }

    fn do_place(&mut self, item: Item, at: Pos) -> Result<AppliedRule, ActionError> {
        let block = BlockKind::station_for(item).ok_or(ActionError::NotPlaceable(item))?;
        let here = self.adjacent_target(at)?;
        if self.inventory.count(item) == 0 {
            return Err(ActionError::MissingIngredients(vec![Requirement::Item { item, missing: 1 }]));
        }
        if here != BlockKind::Ground || self.entity_at(at).is_some() {
            return Err(ActionError::Occupied(at));
        }
        self.inventory.take(item, 1)?;
        self.set_block(at, block);
        self.placed_stations.insert(at);
        Ok(AppliedRule::Placed { item })
    }
}

/// Pure form of [`WorldState::apply`].
pub fn apply_primitive(
    rules: &RuleSet,
    state: &WorldState,
    action: &Action,
) -> (WorldState, Result<ActionEffect, ActionError>) {
    let mut next = state.clone();
    let result = next.apply(rules, action);
    (next, result)
}

/// The run's end condition: at least one golden pickaxe held.
pub fn goal_reached(state: &WorldState) -> bool {
    state.inventory.count(Item::GoldenPickaxe) >= 1
}
