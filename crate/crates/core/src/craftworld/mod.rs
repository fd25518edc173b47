//! Seeded top-down crafting world: grid, recipes, tool gating and the
//! task executor.

mod executor;
mod gen;
mod inventory;
mod item;
mod path;
mod rules;
mod task;
mod world;

pub use executor::{execute_task, ExecConfig, Executor};
pub use gen::{generate_world, reachable_cells, ConfigError, WorldConfig};
pub use inventory::{Inventory, InventoryError, INVENTORY_SLOTS};
pub use item::{BlockKind, Item, Species, ToolTier, UnknownName};
pub use rules::{MiningRule, Recipe, RuleSet, RulesError, Stack, Station, ToolRule};
pub use task::{OutcomeReason, Task, TaskOutcome, Verb};
pub use world::{
    apply_primitive, goal_reached, Action, ActionEffect, ActionError, AppliedRule, Biome, BiomeMap, Dir, Entity,
    EntityKind, Player, Pos, Requirement, TimeOfDay, WorldState, DAY_LENGTH, MAX_HEALTH, MAX_HUNGER,
    STATION_RADIUS,
};
