//! Seeded world generation.

use std::collections::{BTreeSet, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::item::{BlockKind, Species};
use super::world::{Biome, BiomeMap, Entity, EntityKind, Pos, WorldState};

const DEFAULT_WORLD: &str = include_str!("../../assets/world.toml");

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("world config is not valid TOML: {0}")]
    Parse(#[from] toml::de::Error),
    #[error("world must be at least 16x16, got {0}x{1}")]
    TooSmall(i32, i32),
    #[error("region_size must be positive")]
    BadRegion,
    #[error("`{0}` must lie strictly between 0 and 1, got {1}")]
    Density(&'static str, f64),
    #[error("`{0}` must lie in [0, 1), got {1}")]
    Optional(&'static str, f64),
}

/// World-generation parameters. Keys mirror `assets/world.toml`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldConfig {
    pub width: i32,
    pub height: i32,
    pub region_size: i32,
    pub tree_density: f64,
    pub stone_density: f64,
    pub water_density: f64,
    pub entity_density: f64,
    pub coal_density: f64,
    pub iron_density: f64,
    pub gold_density: f64,
    pub min_logs: u32,
    pub min_stone: u32,
    pub min_coal: u32,
    pub min_iron: u32,
    pub min_gold: u32,
    pub spawn_clearance: i32,
}

impl Default for WorldConfig {
    fn default() -> Self {
        WorldConfig::from_toml(DEFAULT_WORLD).expect("embedded world config is valid")
    }
}

impl WorldConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: WorldConfig = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.width < 16 || self.height < 16 {
            return Err(ConfigError::TooSmall(self.width, self.height));
        }
        if self.region_size <= 0 {
            return Err(ConfigError::BadRegion);
        }
        let required = [
            ("tree_density", self.tree_density),
            ("stone_density", self.stone_density),
            ("coal_density", self.coal_density),
            ("iron_density", self.iron_density),
            ("gold_density", self.gold_density),
        ];
        for (name, v) in required {
            if !(v > 0.0 && v < 1.0) {
                return Err(ConfigError::Density(name, v));
            }
        }
        for (name, v) in [("water_density", self.water_density), ("entity_density", self.entity_density)] {
            if !(0.0..1.0).contains(&v) {
                return Err(ConfigError::Optional(name, v));
            }
        }
        Ok(())
    }
}

fn tree_factor(b: Biome) -> f64 {
    match b {
        Biome::Forest => 1.6,
        Biome::Taiga => 1.4,
        Biome::Plains => 0.3,
        Biome::Hills => 0.5,
    }
}

fn stone_factor(b: Biome) -> f64 {
    match b {
        Biome::Hills => 3.0,
        Biome::Taiga => 0.8,
        Biome::Forest | Biome::Plains => 0.5,
    }
}

fn species_for(b: Biome, rng: &mut ChaCha8Rng) -> Species {
    match b {
        Biome::Taiga | Biome::Hills => Species::Spruce,
        Biome::Forest => {
            if rng.gen_bool(0.6) {
                Species::Oak
            } else {
                Species::Birch
            }
        }
        Biome::Plains => Species::Oak,
    }
}

/// Generates a world. Deterministic in `(seed, config)`.
pub fn generate_world(seed: u64, config: &WorldConfig) -> Result<WorldState, ConfigError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, h) = (config.width, config.height);

    let mut biome_map = BiomeMap::uniform(w, h, config.region_size, Biome::Plains);
    for label in biome_map.labels.iter_mut() {
        *label = match rng.gen_range(0..10) {
            0..=2 => Biome::Plains,
            3..=5 => Biome::Forest,
            6..=7 => Biome::Taiga,
            _ => Biome::Hills,
        };
    }

    let mut state = WorldState::flat(w, h, Biome::Plains);
    state.biome_map = biome_map;
    state.rng_seed = seed;

    // Stone blobs, grown by short random walks.
    for y in 0..h {
        for x in 0..w {
            let p = Pos::new(x, y);
            let b = state.biome_map.at(p);
            if rng.gen_bool((config.stone_density * stone_factor(b) / 6.0).min(0.9)) {
                let len = rng.gen_range(6..18);
                random_walk(&mut state, &mut rng, p, len, BlockKind::Stone, |_| true);
            }
        }
    }

    // Ores replace stone cells.
    for i in 0..state.grid.len() {
        if state.grid[i] != BlockKind::Stone {
            continue;
        }
        let r: f64 = rng.gen();
        state.grid[i] = if r < config.gold_density {
            BlockKind::GoldOre
        } else if r < config.gold_density + config.iron_density {
            BlockKind::IronOre
        } else if r < config.gold_density + config.iron_density + config.coal_density {
            BlockKind::CoalOre
        } else {
            BlockKind::Stone
        };
    }

    // Trees on open ground.
    for y in 0..h {
        for x in 0..w {
            let p = Pos::new(x, y);
            let b = state.biome_map.at(p);
            if state.block(p) == Some(BlockKind::Ground)
                && rng.gen_bool((config.tree_density * tree_factor(b)).min(0.9))
            {
                let sp = species_for(b, &mut rng);
                state.set_block(p, BlockKind::Log(sp));
            }
        }
    }

    // Ponds.
    if config.water_density > 0.0 {
        for y in 0..h {
            for x in 0..w {
                if rng.gen_bool(config.water_density / 8.0) {
                    let len = rng.gen_range(3..10);
                    random_walk(&mut state, &mut rng, Pos::new(x, y), len, BlockKind::Water, |b| {
                        b == BlockKind::Ground
                    });
                }
            }
        }
    }

    let spawn = Pos::new(w / 2, h / 2);
    clear_spawn(&mut state, spawn, config.spawn_clearance);
    state.player.pos = spawn;

    ensure_minimums(&mut state, &mut rng, config, spawn);
    clear_spawn(&mut state, spawn, config.spawn_clearance);

    // Decorative mobs.
    if config.entity_density > 0.0 {
        for y in 0..h {
            for x in 0..w {
                let p = Pos::new(x, y);
                if p.chebyshev(spawn) <= config.spawn_clearance || state.block(p) != Some(BlockKind::Ground) {
                    continue;
                }
                if rng.gen_bool(config.entity_density) {
                    let kind = EntityKind::ALL[rng.gen_range(0..EntityKind::ALL.len())];
                    state.entities.push(Entity { kind, pos: p });
                }
            }
        }
    }
    Ok(state)
}

fn random_walk(
    state: &mut WorldState,
    rng: &mut ChaCha8Rng,
    start: Pos,
    len: u32,
    kind: BlockKind,
    allow: impl Fn(BlockKind) -> bool,
) {
    let mut p = start;
    for _ in 0..len {
        if let Some(b) = state.block(p) {
            if allow(b) {
                state.set_block(p, kind);
            }
        }
        let (dx, dy) = [(0, 1), (1, 0), (0, -1), (-1, 0)][rng.gen_range(0..4)];
        p = Pos::new((p.x + dx).clamp(0, state.width - 1), (p.y + dy).clamp(0, state.height - 1));
    }
}

fn clear_spawn(state: &mut WorldState, spawn: Pos, r: i32) {
    for y in (spawn.y - r)..=(spawn.y + r) {
        for x in (spawn.x - r)..=(spawn.x + r) {
            let p = Pos::new(x, y);
            if state.in_bounds(p) {
                state.set_block(p, BlockKind::Ground);
            }
        }
    }
    state.entities.retain(|e| e.pos.chebyshev(spawn) > r);
}

/// Cells connected to `from` without crossing water. Solid blocks count as
/// connected because they can be dug through with a good enough tool.
pub fn reachable_cells(state: &WorldState, from: Pos) -> BTreeSet<Pos> {
    let mut seen = BTreeSet::new();
    let mut queue = VecDeque::from([from]);
    seen.insert(from);
    while let Some(p) = queue.pop_front() {
        for d in super::world::Dir::ALL {
            let n = p.step(d);
            match state.block(n) {
                Some(b) if b != BlockKind::Water && !seen.contains(&n) => {
                    seen.insert(n);
                    queue.push_back(n);
                }
                _ => {}
            }
        }
    }
    seen
}

fn count_reachable(state: &WorldState, reach: &BTreeSet<Pos>, pred: impl Fn(BlockKind) -> bool) -> u32 {
    reach.iter().filter(|p| state.block(**p).map_or(false, &pred)).count() as u32
}

fn ensure_minimums(state: &mut WorldState, rng: &mut ChaCha8Rng, config: &WorldConfig, spawn: Pos) {
    let is_log = |b: BlockKind| matches!(b, BlockKind::Log(_));
    let stamps: [(fn(BlockKind) -> bool, u32, BlockKind); 5] = [
        (is_log, config.min_logs, BlockKind::Log(Species::Oak)),
        (|b| b == BlockKind::Stone, config.min_stone, BlockKind::Stone),
        (|b| b == BlockKind::CoalOre, config.min_coal, BlockKind::CoalOre),
        (|b| b == BlockKind::IronOre, config.min_iron, BlockKind::IronOre),
        (|b| b == BlockKind::GoldOre, config.min_gold, BlockKind::GoldOre),
    ];
    // A later stamp can overwrite an earlier deposit, so re-check every kind.
    for _round in 0..4 {
        let mut stamped = false;
        for (pred, min, kind) in stamps {
            for _ in 0..64 {
                let reach = reachable_cells(state, spawn);
                let have = count_reachable(state, &reach, pred);
                if have >= min {
                    break;
                }
                stamped = true;
                stamp_deposit(state, rng, &reach, spawn, config.spawn_clearance, kind, min - have);
            }
        }
        if !stamped {
            break;
        }
    }
}

fn stamp_deposit(
    state: &mut WorldState,
    rng: &mut ChaCha8Rng,
    reach: &BTreeSet<Pos>,
    spawn: Pos,
    clearance: i32,
    kind: BlockKind,
    deficit: u32,
) {
    let candidates: Vec<Pos> = reach
        .iter()
        .copied()
        .filter(|p| {
            let d = p.chebyshev(spawn);
            d >= clearance + 4
                && d <= clearance + 24
                && p.x >= 2
                && p.y >= 2
                && p.x < state.width - 2
                && p.y < state.height - 2
        })
        .collect();
    let center = if candidates.is_empty() {
        Pos::new((spawn.x + clearance + 4).min(state.width - 3), spawn.y)
    } else {
        candidates[rng.gen_range(0..candidates.len())]
    };
    let ring: Vec<Pos> = spiral(center, 2).into_iter().filter(|p| state.in_bounds(*p)).collect();
    match kind {
        BlockKind::Log(_) => {
            let species = species_for(state.biome_map.at(center), rng);
            let mut placed = 0;
            for p in ring.iter().filter(|p| (p.x + p.y) % 2 == 0) {
                if placed >= deficit {
                    break;
                }
                state.set_block(*p, BlockKind::Log(species));
                placed += 1;
            }
        }
        BlockKind::Stone => {
            for p in ring.iter().take(deficit.max(1) as usize) {
                state.set_block(*p, BlockKind::Stone);
            }
        }
        ore => {
            // Ore core wrapped in stone.
            for p in ring.iter().take(9) {
                state.set_block(*p, BlockKind::Stone);
            }
            for p in ring.iter().take((deficit as usize).clamp(1, 9)) {
                state.set_block(*p, ore);
            }
        }
    }
}

/// Cells around `center` out to Chebyshev radius `r`, nearest rings first.
fn spiral(center: Pos, r: i32) -> Vec<Pos> {
    let mut cells: Vec<Pos> = Vec::new();
    for y in (center.y - r)..=(center.y + r) {
        for x in (center.x - r)..=(center.x + r) {
            cells.push(Pos::new(x, y));
        }
    }
    cells.sort_by_key(|p| (p.chebyshev(center), p.manhattan(center), p.y, p.x));
    cells
}
