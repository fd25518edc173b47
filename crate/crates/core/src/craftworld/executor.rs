//! Maps canonical tasks onto loops of primitive actions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::item::{BlockKind, Item};
use super::path::CostField;
use super::rules::{MiningRule, Recipe, RuleSet, Station};
use super::task::{OutcomeReason, Task, TaskOutcome, Verb};
use super::world::{Action, ActionEffect, ActionError, Dir, Pos, WorldState, STATION_RADIUS};

/// Executor tuning. Non-canonical; sized for sub-second trials.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecConfig {
    /// How far (Chebyshev) the executor looks for a resource before exploring.
    pub search_radius: i32,
    pub explore_min: i32,
    pub explore_max: i32,
}

impl Default for ExecConfig {
    fn default() -> Self {
        ExecConfig { search_radius: 12, explore_min: 8, explore_max: 16 }
    }
}

enum Approach {
    Adjacent(Pos),
    Moved,
    NotFound,
}

enum Stop {
    Budget,
    Fail(OutcomeReason),
}

struct Driver<'a> {
    state: &'a mut WorldState,
    rules: &'a RuleSet,
    cfg: ExecConfig,
    budget: u32,
    steps: u32,
    ledger: Option<&'a mut Vec<(Action, ActionEffect)>>,
}

fn reason_for(err: &ActionError) -> OutcomeReason {
    match err {
        ActionError::NoStationPlaced(_) => OutcomeReason::NoStationPlaced,
        ActionError::MissingIngredients(_) => OutcomeReason::MissingIngredients,
        ActionError::ToolTierTooLow { .. } => OutcomeReason::ToolTierTooLow,
        ActionError::InventoryFull => OutcomeReason::StepBudgetExhausted,
        _ => OutcomeReason::TargetNotFound,
    }
}

impl<'a> Driver<'a> {
    fn act(&mut self, action: Action) -> Result<(), Stop> {
        if self.steps >= self.budget {
            return Err(Stop::Budget);
        }
        match self.state.apply(self.rules, &action) {
            Ok(effect) => {
                self.steps += 1;
                if let Some(l) = self.ledger.as_deref_mut() {
                    l.push((action, effect));
                }
                Ok(())
            }
            Err(e) => Err(Stop::Fail(reason_for(&e))),
        }
    }

    /// Walks `path`, digging through anything solid on the way.
    fn follow(&mut self, path: &[Pos]) -> Result<(), Stop> {
        for &cell in path {
            let dir = Dir::between(self.state.player.pos, cell).expect("path is 4-connected");
            if !self.state.block(cell).map_or(false, |b| b.is_walkable()) {
                self.act(Action::Mine { target: cell })?;
            }
            self.act(Action::Move { dir })?;
        }
        Ok(())
    }

    fn run(&mut self, task: &Task) -> Result<(), Stop> {
        match task.verb {
            Verb::Obtain | Verb::Mine => self.acquire(task),
            Verb::Craft => self.craft(task.item, task.count),
            Verb::Smelt => self.smelt(task.item, task.count),
            Verb::Place => self.place(task.item),
            Verb::Explore => self.explore_for(task.item),
        }
    }

    fn usable_sources(&self, item: Item) -> Result<Vec<MiningRule>, Stop> {
        let sources: Vec<MiningRule> = self.rules.sources_of(item).into_iter().cloned().collect();
        if sources.is_empty() {
            return Err(Stop::Fail(OutcomeReason::TargetNotFound));
        }
        let tier = self.state.tool_tier(self.rules);
        let usable: Vec<MiningRule> = sources.into_iter().filter(|r| r.tier <= tier).collect();
        if usable.is_empty() {
            return Err(Stop::Fail(OutcomeReason::ToolTierTooLow));
        }
        Ok(usable)
    }

    fn acquire(&mut self, task: &Task) -> Result<(), Stop> {
        if self.rules.sources_of(task.item).is_empty() {
            // Obtaining a crafted item means making it.
            if task.verb == Verb::Obtain {
                if let Some(r) = self.rules.recipes_for(task.item).next() {
                    return if r.is_smelting() {
                        self.smelt(task.item, task.count)
                    } else {
                        self.craft(task.item, task.count)
                    };
                }
            }
            return Err(Stop::Fail(OutcomeReason::TargetNotFound));
        }
        let usable = self.usable_sources(task.item)?;
        let counted = if task.item.is_block_only() { usable[0].yields } else { task.item };
        let targets: Vec<BlockKind> = usable.iter().map(|r| r.block).collect();
        let goal = self.state.inventory.count(counted) + task.count;
        while self.state.inventory.count(counted) < goal {
            match self.approach(&targets)? {
                Approach::Adjacent(target) => self.act(Action::Mine { target })?,
                Approach::Moved => {}
                Approach::NotFound => self.explore_once()?,
            }
        }
        Ok(())
    }

    fn visible_targets(&self, targets: &[BlockKind]) -> Vec<Pos> {
        let r = self.cfg.search_radius;
        let c = self.state.player.pos;
        let mut out = Vec::new();
        for y in (c.y - r)..=(c.y + r) {
            for x in (c.x - r)..=(c.x + r) {
                let p = Pos::new(x, y);
                if self.state.block(p).map_or(false, |b| targets.contains(&b)) {
                    out.push(p);
                }
            }
        }
        out
    }

    /// Moves next to the nearest reachable target in sight.
    fn approach(&mut self, targets: &[BlockKind]) -> Result<Approach, Stop> {
        let cells = self.visible_targets(targets);
        if cells.is_empty() {
            return Ok(Approach::NotFound);
        }
        let tier = self.state.tool_tier(self.rules);
        let field = CostField::compute(self.state, self.rules, tier, self.state.player.pos);
        let mut stands = Vec::new();
        for t in &cells {
            for d in Dir::ALL {
                let s = t.step(d);
                if s == self.state.player.pos || field.cost(s).is_some() {
                    stands.push(s);
                }
            }
        }
        let Some(stand) = field.nearest(stands) else { return Ok(Approach::NotFound) };
        let path = field.path_to(stand).expect("stand is reachable");
        self.follow(&path)?;
        let here = self.state.player.pos;
        // The path may have dug through the target it was heading for.
        Ok(Dir::ALL
            .into_iter()
            .map(|d| here.step(d))
            .find(|p| self.state.block(*p).map_or(false, |b| targets.contains(&b)))
            .map_or(Approach::Moved, Approach::Adjacent))
    }

    /// Walks towards a random open cell a few steps away.
    fn explore_once(&mut self) -> Result<(), Stop> {
        let s = &*self.state;
        let seed = s.rng_seed ^ s.tick.wrapping_mul(0x9E37_79B9_7F4A_7C15)
            ^ ((s.player.pos.x as u64) << 32 | s.player.pos.y as u64);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let tier = s.tool_tier(self.rules);
        let field = CostField::compute(s, self.rules, tier, s.player.pos);
        let c = s.player.pos;
        let mut candidates = Vec::new();
        for y in (c.y - self.cfg.explore_max)..=(c.y + self.cfg.explore_max) {
            for x in (c.x - self.cfg.explore_max)..=(c.x + self.cfg.explore_max) {
                let p = Pos::new(x, y);
                if p.chebyshev(c) >= self.cfg.explore_min
                    && s.block(p) == Some(BlockKind::Ground)
                    && field.cost(p).is_some()
                {
                    candidates.push(p);
                }
            }
        }
        if candidates.is_empty() {
            return Err(Stop::Fail(OutcomeReason::TargetNotFound));
        }
        let goal = candidates[rng.gen_range(0..candidates.len())];
        let path = field.path_to(goal).expect("candidate is reachable");
        self.follow(&path)
    }

    fn explore_for(&mut self, item: Item) -> Result<(), Stop> {
        let sources: Vec<BlockKind> = self.rules.sources_of(item).iter().map(|r| r.block).collect();
        let targets = if sources.is_empty() {
            match BlockKind::station_for(item) {
                Some(b) => vec![b],
                None => return Err(Stop::Fail(OutcomeReason::TargetNotFound)),
            }
        } else {
            sources
        };
        let start = self.steps;
        while self.visible_targets(&targets).is_empty() || self.steps == start {
            self.explore_once()?;
        }
        Ok(())
    }

    fn craft_candidates(&self, item: Item) -> Vec<Recipe> {
        self.rules.recipes_for(item).filter(|r| !r.is_smelting()).cloned().collect()
    }

    fn craft(&mut self, item: Item, count: u32) -> Result<(), Stop> {
        let candidates = self.craft_candidates(item);
        if candidates.is_empty() {
            if self.rules.recipes_for(item).any(|r| r.is_smelting()) {
                return self.smelt(item, count);
            }
            return Err(Stop::Fail(OutcomeReason::TargetNotFound));
        }
        let per = candidates[0].yield_of(item).max(1);
        let crafts = count.div_ceil(per);

        // Dry run so an infeasible request leaves the world untouched.
        let dry = |mut trial: WorldState| -> Result<Vec<String>, ActionError> {
            let mut plan = Vec::with_capacity(crafts as usize);
            for _ in 0..crafts {
                let pick = candidates
                    .iter()
                    .find(|r| trial.can_craft(self.rules, &r.id).map_or(false, |(ok, _)| ok))
                    .unwrap_or(&candidates[0]);
                trial.apply(self.rules, &Action::Craft { recipe: pick.id.clone() })?;
                plan.push(pick.id.clone());
            }
            Ok(plan)
        };
        let plan = match dry(self.state.clone()) {
            Ok(plan) => plan,
            Err(ActionError::NoStationPlaced(st)) => {
                let path = self.station_path(st).ok_or(Stop::Fail(OutcomeReason::NoStationPlaced))?;
                let mut moved = self.state.clone();
                moved.player.pos = *path.last().unwrap_or(&moved.player.pos);
                let plan = dry(moved).map_err(|e| Stop::Fail(reason_for(&e)))?;
                self.follow(&path)?;
                plan
            }
            Err(e) => return Err(Stop::Fail(reason_for(&e))),
        };
        for id in plan {
            self.act(Action::Craft { recipe: id })?;
        }
        Ok(())
    }

    /// Path to the closest cell within reach of a placed `station`, when
    /// one exists and can be reached.
    fn station_path(&self, station: Station) -> Option<Vec<Pos>> {
        let block = station.block()?;
        let s = &*self.state;
        let sites: Vec<Pos> = s.placed_stations.iter().copied().filter(|p| s.block(*p) == Some(block)).collect();
        if sites.is_empty() {
            return None;
        }
        let field = CostField::compute(s, self.rules, s.tool_tier(self.rules), s.player.pos);
        let stands = sites.iter().flat_map(|c| {
            (-STATION_RADIUS..=STATION_RADIUS)
                .flat_map(move |dy| (-STATION_RADIUS..=STATION_RADIUS).map(move |dx| Pos::new(c.x + dx, c.y + dy)))
        });
        let stand = field.nearest(stands)?;
        field.path_to(stand)
    }

    fn smelt(&mut self, item: Item, count: u32) -> Result<(), Stop> {
        let recipe = self
            .rules
            .smelting_for_input(item)
            .or_else(|| self.rules.recipes_for(item).find(|r| r.is_smelting()));
        let Some(recipe) = recipe else { return Err(Stop::Fail(OutcomeReason::TargetNotFound)) };
        let action = Action::Smelt { item: recipe.inputs[0].item, count };
        if !self.state.station_nearby(Station::Furnace) {
            if let Some(path) = self.station_path(Station::Furnace) {
                let mut moved = self.state.clone();
                moved.player.pos = *path.last().unwrap_or(&moved.player.pos);
                moved.apply(self.rules, &action).map_err(|e| Stop::Fail(reason_for(&e)))?;
                self.follow(&path)?;
            }
        }
        self.act(action)
    }

    fn place(&mut self, item: Item) -> Result<(), Stop> {
        if BlockKind::station_for(item).is_none() {
            return Err(Stop::Fail(OutcomeReason::TargetNotFound));
        }
        if self.state.inventory.count(item) == 0 {
            return Err(Stop::Fail(OutcomeReason::MissingIngredients));
        }
        let here = self.state.player.pos;
        let spot = Dir::ALL.into_iter().map(|d| here.step(d)).find(|p| {
            self.state.block(*p) == Some(BlockKind::Ground) && self.state.entity_at(*p).is_none()
        });
        match spot {
            Some(at) => self.act(Action::Place { item, at }),
            None => Err(Stop::Fail(OutcomeReason::TargetNotFound)),
        }
    }
}

/// Runs a task against the world. Never panics or errors: infeasible
/// tasks come back as failing outcomes, and the world keeps exactly the
/// primitives that were applied before the failure.
#[derive(Debug, Clone, Default)]
pub struct Executor {
    pub config: ExecConfig,
}

impl Executor {
    pub fn new(config: ExecConfig) -> Self {
        Executor { config }
    }

    pub fn execute(&self, rules: &RuleSet, state: &mut WorldState, task: &Task, step_budget: u32) -> TaskOutcome {
        self.run(rules, state, task, step_budget, None)
    }

    /// Like [`Executor::execute`], also recording every applied primitive.
    pub fn execute_logged(
        &self,
        rules: &RuleSet,
        state: &mut WorldState,
        task: &Task,
        step_budget: u32,
        ledger: &mut Vec<(Action, ActionEffect)>,
    ) -> TaskOutcome {
        self.run(rules, state, task, step_budget, Some(ledger))
    }

    fn run(
        &self,
        rules: &RuleSet,
        state: &mut WorldState,
        task: &Task,
        step_budget: u32,
        ledger: Option<&mut Vec<(Action, ActionEffect)>>,
    ) -> TaskOutcome {
        let mut d = Driver { state, rules, cfg: self.config, budget: step_budget.max(1), steps: 0, ledger };
        let reason = match d.run(task) {
            Ok(()) => OutcomeReason::Completed,
            Err(Stop::Budget) => OutcomeReason::StepBudgetExhausted,
            Err(Stop::Fail(r)) => r,
        };
        TaskOutcome::new(reason, d.steps)
    }
}

/// Pure wrapper with the default executor.
pub fn execute_task(rules: &RuleSet, state: &WorldState, task: &Task, step_budget: u32) -> (WorldState, TaskOutcome) {
    let mut next = state.clone();
    let outcome = Executor::default().execute(rules, &mut next, task, step_budget);
    (next, outcome)
}
