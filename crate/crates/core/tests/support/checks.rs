//! Property checkers shared by the property suite and the acceptance run.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use craftbench::craftworld::{
    execute_task, generate_world, Action, ActionEffect, AppliedRule, BlockKind, Dir, Item, Pos, RuleSet, Task, Verb,
    WorldConfig, WorldState,
};
use craftbench::curriculum::TOOL_CHAIN;
use craftbench::harness::{MilestoneHit, TrialRecord};
use craftbench::perception::{encode_elements, observe_cheat, VisualFrame};
use craftbench::planner::predictive_plan;

fn add(map: &mut BTreeMap<Item, i64>, item: Item, n: i64) {
    *map.entry(item.class()).or_insert(0) += n;
    if map[&item.class()] == 0 {
        map.remove(&item.class());
    }
}

/// Re-derives one action's inventory change from the rule it claims and
/// compares with what actually happened.
pub fn ledger_violation(rules: &RuleSet, before: &WorldState, after: &WorldState, eff: &ActionEffect) -> Option<String> {
    let actual = after.inventory.delta_since(&before.inventory);
    if actual != eff.delta {
        return Some(format!("reported delta {:?} but inventory moved by {:?}", eff.delta, actual));
    }
    let mut residual: BTreeMap<Item, i64> = BTreeMap::new();
    for (item, n) in &actual {
        add(&mut residual, *item, *n);
    }
    let mut fuel = 0i64;
    match &eff.rule {
        AppliedRule::Moved | AppliedRule::Waited => {}
        AppliedRule::PickedUp { entity } => match entity.drop() {
            Some(d) => add(&mut residual, d, -1),
            None => return Some(format!("picked up {entity:?}, which drops nothing")),
        },
        AppliedRule::Mined { block } => match rules.mining_rule(*block) {
            Some(r) => add(&mut residual, r.yields, -(r.count as i64)),
            None => return Some(format!("mined {block}, which has no rule")),
        },
        AppliedRule::Crafted { recipe } | AppliedRule::Smelted { recipe, .. } => {
            let times = match &eff.rule {
                AppliedRule::Smelted { count, .. } => *count as i64,
                _ => 1,
            };
            let Ok(r) = rules.recipe(recipe) else { return Some(format!("unknown recipe {recipe}")) };
            for s in &r.inputs {
                add(&mut residual, s.item, s.count as i64 * times);
            }
            for s in &r.outputs {
                add(&mut residual, s.item, -(s.count as i64) * times);
            }
            fuel = r.fuel_cost as i64 * times;
        }
        AppliedRule::Placed { item } => add(&mut residual, *item, 1),
    }
    // Whatever is left must be fuel burnt by a smelt.
    let fuels: BTreeSet<Item> = rules.fuels.iter().map(|f| f.class()).collect();
    let mut burnt = 0i64;
    for (item, n) in &residual {
        if *n > 0 || !fuels.contains(item) {
            return Some(format!("{:?}: {item} moved by {n} with no rule behind it", eff.rule));
        }
        burnt -= n;
    }
    (burnt != fuel).then(|| format!("{:?}: burnt {burnt} fuel, rule says {fuel}", eff.rule))
}

/// A successful mine of a block the held tool cannot break.
pub fn above_tier(rules: &RuleSet, before: &WorldState, eff: &ActionEffect) -> bool {
    match &eff.rule {
        AppliedRule::Mined { block } => rules.mining_rule(*block).map_or(true, |r| r.tier > before.tool_tier(rules)),
        _ => false,
    }
}

pub fn random_action(rng: &mut ChaCha8Rng, s: &WorldState, rules: &RuleSet) -> Action {
    let dirs = [Dir::North, Dir::South, Dir::East, Dir::West];
    let near = s.player.pos.step(*dirs.choose(rng).unwrap());
    match rng.gen_range(0..100) {
        0..=39 => Action::Move { dir: *dirs.choose(rng).unwrap() },
        40..=69 => Action::Mine { target: near },
        70..=84 => Action::Craft { recipe: rules.recipes.choose(rng).unwrap().id.clone() },
        85..=89 => Action::Smelt { item: *Item::ALL.choose(rng).unwrap(), count: rng.gen_range(0..3) },
        90..=96 => Action::Place { item: *[Item::CraftingTable, Item::Furnace, Item::Stick].choose(rng).unwrap(), at: near },
        _ => Action::Wait,
    }
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct WalkReport {
    pub actions: u32,
    pub applied: u32,
    pub ledger_violations: u32,
    pub above_tier_mines: u32,
    pub failed_but_mutated: u32,
    pub mines: u32,
}

/// `n` random primitives from a generated world, each checked.
pub fn random_walk(rules: &RuleSet, seed: u64, n: u32) -> (WalkReport, Option<String>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5EED);
    let mut s = generate_world(seed, &WorldConfig::default()).expect("default world generates");
    let mut r = WalkReport::default();
    let mut first = None;
    for _ in 0..n {
        let a = random_action(&mut rng, &s, rules);
        let before = s.clone();
        r.actions += 1;
        match s.apply(rules, &a) {
            Ok(eff) => {
                r.applied += 1;
                r.mines += matches!(eff.rule, AppliedRule::Mined { .. }) as u32;
                if let Some(v) = ledger_violation(rules, &before, &s, &eff) {
                    r.ledger_violations += 1;
                    first.get_or_insert(v);
                }
                if above_tier(rules, &before, &eff) {
                    r.above_tier_mines += 1;
                    first.get_or_insert(format!("{a:?} succeeded with tier {:?}", before.tool_tier(rules)));
                }
            }
            Err(_) => {
                if s != before {
                    r.failed_but_mutated += 1;
                    first.get_or_insert(format!("{a:?} failed but changed the world"));
                }
            }
        }
    }
    (r, first)
}

fn task_pool(rng: &mut ChaCha8Rng) -> Task {
    let n = |rng: &mut ChaCha8Rng, hi: u32| rng.gen_range(1..=hi);
    match rng.gen_range(0..16) {
        0 | 1 => Task::new(Verb::Obtain, Item::WoodLog, n(rng, 5)),
        2 => Task::new(Verb::Craft, Item::Planks, 4 * n(rng, 3)),
        3 => Task::new(Verb::Craft, Item::Stick, 4),
        4 => Task::new(Verb::Craft, Item::CraftingTable, 1),
        5 => Task::new(Verb::Place, Item::CraftingTable, 1),
        6 => Task::new(Verb::Craft, Item::WoodenPickaxe, 1),
        7 => Task::new(Verb::Obtain, Item::Cobblestone, n(rng, 11)),
        8 => Task::new(Verb::Craft, Item::StonePickaxe, 1),
        9 => Task::new(Verb::Craft, Item::Furnace, 1),
        10 => Task::new(Verb::Place, Item::Furnace, 1),
        11 => Task::new(Verb::Obtain, Item::Coal, n(rng, 4)),
        12 => Task::new(Verb::Obtain, Item::RawIron, n(rng, 3)),
        13 => Task::new(Verb::Smelt, Item::RawIron, n(rng, 3)),
        14 => Task::new(Verb::Obtain, Item::RawGold, n(rng, 3)),
        _ => Task::new(Verb::Explore, Item::WoodLog, 1),
    }
}

/// A state reached from a generated world by a random run of tasks and
/// moves. Failed tasks keep whatever progress they made.
pub fn reachable_state(rules: &RuleSet, seed: u64) -> WorldState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ 0xC0FFEE);
    let mut s = generate_world(seed, &WorldConfig::default()).expect("default world generates");
    for _ in 0..rng.gen_range(0..14) {
        if rng.gen_bool(0.2) {
            for _ in 0..rng.gen_range(1..8) {
                let a = Action::Move { dir: *[Dir::North, Dir::South, Dir::East, Dir::West].choose(&mut rng).unwrap() };
                let _ = s.apply(rules, &a);
            }
            continue;
        }
        let t = task_pool(&mut rng);
        s = execute_task(rules, &s, &t, 600).0;
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PlanCheck {
    /// Every step succeeded and the goal is held.
    Sound { steps: usize },
    AlreadyHeld,
    NoPlan(String),
    Unparsed(usize),
    StepFailed { step: usize, task: Task, reason: String },
    GoalMissing,
}

/// Runs the predictive planner's full step list from `s` through the
/// executor.
pub fn check_plan(rules: &RuleSet, s: &WorldState, goal: Item) -> PlanCheck {
    if s.inventory.count(goal) > 0 {
        return PlanCheck::AlreadyHeld;
    }
    let steps = match predictive_plan(rules, &observe_cheat(s), goal) {
        Ok(steps) => steps,
        Err(e) => return PlanCheck::NoPlan(e.to_string()),
    };
    let mut cur = s.clone();
    for (i, step) in steps.iter().enumerate() {
        let Some(task) = step.task else { return PlanCheck::Unparsed(i) };
        let (next, out) = execute_task(rules, &cur, &task, 600);
        if !out.success {
            return PlanCheck::StepFailed { step: i, task, reason: format!("{:?}", out.reason) };
        }
        cur = next;
    }
    if cur.inventory.count(goal) == 0 {
        return PlanCheck::GoalMissing;
    }
    PlanCheck::Sound { steps: steps.len() }
}

/// Places the player on a random walkable cell.
pub fn teleport(rng: &mut ChaCha8Rng, s: &mut WorldState) {
    for _ in 0..1000 {
        let p = Pos::new(rng.gen_range(0..s.width), rng.gen_range(0..s.height));
        if s.block(p) == Some(BlockKind::Ground) && s.entity_at(p).is_none() {
            s.player.pos = p;
            return;
        }
    }
}

#[derive(Debug, Default, Clone, Copy, PartialEq, Eq)]
pub struct FrameCheck {
    pub invented: usize,
    pub hidden_reported: usize,
    pub open_scene: bool,
    pub open_scene_equal: bool,
    pub hud_wrong: bool,
}

/// Compares a frame's element report with ground truth.
pub fn check_frame(s: &WorldState, frame: &VisualFrame) -> FrameCheck {
    let cheat = observe_cheat(s);
    let report = encode_elements(frame);
    let half = frame.half();
    let c = s.player.pos;
    let truth: BTreeSet<(BlockKind, Pos)> = cheat.nearby_blocks.iter().copied().collect();
    let seen: BTreeSet<(BlockKind, Pos)> = report
        .nearby_blocks
        .iter()
        .flatten()
        .map(|(b, (dx, dy))| (*b, Pos::new(c.x + dx, c.y + dy)))
        .collect();
    let mut out = FrameCheck::default();
    for (b, p) in &seen {
        if !truth.contains(&(*b, *p)) {
            out.invented += 1;
        }
        if frame.at(p.x - c.x, p.y - c.y).map_or(true, |g| g.is_unknown()) {
            out.hidden_reported += 1;
        }
    }
    for e in report.nearby_entities.iter().flatten() {
        let p = Pos::new(c.x + e.1 .0, c.y + e.1 .1);
        if !cheat.nearby_entities.iter().any(|x| x.kind == e.0 && x.pos == p) {
            out.invented += 1;
        }
    }
    out.hud_wrong = report.biome.map_or(false, |b| b != cheat.biome) || report.time.map_or(false, |t| t != cheat.time_of_day);
    out.open_scene = (-half..=half).all(|dy| {
        (-half..=half).all(|dx| {
            !s.in_bounds(Pos::new(c.x + dx, c.y + dy)) || frame.at(dx, dy).map_or(false, |g| !g.is_unknown())
        })
    });
    if out.open_scene {
        let windowed: BTreeSet<(BlockKind, Pos)> = truth
            .iter()
            .filter(|(_, p)| p.chebyshev(c) <= half && s.entity_at(*p).is_none())
            .copied()
            .collect();
        out.open_scene_equal = windowed == seen;
    }
    out
}

/// Chain milestones never hit out of order and never past the cap.
pub fn milestone_order_ok(rec: &TrialRecord) -> Result<(), String> {
    let cap = rec.config.max_iterations;
    if rec.iterations.len() as u32 > cap {
        return Err(format!("{} iterations exceed cap {cap}", rec.iterations.len()));
    }
    let mut last = 0u32;
    for item in TOOL_CHAIN {
        match rec.milestones.get(&item) {
            Some(MilestoneHit::Iteration(k)) => {
                if *k == 0 || *k > cap {
                    return Err(format!("{item} at {k} outside 1..={cap}"));
                }
                if *k < last {
                    return Err(format!("{item} at {k} precedes an earlier tool at {last}"));
                }
                last = *k;
            }
            Some(MilestoneHit::Preheld) => {}
            _ => last = u32::MAX,
        }
    }
    Ok(())
}
