//! Grid search for the task executor. Moving onto ground costs one step;
//! digging through a block the current tool can mine costs two (mine, then
//! move). Water and placed stations are impassable.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::item::{BlockKind, ToolTier};
use super::rules::RuleSet;
use super::world::{Pos, WorldState};

const UNREACHED: u32 = u32::MAX;

pub(crate) struct CostField {
    width: i32,
    height: i32,
    origin: Pos,
    dist: Vec<u32>,
    prev: Vec<u32>,
}

fn step_cost(rules: &RuleSet, tier: ToolTier, block: BlockKind) -> Option<u32> {
    if block.is_walkable() {
        return Some(1);
    }
    match rules.mining_rule(block) {
        Some(rule) if rule.tier <= tier => Some(2),
        _ => None,
    }
}

impl CostField {
    /// Dijkstra from `origin` over the whole grid. Ties break on (y, x) so
    /// the result is deterministic.
    pub fn compute(state: &WorldState, rules: &RuleSet, tier: ToolTier, origin: Pos) -> CostField {
        let n = (state.width * state.height) as usize;
        let idx = |p: Pos| (p.y * state.width + p.x) as usize;
        let mut dist = vec![UNREACHED; n];
        let mut prev = vec![u32::MAX; n];
        let mut heap = BinaryHeap::new();
        dist[idx(origin)] = 0;
        heap.push(Reverse((0u32, origin.y, origin.x)));
        while let Some(Reverse((d, y, x))) = heap.pop() {
            let p = Pos::new(x, y);
            if d > dist[idx(p)] {
                continue;
            }
            for dir in super::world::Dir::ALL {
                let q = p.step(dir);
                let Some(block) = state.block(q) else { continue };
                let Some(c) = step_cost(rules, tier, block) else { continue };
                let nd = d + c;
                if nd < dist[idx(q)] {
                    dist[idx(q)] = nd;
                    prev[idx(q)] = idx(p) as u32;
                    heap.push(Reverse((nd, q.y, q.x)));
                }
            }
        }
        CostField { width: state.width, height: state.height, origin, dist, prev }
    }

    /// `None` for unreachable or off-grid cells.
    pub fn cost(&self, p: Pos) -> Option<u32> {
        if p.x < 0 || p.y < 0 || p.x >= self.width || p.y >= self.height {
            return None;
        }
        let d = self.dist[(p.y * self.width + p.x) as usize];
        (d != UNREACHED).then_some(d)
    }

    /// Cells from the origin (exclusive) to `to` (inclusive).
    pub fn path_to(&self, to: Pos) -> Option<Vec<Pos>> {
        self.cost(to)?;
        let mut out = Vec::new();
        let mut cur = (to.y * self.width + to.x) as u32;
        let origin = (self.origin.y * self.width + self.origin.x) as u32;
        while cur != origin {
            out.push(Pos::new(cur as i32 % self.width, cur as i32 / self.width));
            cur = self.prev[cur as usize];
        }
        out.reverse();
        Some(out)
    }

    /// Cheapest cell satisfying `goal`, ties on (y, x).
    pub fn nearest(&self, cells: impl IntoIterator<Item = Pos>) -> Option<Pos> {
        cells
            .into_iter()
            .filter_map(|p| self.cost(p).map(|c| (c, p.y, p.x, p)))
            .min_by_key(|t| (t.0, t.1, t.2))
            .map(|t| t.3)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::craftworld::world::Biome;

    #[test]
    fn digs_through_stone_only_with_tool() {
        let rules = RuleSet::default();
        let mut s = WorldState::flat(16, 16, Biome::Plains);
        // Wall of stone across row 5.
        for x in 0..16 {
            s.set_block(Pos::new(x, 5), BlockKind::Stone);
        }
        s.player.pos = Pos::new(3, 8);
        let hand = CostField::compute(&s, &rules, ToolTier::Hand, s.player.pos);
        assert_eq!(hand.cost(Pos::new(3, 2)), None);
        let wooden = CostField::compute(&s, &rules, ToolTier::Wooden, s.player.pos);
        // Three ground steps, one dig, two more ground steps.
        assert_eq!(wooden.cost(Pos::new(3, 2)), Some(7));
        let path = wooden.path_to(Pos::new(3, 2)).unwrap();
        assert_eq!(path.len(), 6);
        assert_eq!(path.last(), Some(&Pos::new(3, 2)));
        assert_eq!(wooden.cost(Pos::new(-1, 2)), None);
        assert_eq!(wooden.cost(Pos::new(3, 16)), None);
    }
}
