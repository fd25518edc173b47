//! Prompt bundles over a spread of states.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use craftbench::craftworld::{generate_world, Inventory, Item, OutcomeReason, Task, Verb, WorldConfig};
use craftbench::curriculum::{build_prompt, PromptBundle, PromptMode, TaskHistory, VisionInput};
use craftbench::perception::{encode_elements, observe_cheat, render_frame};

/// Bundles drawn from random worlds, inventories, histories and vision
/// inputs.
pub fn fuzzed_bundles(n: usize, seed: u64) -> Vec<PromptBundle> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cfg = WorldConfig { width: 24, height: 24, ..WorldConfig::default() };
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut w = generate_world(rng.gen_range(0..40), &cfg).unwrap_or_else(|_| super::unplaced_furnace_state());
        let mut inv = Vec::new();
        for _ in 0..rng.gen_range(0..6) {
            inv.push((Item::ALL[rng.gen_range(0..Item::ALL.len())], rng.gen_range(1..20)));
        }
        w.inventory = Inventory::from_counts(inv.into_iter().filter(|(i, _)| !i.is_block_only() && !i.is_class()));
        let mut h = TaskHistory::default();
        for _ in 0..rng.gen_range(0..5) {
            let t = Task::new(Verb::ALL[rng.gen_range(0..Verb::ALL.len())], Item::ALL[rng.gen_range(0..Item::ALL.len())], rng.gen_range(1..5));
            h.push(t, rng.gen_bool(0.5), OutcomeReason::Completed);
        }
        let frame = render_frame(&w, 11);
        let vision = match i % 4 {
            0 => None,
            1 => Some(VisionInput::Elements { report: encode_elements(&frame) }),
            2 => Some(VisionInput::Free { text: rng.gen_bool(0.8).then(|| format!("Trees \u{1F332} and \"ore\" {i}\n\tnearby")) }),
            _ => Some(VisionInput::Direct { frame: frame.clone() }),
        };
        let mode = if rng.gen_bool(0.5) { PromptMode::Predictive } else { PromptMode::Conventional };
        let goal = [Item::GoldenPickaxe, Item::IronPickaxe, Item::Furnace][rng.gen_range(0..3)];
        if i % 10 == 9 {
            out.push(PromptBundle::free_description(&frame, goal));
        } else {
            out.push(build_prompt(&observe_cheat(&w), vision.as_ref(), &h, goal, mode));
        }
    }
    out
}

