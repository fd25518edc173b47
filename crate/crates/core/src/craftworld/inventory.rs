use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::item::Item;

pub const INVENTORY_SLOTS: usize = 36;

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
pub enum InventoryError {
    #[error("inventory full ({INVENTORY_SLOTS} slots)")]
    Full,
    #[error("need {need} {item}, have {have}")]
    Short { item: Item, need: u32, have: u32 },
    #[error("`{0}` cannot be held")]
    NotHoldable(Item),
}

/// Item counts, one kind per slot, at most [`INVENTORY_SLOTS`] kinds.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Inventory(BTreeMap<Item, u32>);

impl Inventory {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds an inventory without the slot check; fixtures only.
    pub fn from_counts<I: IntoIterator<Item = (Item, u32)>>(counts: I) -> Self {
        let mut inv = Inventory::new();
        for (item, n) in counts {
            if n > 0 {
                *inv.0.entry(item).or_insert(0) += n;
            }
        }
        inv
    }

    /// Count of `item`; class names sum over their species.
    pub fn count(&self, item: Item) -> u32 {
        self.0
            .iter()
            .filter(|(k, _)| item.matches(**k))
            .map(|(_, n)| *n)
            .sum()
    }

    pub fn slots(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Item, u32)> + '_ {
        self.0.iter().map(|(k, v)| (*k, *v))
    }

    pub fn add(&mut self, item: Item, n: u32) -> Result<(), InventoryError> {
        if n == 0 {
            return Ok(());
        }
        if !item.is_holdable() {
            return Err(InventoryError::NotHoldable(item));
        }
        if !self.0.contains_key(&item) && self.0.len() >= INVENTORY_SLOTS {
            return Err(InventoryError::Full);
        }
        *self.0.entry(item).or_insert(0) += n;
        Ok(())
    }

    /// Removes `n` units matching `item`, taking concrete kinds in item order.
    /// Returns what was taken. Leaves the inventory untouched on shortage.
    pub fn take(&mut self, item: Item, n: u32) -> Result<Vec<(Item, u32)>, InventoryError> {
        let have = self.count(item);
        if have < n {
            return Err(InventoryError::Short { item, need: n, have });
        }
        let mut left = n;
        let mut taken = Vec::new();
        let keys: Vec<Item> = self.0.keys().copied().filter(|k| item.matches(*k)).collect();
        for key in keys {
            if left == 0 {
                break;
            }
            let slot = self.0.get_mut(&key).expect("key present");
            let t = (*slot).min(left);
            *slot -= t;
            left -= t;
            if *slot == 0 {
                self.0.remove(&key);
            }
            if t > 0 {
                taken.push((key, t));
            }
        }
        Ok(taken)
    }

    /// Signed per-item difference `self - before`, zero entries omitted.
    pub fn delta_since(&self, before: &Inventory) -> BTreeMap<Item, i64> {
        let mut out = BTreeMap::new();
        for (k, v) in &self.0 {
            out.insert(*k, *v as i64);
        }
        for (k, v) in &before.0 {
            *out.entry(*k).or_insert(0) -= *v as i64;
        }
        out.retain(|_, v| *v != 0);
        out
    }
}
