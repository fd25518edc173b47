use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::elements::{ElementReport, ELEMENT_FIELDS};

/// Field name used for free-description outputs.
pub const DESCRIPTION_FIELD: &str = "description";

/// What the vision encoder produced on one iteration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum VisionRecord {
    Elements { report: ElementReport },
    /// `text` is `None` when the encoder call itself failed.
    Free { text: Option<String> },
    /// The frame went to the backend as-is; nothing to score.
    Direct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FieldCount {
    pub non_na: u32,
    pub total: u32,
}

impl FieldCount {
    pub fn rate(&self) -> f64 {
        if self.total == 0 {
            0.0
        } else {
            self.non_na as f64 / self.total as f64
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ExtractionStats {
    pub fields: BTreeMap<String, FieldCount>,
}

impl ExtractionStats {
    pub fn rate(&self, field: &str) -> Option<f64> {
        self.fields.get(field).map(FieldCount::rate)
    }

    pub fn overall(&self) -> f64 {
        let (n, t) = self
            .fields
            .values()
            .fold((0u32, 0u32), |(n, t), c| (n + c.non_na, t + c.total));
        if t == 0 {
            0.0
        } else {
            n as f64 / t as f64
        }
    }

    pub fn merge(&mut self, other: &ExtractionStats) {
        for (k, c) in &other.fields {
            let e = self.fields.entry(k.clone()).or_default();
            e.non_na += c.non_na;
            e.total += c.total;
        }
    }

    fn tally(&mut self, field: &str, present: bool) {
        let e = self.fields.entry(field.to_string()).or_default();
        e.total += 1;
        e.non_na += present as u32;
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StatsError {
    #[error("no vision outputs to score")]
    Empty,
}

/// Free text counts as N/A when it is empty or just "N/A".
pub fn is_na_text(text: &str) -> bool {
    let t = text.trim().trim_end_matches('.');
    t.is_empty() || t.eq_ignore_ascii_case("n/a")
}

pub fn extraction_stats<'a>(
    records: impl IntoIterator<Item = &'a VisionRecord>,
) -> Result<ExtractionStats, StatsError> {
    let mut stats = ExtractionStats::default();
    let mut seen = 0usize;
    for r in records {
        match r {
            VisionRecord::Elements { report } => {
                seen += 1;
                for (field, present) in ELEMENT_FIELDS.iter().zip(report.present()) {
                    stats.tally(field, present);
                }
            }
            VisionRecord::Free { text } => {
                seen += 1;
                stats.tally(DESCRIPTION_FIELD, text.as_deref().is_some_and(|t| !is_na_text(t)));
            }
            VisionRecord::Direct => {}
        }
    }
    if seen == 0 {
        return Err(StatsError::Empty);
    }
    Ok(stats)
}
