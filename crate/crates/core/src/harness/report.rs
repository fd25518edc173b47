//! Per-arm milestone tables and their CSV/JSON forms.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::trial::{MilestoneHit, TrialRecord};
use super::transcript::SCHEMA_VERSION;
use crate::craftworld::Item;
use crate::curriculum::{match_rate, MatchStats, MILESTONES};
use crate::perception::{extraction_stats, ExtractionStats, FieldCount, DESCRIPTION_FIELD, ELEMENT_FIELDS};

/// Shown for a mean with no achieving trial.
pub const EMPTY_MEAN: &str = "—";

#[derive(Debug, Error)]
pub enum ReportError {
    #[error("no trial records to aggregate")]
    NoRecords,
    #[error("arm {0} has no trial records")]
    MissingArm(String),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("csv row {row}: {detail}")]
    BadRow { row: usize, detail: String },
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MilestoneCell {
    pub milestone: Item,
    /// Trials that reached the milestone inside the cap.
    pub achieved: u32,
    /// Trials that did not start with the milestone already held.
    pub total: u32,
    pub iteration_sum: u64,
    /// Mean first-hit iteration over achieving trials, two decimals.
    pub mean: Option<f64>,
}

impl MilestoneCell {
    fn new(milestone: Item, achieved: u32, total: u32, iteration_sum: u64) -> Self {
        let mean = (achieved > 0).then(|| round2(iteration_sum as f64 / achieved as f64));
        MilestoneCell { milestone, achieved, total, iteration_sum, mean }
    }

    pub fn mean_text(&self) -> String {
        self.mean.map_or_else(|| EMPTY_MEAN.to_string(), |m| format!("{m:.2}"))
    }
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ArmSummary {
    pub arm: String,
    pub trials: u32,
    pub aborted: u32,
    pub cells: Vec<MilestoneCell>,
    /// Only for arms that asked for both responses.
    pub matching: Option<MatchStats>,
    /// Only for arms with a scored vision encoder.
    pub extraction: Option<ExtractionStats>,
}

impl ArmSummary {
    pub fn cell(&self, m: Item) -> Option<&MilestoneCell> {
        self.cells.iter().find(|c| c.milestone == m)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MilestoneTable {
    pub schema_version: u32,
    pub arms: Vec<ArmSummary>,
    pub footnotes: Vec<String>,
}

impl MilestoneTable {
    pub fn arm(&self, label: &str) -> Option<&ArmSummary> {
        self.arms.iter().find(|a| a.arm == label)
    }
}

pub fn footnotes() -> Vec<String> {
    vec![
        "Means count only trials that reached the milestone within the iteration cap; achieved/total is shown beside each mean.".into(),
        format!("{EMPTY_MEAN} marks a milestone no trial reached."),
        "Milestones held at the start of a trial are left out of total.".into(),
        "Failed trials are not counted at the cap; doing so would raise any mean shown with fewer achieved than total.".into(),
    ]
}

fn summarize(arm: &str, records: &[&TrialRecord]) -> ArmSummary {
    let cells = MILESTONES
        .iter()
        .map(|m| {
            let (mut achieved, mut total, mut sum) = (0u32, 0u32, 0u64);
            for r in records {
                match r.milestones.get(m).copied().unwrap_or(MilestoneHit::Censored) {
                    MilestoneHit::Iteration(i) => {
                        achieved += 1;
                        total += 1;
                        sum += i as u64;
                    }
                    MilestoneHit::Censored => total += 1,
                    MilestoneHit::Preheld => {}
                }
            }
            MilestoneCell::new(*m, achieved, total, sum)
        })
        .collect();
    let dual = records.iter().any(|r| r.config.dual_prompt);
    let matching = if dual { match_rate(records.iter().flat_map(|r| r.proposals())).ok() } else { None };
    let extraction = extraction_stats(records.iter().flat_map(|r| r.vision_records())).ok();
    ArmSummary {
        arm: arm.to_string(),
        trials: records.len() as u32,
        aborted: records.iter().filter(|r| r.aborted.is_some()).count() as u32,
        cells,
        matching,
        extraction,
    }
}

/// Groups by arm label, arms sorted by label.
pub fn aggregate(records: &[TrialRecord]) -> Result<MilestoneTable, ReportError> {
    if records.is_empty() {
        return Err(ReportError::NoRecords);
    }
    let mut groups: BTreeMap<&str, Vec<&TrialRecord>> = BTreeMap::new();
    for r in records {
        groups.entry(r.config.arm.as_str()).or_default().push(r);
    }
    Ok(MilestoneTable {
        schema_version: SCHEMA_VERSION,
        arms: groups.iter().map(|(a, rs)| summarize(a, rs)).collect(),
        footnotes: footnotes(),
    })
}

/// Like [`aggregate`], but every listed arm must have records.
pub fn aggregate_arms(records: &[TrialRecord], arms: &[&str]) -> Result<MilestoneTable, ReportError> {
    for a in arms {
        if !records.iter().any(|r| r.config.arm == *a) {
            return Err(ReportError::MissingArm(a.to_string()));
        }
    }
    aggregate(records)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct CsvRow {
    schema_version: u32,
    arm: String,
    trials: u32,
    aborted: u32,
    milestone: Item,
    mean: String,
    achieved: u32,
    total: u32,
    iteration_sum: u64,
    match_pairs: Option<u32>,
    match_matched: Option<u32>,
    match_excluded: Option<u32>,
    ext_biome: Option<String>,
    ext_time: Option<String>,
    ext_nearby_blocks: Option<String>,
    ext_nearby_entities: Option<String>,
    ext_description: Option<String>,
}

const EXT_COLUMNS: [&str; 5] =
    [ELEMENT_FIELDS[0], ELEMENT_FIELDS[1], ELEMENT_FIELDS[2], ELEMENT_FIELDS[3], DESCRIPTION_FIELD];

fn ext_cell(stats: &Option<ExtractionStats>, field: &str) -> Option<String> {
    stats.as_ref()?.fields.get(field).map(|c| format!("{}/{}", c.non_na, c.total))
}

fn parse_ext(s: &str, row: usize) -> Result<FieldCount, ReportError> {
    let bad = || ReportError::BadRow { row, detail: format!("extraction cell {s:?}") };
    let (a, b) = s.split_once('/').ok_or_else(bad)?;
    Ok(FieldCount { non_na: a.parse().map_err(|_| bad())?, total: b.parse().map_err(|_| bad())? })
}

pub fn to_csv(table: &MilestoneTable) -> Result<String, ReportError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for arm in &table.arms {
        for c in &arm.cells {
            w.serialize(CsvRow {
                schema_version: table.schema_version,
                arm: arm.arm.clone(),
                trials: arm.trials,
                aborted: arm.aborted,
                milestone: c.milestone,
                mean: c.mean_text(),
                achieved: c.achieved,
                total: c.total,
                iteration_sum: c.iteration_sum,
                match_pairs: arm.matching.map(|m| m.pairs_total),
                match_matched: arm.matching.map(|m| m.pairs_matched),
                match_excluded: arm.matching.map(|m| m.excluded),
                ext_biome: ext_cell(&arm.extraction, EXT_COLUMNS[0]),
                ext_time: ext_cell(&arm.extraction, EXT_COLUMNS[1]),
                ext_nearby_blocks: ext_cell(&arm.extraction, EXT_COLUMNS[2]),
                ext_nearby_entities: ext_cell(&arm.extraction, EXT_COLUMNS[3]),
                ext_description: ext_cell(&arm.extraction, EXT_COLUMNS[4]),
            })?;
        }
    }
    let bytes = w.into_inner().map_err(|e| csv::Error::from(e.into_error()))?;
    Ok(String::from_utf8(bytes).expect("csv is utf-8"))
}

pub fn from_csv(text: &str) -> Result<MilestoneTable, ReportError> {
    let mut r = csv::Reader::from_reader(text.as_bytes());
    let mut arms: Vec<ArmSummary> = Vec::new();
    let mut version = SCHEMA_VERSION;
    for (i, row) in r.deserialize::<CsvRow>().enumerate() {
        let row = row?;
        let n = i + 2;
        version = row.schema_version;
        let cell = MilestoneCell::new(row.milestone, row.achieved, row.total, row.iteration_sum);
        if cell.mean_text() != row.mean {
            return Err(ReportError::BadRow { row: n, detail: format!("mean {} disagrees with counts", row.mean) });
        }
        let matching = match (row.match_pairs, row.match_matched, row.match_excluded) {
            (Some(t), Some(m), Some(e)) if t > 0 => {
                Some(MatchStats { pairs_total: t, pairs_matched: m, rate: m as f64 / t as f64, excluded: e })
            }
            (None, None, None) => None,
            _ => return Err(ReportError::BadRow { row: n, detail: "incomplete match columns".into() }),
        };
        let mut ext = ExtractionStats::default();
        let cols = [&row.ext_biome, &row.ext_time, &row.ext_nearby_blocks, &row.ext_nearby_entities, &row.ext_description];
        for (field, v) in EXT_COLUMNS.iter().zip(cols) {
            if let Some(v) = v {
                ext.fields.insert(field.to_string(), parse_ext(v, n)?);
            }
        }
        let extraction = (!ext.fields.is_empty()).then_some(ext);
        match arms.last_mut() {
            Some(a) if a.arm == row.arm => a.cells.push(cell),
            _ => arms.push(ArmSummary {
                arm: row.arm,
                trials: row.trials,
                aborted: row.aborted,
                cells: vec![cell],
                matching,
                extraction,
            }),
        }
    }
    Ok(MilestoneTable { schema_version: version, arms, footnotes: footnotes() })
}

pub fn to_json(table: &MilestoneTable) -> Result<String, ReportError> {
    Ok(serde_json::to_string_pretty(table)?)
}

/// Plain-text table for terminals.
pub fn render_text(table: &MilestoneTable) -> String {
    let mut out = String::new();
    let mut header = vec!["arm".to_string()];
    header.extend(MILESTONES.iter().map(|m| m.name().to_string()));
    header.push("match".into());
    header.push("extraction".into());
    let mut rows = vec![header];
    for a in &table.arms {
        let mut row = vec![format!("{} (n={})", a.arm, a.trials)];
        for m in MILESTONES {
            row.push(a.cell(m).map_or_else(String::new, |c| format!("{} ({}/{})", c.mean_text(), c.achieved, c.total)));
        }
        row.push(a.matching.map_or_else(|| EMPTY_MEAN.into(), |m| format!("{:.2} ({}/{})", m.rate, m.pairs_matched, m.pairs_total)));
        row.push(a.extraction.as_ref().map_or_else(|| EMPTY_MEAN.into(), |e| format!("{:.2}", e.overall())));
        rows.push(row);
    }
    let widths: Vec<usize> =
        (0..rows[0].len()).map(|i| rows.iter().map(|r| r[i].chars().count()).max().unwrap_or(0)).collect();
    for r in &rows {
        let cells: Vec<String> =
            r.iter().zip(&widths).map(|(c, w)| format!("{c}{}", " ".repeat(w - c.chars().count()))).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    for (i, f) in table.footnotes.iter().enumerate() {
        out.push_str(&format!("[{}] {f}\n", i + 1));
    }
    out
}
