//! Inputs to the curriculum: ground-truth observations, symbolic frames and
//! the visual encodings read off them.

mod elements;
mod frame;
mod free;
mod observe;
mod stats;

pub(crate) use elements::distinct_by_distance;
pub use elements::{encode_elements, ElementReport, Offset, ELEMENT_FIELDS};
pub use frame::{
    render_frame, render_frame_with, FrameError, Glyph, Hud, RenderOptions, VisualFrame, DEFAULT_WINDOW,
    PLAYER_SYMBOL,
};
pub use free::{describe_frame, encode_free, relevant_blocks, FREE_TEXT_CAP};
pub use observe::{observe_cheat, Observation, CHEAT_RADIUS};
pub use stats::{extraction_stats, is_na_text, ExtractionStats, FieldCount, StatsError, VisionRecord, DESCRIPTION_FIELD};
