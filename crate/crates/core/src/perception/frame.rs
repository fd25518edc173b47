//! Symbolic stand-in for the play screen.
//!
//! Text format: `W` rows of `W` symbols each (row-major, north first), then
//! one HUD line `hud time=<day|night|?> biome=<name|?>`. The player is `@`,
//! entities use their glyphs, blocks use [`BlockKind::symbol`], and cells
//! that are out of sight or out of bounds are `?`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::craftworld::{Biome, BlockKind, EntityKind, Pos, TimeOfDay, WorldState};

pub const DEFAULT_WINDOW: usize = 11;
pub const PLAYER_SYMBOL: char = '@';

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Glyph {
    Player,
    Block(BlockKind),
    Entity(EntityKind),
}

impl Glyph {
    pub fn symbol(self) -> char {
        match self {
            Glyph::Player => PLAYER_SYMBOL,
            Glyph::Block(b) => b.symbol(),
            Glyph::Entity(e) => e.symbol(),
        }
    }

    pub fn from_symbol(c: char) -> Option<Glyph> {
        if c == PLAYER_SYMBOL {
            return Some(Glyph::Player);
        }
        EntityKind::from_symbol(c)
            .map(Glyph::Entity)
            .or_else(|| BlockKind::from_symbol(c).map(Glyph::Block))
    }

    pub fn is_unknown(self) -> bool {
        self == Glyph::Block(BlockKind::Unknown)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Hud {
    pub time: Option<TimeOfDay>,
    pub biome: Option<Biome>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct VisualFrame {
    size: usize,
    cells: Vec<Glyph>,
    pub hud: Hud,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FrameError {
    #[error("window size {0} must be odd and at least 5")]
    BadSize(usize),
    #[error("row {row} has {got} symbols, expected {want}")]
    RowLength { row: usize, got: usize, want: usize },
    #[error("unknown symbol {0:?}")]
    Symbol(char),
    #[error("missing or malformed hud line")]
    Hud,
    #[error("center cell must be the player")]
    Center,
}

impl VisualFrame {
    /// Builds a frame from row-major glyphs. The center must be the player.
    pub fn new(size: usize, cells: Vec<Glyph>, hud: Hud) -> Result<Self, FrameError> {
        if size < 5 || size % 2 == 0 {
            return Err(FrameError::BadSize(size));
        }
        if cells.len() != size * size {
            return Err(FrameError::RowLength { row: 0, got: cells.len(), want: size * size });
        }
        if cells[(size / 2) * size + size / 2] != Glyph::Player {
            return Err(FrameError::Center);
        }
        Ok(VisualFrame { size, cells, hud })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn half(&self) -> i32 {
        (self.size / 2) as i32
    }

    /// Glyph at a player-relative offset; `None` outside the window.
    pub fn at(&self, dx: i32, dy: i32) -> Option<Glyph> {
        let h = self.half();
        if dx.abs() > h || dy.abs() > h {
            return None;
        }
        Some(self.cells[((dy + h) as usize) * self.size + (dx + h) as usize])
    }

    /// Non-center cells with their offsets, row-major.
    pub fn cells(&self) -> impl Iterator<Item = ((i32, i32), Glyph)> + '_ {
        let h = self.half();
        (-h..=h)
            .flat_map(move |dy| (-h..=h).map(move |dx| (dx, dy)))
            .filter(|&o| o != (0, 0))
            .map(|(dx, dy)| ((dx, dy), self.at(dx, dy).unwrap()))
    }

    pub fn visible_fraction(&self) -> f64 {
        let total = self.size * self.size - 1;
        let seen = self.cells().filter(|(_, g)| !g.is_unknown()).count();
        seen as f64 / total as f64
    }

    pub fn fully_unknown(&self) -> bool {
        self.cells().all(|(_, g)| g.is_unknown())
    }

    /// Same frame with every non-center cell and the HUD blanked.
    pub fn blanked(&self) -> VisualFrame {
        let mut out = self.clone();
        for (i, c) in out.cells.iter_mut().enumerate() {
            if i != (self.size / 2) * self.size + self.size / 2 {
                *c = Glyph::Block(BlockKind::Unknown);
            }
        }
        out.hud = Hud::default();
        out
    }
}

impl fmt::Display for VisualFrame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.cells.chunks(self.size) {
            let line: String = row.iter().map(|g| g.symbol()).collect();
            writeln!(f, "{line}")?;
        }
        write!(
            f,
            "hud time={} biome={}",
            self.hud.time.map_or("?", |t| t.name()),
            self.hud.biome.map_or("?", |b| b.name())
        )
    }
}

impl FromStr for VisualFrame {
    type Err = FrameError;

    fn from_str(s: &str) -> Result<Self, FrameError> {
        let lines: Vec<&str> = s.lines().filter(|l| !l.trim().is_empty()).collect();
        let (hud_line, rows) = lines.split_last().ok_or(FrameError::Hud)?;
        let size = rows.len();
        let mut cells = Vec::with_capacity(size * size);
        for (r, row) in rows.iter().enumerate() {
            let syms: Vec<char> = row.trim().chars().collect();
            if syms.len() != size {
                return Err(FrameError::RowLength { row: r, got: syms.len(), want: size });
            }
            for c in syms {
                cells.push(Glyph::from_symbol(c).ok_or(FrameError::Symbol(c))?);
            }
        }
        let hud = parse_hud(hud_line).ok_or(FrameError::Hud)?;
        VisualFrame::new(size, cells, hud)
    }
}

fn parse_hud(line: &str) -> Option<Hud> {
    let mut parts = line.split_whitespace();
    if parts.next()? != "hud" {
        return None;
    }
    let mut hud = Hud::default();
    for kv in parts {
        let (k, v) = kv.split_once('=')?;
        match k {
            "time" if v == "?" => hud.time = None,
            "time" => {
                hud.time = Some(match v {
                    "day" => TimeOfDay::Day,
                    "night" => TimeOfDay::Night,
                    _ => return None,
                })
            }
            "biome" if v == "?" => hud.biome = None,
            "biome" => hud.biome = Some(Biome::from_name(v)?),
            _ => return None,
        }
    }
    Some(hud)
}

impl From<VisualFrame> for String {
    fn from(f: VisualFrame) -> String {
        f.to_string()
    }
}

impl TryFrom<String> for VisualFrame {
    type Error = FrameError;

    fn try_from(s: String) -> Result<Self, FrameError> {
        s.parse()
    }
}

/// Rendering knobs beyond the window size.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RenderOptions {
    /// Fraction of night frames whose time glyph is not drawn.
    pub night_time_hidden: f64,
    /// The biome label is drawn only when at least this fraction of the
    /// window is visible.
    pub biome_min_visible: f64,
    /// Probability that a whole frame comes out blank (seeded by tick).
    pub dropout: f64,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions { night_time_hidden: 0.5, biome_min_visible: 0.25, dropout: 0.0 }
    }
}

/// Deterministic value in [0, 1) from the world seed, tick and a salt.
fn unit_hash(seed: u64, tick: u64, salt: u64) -> f64 {
    // splitmix64 finalizer
    let mut z = seed ^ tick.wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ salt.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    (z >> 11) as f64 / (1u64 << 53) as f64
}

/// a/b with b > 0.
#[derive(Clone, Copy)]
struct Frac(i64, i64);

impl Frac {
    fn new(n: i64, d: i64) -> Frac {
        if d < 0 {
            Frac(-n, -d)
        } else {
            Frac(n, d)
        }
    }

    fn lt(self, o: Frac) -> bool {
        self.0 * o.1 < o.0 * self.1
    }
}

/// Open parameter interval of t where `t * b` lies strictly inside
/// `(c - 1, c + 1)`, all in doubled coordinates. `None` is the whole line.
fn slab(b: i64, c: i64) -> Option<(Frac, Frac)> {
    if b == 0 {
        return None;
    }
    let (lo, hi) = (Frac::new(c - 1, b), Frac::new(c + 1, b));
    Some(if b > 0 { (lo, hi) } else { (hi, lo) })
}

/// Whether the segment between the centers of (0,0) and (dx,dy) passes
/// through the open interior of cell (cx,cy). Touching a corner or running
/// along an edge does not count.
pub(crate) fn segment_hits_cell(dx: i32, dy: i32, cx: i32, cy: i32) -> bool {
    let (bx, by) = (2 * dx as i64, 2 * dy as i64);
    let (cx2, cy2) = (2 * cx as i64, 2 * cy as i64);
    let mut lo = Frac(0, 1);
    let mut hi = Frac(1, 1);
    for (b, c) in [(bx, cx2), (by, cy2)] {
        match slab(b, c) {
            None => {
                if !(c - 1 < 0 && 0 < c + 1) {
                    return false;
                }
            }
            Some((a, z)) => {
                if lo.lt(a) {
                    lo = a;
                }
                if z.lt(hi) {
                    hi = z;
                }
            }
        }
    }
    lo.lt(hi)
}

/// Cells of a W×W window visible from the center.
pub(crate) fn visibility(state: &WorldState, center: Pos, half: i32) -> Vec<bool> {
    let size = (2 * half + 1) as usize;
    let opaque = |dx: i32, dy: i32| {
        state
            .block(Pos::new(center.x + dx, center.y + dy))
            .map_or(false, |b| b.is_opaque())
    };
    let mut out = vec![false; size * size];
    for dy in -half..=half {
        for dx in -half..=half {
            let idx = ((dy + half) as usize) * size + (dx + half) as usize;
            if (dx, dy) == (0, 0) {
                out[idx] = true;
                continue;
            }
            if !state.in_bounds(Pos::new(center.x + dx, center.y + dy)) {
                continue;
            }
            let (x0, x1) = (dx.min(0), dx.max(0));
            let (y0, y1) = (dy.min(0), dy.max(0));
            let mut clear = true;
            'cells: for cy in y0..=y1 {
                for cx in x0..=x1 {
                    if (cx, cy) == (0, 0) || (cx, cy) == (dx, dy) {
                        continue;
                    }
                    if opaque(cx, cy) && segment_hits_cell(dx, dy, cx, cy) {
                        clear = false;
                        break 'cells;
                    }
                }
            }
            out[idx] = clear;
        }
    }
    out
}

pub fn render_frame(state: &WorldState, window_size: usize) -> VisualFrame {
    render_frame_with(state, window_size, &RenderOptions::default())
}

/// # Panics
/// When `window_size` is even or below 5.
pub fn render_frame_with(state: &WorldState, window_size: usize, opts: &RenderOptions) -> VisualFrame {
    assert!(window_size >= 5 && window_size % 2 == 1, "window size must be odd and >= 5");
    let half = (window_size / 2) as i32;
    let c = state.player.pos;
    let vis = visibility(state, c, half);
    let mut cells = Vec::with_capacity(window_size * window_size);
    for dy in -half..=half {
        for dx in -half..=half {
            let idx = ((dy + half) as usize) * window_size + (dx + half) as usize;
            let p = Pos::new(c.x + dx, c.y + dy);
            let g = if (dx, dy) == (0, 0) {
                Glyph::Player
            } else if !vis[idx] {
                Glyph::Block(BlockKind::Unknown)
            } else if let Some(e) = state.entity_at(p) {
                Glyph::Entity(e.kind)
            } else {
                Glyph::Block(state.block(p).unwrap_or(BlockKind::Unknown))
            };
            cells.push(g);
        }
    }
    let mut frame = VisualFrame { size: window_size, cells, hud: Hud::default() };
    let time_hidden = state.time_of_day == TimeOfDay::Night
        && unit_hash(state.rng_seed, state.tick, 1) < opts.night_time_hidden;
    frame.hud.time = (!time_hidden).then_some(state.time_of_day);
    frame.hud.biome = (frame.visible_fraction() >= opts.biome_min_visible).then(|| state.biome());
    if opts.dropout > 0.0 && unit_hash(state.rng_seed, state.tick, 2) < opts.dropout {
        frame = frame.blanked();
    }
    frame
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::craftworld::{generate_world, Entity, WorldConfig};

    fn flat() -> WorldState {
        WorldState::flat(32, 32, Biome::Forest)
    }

    #[test]
    fn stone_ring_hides_outer_ring() {
        let mut s = flat();
        let c = s.player.pos;
        for dy in -1..=1 {
            for dx in -1..=1 {
                if (dx, dy) != (0, 0) {
                    s.set_block(Pos::new(c.x + dx, c.y + dy), BlockKind::Stone);
                }
            }
        }
        let f = render_frame(&s, 5);
        for ((dx, dy), g) in f.cells() {
            if dx.abs().max(dy.abs()) == 2 {
                assert!(g.is_unknown(), "({dx},{dy}) visible");
            } else {
                assert_eq!(g, Glyph::Block(BlockKind::Stone));
            }
        }
        // 8 of 24 visible: still above the biome threshold.
        assert_eq!(f.hud.biome, Some(Biome::Forest));
    }

    #[test]
    fn open_field_matches_grid() {
        let mut s = flat();
        let c = s.player.pos;
        s.set_block(Pos::new(c.x + 2, c.y), BlockKind::IronOre);
        s.entities.push(Entity { kind: EntityKind::Cow, pos: Pos::new(c.x - 1, c.y - 2) });
        let f = render_frame(&s, 5);
        for ((dx, dy), g) in f.cells() {
            let p = Pos::new(c.x + dx, c.y + dy);
            let want = match s.entity_at(p) {
                Some(e) => Glyph::Entity(e.kind),
                None => Glyph::Block(s.block(p).unwrap()),
            };
            assert_eq!(g, want);
        }
        assert_eq!(f.hud, Hud { time: Some(TimeOfDay::Day), biome: Some(Biome::Forest) });
    }

    #[test]
    fn edge_of_map_is_unknown() {
        let mut s = flat();
        s.player.pos = Pos::new(0, 0);
        let f = render_frame(&s, 5);
        assert!(f.at(-1, 0).unwrap().is_unknown());
        assert!(f.at(0, -2).unwrap().is_unknown());
        assert_eq!(f.at(1, 1), Some(Glyph::Block(BlockKind::Ground)));
    }

    #[test]
    fn corner_graze_does_not_occlude() {
        // Segment to (2,2) passes exactly through the corner shared by
        // (0,1) and (1,0); neither blocks it. (1,1) does.
        assert!(!segment_hits_cell(2, 2, 1, 0));
        assert!(!segment_hits_cell(2, 2, 0, 1));
        assert!(segment_hits_cell(2, 2, 1, 1));
        // Straight line runs through the middle of (1,0).
        assert!(segment_hits_cell(3, 0, 1, 0));
        assert!(!segment_hits_cell(3, 0, 1, 1));
        // Shallow line clips (1,0) then (2,1).
        assert!(segment_hits_cell(4, 1, 1, 0));
        assert!(segment_hits_cell(4, 1, 3, 1));
        assert!(!segment_hits_cell(4, 1, 1, 1));
    }

    /// Brute-force oracle: sample the segment densely and test the open
    /// interior of each opaque cell in floating point.
    fn sampled_visible(s: &WorldState, dx: i32, dy: i32) -> bool {
        let c = s.player.pos;
        let n = 4000;
        for k in 1..n {
            let t = k as f64 / n as f64;
            let (x, y) = (t * dx as f64, t * dy as f64);
            let (cx, cy) = (x.round() as i32, y.round() as i32);
            if (cx, cy) == (0, 0) || (cx, cy) == (dx, dy) {
                continue;
            }
            let inside = (x - cx as f64).abs() < 0.5 - 1e-9 && (y - cy as f64).abs() < 0.5 - 1e-9;
            let opaque = s.block(Pos::new(c.x + cx, c.y + cy)).map_or(false, |b| b.is_opaque());
            if inside && opaque {
                return false;
            }
        }
        true
    }

    #[test]
    fn occlusion_matches_sampled_ray_cast() {
        let cfg = WorldConfig::default();
        for seed in 0..12 {
            let mut s = generate_world(seed, &cfg).unwrap();
            // Move the player into busier terrain.
            let (w, h) = (s.width, s.height);
            s.player.pos = Pos::new((seed as i32 * 7 + 9) % (w - 12) + 6, (seed as i32 * 11 + 5) % (h - 12) + 6);
            let f = render_frame(&s, DEFAULT_WINDOW);
            for ((dx, dy), g) in f.cells() {
                assert_eq!(
                    !g.is_unknown(),
                    sampled_visible(&s, dx, dy),
                    "seed {seed} offset ({dx},{dy})"
                );
            }
        }
    }

    #[test]
    fn text_round_trip() {
        let s = generate_world(5, &WorldConfig::default()).unwrap();
        let f = render_frame(&s, DEFAULT_WINDOW);
        let text = f.to_string();
        assert_eq!(text.lines().count(), DEFAULT_WINDOW + 1);
        assert!(text.lines().last().unwrap().starts_with("hud "));
        assert_eq!(text.parse::<VisualFrame>().unwrap(), f);
        let json = serde_json::to_string(&f).unwrap();
        assert_eq!(serde_json::from_str::<VisualFrame>(&json).unwrap(), f);
    }

    #[test]
    fn night_hides_time_on_some_frames() {
        let mut s = flat();
        s.time_of_day = TimeOfDay::Night;
        let hidden = (600..1200)
            .filter(|&t| {
                s.tick = t;
                render_frame(&s, 5).hud.time.is_none()
            })
            .count();
        assert!(hidden > 200 && hidden < 400, "{hidden}");
        s.time_of_day = TimeOfDay::Day;
        assert!((0..100).all(|t| {
            s.tick = t;
            render_frame(&s, 5).hud.time == Some(TimeOfDay::Day)
        }));
    }

    #[test]
    fn rejects_bad_text() {
        assert!("".parse::<VisualFrame>().is_err());
        assert!("...\n.@.\n...\nhud time=day biome=forest".parse::<VisualFrame>().is_err());
        let ok = ".....\n.....\n..@..\n.....\n.....\nhud time=? biome=?";
        assert!(ok.parse::<VisualFrame>().is_ok());
        assert!(ok.replace('@', ".").parse::<VisualFrame>().is_err());
    }
}
