//! GUI input-event encoders: the 182-d raw multi-hot view (v1), the typed
//! meta-action slot view (v2), lag-aware temporal alignment onto the latent
//! timeline, and the Fourier mouse-trajectory embedding.
//!
//! The 13-entry mouse map and 169-entry keyboard map are frozen here (and
//! exportable as JSON via [`index_map_json`]) so vectors stay stable across
//! versions: 95 printable ASCII glyphs, 22 named keys, 26 ctrl+letter and
//! 26 alt+letter chords.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seeded;

#[derive(Debug, Error, PartialEq)]
pub enum CodecError {
    #[error("unknown key: {0}")]
    UnknownKey(String),
    #[error("invalid config: {0}")]
    InvalidConfig(String),
}

// ── Frozen index maps ───────────────────────────────────────────────

pub const MOUSE_DIM: usize = 13;
pub const KEYBOARD_DIM: usize = 169;
pub const RAW_DIM: usize = MOUSE_DIM + KEYBOARD_DIM;

/// One 182-entry multi-hot row (13 mouse + 169 keyboard flags).
pub type RawActionVector = Vec<u8>;

pub const MOUSE_ENTRIES: [&str; MOUSE_DIM] = [
    "left_down",
    "left_up",
    "left_double",
    "left_drag_start",
    "left_drag_end",
    "right_down",
    "right_up",
    "right_double",
    "right_drag_start",
    "right_drag_end",
    "scroll_up",
    "scroll_down",
    "move",
];

pub const NAMED_KEYS: [&str; 22] = [
    "enter", "tab", "escape", "backspace", "delete", "insert", "home", "end", "pageup",
    "pagedown", "up", "down", "left", "right", "f1", "f2", "f3", "f4", "f5", "f6", "f7", "f8",
];

/// Keyboard index for a printable ASCII glyph.
pub fn printable_index(c: char) -> Option<usize> {
    let code = c as u32;
    (0x20..=0x7E).contains(&code).then(|| (code - 0x20) as usize)
}

/// Keyboard index for a named key (lowercase).
pub fn named_key_index(name: &str) -> Option<usize> {
    NAMED_KEYS.iter().position(|&k| k == name).map(|i| 95 + i)
}

/// Keyboard index for a chord ("ctrl+a".."ctrl+z", "alt+a".."alt+z").
pub fn chord_index(chord: &str) -> Option<usize> {
    let (modifier, key) = chord.split_once('+')?;
    let key = key.chars().next()?;
    if !key.is_ascii_lowercase() || key.len_utf8() != chord.len() - modifier.len() - 1 {
        return None;
    }
    let letter = key as usize - 'a' as usize;
    match modifier {
        "ctrl" => Some(95 + 22 + letter),
        "alt" => Some(95 + 22 + 26 + letter),
        _ => None,
    }
}

/// Keyboard index for any key spelled as the event layer spells it.
pub fn keyboard_index(name: &str) -> Option<usize> {
    let mut chars = name.chars();
    if let (Some(c), None) = (chars.next(), chars.next()) {
        if let Some(i) = printable_index(c) {
            return Some(i);
        }
    }
    named_key_index(name).or_else(|| chord_index(name))
}

/// The frozen name→index tables plus the type-4 shortcut vocabulary,
/// published so external tooling can verify vector layouts bit-exactly.
pub fn index_map_json() -> serde_json::Value {
    let mouse: serde_json::Map<String, serde_json::Value> = MOUSE_ENTRIES
        .iter()
        .enumerate()
        .map(|(i, name)| (name.to_string(), serde_json::Value::from(i)))
        .collect();
    let mut keyboard = serde_json::Map::new();
    for code in 0x20u32..=0x7E {
        let c = char::from_u32(code).unwrap();
        keyboard.insert(c.to_string(), serde_json::Value::from(printable_index(c).unwrap()));
    }
    for name in NAMED_KEYS {
        keyboard.insert(name.to_string(), serde_json::Value::from(named_key_index(name).unwrap()));
    }
    let mut shortcuts = Vec::new();
    for modifier in ["ctrl", "alt"] {
        for letter in b'a'..=b'z' {
            let chord = format!("{modifier}+{}", letter as char);
            keyboard.insert(chord.clone(), serde_json::Value::from(chord_index(&chord).unwrap()));
            shortcuts.push(chord);
        }
    }
    for name in NAMED_KEYS {
        shortcuts.push(name.to_string());
    }
    serde_json::json!({
        "raw_dim": RAW_DIM,
        "mouse": mouse,
        "keyboard": keyboard,
        "shortcut_vocabulary": shortcuts,
    })
}

// ── Event model ─────────────────────────────────────────────────────

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MouseButton {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ButtonAction {
    Down,
    Up,
    Double,
    DragStart,
    DragEnd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScrollDirection {
    Up,
    Down,
}

/// One input event inside a frame, in event-time order.
#[derive(Debug, Clone, PartialEq)]
pub enum InputEvent {
    Button { button: MouseButton, action: ButtonAction },
    Scroll { direction: ScrollDirection, amount: f64 },
    Move,
    Char(char),
    Key(String),
    Chord(String),
}

fn mouse_index(button: MouseButton, action: ButtonAction) -> usize {
    let base = match button {
        MouseButton::Left => 0,
        MouseButton::Right => 5,
    };
    base + match action {
        ButtonAction::Down => 0,
        ButtonAction::Up => 1,
        ButtonAction::Double => 2,
        ButtonAction::DragStart => 3,
        ButtonAction::DragEnd => 4,
    }
}

/// Raw (v1) encoding: one 182-entry multi-hot row per frame. Frames with
/// no events are all-zero; keys outside the frozen map are an error.
pub fn encode_raw(frames: &[Vec<InputEvent>]) -> Result<Vec<RawActionVector>, CodecError> {
    frames
        .iter()
        .map(|events| {
            let mut row = vec![0u8; RAW_DIM];
            for event in events {
                match event {
                    InputEvent::Button { button, action } => {
                        row[mouse_index(*button, *action)] = 1;
                    }
                    InputEvent::Scroll { direction, .. } => {
                        row[match direction {
                            ScrollDirection::Up => 10,
                            ScrollDirection::Down => 11,
                        }] = 1;
                    }
                    InputEvent::Move => row[12] = 1,
                    InputEvent::Char(c) => {
                        let i = printable_index(*c)
                            .ok_or_else(|| CodecError::UnknownKey(c.to_string()))?;
                        row[MOUSE_DIM + i] = 1;
                    }
                    InputEvent::Key(name) => {
                        let i = named_key_index(name)
                            .ok_or_else(|| CodecError::UnknownKey(name.clone()))?;
                        row[MOUSE_DIM + i] = 1;
                    }
                    InputEvent::Chord(chord) => {
                        let i = chord_index(chord)
                            .ok_or_else(|| CodecError::UnknownKey(chord.clone()))?;
                        row[MOUSE_DIM + i] = 1;
                    }
                }
            }
            Ok(row)
        })
        .collect()
}

// ── Meta-action (v2) encoding ───────────────────────────────────────

/// Slots per frame.
pub const SLOTS_PER_FRAME: usize = 2;

/// Typed action slot. Type ids: 0 none, 1 click/drag, 2 scroll, 3 typed
/// text, 4 shortcut.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MetaSlot {
    #[default]
    None,
    ClickDrag {
        button: MouseButton,
        click_count: u8,
        drag_flag: bool,
    },
    Scroll {
        direction: ScrollDirection,
        amount: f64,
    },
    Text {
        text: String,
    },
    Shortcut {
        id: String,
    },
}

impl MetaSlot {
    pub fn type_id(&self) -> u8 {
        match self {
            MetaSlot::None => 0,
            MetaSlot::ClickDrag { .. } => 1,
            MetaSlot::Scroll { .. } => 2,
            MetaSlot::Text { .. } => 3,
            MetaSlot::Shortcut { .. } => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct MetaActionFrame {
    pub slots: [MetaSlot; SLOTS_PER_FRAME],
}

#[derive(Debug, Clone, PartialEq)]
pub struct MetaEncoding {
    pub frames: Vec<MetaActionFrame>,
    /// Slots beyond the per-frame budget, dropped in event-time order.
    pub dropped: usize,
}

/// Meta (v2) encoding. Within one frame: contiguous typed characters
/// collapse to a single text slot; each button's events collapse to one
/// click/drag slot (click_count 2 when a double-click occurred, drag_flag
/// from drag events); scrolls merge per direction with summed amounts;
/// chords and named keys become shortcut slots. Slots keep first-event
/// order; the first [`SLOTS_PER_FRAME`] survive, the rest are counted.
pub fn encode_meta(frames: &[Vec<InputEvent>]) -> MetaEncoding {
    let mut dropped = 0usize;
    let out = frames
        .iter()
        .map(|events| {
            let groups = collapse_frame(events);
            let mut slots = [MetaSlot::None, MetaSlot::None];
            for (i, slot) in groups.into_iter().enumerate() {
                if i < SLOTS_PER_FRAME {
                    slots[i] = slot;
                } else {
                    dropped += 1;
                }
            }
            MetaActionFrame { slots }
        })
        .collect();
    MetaEncoding {
        frames: out,
        dropped,
    }
}

fn collapse_frame(events: &[InputEvent]) -> Vec<MetaSlot> {
    #[derive(PartialEq)]
    enum GroupKey {
        Button(MouseButton),
        Scroll(ScrollDirection),
        Other(usize),
    }
    let mut keys: Vec<GroupKey> = Vec::new();
    let mut slots: Vec<MetaSlot> = Vec::new();
    let mut text_open = false;

    for event in events {
        match event {
            InputEvent::Char(c) => {
                if text_open {
                    if let Some(MetaSlot::Text { text }) = slots.last_mut() {
                        text.push(*c);
                        continue;
                    }
                }
                keys.push(GroupKey::Other(slots.len()));
                slots.push(MetaSlot::Text { text: c.to_string() });
                text_open = true;
                continue;
            }
            InputEvent::Move => {
                // Trajectory channel, not a meta action.
            }
            InputEvent::Button { button, action } => {
                let pos = keys.iter().position(|k| *k == GroupKey::Button(*button));
                let idx = match pos {
                    Some(i) => i,
                    None => {
                        keys.push(GroupKey::Button(*button));
                        slots.push(MetaSlot::ClickDrag {
                            button: *button,
                            click_count: 0,
                            drag_flag: false,
                        });
                        slots.len() - 1
                    }
                };
                if let MetaSlot::ClickDrag {
                    click_count,
                    drag_flag,
                    ..
                } = &mut slots[idx]
                {
                    match action {
                        ButtonAction::Double => *click_count = 2,
                        ButtonAction::DragStart | ButtonAction::DragEnd => *drag_flag = true,
                        _ => {
                            if *click_count == 0 {
                                *click_count = 1;
                            }
                        }
                    }
                }
            }
            InputEvent::Scroll { direction, amount } => {
                let pos = keys.iter().position(|k| *k == GroupKey::Scroll(*direction));
                match pos {
                    Some(i) => {
                        if let MetaSlot::Scroll { amount: a, .. } = &mut slots[i] {
                            *a += amount;
                        }
                    }
                    None => {
                        keys.push(GroupKey::Scroll(*direction));
                        slots.push(MetaSlot::Scroll {
                            direction: *direction,
                            amount: *amount,
                        });
                    }
                }
            }
            InputEvent::Key(name) => {
                keys.push(GroupKey::Other(slots.len()));
                slots.push(MetaSlot::Shortcut { id: name.clone() });
            }
            InputEvent::Chord(chord) => {
                keys.push(GroupKey::Other(slots.len()));
                slots.push(MetaSlot::Shortcut { id: chord.clone() });
            }
        }
        text_open = false;
    }
    // A zero-count click/drag group (drag events only) still reports one press cycle.
    for slot in &mut slots {
        if let MetaSlot::ClickDrag { click_count, .. } = slot {
            if *click_count == 0 {
                *click_count = 1;
            }
        }
    }
    slots
}

// ── Meta-slot embedding ─────────────────────────────────────────────

/// Deterministic text embedder contract. The default hashes characters
/// into a signed bag; swap in anything stronger behind the same trait.
pub trait TextEmbedder {
    fn embed(&self, text: &str, dims: usize) -> Vec<f64>;
}

fn stable_hash(bytes: &[u8]) -> u64 {
    // FNV-1a; stable across platforms and versions.
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

/// Hashed bag-of-characters embedding, normalized by text length.
#[derive(Debug, Clone, Copy)]
pub struct HashedBagEmbedder {
    pub seed: u64,
}

impl TextEmbedder for HashedBagEmbedder {
    fn embed(&self, text: &str, dims: usize) -> Vec<f64> {
        let mut out = vec![0.0; dims];
        if text.is_empty() {
            return out;
        }
        for c in text.chars() {
            let h = stable_hash(&(self.seed ^ c as u64).to_le_bytes());
            let idx = (h % dims as u64) as usize;
            let sign = if h & (1 << 63) == 0 { 1.0 } else { -1.0 };
            out[idx] += sign;
        }
        let n = text.chars().count() as f64;
        for v in &mut out {
            *v /= n;
        }
        out
    }
}

/// Fixed-seed tables for slot embedding.
#[derive(Debug, Clone)]
pub struct MetaEmbedConfig {
    pub dims: usize,
    pub seed: u64,
    type_table: Vec<Vec<f64>>,   // 5 x D
    button_table: Vec<Vec<f64>>, // 2 x D
    dir_table: Vec<Vec<f64>>,    // 2 x D
    count_vec: Vec<f64>,
    drag_vec: Vec<f64>,
    amount_vec: Vec<f64>,
}

impl MetaEmbedConfig {
    pub fn new(seed: u64, dims: usize) -> Self {
        let scale = 1.0 / (dims as f64).sqrt();
        let mut rng = seeded::rng_for(seed, 0x4d45_5441);
        MetaEmbedConfig {
            dims,
            seed,
            type_table: seeded::gaussian_matrix(&mut rng, 5, dims, scale),
            button_table: seeded::gaussian_matrix(&mut rng, 2, dims, scale),
            dir_table: seeded::gaussian_matrix(&mut rng, 2, dims, scale),
            count_vec: seeded::uniform_vector(&mut rng, dims, scale),
            drag_vec: seeded::uniform_vector(&mut rng, dims, scale),
            amount_vec: seeded::uniform_vector(&mut rng, dims, scale),
        }
    }

    fn shortcut_vec(&self, id: &str) -> Vec<f64> {
        let scale = 1.0 / (self.dims as f64).sqrt();
        let stream = stable_hash(id.as_bytes());
        let mut rng = seeded::rng_for(self.seed ^ 0x5348_4f52, stream);
        seeded::uniform_vector(&mut rng, self.dims, scale)
    }
}

/// Embed meta slots per frame: each non-empty slot maps to type embedding
/// plus parameter terms, valid slots are averaged, all-empty frames give
/// the zero vector.
pub fn embed_meta(
    frames: &[MetaActionFrame],
    embedder: &dyn TextEmbedder,
    cfg: &MetaEmbedConfig,
) -> Vec<Vec<f64>> {
    frames
        .iter()
        .map(|frame| {
            let mut acc = vec![0.0; cfg.dims];
            let mut valid = 0usize;
            for slot in &frame.slots {
                if matches!(slot, MetaSlot::None) {
                    continue;
                }
                valid += 1;
                let type_row = &cfg.type_table[slot.type_id() as usize];
                for (a, t) in acc.iter_mut().zip(type_row) {
                    *a += t;
                }
                match slot {
                    MetaSlot::ClickDrag {
                        button,
                        click_count,
                        drag_flag,
                    } => {
                        let b = &cfg.button_table[*button as usize];
                        for i in 0..cfg.dims {
                            acc[i] += b[i]
                                + *click_count as f64 * cfg.count_vec[i]
                                + if *drag_flag { cfg.drag_vec[i] } else { 0.0 };
                        }
                    }
                    MetaSlot::Scroll { direction, amount } => {
                        let d = &cfg.dir_table[*direction as usize];
                        for i in 0..cfg.dims {
                            acc[i] += d[i] + amount * cfg.amount_vec[i];
                        }
                    }
                    MetaSlot::Text { text } => {
                        let e = embedder.embed(text, cfg.dims);
                        for (a, v) in acc.iter_mut().zip(&e) {
                            *a += v;
                        }
                    }
                    MetaSlot::Shortcut { id } => {
                        let e = cfg.shortcut_vec(id);
                        for (a, v) in acc.iter_mut().zip(&e) {
                            *a += v;
                        }
                    }
                    MetaSlot::None => unreachable!(),
                }
            }
            if valid > 0 {
                for a in &mut acc {
                    *a /= valid as f64;
                }
            }
            acc
        })
        .collect()
}

// ── Temporal alignment ──────────────────────────────────────────────

/// Latent-aligned feature block produced by [`align_temporal`].
#[derive(Debug, Clone, PartialEq)]
pub struct AlignedActionTensor {
    /// T x D rows on the latent timeline.
    pub values: Vec<Vec<f64>>,
    pub frame_count: usize,
    pub c: usize,
    pub w: usize,
    pub lag: usize,
}

/// Lag-shifted window mean onto the latent timeline: with stride `c`,
/// window factor `w` (p = c*w) and lag `l`, latent step t anchored at
/// `a_t = t*c` averages the p per-frame rows ending at `a_t - l`, with
/// zero padding outside `[0, F)`. `T = floor((F-1)/c) + 1`.
pub fn align_temporal(
    per_frame: &[Vec<f64>],
    c: usize,
    w: usize,
    lag: usize,
) -> Result<AlignedActionTensor, CodecError> {
    if c < 1 || w < 1 {
        return Err(CodecError::InvalidConfig(
            "stride and window factor must be >= 1".to_string(),
        ));
    }
    if per_frame.is_empty() {
        return Err(CodecError::InvalidConfig("need at least one frame".to_string()));
    }
    let frame_count = per_frame.len();
    let dims = per_frame[0].len();
    if per_frame.iter().any(|r| r.len() != dims) {
        return Err(CodecError::InvalidConfig("ragged feature rows".to_string()));
    }

    let latent_steps = (frame_count - 1) / c + 1;
    let p = c * w;
    let mut values = Vec::with_capacity(latent_steps);
    for t in 0..latent_steps {
        let anchor = (t * c) as i64;
        let start = anchor - (p as i64 - 1 + lag as i64);
        let mut row = vec![0.0; dims];
        for k in 0..p as i64 {
            let f = start + k;
            if f >= 0 && (f as usize) < frame_count {
                for (acc, v) in row.iter_mut().zip(&per_frame[f as usize]) {
                    *acc += v;
                }
            }
        }
        for v in &mut row {
            *v /= p as f64;
        }
        values.push(row);
    }
    Ok(AlignedActionTensor {
        values,
        frame_count,
        c,
        w,
        lag,
    })
}

// ── Fourier mouse encoding ──────────────────────────────────────────

/// Fixed Gaussian projection plus a small two-layer map, all derived from
/// one seed. Identical seed ⇒ identical weights.
#[derive(Debug, Clone)]
pub struct FourierMouseConfig {
    pub seed: u64,
    pub num_features: usize,
    pub embed_dim: usize,
    projection: Vec<Vec<f64>>, // m x 2
    w1: Vec<Vec<f64>>,         // hidden x 2m
    b1: Vec<f64>,
    w2: Vec<Vec<f64>>, // embed x hidden
    b2: Vec<f64>,
}

impl FourierMouseConfig {
    pub fn new(seed: u64, num_features: usize, hidden_dim: usize, embed_dim: usize) -> Self {
        let mut rng = seeded::rng_for(seed, 0x464f_5552);
        let projection = seeded::gaussian_matrix(&mut rng, num_features, 2, 1.0);
        let w1 = seeded::gaussian_matrix(
            &mut rng,
            hidden_dim,
            2 * num_features,
            1.0 / (2.0 * num_features as f64).sqrt(),
        );
        let b1 = seeded::uniform_vector(&mut rng, hidden_dim, 0.1);
        let w2 = seeded::gaussian_matrix(&mut rng, embed_dim, hidden_dim, 1.0 / (hidden_dim as f64).sqrt());
        let b2 = seeded::uniform_vector(&mut rng, embed_dim, 0.1);
        FourierMouseConfig {
            seed,
            num_features,
            embed_dim,
            projection,
            w1,
            b1,
            w2,
            b2,
        }
    }
}

/// Pre-MLP features for one point: clamp to [0,1]^2, map to [-1,1]^2,
/// return `[sin(Bv); cos(Bv)]`.
pub fn fourier_features(point: (f64, f64), cfg: &FourierMouseConfig) -> Vec<f64> {
    let x = point.0.clamp(0.0, 1.0) * 2.0 - 1.0;
    let y = point.1.clamp(0.0, 1.0) * 2.0 - 1.0;
    let mut out = Vec::with_capacity(2 * cfg.num_features);
    for row in &cfg.projection {
        out.push((row[0] * x + row[1] * y).sin());
    }
    for row in &cfg.projection {
        out.push((row[0] * x + row[1] * y).cos());
    }
    out
}

/// Per-frame mouse embeddings: Fourier features through the fixed MLP.
pub fn fourier_mouse(traj: &[(f64, f64)], cfg: &FourierMouseConfig) -> Vec<Vec<f64>> {
    traj.iter()
        .map(|&p| {
            let feats = fourier_features(p, cfg);
            let hidden: Vec<f64> = cfg
                .w1
                .iter()
                .zip(&cfg.b1)
                .map(|(row, b)| (seeded::dot(row, &feats) + b).tanh())
                .collect();
            cfg.w2
                .iter()
                .zip(&cfg.b2)
                .map(|(row, b)| seeded::dot(row, &hidden) + b)
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_add_up() {
        assert_eq!(RAW_DIM, 182);
        assert_eq!(95 + NAMED_KEYS.len() + 26 + 26, KEYBOARD_DIM);
    }

    #[test]
    fn idle_frame_is_all_zero() {
        let rows = encode_raw(&[vec![]]).unwrap();
        assert_eq!(rows[0].len(), 182);
        assert!(rows[0].iter().all(|&b| b == 0));
    }

    #[test]
    fn left_click_sets_exactly_one_mouse_flag() {
        let rows = encode_raw(&[vec![InputEvent::Button {
            button: MouseButton::Left,
            action: ButtonAction::Down,
        }]])
        .unwrap();
        let ones: Vec<usize> = rows[0]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(ones, vec![MOUSE_ENTRIES.iter().position(|&m| m == "left_down").unwrap()]);
    }

    #[test]
    fn typed_chars_set_keyboard_flags() {
        let rows = encode_raw(&[vec![InputEvent::Char('l'), InputEvent::Char('s')]]).unwrap();
        let ones: Vec<usize> = rows[0]
            .iter()
            .enumerate()
            .filter(|(_, &b)| b == 1)
            .map(|(i, _)| i)
            .collect();
        assert_eq!(
            ones,
            vec![
                MOUSE_DIM + printable_index('l').unwrap(),
                MOUSE_DIM + printable_index('s').unwrap()
            ]
        );
    }

    #[test]
    fn unknown_key_is_an_error() {
        let err = encode_raw(&[vec![InputEvent::Char('é')]]).unwrap_err();
        assert_eq!(err, CodecError::UnknownKey("é".to_string()));
        let err = encode_raw(&[vec![InputEvent::Chord("hyper+x".to_string())]]).unwrap_err();
        assert!(matches!(err, CodecError::UnknownKey(_)));
    }

    #[test]
    fn meta_collapses_typed_text() {
        let enc = encode_meta(&[vec![
            InputEvent::Char('l'),
            InputEvent::Char('s'),
            InputEvent::Char(' '),
            InputEvent::Char('-'),
            InputEvent::Char('l'),
        ]]);
        assert_eq!(
            enc.frames[0].slots[0],
            MetaSlot::Text {
                text: "ls -l".to_string()
            }
        );
        assert_eq!(enc.frames[0].slots[1], MetaSlot::None);
        assert_eq!(enc.dropped, 0);
    }

    #[test]
    fn meta_chord_becomes_shortcut() {
        let enc = encode_meta(&[vec![InputEvent::Chord("ctrl+v".to_string())]]);
        assert_eq!(
            enc.frames[0].slots[0],
            MetaSlot::Shortcut {
                id: "ctrl+v".to_string()
            }
        );
    }

    #[test]
    fn meta_idle_frame_is_type_zero() {
        let enc = encode_meta(&[vec![]]);
        assert_eq!(enc.frames[0].slots[0].type_id(), 0);
        assert_eq!(enc.frames[0].slots[1].type_id(), 0);
    }

    #[test]
    fn meta_click_and_drag_params() {
        let enc = encode_meta(&[vec![
            InputEvent::Button {
                button: MouseButton::Left,
                action: ButtonAction::Down,
            },
            InputEvent::Button {
                button: MouseButton::Left,
                action: ButtonAction::Up,
            },
        ]]);
        assert_eq!(
            enc.frames[0].slots[0],
            MetaSlot::ClickDrag {
                button: MouseButton::Left,
                click_count: 1,
                drag_flag: false
            }
        );
        let enc = encode_meta(&[vec![
            InputEvent::Button {
                button: MouseButton::Left,
                action: ButtonAction::Double,
            },
            InputEvent::Button {
                button: MouseButton::Left,
                action: ButtonAction::DragStart,
            },
        ]]);
        assert_eq!(
            enc.frames[0].slots[0],
            MetaSlot::ClickDrag {
                button: MouseButton::Left,
                click_count: 2,
                drag_flag: true
            }
        );
    }

    #[test]
    fn meta_scrolls_merge_per_direction() {
        let enc = encode_meta(&[vec![
            InputEvent::Scroll {
                direction: ScrollDirection::Up,
                amount: 1.5,
            },
            InputEvent::Scroll {
                direction: ScrollDirection::Up,
                amount: 0.5,
            },
        ]]);
        assert_eq!(
            enc.frames[0].slots[0],
            MetaSlot::Scroll {
                direction: ScrollDirection::Up,
                amount: 2.0
            }
        );
    }

    #[test]
    fn meta_overflow_drops_and_counts() {
        let enc = encode_meta(&[vec![
            InputEvent::Char('a'),
            InputEvent::Chord("ctrl+c".to_string()),
            InputEvent::Scroll {
                direction: ScrollDirection::Down,
                amount: 1.0,
            },
        ]]);
        assert_eq!(enc.frames[0].slots[0].type_id(), 3);
        assert_eq!(enc.frames[0].slots[1].type_id(), 4);
        assert_eq!(enc.dropped, 1);
    }

    #[test]
    fn raw_and_meta_agree_on_keyboard_flags() {
        // Keyboard-only streams: reconstructing flags from meta slots must
        // reproduce the raw keyboard flag set exactly.
        let frames = vec![
            vec![InputEvent::Char('l'), InputEvent::Char('s')],
            vec![InputEvent::Chord("ctrl+v".to_string())],
            vec![InputEvent::Key("enter".to_string()), InputEvent::Char('x')],
            vec![],
        ];
        let raw = encode_raw(&frames).unwrap();
        let meta = encode_meta(&frames);
        assert_eq!(meta.dropped, 0);
        for (raw_row, meta_frame) in raw.iter().zip(&meta.frames) {
            let mut from_meta = vec![0u8; KEYBOARD_DIM];
            for slot in &meta_frame.slots {
                match slot {
                    MetaSlot::Text { text } => {
                        for c in text.chars() {
                            from_meta[printable_index(c).unwrap()] = 1;
                        }
                    }
                    MetaSlot::Shortcut { id } => {
                        from_meta[keyboard_index(id).unwrap()] = 1;
                    }
                    _ => {}
                }
            }
            assert_eq!(&raw_row[MOUSE_DIM..], from_meta.as_slice());
        }
    }

    #[test]
    fn embed_meta_padding_and_mean_semantics() {
        let cfg = MetaEmbedConfig::new(11, 16);
        let embedder = HashedBagEmbedder { seed: 11 };
        let empty = MetaActionFrame::default();
        let one = MetaActionFrame {
            slots: [
                MetaSlot::Text {
                    text: "ls".to_string(),
                },
                MetaSlot::None,
            ],
        };
        let dup = MetaActionFrame {
            slots: [
                MetaSlot::Text {
                    text: "ls".to_string(),
                },
                MetaSlot::Text {
                    text: "ls".to_string(),
                },
            ],
        };
        let rows = embed_meta(&[empty, one, dup], &embedder, &cfg);
        assert!(rows[0].iter().all(|&v| v == 0.0));
        assert!(rows[1].iter().any(|&v| v != 0.0));
        for (a, b) in rows[1].iter().zip(&rows[2]) {
            assert!((a - b).abs() < 1e-12, "mean of duplicates equals the element");
        }
    }

    #[test]
    fn align_identity_configuration() {
        let rows: Vec<Vec<f64>> = (0..7).map(|i| vec![i as f64, -(i as f64)]).collect();
        let out = align_temporal(&rows, 1, 1, 0).unwrap();
        assert_eq!(out.values, rows);
    }

    #[test]
    fn align_window_indices_match_hand_enumeration() {
        // c=2, w=2, lag=1, F=9, t=2: anchor 4, p 4, indices 0..=3.
        let rows: Vec<Vec<f64>> = (0..9).map(|i| vec![i as f64]).collect();
        let out = align_temporal(&rows, 2, 2, 1).unwrap();
        assert_eq!(out.values.len(), 5);
        let expected = (0.0 + 1.0 + 2.0 + 3.0) / 4.0;
        assert!((out.values[2][0] - expected).abs() < 1e-12);
    }

    #[test]
    fn align_zero_pads_before_the_stream() {
        let rows: Vec<Vec<f64>> = (0..5).map(|_| vec![1.0]).collect();
        let out = align_temporal(&rows, 1, 1, 2).unwrap();
        // t=0 with lag 2: the single window index is -2 -> zero row.
        assert_eq!(out.values[0], vec![0.0]);
        assert_eq!(out.values[2], vec![1.0]);
    }

    #[test]
    fn align_rejects_bad_config() {
        assert!(align_temporal(&[vec![1.0]], 0, 1, 0).is_err());
        assert!(align_temporal(&[vec![1.0]], 1, 0, 0).is_err());
        assert!(align_temporal(&[], 1, 1, 0).is_err());
    }

    #[test]
    fn align_is_linear() {
        let a: Vec<Vec<f64>> = (0..12).map(|i| vec![(i * 3 % 7) as f64, i as f64]).collect();
        let b: Vec<Vec<f64>> = (0..12).map(|i| vec![(i * 5 % 11) as f64, -(i as f64)]).collect();
        let (alpha, beta) = (0.75, -1.5);
        let mixed: Vec<Vec<f64>> = a
            .iter()
            .zip(&b)
            .map(|(ra, rb)| {
                ra.iter()
                    .zip(rb)
                    .map(|(x, y)| alpha * x + beta * y)
                    .collect()
            })
            .collect();
        for (c, w, lag) in [(1, 2, 0), (2, 2, 1), (3, 1, 2)] {
            let out_a = align_temporal(&a, c, w, lag).unwrap();
            let out_b = align_temporal(&b, c, w, lag).unwrap();
            let out_m = align_temporal(&mixed, c, w, lag).unwrap();
            for t in 0..out_m.values.len() {
                for d in 0..2 {
                    let expected = alpha * out_a.values[t][d] + beta * out_b.values[t][d];
                    assert!((out_m.values[t][d] - expected).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn align_shift_property() {
        // Delaying features by c frames shifts latent rows by one step
        // wherever windows stay in range.
        let c = 2;
        let rows: Vec<Vec<f64>> = (0..20).map(|i| vec![(i as f64).sin()]).collect();
        let mut delayed = vec![vec![0.0]; c];
        delayed.extend(rows.clone());
        let base = align_temporal(&rows, c, 2, 0).unwrap();
        let shifted = align_temporal(&delayed, c, 2, 0).unwrap();
        for t in 2..base.values.len() {
            assert!((shifted.values[t + 1][0] - base.values[t][0]).abs() < 1e-12);
        }
    }

    #[test]
    fn fourier_center_point_features() {
        let cfg = FourierMouseConfig::new(3, 8, 16, 4);
        let feats = fourier_features((0.5, 0.5), &cfg);
        for (i, v) in feats.iter().enumerate() {
            if i < 8 {
                assert_eq!(*v, 0.0, "sin part is zero at the center");
            } else {
                assert_eq!(*v, 1.0, "cos part is one at the center");
            }
        }
    }

    #[test]
    fn fourier_odd_even_symmetry() {
        let cfg = FourierMouseConfig::new(9, 6, 8, 4);
        let a = fourier_features((0.0, 0.0), &cfg);
        let b = fourier_features((1.0, 1.0), &cfg);
        for i in 0..6 {
            assert!((a[i] + b[i]).abs() < 1e-12, "sin negates under v -> -v");
            assert!((a[6 + i] - b[6 + i]).abs() < 1e-12, "cos is even");
        }
    }

    #[test]
    fn fourier_pythagorean_identity_and_range() {
        let cfg = FourierMouseConfig::new(21, 10, 8, 4);
        for &p in &[(0.1, 0.9), (0.33, 0.41), (1.2, -0.5) /* clamped */] {
            let f = fourier_features(p, &cfg);
            for i in 0..10 {
                assert!((f[i] * f[i] + f[10 + i] * f[10 + i] - 1.0).abs() < 1e-12);
                assert!(f[i].abs() <= 1.0 && f[10 + i].abs() <= 1.0);
            }
        }
    }

    #[test]
    fn fourier_mouse_is_deterministic() {
        let cfg_a = FourierMouseConfig::new(7, 8, 16, 6);
        let cfg_b = FourierMouseConfig::new(7, 8, 16, 6);
        let traj = vec![(0.25, 0.75), (0.5, 0.5), (0.9, 0.1)];
        assert_eq!(fourier_mouse(&traj, &cfg_a), fourier_mouse(&traj, &cfg_b));
        let cfg_c = FourierMouseConfig::new(8, 8, 16, 6);
        assert_ne!(fourier_mouse(&traj, &cfg_a), fourier_mouse(&traj, &cfg_c));
    }

    #[test]
    fn index_map_export_is_complete() {
        let map = index_map_json();
        assert_eq!(map["raw_dim"], 182);
        assert_eq!(map["mouse"].as_object().unwrap().len(), 13);
        assert_eq!(map["keyboard"].as_object().unwrap().len(), 169);
        // Every keyboard index appears exactly once.
        let mut seen = vec![false; KEYBOARD_DIM];
        for (_, v) in map["keyboard"].as_object().unwrap() {
            let i = v.as_u64().unwrap() as usize;
            assert!(!seen[i], "duplicate keyboard index {i}");
            seen[i] = true;
        }
        assert!(seen.iter().all(|&s| s));
    }
}
