//! Clip segmentation, temporal normalization, and episode-shard packaging.
//!
//! A shard is a directory holding one `manifest.json` plus a binary frame
//! block (`frames.bin`, 8-bit interleaved RGB). Rendered frames come from
//! integer compositing, so the u8 block round-trips them bit-exactly.
//! Output naming is`<source_id>_<ordinal>`, which keeps parallel packaging
//! order-independent.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::action_codec::MetaActionFrame;
use crate::rasterizer::FrameTensor;
use crate::round_half_away;
use crate::term_emu::TerminalGrid;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("length mismatch in modality {0}")]
    LengthMismatch(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed shard: {0}")]
    Malformed(String),
}

// ── Segmentation ────────────────────────────────────────────────────

/// Why a clip was terminated. The final clip of a recording has no split
/// boundary and carries `None` (serialized "end_of_stream").
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitReason {
    ScreenClear,
    ActivityGap,
    MaxLength,
}

/// What segmentation needs to know about a frame.
pub trait SegmentFrame: Clone {
    /// Fully blank screen (the state right after a clear).
    fn is_blank(&self) -> bool;
    /// Identical visual content (idle detection).
    fn same_visual(&self, other: &Self) -> bool;
}

impl SegmentFrame for TerminalGrid {
    fn is_blank(&self) -> bool {
        TerminalGrid::is_blank(self)
    }
    fn same_visual(&self, other: &Self) -> bool {
        TerminalGrid::same_visual(self, other)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Clip<F> {
    pub frames: Vec<F>,
    pub frame_times: Vec<f64>,
    pub source_id: String,
    pub split_reason: Option<SplitReason>,
}

/// Content-aware segmentation. A new clip starts at a frame when:
/// - the screen just became fully blank (split reason `ScreenClear`), or
/// - content changes after being idle for `gap_threshold` seconds or more
///   (`ActivityGap`), or
/// - the clip would otherwise run `max_len` seconds or longer (`MaxLength`).
///
/// Checks apply in that order. Every input frame lands in exactly one clip
/// and order is preserved, so concatenating the clips reproduces the input.
pub fn segment<F: SegmentFrame>(
    frames: &[(f64, F)],
    source_id: &str,
    max_len: f64,
    gap_threshold: f64,
) -> Vec<Clip<F>> {
    assert!(!frames.is_empty(), "segment requires a nonempty stream");
    let mut clips: Vec<Clip<F>> = Vec::new();
    let mut current: Vec<(f64, F)> = vec![frames[0].clone()];
    let mut clip_start = frames[0].0;
    let mut last_change = frames[0].0;

    for window in frames.windows(2) {
        let (prev_t, prev_f) = &window[0];
        let (t, f) = &window[1];
        let changed = !f.same_visual(prev_f);
        let reason = if f.is_blank() && !prev_f.is_blank() {
            Some(SplitReason::ScreenClear)
        } else if changed && t - last_change >= gap_threshold {
            Some(SplitReason::ActivityGap)
        } else if t - clip_start >= max_len {
            Some(SplitReason::MaxLength)
        } else {
            None
        };
        let _ = prev_t;
        if changed {
            last_change = *t;
        }
        if let Some(reason) = reason {
            let (times, fs): (Vec<f64>, Vec<F>) = current.drain(..).unzip();
            clips.push(Clip {
                frames: fs,
                frame_times: times,
                source_id: source_id.to_string(),
                split_reason: Some(reason),
            });
            clip_start = *t;
        }
        current.push((*t, f.clone()));
    }

    let (times, fs): (Vec<f64>, Vec<F>) = current.into_iter().unzip();
    clips.push(Clip {
        frames: fs,
        frame_times: times,
        source_id: source_id.to_string(),
        split_reason: None,
    });
    clips
}

// ── Temporal normalization ──────────────────────────────────────────

/// Evenly spaced indices by deterministic rounding: all of `0..T` when
/// `T <= K`, otherwise `round(i*(T-1)/(K-1))` for `i in 0..K`, deduplicated
/// and sorted. Ties round half away from zero. `K == 1` degenerates to
/// `[0]`.
pub fn uniform_subsample(total: usize, target: usize) -> Vec<usize> {
    assert!(total >= 1 && target >= 1);
    if total <= target {
        return (0..total).collect();
    }
    if target == 1 {
        return vec![0];
    }
    let mut indices: Vec<usize> = (0..target)
        .map(|i| round_half_away(i as f64 * (total - 1) as f64 / (target - 1) as f64) as usize)
        .collect();
    indices.dedup();
    indices
}

/// Normalize a clip to exactly `target_frames` frames: shorter clips repeat
/// the final frame, longer clips are uniformly subsampled.
pub fn normalize_length<F: Clone>(frames: &[F], target_frames: usize) -> Vec<F> {
    assert!(!frames.is_empty(), "normalize_length requires frames");
    if frames.len() >= target_frames {
        uniform_subsample(frames.len(), target_frames)
            .into_iter()
            .map(|i| frames[i].clone())
            .collect()
    } else {
        let mut out: Vec<F> = frames.to_vec();
        out.resize(target_frames, frames.last().unwrap().clone());
        out
    }
}

/// Indices kept by [`normalize_length`] for a clip of `total` frames, with
/// repetition of the last index when padding. Lets aligned modalities
/// (actions, text buffers) follow the exact same selection.
pub fn normalize_indices(total: usize, target_frames: usize) -> Vec<usize> {
    assert!(total >= 1);
    if total >= target_frames {
        uniform_subsample(total, target_frames)
    } else {
        let mut idx: Vec<usize> = (0..total).collect();
        idx.resize(target_frames, total - 1);
        idx
    }
}

// ── Episode shards ──────────────────────────────────────────────────

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct CaptionSet {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub semantic: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub regular: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detailed: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scripted: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceTool {
    Asciinema,
    Vhs,
    GuiCapture,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub source_tool: SourceTool,
    pub env: BTreeMap<String, String>,
    /// (columns, rows) of the originating terminal or capture surface.
    pub geometry: (u32, u32),
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    pub extras: serde_json::Map<String, Value>,
}

/// Optional per-frame modalities packaged alongside frames.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ActionTrack {
    /// 182-entry multi-hot rows, one per frame.
    pub raw: Option<Vec<Vec<u8>>>,
    pub meta: Option<Vec<MetaActionFrame>>,
    pub mouse: Option<Vec<(f64, f64)>>,
}

/// Latent-aligned tensors written by the action encoder.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignedActions {
    pub actions_aligned: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mouse_aligned: Option<Vec<Vec<f64>>>,
    pub c: usize,
    pub w: usize,
    pub lag: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeShard {
    pub frames: Vec<FrameTensor>,
    pub fps: u32,
    pub captions: CaptionSet,
    pub actions_raw: Option<Vec<Vec<u8>>>,
    pub actions_meta: Option<Vec<MetaActionFrame>>,
    pub mouse_traj: Option<Vec<(f64, f64)>>,
    /// Normalized screen text per frame (the emulator ground truth the
    /// OCR-protocol metrics consume).
    pub text_buffers: Option<Vec<Vec<String>>>,
    pub provenance: Provenance,
    pub split_reason: Option<SplitReason>,
    pub aligned: Option<AlignedActions>,
}

/// Assemble a shard, validating that every present modality matches the
/// frame count.
pub fn package(
    frames: Vec<FrameTensor>,
    fps: u32,
    captions: CaptionSet,
    actions: ActionTrack,
    text_buffers: Option<Vec<Vec<String>>>,
    provenance: Provenance,
    split_reason: Option<SplitReason>,
) -> Result<EpisodeShard, DatasetError> {
    let n = frames.len();
    let check = |len: usize, name: &str| -> Result<(), DatasetError> {
        if len != n {
            Err(DatasetError::LengthMismatch(name.to_string()))
        } else {
            Ok(())
        }
    };
    if let Some(raw) = &actions.raw {
        check(raw.len(), "actions")?;
    }
    if let Some(meta) = &actions.meta {
        check(meta.len(), "actions_meta")?;
    }
    if let Some(mouse) = &actions.mouse {
        check(mouse.len(), "mouse_traj")?;
    }
    if let Some(text) = &text_buffers {
        check(text.len(), "text_buffers")?;
    }
    Ok(EpisodeShard {
        frames,
        fps,
        captions,
        actions_raw: actions.raw,
        actions_meta: actions.meta,
        mouse_traj: actions.mouse,
        text_buffers,
        provenance,
        split_reason,
        aligned: None,
    })
}

// ── Shard serialization ─────────────────────────────────────────────

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FrameBlockInfo {
    file: String,
    count: usize,
    height: usize,
    width: usize,
    channels: usize,
    dtype: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct Manifest {
    frames: FrameBlockInfo,
    fps: u32,
    captions: CaptionSet,
    #[serde(skip_serializing_if = "Option::is_none")]
    actions_raw: Option<Vec<Vec<u8>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    actions_meta: Option<Vec<MetaActionFrame>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    mouse_traj: Option<Vec<(f64, f64)>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    text_buffers: Option<Vec<Vec<String>>>,
    source_tool: SourceTool,
    env: BTreeMap<String, String>,
    geometry: (u32, u32),
    split_reason: Option<SplitReason>,
    #[serde(default, skip_serializing_if = "serde_json::Map::is_empty")]
    provenance_extras: serde_json::Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    actions_aligned: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mouse_aligned: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alignment: Option<(usize, usize, usize)>,
}

/// Write a shard directory: `manifest.json` + `frames.bin`.
pub fn write_shard(shard: &EpisodeShard, dir: &Path) -> Result<(), DatasetError> {
    fs::create_dir_all(dir)?;
    let (height, width) = shard
        .frames
        .first()
        .map(|f| (f.height, f.width))
        .unwrap_or((0, 0));

    let mut block = Vec::with_capacity(shard.frames.len() * height * width * 3);
    for frame in &shard.frames {
        if frame.height != height || frame.width != width {
            return Err(DatasetError::Malformed(
                "frames in one shard must share dimensions".to_string(),
            ));
        }
        block.extend(
            frame
                .data
                .iter()
                .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8),
        );
    }
    let mut f = fs::File::create(dir.join("frames.bin"))?;
    f.write_all(&block)?;

    let manifest = Manifest {
        frames: FrameBlockInfo {
            file: "frames.bin".to_string(),
            count: shard.frames.len(),
            height,
            width,
            channels: 3,
            dtype: "u8".to_string(),
        },
        fps: shard.fps,
        captions: shard.captions.clone(),
        actions_raw: shard.actions_raw.clone(),
        actions_meta: shard.actions_meta.clone(),
        mouse_traj: shard.mouse_traj.clone(),
        text_buffers: shard.text_buffers.clone(),
        source_tool: shard.provenance.source_tool,
        env: shard.provenance.env.clone(),
        geometry: shard.provenance.geometry,
        split_reason: shard.split_reason,
        provenance_extras: shard.provenance.extras.clone(),
        actions_aligned: shard.aligned.as_ref().map(|a| a.actions_aligned.clone()),
        mouse_aligned: shard.aligned.as_ref().and_then(|a| a.mouse_aligned.clone()),
        alignment: shard.aligned.as_ref().map(|a| (a.c, a.w, a.lag)),
    };
    let json = serde_json::to_vec_pretty(&manifest)
        .map_err(|e| DatasetError::Malformed(e.to_string()))?;
    fs::write(dir.join("manifest.json"), json)?;
    Ok(())
}

/// Read a shard directory back. Frames come back as f32 (u8 / 255), which
/// is bit-identical to what `write_shard` was given for rendered frames.
pub fn read_shard(dir: &Path) -> Result<EpisodeShard, DatasetError> {
    let manifest_bytes = fs::read(dir.join("manifest.json"))?;
    let manifest: Manifest = serde_json::from_slice(&manifest_bytes)
        .map_err(|e| DatasetError::Malformed(e.to_string()))?;
    let info = &manifest.frames;
    if info.dtype != "u8" || info.channels != 3 {
        return Err(DatasetError::Malformed(format!(
            "unsupported frame block: dtype={} channels={}",
            info.dtype, info.channels
        )));
    }
    let block = fs::read(dir.join(&info.file))?;
    let frame_len = info.height * info.width * 3;
    if block.len() != frame_len * info.count {
        return Err(DatasetError::Malformed(format!(
            "frame block size {} != {} frames x {} bytes",
            block.len(),
            info.count,
            frame_len
        )));
    }
    let frames = block
        .chunks_exact(frame_len.max(1))
        .take(info.count)
        .map(|chunk| FrameTensor {
            height: info.height,
            width: info.width,
            data: chunk.iter().map(|&b| b as f32 / 255.0).collect(),
        })
        .collect();

    let aligned = manifest.actions_aligned.map(|actions_aligned| {
        let (c, w, lag) = manifest.alignment.unwrap_or((1, 1, 0));
        AlignedActions {
            actions_aligned,
            mouse_aligned: manifest.mouse_aligned,
            c,
            w,
            lag,
        }
    });

    Ok(EpisodeShard {
        frames,
        fps: manifest.fps,
        captions: manifest.captions,
        actions_raw: manifest.actions_raw,
        actions_meta: manifest.actions_meta,
        mouse_traj: manifest.mouse_traj,
        text_buffers: manifest.text_buffers,
        provenance: Provenance {
            source_tool: manifest.source_tool,
            env: manifest.env,
            geometry: manifest.geometry,
            extras: manifest.provenance_extras,
        },
        split_reason: manifest.split_reason,
        aligned,
    })
}
