//! Evaluation protocol kernels: text-space fidelity (character and
//! exact-line accuracy), deterministic frame sampling, SSIM, post-action
//! window selection, and the Fréchet distance over a pluggable clip
//! feature extractor.
//!
//! Conventions pinned for bit-exact reproduction: rounding is half away
//! from zero everywhere, grayscale conversion uses the BT.601 luma
//! weights, SSIM uses an 11x11 Gaussian window with sigma 1.5 and
//! C1=(0.01)^2, C2=(0.03)^2 on [0,1] frames, and aggregates are means of
//! per-video means (never pooled).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dataset::uniform_subsample;
use crate::rasterizer::FrameTensor;
use crate::round_half_away;

#[derive(Debug, Error, PartialEq)]
pub enum MetricsError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("need at least two clips for feature statistics")]
    TooFewClips,
}

// ── Text-space metrics ──────────────────────────────────────────────

/// Ordered normalized lines for both sides of one frame pair.
#[derive(Debug, Clone, PartialEq)]
pub struct TextEvalPair {
    pub gt_lines: Vec<String>,
    pub pred_lines: Vec<String>,
}

/// Unit-cost Levenshtein distance over unicode scalars (two-row DP).
pub fn levenshtein(source: &str, target: &str) -> usize {
    let s: Vec<char> = source.chars().collect();
    let t: Vec<char> = target.chars().collect();
    if s.is_empty() {
        return t.len();
    }
    if t.is_empty() {
        return s.len();
    }
    let mut prev: Vec<usize> = (0..=t.len()).collect();
    let mut cur = vec![0usize; t.len() + 1];
    for (i, &sc) in s.iter().enumerate() {
        cur[0] = i + 1;
        for (j, &tc) in t.iter().enumerate() {
            let sub = prev[j] + (sc != tc) as usize;
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[t.len()]
}

/// Normalized edit-distance accuracy over the concatenated texts:
/// 1 when both empty, 0 when only the ground truth is empty, otherwise
/// `max(0, 1 - d(s,t)/max(|s|,1))`.
pub fn char_accuracy(gt_text: &str, pred_text: &str) -> f64 {
    if gt_text.is_empty() && pred_text.is_empty() {
        return 1.0;
    }
    if gt_text.is_empty() {
        return 0.0;
    }
    let d = levenshtein(gt_text, pred_text) as f64;
    let len = gt_text.chars().count().max(1) as f64;
    (1.0 - d / len).max(0.0)
}

/// Position-sensitive line recall: line i counts only when the prediction
/// has a line i and it matches exactly.
pub fn exact_line_accuracy(pair: &TextEvalPair) -> f64 {
    let n_g = pair.gt_lines.len();
    let n_p = pair.pred_lines.len();
    if n_g == 0 && n_p == 0 {
        return 1.0;
    }
    if n_g == 0 {
        return 0.0;
    }
    let matched = pair
        .gt_lines
        .iter()
        .enumerate()
        .filter(|(i, g)| *i < n_p && pair.pred_lines[*i] == **g)
        .count();
    matched as f64 / n_g as f64
}

// ── Frame sampling ──────────────────────────────────────────────────

/// At most K frame indices spread over the common prefix of the two
/// videos: `T = min(T_gen, T_gt)`, all indices when `T <= K`, otherwise
/// the shared deterministic-rounding subsample.
pub fn sample_eval_frames(t_gen: usize, t_gt: usize, k: usize) -> Vec<usize> {
    assert!(t_gen >= 1 && t_gt >= 1 && k >= 1);
    uniform_subsample(t_gen.min(t_gt), k)
}

// ── SSIM ────────────────────────────────────────────────────────────

const SSIM_WINDOW: usize = 11;
const SSIM_SIGMA: f64 = 1.5;
const SSIM_C1: f64 = 0.01 * 0.01;
const SSIM_C2: f64 = 0.03 * 0.03;

/// BT.601 luma conversion of a [0,1] RGB frame.
pub fn to_grayscale(frame: &FrameTensor) -> Vec<f64> {
    frame
        .data
        .chunks_exact(3)
        .map(|px| 0.299 * px[0] as f64 + 0.587 * px[1] as f64 + 0.114 * px[2] as f64)
        .collect()
}

fn gaussian_kernel(size: usize, sigma: f64) -> Vec<f64> {
    let c = (size / 2) as f64;
    let mut k: Vec<f64> = (0..size)
        .map(|i| (-((i as f64 - c).powi(2)) / (2.0 * sigma * sigma)).exp())
        .collect();
    let sum: f64 = k.iter().sum();
    for v in &mut k {
        *v /= sum;
    }
    k
}

/// Valid-mode separable Gaussian filter; returns the (H-size+1, W-size+1)
/// map.
fn gaussian_filter_valid(img: &[f64], h: usize, w: usize, kernel: &[f64]) -> Vec<f64> {
    let size = kernel.len();
    let out_w = w - size + 1;
    // Horizontal pass.
    let mut tmp = vec![0.0; h * out_w];
    for row in 0..h {
        for col in 0..out_w {
            let mut acc = 0.0;
            for (k, &kv) in kernel.iter().enumerate() {
                acc += kv * img[row * w + col + k];
            }
            tmp[row * out_w + col] = acc;
        }
    }
    // Vertical pass.
    let out_h = h - size + 1;
    let mut out = vec![0.0; out_h * out_w];
    for row in 0..out_h {
        for col in 0..out_w {
            let mut acc = 0.0;
            for (k, &kv) in kernel.iter().enumerate() {
                acc += kv * tmp[(row + k) * out_w + col];
            }
            out[row * out_w + col] = acc;
        }
    }
    out
}

/// SSIM between two equal-sized frames (grayscale-converted internally):
/// Gaussian-weighted moment maps, the standard stabilized formula, mean
/// over window positions. Frames smaller than the window fall back to a
/// single uniform full-image window.
pub fn ssim(a: &FrameTensor, b: &FrameTensor) -> Result<f64, MetricsError> {
    if !a.same_dims(b) {
        return Err(MetricsError::DimensionMismatch(format!(
            "{}x{} vs {}x{}",
            a.height, a.width, b.height, b.width
        )));
    }
    let ga = to_grayscale(a);
    let gb = to_grayscale(b);
    let (h, w) = (a.height, a.width);

    if h < SSIM_WINDOW || w < SSIM_WINDOW {
        return Ok(ssim_uniform_window(&ga, &gb));
    }

    let kernel = gaussian_kernel(SSIM_WINDOW, SSIM_SIGMA);
    let sq = |v: &[f64]| -> Vec<f64> { v.iter().map(|x| x * x).collect() };
    let prod: Vec<f64> = ga.iter().zip(&gb).map(|(x, y)| x * y).collect();

    let mu_a = gaussian_filter_valid(&ga, h, w, &kernel);
    let mu_b = gaussian_filter_valid(&gb, h, w, &kernel);
    let e_aa = gaussian_filter_valid(&sq(&ga), h, w, &kernel);
    let e_bb = gaussian_filter_valid(&sq(&gb), h, w, &kernel);
    let e_ab = gaussian_filter_valid(&prod, h, w, &kernel);

    let mut sum = 0.0;
    for i in 0..mu_a.len() {
        let (ma, mb) = (mu_a[i], mu_b[i]);
        let var_a = e_aa[i] - ma * ma;
        let var_b = e_bb[i] - mb * mb;
        let cov = e_ab[i] - ma * mb;
        sum += ((2.0 * ma * mb + SSIM_C1) * (2.0 * cov + SSIM_C2))
            / ((ma * ma + mb * mb + SSIM_C1) * (var_a + var_b + SSIM_C2));
    }
    Ok(sum / mu_a.len() as f64)
}

fn ssim_uniform_window(ga: &[f64], gb: &[f64]) -> f64 {
    let n = ga.len() as f64;
    let ma = ga.iter().sum::<f64>() / n;
    let mb = gb.iter().sum::<f64>() / n;
    let var_a = ga.iter().map(|x| (x - ma) * (x - ma)).sum::<f64>() / n;
    let var_b = gb.iter().map(|x| (x - mb) * (x - mb)).sum::<f64>() / n;
    let cov = ga.iter().zip(gb).map(|(x, y)| (x - ma) * (y - mb)).sum::<f64>() / n;
    ((2.0 * ma * mb + SSIM_C1) * (2.0 * cov + SSIM_C2))
        / ((ma * ma + mb * mb + SSIM_C1) * (var_a + var_b + SSIM_C2))
}

/// Per-clip SSIM: mean over frame pairs.
pub fn ssim_clip(a: &[FrameTensor], b: &[FrameTensor]) -> Result<f64, MetricsError> {
    if a.len() != b.len() || a.is_empty() {
        return Err(MetricsError::DimensionMismatch(
            "clip lengths differ or empty".to_string(),
        ));
    }
    let mut sum = 0.0;
    for (fa, fb) in a.iter().zip(b) {
        sum += ssim(fa, fb)?;
    }
    Ok(sum / a.len() as f64)
}

// ── Post-action windows ─────────────────────────────────────────────

/// Recorded action timestamps for one clip.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ActionLog {
    pub timestamps: Vec<f64>,
    pub fps: f64,
    pub frame_count: usize,
}

/// Post-action frame selection: each timestamp maps to
/// `f = round(t * fps)` clamped into range, the window is
/// `{f+offset, ..., f+k}` clipped to valid indices, and the result is the
/// deduplicated union in chronological order. Zero actions (or fully
/// clipped windows) give an empty list — callers exclude such clips.
pub fn select_post_action_frames(log: &ActionLog, k: usize, offset: usize) -> Vec<usize> {
    assert!(log.fps > 0.0, "fps must be positive");
    if log.frame_count == 0 {
        return Vec::new();
    }
    let max_index = log.frame_count - 1;
    let mut selected = vec![false; log.frame_count];
    for &tau in &log.timestamps {
        let f = round_half_away(tau * log.fps).clamp(0, max_index as i64) as usize;
        for idx in f + offset..=f + k {
            if idx <= max_index {
                selected[idx] = true;
            }
        }
    }
    selected
        .iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(i, _)| i)
        .collect()
}

// ── Feature statistics and Fréchet distance ─────────────────────────

/// Clip-level feature extractor contract. The toy default pools per-frame
/// color moments; it is *not* comparable to any pretrained-network FVD.
pub trait FeatureExtractor {
    fn extract(&self, clip: &[FrameTensor]) -> Vec<f64>;
    fn dims(&self) -> usize;
}

/// Per-frame mean and standard deviation per channel, concatenated over
/// the 16 normalized frames: a 96-d clip descriptor.
#[derive(Debug, Clone, Copy, Default)]
pub struct ColorMomentExtractor;

impl FeatureExtractor for ColorMomentExtractor {
    fn extract(&self, clip: &[FrameTensor]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.dims());
        for frame in clip {
            let n = (frame.height * frame.width) as f64;
            for ch in 0..3 {
                let mut sum = 0.0;
                let mut sumsq = 0.0;
                for px in frame.data.chunks_exact(3) {
                    let v = px[ch] as f64;
                    sum += v;
                    sumsq += v * v;
                }
                let mean = sum / n;
                let var = (sumsq / n - mean * mean).max(0.0);
                out.push(mean);
                out.push(var.sqrt());
            }
        }
        out
    }

    fn dims(&self) -> usize {
        FVD_FRAMES * 6
    }
}

pub const FVD_FRAMES: usize = 16;
pub const FVD_SIZE: usize = 112;

/// Deterministic bilinear resize to `FVD_SIZE` squared.
pub fn resize_frame(frame: &FrameTensor, out_h: usize, out_w: usize) -> FrameTensor {
    let mut out = FrameTensor::new(out_h, out_w);
    let scale_y = frame.height as f64 / out_h as f64;
    let scale_x = frame.width as f64 / out_w as f64;
    for oy in 0..out_h {
        let sy = ((oy as f64 + 0.5) * scale_y - 0.5).clamp(0.0, frame.height as f64 - 1.0);
        let y0 = sy.floor() as usize;
        let y1 = (y0 + 1).min(frame.height - 1);
        let fy = sy - y0 as f64;
        for ox in 0..out_w {
            let sx = ((ox as f64 + 0.5) * scale_x - 0.5).clamp(0.0, frame.width as f64 - 1.0);
            let x0 = sx.floor() as usize;
            let x1 = (x0 + 1).min(frame.width - 1);
            let fx = sx - x0 as f64;
            let mut px = [0.0f32; 3];
            for ch in 0..3 {
                let p00 = frame.pixel(y0, x0)[ch] as f64;
                let p01 = frame.pixel(y0, x1)[ch] as f64;
                let p10 = frame.pixel(y1, x0)[ch] as f64;
                let p11 = frame.pixel(y1, x1)[ch] as f64;
                let top = p00 * (1.0 - fx) + p01 * fx;
                let bottom = p10 * (1.0 - fx) + p11 * fx;
                px[ch] = (top * (1.0 - fy) + bottom * fy) as f32;
            }
            out.set_pixel(oy, ox, px);
        }
    }
    out
}

/// Normalize a clip to the fixed-length FVD input: subsample or pad to 16
/// frames (repeating the final frame), resize each to 112x112.
pub fn normalize_fvd_clip(clip: &[FrameTensor]) -> Vec<FrameTensor> {
    assert!(!clip.is_empty());
    let frames = crate::dataset::normalize_length(clip, FVD_FRAMES);
    frames
        .iter()
        .map(|f| {
            if f.height == FVD_SIZE && f.width == FVD_SIZE {
                f.clone()
            } else {
                resize_frame(f, FVD_SIZE, FVD_SIZE)
            }
        })
        .collect()
}

/// Mean vector and unbiased covariance of one clip group's features.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureStats {
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
    pub n: usize,
}

pub fn feature_stats(
    clips: &[Vec<FrameTensor>],
    extractor: &dyn FeatureExtractor,
) -> Result<FeatureStats, MetricsError> {
    if clips.len() < 2 {
        return Err(MetricsError::TooFewClips);
    }
    let features: Vec<Vec<f64>> = clips
        .iter()
        .map(|clip| extractor.extract(&normalize_fvd_clip(clip)))
        .collect();
    Ok(stats_from_features(&features))
}

/// Stats over already-extracted feature vectors (one per clip).
pub fn stats_from_features(features: &[Vec<f64>]) -> FeatureStats {
    let n = features.len();
    let d = features[0].len();
    let mut mean = vec![0.0; d];
    for f in features {
        for (m, v) in mean.iter_mut().zip(f) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let mut cov = vec![vec![0.0; d]; d];
    if n > 1 {
        for f in features {
            let centered: Vec<f64> = f.iter().zip(&mean).map(|(v, m)| v - m).collect();
            for i in 0..d {
                for j in 0..d {
                    cov[i][j] += centered[i] * centered[j];
                }
            }
        }
        let denom = (n - 1) as f64;
        for row in &mut cov {
            for v in row.iter_mut() {
                *v /= denom;
            }
        }
    }
    FeatureStats { mean, cov, n }
}

/// Fréchet distance between two feature distributions:
/// `||mu_A - mu_B||^2 + tr(S_A + S_B - 2 (S_A S_B)^{1/2})`, with the matrix
/// square root taken by symmetric eigendecomposition of the symmetrized
/// product and negative eigenvalues clamped to zero.
pub fn frechet_distance(a: &FeatureStats, b: &FeatureStats) -> Result<f64, MetricsError> {
    let d = a.mean.len();
    if b.mean.len() != d {
        return Err(MetricsError::DimensionMismatch(format!(
            "feature dims {d} vs {}",
            b.mean.len()
        )));
    }
    let mean_term: f64 = a
        .mean
        .iter()
        .zip(&b.mean)
        .map(|(x, y)| (x - y) * (x - y))
        .sum();

    use nalgebra::DMatrix;
    let ma = DMatrix::from_fn(d, d, |i, j| a.cov[i][j]);
    let mb = DMatrix::from_fn(d, d, |i, j| b.cov[i][j]);
    let product = &ma * &mb;
    let sym = (&product + product.transpose()) * 0.5;
    let eig = nalgebra::SymmetricEigen::new(sym);
    let sqrt_trace: f64 = eig.eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum();

    let trace_a: f64 = (0..d).map(|i| a.cov[i][i]).sum();
    let trace_b: f64 = (0..d).map(|i| b.cov[i][i]).sum();
    Ok(mean_term + trace_a + trace_b - 2.0 * sqrt_trace)
}

// ── Report schema ───────────────────────────────────────────────────

/// Per-clip metric row. `lpips` is reserved but unavailable: it needs a
/// pretrained perceptual network this harness deliberately excludes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipReport {
    pub clip_id: String,
    pub char_acc: f64,
    pub exact_line_acc: f64,
    pub ssim_all: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ssim_post: Option<f64>,
    pub lpips: Option<f64>,
    pub frames_evaluated: usize,
    pub post_action_indices: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricReport {
    pub clips: Vec<ClipReport>,
    pub aggregate: AggregateReport,
}

/// Aggregates are means of per-video means, computed over clip rows sorted
/// by clip id so floating-point sums are order-stable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateReport {
    pub clip_count: usize,
    pub skipped_unpaired: usize,
    pub char_acc: f64,
    pub exact_line_acc: f64,
    pub ssim_all: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ssim_post: Option<f64>,
    pub lpips_status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frechet_all: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub frechet_post_action: Option<f64>,
}

pub fn aggregate(clips: &[ClipReport], skipped_unpaired: usize) -> AggregateReport {
    let mut sorted: Vec<&ClipReport> = clips.iter().collect();
    sorted.sort_by(|a, b| a.clip_id.cmp(&b.clip_id));
    let n = sorted.len().max(1) as f64;
    let mean = |f: &dyn Fn(&ClipReport) -> f64| sorted.iter().map(|c| f(c)).sum::<f64>() / n;
    let post: Vec<f64> = sorted.iter().filter_map(|c| c.ssim_post).collect();
    AggregateReport {
        clip_count: sorted.len(),
        skipped_unpaired,
        char_acc: mean(&|c| c.char_acc),
        exact_line_acc: mean(&|c| c.exact_line_acc),
        ssim_all: mean(&|c| c.ssim_all),
        ssim_post: if post.is_empty() {
            None
        } else {
            Some(post.iter().sum::<f64>() / post.len() as f64)
        },
        lpips_status: "unavailable: requires a pretrained perceptual network".to_string(),
        frechet_all: None,
        frechet_post_action: None,
    }
}
