//! Auxiliary losses for the action pathway: the lag-aware temporal
//! contrastive objective, the future-prediction MSE head, and the
//! cursor-supervision losses over reference streams.

use super::model::ToyError;
use crate::rasterizer::{FrameTensor, MaskPlane};
use crate::seeded;

/// How features reach the common space before the contrastive loss.
#[derive(Debug, Clone)]
pub enum ProjectionSpec {
    /// Use features as-is (they must already share a dimension).
    Identity,
    /// Fixed seeded linear maps into `dim`.
    Seeded { seed: u64, dim: usize },
}

#[derive(Debug, Clone)]
pub struct LossConfig {
    pub temperature: f64,
    pub lag: usize,
    pub symmetric: bool,
    /// Per-step validity; steps with `false` never form anchors or
    /// positives. `None` means all valid.
    pub masks: Option<Vec<bool>>,
    pub projection: ProjectionSpec,
}

impl LossConfig {
    pub fn new(temperature: f64, lag: usize) -> Self {
        assert!(temperature > 0.0, "temperature must be positive");
        LossConfig {
            temperature,
            lag,
            symmetric: false,
            masks: None,
            projection: ProjectionSpec::Identity,
        }
    }
}

fn project(rows: &[Vec<f64>], spec: &ProjectionSpec, stream: u64) -> Vec<Vec<f64>> {
    match spec {
        ProjectionSpec::Identity => rows.to_vec(),
        ProjectionSpec::Seeded { seed, dim } => {
            let in_dim = rows.first().map(|r| r.len()).unwrap_or(0);
            let mut rng = seeded::rng_for(*seed, stream);
            let m = seeded::gaussian_matrix(&mut rng, *dim, in_dim, 1.0 / (in_dim as f64).sqrt());
            rows.iter().map(|r| seeded::mat_vec(&m, r)).collect()
        }
    }
}

fn unit_normalize(rows: &mut [Vec<f64>]) {
    for row in rows {
        let norm: f64 = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 0.0 {
            for v in row.iter_mut() {
                *v /= norm;
            }
        }
    }
}

/// InfoNCE over lag-shifted pairs: anchor `F_t` matches `A_{t-lag}`,
/// negatives are the shifted action features of the other valid steps of
/// the same sequence. Returns the mean cross-entropy over valid anchors;
/// the symmetric variant averages both directions. When mouse features are
/// given, the same objective runs against them and the two terms average.
pub fn contrastive_loss(
    frame_feats: &[Vec<f64>],
    action_feats: &[Vec<f64>],
    mouse_feats: Option<&[Vec<f64>]>,
    cfg: &LossConfig,
) -> Result<f64, ToyError> {
    let steps = frame_feats.len();
    if action_feats.len() != steps {
        return Err(ToyError::ShapeMismatch(format!(
            "frame/action step counts differ: {steps} vs {}",
            action_feats.len()
        )));
    }
    if let Some(masks) = &cfg.masks {
        if masks.len() != steps {
            return Err(ToyError::ShapeMismatch("mask length".to_string()));
        }
    }

    let mut total = pairwise_infonce(frame_feats, action_feats, cfg, 0)?;
    if let Some(mouse) = mouse_feats {
        if mouse.len() != steps {
            return Err(ToyError::ShapeMismatch("mouse step count".to_string()));
        }
        total = (total + pairwise_infonce(frame_feats, mouse, cfg, 1)?) / 2.0;
    }
    Ok(total)
}

fn pairwise_infonce(
    frame_feats: &[Vec<f64>],
    other_feats: &[Vec<f64>],
    cfg: &LossConfig,
    stream: u64,
) -> Result<f64, ToyError> {
    let steps = frame_feats.len();
    let valid = |t: usize| cfg.masks.as_ref().map(|m| m[t]).unwrap_or(true);
    let anchors: Vec<usize> = (cfg.lag..steps)
        .filter(|&t| valid(t) && valid(t - cfg.lag))
        .collect();
    if anchors.len() < 2 {
        return Err(ToyError::DegenerateBatch(format!(
            "{} valid steps after masking, need at least 2",
            anchors.len()
        )));
    }

    let mut f = project(frame_feats, &cfg.projection, 2 * stream);
    let mut a = project(other_feats, &cfg.projection, 2 * stream + 1);
    unit_normalize(&mut f);
    unit_normalize(&mut a);

    let ce_direction = |anchor_rows: &[Vec<f64>],
                        cand_rows: &[Vec<f64>],
                        anchor_of: &dyn Fn(usize) -> usize,
                        cand_of: &dyn Fn(usize) -> usize|
     -> f64 {
        let mut sum = 0.0;
        for &t in &anchors {
            let q = &anchor_rows[anchor_of(t)];
            let logits: Vec<f64> = anchors
                .iter()
                .map(|&s| seeded::dot(q, &cand_rows[cand_of(s)]) / cfg.temperature)
                .collect();
            let target = anchors.iter().position(|&s| s == t).unwrap();
            let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let log_denom = max + logits.iter().map(|&l| (l - max).exp()).sum::<f64>().ln();
            sum += log_denom - logits[target];
        }
        sum / anchors.len() as f64
    };

    let lag = cfg.lag;
    let f2a = ce_direction(&f, &a, &|t| t, &|s| s - lag);
    if cfg.symmetric {
        let a2f = ce_direction(&a, &f, &|t| t - lag, &|s| s);
        Ok((f2a + a2f) / 2.0)
    } else {
        Ok(f2a)
    }
}

/// Maps used by the future-prediction term.
#[derive(Debug, Clone)]
pub enum FuturePredHead {
    /// Both sides pass through unchanged.
    Identity,
    /// Seeded linear head for actions and projection for frames into `dim`.
    Seeded { seed: u64, dim: usize },
}

impl FuturePredHead {
    fn apply(&self, rows: &[Vec<f64>], stream: u64) -> Vec<Vec<f64>> {
        match self {
            FuturePredHead::Identity => rows.to_vec(),
            FuturePredHead::Seeded { seed, dim } => project(
                rows,
                &ProjectionSpec::Seeded {
                    seed: *seed,
                    dim: *dim,
                },
                stream,
            ),
        }
    }
}

/// Mean over t of the squared error between the action head's prediction
/// at t and the projected frame feature at t+lag.
pub fn future_pred_loss(
    action_feats: &[Vec<f64>],
    frame_feats: &[Vec<f64>],
    lag: usize,
    head: &FuturePredHead,
) -> Result<f64, ToyError> {
    let steps = frame_feats.len();
    if action_feats.len() != steps {
        return Err(ToyError::ShapeMismatch("step counts differ".to_string()));
    }
    if steps <= lag {
        return Err(ToyError::DegenerateBatch(format!(
            "no (t, t+lag) pairs with {steps} steps and lag {lag}"
        )));
    }
    let preds = head.apply(action_feats, 10);
    let targets = head.apply(frame_feats, 11);
    let mut sum = 0.0;
    let count = steps - lag;
    for t in 0..count {
        sum += preds[t]
            .iter()
            .zip(&targets[t + lag])
            .map(|(p, f)| (p - f) * (p - f))
            .sum::<f64>();
    }
    Ok(sum / count as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CursorLosses {
    pub position_l2: f64,
    pub masked_patch_l2: f64,
}

/// Cursor supervision: mean squared trajectory error plus the masked patch
/// reconstruction error against the reference stream. Zero-mask frames
/// contribute nothing; an all-zero mask total yields zero.
pub fn cursor_losses(
    pred_frames: &[FrameTensor],
    ref_imgs: &[FrameTensor],
    ref_masks: &[MaskPlane],
    pred_traj: &[(f64, f64)],
    gt_traj: &[(f64, f64)],
) -> Result<CursorLosses, ToyError> {
    let t = pred_frames.len();
    if ref_imgs.len() != t || ref_masks.len() != t {
        return Err(ToyError::DimensionMismatch(
            "frame/reference counts differ".to_string(),
        ));
    }
    if pred_traj.len() != gt_traj.len() || pred_traj.is_empty() {
        return Err(ToyError::DimensionMismatch(
            "trajectory lengths differ or empty".to_string(),
        ));
    }

    let mut num = 0.0f64;
    let mut denom = 0.0f64;
    for ((pred, refi), mask) in pred_frames.iter().zip(ref_imgs).zip(ref_masks) {
        if !pred.same_dims(refi) || mask.height != pred.height || mask.width != pred.width {
            return Err(ToyError::DimensionMismatch(
                "frame/mask dimensions differ".to_string(),
            ));
        }
        for (px, m) in mask.data.iter().enumerate() {
            let m = *m as f64;
            if m == 0.0 {
                continue;
            }
            let base = px * 3;
            let mut err = 0.0;
            for ch in 0..3 {
                let d = pred.data[base + ch] as f64 - refi.data[base + ch] as f64;
                err += d * d;
            }
            num += m * err;
            denom += m;
        }
    }
    let masked_patch_l2 = if denom > 0.0 { num / denom } else { 0.0 };

    let position_l2 = pred_traj
        .iter()
        .zip(gt_traj)
        .map(|(p, g)| {
            let dx = p.0 - g.0;
            let dy = p.1 - g.1;
            dx * dx + dy * dy
        })
        .sum::<f64>()
        / pred_traj.len() as f64;

    Ok(CursorLosses {
        position_l2,
        masked_patch_l2,
    })
}

/// Fraction of steps whose predicted point lies within `radius` of the
/// ground truth. Not comparable to any published cursor-accuracy number;
/// the hit criterion there is undefined.
pub fn cursor_hit_rate(pred_traj: &[(f64, f64)], gt_traj: &[(f64, f64)], radius: f64) -> f64 {
    if pred_traj.is_empty() {
        return 0.0;
    }
    let hits = pred_traj
        .iter()
        .zip(gt_traj)
        .filter(|(p, g)| {
            let dx = p.0 - g.0;
            let dy = p.1 - g.1;
            (dx * dx + dy * dy).sqrt() <= radius
        })
        .count();
    hits as f64 / pred_traj.len() as f64
}
