//! Toy-dimension transformer forward pass under the four action-injection
//! modes. Forward-only, f64 throughout, every weight block derived from one
//! seed — the point is exact verification of masking, alignment, and
//! injection semantics, not learned behavior.
//!
//! The shared block is `h' = FFN(h + CA_text(SA(h), c) [+ CA_action(h, a)])`
//! with `FFN(x) = x + W2 tanh(W1 x)` and a fixed seeded context block `c`.
//! Masked attention iterates only over allowed keys, so disallowed entries
//! are excluded before normalization and locality claims hold exactly.
//!
//! In contextual mode the joint sequence is processed with decomposed
//! attention: video rows compute their windowed V2V attention plus a
//! gated V2A read of the action stream (`W_out_act`), action rows compute
//! a diagonal self-read plus a gated A2V read. A single joint softmax
//! cannot collapse to the plain backbone when the gate is zeroed (the
//! action keys would still inflate the softmax denominator), so the
//! decomposition is what makes the zero-init identity exact.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::mask::{build_contextual_mask, ContextualMask};
use crate::seeded;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Error, PartialEq)]
pub enum ToyError {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("unknown mode: {0}")]
    UnknownMode(String),
    #[error("degenerate batch: {0}")]
    DegenerateBatch(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    External,
    Contextual,
    Residual,
    Internal,
}

impl std::str::FromStr for Mode {
    type Err = ToyError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "external" => Ok(Mode::External),
            "contextual" => Ok(Mode::Contextual),
            "residual" => Ok(Mode::Residual),
            "internal" => Ok(Mode::Internal),
            other => Err(ToyError::UnknownMode(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ToyDims {
    pub d_model: usize,
    pub n_heads: usize,
    pub n_blocks: usize,
    pub l_v: usize,
    pub l_a: usize,
}

#[derive(Debug, Clone)]
pub struct ToyConfig {
    pub dims: ToyDims,
    pub mode: Mode,
    pub seed: u64,
    /// V2V window and action lag for the contextual mask.
    pub window: usize,
    pub lag: usize,
    /// Zero every action-pathway output projection (collapse identity).
    pub zero_action_output: bool,
    /// Whether internal-mode action cross-attention also keys on mouse
    /// latents when they are provided.
    pub internal_mouse_keys: bool,
    /// Blocks that receive residual/internal injection; `None` selects
    /// every other block starting at 0.
    pub injection_blocks: Option<Vec<usize>>,
}

impl ToyConfig {
    pub fn new(dims: ToyDims, mode: Mode, seed: u64) -> Self {
        ToyConfig {
            dims,
            mode,
            seed,
            window: 2,
            lag: 1,
            zero_action_output: false,
            internal_mouse_keys: false,
            injection_blocks: None,
        }
    }
}

#[derive(Debug, Clone)]
struct AttnWeights {
    wq: Vec<Vec<f64>>,
    wk: Vec<Vec<f64>>,
    wv: Vec<Vec<f64>>,
    wo: Vec<Vec<f64>>,
}

impl AttnWeights {
    fn seeded(rng: &mut ChaCha8Rng, d: usize) -> Self {
        let scale = 1.0 / (d as f64).sqrt();
        AttnWeights {
            wq: seeded::gaussian_matrix(rng, d, d, scale),
            wk: seeded::gaussian_matrix(rng, d, d, scale),
            wv: seeded::gaussian_matrix(rng, d, d, scale),
            wo: seeded::gaussian_matrix(rng, d, d, scale),
        }
    }

    fn zero_output(mut self) -> Self {
        for row in &mut self.wo {
            row.fill(0.0);
        }
        self
    }
}

#[derive(Debug, Clone)]
struct Ffn {
    w1: Vec<Vec<f64>>,
    w2: Vec<Vec<f64>>,
}

impl Ffn {
    fn seeded(rng: &mut ChaCha8Rng, d: usize) -> Self {
        let hidden = 2 * d;
        Ffn {
            w1: seeded::gaussian_matrix(rng, hidden, d, 1.0 / (d as f64).sqrt()),
            w2: seeded::gaussian_matrix(rng, d, hidden, 1.0 / (hidden as f64).sqrt()),
        }
    }

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let hidden: Vec<f64> = self.w1.iter().map(|row| seeded::dot(row, x).tanh()).collect();
        let delta = seeded::mat_vec(&self.w2, &hidden);
        x.iter().zip(&delta).map(|(a, b)| a + b).collect()
    }
}

#[derive(Debug, Clone)]
struct Block {
    sa: AttnWeights,
    ca_text: AttnWeights,
    ffn: Ffn,
    ca_action: AttnWeights,
    residual_attn: AttnWeights,
    v2a: AttnWeights,
    a2v: AttnWeights,
    a2a: AttnWeights,
}

/// All weight blocks for every mode, derived from one seed. The same seed
/// yields the same backbone across modes, which is what makes cross-mode
/// identity checks meaningful.
#[derive(Debug, Clone)]
pub struct ToyModelParams {
    pub cfg: ToyConfig,
    blocks: Vec<Block>,
    ext_self: AttnWeights,
    ext_cross: AttnWeights,
    ctx_tokens: Vec<Vec<f64>>,
    mask: ContextualMask,
    injection: Vec<bool>,
}

const CTX_TOKENS: usize = 4;

impl ToyModelParams {
    pub fn new(cfg: ToyConfig) -> Self {
        let d = cfg.dims.d_model;
        assert!(d % cfg.dims.n_heads == 0, "d_model must divide by n_heads");
        let mut rng = seeded::rng_for(cfg.seed, 0x544f_594e);

        let mut blocks = Vec::with_capacity(cfg.dims.n_blocks);
        for _ in 0..cfg.dims.n_blocks {
            let sa = AttnWeights::seeded(&mut rng, d);
            let ca_text = AttnWeights::seeded(&mut rng, d);
            let ffn = Ffn::seeded(&mut rng, d);
            let mut ca_action = AttnWeights::seeded(&mut rng, d);
            let mut residual_attn = AttnWeights::seeded(&mut rng, d);
            let mut v2a = AttnWeights::seeded(&mut rng, d);
            let mut a2v = AttnWeights::seeded(&mut rng, d);
            let a2a = AttnWeights::seeded(&mut rng, d);
            if cfg.zero_action_output {
                ca_action = ca_action.zero_output();
                residual_attn = residual_attn.zero_output();
                v2a = v2a.zero_output();
                a2v = a2v.zero_output();
            }
            blocks.push(Block {
                sa,
                ca_text,
                ffn,
                ca_action,
                residual_attn,
                v2a,
                a2v,
                a2a,
            });
        }

        let ext_self = AttnWeights::seeded(&mut rng, d);
        let ext_cross = if cfg.zero_action_output {
            AttnWeights::seeded(&mut rng, d).zero_output()
        } else {
            AttnWeights::seeded(&mut rng, d)
        };
        let ctx_tokens = seeded::gaussian_matrix(&mut rng, CTX_TOKENS, d, 1.0);
        let mask = build_contextual_mask(cfg.dims.l_v, cfg.dims.l_a, cfg.window, cfg.lag);
        let injection = match &cfg.injection_blocks {
            Some(list) => (0..cfg.dims.n_blocks).map(|b| list.contains(&b)).collect(),
            None => (0..cfg.dims.n_blocks).map(|b| b % 2 == 0).collect(),
        };

        ToyModelParams {
            cfg,
            blocks,
            ext_self,
            ext_cross,
            ctx_tokens,
            mask,
            injection,
        }
    }

    pub fn mask(&self) -> &ContextualMask {
        &self.mask
    }
}

/// Multi-head attention with an arbitrary key mask. Rows with no allowed
/// key produce a zero output row (before `wo`). Masked keys are excluded
/// before normalization, never softmaxed at -inf and renormalized.
fn attention(
    queries: &[Vec<f64>],
    keys_values: &[Vec<f64>],
    weights: &AttnWeights,
    n_heads: usize,
    allow: impl Fn(usize, usize) -> bool,
) -> Vec<Vec<f64>> {
    let d = weights.wq.len();
    let d_head = d / n_heads;
    let scale = 1.0 / (d_head as f64).sqrt();

    let q: Vec<Vec<f64>> = queries.iter().map(|x| seeded::mat_vec(&weights.wq, x)).collect();
    let k: Vec<Vec<f64>> = keys_values.iter().map(|x| seeded::mat_vec(&weights.wk, x)).collect();
    let v: Vec<Vec<f64>> = keys_values.iter().map(|x| seeded::mat_vec(&weights.wv, x)).collect();

    let mut out = Vec::with_capacity(queries.len());
    for (qi, q_row) in q.iter().enumerate() {
        let allowed: Vec<usize> = (0..keys_values.len()).filter(|&kj| allow(qi, kj)).collect();
        let mut mixed = vec![0.0; d];
        if !allowed.is_empty() {
            for h in 0..n_heads {
                let lo = h * d_head;
                let hi = lo + d_head;
                let logits: Vec<f64> = allowed
                    .iter()
                    .map(|&kj| {
                        q_row[lo..hi]
                            .iter()
                            .zip(&k[kj][lo..hi])
                            .map(|(a, b)| a * b)
                            .sum::<f64>()
                            * scale
                    })
                    .collect();
                let max = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let exps: Vec<f64> = logits.iter().map(|&l| (l - max).exp()).collect();
                let denom: f64 = exps.iter().sum();
                for (&kj, &e) in allowed.iter().zip(&exps) {
                    let wgt = e / denom;
                    for (m, value) in mixed[lo..hi].iter_mut().zip(&v[kj][lo..hi]) {
                        *m += wgt * value;
                    }
                }
            }
        }
        out.push(seeded::mat_vec(&weights.wo, &mixed));
    }
    out
}

fn add_rows(a: &mut [Vec<f64>], b: &[Vec<f64>]) {
    for (ra, rb) in a.iter_mut().zip(b) {
        for (x, y) in ra.iter_mut().zip(rb) {
            *x += y;
        }
    }
}

impl ToyModelParams {
    /// One plain backbone block: windowed self-attention, text
    /// cross-attention onto the fixed context, FFN. `extra` (the action
    /// cross-attention term in internal mode) joins the pre-FFN sum.
    fn backbone_block(
        &self,
        block: &Block,
        h: &[Vec<f64>],
        extra: Option<Vec<Vec<f64>>>,
    ) -> Vec<Vec<f64>> {
        let sa = attention(h, h, &block.sa, self.cfg.dims.n_heads, |i, j| {
            i.abs_diff(j) <= self.cfg.window
        });
        let ca = attention(&sa, &self.ctx_tokens, &block.ca_text, self.cfg.dims.n_heads, |_, _| true);
        let mut s: Vec<Vec<f64>> = h.to_vec();
        add_rows(&mut s, &ca);
        if let Some(extra) = extra {
            add_rows(&mut s, &extra);
        }
        s.iter().map(|row| block.ffn.apply(row)).collect()
    }

    /// The action-free backbone every mode must collapse to when action
    /// output projections are zeroed.
    pub fn plain_backbone(&self, video: &[Vec<f64>]) -> Vec<Vec<f64>> {
        let mut h = video.to_vec();
        for block in &self.blocks {
            h = self.backbone_block(block, &h, None);
        }
        h
    }
}

/// Run the forward pass for the configured mode. `video` is L_v x d,
/// `actions` L_a x d (latent-aligned), `mouse` optional L_a x d. Returns
/// the video-row latents.
pub fn forward(
    params: &ToyModelParams,
    video: &[Vec<f64>],
    actions: &[Vec<f64>],
    mouse: Option<&[Vec<f64>]>,
) -> Result<Vec<Vec<f64>>, ToyError> {
    let dims = params.cfg.dims;
    check_shape(video, dims.l_v, dims.d_model, "video_latents")?;
    check_shape(actions, dims.l_a, dims.d_model, "action_latents")?;
    if let Some(mouse) = mouse {
        check_shape(mouse, dims.l_a, dims.d_model, "mouse_latents")?;
    }
    let n_heads = dims.n_heads;

    match params.cfg.mode {
        Mode::External => {
            // u' = u + SA(u); dz = gated cross-attention z -> u'; backbone(z + dz).
            let mut u = actions.to_vec();
            let sa_u = attention(actions, actions, &params.ext_self, n_heads, |_, _| true);
            add_rows(&mut u, &sa_u);
            let dz = attention(video, &u, &params.ext_cross, n_heads, |_, _| true);
            let mut z = video.to_vec();
            add_rows(&mut z, &dz);
            Ok(params.plain_backbone(&z))
        }
        Mode::Contextual => {
            let mask = &params.mask;
            let mut v = video.to_vec();
            let mut a = actions.to_vec();
            for block in &params.blocks {
                // Video rows: windowed V2V plus the gated lag-bounded V2A read.
                let sa_v = attention(&v, &v, &block.sa, n_heads, |i, j| mask.video_sees_video(i, j));
                let va = attention(&v, &a, &block.v2a, n_heads, |i, j| {
                    mask.video_sees_action(i, j)
                });
                let mut sv = sa_v;
                add_rows(&mut sv, &va);
                let ca_v =
                    attention(&sv, &params.ctx_tokens, &block.ca_text, n_heads, |_, _| true);
                let mut s_v: Vec<Vec<f64>> = v.clone();
                add_rows(&mut s_v, &ca_v);
                let v_next: Vec<Vec<f64>> = s_v.iter().map(|r| block.ffn.apply(r)).collect();

                // Action rows: diagonal self-read plus the gated A2V read.
                let sa_a = attention(&a, &a, &block.a2a, n_heads, |i, j| {
                    mask.action_sees_action(i, j)
                });
                let av = attention(&a, &v, &block.a2v, n_heads, |i, t| {
                    mask.action_sees_video(i, t)
                });
                let mut sa_sum = sa_a;
                add_rows(&mut sa_sum, &av);
                let ca_a =
                    attention(&sa_sum, &params.ctx_tokens, &block.ca_text, n_heads, |_, _| true);
                let mut s_a: Vec<Vec<f64>> = a.clone();
                add_rows(&mut s_a, &ca_a);
                let a_next: Vec<Vec<f64>> = s_a.iter().map(|r| block.ffn.apply(r)).collect();

                v = v_next;
                a = a_next;
            }
            Ok(v)
        }
        Mode::Residual => {
            // Standard blocks; selected blocks add a gated read of the
            // action (and mouse) features afterwards.
            let keys: Vec<Vec<f64>> = match mouse {
                Some(m) => actions.iter().chain(m.iter()).cloned().collect(),
                None => actions.to_vec(),
            };
            let mut h = video.to_vec();
            for (b, block) in params.blocks.iter().enumerate() {
                h = self_block(params, block, &h);
                if params.injection[b] {
                    let dh = attention(&h, &keys, &block.residual_attn, n_heads, |_, _| true);
                    add_rows(&mut h, &dh);
                }
            }
            Ok(h)
        }
        Mode::Internal => {
            let keys: Vec<Vec<f64>> = if params.cfg.internal_mouse_keys {
                match mouse {
                    Some(m) => actions.iter().chain(m.iter()).cloned().collect(),
                    None => actions.to_vec(),
                }
            } else {
                actions.to_vec()
            };
            let mut h = video.to_vec();
            for (b, block) in params.blocks.iter().enumerate() {
                let extra = if params.injection[b] {
                    Some(attention(&h, &keys, &block.ca_action, n_heads, |_, _| true))
                } else {
                    None
                };
                h = params.backbone_block(block, &h, extra);
            }
            Ok(h)
        }
    }
}

fn self_block(params: &ToyModelParams, block: &Block, h: &[Vec<f64>]) -> Vec<Vec<f64>> {
    params.backbone_block(block, h, None)
}

fn check_shape(rows: &[Vec<f64>], len: usize, d: usize, what: &str) -> Result<(), ToyError> {
    if rows.len() != len {
        return Err(ToyError::ShapeMismatch(format!(
            "{what}: expected {len} rows, found {}",
            rows.len()
        )));
    }
    if rows.iter().any(|r| r.len() != d) {
        return Err(ToyError::ShapeMismatch(format!(
            "{what}: expected row dim {d}"
        )));
    }
    Ok(())
}
