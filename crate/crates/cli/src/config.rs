//! Pipeline configuration: defaults, flag overlays, and config files.
//!
//! Precedence is defaults < flags < config file — the config file wins so
//! a pinned file reproduces a run regardless of stray flags. The resolved
//! effective config is written next to every output tree and re-parses.
//! All randomness flows through the three named seeds; there is no ambient
//! entropy anywhere in the pipeline.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

pub const CONFIG_ENV_VAR: &str = "NCFORGE_CONFIG";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub paths: Paths,
    pub emulator: EmulatorConfig,
    pub segmentation: SegmentationConfig,
    pub packaging: PackagingConfig,
    pub render: RenderConfig,
    pub alignment: AlignmentConfig,
    pub eval: EvalConfig,
    pub seeds: Seeds,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct Paths {
    pub input: PathBuf,
    pub output: PathBuf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmulatorConfig {
    /// Override the recording's terminal geometry (columns, rows).
    pub geometry: Option<(u32, u32)>,
    pub fps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SegmentationConfig {
    /// Maximum clip length in seconds.
    pub max_len: f64,
    /// Idle-gap threshold in seconds; absent means no gap splitting.
    pub gap_threshold: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackagingConfig {
    /// Fixed episode length after temporal normalization.
    pub target_frames: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RenderConfig {
    pub cell_w: usize,
    pub cell_h: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlignmentConfig {
    pub c: usize,
    pub w: usize,
    pub lag: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalConfig {
    /// Frames sampled per clip for the text metrics.
    pub k_frames: usize,
    /// Post-action window length.
    pub post_k: usize,
    /// Frames skipped after the action frame itself.
    pub offset: usize,
    /// Evaluation frame rate for decode/resample.
    pub fps: f64,
    /// Truncation point, applied after resampling to `fps`.
    pub max_seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Seeds {
    pub fourier: u64,
    pub toy_model: u64,
    pub probes: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            paths: Paths::default(),
            emulator: EmulatorConfig {
                geometry: None,
                fps: 15.0,
            },
            segmentation: SegmentationConfig {
                max_len: 5.0,
                gap_threshold: None,
            },
            packaging: PackagingConfig { target_frames: 75 },
            render: RenderConfig {
                cell_w: 8,
                cell_h: 16,
            },
            alignment: AlignmentConfig { c: 4, w: 2, lag: 1 },
            eval: EvalConfig {
                k_frames: 5,
                post_k: 15,
                offset: 1,
                fps: 3.0,
                max_seconds: 5.0,
            },
            seeds: Seeds {
                fourier: 101,
                toy_model: 202,
                probes: 303,
            },
        }
    }
}

/// Sparse overlay: every field optional. Used for both flag values and
/// config-file contents.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct ConfigOverlay {
    pub input: Option<PathBuf>,
    pub output: Option<PathBuf>,
    pub geometry: Option<(u32, u32)>,
    pub fps: Option<f64>,
    pub max_len: Option<f64>,
    pub gap_threshold: Option<f64>,
    pub target_frames: Option<usize>,
    pub cell_w: Option<usize>,
    pub cell_h: Option<usize>,
    pub c: Option<usize>,
    pub w: Option<usize>,
    pub lag: Option<usize>,
    pub k_frames: Option<usize>,
    pub post_k: Option<usize>,
    pub offset: Option<usize>,
    pub eval_fps: Option<f64>,
    pub max_seconds: Option<f64>,
    pub seed_fourier: Option<u64>,
    pub seed_toy_model: Option<u64>,
    pub seed_probes: Option<u64>,
}

impl PipelineConfig {
    fn apply(&mut self, overlay: &ConfigOverlay) {
        macro_rules! set {
            ($target:expr, $field:ident) => {
                if let Some(v) = &overlay.$field {
                    $target = v.clone();
                }
            };
        }
        set!(self.paths.input, input);
        set!(self.paths.output, output);
        if overlay.geometry.is_some() {
            self.emulator.geometry = overlay.geometry;
        }
        set!(self.emulator.fps, fps);
        set!(self.segmentation.max_len, max_len);
        if overlay.gap_threshold.is_some() {
            self.segmentation.gap_threshold = overlay.gap_threshold;
        }
        set!(self.packaging.target_frames, target_frames);
        set!(self.render.cell_w, cell_w);
        set!(self.render.cell_h, cell_h);
        set!(self.alignment.c, c);
        set!(self.alignment.w, w);
        set!(self.alignment.lag, lag);
        set!(self.eval.k_frames, k_frames);
        set!(self.eval.post_k, post_k);
        set!(self.eval.offset, offset);
        set!(self.eval.fps, eval_fps);
        set!(self.eval.max_seconds, max_seconds);
        set!(self.seeds.fourier, seed_fourier);
        set!(self.seeds.toy_model, seed_toy_model);
        set!(self.seeds.probes, seed_probes);
    }

    /// defaults < flags < config file. `config_path` falls back to the
    /// `NCFORGE_CONFIG` environment variable when unset.
    pub fn resolve(flags: &ConfigOverlay, config_path: Option<&Path>) -> Result<PipelineConfig> {
        let mut cfg = PipelineConfig::default();
        cfg.apply(flags);
        let path = config_path
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os(CONFIG_ENV_VAR).map(PathBuf::from));
        if let Some(path) = path {
            let bytes = std::fs::read(&path)
                .with_context(|| format!("reading config file {}", path.display()))?;
            let file_overlay: ConfigOverlay = serde_json::from_slice(&bytes)
                .with_context(|| format!("parsing config file {}", path.display()))?;
            cfg.apply(&file_overlay);
        }
        Ok(cfg)
    }

    /// Write the effective config next to an output tree.
    pub fn write_effective(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        let json = serde_json::to_vec_pretty(self)?;
        std::fs::write(dir.join("effective_config.json"), json)?;
        Ok(())
    }
}
