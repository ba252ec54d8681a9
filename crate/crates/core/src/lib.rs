//! Core library for the ncforge pipeline: terminal-session ingestion and
//! replay, scripted-terminal execution, deterministic rasterization, episode
//! packaging, action encoding/alignment, a toy action-conditioned backbone,
//! and the evaluation metric kernels.
//!
//! Everything in here is a pure function over immutable values; batch work
//! parallelizes at the caller with no shared state.

pub mod action_codec;
pub mod cast_io;
pub mod dataset;
pub mod metrics;
pub mod rasterizer;
pub mod term_emu;
pub mod textnorm;
pub mod toy_nc;
pub mod vhs_engine;

pub(crate) mod seeded;

/// Round half away from zero, the rounding rule shared by frame samplers,
/// cursor placement, and action-to-frame index mapping. `f64::round` has
/// exactly these semantics; the wrapper exists so the rule is named once
/// and stays greppable for cross-language ports.
pub fn round_half_away(x: f64) -> i64 {
    x.round() as i64
}
