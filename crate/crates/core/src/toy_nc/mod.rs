//! Toy action-conditioned backbone: the contextual attention mask, a
//! forward-only transformer under the four injection modes, and the
//! auxiliary loss kernels.

pub mod loss;
pub mod mask;
pub mod model;

pub use loss::{
    contrastive_loss, cursor_hit_rate, cursor_losses, future_pred_loss, CursorLosses,
    FuturePredHead, LossConfig, ProjectionSpec,
};
pub use mask::{build_contextual_mask, ContextualMask, MaskError};
pub use model::{forward, Mode, ToyConfig, ToyDims, ToyError, ToyModelParams};
