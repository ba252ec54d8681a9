//! Contextual attention mask over the joint [video; action] token sequence.
//!
//! Read as a query-key matrix: rows are queries, columns are keys. Four
//! blocks:
//! - V2V: frame i sees frames within ±w steps
//! - V2A: frame i sees actions j in the lag-bounded range
//!   [max(0, i-lag), min(i, L_a-1)]
//! - A2V: action i sees frames t >= i+lag (clipped to t < L_v) — the
//!   representation-only path; actions never read earlier frames
//! - A2A: strict diagonal, each action token attends to itself
//!
//! The export format is a small header plus row-major packed bits so other
//! implementations can diff masks byte-for-byte.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum MaskError {
    #[error("malformed mask bitmap: {0}")]
    Malformed(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContextualMask {
    pub l_v: usize,
    pub l_a: usize,
    pub window: usize,
    pub lag: usize,
    allowed: Vec<bool>,
}

/// Build the mask. Every video row allows at least itself; every action
/// row allows its own diagonal entry.
pub fn build_contextual_mask(l_v: usize, l_a: usize, window: usize, lag: usize) -> ContextualMask {
    assert!(l_v >= 1, "need at least one video token");
    let n = l_v + l_a;
    let mut allowed = vec![false; n * n];
    for i in 0..l_v {
        for j in 0..l_v {
            if i.abs_diff(j) <= window {
                allowed[i * n + j] = true;
            }
        }
        if l_a > 0 {
            let lo = i.saturating_sub(lag);
            let hi = i.min(l_a - 1);
            for j in lo..=hi {
                allowed[i * n + l_v + j] = true;
            }
        }
    }
    for i in 0..l_a {
        for t in (i + lag).min(l_v)..l_v {
            allowed[(l_v + i) * n + t] = true;
        }
        allowed[(l_v + i) * n + l_v + i] = true;
    }
    ContextualMask {
        l_v,
        l_a,
        window,
        lag,
        allowed,
    }
}

impl ContextualMask {
    pub fn n(&self) -> usize {
        self.l_v + self.l_a
    }

    /// Whole-matrix lookup (joint indices).
    pub fn allowed(&self, query: usize, key: usize) -> bool {
        self.allowed[query * self.n() + key]
    }

    pub fn video_sees_video(&self, i: usize, j: usize) -> bool {
        self.allowed(i, j)
    }

    pub fn video_sees_action(&self, i: usize, j: usize) -> bool {
        self.allowed(i, self.l_v + j)
    }

    pub fn action_sees_video(&self, i: usize, t: usize) -> bool {
        self.allowed(self.l_v + i, t)
    }

    pub fn action_sees_action(&self, i: usize, j: usize) -> bool {
        self.allowed(self.l_v + i, self.l_v + j)
    }

    /// Portable export: magic, version, four u32 header fields, then
    /// row-major bits MSB-first with the final byte zero-padded.
    pub fn to_bitmap_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(b"NCMK");
        out.push(1u8);
        for v in [self.l_v, self.l_a, self.window, self.lag] {
            out.extend_from_slice(&(v as u32).to_le_bytes());
        }
        let mut byte = 0u8;
        let mut nbits = 0;
        for &bit in &self.allowed {
            byte = (byte << 1) | bit as u8;
            nbits += 1;
            if nbits == 8 {
                out.push(byte);
                byte = 0;
                nbits = 0;
            }
        }
        if nbits > 0 {
            out.push(byte << (8 - nbits));
        }
        out
    }

    pub fn from_bitmap_bytes(bytes: &[u8]) -> Result<ContextualMask, MaskError> {
        if bytes.len() < 21 || &bytes[0..4] != b"NCMK" || bytes[4] != 1 {
            return Err(MaskError::Malformed("bad magic or version".to_string()));
        }
        let mut fields = [0usize; 4];
        for (k, field) in fields.iter_mut().enumerate() {
            let off = 5 + 4 * k;
            *field = u32::from_le_bytes(bytes[off..off + 4].try_into().unwrap()) as usize;
        }
        let [l_v, l_a, window, lag] = fields;
        let n = l_v + l_a;
        let nbits = n * n;
        let expected_bytes = 21 + nbits.div_ceil(8);
        if bytes.len() != expected_bytes {
            return Err(MaskError::Malformed(format!(
                "expected {expected_bytes} bytes, found {}",
                bytes.len()
            )));
        }
        let mut allowed = Vec::with_capacity(nbits);
        for k in 0..nbits {
            let byte = bytes[21 + k / 8];
            allowed.push(byte & (0x80 >> (k % 8)) != 0);
        }
        Ok(ContextualMask {
            l_v,
            l_a,
            window,
            lag,
            allowed,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v2a_window_enumerates_by_the_rule() {
        // lag=2, i=5, L_a=10 -> actions {3,4,5}.
        let mask = build_contextual_mask(16, 10, 3, 2);
        let seen: Vec<usize> = (0..10).filter(|&j| mask.video_sees_action(5, j)).collect();
        assert_eq!(seen, vec![3, 4, 5]);
    }

    #[test]
    fn degenerate_window_is_identity_v2v() {
        let mask = build_contextual_mask(6, 0, 0, 0);
        for i in 0..6 {
            for j in 0..6 {
                assert_eq!(mask.video_sees_video(i, j), i == j);
            }
        }
    }

    #[test]
    fn a2a_is_strict_diagonal() {
        for (l_v, l_a) in [(4, 4), (8, 3), (2, 9)] {
            let mask = build_contextual_mask(l_v, l_a, 2, 1);
            for i in 0..l_a {
                for j in 0..l_a {
                    assert_eq!(mask.action_sees_action(i, j), i == j);
                }
            }
        }
    }

    #[test]
    fn a2v_starts_at_lagged_frame() {
        let mask = build_contextual_mask(8, 8, 2, 3);
        for i in 0..8 {
            for t in 0..8 {
                assert_eq!(mask.action_sees_video(i, t), t >= i + 3, "action {i} frame {t}");
            }
        }
    }

    #[test]
    fn block_invariants_hold_everywhere() {
        let (l_v, l_a, w, lag) = (12, 9, 2, 3);
        let mask = build_contextual_mask(l_v, l_a, w, lag);
        for i in 0..l_v {
            assert!(mask.video_sees_video(i, i), "video self-attention");
            for j in 0..l_v {
                assert_eq!(mask.video_sees_video(i, j), i.abs_diff(j) <= w);
            }
            for j in 0..l_a {
                let expected = j >= i.saturating_sub(lag) && j <= i.min(l_a - 1);
                assert_eq!(mask.video_sees_action(i, j), expected);
            }
        }
    }

    #[test]
    fn bitmap_round_trips() {
        let mask = build_contextual_mask(16, 16, 3, 2);
        let bytes = mask.to_bitmap_bytes();
        let back = ContextualMask::from_bitmap_bytes(&bytes).unwrap();
        assert_eq!(mask, back);
        assert!(ContextualMask::from_bitmap_bytes(&bytes[..10]).is_err());
    }
}
