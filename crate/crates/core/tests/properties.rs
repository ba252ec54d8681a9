//! Property tests for the library invariants: parser totality and
//! round-trips, emulator totality and cursor clamping, replay prefix
//! consistency, segmentation partitioning, subsample bounds, mask block
//! rules, and edit-distance agreement with an independent oracle.

use proptest::prelude::*;

use ncforge_core::cast_io::{parse_cast, serialize_cast, CastEvent, CastHeader, CastRecording};
use ncforge_core::dataset::{segment, uniform_subsample, SegmentFrame};
use ncforge_core::metrics::{char_accuracy, levenshtein};
use ncforge_core::rasterizer::{build_reference_stream, render_cursor_layer, CursorTemplate, FrameTensor};
use ncforge_core::term_emu::{apply_output, new_grid, replay};
use ncforge_core::toy_nc::build_contextual_mask;

fn recording(events: Vec<CastEvent>) -> CastRecording {
    CastRecording {
        header: CastHeader {
            version: 2,
            width: 12,
            height: 6,
            timestamp: None,
            env: None,
            extras: serde_json::Map::new(),
        },
        events,
    }
}

fn arb_payload() -> impl Strategy<Value = String> {
    // Mix of plain text, control characters, and CSI fragments.
    proptest::collection::vec(
        prop_oneof![
            "[ -~]{0,6}".prop_map(|s| s),
            Just("\x1b[".to_string()),
            Just("\x1b[2J".to_string()),
            Just("\x1b[H".to_string()),
            Just("\r\n".to_string()),
            Just("\x1b[31;44m".to_string()),
            Just("\x1b[38;2;1;2;3m".to_string()),
            Just("\x1b]0;t".to_string()),
            Just("\x07".to_string()),
            Just("\x1b[?25l".to_string()),
            "[\\x00-\\x7f]{0,4}".prop_map(|s| s),
        ],
        0..8,
    )
    .prop_map(|parts| parts.concat())
}

proptest! {
    #[test]
    fn cast_parser_is_total_on_arbitrary_bytes(bytes in proptest::collection::vec(any::<u8>(), 0..512)) {
        let _ = parse_cast(&bytes); // must not panic
    }

    #[test]
    fn cast_round_trip_is_identity(
        times in proptest::collection::vec(0.0f64..1000.0, 0..12),
        payloads in proptest::collection::vec("[ -~]{0,10}", 0..12),
    ) {
        let mut sorted = times;
        sorted.sort_by(f64::total_cmp);
        let events: Vec<CastEvent> = sorted
            .iter()
            .zip(payloads.iter().cycle())
            .map(|(&t, p)| CastEvent::output(t, p.clone()))
            .collect();
        let rec = recording(events);
        let reparsed = parse_cast(&serialize_cast(&rec)).unwrap();
        prop_assert_eq!(rec, reparsed);
    }

    #[test]
    fn emulator_is_total_and_clamps_cursor(payload in arb_payload()) {
        let grid = new_grid(12, 6).unwrap();
        let out = apply_output(&grid, &payload);
        prop_assert!(out.cursor.row < 6);
        prop_assert!(out.cursor.col < 12);
    }

    #[test]
    fn clear_sequence_blanks_any_populated_grid(payload in arb_payload()) {
        // BEL forces the parser back to ground if the fuzzed payload ended
        // mid-sequence (a quiescent grid, as between real cast events).
        let grid = apply_output(&new_grid(12, 6).unwrap(), &format!("{payload}\x07"));
        let cleared = apply_output(&grid, "\x1b[H\x1b[2J\x1b[3J");
        prop_assert!(cleared.is_blank());
        prop_assert_eq!((cleared.cursor.row, cleared.cursor.col), (0, 0));
    }

    #[test]
    fn replay_prefix_consistency(
        times in proptest::collection::vec(0.0f64..4.0, 1..8),
        payloads in proptest::collection::vec("[ -~]{1,6}", 1..8),
    ) {
        let mut sorted = times;
        sorted.sort_by(f64::total_cmp);
        let events: Vec<CastEvent> = sorted
            .iter()
            .zip(payloads.iter().cycle())
            .map(|(&t, p)| CastEvent::output(t, p.clone()))
            .collect();
        let rec = recording(events.clone());
        let frames = replay(&rec, 15.0);
        for (i, (t, grid)) in frames.iter().enumerate().step_by(3) {
            // Oracle: apply every event with time <= i/fps to a fresh grid.
            let mut oracle = new_grid(12, 6).unwrap();
            for ev in events.iter().filter(|e| e.time <= *t) {
                oracle.feed(&ev.payload);
            }
            prop_assert!(grid.same_visual(&oracle), "frame {i} diverges from prefix oracle");
        }
    }

    #[test]
    fn subsample_is_sorted_unique_and_bounded(total in 1usize..300, target in 1usize..16) {
        let idx = uniform_subsample(total, target);
        prop_assert!(!idx.is_empty());
        prop_assert!(idx.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(idx.iter().all(|&i| i < total));
        if total > target && target > 1 {
            prop_assert_eq!(*idx.first().unwrap(), 0);
            prop_assert_eq!(*idx.last().unwrap(), total - 1);
        }
    }

    #[test]
    fn mask_blocks_follow_the_rules(
        l_v in 1usize..24,
        l_a in 0usize..24,
        w in 0usize..6,
        lag in 0usize..6,
    ) {
        let mask = build_contextual_mask(l_v, l_a, w, lag);
        for i in 0..l_v {
            prop_assert!(mask.video_sees_video(i, i));
            for j in 0..l_v {
                prop_assert_eq!(mask.video_sees_video(i, j), i.abs_diff(j) <= w);
            }
            for j in 0..l_a {
                let expected = j >= i.saturating_sub(lag) && j <= i.min(l_a - 1);
                prop_assert_eq!(mask.video_sees_action(i, j), expected);
            }
        }
        for i in 0..l_a {
            for j in 0..l_a {
                prop_assert_eq!(mask.action_sees_action(i, j), i == j);
            }
            for t in 0..l_v {
                prop_assert_eq!(mask.action_sees_video(i, t), t >= i + lag);
            }
        }
    }

    #[test]
    fn char_accuracy_in_unit_interval_and_matches_oracle(
        s in "[a-d ]{0,24}",
        t in "[a-d ]{0,24}",
    ) {
        let acc = char_accuracy(&s, &t);
        prop_assert!((0.0..=1.0).contains(&acc));
        // Full-matrix DP oracle, independent of the two-row implementation.
        let d = full_matrix_levenshtein(&s, &t);
        prop_assert_eq!(levenshtein(&s, &t), d);
        if !s.is_empty() {
            let expected = (1.0 - d as f64 / s.chars().count() as f64).max(0.0);
            prop_assert!((acc - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn reference_stream_invariants_hold(t in 1usize..8) {
        let tpl = CursorTemplate::default_arrow();
        let first = FrameTensor::filled(24, 24, 0.5);
        let layers: Vec<_> = (0..t)
            .map(|i| {
                let p = if i % 3 == 2 { None } else { Some((i as f64 / t as f64, 0.5)) };
                render_cursor_layer(p, 24, 24, &tpl)
            })
            .collect();
        let stream = build_reference_stream(&first, &layers).unwrap();
        prop_assert_eq!(stream.ref_imgs.len(), t);
        prop_assert!(stream.ref_masks[0].data.iter().all(|&v| v == 1.0));
        prop_assert_eq!(&stream.ref_imgs[0], &first);
        for i in 1..t {
            prop_assert_eq!(&stream.ref_masks[i], &layers[i].mask);
        }
    }
}

fn full_matrix_levenshtein(s: &str, t: &str) -> usize {
    let a: Vec<char> = s.chars().collect();
    let b: Vec<char> = t.chars().collect();
    let mut dp = vec![vec![0usize; b.len() + 1]; a.len() + 1];
    for (i, row) in dp.iter_mut().enumerate() {
        row[0] = i;
    }
    for j in 0..=b.len() {
        dp[0][j] = j;
    }
    for i in 1..=a.len() {
        for j in 1..=b.len() {
            let cost = (a[i - 1] != b[j - 1]) as usize;
            dp[i][j] = (dp[i - 1][j] + 1)
                .min(dp[i][j - 1] + 1)
                .min(dp[i - 1][j - 1] + cost);
        }
    }
    dp[a.len()][b.len()]
}

/// Segmentation partition as a plain test over a deterministic family —
/// the frame type lives here, not in the library.
#[derive(Debug, Clone, PartialEq)]
struct Tile(u32);

impl SegmentFrame for Tile {
    fn is_blank(&self) -> bool {
        self.0 == 0
    }
    fn same_visual(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

proptest! {
    #[test]
    fn segmentation_partitions_every_stream(
        ids in proptest::collection::vec(0u32..5, 1..120),
        max_len in 0.5f64..4.0,
        gap in 0.2f64..3.0,
    ) {
        let frames: Vec<(f64, Tile)> = ids
            .iter()
            .enumerate()
            .map(|(i, &id)| (i as f64 / 15.0, Tile(id)))
            .collect();
        let clips = segment(&frames, "prop", max_len, gap);
        let rejoined: Vec<Tile> = clips.iter().flat_map(|c| c.frames.clone()).collect();
        let original: Vec<Tile> = frames.iter().map(|(_, f)| f.clone()).collect();
        prop_assert_eq!(rejoined, original);
        prop_assert!(clips.last().unwrap().split_reason.is_none());
        for clip in &clips {
            prop_assert!(!clip.frames.is_empty());
        }
    }
}
