//! Deterministic input-echo terminal for scripted traces. No shell is
//! spawned: visible key events become synthetic terminal output (typed
//! characters echoed at a prompt, Enter starting a fresh prompt line,
//! Backspace rubbing out, ctrl+c printing ^C, ctrl+l clearing), which
//! yields a replayable cast recording with perfectly known ground truth.

use std::collections::BTreeMap;

use ncforge_core::cast_io::{CastEvent, CastHeader, CastRecording};
use ncforge_core::vhs_engine::{Execution, KeyInput, KeyName, VhsScript};

pub const PROMPT: &str = "$ ";

/// Synthetic output payload for one visible key event.
pub fn echo_payload(input: &KeyInput) -> String {
    match input {
        KeyInput::Char(c) => c.to_string(),
        KeyInput::Named(KeyName::Enter) => format!("\r\n{PROMPT}"),
        KeyInput::Named(KeyName::Space) => " ".to_string(),
        KeyInput::Named(KeyName::Tab) => "\t".to_string(),
        KeyInput::Named(KeyName::Backspace) => "\x08 \x08".to_string(),
        KeyInput::Named(_) => String::new(),
        KeyInput::Chord(chord) => match chord.as_str() {
            "ctrl+c" => format!("^C\r\n{PROMPT}"),
            "ctrl+l" => format!("\x1b[H\x1b[2J{PROMPT}"),
            _ => String::new(),
        },
    }
}

/// Terminal geometry derived from the script's pixel dimensions and font
/// size (half-width cells), clamped to something renderable.
pub fn script_geometry(script: &VhsScript) -> (u32, u32) {
    let font = script.settings.font_size.max(1);
    let cols = (script.settings.width / (font / 2).max(1)).clamp(20, 240);
    let rows = (script.settings.height / font).clamp(4, 100);
    (cols, rows)
}

/// Build a replayable cast recording from an executed script. Event times
/// sit on the rendering clock: logical milliseconds divided by
/// `PlaybackSpeed` (the logical event clock itself is never scaled).
pub fn execution_to_cast(
    script: &VhsScript,
    execution: &Execution,
    geometry: (u32, u32),
) -> CastRecording {
    let playback = if script.settings.playback_speed > 0.0 {
        script.settings.playback_speed
    } else {
        1.0
    };
    let mut env = BTreeMap::new();
    env.insert("SHELL".to_string(), script.settings.shell.clone());
    env.insert("TERM".to_string(), "xterm-256color".to_string());

    let mut events = vec![CastEvent::output(0.0, PROMPT)];
    for ev in &execution.events {
        if !ev.visible {
            continue;
        }
        let payload = echo_payload(&ev.input);
        if payload.is_empty() {
            continue;
        }
        events.push(CastEvent::output(ev.time_ms / 1000.0 / playback, payload));
    }
    // Hold the final state on screen for a beat so trailing output lands
    // inside the sampled window even at coarse frame rates.
    let last = events.last().map(|e| e.time)
        .unwrap_or(0.0);
    let total = (execution.total_ms / 1000.0 / playback).max(last);
    if total > last {
        events.push(CastEvent::output(total, ""));
    }

    CastRecording {
        header: CastHeader {
            version: 2,
            width: geometry.0,
            height: geometry.1,
            timestamp: None,
            env: Some(env),
            extras: serde_json::Map::new(),
        },
        events,
    }
}
