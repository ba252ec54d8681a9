//! Parser and deterministic executor for the scripted terminal DSL used by
//! CLIGen (Clean) traces, scripted-caption derivation, and the arithmetic
//! probe generator/scorer.
//!
//! Execution is a pure clock simulation: `Sleep` advances the clock, `Type`
//! and key commands emit timed events each followed by the per-keystroke
//! delay (the `@<time>` override replaces `TypingSpeed` for every key of
//! that command), `Hide`/`Show` toggle event visibility. No shell is ever
//! spawned; `Require` is parsed and recorded, not enforced.

use std::collections::HashSet;
use std::fmt;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::textnorm;

#[derive(Debug, Error, PartialEq)]
pub enum VhsError {
    #[error("unknown command at line {line}: {word}")]
    UnknownCommand { line: usize, word: String },
    #[error("malformed theme block: {0}")]
    MalformedTheme(String),
    #[error("malformed duration at line {line}: {text}")]
    MalformedDuration { line: usize, text: String },
}

// ── Script model ────────────────────────────────────────────────────

/// Terminal color theme as embedded in `Set Theme {...}` blocks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(default)]
pub struct VhsTheme {
    pub name: String,
    pub background: String,
    pub foreground: String,
    pub black: String,
    pub red: String,
    pub green: String,
    pub yellow: String,
    pub blue: String,
    pub purple: String,
    pub cyan: String,
    pub white: String,
    #[serde(rename = "brightBlack")]
    pub bright_black: String,
    #[serde(rename = "brightRed")]
    pub bright_red: String,
    #[serde(rename = "brightGreen")]
    pub bright_green: String,
    #[serde(rename = "brightYellow")]
    pub bright_yellow: String,
    #[serde(rename = "brightBlue")]
    pub bright_blue: String,
    #[serde(rename = "brightPurple")]
    pub bright_purple: String,
    #[serde(rename = "brightCyan")]
    pub bright_cyan: String,
    #[serde(rename = "brightWhite")]
    pub bright_white: String,
    pub cursor: String,
    #[serde(rename = "cursorAccent")]
    pub cursor_accent: String,
    #[serde(rename = "selectionBackground")]
    pub selection_background: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VhsSettings {
    pub shell: String,
    pub theme: Option<VhsTheme>,
    pub font_size: u32,
    pub width: u32,
    pub height: u32,
    /// Per-keystroke delay in milliseconds, applied after each emitted key.
    pub typing_speed_ms: f64,
    /// Affects only rendering timestamps, never the logical event clock.
    pub playback_speed: f64,
    pub margin: f64,
    pub margin_fill: String,
    pub border_radius: f64,
    pub padding: f64,
    pub line_height: f64,
    pub letter_spacing: f64,
}

impl Default for VhsSettings {
    fn default() -> Self {
        VhsSettings {
            shell: "bash".to_string(),
            theme: None,
            font_size: 22,
            width: 1200,
            height: 600,
            typing_speed_ms: 50.0,
            playback_speed: 1.0,
            margin: 0.0,
            margin_fill: String::new(),
            border_radius: 0.0,
            padding: 0.0,
            line_height: 1.0,
            letter_spacing: 0.0,
        }
    }
}

/// `# KEY: value` comment annotations carried by corpus scripts.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Annotations {
    pub id: Option<String>,
    pub instruction: Option<String>,
    pub level: Option<i64>,
    pub events: Option<i64>,
    pub visual_complexity: Option<i64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum KeyName {
    Escape,
    Backspace,
    Delete,
    Insert,
    Down,
    Enter,
    Space,
    Tab,
    Left,
    Right,
    Up,
    PageUp,
    PageDown,
}

impl KeyName {
    pub fn parse(word: &str) -> Option<KeyName> {
        Some(match word {
            "Escape" => KeyName::Escape,
            "Backspace" => KeyName::Backspace,
            "Delete" => KeyName::Delete,
            "Insert" => KeyName::Insert,
            "Down" => KeyName::Down,
            "Enter" => KeyName::Enter,
            "Space" => KeyName::Space,
            "Tab" => KeyName::Tab,
            "Left" => KeyName::Left,
            "Right" => KeyName::Right,
            "Up" => KeyName::Up,
            "PageUp" => KeyName::PageUp,
            "PageDown" => KeyName::PageDown,
            _ => return None,
        })
    }
}

impl fmt::Display for KeyName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            KeyName::Escape => "Escape",
            KeyName::Backspace => "Backspace",
            KeyName::Delete => "Delete",
            KeyName::Insert => "Insert",
            KeyName::Down => "Down",
            KeyName::Enter => "Enter",
            KeyName::Space => "Space",
            KeyName::Tab => "Tab",
            KeyName::Left => "Left",
            KeyName::Right => "Right",
            KeyName::Up => "Up",
            KeyName::PageUp => "PageUp",
            KeyName::PageDown => "PageDown",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Command {
    Sleep(f64),
    Type { text: String, per_key_ms: Option<f64> },
    Key { name: KeyName, per_key_ms: Option<f64>, repeat: u32 },
    Ctrl(String),
    Hide,
    Show,
    Require(String),
    Output(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct VhsScript {
    pub output_path: String,
    pub settings: VhsSettings,
    pub commands: Vec<Command>,
    pub annotations: Annotations,
}

// ── Parsing ─────────────────────────────────────────────────────────

/// Parse a script. Comments matching `# KEY: value` for the known keys are
/// captured into annotations; other comments are ignored. Unknown `Set`
/// names are ignored (the upstream tool has more settings than we model);
/// unknown command words are an error.
pub fn parse_script(text: &str) -> Result<VhsScript, VhsError> {
    let mut script = VhsScript {
        output_path: String::new(),
        settings: VhsSettings::default(),
        commands: Vec::new(),
        annotations: Annotations::default(),
    };

    let lines: Vec<&str> = text.lines().collect();
    let mut i = 0;
    while i < lines.len() {
        let line_no = i + 1;
        let line = lines[i].trim();
        i += 1;
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            parse_annotation(comment, &mut script.annotations);
            continue;
        }

        let (word, rest) = split_word(line);
        match word {
            "Output" => script.output_path = rest.trim().to_string(),
            "Set" => {
                let (name, value) = split_word(rest.trim());
                if name == "Theme" {
                    // The JSON block may span lines; consume to brace balance.
                    let mut block = value.trim().to_string();
                    let mut depth = brace_depth(&block);
                    while depth > 0 && i < lines.len() {
                        block.push('\n');
                        block.push_str(lines[i]);
                        depth += brace_depth(lines[i]);
                        i += 1;
                    }
                    let theme: VhsTheme = serde_json::from_str(&block)
                        .map_err(|e| VhsError::MalformedTheme(e.to_string()))?;
                    script.settings.theme = Some(theme);
                } else {
                    apply_setting(&mut script.settings, name, value.trim(), line_no)?;
                }
            }
            "Sleep" => {
                let ms = parse_duration_ms(rest.trim()).ok_or(VhsError::MalformedDuration {
                    line: line_no,
                    text: rest.trim().to_string(),
                })?;
                script.commands.push(Command::Sleep(ms));
            }
            "Hide" => script.commands.push(Command::Hide),
            "Show" => script.commands.push(Command::Show),
            "Require" => script.commands.push(Command::Require(rest.trim().to_string())),
            _ => {
                let (base, at) = split_at_suffix(word);
                let per_key_ms = match at {
                    Some(text) => Some(parse_duration_ms(text).ok_or(
                        VhsError::MalformedDuration {
                            line: line_no,
                            text: text.to_string(),
                        },
                    )?),
                    None => None,
                };
                if base == "Type" {
                    let text = parse_quoted(rest.trim()).ok_or(VhsError::UnknownCommand {
                        line: line_no,
                        word: line.to_string(),
                    })?;
                    script.commands.push(Command::Type { text, per_key_ms });
                } else if let Some(key) = base.strip_prefix("Ctrl+").or_else(|| base.strip_prefix("ctrl+")) {
                    script.commands.push(Command::Ctrl(key.to_ascii_lowercase()));
                } else if let Some(name) = KeyName::parse(base) {
                    let repeat = if rest.trim().is_empty() {
                        1
                    } else {
                        rest.trim().parse::<u32>().map_err(|_| VhsError::UnknownCommand {
                            line: line_no,
                            word: line.to_string(),
                        })?
                    };
                    script.commands.push(Command::Key {
                        name,
                        per_key_ms,
                        repeat: repeat.max(1),
                    });
                } else {
                    return Err(VhsError::UnknownCommand {
                        line: line_no,
                        word: word.to_string(),
                    });
                }
            }
        }
    }

    if script.settings.typing_speed_ms <= 0.0 {
        return Err(VhsError::MalformedDuration {
            line: 0,
            text: "TypingSpeed must be positive".to_string(),
        });
    }
    Ok(script)
}

fn parse_annotation(comment: &str, ann: &mut Annotations) {
    let Some((key, value)) = comment.split_once(':') else {
        return;
    };
    let value = value.trim();
    match key.trim() {
        "ID" => ann.id = Some(value.to_string()),
        "INSTRUCTION" => ann.instruction = Some(value.to_string()),
        "LEVEL" => ann.level = value.parse().ok(),
        "EVENTS" => ann.events = value.parse().ok(),
        "VISUAL_COMPLEXITY" => ann.visual_complexity = value.parse().ok(),
        _ => {}
    }
}

fn split_word(s: &str) -> (&str, &str) {
    match s.find(char::is_whitespace) {
        Some(pos) => (&s[..pos], &s[pos..]),
        None => (s, ""),
    }
}

fn split_at_suffix(word: &str) -> (&str, Option<&str>) {
    match word.split_once('@') {
        Some((base, at)) => (base, Some(at)),
        None => (word, None),
    }
}

fn brace_depth(s: &str) -> i32 {
    s.chars().fold(0, |d, c| match c {
        '{' => d + 1,
        '}' => d - 1,
        _ => d,
    })
}

/// Duration literal: `300ms`, `1.5s`, bare numbers are seconds.
fn parse_duration_ms(text: &str) -> Option<f64> {
    let text = text.trim();
    let (number, scale) = if let Some(n) = text.strip_suffix("ms") {
        (n, 1.0)
    } else if let Some(n) = text.strip_suffix('s') {
        (n, 1000.0)
    } else {
        (text, 1000.0)
    };
    let v: f64 = number.trim().parse().ok()?;
    (v.is_finite() && v >= 0.0).then_some(v * scale)
}

fn parse_quoted(s: &str) -> Option<String> {
    let mut chars = s.chars();
    let quote = chars.next()?;
    if quote != '"' && quote != '\'' && quote != '`' {
        return None;
    }
    let rest: String = chars.collect();
    let end = rest.rfind(quote)?;
    Some(rest[..end].to_string())
}

fn apply_setting(
    settings: &mut VhsSettings,
    name: &str,
    value: &str,
    line_no: usize,
) -> Result<(), VhsError> {
    let dur_err = || VhsError::MalformedDuration {
        line: line_no,
        text: value.to_string(),
    };
    match name {
        "Shell" => settings.shell = parse_quoted(value).unwrap_or_else(|| value.to_string()),
        "FontSize" => settings.font_size = value.parse().map_err(|_| dur_err())?,
        "Width" => settings.width = value.parse().map_err(|_| dur_err())?,
        "Height" => settings.height = value.parse().map_err(|_| dur_err())?,
        "TypingSpeed" => settings.typing_speed_ms = parse_duration_ms(value).ok_or_else(dur_err)?,
        "PlaybackSpeed" => settings.playback_speed = value.parse().map_err(|_| dur_err())?,
        "Margin" => settings.margin = value.parse().map_err(|_| dur_err())?,
        "MarginFill" => settings.margin_fill = parse_quoted(value).unwrap_or_else(|| value.to_string()),
        "BorderRadius" => settings.border_radius = value.parse().map_err(|_| dur_err())?,
        "Padding" => settings.padding = value.parse().map_err(|_| dur_err())?,
        "LineHeight" => settings.line_height = value.parse().map_err(|_| dur_err())?,
        "LetterSpacing" => settings.letter_spacing = value.parse().map_err(|_| dur_err())?,
        _ => {} // settings we don't model
    }
    Ok(())
}

// ── Execution ───────────────────────────────────────────────────────

#[derive(Debug, Clone, PartialEq)]
pub enum KeyInput {
    Char(char),
    Named(KeyName),
    Chord(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimedKeyEvent {
    /// Milliseconds from script start on the logical clock.
    pub time_ms: f64,
    pub input: KeyInput,
    pub visible: bool,
}

/// Execution result: the timed event list plus the final clock value.
#[derive(Debug, Clone, PartialEq)]
pub struct Execution {
    pub events: Vec<TimedKeyEvent>,
    pub total_ms: f64,
}

/// Run the clock simulation. Deterministic; event times are non-decreasing
/// by construction and `total_ms` equals the sum of all advances and sleeps.
pub fn execute(script: &VhsScript) -> Execution {
    let mut clock = 0.0f64;
    let mut visible = true;
    let mut events = Vec::new();

    for cmd in &script.commands {
        match cmd {
            Command::Sleep(ms) => clock += ms,
            Command::Type { text, per_key_ms } => {
                let advance = per_key_ms.unwrap_or(script.settings.typing_speed_ms);
                for ch in text.chars() {
                    events.push(TimedKeyEvent {
                        time_ms: clock,
                        input: KeyInput::Char(ch),
                        visible,
                    });
                    clock += advance;
                }
            }
            Command::Key {
                name,
                per_key_ms,
                repeat,
            } => {
                let advance = per_key_ms.unwrap_or(script.settings.typing_speed_ms);
                for _ in 0..*repeat {
                    events.push(TimedKeyEvent {
                        time_ms: clock,
                        input: KeyInput::Named(*name),
                        visible,
                    });
                    clock += advance;
                }
            }
            Command::Ctrl(key) => {
                events.push(TimedKeyEvent {
                    time_ms: clock,
                    input: KeyInput::Chord(format!("ctrl+{key}")),
                    visible,
                });
            }
            Command::Hide => visible = false,
            Command::Show => visible = true,
            Command::Require(_) | Command::Output(_) => {}
        }
    }

    Execution {
        events,
        total_ms: clock,
    }
}

// ── Scripted captions ───────────────────────────────────────────────

/// Semicolon-joined sequence of user-visible commands: `Type <text>` for
/// typed text, key presses by name, chords as `ctrl+<key>`; Sleep, Hide,
/// Show, Require, Output and settings are omitted. Terminated with a
/// period when nonempty.
pub fn derive_caption(script: &VhsScript) -> String {
    let mut parts: Vec<String> = Vec::new();
    for cmd in &script.commands {
        match cmd {
            Command::Type { text, .. } => parts.push(format!("Type {text}")),
            Command::Key { name, repeat, .. } => {
                for _ in 0..*repeat {
                    parts.push(name.to_string());
                }
            }
            Command::Ctrl(key) => parts.push(format!("ctrl+{key}")),
            _ => {}
        }
    }
    if parts.is_empty() {
        String::new()
    } else {
        format!("{}.", parts.join("; "))
    }
}

// ── Script serialization ────────────────────────────────────────────

/// Render a script back to DSL text. `parse_script(to_script_text(s))`
/// yields the same commands (and therefore the same caption and event
/// schedule).
pub fn to_script_text(script: &VhsScript) -> String {
    let mut out = String::new();
    if let Some(id) = &script.annotations.id {
        out.push_str(&format!("# ID: {id}\n"));
    }
    if let Some(instruction) = &script.annotations.instruction {
        out.push_str(&format!("# INSTRUCTION: {instruction}\n"));
    }
    if let Some(level) = script.annotations.level {
        out.push_str(&format!("# LEVEL: {level}\n"));
    }
    if let Some(events) = script.annotations.events {
        out.push_str(&format!("# EVENTS: {events}\n"));
    }
    if let Some(vc) = script.annotations.visual_complexity {
        out.push_str(&format!("# VISUAL_COMPLEXITY: {vc}\n"));
    }
    if !script.output_path.is_empty() {
        out.push_str(&format!("Output {}\n", script.output_path));
    }
    let s = &script.settings;
    out.push_str(&format!("Set Shell \"{}\"\n", s.shell));
    if let Some(theme) = &s.theme {
        out.push_str("Set Theme ");
        out.push_str(&serde_json::to_string(theme).expect("theme serializes"));
        out.push('\n');
    }
    out.push_str(&format!("Set FontSize {}\n", s.font_size));
    out.push_str(&format!("Set Width {}\n", s.width));
    out.push_str(&format!("Set Height {}\n", s.height));
    out.push_str(&format!("Set TypingSpeed {}ms\n", s.typing_speed_ms));
    out.push_str(&format!("Set PlaybackSpeed {}\n", s.playback_speed));

    for cmd in &script.commands {
        match cmd {
            Command::Sleep(ms) => out.push_str(&format!("Sleep {ms}ms\n")),
            Command::Type { text, per_key_ms } => match per_key_ms {
                Some(ms) => out.push_str(&format!("Type@{ms}ms \"{text}\"\n")),
                None => out.push_str(&format!("Type \"{text}\"\n")),
            },
            Command::Key {
                name,
                per_key_ms,
                repeat,
            } => {
                let at = per_key_ms.map(|ms| format!("@{ms}ms")).unwrap_or_default();
                if *repeat == 1 {
                    out.push_str(&format!("{name}{at}\n"));
                } else {
                    out.push_str(&format!("{name}{at} {repeat}\n"));
                }
            }
            Command::Ctrl(key) => out.push_str(&format!("Ctrl+{key}\n")),
            Command::Hide => out.push_str("Hide\n"),
            Command::Show => out.push_str("Show\n"),
            Command::Require(what) => out.push_str(&format!("Require {what}\n")),
            Command::Output(path) => out.push_str(&format!("Output {path}\n")),
        }
    }
    out
}

// ── Arithmetic probes ───────────────────────────────────────────────

/// One generated probe: a REPL script plus the exact expected answer.
#[derive(Debug, Clone, PartialEq)]
pub struct ArithProbe {
    pub script: VhsScript,
    pub expression: String,
    pub expected_answer: String,
}

/// Deterministic probe generation over a restricted grammar: integer
/// literals in [0, 10^6], operators {+, -, *, //, %}, at most 2 operators,
/// divisors never zero. Expected answers come from the built-in exact
/// integer evaluator; expressions are unique within one call.
pub fn gen_arith_probe(seed: u64, n: usize) -> Vec<ArithProbe> {
    assert!(n >= 1, "n must be >= 1");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::new();
    let mut probes = Vec::with_capacity(n);

    while probes.len() < n {
        let expression = random_expression(&mut rng);
        if !seen.insert(expression.clone()) {
            continue;
        }
        let expected = eval_expression(&expression)
            .expect("generator emits only valid expressions")
            .to_string();
        let idx = probes.len();
        probes.push(ArithProbe {
            script: probe_script(seed, idx, &expression),
            expression,
            expected_answer: expected,
        });
    }
    probes
}

const OPS: [&str; 5] = ["+", "-", "*", "//", "%"];

fn random_expression(rng: &mut ChaCha8Rng) -> String {
    let n_ops = rng.gen_range(1..=2usize);
    let mut expr = String::new();
    let mut next_literal_nonzero = false;
    for i in 0..=n_ops {
        let lo = if next_literal_nonzero { 1 } else { 0 };
        let lit: u64 = rng.gen_range(lo..=1_000_000);
        expr.push_str(&lit.to_string());
        if i < n_ops {
            let op = OPS[rng.gen_range(0..OPS.len())];
            expr.push_str(op);
            next_literal_nonzero = matches!(op, "//" | "%");
        }
    }
    expr
}

fn probe_script(seed: u64, idx: usize, expression: &str) -> VhsScript {
    VhsScript {
        output_path: format!("probe_{idx:04}.mp4"),
        settings: VhsSettings {
            typing_speed_ms: 100.0,
            ..VhsSettings::default()
        },
        commands: vec![
            Command::Type {
                text: "python".to_string(),
                per_key_ms: None,
            },
            Command::Key {
                name: KeyName::Enter,
                per_key_ms: None,
                repeat: 1,
            },
            Command::Sleep(500.0),
            Command::Type {
                text: expression.to_string(),
                per_key_ms: None,
            },
            Command::Key {
                name: KeyName::Enter,
                per_key_ms: None,
                repeat: 1,
            },
            Command::Sleep(500.0),
            Command::Type {
                text: "exit()".to_string(),
                per_key_ms: None,
            },
            Command::Key {
                name: KeyName::Enter,
                per_key_ms: None,
                repeat: 1,
            },
        ],
        annotations: Annotations {
            id: Some(format!("probe-{seed}-{idx:04}")),
            instruction: Some(format!("Evaluate {expression} in a Python REPL.")),
            ..Annotations::default()
        },
    }
}

/// Exact integer evaluation of the probe grammar with REPL semantics:
/// {*, //, %} bind tighter than {+, -}, all left-associative, `//` is
/// floor division and `%` takes the divisor's sign. i128 cannot overflow
/// here (three literals ≤ 10^6 and two operators bound |value| by 10^18).
pub fn eval_expression(expr: &str) -> Option<i128> {
    let tokens = tokenize(expr)?;
    let mut pos = 0;
    let value = parse_sum(&tokens, &mut pos)?;
    (pos == tokens.len()).then_some(value)
}

#[derive(Debug, PartialEq)]
enum Token {
    Lit(i128),
    Op(&'static str),
}

fn tokenize(expr: &str) -> Option<Vec<Token>> {
    let mut tokens = Vec::new();
    let bytes = expr.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        match bytes[i] {
            b' ' => i += 1,
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                tokens.push(Token::Lit(expr[start..i].parse().ok()?));
            }
            b'+' => {
                tokens.push(Token::Op("+"));
                i += 1;
            }
            b'-' => {
                tokens.push(Token::Op("-"));
                i += 1;
            }
            b'*' => {
                tokens.push(Token::Op("*"));
                i += 1;
            }
            b'%' => {
                tokens.push(Token::Op("%"));
                i += 1;
            }
            b'/' => {
                if bytes.get(i + 1) == Some(&b'/') {
                    tokens.push(Token::Op("//"));
                    i += 2;
                } else {
                    return None;
                }
            }
            _ => return None,
        }
    }
    Some(tokens)
}

fn parse_sum(tokens: &[Token], pos: &mut usize) -> Option<i128> {
    let mut acc = parse_product(tokens, pos)?;
    while let Some(Token::Op(op @ ("+" | "-"))) = tokens.get(*pos) {
        *pos += 1;
        let rhs = parse_product(tokens, pos)?;
        acc = match *op {
            "+" => acc.checked_add(rhs)?,
            _ => acc.checked_sub(rhs)?,
        };
    }
    Some(acc)
}

fn parse_product(tokens: &[Token], pos: &mut usize) -> Option<i128> {
    let mut acc = match tokens.get(*pos)? {
        Token::Lit(v) => {
            *pos += 1;
            *v
        }
        _ => return None,
    };
    while let Some(Token::Op(op @ ("*" | "//" | "%"))) = tokens.get(*pos) {
        *pos += 1;
        let rhs = match tokens.get(*pos)? {
            Token::Lit(v) => {
                *pos += 1;
                *v
            }
            _ => return None,
        };
        acc = match *op {
            "*" => acc.checked_mul(rhs)?,
            "//" => {
                if rhs == 0 {
                    return None;
                }
                acc.div_euclid(rhs)
            }
            _ => {
                if rhs == 0 {
                    return None;
                }
                acc.rem_euclid(rhs)
            }
        };
    }
    Some(acc)
}

/// True iff some generated line, after normalization, equals the expected
/// answer exactly.
pub fn score_probe(expected: &str, generated_lines: &[String]) -> bool {
    generated_lines
        .iter()
        .filter_map(|line| textnorm::normalize_line(line))
        .any(|line| line == expected)
}
