//! Reader/writer for asciinema cast v2 recordings and their sidecar
//! caption/metadata records.
//!
//! The format is newline-delimited: one JSON header object, then one
//! `[time, kind, payload]` JSON array per event. Parsing is lossless —
//! header fields beyond the documented five are kept in an opaque extras
//! map, and non-output events ("i", "m", "r", ...) are retained so a
//! recording always round-trips. Event times are stored as `f64` and
//! re-serialized with shortest-round-trip formatting, so the parsed value
//! survives serialize → parse bit-exactly.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CastError {
    #[error("malformed header: {0}")]
    MalformedHeader(String),
    #[error("malformed event at line {line}: {reason}")]
    MalformedEvent { line: usize, reason: String },
    #[error("non-monotonic event time at line {line}")]
    NonMonotonicTime { line: usize },
}

#[derive(Debug, Error, PartialEq)]
pub enum MetadataError {
    #[error("missing required field: {0}")]
    MissingField(String),
    #[error("malformed metadata record: {0}")]
    Malformed(String),
}

/// Recording header. `extras` holds any fields beyond the documented five.
#[derive(Debug, Clone, PartialEq)]
pub struct CastHeader {
    pub version: u32,
    pub width: u32,
    pub height: u32,
    pub timestamp: Option<i64>,
    pub env: Option<BTreeMap<String, String>>,
    pub extras: serde_json::Map<String, Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventKind {
    Output,
    Input,
    Other,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CastEvent {
    pub time: f64,
    pub kind: EventKind,
    /// Raw kind tag as it appeared in the file ("o", "i", "r", ...).
    pub tag: String,
    pub payload: String,
}

impl CastEvent {
    pub fn output(time: f64, payload: impl Into<String>) -> Self {
        CastEvent {
            time,
            kind: EventKind::Output,
            tag: "o".to_string(),
            payload: payload.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CastRecording {
    pub header: CastHeader,
    pub events: Vec<CastEvent>,
}

impl CastRecording {
    pub fn last_event_time(&self) -> Option<f64> {
        self.events.last().map(|e| e.time)
    }
}

fn kind_from_tag(tag: &str) -> EventKind {
    match tag {
        "o" => EventKind::Output,
        "i" => EventKind::Input,
        _ => EventKind::Other,
    }
}

/// Parse a cast v2 recording from raw file bytes.
///
/// Total on arbitrary bytes: returns a typed error, never panics. Blank
/// lines are skipped. Line numbers in errors are 1-based file lines.
pub fn parse_cast(bytes: &[u8]) -> Result<CastRecording, CastError> {
    let mut lines = split_lines(bytes);
    let (header_line_no, header_bytes) = loop {
        match lines.next() {
            Some((n, l)) if !is_blank(l) => break (n, l),
            Some(_) => continue,
            None => return Err(CastError::MalformedHeader("empty input".to_string())),
        }
    };
    let _ = header_line_no;

    let header_value: Value = serde_json::from_slice(header_bytes)
        .map_err(|e| CastError::MalformedHeader(e.to_string()))?;
    let header = header_from_value(header_value)?;

    let mut events = Vec::new();
    let mut prev_time = f64::NEG_INFINITY;
    for (line_no, line) in lines {
        if is_blank(line) {
            continue;
        }
        let value: Value = serde_json::from_slice(line).map_err(|e| CastError::MalformedEvent {
            line: line_no,
            reason: e.to_string(),
        })?;
        let event = event_from_value(value, line_no)?;
        if event.time < prev_time {
            return Err(CastError::NonMonotonicTime { line: line_no });
        }
        prev_time = event.time;
        events.push(event);
    }

    Ok(CastRecording { header, events })
}

fn split_lines(bytes: &[u8]) -> impl Iterator<Item = (usize, &[u8])> {
    bytes
        .split(|&b| b == b'\n')
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix(b"\r").unwrap_or(l)))
}

fn is_blank(line: &[u8]) -> bool {
    line.iter().all(|b| b.is_ascii_whitespace())
}

fn header_from_value(value: Value) -> Result<CastHeader, CastError> {
    let Value::Object(mut map) = value else {
        return Err(CastError::MalformedHeader(
            "first line is not an object".to_string(),
        ));
    };

    let version = take_u64(&mut map, "version")
        .ok_or_else(|| CastError::MalformedHeader("missing or non-integer version".to_string()))?;
    if version != 2 {
        return Err(CastError::MalformedHeader(format!(
            "unsupported version {version}"
        )));
    }
    let width = take_u64(&mut map, "width")
        .ok_or_else(|| CastError::MalformedHeader("missing or non-integer width".to_string()))?;
    let height = take_u64(&mut map, "height")
        .ok_or_else(|| CastError::MalformedHeader("missing or non-integer height".to_string()))?;
    if width == 0 || height == 0 {
        return Err(CastError::MalformedHeader(
            "width and height must be >= 1".to_string(),
        ));
    }

    let timestamp = match map.remove("timestamp") {
        None | Some(Value::Null) => None,
        Some(Value::Number(n)) => Some(n.as_i64().ok_or_else(|| {
            CastError::MalformedHeader("timestamp is not an integer".to_string())
        })?),
        Some(_) => {
            return Err(CastError::MalformedHeader(
                "timestamp is not a number".to_string(),
            ))
        }
    };

    let env = match map.remove("env") {
        None | Some(Value::Null) => None,
        Some(Value::Object(env_map)) => {
            let mut env = BTreeMap::new();
            for (k, v) in env_map {
                match v {
                    Value::String(s) => {
                        env.insert(k, s);
                    }
                    other => {
                        return Err(CastError::MalformedHeader(format!(
                            "env value for {k:?} is not a string: {other}"
                        )))
                    }
                }
            }
            Some(env)
        }
        Some(_) => {
            return Err(CastError::MalformedHeader(
                "env is not an object".to_string(),
            ))
        }
    };

    Ok(CastHeader {
        version: version as u32,
        width: width as u32,
        height: height as u32,
        timestamp,
        env,
        extras: map,
    })
}

fn take_u64(map: &mut serde_json::Map<String, Value>, key: &str) -> Option<u64> {
    match map.remove(key)? {
        Value::Number(n) => n.as_u64(),
        _ => None,
    }
}

fn event_from_value(value: Value, line: usize) -> Result<CastEvent, CastError> {
    let Value::Array(items) = value else {
        return Err(CastError::MalformedEvent {
            line,
            reason: "event line is not an array".to_string(),
        });
    };
    if items.len() != 3 {
        return Err(CastError::MalformedEvent {
            line,
            reason: format!("expected 3 elements, found {}", items.len()),
        });
    }
    let mut items = items.into_iter();
    let time = match items.next().unwrap() {
        Value::Number(n) => n.as_f64().ok_or_else(|| CastError::MalformedEvent {
            line,
            reason: "time is not representable as f64".to_string(),
        })?,
        _ => {
            return Err(CastError::MalformedEvent {
                line,
                reason: "time is not numeric".to_string(),
            })
        }
    };
    if !time.is_finite() || time < 0.0 {
        return Err(CastError::MalformedEvent {
            line,
            reason: "time must be a non-negative finite number".to_string(),
        });
    }
    let tag = match items.next().unwrap() {
        Value::String(s) => s,
        _ => {
            return Err(CastError::MalformedEvent {
                line,
                reason: "event kind is not a string".to_string(),
            })
        }
    };
    let payload = match items.next().unwrap() {
        Value::String(s) => s,
        _ => {
            return Err(CastError::MalformedEvent {
                line,
                reason: "payload is not a string".to_string(),
            })
        }
    };
    Ok(CastEvent {
        time,
        kind: kind_from_tag(&tag),
        tag,
        payload,
    })
}

/// Serialize a recording back to cast v2 bytes. Total on valid recordings;
/// `parse_cast(serialize_cast(r)) == r` structurally, times bit-exact.
pub fn serialize_cast(rec: &CastRecording) -> Vec<u8> {
    let mut map = serde_json::Map::new();
    map.insert("version".to_string(), Value::from(rec.header.version));
    map.insert("width".to_string(), Value::from(rec.header.width));
    map.insert("height".to_string(), Value::from(rec.header.height));
    if let Some(ts) = rec.header.timestamp {
        map.insert("timestamp".to_string(), Value::from(ts));
    }
    if let Some(env) = &rec.header.env {
        let env_map: serde_json::Map<String, Value> = env
            .iter()
            .map(|(k, v)| (k.clone(), Value::from(v.clone())))
            .collect();
        map.insert("env".to_string(), Value::Object(env_map));
    }
    for (k, v) in &rec.header.extras {
        map.insert(k.clone(), v.clone());
    }

    let mut out = serde_json::to_vec(&Value::Object(map)).expect("header serializes");
    out.push(b'\n');
    for event in &rec.events {
        let row = Value::Array(vec![
            Value::from(event.time),
            Value::from(event.tag.clone()),
            Value::from(event.payload.clone()),
        ]);
        out.extend_from_slice(&serde_json::to_vec(&row).expect("event serializes"));
        out.push(b'\n');
    }
    out
}

// ── Clip metadata sidecar ───────────────────────────────────────────

/// Geometry block of the metadata record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ClipSize {
    pub width: u32,
    pub height: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub original: Option<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scaled: Option<[u32; 2]>,
    #[serde(default)]
    pub padding: [u32; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct DataInfo {
    #[serde(default)]
    pub version: u32,
    #[serde(default)]
    pub size: ClipSize,
    #[serde(default)]
    pub env: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct SourceMetadata {
    #[serde(default)]
    pub id: String,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub author: String,
    #[serde(default)]
    pub created_at: String,
    #[serde(default)]
    pub urls: Vec<String>,
}

/// One sidecar record per clip: three caption tiers plus geometry,
/// derived statistics, and source provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipMetadata {
    pub caption: String,
    pub caption_detailed: String,
    pub caption_semantic: String,
    #[serde(default)]
    pub data_info: DataInfo,
    #[serde(default)]
    pub videogen_stats: BTreeMap<String, Value>,
    #[serde(default)]
    pub source_metadata: SourceMetadata,
}

/// Parse a clip metadata record. All three caption tiers are required;
/// everything else defaults (stats to an empty map).
pub fn parse_clip_metadata(bytes: &[u8]) -> Result<ClipMetadata, MetadataError> {
    let value: Value =
        serde_json::from_slice(bytes).map_err(|e| MetadataError::Malformed(e.to_string()))?;
    let Value::Object(ref map) = value else {
        return Err(MetadataError::Malformed("record is not an object".into()));
    };
    for tier in ["caption", "caption_detailed", "caption_semantic"] {
        match map.get(tier) {
            Some(Value::String(_)) => {}
            _ => return Err(MetadataError::MissingField(tier.to_string())),
        }
    }
    serde_json::from_value(value).map_err(|e| MetadataError::Malformed(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c1_bytes() -> Vec<u8> {
        // Header folded onto one line; payloads as in the published excerpt.
        let mut s = String::new();
        s.push_str("{\"version\": 2, \"width\": 80, \"height\": 24, \"timestamp\": 1747177906, \"env\": {\"SHELL\": \"/bin/bash\", \"TERM\": \"xterm-256color\"}}\n");
        s.push_str("[0.082492, \"o\", \"\\u001b[H\\u001b[2J\\u001b[3J\"]\n");
        s.push_str("[0.950038, \"o\", \"\\u001b[38;2;16;131;236m\\u001b[39m\\r\\n...\"]\n");
        s.push_str("[0.950733, \"o\", \"\\u001b[38;2;6;156;220m ... \\u001b[38;2;1;195;187m\\u2588\"]\n");
        s.into_bytes()
    }

    #[test]
    fn parses_the_appendix_excerpt() {
        let rec = parse_cast(&c1_bytes()).unwrap();
        assert_eq!(rec.header.version, 2);
        assert_eq!(rec.header.width, 80);
        assert_eq!(rec.header.height, 24);
        assert_eq!(rec.header.timestamp, Some(1747177906));
        assert_eq!(
            rec.header.env.as_ref().unwrap().get("SHELL").unwrap(),
            "/bin/bash"
        );
        assert_eq!(rec.events.len(), 3);
        assert!(rec.events.iter().all(|e| e.kind == EventKind::Output));
        let times: Vec<f64> = rec.events.iter().map(|e| e.time).collect();
        assert_eq!(times, vec![0.082492, 0.950038, 0.950733]);
        assert_eq!(rec.events[0].payload, "\u{1b}[H\u{1b}[2J\u{1b}[3J");
    }

    #[test]
    fn header_only_yields_empty_events() {
        let rec = parse_cast(b"{\"version\": 2, \"width\": 4, \"height\": 2}\n").unwrap();
        assert!(rec.events.is_empty());
    }

    #[test]
    fn arity_two_is_malformed() {
        let mut bytes = b"{\"version\": 2, \"width\": 4, \"height\": 2}\n".to_vec();
        bytes.extend_from_slice(b"[1.0, \"o\"]\n");
        match parse_cast(&bytes) {
            Err(CastError::MalformedEvent { line: 2, .. }) => {}
            other => panic!("expected MalformedEvent at line 2, got {other:?}"),
        }
    }

    #[test]
    fn version_one_is_rejected() {
        let err = parse_cast(b"{\"version\": 1, \"width\": 4, \"height\": 2}\n").unwrap_err();
        assert!(matches!(err, CastError::MalformedHeader(_)));
    }

    #[test]
    fn time_decrease_names_the_first_offending_line() {
        let mut bytes = b"{\"version\": 2, \"width\": 4, \"height\": 2}\n".to_vec();
        bytes.extend_from_slice(b"[1.0, \"o\", \"a\"]\n");
        bytes.extend_from_slice(b"[2.0, \"o\", \"b\"]\n");
        bytes.extend_from_slice(b"[1.5, \"o\", \"c\"]\n");
        assert_eq!(
            parse_cast(&bytes).unwrap_err(),
            CastError::NonMonotonicTime { line: 4 }
        );
    }

    #[test]
    fn non_output_kinds_are_retained() {
        let mut bytes = b"{\"version\": 2, \"width\": 4, \"height\": 2}\n".to_vec();
        bytes.extend_from_slice(b"[0.5, \"i\", \"ls\"]\n");
        bytes.extend_from_slice(b"[0.6, \"r\", \"80x24\"]\n");
        let rec = parse_cast(&bytes).unwrap();
        assert_eq!(rec.events[0].kind, EventKind::Input);
        assert_eq!(rec.events[1].kind, EventKind::Other);
        assert_eq!(rec.events[1].tag, "r");
    }

    #[test]
    fn round_trip_is_structural_identity() {
        let rec = parse_cast(&c1_bytes()).unwrap();
        let reparsed = parse_cast(&serialize_cast(&rec)).unwrap();
        assert_eq!(rec, reparsed);
    }

    #[test]
    fn round_trip_preserves_unknown_header_fields() {
        let bytes =
            b"{\"version\": 2, \"width\": 4, \"height\": 2, \"idle_time_limit\": 2.5, \"title\": \"demo\"}\n";
        let rec = parse_cast(bytes).unwrap();
        assert_eq!(rec.header.extras.len(), 2);
        let reparsed = parse_cast(&serialize_cast(&rec)).unwrap();
        assert_eq!(rec, reparsed);
    }

    #[test]
    fn empty_env_map_round_trips() {
        let rec = CastRecording {
            header: CastHeader {
                version: 2,
                width: 3,
                height: 3,
                timestamp: None,
                env: Some(BTreeMap::new()),
                extras: serde_json::Map::new(),
            },
            events: vec![],
        };
        assert_eq!(parse_cast(&serialize_cast(&rec)).unwrap(), rec);
    }

    #[test]
    fn event_times_round_trip_bit_exactly() {
        for &t in &[0.082492, 0.950038, 0.950733, 1.0 / 3.0, 123456.654321] {
            let rec = CastRecording {
                header: CastHeader {
                    version: 2,
                    width: 1,
                    height: 1,
                    timestamp: None,
                    env: None,
                    extras: serde_json::Map::new(),
                },
                events: vec![CastEvent::output(t, "x")],
            };
            let reparsed = parse_cast(&serialize_cast(&rec)).unwrap();
            assert_eq!(reparsed.events[0].time.to_bits(), t.to_bits());
        }
    }

    #[test]
    fn metadata_parses_table_fields() {
        let record = serde_json::json!({
            "caption": "a", "caption_detailed": "b", "caption_semantic": "c",
            "data_info": {
                "version": 2,
                "size": {"width": 80, "height": 24, "padding": [0, 0]},
                "env": {"SHELL": "/bin/bash", "TERM": "xterm-256color"}
            },
            "videogen_stats": {"screen_clears": 6, "event_rate": 7.8},
            "source_metadata": {"id": "7xxxx", "title": "demo", "author": "a",
                                 "created_at": "2025-05-13T23:37:53Z", "urls": []}
        });
        let meta = parse_clip_metadata(record.to_string().as_bytes()).unwrap();
        assert_eq!(meta.data_info.size.width, 80);
        assert_eq!(meta.data_info.size.height, 24);
        assert_eq!(meta.data_info.size.padding, [0, 0]);
        assert_eq!(meta.videogen_stats.len(), 2);
    }

    #[test]
    fn metadata_missing_tier_is_named() {
        let record = serde_json::json!({"caption": "a", "caption_semantic": "c"});
        assert_eq!(
            parse_clip_metadata(record.to_string().as_bytes()).unwrap_err(),
            MetadataError::MissingField("caption_detailed".to_string())
        );
    }

    #[test]
    fn metadata_empty_stats_default() {
        let record =
            serde_json::json!({"caption": "a", "caption_detailed": "b", "caption_semantic": "c"});
        let meta = parse_clip_metadata(record.to_string().as_bytes()).unwrap();
        assert!(meta.videogen_stats.is_empty());
    }
}
