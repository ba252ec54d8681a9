//! ANSI escape-sequence terminal emulator.
//!
//! Applies cast output payloads to a cell grid and samples grid states at
//! frame times. The supported control set (the decided minimum, listed here
//! for audit) is:
//!
//! - printable glyphs with deferred wrap at the right margin
//! - control chars: CR, LF (scrolls at the last row), BS, TAB (8-col stops)
//! - CSI cursor motion: `H`/`f` absolute, `A`/`B`/`C`/`D` relative
//! - erase: `J` with 0/2/3, `K` with 0/1/2 (cells reset to the default
//!   blank cell; no background-color-erase)
//! - SGR: 0, 1, 4, 7, 22, 24, 27, 30-37/40-47, 90-97/100-107, 38;5;n,
//!   48;5;n, 38;2;r;g;b, 48;2;r;g;b, 39, 49 (`39` appears in real casts)
//! - private modes: ?25h/l cursor visibility, ?1049h/l alternate screen
//!   (treated as save+clear / restore)
//!
//! Everything else — OSC title strings, charset selection, unknown CSI —
//! is consumed and ignored. Malformed sequences are skipped to the next
//! final byte; the emulator is total on arbitrary input. Escape sequences
//! split across payload boundaries resume on the next `apply_output`.

use crate::cast_io::{CastRecording, EventKind};
use crate::textnorm;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum TermError {
    #[error("grid dimensions must be >= 1")]
    ZeroDimension,
}

/// Terminal color: default theme color, 256-palette index, or truecolor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Color {
    #[default]
    Default,
    Indexed(u8),
    Rgb(u8, u8, u8),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct CellAttrs {
    pub bold: bool,
    pub underline: bool,
    pub inverse: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cell {
    pub glyph: char,
    pub fg: Color,
    pub bg: Color,
    pub attrs: CellAttrs,
}

impl Default for Cell {
    fn default() -> Self {
        Cell {
            glyph: ' ',
            fg: Color::Default,
            bg: Color::Default,
            attrs: CellAttrs::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cursor {
    pub row: usize,
    pub col: usize,
    pub visible: bool,
}

/// Current pen for new writes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
struct Pen {
    fg: Color,
    bg: Color,
    attrs: CellAttrs,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
enum ParseState {
    #[default]
    Ground,
    Escape,
    /// Consume exactly one byte after ESC ( / ESC ).
    Charset,
    Csi {
        params: String,
        private: bool,
    },
    Osc {
        esc_pending: bool,
    },
}

#[derive(Debug, Clone, PartialEq)]
struct SavedScreen {
    cells: Vec<Cell>,
    cursor: Cursor,
}

/// The emulator's screen state. A value type: `apply_output` returns a new
/// grid, so replays of distinct recordings parallelize freely.
#[derive(Debug, Clone, PartialEq)]
pub struct TerminalGrid {
    pub width: usize,
    pub height: usize,
    cells: Vec<Cell>,
    pub cursor: Cursor,
    pen: Pen,
    wrap_pending: bool,
    state: ParseState,
    saved: Option<Box<SavedScreen>>,
}

/// Fresh blank grid: all cells default, cursor at (0,0) and visible.
pub fn new_grid(width: usize, height: usize) -> Result<TerminalGrid, TermError> {
    if width == 0 || height == 0 {
        return Err(TermError::ZeroDimension);
    }
    Ok(TerminalGrid {
        width,
        height,
        cells: vec![Cell::default(); width * height],
        cursor: Cursor {
            row: 0,
            col: 0,
            visible: true,
        },
        pen: Pen::default(),
        wrap_pending: false,
        state: ParseState::Ground,
        saved: None,
    })
}

/// Apply one output payload, returning the advanced grid. Total: malformed
/// escape input never errors.
pub fn apply_output(grid: &TerminalGrid, payload: &str) -> TerminalGrid {
    let mut next = grid.clone();
    next.feed(payload);
    next
}

impl TerminalGrid {
    pub fn cell(&self, row: usize, col: usize) -> &Cell {
        &self.cells[row * self.width + col]
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// True when every cell equals the default blank cell.
    pub fn is_blank(&self) -> bool {
        self.cells.iter().all(|c| *c == Cell::default())
    }

    /// Visual equality: cells and cursor, ignoring pen and parser state.
    pub fn same_visual(&self, other: &TerminalGrid) -> bool {
        self.width == other.width
            && self.height == other.height
            && self.cells == other.cells
            && self.cursor == other.cursor
    }

    /// Raw glyphs of one row, unnormalized.
    pub fn row_text(&self, row: usize) -> String {
        self.cells[row * self.width..(row + 1) * self.width]
            .iter()
            .map(|c| c.glyph)
            .collect()
    }

    pub fn feed(&mut self, payload: &str) {
        for ch in payload.chars() {
            self.feed_char(ch);
        }
    }

    fn feed_char(&mut self, ch: char) {
        match std::mem::take(&mut self.state) {
            ParseState::Ground => match ch {
                '\u{1b}' => self.state = ParseState::Escape,
                '\r' => {
                    self.cursor.col = 0;
                    self.wrap_pending = false;
                }
                '\n' => self.line_feed(),
                '\u{08}' => {
                    self.cursor.col = self.cursor.col.saturating_sub(1);
                    self.wrap_pending = false;
                }
                '\t' => {
                    self.cursor.col = (((self.cursor.col / 8) + 1) * 8).min(self.width - 1);
                    self.wrap_pending = false;
                }
                c if (c as u32) < 0x20 || c == '\u{7f}' => {}
                c => self.put_char(c),
            },
            ParseState::Escape => match ch {
                '[' => {
                    self.state = ParseState::Csi {
                        params: String::new(),
                        private: false,
                    }
                }
                ']' => self.state = ParseState::Osc { esc_pending: false },
                '(' | ')' => self.state = ParseState::Charset,
                '\u{1b}' => self.state = ParseState::Escape,
                _ => {} // lone ESC sequence we don't model; consumed
            },
            ParseState::Charset => {}
            ParseState::Csi {
                mut params,
                mut private,
            } => match ch {
                '0'..='9' | ';' | ':' => {
                    // Bounded so fuzzed input can't grow parser state without limit.
                    if params.len() < 64 {
                        params.push(if ch == ':' { ';' } else { ch });
                    }
                    self.state = ParseState::Csi { params, private };
                }
                '?' | '<' | '=' | '>' => {
                    private = true;
                    self.state = ParseState::Csi { params, private };
                }
                ' '..='/' => {
                    // Intermediate bytes: keep consuming to the final byte.
                    self.state = ParseState::Csi { params, private };
                }
                '@'..='~' => self.dispatch_csi(&params, private, ch),
                '\u{1b}' => self.state = ParseState::Escape,
                _ => {} // malformed: abandon the sequence
            },
            ParseState::Osc { esc_pending } => match ch {
                '\u{07}' => {}
                '\u{1b}' => self.state = ParseState::Osc { esc_pending: true },
                '\\' if esc_pending => {}
                _ => self.state = ParseState::Osc { esc_pending: false },
            },
        }
    }

    fn put_char(&mut self, c: char) {
        if self.wrap_pending {
            self.wrap_pending = false;
            self.cursor.col = 0;
            self.line_feed();
        }
        let idx = self.cursor.row * self.width + self.cursor.col;
        self.cells[idx] = Cell {
            glyph: c,
            fg: self.pen.fg,
            bg: self.pen.bg,
            attrs: self.pen.attrs,
        };
        if self.cursor.col + 1 < self.width {
            self.cursor.col += 1;
        } else {
            self.wrap_pending = true;
        }
    }

    fn line_feed(&mut self) {
        if self.cursor.row + 1 < self.height {
            self.cursor.row += 1;
        } else {
            self.scroll_up();
        }
    }

    /// Scrolling discards the top row; no scroll-back is modeled.
    fn scroll_up(&mut self) {
        self.cells.drain(0..self.width);
        self.cells
            .extend(std::iter::repeat(Cell::default()).take(self.width));
    }

    fn dispatch_csi(&mut self, params: &str, private: bool, final_byte: char) {
        let values: Vec<Option<u32>> = params
            .split(';')
            .map(|p| if p.is_empty() { None } else { p.parse().ok() })
            .collect();
        let arg = |i: usize, default: u32| values.get(i).copied().flatten().unwrap_or(default);

        if private {
            let mode = arg(0, 0);
            match (mode, final_byte) {
                (25, 'h') => self.cursor.visible = true,
                (25, 'l') => self.cursor.visible = false,
                (1049, 'h') => {
                    self.saved = Some(Box::new(SavedScreen {
                        cells: self.cells.clone(),
                        cursor: self.cursor,
                    }));
                    self.cells.fill(Cell::default());
                    self.cursor.row = 0;
                    self.cursor.col = 0;
                    self.wrap_pending = false;
                }
                (1049, 'l') => {
                    if let Some(saved) = self.saved.take() {
                        self.cells = saved.cells;
                        self.cursor = saved.cursor;
                    }
                    self.wrap_pending = false;
                }
                _ => {}
            }
            return;
        }

        match final_byte {
            'H' | 'f' => {
                let row = arg(0, 1).max(1) as usize - 1;
                let col = arg(1, 1).max(1) as usize - 1;
                self.cursor.row = row.min(self.height - 1);
                self.cursor.col = col.min(self.width - 1);
                self.wrap_pending = false;
            }
            'A' => {
                let n = arg(0, 1).max(1) as usize;
                self.cursor.row = self.cursor.row.saturating_sub(n);
                self.wrap_pending = false;
            }
            'B' => {
                let n = arg(0, 1).max(1) as usize;
                self.cursor.row = (self.cursor.row + n).min(self.height - 1);
                self.wrap_pending = false;
            }
            'C' => {
                let n = arg(0, 1).max(1) as usize;
                self.cursor.col = (self.cursor.col + n).min(self.width - 1);
                self.wrap_pending = false;
            }
            'D' => {
                let n = arg(0, 1).max(1) as usize;
                self.cursor.col = self.cursor.col.saturating_sub(n);
                self.wrap_pending = false;
            }
            'J' => match arg(0, 0) {
                0 => {
                    let from = self.cursor.row * self.width + self.cursor.col;
                    self.cells[from..].fill(Cell::default());
                }
                2 | 3 => self.cells.fill(Cell::default()),
                _ => {}
            },
            'K' => {
                let row_start = self.cursor.row * self.width;
                let cur = row_start + self.cursor.col;
                match arg(0, 0) {
                    0 => self.cells[cur..row_start + self.width].fill(Cell::default()),
                    1 => self.cells[row_start..=cur].fill(Cell::default()),
                    2 => self.cells[row_start..row_start + self.width].fill(Cell::default()),
                    _ => {}
                }
            }
            'm' => self.apply_sgr(&values),
            _ => {}
        }
    }

    fn apply_sgr(&mut self, values: &[Option<u32>]) {
        // Empty parameter list means reset.
        let values: Vec<u32> = if values.is_empty() {
            vec![0]
        } else {
            values.iter().map(|v| v.unwrap_or(0)).collect()
        };
        let mut i = 0;
        while i < values.len() {
            match values[i] {
                0 => self.pen = Pen::default(),
                1 => self.pen.attrs.bold = true,
                4 => self.pen.attrs.underline = true,
                7 => self.pen.attrs.inverse = true,
                22 => self.pen.attrs.bold = false,
                24 => self.pen.attrs.underline = false,
                27 => self.pen.attrs.inverse = false,
                30..=37 => self.pen.fg = Color::Indexed((values[i] - 30) as u8),
                40..=47 => self.pen.bg = Color::Indexed((values[i] - 40) as u8),
                90..=97 => self.pen.fg = Color::Indexed((values[i] - 90 + 8) as u8),
                100..=107 => self.pen.bg = Color::Indexed((values[i] - 100 + 8) as u8),
                39 => self.pen.fg = Color::Default,
                49 => self.pen.bg = Color::Default,
                38 | 48 => {
                    let is_fg = values[i] == 38;
                    let color = match values.get(i + 1) {
                        Some(5) => {
                            let n = values.get(i + 2).copied().unwrap_or(0).min(255) as u8;
                            i += 2;
                            Some(Color::Indexed(n))
                        }
                        Some(2) => {
                            let r = values.get(i + 2).copied().unwrap_or(0).min(255) as u8;
                            let g = values.get(i + 3).copied().unwrap_or(0).min(255) as u8;
                            let b = values.get(i + 4).copied().unwrap_or(0).min(255) as u8;
                            i += 4;
                            Some(Color::Rgb(r, g, b))
                        }
                        _ => None,
                    };
                    if let Some(c) = color {
                        if is_fg {
                            self.pen.fg = c;
                        } else {
                            self.pen.bg = c;
                        }
                    }
                }
                _ => {}
            }
            i += 1;
        }
    }
}

/// Screen text as an ordered list of normalized lines: per-row glyphs
/// joined, whitespace trimmed and collapsed, empty lines dropped.
pub fn grid_to_lines(grid: &TerminalGrid) -> Vec<String> {
    (0..grid.height)
        .filter_map(|row| textnorm::normalize_line(&grid.row_text(row)))
        .collect()
}

/// Replay a recording, sampling the grid at `t = 0, 1/fps, 2/fps, ...`.
/// Each sample reflects every output event with `time <= t`. Sampling runs
/// through `ceil(last_event_time * fps)` so the final event state is always
/// rendered; an empty recording yields a single blank frame at t = 0.
///
/// Non-output events are ignored except resize ("r") events, which
/// re-create the grid at the new geometry with contents cleared.
pub fn replay(rec: &CastRecording, fps: f64) -> Vec<(f64, TerminalGrid)> {
    assert!(fps > 0.0, "fps must be positive");
    let width = rec.header.width.max(1) as usize;
    let height = rec.header.height.max(1) as usize;
    let mut grid = new_grid(width, height).expect("header guarantees nonzero dims");

    let Some(last) = rec.last_event_time() else {
        return vec![(0.0, grid)];
    };

    let n = (last * fps).ceil() as usize;
    let mut frames = Vec::with_capacity(n + 1);
    let mut idx = 0;
    for i in 0..=n {
        let t = i as f64 / fps;
        while idx < rec.events.len() && rec.events[idx].time <= t {
            let ev = &rec.events[idx];
            match ev.kind {
                EventKind::Output => grid.feed(&ev.payload),
                EventKind::Other if ev.tag == "r" => {
                    if let Some((w, h)) = parse_resize(&ev.payload) {
                        grid = new_grid(w, h).expect("resize dims checked nonzero");
                    }
                }
                _ => {}
            }
            idx += 1;
        }
        frames.push((t, grid.clone()));
    }
    frames
}

fn parse_resize(payload: &str) -> Option<(usize, usize)> {
    let (w, h) = payload.trim().split_once('x')?;
    let w: usize = w.parse().ok()?;
    let h: usize = h.parse().ok()?;
    (w >= 1 && h >= 1).then_some((w, h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cast_io::{CastEvent, CastHeader, CastRecording};

    fn grid(w: usize, h: usize) -> TerminalGrid {
        new_grid(w, h).unwrap()
    }

    fn recording(width: u32, height: u32, events: Vec<CastEvent>) -> CastRecording {
        CastRecording {
            header: CastHeader {
                version: 2,
                width,
                height,
                timestamp: None,
                env: None,
                extras: serde_json::Map::new(),
            },
            events,
        }
    }

    #[test]
    fn new_grid_is_blank_with_home_cursor() {
        let g = grid(80, 24);
        assert_eq!(g.width, 80);
        assert_eq!(g.height, 24);
        assert!(g.is_blank());
        assert_eq!((g.cursor.row, g.cursor.col), (0, 0));
        assert!(g.cursor.visible);
    }

    #[test]
    fn single_cell_grid() {
        let g = grid(1, 1);
        assert_eq!(g.cells().len(), 1);
    }

    #[test]
    fn zero_dimension_is_rejected() {
        assert_eq!(new_grid(0, 24).unwrap_err(), TermError::ZeroDimension);
        assert_eq!(new_grid(80, 0).unwrap_err(), TermError::ZeroDimension);
    }

    #[test]
    fn plain_text_writes_and_advances() {
        let g = apply_output(&grid(80, 24), "ab");
        assert_eq!(g.cell(0, 0).glyph, 'a');
        assert_eq!(g.cell(0, 1).glyph, 'b');
        assert_eq!((g.cursor.row, g.cursor.col), (0, 2));
    }

    #[test]
    fn clear_sequence_homes_and_blanks() {
        let populated = apply_output(&grid(80, 24), "hello\r\nworld");
        assert!(!populated.is_blank());
        let cleared = apply_output(&populated, "\x1b[H\x1b[2J\x1b[3J");
        assert!(cleared.is_blank());
        assert_eq!((cleared.cursor.row, cleared.cursor.col), (0, 0));
    }

    #[test]
    fn truecolor_sgr_sets_cell_fg() {
        let g = apply_output(&grid(80, 24), "\x1b[38;2;16;131;236mX");
        let c = g.cell(0, 0);
        assert_eq!(c.glyph, 'X');
        assert_eq!(c.fg, Color::Rgb(16, 131, 236));
    }

    #[test]
    fn sgr_indexed_bright_and_reset() {
        let g = apply_output(&grid(10, 2), "\x1b[31;1;4;7ma\x1b[0mb\x1b[92mc\x1b[39md");
        let a = g.cell(0, 0);
        assert_eq!(a.fg, Color::Indexed(1));
        assert!(a.attrs.bold && a.attrs.underline && a.attrs.inverse);
        let b = g.cell(0, 1);
        assert_eq!(b.fg, Color::Default);
        assert!(!b.attrs.bold);
        assert_eq!(g.cell(0, 2).fg, Color::Indexed(10));
        assert_eq!(g.cell(0, 3).fg, Color::Default);
    }

    #[test]
    fn sgr_256_palette() {
        let g = apply_output(&grid(4, 1), "\x1b[38;5;208mx\x1b[48;5;17my");
        assert_eq!(g.cell(0, 0).fg, Color::Indexed(208));
        assert_eq!(g.cell(0, 1).bg, Color::Indexed(17));
    }

    #[test]
    fn cursor_motion_clamps_inside_grid() {
        let g = apply_output(&grid(10, 4), "\x1b[99;99H");
        assert_eq!((g.cursor.row, g.cursor.col), (3, 9));
        let g = apply_output(&g, "\x1b[99A\x1b[99D");
        assert_eq!((g.cursor.row, g.cursor.col), (0, 0));
        let g = apply_output(&g, "\x1b[2B\x1b[3C");
        assert_eq!((g.cursor.row, g.cursor.col), (2, 3));
    }

    #[test]
    fn erase_line_variants() {
        let g = apply_output(&grid(5, 1), "abcde\r\x1b[2C");
        let k0 = apply_output(&g, "\x1b[K");
        assert_eq!(k0.row_text(0), "ab   ");
        let k1 = apply_output(&g, "\x1b[1K");
        assert_eq!(k1.row_text(0), "   de");
        let k2 = apply_output(&g, "\x1b[2K");
        assert_eq!(k2.row_text(0), "     ");
    }

    #[test]
    fn erase_below_from_cursor() {
        let g = apply_output(&grid(3, 3), "abc\r\ndef\r\nghi\x1b[2;2H\x1b[0J");
        assert_eq!(g.row_text(0), "abc");
        assert_eq!(g.row_text(1), "d  ");
        assert_eq!(g.row_text(2), "   ");
    }

    #[test]
    fn wrap_is_deferred_at_right_margin() {
        let g = apply_output(&grid(3, 2), "abc");
        assert_eq!((g.cursor.row, g.cursor.col), (0, 2));
        let g = apply_output(&g, "d");
        assert_eq!(g.cell(1, 0).glyph, 'd');
        assert_eq!((g.cursor.row, g.cursor.col), (1, 1));
    }

    #[test]
    fn writing_past_last_row_scrolls() {
        let g = apply_output(&grid(2, 2), "ab");
        let g = apply_output(&g, "cd"); // fills row 1, wrap pending
        let g = apply_output(&g, "e"); // scrolls
        assert_eq!(g.row_text(0), "cd");
        assert_eq!(g.row_text(1), "e ");
    }

    #[test]
    fn linefeed_on_last_row_scrolls() {
        let g = apply_output(&grid(3, 2), "ab\r\ncd\r\nef");
        assert_eq!(g.row_text(0), "cd ");
        assert_eq!(g.row_text(1), "ef ");
    }

    #[test]
    fn backspace_and_tab() {
        let g = apply_output(&grid(20, 1), "ab\x08x");
        assert_eq!(g.row_text(0).trim_end(), "ax");
        let g = apply_output(&grid(20, 1), "a\tb");
        assert_eq!(g.cell(0, 8).glyph, 'b');
    }

    #[test]
    fn cursor_visibility_toggles() {
        let g = apply_output(&grid(4, 2), "\x1b[?25l");
        assert!(!g.cursor.visible);
        let g = apply_output(&g, "\x1b[?25h");
        assert!(g.cursor.visible);
    }

    #[test]
    fn alternate_screen_restores_on_exit() {
        let main = apply_output(&grid(4, 2), "main");
        let alt = apply_output(&main, "\x1b[?1049halt!");
        assert_eq!(alt.row_text(0), "alt!");
        let back = apply_output(&alt, "\x1b[?1049l");
        assert!(back.same_visual(&main));
    }

    #[test]
    fn osc_sequences_are_swallowed() {
        let g = apply_output(&grid(10, 1), "\x1b]0;title\x07ok");
        assert_eq!(g.row_text(0).trim_end(), "ok");
        let g = apply_output(&grid(10, 1), "\x1b]2;title\x1b\\ok");
        assert_eq!(g.row_text(0).trim_end(), "ok");
    }

    #[test]
    fn split_escape_sequences_resume_across_payloads() {
        let g = apply_output(&grid(4, 1), "\x1b[38;2;1;");
        let g = apply_output(&g, "2;3mZ");
        assert_eq!(g.cell(0, 0).fg, Color::Rgb(1, 2, 3));
    }

    #[test]
    fn grid_lines_normalize_and_drop_empties() {
        let g = apply_output(&grid(12, 3), "  ls   -l");
        assert_eq!(grid_to_lines(&g), vec!["ls -l"]);
        assert!(grid_to_lines(&grid(4, 4)).is_empty());
        let g = apply_output(&grid(4, 3), "a\r\n\r\nb");
        assert_eq!(grid_to_lines(&g), vec!["a", "b"]);
    }

    #[test]
    fn replay_event_at_half_second() {
        let rec = recording(4, 2, vec![CastEvent::output(0.5, "x")]);
        let frames = replay(&rec, 15.0);
        // Brute-force timeline: frames 0..=7 precede the event, frame 8
        // (t = 0.5333) is the first to contain it.
        assert_eq!(frames.len(), 9);
        for (i, (t, g)) in frames.iter().enumerate() {
            assert!((t - i as f64 / 15.0).abs() < 1e-12);
            if i < 8 {
                assert!(g.is_blank(), "frame {i} should be blank");
            } else {
                assert_eq!(g.cell(0, 0).glyph, 'x');
            }
        }
    }

    #[test]
    fn replay_empty_recording_is_one_blank_frame() {
        let rec = recording(4, 2, vec![]);
        let frames = replay(&rec, 15.0);
        assert_eq!(frames.len(), 1);
        assert_eq!(frames[0].0, 0.0);
        assert!(frames[0].1.is_blank());
    }

    #[test]
    fn replay_appendix_excerpt_clears_by_frame_two() {
        let rec = recording(
            80,
            24,
            vec![
                CastEvent::output(0.082492, "\x1b[H\x1b[2J\x1b[3J"),
                CastEvent::output(0.950038, "\x1b[38;2;16;131;236m\x1b[39m\r\n..."),
                CastEvent::output(
                    0.950733,
                    "\x1b[38;2;6;156;220m ... \x1b[38;2;1;195;187m\u{2588}",
                ),
            ],
        );
        let frames = replay(&rec, 15.0);
        let (t2, g2) = &frames[2];
        assert!((t2 - 0.13333333333333333).abs() < 1e-12);
        assert!(g2.is_blank());
        // The closing frame reflects every event.
        assert!(!frames.last().unwrap().1.is_blank());
    }

    #[test]
    fn replay_resize_recreates_cleared_grid() {
        let rec = recording(
            4,
            2,
            vec![
                CastEvent::output(0.0, "hi"),
                CastEvent {
                    time: 0.2,
                    kind: EventKind::Other,
                    tag: "r".into(),
                    payload: "6x3".into(),
                },
            ],
        );
        let frames = replay(&rec, 15.0);
        let last = &frames.last().unwrap().1;
        assert_eq!((last.width, last.height), (6, 3));
        assert!(last.is_blank());
    }

    #[test]
    fn replay_is_deterministic() {
        let rec = recording(
            10,
            4,
            vec![
                CastEvent::output(0.1, "a\x1b[31mb"),
                CastEvent::output(0.3, "\x1b[Hc"),
            ],
        );
        assert_eq!(replay(&rec, 15.0), replay(&rec, 15.0));
    }
}
