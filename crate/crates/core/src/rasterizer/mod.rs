//! Deterministic software rasterization: terminal grids to RGB frames,
//! cursor foreground/mask layers for GUI supervision, and the letterbox
//! mapping from screen pixels to normalized trajectory coordinates.
//!
//! Grid rendering composites entirely in `u8` and converts to `f32` once at
//! the end, so output is bit-identical across runs and platforms. Hotspot
//! placement rounds half away from zero (see [`crate::round_half_away`]).

pub mod font;

use crate::round_half_away;
use crate::term_emu::{Color, TerminalGrid};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum RasterError {
    #[error("screen coordinate outside the source bounds")]
    OutOfSourceBounds,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
}

/// H x W x 3 row-major frame, values in [0,1] for rendered frames.
/// Cursor foregrounds reuse the layout with values in [-1,1].
#[derive(Debug, Clone, PartialEq)]
pub struct FrameTensor {
    pub height: usize,
    pub width: usize,
    pub data: Vec<f32>,
}

impl FrameTensor {
    pub fn new(height: usize, width: usize) -> Self {
        FrameTensor {
            height,
            width,
            data: vec![0.0; height * width * 3],
        }
    }

    pub fn filled(height: usize, width: usize, value: f32) -> Self {
        FrameTensor {
            height,
            width,
            data: vec![value; height * width * 3],
        }
    }

    #[inline]
    pub fn pixel(&self, row: usize, col: usize) -> [f32; 3] {
        let i = (row * self.width + col) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    #[inline]
    pub fn set_pixel(&mut self, row: usize, col: usize, rgb: [f32; 3]) {
        let i = (row * self.width + col) * 3;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    pub fn same_dims(&self, other: &FrameTensor) -> bool {
        self.height == other.height && self.width == other.width
    }
}

/// Single-channel H x W plane in [0,1]; used for cursor and reference masks.
#[derive(Debug, Clone, PartialEq)]
pub struct MaskPlane {
    pub height: usize,
    pub width: usize,
    pub data: Vec<f32>,
}

impl MaskPlane {
    pub fn zeros(height: usize, width: usize) -> Self {
        MaskPlane {
            height,
            width,
            data: vec![0.0; height * width],
        }
    }

    pub fn ones(height: usize, width: usize) -> Self {
        MaskPlane {
            height,
            width,
            data: vec![1.0; height * width],
        }
    }

    pub fn is_all_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0.0)
    }

    pub fn sum(&self) -> f64 {
        self.data.iter().map(|&v| v as f64).sum()
    }
}

// ── Themes and the 256-color palette ────────────────────────────────

/// Render-time color configuration. The 16 base palette entries follow the
/// standard xterm table unless overridden; indices 16..=255 always use the
/// xterm 6x6x6 cube and grayscale ramp.
#[derive(Debug, Clone, PartialEq)]
pub struct RenderTheme {
    pub fg: [u8; 3],
    pub bg: [u8; 3],
    pub cursor: [u8; 3],
    pub palette: [[u8; 3]; 16],
}

impl Default for RenderTheme {
    fn default() -> Self {
        RenderTheme {
            fg: [229, 229, 229],
            bg: [0, 0, 0],
            cursor: [160, 160, 160],
            palette: XTERM_BASE,
        }
    }
}

const XTERM_BASE: [[u8; 3]; 16] = [
    [0, 0, 0],
    [205, 0, 0],
    [0, 205, 0],
    [205, 205, 0],
    [0, 0, 238],
    [205, 0, 205],
    [0, 205, 205],
    [229, 229, 229],
    [127, 127, 127],
    [255, 0, 0],
    [0, 255, 0],
    [255, 255, 0],
    [92, 92, 255],
    [255, 0, 255],
    [0, 255, 255],
    [255, 255, 255],
];

/// Resolve a 256-palette index to RGB under a theme.
pub fn palette_color(index: u8, theme: &RenderTheme) -> [u8; 3] {
    match index {
        0..=15 => theme.palette[index as usize],
        16..=231 => {
            let i = index as usize - 16;
            let steps = [0u8, 95, 135, 175, 215, 255];
            [steps[i / 36], steps[(i / 6) % 6], steps[i % 6]]
        }
        232..=255 => {
            let v = 8 + 10 * (index as usize - 232) as u8;
            [v, v, v]
        }
    }
}

fn resolve(color: Color, is_fg: bool, bold: bool, theme: &RenderTheme) -> [u8; 3] {
    match color {
        Color::Default => {
            if is_fg {
                theme.fg
            } else {
                theme.bg
            }
        }
        Color::Indexed(i) => {
            // Bold brightens the 8 base foreground colors, xterm-style.
            let i = if bold && is_fg && i < 8 { i + 8 } else { i };
            palette_color(i, theme)
        }
        Color::Rgb(r, g, b) => [r, g, b],
    }
}

/// Parse `#rrggbb` hex colors (as used by script themes).
pub fn parse_hex_color(s: &str) -> Option<[u8; 3]> {
    let s = s.strip_prefix('#')?;
    if s.len() != 6 {
        return None;
    }
    let r = u8::from_str_radix(&s[0..2], 16).ok()?;
    let g = u8::from_str_radix(&s[2..4], 16).ok()?;
    let b = u8::from_str_radix(&s[4..6], 16).ok()?;
    Some([r, g, b])
}

// ── Grid rendering ──────────────────────────────────────────────────

/// Render a grid to an RGB frame at `cell_w x cell_h` pixels per cell.
/// Each cell paints its background then the glyph in the foreground color;
/// the inverse attribute swaps the two, underline fills the cell's bottom
/// pixel row, and a visible cursor paints its whole cell in the theme's
/// cursor color. Glyphs without a bitmap fall back to a replacement box.
pub fn render_grid(
    grid: &TerminalGrid,
    theme: &RenderTheme,
    cell_w: usize,
    cell_h: usize,
) -> FrameTensor {
    assert!(
        cell_w >= font::GLYPH_W && cell_h >= font::GLYPH_H,
        "cell must fit the glyph bitmap"
    );
    let width_px = grid.width * cell_w;
    let height_px = grid.height * cell_h;
    let mut rgb = vec![0u8; width_px * height_px * 3];

    let mut put = |y: usize, x: usize, c: [u8; 3]| {
        let i = (y * width_px + x) * 3;
        rgb[i] = c[0];
        rgb[i + 1] = c[1];
        rgb[i + 2] = c[2];
    };

    for row in 0..grid.height {
        for col in 0..grid.width {
            let cell = grid.cell(row, col);
            let mut fg = resolve(cell.fg, true, cell.attrs.bold, theme);
            let mut bg = resolve(cell.bg, false, false, theme);
            if cell.attrs.inverse {
                std::mem::swap(&mut fg, &mut bg);
            }
            let is_cursor =
                grid.cursor.visible && grid.cursor.row == row && grid.cursor.col == col;
            let bitmap = font::glyph_bitmap(cell.glyph).unwrap_or(font::REPLACEMENT);

            let y0 = row * cell_h;
            let x0 = col * cell_w;
            for dy in 0..cell_h {
                for dx in 0..cell_w {
                    let color = if is_cursor {
                        theme.cursor
                    } else if cell.attrs.underline && dy == cell_h - 1 {
                        fg
                    } else if dy < font::GLYPH_H
                        && dx < font::GLYPH_W
                        && bitmap[dy] & (0x80 >> dx) != 0
                    {
                        fg
                    } else {
                        bg
                    };
                    put(y0 + dy, x0 + dx, color);
                }
            }
        }
    }

    FrameTensor {
        height: height_px,
        width: width_px,
        data: rgb.into_iter().map(|v| v as f32 / 255.0).collect(),
    }
}

// ── Letterbox coordinate mapping ────────────────────────────────────

/// Uniform scale plus centered padding from a source resolution into a
/// destination resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LetterboxParams {
    pub scale: f64,
    pub pad_x: f64,
    pub pad_y: f64,
    pub src: (u32, u32),
    pub dst: (u32, u32),
}

impl LetterboxParams {
    /// scale = min(w_dst/w_src, h_dst/h_src); pads center the scaled content.
    pub fn fit(src: (u32, u32), dst: (u32, u32)) -> Self {
        let (w_src, h_src) = (src.0 as f64, src.1 as f64);
        let (w_dst, h_dst) = (dst.0 as f64, dst.1 as f64);
        let scale = (w_dst / w_src).min(h_dst / h_src);
        LetterboxParams {
            scale,
            pad_x: (w_dst - scale * w_src) / 2.0,
            pad_y: (h_dst - scale * h_src) / 2.0,
            src,
            dst,
        }
    }
}

/// The raw mapping: x_t = (s*x + p_x)/(w_dst - 1), y_t = (s*y + p_y)/(h_dst - 1).
/// At the extreme source pixel the value can exceed 1 under the (dst-1)
/// denominator; [`letterbox_map`] clamps, this variant does not.
pub fn letterbox_map_raw(
    x_screen: f64,
    y_screen: f64,
    params: &LetterboxParams,
) -> Result<(f64, f64), RasterError> {
    let (w_src, h_src) = (params.src.0 as f64, params.src.1 as f64);
    if !(0.0..w_src).contains(&x_screen) || !(0.0..h_src).contains(&y_screen) {
        return Err(RasterError::OutOfSourceBounds);
    }
    let x_t = (params.scale * x_screen + params.pad_x) / (params.dst.0 as f64 - 1.0);
    let y_t = (params.scale * y_screen + params.pad_y) / (params.dst.1 as f64 - 1.0);
    Ok((x_t, y_t))
}

/// Normalized trajectory coordinates in [0,1]^2 (clamped after the raw map,
/// since downstream contracts require the unit square).
pub fn letterbox_map(
    x_screen: f64,
    y_screen: f64,
    params: &LetterboxParams,
) -> Result<(f64, f64), RasterError> {
    let (x, y) = letterbox_map_raw(x_screen, y_screen, params)?;
    Ok((x.clamp(0.0, 1.0), y.clamp(0.0, 1.0)))
}

/// Inverse of the raw map back to screen coordinates.
pub fn letterbox_unmap(x_t: f64, y_t: f64, params: &LetterboxParams) -> (f64, f64) {
    let x = (x_t * (params.dst.0 as f64 - 1.0) - params.pad_x) / params.scale;
    let y = (y_t * (params.dst.1 as f64 - 1.0) - params.pad_y) / params.scale;
    (x, y)
}

// ── Cursor layers and reference streams ─────────────────────────────

/// Arrow bitmap with per-pixel color and alpha; the hotspot is the pixel
/// that lands on the trajectory coordinate.
#[derive(Debug, Clone, PartialEq)]
pub struct CursorTemplate {
    pub width: usize,
    pub height: usize,
    pub rgb: Vec<[u8; 3]>,
    pub alpha: Vec<u8>,
    pub hotspot: (usize, usize),
}

impl CursorTemplate {
    /// Default pointer: a 8x12 left-edge triangle, white fill with a black
    /// outline, hotspot at the tip (0,0). Stands in for the unpublished
    /// production arrow asset; swap via config where exactness matters.
    pub fn default_arrow() -> Self {
        let width = 8;
        let height = 12;
        let mut rgb = vec![[0u8; 3]; width * height];
        let mut alpha = vec![0u8; width * height];
        for y in 0..height {
            // Widening span down to row 7, then a narrow tail.
            let span = if y < 8 { y + 1 } else { 11 - y };
            for x in 0..span.min(width) {
                let i = y * width + x;
                alpha[i] = 255;
                let edge = x == 0 || x + 1 == span.min(width) || y == 0 || y == height - 1;
                rgb[i] = if edge { [0, 0, 0] } else { [255, 255, 255] };
            }
        }
        CursorTemplate {
            width,
            height,
            rgb,
            alpha,
            hotspot: (0, 0),
        }
    }

    pub fn alpha_sum(&self) -> f64 {
        self.alpha.iter().map(|&a| a as f64 / 255.0).sum()
    }
}

/// Per-frame cursor supervision pair: foreground image in [-1,1] over a
/// neutral (zero) background, and the arrow-alpha mask in [0,1].
#[derive(Debug, Clone, PartialEq)]
pub struct CursorLayer {
    pub foreground: FrameTensor,
    pub mask: MaskPlane,
    /// The normalized coordinate this layer was rendered at, if any.
    pub point: Option<(f64, f64)>,
}

/// Render the cursor layer for one frame. The template hotspot lands at
/// `(round(x_t*(W-1)), round(y_t*(H-1)))`, clipped at canvas bounds. An
/// invalid (absent) point yields an all-zero mask and a neutral foreground.
pub fn render_cursor_layer(
    point: Option<(f64, f64)>,
    canvas_h: usize,
    canvas_w: usize,
    template: &CursorTemplate,
) -> CursorLayer {
    let mut foreground = FrameTensor::filled(canvas_h, canvas_w, 0.0);
    let mut mask = MaskPlane::zeros(canvas_h, canvas_w);

    let Some((x_t, y_t)) = point else {
        return CursorLayer {
            foreground,
            mask,
            point: None,
        };
    };

    let hx = round_half_away(x_t * (canvas_w as f64 - 1.0));
    let hy = round_half_away(y_t * (canvas_h as f64 - 1.0));
    let origin_x = hx - template.hotspot.0 as i64;
    let origin_y = hy - template.hotspot.1 as i64;

    for ty in 0..template.height {
        for tx in 0..template.width {
            let cy = origin_y + ty as i64;
            let cx = origin_x + tx as i64;
            if cy < 0 || cx < 0 || cy >= canvas_h as i64 || cx >= canvas_w as i64 {
                continue;
            }
            let a = template.alpha[ty * template.width + tx] as f32 / 255.0;
            if a == 0.0 {
                continue;
            }
            let rgb = template.rgb[ty * template.width + tx];
            let signed = [
                rgb[0] as f32 / 255.0 * 2.0 - 1.0,
                rgb[1] as f32 / 255.0 * 2.0 - 1.0,
                rgb[2] as f32 / 255.0 * 2.0 - 1.0,
            ];
            // Alpha blend over the neutral (0) background.
            let px = [signed[0] * a, signed[1] * a, signed[2] * a];
            foreground.set_pixel(cy as usize, cx as usize, px);
            mask.data[cy as usize * canvas_w + cx as usize] = a;
        }
    }

    CursorLayer {
        foreground,
        mask,
        point: Some((x_t, y_t)),
    }
}

/// Reference conditioning stream: the full frame with an all-ones mask at
/// t=0, cursor-only foregrounds with cursor masks afterwards.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceStream {
    pub ref_imgs: Vec<FrameTensor>,
    pub ref_masks: Vec<MaskPlane>,
}

/// Build the stream from the first full frame plus one cursor layer per
/// frame (the t=0 layer is superseded by the full-frame convention).
pub fn build_reference_stream(
    first_frame: &FrameTensor,
    layers: &[CursorLayer],
) -> Result<ReferenceStream, RasterError> {
    if layers.is_empty() {
        return Err(RasterError::DimensionMismatch(
            "need at least one cursor layer".to_string(),
        ));
    }
    for (t, layer) in layers.iter().enumerate() {
        if !layer.foreground.same_dims(first_frame)
            || layer.mask.height != first_frame.height
            || layer.mask.width != first_frame.width
        {
            return Err(RasterError::DimensionMismatch(format!(
                "layer {t} does not match the first frame"
            )));
        }
    }

    let mut ref_imgs = Vec::with_capacity(layers.len());
    let mut ref_masks = Vec::with_capacity(layers.len());
    ref_imgs.push(first_frame.clone());
    ref_masks.push(MaskPlane::ones(first_frame.height, first_frame.width));
    for layer in &layers[1..] {
        ref_imgs.push(layer.foreground.clone());
        ref_masks.push(layer.mask.clone());
    }
    Ok(ReferenceStream {
        ref_imgs,
        ref_masks,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term_emu::{apply_output, new_grid};

    #[test]
    fn blank_grid_renders_uniform_background() {
        let grid = {
            let mut g = new_grid(2, 2).unwrap();
            g.feed("\x1b[?25l"); // hide the cursor so every pixel is background
            g
        };
        let theme = RenderTheme::default();
        let frame = render_grid(&grid, &theme, 8, 8);
        assert_eq!(frame.height, 16);
        assert_eq!(frame.width, 16);
        for row in 0..16 {
            for col in 0..16 {
                assert_eq!(frame.pixel(row, col), [0.0, 0.0, 0.0]);
            }
        }
    }

    #[test]
    fn rendering_is_deterministic() {
        let g = apply_output(&new_grid(4, 2).unwrap(), "h\x1b[31mi\x1b[7m!");
        let theme = RenderTheme::default();
        let a = render_grid(&g, &theme, 8, 10);
        let b = render_grid(&g, &theme, 8, 10);
        assert_eq!(a, b);
    }

    #[test]
    fn glyph_pixels_match_the_bitmap_oracle() {
        let mut grid = new_grid(2, 1).unwrap();
        grid.feed("\x1b[?25l");
        grid.feed("\x1b[38;2;255;255;255m\x1b[48;2;0;0;0mX");
        let theme = RenderTheme::default();
        let frame = render_grid(&grid, &theme, 8, 8);
        let bitmap = font::glyph_bitmap('X').unwrap();
        for dy in 0..8 {
            for dx in 0..8 {
                let expected = if bitmap[dy] & (0x80 >> dx) != 0 {
                    [1.0, 1.0, 1.0]
                } else {
                    [0.0, 0.0, 0.0]
                };
                assert_eq!(frame.pixel(dy, dx), expected, "pixel ({dy},{dx})");
            }
        }
    }

    #[test]
    fn inverse_swaps_colors() {
        let mut grid = new_grid(1, 1).unwrap();
        grid.feed("\x1b[?25l\x1b[38;2;255;0;0m\x1b[48;2;0;0;255m\x1b[7m ");
        let frame = render_grid(&grid, &RenderTheme::default(), 8, 8);
        // Space glyph: every pixel takes the (swapped) background = red.
        assert_eq!(frame.pixel(0, 0), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn cursor_cell_is_filled() {
        let grid = new_grid(2, 1).unwrap();
        let theme = RenderTheme::default();
        let frame = render_grid(&grid, &theme, 8, 8);
        let cursor = [
            theme.cursor[0] as f32 / 255.0,
            theme.cursor[1] as f32 / 255.0,
            theme.cursor[2] as f32 / 255.0,
        ];
        assert_eq!(frame.pixel(0, 0), cursor);
        assert_eq!(frame.pixel(0, 8), [0.0, 0.0, 0.0]);
    }

    #[test]
    fn xterm_cube_and_grayscale() {
        let theme = RenderTheme::default();
        assert_eq!(palette_color(16, &theme), [0, 0, 0]);
        assert_eq!(palette_color(231, &theme), [255, 255, 255]);
        assert_eq!(palette_color(196, &theme), [255, 0, 0]); // 16 + 36*5
        assert_eq!(palette_color(232, &theme), [8, 8, 8]);
        assert_eq!(palette_color(255, &theme), [238, 238, 238]);
    }

    #[test]
    fn letterbox_origin_maps_to_zero() {
        let p = LetterboxParams::fit((1024, 768), (256, 192));
        let (x, y) = letterbox_map(0.0, 0.0, &p).unwrap();
        assert_eq!((x, y), (0.0, 0.0));
    }

    #[test]
    fn letterbox_extreme_pixel_exceeds_one_then_clamps() {
        let p = LetterboxParams::fit((1024, 768), (256, 192));
        assert_eq!(p.scale, 0.25);
        assert_eq!((p.pad_x, p.pad_y), (0.0, 0.0));
        let (rx, ry) = letterbox_map_raw(1023.0, 767.0, &p).unwrap();
        assert!((rx - 255.75 / 255.0).abs() < 1e-12);
        assert!((ry - 191.75 / 191.0).abs() < 1e-12);
        assert!(rx > 1.0 && ry > 1.0);
        let (cx, cy) = letterbox_map(1023.0, 767.0, &p).unwrap();
        assert_eq!((cx, cy), (1.0, 1.0));
    }

    #[test]
    fn letterbox_identity_scale() {
        let p = LetterboxParams::fit((256, 192), (256, 192));
        assert_eq!(p.scale, 1.0);
        let (x, y) = letterbox_map(10.0, 20.0, &p).unwrap();
        assert!((x - 10.0 / 255.0).abs() < 1e-12);
        assert!((y - 20.0 / 191.0).abs() < 1e-12);
    }

    #[test]
    fn letterbox_rejects_out_of_bounds() {
        let p = LetterboxParams::fit((100, 100), (50, 50));
        assert_eq!(
            letterbox_map(100.0, 0.0, &p).unwrap_err(),
            RasterError::OutOfSourceBounds
        );
    }

    #[test]
    fn letterbox_round_trip_recovers_integers() {
        let p = LetterboxParams::fit((64, 48), (64, 48));
        for (x, y) in [(0u32, 0u32), (10, 20), (63, 47), (31, 7)] {
            let (xt, yt) = letterbox_map_raw(x as f64, y as f64, &p).unwrap();
            let (bx, by) = letterbox_unmap(xt, yt, &p);
            assert_eq!(bx.round() as u32, x);
            assert_eq!(by.round() as u32, y);
        }
    }

    #[test]
    fn cursor_layer_centers_on_the_hotspot() {
        let tpl = CursorTemplate::default_arrow();
        let layer = render_cursor_layer(Some((0.5, 0.5)), 64, 64, &tpl);
        // Hotspot (template origin) lands at round(0.5 * 63) = 32.
        assert!(layer.mask.data[32 * 64 + 32] > 0.0);
        // Support is exactly the translated template support.
        let mut inside = 0usize;
        for ty in 0..tpl.height {
            for tx in 0..tpl.width {
                let expected = tpl.alpha[ty * tpl.width + tx] as f32 / 255.0;
                let got = layer.mask.data[(32 + ty) * 64 + (32 + tx)];
                assert_eq!(got, expected);
                if expected > 0.0 {
                    inside += 1;
                }
            }
        }
        let nonzero = layer.mask.data.iter().filter(|&&v| v > 0.0).count();
        assert_eq!(nonzero, inside);
        assert!((layer.mask.sum() - tpl.alpha_sum()).abs() < 1e-9);
    }

    #[test]
    fn invalid_point_zeroes_the_mask() {
        let tpl = CursorTemplate::default_arrow();
        let layer = render_cursor_layer(None, 16, 16, &tpl);
        assert!(layer.mask.is_all_zero());
        assert!(layer.foreground.data.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn corner_point_clips_to_canvas() {
        let tpl = CursorTemplate::default_arrow();
        let layer = render_cursor_layer(Some((0.0, 0.0)), 6, 6, &tpl);
        assert!(!layer.mask.is_all_zero());
        assert!(layer.mask.sum() < tpl.alpha_sum());
    }

    #[test]
    fn reference_stream_invariants() {
        let tpl = CursorTemplate::default_arrow();
        let first = FrameTensor::filled(32, 32, 0.5);
        let layers: Vec<CursorLayer> = [Some((0.1, 0.1)), Some((0.5, 0.5)), None]
            .into_iter()
            .map(|p| render_cursor_layer(p, 32, 32, &tpl))
            .collect();
        let stream = build_reference_stream(&first, &layers).unwrap();
        assert_eq!(stream.ref_imgs.len(), 3);
        assert!(stream.ref_masks[0].data.iter().all(|&v| v == 1.0));
        assert_eq!(stream.ref_imgs[0], first);
        assert_eq!(stream.ref_masks[1], layers[1].mask);
        // Invalid cursor at t=2 -> all-zero mask.
        assert!(stream.ref_masks[2].is_all_zero());
    }

    #[test]
    fn reference_stream_single_frame() {
        let tpl = CursorTemplate::default_arrow();
        let first = FrameTensor::filled(16, 16, 0.25);
        let layers = vec![render_cursor_layer(Some((0.5, 0.5)), 16, 16, &tpl)];
        let stream = build_reference_stream(&first, &layers).unwrap();
        assert_eq!(stream.ref_imgs.len(), 1);
        assert_eq!(stream.ref_imgs[0], first);
    }

    #[test]
    fn reference_stream_rejects_mismatched_dims() {
        let tpl = CursorTemplate::default_arrow();
        let first = FrameTensor::filled(16, 16, 0.25);
        let layers = vec![render_cursor_layer(Some((0.5, 0.5)), 32, 32, &tpl)];
        assert!(matches!(
            build_reference_stream(&first, &layers),
            Err(RasterError::DimensionMismatch(_))
        ));
    }

    #[test]
    fn hex_color_parsing() {
        assert_eq!(parse_hex_color("#1e1e2e"), Some([0x1e, 0x1e, 0x2e]));
        assert_eq!(parse_hex_color("#FFffFF"), Some([255, 255, 255]));
        assert_eq!(parse_hex_color("1e1e2e"), None);
        assert_eq!(parse_hex_color("#xyzxyz"), None);
    }
}
