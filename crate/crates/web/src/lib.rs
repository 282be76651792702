//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Images cross the boundary as row-major 8-bit gray levels; results come back
//! as RGBA bytes ready for `ImageData`.

use cellcurv::flow::{run_flow, FlowConfig};
use cellcurv::io::{to_gray_levels, Normalization};
use cellcurv::planar::{directional_map, edge_operators, Direction};
use cellcurv::sampling::{downsample, upsample};
use cellcurv::{GrayImage, Grid, PixelField, WeightScheme};
use wasm_bindgen::prelude::*;

fn image(gray: &[u8], width: usize, height: usize) -> Result<GrayImage, String> {
    let levels = Grid::from_vec(height, width, gray.to_vec()).map_err(|e| e.to_string())?;
    GrayImage::from_gray_levels(&levels).map_err(|e| e.to_string())
}

fn direction(name: &str) -> Result<Direction, String> {
    match name {
        "h" => Ok(Direction::Horizontal),
        "v" => Ok(Direction::Vertical),
        "avg" => Ok(Direction::Average),
        _ => Err(format!("unknown direction {name:?}")),
    }
}

/// Blue below zero, white at zero, red above, scaled by the largest magnitude.
pub fn diverging_rgba(field: &PixelField) -> Vec<u8> {
    let amp = field.max_abs();
    let mut out = Vec::with_capacity(field.rows() * field.cols() * 4);
    for &v in field.iter() {
        let t = if amp > 0.0 { (v / amp).clamp(-1.0, 1.0) } else { 0.0 };
        let fade = (255.0 * (1.0 - t.abs())).round() as u8;
        let [r, g, b] = if t >= 0.0 { [255, fade, fade] } else { [fade, fade, 255] };
        out.extend_from_slice(&[r, g, b, 255]);
    }
    out
}

pub fn gray_rgba(levels: &Grid<u8>) -> Vec<u8> {
    levels.iter().flat_map(|&g| [g, g, g, 255]).collect()
}

/// Pixel map of `op` ("ricci", "box1", "bochner" or "box2") as RGBA.
pub fn operator_map(gray: &[u8], width: usize, height: usize, op: &str, dir: &str, w1: f64) -> Result<Vec<u8>, String> {
    let img = image(gray, width, height)?;
    let scheme = WeightScheme::default().with_w1(w1);
    scheme.validate().map_err(|e| e.to_string())?;
    let ops = edge_operators(&img, &scheme).map_err(|e| e.to_string())?;
    let field = match op {
        "ricci" => &ops.ricci,
        "box1" => &ops.box1,
        "bochner" => &ops.bochner,
        "box2" => &ops.box2,
        _ => return Err(format!("unknown operator {op:?}")),
    };
    Ok(diverging_rgba(&directional_map(field, direction(dir)?)))
}

/// Heights after subdividing ("up") or fusing ("down") pixels, rendered
/// with min-max contrast. Returns `[width, height]` as the first 8 bytes
/// (little-endian u32) followed by the RGBA pixels.
pub fn resample_rgba(gray: &[u8], width: usize, height: usize, mode: &str, factor: usize) -> Result<Vec<u8>, String> {
    let img = image(gray, width, height)?;
    let res = match mode {
        "up" => upsample(&img, factor),
        "down" => downsample(&img, factor),
        _ => return Err(format!("unknown mode {mode:?}")),
    }
    .map_err(|e| e.to_string())?;
    let levels = to_gray_levels(res.heights(), Normalization::MinMax).map_err(|e| e.to_string())?;
    let mut out = Vec::new();
    out.extend_from_slice(&(res.width() as u32).to_le_bytes());
    out.extend_from_slice(&(res.height() as u32).to_le_bytes());
    out.extend(gray_rgba(&levels));
    Ok(out)
}

/// Pixel-averaged edge weights after each flow step, as consecutive RGBA
/// frames sharing one contrast range.
pub fn flow_rgba(gray: &[u8], width: usize, height: usize, steps: usize, dt: f64) -> Result<Vec<u8>, String> {
    let cfg = FlowConfig {
        dt,
        steps,
        floor: 0.0,
        renormalize: true,
    };
    let trace = run_flow(&image(gray, width, height)?, &WeightScheme::default(), &cfg).map_err(|e| e.to_string())?;
    let maps: Vec<PixelField> = trace.iter().map(|f| directional_map(f, Direction::Average)).collect();
    let top = maps.iter().map(PixelField::max_abs).fold(0.0, f64::max);
    let mut out = Vec::with_capacity(maps.len() * width * height * 4);
    for m in &maps {
        let levels = m.map(|&v| if top > 0.0 { (255.0 * v / top).round() as u8 } else { 0 });
        out.extend(gray_rgba(&levels));
    }
    Ok(out)
}

/// Test patterns: "step", "disc", "ramp" or "noise".
pub fn synthetic(kind: &str, size: usize) -> Result<Vec<u8>, String> {
    if size == 0 {
        return Err("size must be positive".into());
    }
    let n = size as f64;
    let mut seed: u32 = 0x9e37_79b9;
    let g = Grid::from_fn(size, size, |i, j| match kind {
        "step" => {
            if j < size / 2 {
                60
            } else {
                200
            }
        }
        "disc" => {
            let (y, x) = (i as f64 + 0.5 - n / 2.0, j as f64 + 0.5 - n / 2.0);
            if (x * x + y * y).sqrt() < n / 3.0 {
                220
            } else {
                40
            }
        }
        "ramp" => (255.0 * (i + j) as f64 / (2.0 * n)) as u8,
        _ => {
            seed ^= seed << 13;
            seed ^= seed >> 17;
            seed ^= seed << 5;
            (seed >> 24) as u8
        }
    });
    if !matches!(kind, "step" | "disc" | "ramp" | "noise") {
        return Err(format!("unknown pattern {kind:?}"));
    }
    Ok(g.into_vec())
}

#[wasm_bindgen(js_name = operatorMap)]
pub fn js_operator_map(
    gray: &[u8],
    width: usize,
    height: usize,
    op: &str,
    dir: &str,
    w1: f64,
) -> Result<Vec<u8>, JsError> {
    operator_map(gray, width, height, op, dir, w1).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = resample)]
pub fn js_resample(gray: &[u8], width: usize, height: usize, mode: &str, factor: usize) -> Result<Vec<u8>, JsError> {
    resample_rgba(gray, width, height, mode, factor).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = flowFrames)]
pub fn js_flow_frames(gray: &[u8], width: usize, height: usize, steps: usize, dt: f64) -> Result<Vec<u8>, JsError> {
    flow_rgba(gray, width, height, steps, dt).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = syntheticImage)]
pub fn js_synthetic(kind: &str, size: usize) -> Result<Vec<u8>, JsError> {
    synthetic(kind, size).map_err(|e| JsError::new(&e))
}
