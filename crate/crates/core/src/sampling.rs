//! Combinatorial diffusion by resampling the pixel tiling.
//!
//! Upsampling splits each pixel into `f×f` sub-pixels carrying `h/f²` each;
//! downsampling fuses `f×f` blocks into one pixel carrying the sum of their
//! heights, clamped to 1. The fused sum is correctly rounded, so a fused block
//! of identical sub-pixels returns the original height whenever `f²·fl(h/f²)`
//! rounds back to `h` (always for `f = 2`, and for every 8-bit gray level
//! when `f = 3`).

use crate::error::{Error, Result};
use crate::grid::{GrayImage, Grid};

/// Smallest height a resampled pixel may carry.
pub const HEIGHT_FLOOR: f64 = f64::MIN_POSITIVE;

fn check_factor(factor: usize) -> Result<()> {
    if factor == 2 || factor == 3 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "resampling factor must be 2 or 3, got {factor}"
        )))
    }
}

pub fn upsample(image: &GrayImage, factor: usize) -> Result<GrayImage> {
    check_factor(factor)?;
    let share = (factor * factor) as f64;
    let sub = image.heights().map(|&h| (h / share).max(HEIGHT_FLOOR));
    let heights = Grid::from_fn(image.height() * factor, image.width() * factor, |i, j| {
        sub[(i / factor, j / factor)]
    });
    GrayImage::new(heights)
}

pub fn downsample(image: &GrayImage, factor: usize) -> Result<GrayImage> {
    check_factor(factor)?;
    let (h, w) = (image.height(), image.width());
    if h % factor != 0 || w % factor != 0 {
        return Err(Error::Shape(format!(
            "{h}x{w} image is not divisible into {factor}x{factor} blocks"
        )));
    }
    let mut block = Vec::with_capacity(factor * factor);
    let heights = Grid::from_fn(h / factor, w / factor, |i, j| {
        block.clear();
        for di in 0..factor {
            for dj in 0..factor {
                block.push(image.at(i * factor + di, j * factor + dj));
            }
        }
        exact_sum(&block).min(1.0)
    });
    GrayImage::new(heights)
}

/// Total height `Σ h` (the cell content of the tiling).
pub fn mass(image: &GrayImage) -> f64 {
    exact_sum(image.heights().as_slice())
}

/// Correctly rounded floating-point sum (Shewchuk's partials, as in `math.fsum`).
pub fn exact_sum(values: &[f64]) -> f64 {
    let mut partials: Vec<f64> = Vec::new();
    for &v in values {
        let mut x = v;
        let mut kept = 0;
        for k in 0..partials.len() {
            let mut y = partials[k];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                partials[kept] = lo;
                kept += 1;
            }
            x = hi;
        }
        partials.truncate(kept);
        partials.push(x);
    }
    let Some(mut hi) = partials.pop() else {
        return 0.0;
    };
    let mut lo = 0.0;
    while let Some(y) = partials.pop() {
        let x = hi;
        hi = x + y;
        let yr = hi - x;
        lo = y - yr;
        if lo != 0.0 {
            break;
        }
    }
    // half-way case: make rounding follow the sign of the remaining partials
    if let Some(&next) = partials.last() {
        if (lo < 0.0 && next < 0.0) || (lo > 0.0 && next > 0.0) {
            let y = lo * 2.0;
            let x = hi + y;
            if y == x - hi {
                hi = x;
            }
        }
    }
    hi
}
