//! Classical pointwise operators on the height surface, for comparison with
//! the combinatorial ones.

use crate::error::{Error, Result};
use crate::grid::{Grid, PixelField};

fn check_size(heights: &Grid<f64>, spacing: f64) -> Result<()> {
    if heights.rows() < 3 || heights.cols() < 3 {
        return Err(Error::Shape(format!(
            "reference operators need at least 3x3 samples, got {}x{}",
            heights.rows(),
            heights.cols()
        )));
    }
    if !(spacing.is_finite() && spacing > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "grid spacing must be > 0, got {spacing}"
        )));
    }
    Ok(())
}

/// First difference at index `k` of a line of `n ≥ 3` samples: central inside,
/// one-sided at the two ends.
#[inline]
fn d1(f: impl Fn(usize) -> f64, k: usize, n: usize, spacing: f64) -> f64 {
    if k == 0 {
        (f(1) - f(0)) / spacing
    } else if k == n - 1 {
        (f(n - 1) - f(n - 2)) / spacing
    } else {
        (f(k + 1) - f(k - 1)) / (2.0 * spacing)
    }
}

/// Second difference, with the three-point stencil shifted inward at the ends.
#[inline]
fn d2(f: impl Fn(usize) -> f64, k: usize, n: usize, spacing: f64) -> f64 {
    let c = k.clamp(1, n - 2);
    (f(c + 1) - 2.0 * f(c) + f(c - 1)) / (spacing * spacing)
}

/// Gaussian curvature of the Monge patch `z = h(x, y)`:
/// `K = (h_xx h_yy − h_xy²) / (1 + h_x² + h_y²)²`, `x` along columns.
pub fn classical_gauss(heights: &Grid<f64>, spacing: f64) -> Result<PixelField> {
    check_size(heights, spacing)?;
    let (rows, cols) = heights.shape();
    let hx = Grid::from_fn(rows, cols, |i, j| d1(|k| heights[(i, k)], j, cols, spacing));
    let hy = Grid::from_fn(rows, cols, |i, j| d1(|k| heights[(k, j)], i, rows, spacing));
    Ok(Grid::from_fn(rows, cols, |i, j| {
        let hxx = d2(|k| heights[(i, k)], j, cols, spacing);
        let hyy = d2(|k| heights[(k, j)], i, rows, spacing);
        // symmetrized so the result transposes exactly with the input
        let hxy = 0.5 * (d1(|k| hx[(k, j)], i, rows, spacing) + d1(|k| hy[(i, k)], j, cols, spacing));
        let (gx, gy) = (hx[(i, j)], hy[(i, j)]);
        let denom = 1.0 + (gx * gx + gy * gy);
        (hxx * hyy - hxy * hxy) / (denom * denom)
    }))
}

/// Five-point Laplacian on interior samples; each border sample copies the
/// value of its nearest interior sample.
pub fn classical_laplacian(heights: &Grid<f64>, spacing: f64) -> Result<PixelField> {
    check_size(heights, spacing)?;
    let (rows, cols) = heights.shape();
    let s2 = spacing * spacing;
    Ok(Grid::from_fn(rows, cols, |i, j| {
        let (i, j) = (i.clamp(1, rows - 2), j.clamp(1, cols - 2));
        (heights[(i - 1, j)] + heights[(i + 1, j)] + heights[(i, j - 1)] + heights[(i, j + 1)] - 4.0 * heights[(i, j)])
            / s2
    }))
}
