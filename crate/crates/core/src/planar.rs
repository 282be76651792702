//! Closed-form curvature and Laplacian kernels on the square tiling of an image.
//!
//! With vertex weights 0, the general formulas collapse to expressions in the
//! edge `e0`, its two pixels `c1, c2` and the edges `e1 ⊂ c1`, `e2 ⊂ c2`
//! opposite to it:
//!
//! ```text
//! Ric(e0) = w(e0) [ w(e0)/w(c1) + w(e0)/w(c2) − √(w(e0)w(e1))/w(c1) − √(w(e0)w(e2))/w(c2) ]
//! □₁(e0)  = w(e0)/w(c1) − w(e0)/w(c2)
//! B₁(e0)  = □₁(e0) − Ric(e0)
//! □₂(c1, c2) = w(e0) / √(w(c1)w(c2))
//! ```
//!
//! `c1` is the upper pixel of a horizontal edge and the left pixel of a vertical
//! edge. Terms whose cells fall outside the image are dropped.

use crate::error::{Error, Result};
use crate::grid::{EdgeField, GrayImage, Grid, PixelField};
use crate::weights::WeightScheme;

/// Pixel weights `w1·w2²·h`.
pub fn pixel_weights(image: &GrayImage, scheme: &WeightScheme) -> PixelField {
    let area = scheme.dimension_factor(2, image.height().max(image.width()));
    image.heights().map(|&h| area * h)
}

/// Edge weights `w1·w2·|h_α − h_β|`; border edges weigh 0.
pub fn edge_weights(image: &GrayImage, scheme: &WeightScheme) -> EdgeField {
    let (h, w) = (image.height(), image.width());
    let length = scheme.dimension_factor(1, h.max(w));
    let horizontal = Grid::from_fn(h + 1, w, |r, j| {
        if r == 0 || r == h {
            0.0
        } else {
            length * (image.at(r - 1, j) - image.at(r, j)).abs()
        }
    });
    let vertical = Grid::from_fn(h, w + 1, |i, c| {
        if c == 0 || c == w {
            0.0
        } else {
            length * (image.at(i, c - 1) - image.at(i, c)).abs()
        }
    });
    EdgeField::new(horizontal, vertical).expect("tiling shape")
}

fn check_weights(edges: &EdgeField, pixels: &PixelField) -> Result<()> {
    if pixels.shape() != (edges.height(), edges.width()) {
        return Err(Error::Shape(format!(
            "pixel weights {:?} do not match an edge field of a {}x{} tiling",
            pixels.shape(),
            edges.height(),
            edges.width()
        )));
    }
    for i in 0..pixels.rows() {
        for j in 0..pixels.cols() {
            let w = pixels[(i, j)];
            if !(w > 0.0 && w.is_finite()) {
                return Err(Error::NonPositiveWeight {
                    what: "pixel",
                    weight: w,
                    location: format!("({i}, {j})"),
                });
            }
        }
    }
    Ok(())
}

/// Pixel lookup for one edge family, indexed by `(line, along)`: the row line
/// and column of a horizontal edge, or the column line and row of a vertical one.
struct Across<'a> {
    pixels: &'a PixelField,
    horizontal: bool,
}

impl Across<'_> {
    #[inline]
    fn pixel(&self, line: usize, along: usize) -> f64 {
        if self.horizontal {
            self.pixels[(line, along)]
        } else {
            self.pixels[(along, line)]
        }
    }
}

#[inline]
fn ricci_term(w0: f64, w_opposite: f64, w_pixel: f64) -> (f64, f64) {
    (w0 / w_pixel, (w0 * w_opposite).sqrt() / w_pixel)
}

/// Ric, □₁ and □₂ over one edge family, written through `out`.
fn sweep_family(family: &Grid<f64>, across: Across<'_>, mut out: impl FnMut(usize, usize, EdgeValues)) {
    // family is (lines × along) for horizontal edges, (along × lines) for vertical
    let (lines, along) = if across.horizontal {
        (family.rows(), family.cols())
    } else {
        (family.cols(), family.rows())
    };
    let n = lines - 1;
    let at = |line: usize, k: usize| {
        if across.horizontal {
            family[(line, k)]
        } else {
            family[(k, line)]
        }
    };
    for line in 0..lines {
        for k in 0..along {
            let w0 = at(line, k);
            if w0 == 0.0 {
                out(line, k, EdgeValues::default());
                continue;
            }
            let (mut self_sum, mut cross_sum, mut box1) = (0.0, 0.0, 0.0);
            let (mut c1, mut c2) = (None, None);
            if line > 0 {
                let wc = across.pixel(line - 1, k);
                let (s, x) = ricci_term(w0, at(line - 1, k), wc);
                self_sum += s;
                cross_sum += x;
                box1 += s;
                c1 = Some(wc);
            }
            if line < n {
                let wc = across.pixel(line, k);
                let (s, x) = ricci_term(w0, at(line + 1, k), wc);
                self_sum += s;
                cross_sum += x;
                box1 -= s;
                c2 = Some(wc);
            }
            let box2 = match (c1, c2) {
                (Some(a), Some(b)) => w0 / (a * b).sqrt(),
                _ => 0.0,
            };
            out(
                line,
                k,
                EdgeValues {
                    ricci: w0 * (self_sum - cross_sum),
                    box1,
                    box2,
                },
            );
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct EdgeValues {
    ricci: f64,
    box1: f64,
    box2: f64,
}

/// All edge operators of one weighted tiling, computed in a single sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeOperators {
    pub ricci: EdgeField,
    pub box1: EdgeField,
    /// `box1 − ricci`, elementwise from the two fields above.
    pub bochner: EdgeField,
    pub box2: EdgeField,
}

pub fn edge_operators_from_weights(edges: &EdgeField, pixels: &PixelField) -> Result<EdgeOperators> {
    check_weights(edges, pixels)?;
    let (h, w) = (edges.height(), edges.width());
    let mut ricci = EdgeField::zeros(h, w);
    let mut box1 = EdgeField::zeros(h, w);
    let mut box2 = EdgeField::zeros(h, w);

    sweep_family(
        edges.horizontal(),
        Across {
            pixels,
            horizontal: true,
        },
        |line, k, v| {
            ricci.horizontal_mut()[(line, k)] = v.ricci;
            box1.horizontal_mut()[(line, k)] = v.box1;
            box2.horizontal_mut()[(line, k)] = v.box2;
        },
    );
    sweep_family(
        edges.vertical(),
        Across {
            pixels,
            horizontal: false,
        },
        |line, k, v| {
            ricci.vertical_mut()[(k, line)] = v.ricci;
            box1.vertical_mut()[(k, line)] = v.box1;
            box2.vertical_mut()[(k, line)] = v.box2;
        },
    );
    let bochner = box1.zip_with(&ricci, |b, r| b - r)?;
    Ok(EdgeOperators {
        ricci,
        box1,
        bochner,
        box2,
    })
}

/// Evaluates with `w1 = 1` and applies `w1` afterwards: Ric has degree 1 in a
/// uniform weight scale and the Laplacians degree 0, and factoring the scale
/// out keeps both exact instead of exposing them to cancellation.
pub fn edge_operators(image: &GrayImage, scheme: &WeightScheme) -> Result<EdgeOperators> {
    scheme.validate()?;
    let unit = scheme.with_w1(1.0);
    let mut ops = edge_operators_from_weights(&edge_weights(image, &unit), &pixel_weights(image, &unit))?;
    if scheme.w1 != 1.0 {
        ops.ricci = ops.ricci.map(|v| scheme.w1 * v);
        ops.bochner = ops.box1.zip_with(&ops.ricci, |b, r| b - r)?;
    }
    Ok(ops)
}

/// Weighted Ricci curvature on every edge, from explicit edge and pixel weights.
pub fn ricci_from_weights(edges: &EdgeField, pixels: &PixelField) -> Result<EdgeField> {
    Ok(edge_operators_from_weights(edges, pixels)?.ricci)
}

pub fn ricci_edges(image: &GrayImage, scheme: &WeightScheme) -> Result<EdgeField> {
    Ok(edge_operators(image, scheme)?.ricci)
}

pub fn box1_edges(image: &GrayImage, scheme: &WeightScheme) -> Result<EdgeField> {
    Ok(edge_operators(image, scheme)?.box1)
}

pub fn bochner_edges(image: &GrayImage, scheme: &WeightScheme) -> Result<EdgeField> {
    Ok(edge_operators(image, scheme)?.bochner)
}

/// `□₂` across each edge as a nonnegative magnitude; border edges carry 0.
pub fn box2_edges(image: &GrayImage, scheme: &WeightScheme) -> Result<EdgeField> {
    Ok(edge_operators(image, scheme)?.box2)
}

/// Unit-style curvature `w(c1) + w(c2) − Σ w(e_i) + 2` over the four edges
/// parallel to each edge (two opposite, two collinear). Missing cells count 0.
pub fn combinatorial_ricci_edges(edges: &EdgeField, pixels: &PixelField) -> Result<EdgeField> {
    let (h, w) = (edges.height(), edges.width());
    if pixels.shape() != (h, w) {
        return Err(Error::Shape(format!(
            "pixel weights {:?} do not match a {h}x{w} tiling",
            pixels.shape()
        )));
    }
    let hz = edges.horizontal();
    let vt = edges.vertical();
    let get = |g: &Grid<f64>, i: Option<usize>, j: Option<usize>| match (i, j) {
        (Some(i), Some(j)) => g.get(i, j).copied().unwrap_or(0.0),
        _ => 0.0,
    };
    let horizontal = Grid::from_fn(h + 1, w, |r, j| {
        let faces = get(pixels, r.checked_sub(1), Some(j)) + get(pixels, Some(r), Some(j));
        let parallel = get(hz, r.checked_sub(1), Some(j))
            + get(hz, Some(r + 1), Some(j))
            + get(hz, Some(r), j.checked_sub(1))
            + get(hz, Some(r), Some(j + 1));
        faces - parallel + 2.0
    });
    let vertical = Grid::from_fn(h, w + 1, |i, c| {
        let faces = get(pixels, Some(i), c.checked_sub(1)) + get(pixels, Some(i), Some(c));
        let parallel = get(vt, Some(i), c.checked_sub(1))
            + get(vt, Some(i), Some(c + 1))
            + get(vt, i.checked_sub(1), Some(c))
            + get(vt, Some(i + 1), Some(c));
        faces - parallel + 2.0
    });
    EdgeField::new(horizontal, vertical)
}

/// Per-pixel aggregation of an edge field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Direction {
    /// Mean of the pixel's top and bottom (horizontal) edges.
    Horizontal,
    /// Mean of the pixel's left and right (vertical) edges.
    Vertical,
    /// Mean of all four bounding edges.
    #[default]
    Average,
}

pub fn directional_map(field: &EdgeField, dir: Direction) -> PixelField {
    let hz = field.horizontal();
    let vt = field.vertical();
    Grid::from_fn(field.height(), field.width(), |i, j| {
        let top_bottom = hz[(i, j)] + hz[(i + 1, j)];
        let left_right = vt[(i, j)] + vt[(i, j + 1)];
        match dir {
            Direction::Horizontal => top_bottom / 2.0,
            Direction::Vertical => left_right / 2.0,
            Direction::Average => (top_bottom + left_right) / 4.0,
        }
    })
}

/// Arithmetic mean of the four edges bounding each pixel.
pub fn pixel_average(field: &EdgeField) -> PixelField {
    directional_map(field, Direction::Average)
}
