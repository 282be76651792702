//! Dense row-major grids and the image-shaped containers built on them.
//!
//! Edge fields live on the full edge lattice of an `H×W` pixel tiling:
//! `horizontal` holds the `(H+1)×W` horizontal edges (edge `(r, j)` lies on
//! row line `r`, between pixel `(r-1, j)` above and `(r, j)` below), and
//! `vertical` holds the `H×(W+1)` vertical edges (edge `(i, c)` lies on
//! column line `c`, between pixel `(i, c-1)` on the left and `(i, c)` on the
//! right). Border edges belong to a single pixel.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Grid<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Clone> Grid<T> {
    pub fn filled(rows: usize, cols: usize, value: T) -> Self {
        Self {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn transpose(&self) -> Self {
        Grid::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }
}

impl<T> Grid<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} values cannot fill a {rows}x{cols} grid",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Option<&T> {
        if i < self.rows && j < self.cols {
            Some(&self.data[i * self.cols + j])
        } else {
            None
        }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.data.iter()
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid<U> {
        Grid {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }
}

impl Grid<f64> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::filled(rows, cols, 0.0)
    }

    /// Elementwise `self - other`.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        if self.shape() != other.shape() {
            return Err(Error::Shape(format!(
                "cannot subtract {:?} from {:?}",
                other.shape(),
                self.shape()
            )));
        }
        Ok(Grid {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

impl<T> Index<(usize, usize)> for Grid<T> {
    type Output = T;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &T {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Grid<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// Per-pixel scalar quantities.
pub type PixelField = Grid<f64>;

/// Dense `D×H×W` grid, index order `(z, y, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid3<T> {
    dims: [usize; 3],
    data: Vec<T>,
}

impl<T> Grid3<T> {
    pub fn from_vec(dims: [usize; 3], data: Vec<T>) -> Result<Self> {
        if data.len() != dims.iter().product::<usize>() {
            return Err(Error::Shape(format!(
                "{} values cannot fill a {}x{}x{} grid",
                data.len(),
                dims[0],
                dims[1],
                dims[2]
            )));
        }
        Ok(Self { dims, data })
    }

    pub fn from_fn(dims: [usize; 3], mut f: impl FnMut([usize; 3]) -> T) -> Self {
        let mut data = Vec::with_capacity(dims.iter().product());
        for z in 0..dims[0] {
            for y in 0..dims[1] {
                for x in 0..dims[2] {
                    data.push(f([z, y, x]));
                }
            }
        }
        Self { dims, data }
    }

    #[inline]
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    #[inline]
    fn offset(&self, p: [usize; 3]) -> usize {
        debug_assert!(p.iter().zip(&self.dims).all(|(a, n)| a < n));
        (p[0] * self.dims[1] + p[1]) * self.dims[2] + p[2]
    }

    #[inline]
    pub fn get(&self, p: [usize; 3]) -> Option<&T> {
        if p.iter().zip(&self.dims).all(|(a, n)| a < n) {
            Some(&self.data[self.offset(p)])
        } else {
            None
        }
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.data.iter()
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Grid3<U> {
        Grid3 {
            dims: self.dims,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T> Index<[usize; 3]> for Grid3<T> {
    type Output = T;

    #[inline]
    fn index(&self, p: [usize; 3]) -> &T {
        &self.data[self.offset(p)]
    }
}

impl<T> IndexMut<[usize; 3]> for Grid3<T> {
    #[inline]
    fn index_mut(&mut self, p: [usize; 3]) -> &mut T {
        let o = self.offset(p);
        &mut self.data[o]
    }
}

fn check_heights<'a>(values: impl IntoIterator<Item = &'a f64>) -> Result<()> {
    for (k, &h) in values.into_iter().enumerate() {
        if !(h.is_finite() && h > 0.0 && h <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "height {h} at sample {k} is outside (0, 1]"
            )));
        }
    }
    Ok(())
}

/// A grayscale image as a height field with every height in `(0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    heights: Grid<f64>,
}

impl GrayImage {
    pub fn new(heights: Grid<f64>) -> Result<Self> {
        if heights.rows() == 0 || heights.cols() == 0 {
            return Err(Error::Shape("image must be at least 1x1".into()));
        }
        check_heights(heights.iter())?;
        Ok(Self { heights })
    }

    /// Builds an image from 8-bit gray levels through [`crate::height_from_gray`].
    pub fn from_gray_levels(levels: &Grid<u8>) -> Result<Self> {
        Self::new(levels.map(|&g| crate::weights::height_from_gray(g)))
    }

    pub fn constant(rows: usize, cols: usize, h: f64) -> Result<Self> {
        Self::new(Grid::filled(rows, cols, h))
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.heights.rows()
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.heights.cols()
    }

    #[inline]
    pub fn heights(&self) -> &Grid<f64> {
        &self.heights
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.heights[(i, j)]
    }

    pub fn transpose(&self) -> Self {
        Self {
            heights: self.heights.transpose(),
        }
    }
}

/// A voxel volume with every height in `(0, 1]`, index order `(z, y, x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct VoxelVolume {
    heights: Grid3<f64>,
}

impl VoxelVolume {
    pub fn new(heights: Grid3<f64>) -> Result<Self> {
        if heights.dims().contains(&0) {
            return Err(Error::Shape("volume must be at least 1x1x1".into()));
        }
        check_heights(heights.iter())?;
        Ok(Self { heights })
    }

    pub fn from_gray_levels(levels: &Grid3<u8>) -> Result<Self> {
        Self::new(levels.map(|&g| crate::weights::height_from_gray(g)))
    }

    #[inline]
    pub fn dims(&self) -> [usize; 3] {
        self.heights.dims()
    }

    #[inline]
    pub fn heights(&self) -> &Grid3<f64> {
        &self.heights
    }

    /// Reorders the axes: axis `k` of the result is axis `perm[k]` of `self`.
    pub fn permute_axes(&self, perm: [usize; 3]) -> Self {
        let d = self.dims();
        let dims = [d[perm[0]], d[perm[1]], d[perm[2]]];
        let heights = Grid3::from_fn(dims, |q| {
            let mut p = [0; 3];
            for k in 0..3 {
                p[perm[k]] = q[k];
            }
            self.heights[p]
        });
        Self { heights }
    }
}

/// Values on the horizontal and vertical edges of an `H×W` pixel tiling.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeField {
    horizontal: Grid<f64>,
    vertical: Grid<f64>,
}

impl EdgeField {
    pub fn new(horizontal: Grid<f64>, vertical: Grid<f64>) -> Result<Self> {
        let (hr, hc) = horizontal.shape();
        let (vr, vc) = vertical.shape();
        if hr == 0 || vc == 0 || hr != vr + 1 || vc != hc + 1 || hc == 0 || vr == 0 {
            return Err(Error::Shape(format!(
                "horizontal {hr}x{hc} and vertical {vr}x{vc} edge grids do not describe a pixel tiling"
            )));
        }
        Ok(Self { horizontal, vertical })
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self::filled(height, width, 0.0)
    }

    pub fn filled(height: usize, width: usize, value: f64) -> Self {
        Self {
            horizontal: Grid::filled(height + 1, width, value),
            vertical: Grid::filled(height, width + 1, value),
        }
    }

    /// Pixel height `H` of the underlying tiling.
    #[inline]
    pub fn height(&self) -> usize {
        self.vertical.rows()
    }

    /// Pixel width `W` of the underlying tiling.
    #[inline]
    pub fn width(&self) -> usize {
        self.horizontal.cols()
    }

    #[inline]
    pub fn horizontal(&self) -> &Grid<f64> {
        &self.horizontal
    }

    #[inline]
    pub fn vertical(&self) -> &Grid<f64> {
        &self.vertical
    }

    pub fn horizontal_mut(&mut self) -> &mut Grid<f64> {
        &mut self.horizontal
    }

    pub fn vertical_mut(&mut self) -> &mut Grid<f64> {
        &mut self.vertical
    }

    pub fn into_parts(self) -> (Grid<f64>, Grid<f64>) {
        (self.horizontal, self.vertical)
    }

    /// The field of the transposed tiling: horizontal and vertical swap roles.
    pub fn transpose(&self) -> Self {
        Self {
            horizontal: self.vertical.transpose(),
            vertical: self.horizontal.transpose(),
        }
    }

    pub fn map(&self, mut f: impl FnMut(f64) -> f64) -> Self {
        Self {
            horizontal: self.horizontal.map(|&v| f(v)),
            vertical: self.vertical.map(|&v| f(v)),
        }
    }

    /// Elementwise combination of two fields on the same tiling.
    pub fn zip_with(&self, other: &Self, mut f: impl FnMut(f64, f64) -> f64) -> Result<Self> {
        if self.height() != other.height() || self.width() != other.width() {
            return Err(Error::Shape(format!(
                "edge fields of {}x{} and {}x{} tilings",
                self.height(),
                self.width(),
                other.height(),
                other.width()
            )));
        }
        let zip = |a: &Grid<f64>, b: &Grid<f64>, f: &mut dyn FnMut(f64, f64) -> f64| {
            Grid::from_vec(
                a.rows(),
                a.cols(),
                a.iter().zip(b.iter()).map(|(&x, &y)| f(x, y)).collect(),
            )
            .expect("same shape")
        };
        Ok(Self {
            horizontal: zip(&self.horizontal, &other.horizontal, &mut f),
            vertical: zip(&self.vertical, &other.vertical, &mut f),
        })
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.horizontal.iter().chain(self.vertical.iter()).copied()
    }

    pub fn sum(&self) -> f64 {
        self.values().sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.horizontal.max_abs().max(self.vertical.max_abs())
    }
}

/// Edge directions of the cubic lattice, named by the axis the edge runs along.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Axis {
    /// Depth axis (index 0).
    Z,
    /// Row axis (index 1).
    Y,
    /// Column axis (index 2).
    X,
}

impl Axis {
    pub const ALL: [Axis; 3] = [Axis::Z, Axis::Y, Axis::X];

    #[inline]
    pub fn index(self) -> usize {
        match self {
            Axis::Z => 0,
            Axis::Y => 1,
            Axis::X => 2,
        }
    }

    pub fn from_index(k: usize) -> Axis {
        Axis::ALL[k]
    }
}

/// Values on the three edge families of a `D×H×W` voxel lattice.
///
/// The grid for edges along axis `a` has extent `n_a` on that axis and
/// `n_b + 1` on the other two.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeField3D {
    dims: [usize; 3],
    families: [Grid3<f64>; 3],
}

impl EdgeField3D {
    pub fn edge_dims(dims: [usize; 3], axis: Axis) -> [usize; 3] {
        let a = axis.index();
        let mut e = [dims[0] + 1, dims[1] + 1, dims[2] + 1];
        e[a] = dims[a];
        e
    }

    pub fn zeros(dims: [usize; 3]) -> Self {
        let fam = |axis| {
            let e = Self::edge_dims(dims, axis);
            Grid3::from_vec(e, vec![0.0; e.iter().product()]).expect("sized")
        };
        Self {
            dims,
            families: [fam(Axis::Z), fam(Axis::Y), fam(Axis::X)],
        }
    }

    pub fn new(dims: [usize; 3], families: [Grid3<f64>; 3]) -> Result<Self> {
        for axis in Axis::ALL {
            if families[axis.index()].dims() != Self::edge_dims(dims, axis) {
                return Err(Error::Shape(format!(
                    "{axis:?} edge grid {:?} does not match volume {dims:?}",
                    families[axis.index()].dims()
                )));
            }
        }
        Ok(Self { dims, families })
    }

    /// Voxel dimensions `[D, H, W]` of the underlying lattice.
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn family(&self, axis: Axis) -> &Grid3<f64> {
        &self.families[axis.index()]
    }

    pub fn family_mut(&mut self, axis: Axis) -> &mut Grid3<f64> {
        &mut self.families[axis.index()]
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.families.iter().flat_map(|g| g.iter().copied())
    }

    pub fn max_abs(&self) -> f64 {
        self.values().fold(0.0, |m, v| m.max(v.abs()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_field_shapes() {
        let f = EdgeField::zeros(3, 5);
        assert_eq!(f.horizontal().shape(), (4, 5));
        assert_eq!(f.vertical().shape(), (3, 6));
        assert_eq!((f.height(), f.width()), (3, 5));
        assert!(EdgeField::new(Grid::zeros(3, 5), Grid::zeros(3, 6)).is_err());
    }

    #[test]
    fn transpose_swaps_families() {
        let mut f = EdgeField::zeros(2, 3);
        f.horizontal_mut()[(1, 2)] = 7.0;
        let t = f.transpose();
        assert_eq!((t.height(), t.width()), (3, 2));
        assert_eq!(t.vertical()[(2, 1)], 7.0);
        assert_eq!(t.transpose(), f);
    }

    #[test]
    fn image_rejects_bad_heights() {
        assert!(GrayImage::new(Grid::filled(2, 2, 0.0)).is_err());
        assert!(GrayImage::new(Grid::filled(2, 2, 1.5)).is_err());
        assert!(GrayImage::new(Grid::filled(0, 2, 0.5)).is_err());
        assert!(GrayImage::new(Grid::filled(2, 2, 1.0)).is_ok());
    }

    #[test]
    fn edge3d_dims() {
        assert_eq!(EdgeField3D::edge_dims([2, 3, 4], Axis::X), [3, 4, 4]);
        assert_eq!(EdgeField3D::edge_dims([2, 3, 4], Axis::Z), [2, 4, 5]);
    }

    #[test]
    fn permute_axes_moves_samples() {
        let g = Grid3::from_fn([2, 3, 4], |p| (p[0] * 100 + p[1] * 10 + p[2] + 1) as f64 / 1000.0);
        let v = VoxelVolume::new(g).unwrap();
        let p = v.permute_axes([2, 0, 1]);
        assert_eq!(p.dims(), [4, 2, 3]);
        assert_eq!(p.heights()[[3, 1, 2]], v.heights()[[1, 2, 3]]);
    }
}
