//! Side-by-side evaluation of the closed-form kernels and the enumeration oracle.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{build_cubical_2d, build_cubical_3d, EpsilonConvention};
use crate::error::Result;
use crate::grid::{Axis, EdgeField3D, GrayImage, Grid, Grid3, VoxelVolume};
use crate::planar::edge_operators;
use crate::voxel::ricci_edges_3d;
use crate::weights::{height_from_gray, WeightScheme};

/// Largest absolute kernel-vs-oracle deviation per operator.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct PlanarDeviation {
    pub ricci: f64,
    pub box1: f64,
    pub box2: f64,
}

impl PlanarDeviation {
    pub fn max(&self) -> f64 {
        self.ricci.max(self.box1).max(self.box2)
    }

    fn merge(self, other: Self) -> Self {
        Self {
            ricci: self.ricci.max(other.ricci),
            box1: self.box1.max(other.box1),
            box2: self.box2.max(other.box2),
        }
    }
}

/// Compares Ric, □₁ and |□₂| on every edge of `image` with the generic formulas
/// evaluated on its cubical complex (oriented sign convention).
pub fn compare_planar(image: &GrayImage, scheme: &WeightScheme) -> Result<PlanarDeviation> {
    let ops = edge_operators(image, scheme)?;
    let (complex, map) = build_cubical_2d(image, scheme);
    let conv = EpsilonConvention::Oriented;
    let (h, w) = (image.height(), image.width());
    let mut dev = PlanarDeviation::default();
    let mut check = |edge, fast_ric: f64, fast_box1: f64, fast_box2: f64, pixels: Option<_>| -> Result<()> {
        let ric = complex.curvature_function(edge)?;
        let box1 = complex.laplacian_entry(edge, edge, conv)?;
        let box2 = match pixels {
            Some((a, b)) => complex.laplacian_entry(a, b, conv)?.abs(),
            None => 0.0,
        };
        dev.ricci = dev.ricci.max((ric - fast_ric).abs());
        dev.box1 = dev.box1.max((box1 - fast_box1).abs());
        dev.box2 = dev.box2.max((box2 - fast_box2).abs());
        Ok(())
    };
    for r in 0..=h {
        for j in 0..w {
            let edge = map.horizontal_edge(r, j).expect("lattice edge");
            let pixels =
                (r > 0 && r < h).then(|| (map.pixel(r - 1, j).expect("pixel"), map.pixel(r, j).expect("pixel")));
            check(
                edge,
                ops.ricci.horizontal()[(r, j)],
                ops.box1.horizontal()[(r, j)],
                ops.box2.horizontal()[(r, j)],
                pixels,
            )?;
        }
    }
    for i in 0..h {
        for c in 0..=w {
            let edge = map.vertical_edge(i, c).expect("lattice edge");
            let pixels =
                (c > 0 && c < w).then(|| (map.pixel(i, c - 1).expect("pixel"), map.pixel(i, c).expect("pixel")));
            check(
                edge,
                ops.ricci.vertical()[(i, c)],
                ops.box1.vertical()[(i, c)],
                ops.box2.vertical()[(i, c)],
                pixels,
            )?;
        }
    }
    Ok(dev)
}

/// Largest absolute deviation between the voxel kernel and the generic curvature.
pub fn compare_voxel(volume: &VoxelVolume, scheme: &WeightScheme) -> Result<f64> {
    let fast = ricci_edges_3d(volume, scheme)?;
    let (complex, map) = build_cubical_3d(volume, scheme);
    let mut dev: f64 = 0.0;
    for axis in Axis::ALL {
        let e = EdgeField3D::edge_dims(volume.dims(), axis);
        for z in 0..e[0] {
            for y in 0..e[1] {
                for x in 0..e[2] {
                    let id = map.edge(axis, [z, y, x]).expect("lattice edge");
                    let slow = complex.curvature_function(id)?;
                    dev = dev.max((slow - fast.family(axis)[[z, y, x]]).abs());
                }
            }
        }
    }
    Ok(dev)
}

/// Heights drawn uniformly from `(0, 1]`.
pub fn random_image(rng: &mut impl Rng, height: usize, width: usize) -> GrayImage {
    GrayImage::new(Grid::from_fn(height, width, |_, _| 1.0 - rng.gen::<f64>())).expect("heights in (0, 1]")
}

/// Heights from uniformly drawn 8-bit gray levels.
pub fn random_gray_image(rng: &mut impl Rng, height: usize, width: usize) -> GrayImage {
    GrayImage::new(Grid::from_fn(height, width, |_, _| height_from_gray(rng.gen()))).expect("heights in (0, 1]")
}

pub fn random_volume(rng: &mut impl Rng, dims: [usize; 3]) -> VoxelVolume {
    VoxelVolume::new(Grid3::from_fn(dims, |_| 1.0 - rng.gen::<f64>())).expect("heights in (0, 1]")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleReport {
    pub size: usize,
    pub trials: usize,
    pub deviation: PlanarDeviation,
}

/// Runs [`compare_planar`] on `trials` random `size×size` images with the
/// default weight scheme.
pub fn oracle_check(size: usize, trials: usize, seed: u64) -> Result<OracleReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let scheme = WeightScheme::default();
    let mut deviation = PlanarDeviation::default();
    for _ in 0..trials {
        let img = random_image(&mut rng, size.max(1), size.max(1));
        deviation = deviation.merge(compare_planar(&img, &scheme)?);
    }
    Ok(OracleReport {
        size,
        trials,
        deviation,
    })
}
