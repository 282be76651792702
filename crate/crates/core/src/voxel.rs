//! Ricci curvature on the edges of a voxel lattice.
//!
//! An edge `e0` has up to four square co-faces `c_i`; in each, the edge
//! opposite `e0` is `e_i`. With vertex weights 0,
//!
//! ```text
//! Ric(e0) = w(e0) [ w(e0) Σ 1/w(c_i) − √w(e0) Σ √w(e_i)/w(c_i) ]
//! ```
//!
//! Faces and edges are weighted from their incident voxels according to
//! [`FaceRule3d`] and [`EdgeRule3d`].

use crate::error::{Error, Result};
use crate::grid::{Axis, EdgeField3D, Grid3, VoxelVolume};
use crate::weights::{EdgeRule3d, FaceRule3d, WeightScheme};

/// Applies an edge rule to the heights of the voxels around an edge.
pub fn edge_weight_from_heights(heights: &[f64], rule: EdgeRule3d) -> f64 {
    if heights.len() < 2 {
        return 0.0;
    }
    match rule {
        EdgeRule3d::MaxMinusMin => {
            let max = heights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let min = heights.iter().copied().fold(f64::INFINITY, f64::min);
            max - min
        }
        EdgeRule3d::StdDev => {
            let n = heights.len() as f64;
            let mean = heights.iter().sum::<f64>() / n;
            (heights.iter().map(|h| (h - mean) * (h - mean)).sum::<f64>() / n).sqrt()
        }
    }
}

/// Applies a face rule to the heights of the one or two voxels sharing a face.
pub fn face_weight_from_heights(heights: &[f64], rule: FaceRule3d) -> f64 {
    match (rule, heights) {
        (_, []) => 0.0,
        (FaceRule3d::MeanHeight, hs) => hs.iter().sum::<f64>() / hs.len() as f64,
        (FaceRule3d::AbsDiff, [a, b]) => (a - b).abs(),
        (FaceRule3d::AbsDiff, _) => 0.0,
    }
}

/// Square-face values of a voxel lattice, one grid per face normal.
///
/// The grid for normal `c` has extent `n_c + 1` along `c` and `n_b` along the
/// other two axes.
#[derive(Debug, Clone, PartialEq)]
pub struct FaceField3D {
    families: [Grid3<f64>; 3],
}

impl FaceField3D {
    pub fn face_dims(dims: [usize; 3], normal: Axis) -> [usize; 3] {
        let mut f = dims;
        f[normal.index()] += 1;
        f
    }

    /// Every face of the `dims` lattice set to `value`.
    pub fn filled(dims: [usize; 3], value: f64) -> Self {
        Self {
            families: Axis::ALL.map(|n| Grid3::from_fn(Self::face_dims(dims, n), |_| value)),
        }
    }

    pub fn family(&self, normal: Axis) -> &Grid3<f64> {
        &self.families[normal.index()]
    }

    pub fn family_mut(&mut self, normal: Axis) -> &mut Grid3<f64> {
        &mut self.families[normal.index()]
    }
}

/// Heights of the in-range voxels `p + δ` for `δ ∈ {−1, 0}` along each axis in `free`.
fn around(volume: &VoxelVolume, p: [usize; 3], free: &[usize]) -> Vec<f64> {
    let dims = volume.dims();
    let mut out = Vec::with_capacity(4);
    for bits in 0..1usize << free.len() {
        let mut q = p;
        let mut inside = true;
        for (k, &a) in free.iter().enumerate() {
            if bits >> k & 1 == 1 {
                match q[a].checked_sub(1) {
                    Some(v) => q[a] = v,
                    None => inside = false,
                }
            }
            inside &= q[a] < dims[a];
        }
        if inside {
            out.push(volume.heights()[q]);
        }
    }
    out
}

fn others(a: usize) -> [usize; 2] {
    match a {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    }
}

pub fn edge_weights_3d(volume: &VoxelVolume, scheme: &WeightScheme) -> EdgeField3D {
    let dims = volume.dims();
    let length = scheme.dimension_factor(1, dims.into_iter().max().unwrap_or(1));
    let mut field = EdgeField3D::zeros(dims);
    for axis in Axis::ALL {
        let free = others(axis.index());
        let grid = Grid3::from_fn(EdgeField3D::edge_dims(dims, axis), |p| {
            length * edge_weight_from_heights(&around(volume, p, &free), scheme.edge_rule_3d)
        });
        *field.family_mut(axis) = grid;
    }
    field
}

pub fn face_weights_3d(volume: &VoxelVolume, scheme: &WeightScheme) -> FaceField3D {
    let dims = volume.dims();
    let area = scheme.dimension_factor(2, dims.into_iter().max().unwrap_or(1));
    let families = Axis::ALL.map(|normal| {
        let free = [normal.index()];
        Grid3::from_fn(FaceField3D::face_dims(dims, normal), |p| {
            area * face_weight_from_heights(&around(volume, p, &free), scheme.face_rule_3d)
        })
    });
    FaceField3D { families }
}

/// Ricci curvature of every lattice edge from explicit edge and face weights.
pub fn ricci_3d_from_weights(edges: &EdgeField3D, faces: &FaceField3D) -> Result<EdgeField3D> {
    let dims = edges.dims();
    for normal in Axis::ALL {
        if faces.family(normal).dims() != FaceField3D::face_dims(dims, normal) {
            return Err(Error::Shape(format!(
                "face grid {:?} does not match volume {dims:?}",
                faces.family(normal).dims()
            )));
        }
    }
    let mut out = EdgeField3D::zeros(dims);
    for axis in Axis::ALL {
        let a = axis.index();
        let weights = edges.family(axis);
        let edims = weights.dims();
        let mut result = Grid3::from_vec(edims, vec![0.0; edims.iter().product()])?;
        for z in 0..edims[0] {
            for y in 0..edims[1] {
                for x in 0..edims[2] {
                    let p = [z, y, x];
                    let w0 = weights[p];
                    if w0 == 0.0 {
                        continue;
                    }
                    let (mut self_sum, mut cross_sum) = (0.0, 0.0);
                    for b in others(a) {
                        // the square spanning {a, b} has the remaining axis as normal
                        let normal = Axis::from_index(3 - a - b);
                        let squares = faces.family(normal);
                        let mut sides = [None, None];
                        if p[b] > 0 {
                            let mut q = p;
                            q[b] -= 1;
                            sides[0] = Some((q, q));
                        }
                        if p[b] < dims[b] {
                            let mut opp = p;
                            opp[b] += 1;
                            sides[1] = Some((p, opp));
                        }
                        for (anchor, opposite) in sides.into_iter().flatten() {
                            let wc = squares[anchor];
                            if wc.is_nan() || wc <= 0.0 {
                                return Err(Error::NonPositiveWeight {
                                    what: "face",
                                    weight: wc,
                                    location: format!("{normal:?}-normal face at {anchor:?}"),
                                });
                            }
                            self_sum += w0 / wc;
                            cross_sum += (w0 * weights[opposite]).sqrt() / wc;
                        }
                    }
                    result[p] = w0 * (self_sum - cross_sum);
                }
            }
        }
        *out.family_mut(axis) = result;
    }
    Ok(out)
}

/// Like the planar kernel, evaluates with `w1 = 1` and scales the result.
pub fn ricci_edges_3d(volume: &VoxelVolume, scheme: &WeightScheme) -> Result<EdgeField3D> {
    scheme.validate()?;
    let unit = scheme.with_w1(1.0);
    let mut ric = ricci_3d_from_weights(&edge_weights_3d(volume, &unit), &face_weights_3d(volume, &unit))?;
    if scheme.w1 != 1.0 {
        for axis in Axis::ALL {
            *ric.family_mut(axis) = ric.family(axis).map(|v| scheme.w1 * v);
        }
    }
    Ok(ric)
}
