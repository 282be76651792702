//! Cubical complexes of pixel and voxel lattices.
//!
//! Cells are elementary cubes: an anchor vertex plus the set of axes along which
//! the cell extends. The boundary of a cell extending along axes `a_0 < a_1 < …`
//! is `Σ_k (−1)^k s(a_k) (upper face along a_k − lower face along a_k)`, where
//! `s(a) = −1` for reversed axes and `+1` otherwise. Any choice of reversed axes
//! keeps `∂∂ = 0`.

use std::collections::HashMap;

use super::{CellComplex, CellId, ComplexBuilder};
use crate::grid::{Axis, GrayImage, VoxelVolume};
use crate::voxel::{edge_weight_from_heights, face_weight_from_heights};
use crate::weights::WeightScheme;

type Key<const N: usize> = ([usize; N], u8);

fn build_lattice<const N: usize>(
    shape: [usize; N],
    reversed: [bool; N],
    mut weight: impl FnMut([usize; N], u8) -> f64,
) -> (CellComplex, HashMap<Key<N>, CellId>) {
    let mut builder = ComplexBuilder::new();
    let mut index: HashMap<Key<N>, CellId> = HashMap::new();
    let mut masks: Vec<u8> = (0..1u8 << N).collect();
    masks.sort_by_key(|m| m.count_ones());
    for mask in masks {
        let extent: [usize; N] = std::array::from_fn(|a| if mask >> a & 1 == 1 { shape[a] } else { shape[a] + 1 });
        let total: usize = extent.iter().product();
        for flat in 0..total {
            // last axis varies fastest
            let mut anchor = [0usize; N];
            let mut rem = flat;
            for a in (0..N).rev() {
                anchor[a] = rem % extent[a];
                rem /= extent[a];
            }
            let mut faces = Vec::with_capacity(2 * mask.count_ones() as usize);
            let mut k = 0;
            for a in 0..N {
                if mask >> a & 1 == 0 {
                    continue;
                }
                let base: i8 = if k % 2 == 0 { 1 } else { -1 };
                let s = if reversed[a] { -base } else { base };
                let sub = mask & !(1 << a);
                let mut upper = anchor;
                upper[a] += 1;
                faces.push((index[&(anchor, sub)], -s));
                faces.push((index[&(upper, sub)], s));
                k += 1;
            }
            let w = weight(anchor, mask);
            let dim = mask.count_ones() as usize;
            let id = builder.add_cell(dim, w, &faces).expect("lattice cells are well formed");
            index.insert((anchor, mask), id);
        }
    }
    (builder.build(), index)
}

/// Lattice coordinates ↔ cell ids for the complex of an `H×W` image.
///
/// Internally the lattice axes are `(column, row)` with the row axis reversed,
/// so every pixel is oriented counterclockwise as displayed (rows grow downward)
/// and an interior edge has incidence `+1` in its upper (horizontal edge) or
/// left (vertical edge) pixel.
#[derive(Debug, Clone)]
pub struct CubicalMap2d {
    height: usize,
    width: usize,
    index: HashMap<Key<2>, CellId>,
}

impl CubicalMap2d {
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn pixel(&self, i: usize, j: usize) -> Option<CellId> {
        self.index.get(&([j, i], 0b11)).copied()
    }

    /// Horizontal edge on row line `r ∈ 0..=H`, column `j`.
    pub fn horizontal_edge(&self, r: usize, j: usize) -> Option<CellId> {
        self.index.get(&([j, r], 0b01)).copied()
    }

    /// Vertical edge on column line `c ∈ 0..=W`, row `i`.
    pub fn vertical_edge(&self, i: usize, c: usize) -> Option<CellId> {
        self.index.get(&([c, i], 0b10)).copied()
    }

    pub fn vertex(&self, r: usize, c: usize) -> Option<CellId> {
        self.index.get(&([c, r], 0)).copied()
    }
}

/// Builds the weighted square-tiling complex of an image.
///
/// Pixels weigh `w1·w2²·h`, interior edges `w1·w2·|h_α − h_β|`, border edges
/// and vertices 0.
pub fn build_cubical_2d(image: &GrayImage, scheme: &WeightScheme) -> (CellComplex, CubicalMap2d) {
    let (h, w) = (image.height(), image.width());
    let ext = h.max(w);
    let area = scheme.dimension_factor(2, ext);
    let length = scheme.dimension_factor(1, ext);
    let (complex, index) = build_lattice([w, h], [false, true], |[x, y], mask| match mask {
        0b11 => area * image.at(y, x),
        0b01 if y > 0 && y < h => length * (image.at(y - 1, x) - image.at(y, x)).abs(),
        0b10 if x > 0 && x < w => length * (image.at(y, x - 1) - image.at(y, x)).abs(),
        _ => 0.0,
    });
    (
        complex,
        CubicalMap2d {
            height: h,
            width: w,
            index,
        },
    )
}

/// Lattice coordinates ↔ cell ids for the complex of a `D×H×W` volume.
///
/// Positions are `[z, y, x]` anchors: the lowest-corner vertex of the cell.
#[derive(Debug, Clone)]
pub struct CubicalMap3d {
    dims: [usize; 3],
    index: HashMap<Key<3>, CellId>,
}

impl CubicalMap3d {
    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn voxel(&self, p: [usize; 3]) -> Option<CellId> {
        self.index.get(&(p, 0b111)).copied()
    }

    /// Edge running along `axis` from vertex `p`.
    pub fn edge(&self, axis: Axis, p: [usize; 3]) -> Option<CellId> {
        self.index.get(&(p, 1 << axis.index())).copied()
    }

    /// Square face with normal `normal`, anchored at vertex `p`.
    pub fn face(&self, normal: Axis, p: [usize; 3]) -> Option<CellId> {
        self.index.get(&(p, 0b111 & !(1 << normal.index()))).copied()
    }

    pub fn vertex(&self, p: [usize; 3]) -> Option<CellId> {
        self.index.get(&(p, 0)).copied()
    }
}

/// Voxels incident to the cell anchored at `p` with extent mask `mask`: offsets
/// of `−1` or `0` along every axis the cell does not extend in.
fn incident_heights(volume: &VoxelVolume, p: [usize; 3], mask: u8) -> Vec<f64> {
    let dims = volume.dims();
    let free: Vec<usize> = (0..3).filter(|a| mask >> a & 1 == 0).collect();
    let mut out = Vec::with_capacity(1 << free.len());
    'combo: for bits in 0..1u8 << free.len() {
        let mut q = p;
        for (k, &a) in free.iter().enumerate() {
            if bits >> k & 1 == 1 {
                if q[a] == 0 {
                    continue 'combo;
                }
                q[a] -= 1;
            }
            if q[a] >= dims[a] {
                continue 'combo;
            }
        }
        out.push(volume.heights()[q]);
    }
    out
}

/// Builds the weighted cubical complex of a voxel volume.
///
/// Voxels weigh `w1·w2³·h`; faces and edges follow the scheme's 3D rules
/// applied to their incident voxels; vertices weigh 0.
pub fn build_cubical_3d(volume: &VoxelVolume, scheme: &WeightScheme) -> (CellComplex, CubicalMap3d) {
    let dims = volume.dims();
    let ext = dims.into_iter().max().unwrap_or(1);
    let (complex, index) = build_lattice(dims, [false; 3], |p, mask| match mask.count_ones() {
        3 => scheme.dimension_factor(3, ext) * volume.heights()[p],
        2 => {
            scheme.dimension_factor(2, ext)
                * face_weight_from_heights(&incident_heights(volume, p, mask), scheme.face_rule_3d)
        }
        1 => {
            scheme.dimension_factor(1, ext)
                * edge_weight_from_heights(&incident_heights(volume, p, mask), scheme.edge_rule_3d)
        }
        _ => 0.0,
    });
    (complex, CubicalMap3d { dims, index })
}
