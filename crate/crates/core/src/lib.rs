//! Forman's combinatorial Ricci curvature and Laplacians on the cubical
//! complexes of grayscale images and voxel volumes.
//!
//! - [`complex`]: generic weighted cell complexes, evaluated by enumeration.
//! - [`planar`]: closed-form 2D kernels (Ric, □₁, B₁, □₂) and pixel maps.
//! - [`voxel`]: the 3D Ricci kernel.
//! - [`sampling`]: pixel subdivision and fusion.
//! - [`flow`]: explicit Ricci flow of edge weights.
//! - [`reference`]: classical Gaussian curvature and Laplacian.
//! - [`io`]: PGM/PNG/raw-volume input and CSV/raw/PGM output.
//! - [`verify`]: kernel-vs-oracle comparisons.

pub mod complex;
mod error;
pub mod flow;
mod grid;
pub mod io;
pub mod planar;
pub mod reference;
pub mod sampling;
pub mod verify;
pub mod voxel;
mod weights;

pub use error::{Error, Result};
pub use grid::{Axis, EdgeField, EdgeField3D, GrayImage, Grid, Grid3, PixelField, VoxelVolume};
pub use weights::{height_from_gray, EdgeRule3d, FaceRule3d, WeightScheme};
