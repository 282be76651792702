//! Standard weights `w(α^p) = w1 · w2^p` and the rules mapping image content to cell weights.

use crate::error::{Error, Result};

/// Maps an 8-bit gray level to a strictly positive height, `g ↦ (g + 1) / 256`.
#[inline]
pub fn height_from_gray(g: u8) -> f64 {
    (f64::from(g) + 1.0) / 256.0
}

/// How an edge of a voxel lattice is weighted from its (up to four) incident voxels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeRule3d {
    /// Spread `max − min` of the incident heights.
    #[default]
    MaxMinusMin,
    /// Population standard deviation of the incident heights.
    StdDev,
}

/// How a square face of a voxel lattice is weighted from its (one or two) incident voxels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FaceRule3d {
    /// Mean incident height.
    #[default]
    MeanHeight,
    /// `|h_a − h_b|` across the face; zero on the volume border.
    AbsDiff,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightScheme {
    /// Global factor `w1`.
    pub w1: f64,
    /// Per-dimension factor `w2`; `None` means `1 / max(extent)` of the input.
    pub w2: Option<f64>,
    pub edge_rule_3d: EdgeRule3d,
    pub face_rule_3d: FaceRule3d,
}

impl Default for WeightScheme {
    fn default() -> Self {
        Self {
            w1: 1.0,
            w2: None,
            edge_rule_3d: EdgeRule3d::default(),
            face_rule_3d: FaceRule3d::default(),
        }
    }
}

impl WeightScheme {
    pub fn new(w1: f64, w2: Option<f64>) -> Result<Self> {
        let scheme = Self {
            w1,
            w2,
            ..Self::default()
        };
        scheme.validate()?;
        Ok(scheme)
    }

    /// `w1 = w2 = 1`: weights are the raw heights and height differences.
    pub fn unit() -> Self {
        Self {
            w1: 1.0,
            w2: Some(1.0),
            ..Self::default()
        }
    }

    pub fn with_w1(self, w1: f64) -> Self {
        Self { w1, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.w1.is_finite() && self.w1 > 0.0) {
            return Err(Error::InvalidParameter(format!("w1 must be > 0, got {}", self.w1)));
        }
        if let Some(w2) = self.w2 {
            if !(w2.is_finite() && w2 > 0.0) {
                return Err(Error::InvalidParameter(format!("w2 must be > 0, got {w2}")));
            }
        }
        Ok(())
    }

    /// The `w2` in effect for an input whose largest extent is `max_extent`.
    pub fn resolved_w2(&self, max_extent: usize) -> f64 {
        self.w2.unwrap_or(1.0 / max_extent.max(1) as f64)
    }

    /// `w1 · w2^p` for a cell of dimension `p`.
    pub fn dimension_factor(&self, p: u32, max_extent: usize) -> f64 {
        self.w1 * self.resolved_w2(max_extent).powi(p as i32)
    }
}
