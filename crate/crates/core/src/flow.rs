//! Explicit-Euler Ricci flow of edge weights, `dw(e)/dt = −2 Ric(e)`.
//!
//! Pixel weights are held at their initial values; only edges evolve.

use crate::error::{Error, Result};
use crate::grid::{EdgeField, GrayImage, PixelField};
use crate::planar::{edge_weights, pixel_weights, ricci_from_weights};
use crate::sampling::exact_sum;
use crate::weights::WeightScheme;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowConfig {
    pub dt: f64,
    pub steps: usize,
    /// Lower bound applied to every updated edge weight.
    pub floor: f64,
    /// Rescale after each step so the total edge weight stays at its initial value.
    pub renormalize: bool,
}

impl Default for FlowConfig {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            steps: 10,
            floor: 0.0,
            renormalize: false,
        }
    }
}

impl FlowConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidParameter(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.floor.is_finite() && self.floor >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "floor must be >= 0, got {}",
                self.floor
            )));
        }
        Ok(())
    }
}

/// One Euler step: `w'(e) = max(floor, w(e) − 2·dt·Ric(e))`.
pub fn flow_step(edges: &EdgeField, pixels: &PixelField, dt: f64, floor: f64) -> Result<EdgeField> {
    let ricci = ricci_from_weights(edges, pixels)?;
    edges.zip_with(&ricci, |w, r| (w - 2.0 * dt * r).max(floor))
}

fn total(field: &EdgeField) -> f64 {
    let values: Vec<f64> = field.values().collect();
    exact_sum(&values)
}

/// Runs `cfg.steps` flow steps from the image's edge weights. The returned
/// trace starts with the initial field and has `steps + 1` entries.
pub fn run_flow(image: &GrayImage, scheme: &WeightScheme, cfg: &FlowConfig) -> Result<Vec<EdgeField>> {
    scheme.validate()?;
    cfg.validate()?;
    let pixels = pixel_weights(image, scheme);
    let initial = edge_weights(image, scheme);
    let target = total(&initial);
    let mut trace = Vec::with_capacity(cfg.steps + 1);
    trace.push(initial);
    for _ in 0..cfg.steps {
        let mut next = flow_step(trace.last().expect("non-empty"), &pixels, cfg.dt, cfg.floor)?;
        if cfg.renormalize {
            let current = total(&next);
            if current > 0.0 && target > 0.0 {
                let scale = target / current;
                next = next.map(|w| (w * scale).max(cfg.floor));
            }
        }
        trace.push(next);
    }
    Ok(trace)
}
