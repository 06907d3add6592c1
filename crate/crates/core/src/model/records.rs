use serde::Serialize;

use crate::compositor::ColormapId;
use crate::error::{Error, Result};
use crate::model::CategoryId;

/// One row of the dataset-wide mask table: a category present in an image's
/// given mask, its IoU against the prediction, and its pixel area.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaskRecord {
    pub image_id: String,
    pub category: CategoryId,
    pub iou_percent: f64,
    pub size_pixels: u64,
}

/// Per-image occupancy row. Occupancies are percentages of all image pixels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OccupancyRecord {
    pub image_id: String,
    pub category: CategoryId,
    pub given_occupancy_pct: f64,
    pub pred_occupancy_pct: f64,
    pub iou_percent: f64,
}

/// Opacities and colormap for superimposing a weight field on an image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompositeParams {
    alpha1: f64,
    alpha2: f64,
    colormap: ColormapId,
}

impl CompositeParams {
    pub const DEFAULT_ALPHA1: f64 = 1.0;
    pub const DEFAULT_ALPHA2: f64 = 0.5;

    /// `alpha1` is the image opacity, `alpha2` the weight-layer opacity; the
    /// image must stay visible, so `alpha1 > alpha2`.
    pub fn new(alpha1: f64, alpha2: f64, colormap: ColormapId) -> Result<Self> {
        if !alpha1.is_finite() || !alpha2.is_finite() {
            return Err(Error::InvalidParams("alphas must be finite".into()));
        }
        if !(alpha1 > 0.0 && alpha1 <= 1.0) {
            return Err(Error::InvalidParams(format!(
                "alpha1 {alpha1} not in (0, 1]"
            )));
        }
        if !(0.0..=1.0).contains(&alpha2) {
            return Err(Error::InvalidParams(format!(
                "alpha2 {alpha2} not in [0, 1]"
            )));
        }
        if alpha1 <= alpha2 {
            return Err(Error::InvalidParams(format!(
                "alpha1 ({alpha1}) must exceed alpha2 ({alpha2})"
            )));
        }
        Ok(Self {
            alpha1,
            alpha2,
            colormap,
        })
    }

    pub fn alpha1(&self) -> f64 {
        self.alpha1
    }

    pub fn alpha2(&self) -> f64 {
        self.alpha2
    }

    pub fn colormap(&self) -> ColormapId {
        self.colormap
    }
}

impl Default for CompositeParams {
    fn default() -> Self {
        Self {
            alpha1: Self::DEFAULT_ALPHA1,
            alpha2: Self::DEFAULT_ALPHA2,
            colormap: ColormapId::Turbo,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alpha_ordering_enforced() {
        assert!(CompositeParams::new(1.0, 0.5, ColormapId::Turbo).is_ok());
        assert!(CompositeParams::new(1.0, 0.999, ColormapId::Turbo).is_ok());
        assert!(CompositeParams::new(1.0, 1.0, ColormapId::Turbo).is_err());
        assert!(CompositeParams::new(0.3, 0.5, ColormapId::Turbo).is_err());
        assert!(CompositeParams::new(0.0, 0.0, ColormapId::Turbo).is_err());
        assert!(CompositeParams::new(1.5, 0.5, ColormapId::Turbo).is_err());
        assert!(CompositeParams::new(f64::NAN, 0.5, ColormapId::Turbo).is_err());
        assert!(CompositeParams::new(1.0, -0.1, ColormapId::Turbo).is_err());
    }
}
