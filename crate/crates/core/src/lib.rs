//! Analysis engine relating class-imbalance statistics of segmentation
//! datasets to per-class model performance.
//!
//! * [`model`]: categories, label maps, images, weight fields and table rows.
//! * [`ingest`]: manifests, PNG and `WGT1` I/O, resizing, synthetic fixtures.
//! * [`metrics`]: IoU, object sizes, the mask table and occupancy records.
//! * [`compositor`]: colormaps, weight superimposition and mask rendering.
//! * [`analytics`]: correlations, scatter series, occlusion and scoring.

pub mod analytics;
pub mod compositor;
pub mod error;
pub mod ingest;
pub mod metrics;
pub mod model;

pub use error::{Error, Result};
pub use model::{
    CategoryEntry, CategoryId, CategoryTable, CompositeParams, LabelMap, MaskRecord,
    OccupancyRecord, Rgb, RgbImage, WeightField,
};
