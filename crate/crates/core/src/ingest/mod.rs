//! Dataset loading: manifests, PNG rasters, `WGT1` weight fields, resizing
//! and synthetic fixtures.

mod fixtures;
mod manifest;
mod png_io;
mod resize;
mod weights;

pub use fixtures::{
    generate_fixtures, generate_fixtures_with, FixtureConfig, FixtureDescription, FixtureImage,
    FixtureRect, DEFAULT_FIXTURE_HEIGHT, DEFAULT_FIXTURE_WIDTH, FIXTURE_FILE, NEGATIVE_CATEGORY,
    POSITIVE_CATEGORY,
};
pub use manifest::{
    load_manifest, write_manifest, DatasetManifest, ManifestEntry, ManifestFile, ManifestFileEntry,
    MANIFEST_FILE,
};
pub use png_io::{
    decode_label_map, decode_rgb, encode_label_map, encode_rgb, load_label_map, load_rgb,
    png_dimensions, write_label_map, write_rgb,
};
pub use resize::{resize_label_map, resize_rgb};
pub use weights::{
    decode_weight_field, encode_weight_field, load_weight_field, write_weight_field, WGT1_MAGIC,
};

use crate::error::Result;
use crate::model::LabelMap;

/// Working resolution as `(width, height)`.
pub type Resolution = (u32, u32);

/// Loads a mask and resamples it to `resolution` when given.
pub fn load_label_map_at(
    path: &std::path::Path,
    resolution: Option<Resolution>,
) -> Result<LabelMap> {
    let m = load_label_map(path)?;
    match resolution {
        Some((w, h)) if m.dims() != (w, h) => resize_label_map(&m, w, h),
        _ => Ok(m),
    }
}
