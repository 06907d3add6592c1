//! Shared domain types. Nothing in here touches the filesystem except
//! [`CategoryTable::load`].

mod category;
mod raster;
mod records;

pub use category::{
    CategoryEntry, CategoryId, CategoryTable, Rgb, DEFAULT_CATEGORY_CONFIG, NUM_CATEGORIES,
};
pub(crate) use raster::ensure_same_dims;
pub use raster::{LabelMap, RgbImage, WeightField};
pub use records::{CompositeParams, MaskRecord, OccupancyRecord};
