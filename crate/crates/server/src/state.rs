use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use segscope_core::compositor::{superimpose, ColormapId};
use segscope_core::ingest::{
    encode_rgb, load_label_map_at, load_rgb, load_weight_field, DatasetManifest, ManifestEntry,
    Resolution,
};
use segscope_core::metrics::{build_dataset_tables, MaskTable};
use segscope_core::{
    CategoryId, CategoryTable, CompositeParams, LabelMap, OccupancyRecord, WeightField,
};

use crate::cache::FillCache;
use crate::error::ApiError;

#[derive(Debug, Clone)]
pub struct ServerConfig {
    /// Masks are resampled to this size before counting and hover lookups.
    pub resolution: Option<Resolution>,
    pub cache_capacity: usize,
}

impl Default for ServerConfig {
    fn default() -> Self {
        Self {
            resolution: None,
            cache_capacity: 256,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Which {
    Given,
    Pred,
}

impl FromStr for Which {
    type Err = ApiError;

    fn from_str(s: &str) -> Result<Self, ApiError> {
        match s {
            "given" => Ok(Which::Given),
            "pred" => Ok(Which::Pred),
            other => Err(ApiError::bad_request(format!(
                "which must be \"given\" or \"pred\", got {other:?}"
            ))),
        }
    }
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Which::Given => "given",
            Which::Pred => "pred",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct CompositeKey {
    image_id: String,
    category: CategoryId,
    colormap: ColormapId,
    alpha1: u64,
    alpha2: u64,
}

/// Everything the API serves. Tables are computed once at startup; rasters
/// load lazily through bounded caches.
pub struct SessionState {
    pub categories: CategoryTable,
    pub manifest: DatasetManifest,
    pub mask_table: MaskTable,
    pub occupancy: BTreeMap<String, Vec<OccupancyRecord>>,
    resolution: Option<Resolution>,
    composites: FillCache<CompositeKey, Vec<u8>>,
    masks: FillCache<(String, Which), LabelMap>,
    weights: FillCache<(String, CategoryId), WeightField>,
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> segscope_core::Result<T> + Send + 'static,
) -> Result<T, ApiError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::internal(format!("worker failed: {e}")))?
        .map_err(ApiError::from)
}

impl SessionState {
    pub fn build(
        manifest: DatasetManifest,
        categories: CategoryTable,
        config: &ServerConfig,
    ) -> segscope_core::Result<Self> {
        let tables = build_dataset_tables(&manifest, config.resolution)?;
        Ok(Self {
            categories,
            manifest,
            mask_table: tables.mask_table,
            occupancy: tables.occupancy,
            resolution: config.resolution,
            composites: FillCache::new(config.cache_capacity),
            masks: FillCache::new(config.cache_capacity),
            weights: FillCache::new(config.cache_capacity),
        })
    }

    pub fn entry(&self, image_id: &str) -> Result<&ManifestEntry, ApiError> {
        self.manifest
            .entry(image_id)
            .ok_or_else(|| ApiError::not_found(format!("unknown image {image_id:?}")))
    }

    pub fn category(&self, name: &str) -> Result<CategoryId, ApiError> {
        self.categories
            .category_by_name(name)
            .map_err(|_| ApiError::not_found(format!("unknown category {name:?}")))
    }

    pub async fn mask(&self, image_id: &str, which: Which) -> Result<Arc<LabelMap>, ApiError> {
        let entry = self.entry(image_id)?;
        let path = match which {
            Which::Given => entry.given_mask_path.clone(),
            Which::Pred => entry.pred_mask_path.clone(),
        };
        let resolution = self.resolution;
        self.masks
            .get_or_try_fill((image_id.to_owned(), which), || {
                blocking(move || load_label_map_at(&path, resolution))
            })
            .await
    }

    pub async fn weight_field(
        &self,
        image_id: &str,
        category: CategoryId,
    ) -> Result<Arc<WeightField>, ApiError> {
        let entry = self.entry(image_id)?;
        let path = entry
            .weight_path(&self.categories, category)
            .ok_or_else(|| {
                ApiError::not_found(format!("image {image_id:?} has no weight fields"))
            })?;
        if !path.is_file() {
            return Err(ApiError::not_found(format!(
                "no weight field for {:?} in image {image_id:?}",
                self.categories.name(category)
            )));
        }
        self.weights
            .get_or_try_fill((image_id.to_owned(), category), || {
                blocking(move || load_weight_field(&path))
            })
            .await
    }

    /// PNG bytes of the superimposed view; identical requests share one render.
    pub async fn composite(
        &self,
        image_id: &str,
        category: CategoryId,
        params: CompositeParams,
    ) -> Result<Arc<Vec<u8>>, ApiError> {
        let entry = self.entry(image_id)?;
        let key = CompositeKey {
            image_id: image_id.to_owned(),
            category,
            colormap: params.colormap(),
            alpha1: params.alpha1().to_bits(),
            alpha2: params.alpha2().to_bits(),
        };
        let weights = self.weight_field(image_id, category).await?;
        let image_path = entry.image_path.clone();
        self.composites
            .get_or_try_fill(key, || {
                blocking(move || {
                    let image = load_rgb(&image_path)?;
                    encode_rgb(&superimpose(&image, &weights, &params)?)
                })
            })
            .await
    }

    pub fn cached_composites(&self) -> usize {
        self.composites.len()
    }
}
