//! Weight-over-image compositing, mask rendering and the point queries used
//! by hover readouts.

mod colormap;

use std::collections::BTreeSet;

pub use colormap::{colormap_apply, lut_index, Colormap, ColormapId, ColormapKind, DEFAULT_BINS};

use crate::error::Result;
use crate::model::{
    ensure_same_dims, CategoryId, CategoryTable, CompositeParams, LabelMap, Rgb, RgbImage,
    WeightField,
};

#[inline]
fn round_channel(v: f64) -> u8 {
    (v + 0.5).floor().clamp(0.0, 255.0) as u8
}

/// Composites the colormapped weight layer (opacity `alpha2`) over the image
/// (opacity `alpha1`) over opaque black:
/// `out = cm(w) * alpha2 + image * alpha1 * (1 - alpha2)`, rounded half-up.
pub fn superimpose(
    image: &RgbImage,
    weights: &WeightField,
    params: &CompositeParams,
) -> Result<RgbImage> {
    ensure_same_dims("superimpose", image.dims(), weights.dims())?;
    superimpose_with(image, weights, params, &Colormap::new(params.colormap()))
}

/// Same as [`superimpose`] with an explicit (possibly re-binned) colormap.
pub fn superimpose_with(
    image: &RgbImage,
    weights: &WeightField,
    params: &CompositeParams,
    cm: &Colormap,
) -> Result<RgbImage> {
    ensure_same_dims("superimpose", image.dims(), weights.dims())?;
    let a2 = params.alpha2();
    let image_scale = params.alpha1() * (1.0 - a2);
    let pixels = image
        .pixels()
        .iter()
        .zip(weights.weights())
        .map(|(px, &w)| {
            let c = cm.apply(w as f64);
            Rgb(std::array::from_fn(|ch| {
                round_channel(c.0[ch] as f64 * a2 + px.0[ch] as f64 * image_scale)
            }))
        })
        .collect();
    RgbImage::new(image.width(), image.height(), pixels)
}

/// Exact stored weight at `(x, y)`.
pub fn weight_at(w: &WeightField, x: u32, y: u32) -> Result<f32> {
    w.get(x, y)
}

pub fn category_at<'t>(
    m: &LabelMap,
    table: &'t CategoryTable,
    x: u32,
    y: u32,
) -> Result<(CategoryId, &'t str)> {
    let id = m.get(x, y)?;
    Ok((id, table.name(id)))
}

/// Palette-colors pixels of the selected categories; everything else,
/// including ignore pixels, stays black.
pub fn render_mask_rgb(
    m: &LabelMap,
    table: &CategoryTable,
    selected: &BTreeSet<CategoryId>,
) -> RgbImage {
    let mut palette = [Rgb::BLACK; 256];
    for &c in selected.iter().filter(|c| !c.is_ignore()) {
        palette[c.get() as usize] = table.color(c);
    }
    let pixels = m
        .labels()
        .iter()
        .map(|c| palette[c.get() as usize])
        .collect();
    RgbImage::new(m.width(), m.height(), pixels).expect("same dims as the label map")
}
