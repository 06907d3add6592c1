//! Deterministic synthetic datasets with analytically known IoU.
//!
//! Each image is split into a 4x2 grid of cells. Every given category owns
//! one axis-aligned rectangle inside its own cell; the predicted mask holds
//! the same rectangle shifted right/down by a seeded offset that keeps it in
//! the cell, so per-category IoU only depends on the rectangle and its
//! shift. Everything outside the rectangles is the ignore label.
//!
//! Image 0 is a perfect prediction. In the other images `building` and `car`
//! are always present with shifts chosen so that IoU rises with size for
//! `building` and falls with size for `car`. Some images also get a
//! prediction-only rectangle in a free cell.

use std::path::{Path, PathBuf};

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::manifest::{
    load_manifest, write_manifest, DatasetManifest, ManifestFile, ManifestFileEntry, MANIFEST_FILE,
};
use crate::ingest::png_io::{write_label_map, write_rgb};
use crate::ingest::weights::write_weight_field;
use crate::model::{CategoryId, CategoryTable, LabelMap, Rgb, RgbImage, WeightField};

pub const FIXTURE_FILE: &str = "fixture.json";
pub const DEFAULT_FIXTURE_WIDTH: u32 = 1024;
pub const DEFAULT_FIXTURE_HEIGHT: u32 = 512;

const GRID_COLS: u32 = 4;
const GRID_ROWS: u32 = 2;
/// Category whose IoU grows with object size.
pub const POSITIVE_CATEGORY: u8 = 2;
/// Category whose IoU shrinks with object size.
pub const NEGATIVE_CATEGORY: u8 = 13;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixtureConfig {
    pub seed: u64,
    pub n_images: usize,
    pub width: u32,
    pub height: u32,
}

impl FixtureConfig {
    pub fn new(seed: u64, n_images: usize) -> Self {
        Self {
            seed,
            n_images,
            width: DEFAULT_FIXTURE_WIDTH,
            height: DEFAULT_FIXTURE_HEIGHT,
        }
    }

    pub fn with_size(mut self, width: u32, height: u32) -> Self {
        self.width = width;
        self.height = height;
        self
    }
}

/// One rectangle of a fixture image. `(x, y, w, h)` is the given-mask
/// rectangle; the prediction is the same rectangle moved by `(dx, dy)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureRect {
    pub category: u8,
    pub x: u32,
    pub y: u32,
    pub w: u32,
    pub h: u32,
    pub dx: u32,
    pub dy: u32,
    /// False for prediction-only rectangles.
    pub in_given: bool,
}

impl FixtureRect {
    pub fn area(&self) -> u64 {
        self.w as u64 * self.h as u64
    }

    /// IoU of the rectangle against its shifted copy, in percent.
    pub fn expected_iou_percent(&self) -> f64 {
        let inter = self.w.saturating_sub(self.dx) as u64 * self.h.saturating_sub(self.dy) as u64;
        let union = 2 * self.area() - inter;
        100.0 * inter as f64 / union as f64
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureImage {
    pub image_id: String,
    pub perfect: bool,
    pub rects: Vec<FixtureRect>,
}

/// Ground-truth geometry written next to the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureDescription {
    pub seed: u64,
    pub width: u32,
    pub height: u32,
    pub images: Vec<FixtureImage>,
}

impl FixtureDescription {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| Error::ManifestParse {
            path: path.to_owned(),
            message: e.to_string(),
        })
    }
}

pub fn generate_fixtures(
    seed: u64,
    n_images: usize,
    out_dir: impl AsRef<Path>,
) -> Result<DatasetManifest> {
    generate_fixtures_with(
        &FixtureConfig::new(seed, n_images),
        &CategoryTable::default(),
        out_dir,
    )
}

pub fn generate_fixtures_with(
    cfg: &FixtureConfig,
    table: &CategoryTable,
    out_dir: impl AsRef<Path>,
) -> Result<DatasetManifest> {
    let out = out_dir.as_ref();
    if cfg.width < 8 * GRID_COLS || cfg.height < 8 * GRID_ROWS {
        return Err(Error::InvalidParams(format!(
            "fixture size {}x{} too small (minimum {}x{})",
            cfg.width,
            cfg.height,
            8 * GRID_COLS,
            8 * GRID_ROWS
        )));
    }
    for sub in ["images", "given", "pred", "weights"] {
        mkdir(&out.join(sub))?;
    }

    let images: Vec<FixtureImage> = (0..cfg.n_images).map(|i| layout_image(cfg, i)).collect();

    images
        .par_iter()
        .try_for_each(|img| write_image(cfg, table, out, img))?;

    let entries = images
        .iter()
        .map(|img| ManifestFileEntry {
            image_id: img.image_id.clone(),
            image: format!("images/{}.png", img.image_id),
            given: format!("given/{}.png", img.image_id),
            pred: format!("pred/{}.png", img.image_id),
            weights: Some("weights".into()),
        })
        .collect();
    write_manifest(
        &ManifestFile {
            root: ".".into(),
            entries,
        },
        out.join(MANIFEST_FILE),
    )?;

    let desc = FixtureDescription {
        seed: cfg.seed,
        width: cfg.width,
        height: cfg.height,
        images,
    };
    let path = out.join(FIXTURE_FILE);
    let mut text = serde_json::to_string_pretty(&desc).expect("fixture serializes");
    text.push('\n');
    std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;

    load_manifest(out.join(MANIFEST_FILE))
}

fn mkdir(p: &Path) -> Result<()> {
    std::fs::create_dir_all(p).map_err(|e| Error::io(p, e))
}

fn image_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn layout_image(cfg: &FixtureConfig, index: usize) -> FixtureImage {
    let mut rng = image_rng(cfg.seed, index);
    let perfect = index == 0;
    let cell_w = cfg.width / GRID_COLS;
    let cell_h = cfg.height / GRID_ROWS;

    let n_given = rng.random_range(3..=6usize);
    let mut pool: Vec<u8> = (0..19u8)
        .filter(|&c| c != POSITIVE_CATEGORY && c != NEGATIVE_CATEGORY)
        .collect();
    pool.shuffle(&mut rng);
    let mut cats: Vec<u8> = if perfect {
        pool[..n_given].to_vec()
    } else {
        let mut v = vec![POSITIVE_CATEGORY, NEGATIVE_CATEGORY];
        v.extend_from_slice(&pool[..n_given - 2]);
        v
    };
    let mut cells: Vec<(u32, u32)> = (0..GRID_ROWS)
        .flat_map(|r| (0..GRID_COLS).map(move |c| (c * cell_w, r * cell_h)))
        .collect();
    cells.shuffle(&mut rng);

    let w_range = ((cell_w / 8).max(2), (cell_w * 45 / 100).max(2));
    let h_range = ((cell_h / 8).max(2), (cell_h * 8 / 10).max(2));
    let min_area = (w_range.0 * h_range.0) as f64;
    let max_area = (w_range.1 * h_range.1) as f64;

    let mut rects = Vec::with_capacity(cats.len() + 1);
    for (slot, &category) in cats.iter().enumerate() {
        let (cx, cy) = cells[slot];
        let w = rng.random_range(w_range.0..=w_range.1);
        let h = rng.random_range(h_range.0..=h_range.1);
        let x = cx + 1;
        let y = cy + rng.random_range(1..=(cell_h - h - 1).max(1));
        let room_y = (cy + cell_h).saturating_sub(y + h);

        let norm = (w as f64 * h as f64 - min_area) / (max_area - min_area);
        let (dx, dy) = if perfect {
            (0, 0)
        } else if category == POSITIVE_CATEGORY || category == NEGATIVE_CATEGORY {
            let base = if category == POSITIVE_CATEGORY {
                0.1 + 0.8 * norm
            } else {
                0.9 - 0.8 * norm
            };
            let target = (base + rng.random_range(-0.03..=0.03)).clamp(0.02, 1.0);
            // Horizontal shift of s gives IoU (w - s) / (w + s).
            let dx = (w as f64 * (1.0 - target) / (1.0 + target)).round() as u32;
            (dx.min(w), 0)
        } else {
            (
                rng.random_range(0..=w / 2),
                rng.random_range(0..=(h / 2).min(room_y)),
            )
        };
        rects.push(FixtureRect {
            category,
            x,
            y,
            w,
            h,
            dx,
            dy,
            in_given: true,
        });
    }

    if !perfect && cats.len() < cells.len() && rng.random_bool(0.5) {
        cats.sort_unstable();
        let spare: Vec<u8> = (0..19u8)
            .filter(|c| cats.binary_search(c).is_err())
            .collect();
        let &category = spare
            .choose(&mut rng)
            .expect("fewer than 19 categories used");
        let (cx, cy) = cells[rects.len()];
        let w = rng.random_range(w_range.0..=w_range.1);
        let h = rng.random_range(h_range.0..=h_range.1);
        rects.push(FixtureRect {
            category,
            x: cx + 1,
            y: cy + 1,
            w,
            h,
            dx: 0,
            dy: 0,
            in_given: false,
        });
    }

    FixtureImage {
        image_id: format!("img_{index:04}"),
        perfect,
        rects,
    }
}

fn paint(labels: &mut [CategoryId], width: u32, x: u32, y: u32, w: u32, h: u32, c: CategoryId) {
    for row in y..y + h {
        let start = (row * width + x) as usize;
        labels[start..start + w as usize].fill(c);
    }
}

fn write_image(
    cfg: &FixtureConfig,
    table: &CategoryTable,
    out: &Path,
    img: &FixtureImage,
) -> Result<()> {
    let (width, height) = (cfg.width, cfg.height);
    let n = (width * height) as usize;
    let mut given = vec![CategoryId::IGNORE; n];
    let mut pred = vec![CategoryId::IGNORE; n];
    let mut pixels: Vec<Rgb> = (0..height)
        .flat_map(|y| {
            (0..width).map(move |x| {
                let v = (40 + x * 80 / width + y * 60 / height) as u8;
                Rgb([v, v, v.saturating_add(10)])
            })
        })
        .collect();

    for r in &img.rects {
        let c = CategoryId::from_label(r.category).expect("fixture categories are valid");
        if r.in_given {
            paint(&mut given, width, r.x, r.y, r.w, r.h, c);
            let color = table.color(c);
            for row in r.y..r.y + r.h {
                let start = (row * width + r.x) as usize;
                pixels[start..start + r.w as usize].fill(color);
            }
        }
        paint(&mut pred, width, r.x + r.dx, r.y + r.dy, r.w, r.h, c);
    }

    let id = &img.image_id;
    write_rgb(
        &RgbImage::new(width, height, pixels)?,
        out.join(format!("images/{id}.png")),
    )?;
    write_label_map(
        &LabelMap::new(width, height, given)?,
        out.join(format!("given/{id}.png")),
    )?;
    write_label_map(
        &LabelMap::new(width, height, pred)?,
        out.join(format!("pred/{id}.png")),
    )?;

    for r in &img.rects {
        let c = CategoryId::from_label(r.category).expect("valid");
        let dir: PathBuf = out.join("weights").join(table.name(c));
        mkdir(&dir)?;
        let field = radial_bump(width, height, r);
        write_weight_field(&field, dir.join(format!("{id}.wgt")))?;
    }
    Ok(())
}

/// Gaussian bump centered on the rectangle, sigma = half its longer side.
fn radial_bump(width: u32, height: u32, r: &FixtureRect) -> WeightField {
    let cx = r.x as f64 + r.w as f64 / 2.0;
    let cy = r.y as f64 + r.h as f64 / 2.0;
    let sigma = 0.5 * r.w.max(r.h) as f64;
    let denom = 2.0 * sigma * sigma;
    let weights = (0..height)
        .flat_map(|y| {
            (0..width).map(move |x| {
                let ddx = x as f64 + 0.5 - cx;
                let ddy = y as f64 + 0.5 - cy;
                (-(ddx * ddx + ddy * ddy) / denom).exp() as f32
            })
        })
        .collect();
    WeightField::new(width, height, weights).expect("bump values are finite")
}
