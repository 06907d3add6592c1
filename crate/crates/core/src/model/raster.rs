//! Row-major rasters with a top-left origin.

use crate::error::{Error, Result};
use crate::model::{CategoryId, Rgb};

fn check_len(width: u32, height: u32, found: usize) -> Result<()> {
    let expected = width as usize * height as usize;
    if expected != found {
        return Err(Error::RasterLength {
            width,
            height,
            expected,
            found,
        });
    }
    Ok(())
}

fn check_bounds(x: u32, y: u32, width: u32, height: u32) -> Result<usize> {
    if x >= width || y >= height {
        return Err(Error::OutOfBounds {
            x,
            y,
            width,
            height,
        });
    }
    Ok(y as usize * width as usize + x as usize)
}

pub(crate) fn ensure_same_dims(
    context: &str,
    expected: (u32, u32),
    found: (u32, u32),
) -> Result<()> {
    if expected != found {
        return Err(Error::DimensionMismatch {
            context: context.to_owned(),
            expected,
            found,
        });
    }
    Ok(())
}

/// Per-pixel category raster (a given or predicted mask).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelMap {
    width: u32,
    height: u32,
    labels: Vec<CategoryId>,
}

impl LabelMap {
    pub fn new(width: u32, height: u32, labels: Vec<CategoryId>) -> Result<Self> {
        check_len(width, height, labels.len())?;
        Ok(Self {
            width,
            height,
            labels,
        })
    }

    /// Validates raw label bytes; reports the first invalid value.
    pub fn from_raw(width: u32, height: u32, raw: &[u8]) -> Result<Self> {
        check_len(width, height, raw.len())?;
        let mut labels = Vec::with_capacity(raw.len());
        for (i, &v) in raw.iter().enumerate() {
            match CategoryId::from_label(v) {
                Some(c) => labels.push(c),
                None => {
                    return Err(Error::InvalidLabel {
                        value: v,
                        x: (i % width as usize) as u32,
                        y: (i / width as usize) as u32,
                    })
                }
            }
        }
        Ok(Self {
            width,
            height,
            labels,
        })
    }

    pub fn filled(width: u32, height: u32, c: CategoryId) -> Self {
        Self {
            width,
            height,
            labels: vec![c; width as usize * height as usize],
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn labels(&self) -> &[CategoryId] {
        &self.labels
    }

    pub fn to_raw(&self) -> Vec<u8> {
        self.labels.iter().map(|c| c.get()).collect()
    }

    pub fn get(&self, x: u32, y: u32) -> Result<CategoryId> {
        let i = check_bounds(x, y, self.width, self.height)?;
        Ok(self.labels[i])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RgbImage {
    width: u32,
    height: u32,
    pixels: Vec<Rgb>,
}

impl RgbImage {
    pub fn new(width: u32, height: u32, pixels: Vec<Rgb>) -> Result<Self> {
        check_len(width, height, pixels.len())?;
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    pub fn filled(width: u32, height: u32, color: Rgb) -> Self {
        Self {
            width,
            height,
            pixels: vec![color; width as usize * height as usize],
        }
    }

    pub fn from_raw(width: u32, height: u32, raw: &[u8]) -> Result<Self> {
        if raw.len() % 3 != 0 {
            return Err(Error::RasterLength {
                width,
                height,
                expected: width as usize * height as usize * 3,
                found: raw.len(),
            });
        }
        let pixels = raw
            .chunks_exact(3)
            .map(|p| Rgb([p[0], p[1], p[2]]))
            .collect();
        Self::new(width, height, pixels)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn pixels(&self) -> &[Rgb] {
        &self.pixels
    }

    pub fn to_raw(&self) -> Vec<u8> {
        self.pixels.iter().flat_map(|p| p.0).collect()
    }

    pub fn get(&self, x: u32, y: u32) -> Result<Rgb> {
        let i = check_bounds(x, y, self.width, self.height)?;
        Ok(self.pixels[i])
    }
}

/// Per-pixel saliency weights, always finite and within [0, 1].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightField {
    width: u32,
    height: u32,
    weights: Vec<f32>,
}

impl WeightField {
    /// Clamps every value into [0, 1]; rejects NaN and infinities.
    pub fn new(width: u32, height: u32, mut weights: Vec<f32>) -> Result<Self> {
        check_len(width, height, weights.len())?;
        for (i, w) in weights.iter_mut().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFiniteWeight(i));
            }
            *w = w.clamp(0.0, 1.0);
        }
        Ok(Self {
            width,
            height,
            weights,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn dims(&self) -> (u32, u32) {
        (self.width, self.height)
    }

    pub fn weights(&self) -> &[f32] {
        &self.weights
    }

    pub fn get(&self, x: u32, y: u32) -> Result<f32> {
        let i = check_bounds(x, y, self.width, self.height)?;
        Ok(self.weights[i])
    }
}
