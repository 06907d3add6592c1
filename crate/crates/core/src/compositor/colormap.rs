use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::Rgb;

pub const DEFAULT_BINS: u32 = 8;

// Sequential tables are the published 256-entry definitions, each channel
// rounded to 8 bits. `paired` is the 12-color qualitative palette; binned
// maps resample their base table at k / (bins - 1).
const TURBO: &str = include_str!("../../data/turbo.lut");
const RAINBOW: &str = include_str!("../../data/rainbow.lut");
const NIPY_SPECTRAL: &str = include_str!("../../data/nipy_spectral.lut");
const PAIRED: &str = include_str!("../../data/paired.lut");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ColormapId {
    Turbo,
    Rainbow,
    Paired,
    NipySpectral,
}

impl ColormapId {
    pub const ALL: [ColormapId; 4] = [
        ColormapId::Turbo,
        ColormapId::Rainbow,
        ColormapId::Paired,
        ColormapId::NipySpectral,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ColormapId::Turbo => "turbo",
            ColormapId::Rainbow => "rainbow",
            ColormapId::Paired => "paired",
            ColormapId::NipySpectral => "nipy_spectral",
        }
    }

    pub fn kind(self) -> ColormapKind {
        match self {
            ColormapId::Turbo | ColormapId::Rainbow => ColormapKind::Sequential,
            ColormapId::Paired | ColormapId::NipySpectral => ColormapKind::Categorical,
        }
    }

    pub fn valid_names() -> String {
        Self::ALL.map(Self::name).join(", ")
    }
}

impl fmt::Display for ColormapId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ColormapId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        Self::ALL
            .into_iter()
            .find(|id| id.name() == norm)
            .ok_or_else(|| Error::UnknownColormap {
                name: s.to_owned(),
                valid: Self::valid_names(),
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ColormapKind {
    Sequential,
    Categorical,
}

fn parse_table(text: &str) -> Vec<Rgb> {
    text.lines()
        .map(|l| {
            let mut it = l
                .split(',')
                .map(|v| v.trim().parse::<u8>().expect("lut component"));
            Rgb([it.next().unwrap(), it.next().unwrap(), it.next().unwrap()])
        })
        .collect()
}

fn base_table(id: ColormapId) -> &'static [Rgb] {
    static TABLES: OnceLock<[Vec<Rgb>; 4]> = OnceLock::new();
    let tables = TABLES.get_or_init(|| {
        [
            parse_table(TURBO),
            parse_table(RAINBOW),
            parse_table(PAIRED),
            parse_table(NIPY_SPECTRAL),
        ]
    });
    &tables[id as usize]
}

/// A 256-entry color lookup table. Categorical maps additionally carry one
/// color per equal-width bin and their table is constant within each bin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Colormap {
    id: ColormapId,
    lut: [Rgb; 256],
    bin_colors: Vec<Rgb>,
}

impl Colormap {
    pub fn new(id: ColormapId) -> Self {
        Self::with_bins(id, DEFAULT_BINS).expect("default bin count is valid")
    }

    /// `bins` is ignored for sequential maps.
    pub fn with_bins(id: ColormapId, bins: u32) -> Result<Self> {
        let base = base_table(id);
        match id.kind() {
            ColormapKind::Sequential => {
                let mut lut = [Rgb::BLACK; 256];
                lut.copy_from_slice(base);
                Ok(Self {
                    id,
                    lut,
                    bin_colors: Vec::new(),
                })
            }
            ColormapKind::Categorical => {
                if !(2..=256).contains(&bins) {
                    return Err(Error::InvalidParams(format!(
                        "bins must be in 2..=256, got {bins}"
                    )));
                }
                let n = base.len();
                let bin_colors: Vec<Rgb> = (0..bins)
                    .map(|k| {
                        let pos = k as f64 / (bins - 1) as f64;
                        base[((pos * n as f64) as usize).min(n - 1)]
                    })
                    .collect();
                let mut lut = [Rgb::BLACK; 256];
                for (i, slot) in lut.iter_mut().enumerate() {
                    *slot = bin_colors[i * bins as usize / 256];
                }
                Ok(Self {
                    id,
                    lut,
                    bin_colors,
                })
            }
        }
    }

    pub fn id(&self) -> ColormapId {
        self.id
    }

    pub fn kind(&self) -> ColormapKind {
        self.id.kind()
    }

    pub fn lut(&self) -> &[Rgb; 256] {
        &self.lut
    }

    /// Number of bins; `None` for sequential maps.
    pub fn bins(&self) -> Option<u32> {
        match self.kind() {
            ColormapKind::Sequential => None,
            ColormapKind::Categorical => Some(self.bin_colors.len() as u32),
        }
    }

    pub fn bin_colors(&self) -> &[Rgb] {
        &self.bin_colors
    }

    /// Bin holding `w`; bin k spans [k/bins, (k+1)/bins) and 1.0 falls in the
    /// last bin.
    pub fn bin_index(&self, w: f64) -> usize {
        let bins = self.bin_colors.len();
        let w = w.clamp(0.0, 1.0);
        let nb = bins as f64;
        let mut k = ((w * nb).floor() as usize).min(bins - 1);
        // w * bins can land one ulp off an exact boundary k / bins.
        if k + 1 < bins && (k + 1) as f64 / nb <= w {
            k += 1;
        } else if k > 0 && k as f64 / nb > w {
            k -= 1;
        }
        k
    }

    pub fn apply(&self, w: f64) -> Rgb {
        let w = if w.is_nan() { 0.0 } else { w.clamp(0.0, 1.0) };
        match self.kind() {
            ColormapKind::Sequential => self.lut[lut_index(w)],
            ColormapKind::Categorical => self.bin_colors[self.bin_index(w)],
        }
    }
}

/// `round(w * 255)` with halves rounding up.
#[inline]
pub fn lut_index(w: f64) -> usize {
    ((w * 255.0 + 0.5).floor() as usize).min(255)
}

pub fn colormap_apply(cm: &Colormap, w: f64) -> Rgb {
    cm.apply(w)
}
