use std::collections::HashMap;
use std::fmt;
use std::path::Path;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Number of evaluable categories.
pub const NUM_CATEGORIES: usize = 19;

/// Category registry shipped with the crate (Cityscapes trainId convention).
pub const DEFAULT_CATEGORY_CONFIG: &str = include_str!("../../data/categories.cfg");

/// A semantic category id: 0..=18 or the ignore label 255.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(transparent)]
pub struct CategoryId(u8);

impl CategoryId {
    pub const IGNORE: CategoryId = CategoryId(255);

    pub fn new(id: u32) -> Result<Self> {
        match id {
            0..=18 | 255 => Ok(CategoryId(id as u8)),
            _ => Err(Error::InvalidCategoryId(id)),
        }
    }

    /// Accepts a raw label byte as found in a label raster.
    #[inline]
    pub fn from_label(value: u8) -> Option<Self> {
        if (value as usize) < NUM_CATEGORIES || value == 255 {
            Some(CategoryId(value))
        } else {
            None
        }
    }

    #[inline]
    pub const fn get(self) -> u8 {
        self.0
    }

    #[inline]
    pub const fn is_ignore(self) -> bool {
        self.0 == 255
    }

    /// The 19 evaluable categories in id order.
    pub fn all() -> impl Iterator<Item = CategoryId> {
        (0..NUM_CATEGORIES as u8).map(CategoryId)
    }
}

impl fmt::Display for CategoryId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Serialize for CategoryId {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_u8(self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Rgb(pub [u8; 3]);

impl Rgb {
    pub const BLACK: Rgb = Rgb([0, 0, 0]);
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CategoryEntry {
    pub id: CategoryId,
    pub name: String,
    pub color: Rgb,
}

/// Names and palette colors for every category, loaded from a
/// `<id>,<name>,<r>,<g>,<b>` text config.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategoryTable {
    entries: Vec<CategoryEntry>,
    ignore: CategoryEntry,
    by_name: HashMap<String, CategoryId>,
}

impl CategoryTable {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<CategoryEntry> = Vec::with_capacity(NUM_CATEGORIES);
        let mut ignore = None;
        let mut by_name = HashMap::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let err = |message: String| Error::CategoryConfig { line, message };
            if raw.trim().is_empty() {
                continue;
            }
            let fields: Vec<&str> = raw.split(',').collect();
            if fields.len() != 5 {
                return Err(err(format!("expected 5 fields, got {}", fields.len())));
            }
            let id: u32 = fields[0]
                .parse()
                .map_err(|_| err(format!("bad id {:?}", fields[0])))?;
            let id = CategoryId::new(id).map_err(|e| err(e.to_string()))?;
            let name = fields[1].to_owned();
            if name.is_empty() {
                return Err(err("empty name".into()));
            }
            let mut color = [0u8; 3];
            for (c, f) in color.iter_mut().zip(&fields[2..]) {
                *c = f
                    .parse()
                    .map_err(|_| err(format!("bad color component {f:?}")))?;
            }
            if by_name.insert(name.clone(), id).is_some() {
                return Err(err(format!("duplicate name {name:?}")));
            }
            let entry = CategoryEntry {
                id,
                name,
                color: Rgb(color),
            };
            if id.is_ignore() {
                if ignore.replace(entry).is_some() {
                    return Err(err("duplicate ignore entry".into()));
                }
            } else {
                if entries.iter().any(|e| e.id == id) {
                    return Err(err(format!("duplicate id {id}")));
                }
                entries.push(entry);
            }
        }

        if entries.len() != NUM_CATEGORIES {
            return Err(Error::CategoryConfig {
                line: 0,
                message: format!(
                    "expected {NUM_CATEGORIES} categories, found {}",
                    entries.len()
                ),
            });
        }
        let ignore = ignore.unwrap_or_else(|| {
            by_name.insert("ignore".into(), CategoryId::IGNORE);
            CategoryEntry {
                id: CategoryId::IGNORE,
                name: "ignore".into(),
                color: Rgb::BLACK,
            }
        });
        entries.sort_by_key(|e| e.id);
        Ok(CategoryTable {
            entries,
            ignore,
            by_name,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    /// Serializes back to the config format; the ignore entry goes last.
    pub fn to_config_string(&self) -> String {
        let mut out = String::new();
        for e in self.entries.iter().chain(std::iter::once(&self.ignore)) {
            let [r, g, b] = e.color.0;
            out.push_str(&format!("{},{},{r},{g},{b}\n", e.id, e.name));
        }
        out
    }

    /// The 19 evaluable entries, ordered by id.
    pub fn entries(&self) -> &[CategoryEntry] {
        &self.entries
    }

    pub fn entry(&self, id: CategoryId) -> &CategoryEntry {
        if id.is_ignore() {
            &self.ignore
        } else {
            &self.entries[id.get() as usize]
        }
    }

    pub fn name(&self, id: CategoryId) -> &str {
        &self.entry(id).name
    }

    pub fn color(&self, id: CategoryId) -> Rgb {
        self.entry(id).color
    }

    pub fn category_by_name(&self, name: &str) -> Result<CategoryId> {
        self.by_name
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownCategory(name.to_owned()))
    }
}

impl Default for CategoryTable {
    fn default() -> Self {
        Self::parse(DEFAULT_CATEGORY_CONFIG).expect("shipped category config is valid")
    }
}
