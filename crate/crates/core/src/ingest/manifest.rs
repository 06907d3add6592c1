use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::png_io::png_dimensions;
use crate::model::{CategoryId, CategoryTable};

pub const MANIFEST_FILE: &str = "manifest.json";

/// On-disk manifest. Paths are relative to `root`; a relative `root` is
/// resolved against the manifest file's directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestFile {
    pub root: String,
    pub entries: Vec<ManifestFileEntry>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestFileEntry {
    pub image_id: String,
    pub image: String,
    pub given: String,
    pub pred: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub image_id: String,
    pub image_path: PathBuf,
    pub given_mask_path: PathBuf,
    pub pred_mask_path: PathBuf,
    pub weight_dir_path: Option<PathBuf>,
}

impl ManifestEntry {
    /// `<weights>/<category name>/<image_id>.wgt`, if the entry has weights.
    pub fn weight_path(&self, table: &CategoryTable, category: CategoryId) -> Option<PathBuf> {
        self.weight_dir_path.as_ref().map(|dir| {
            dir.join(table.name(category))
                .join(format!("{}.wgt", self.image_id))
        })
    }
}

/// A validated dataset manifest with absolute entry paths.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatasetManifest {
    pub root: PathBuf,
    pub entries: Vec<ManifestEntry>,
}

impl DatasetManifest {
    pub fn entry(&self, image_id: &str) -> Option<&ManifestEntry> {
        self.entries.iter().find(|e| e.image_id == image_id)
    }

    /// Resolves the raw file against `base` and checks ids, file presence
    /// and mask dimensions.
    pub fn from_file(file: ManifestFile, base: &Path) -> Result<Self> {
        let root = base.join(&file.root);
        let mut seen = HashSet::new();
        let mut entries = Vec::with_capacity(file.entries.len());
        for e in file.entries {
            if !seen.insert(e.image_id.clone()) {
                return Err(Error::DuplicateImageId(e.image_id));
            }
            let entry = ManifestEntry {
                image_path: root.join(&e.image),
                given_mask_path: root.join(&e.given),
                pred_mask_path: root.join(&e.pred),
                weight_dir_path: e.weights.as_ref().map(|w| root.join(w)),
                image_id: e.image_id,
            };
            validate_entry(&entry).map_err(|err| err.in_entry(&entry.image_id))?;
            entries.push(entry);
        }
        Ok(Self { root, entries })
    }
}

fn validate_entry(e: &ManifestEntry) -> Result<()> {
    if let Some(dir) = &e.weight_dir_path {
        if !dir.is_dir() {
            return Err(Error::MissingFile(dir.clone()));
        }
    }
    let image_dims = png_dimensions(&e.image_path)?;
    for (label, path) in [
        ("given mask", &e.given_mask_path),
        ("pred mask", &e.pred_mask_path),
    ] {
        let dims = png_dimensions(path)?;
        if dims != image_dims {
            return Err(Error::DimensionMismatch {
                context: format!("{} {label}", e.image_id),
                expected: image_dims,
                found: dims,
            });
        }
    }
    Ok(())
}

pub fn load_manifest(path: impl AsRef<Path>) -> Result<DatasetManifest> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
        std::io::ErrorKind::NotFound => Error::MissingFile(path.to_owned()),
        _ => Error::io(path, e),
    })?;
    let file: ManifestFile = serde_json::from_str(&text).map_err(|e| Error::ManifestParse {
        path: path.to_owned(),
        message: e.to_string(),
    })?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    DatasetManifest::from_file(file, base)
}

pub fn write_manifest(file: &ManifestFile, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(file).expect("manifest serializes");
    text.push('\n');
    std::fs::write(path, text).map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::png_io::{write_label_map, write_rgb};
    use crate::model::{LabelMap, Rgb, RgbImage};

    fn write_entry(dir: &Path, id: &str, img: (u32, u32), pred: (u32, u32)) -> ManifestFileEntry {
        write_rgb(
            &RgbImage::filled(img.0, img.1, Rgb([1, 2, 3])),
            dir.join(format!("{id}.png")),
        )
        .unwrap();
        write_label_map(
            &LabelMap::filled(img.0, img.1, CategoryId::IGNORE),
            dir.join(format!("{id}_g.png")),
        )
        .unwrap();
        write_label_map(
            &LabelMap::filled(pred.0, pred.1, CategoryId::IGNORE),
            dir.join(format!("{id}_p.png")),
        )
        .unwrap();
        ManifestFileEntry {
            image_id: id.into(),
            image: format!("{id}.png"),
            given: format!("{id}_g.png"),
            pred: format!("{id}_p.png"),
            weights: None,
        }
    }

    #[test]
    fn loads_entries() {
        let dir = tempfile::tempdir().unwrap();
        let entries = (0..3)
            .map(|i| write_entry(dir.path(), &format!("im{i}"), (8, 4), (8, 4)))
            .collect();
        let p = dir.path().join(MANIFEST_FILE);
        write_manifest(
            &ManifestFile {
                root: ".".into(),
                entries,
            },
            &p,
        )
        .unwrap();
        let m = load_manifest(&p).unwrap();
        assert_eq!(m.entries.len(), 3);
        assert!(m.entry("im1").is_some());
    }

    #[test]
    fn missing_mask() {
        let dir = tempfile::tempdir().unwrap();
        let e = write_entry(dir.path(), "a", (8, 4), (8, 4));
        std::fs::remove_file(dir.path().join("a_p.png")).unwrap();
        let p = dir.path().join(MANIFEST_FILE);
        write_manifest(
            &ManifestFile {
                root: ".".into(),
                entries: vec![e],
            },
            &p,
        )
        .unwrap();
        let err = load_manifest(&p).unwrap_err();
        assert!(
            matches!(err.root_cause(), Error::MissingFile(f) if f.ends_with("a_p.png")),
            "{err}"
        );
    }

    #[test]
    fn dimension_mismatch_names_entry() {
        let dir = tempfile::tempdir().unwrap();
        let e = write_entry(dir.path(), "city_0", (1024, 512), (512, 256));
        let p = dir.path().join(MANIFEST_FILE);
        write_manifest(
            &ManifestFile {
                root: ".".into(),
                entries: vec![e],
            },
            &p,
        )
        .unwrap();
        let err = load_manifest(&p).unwrap_err();
        assert!(err.to_string().contains("city_0"));
        assert!(matches!(
            err.root_cause(),
            Error::DimensionMismatch {
                expected: (1024, 512),
                found: (512, 256),
                ..
            }
        ));
    }

    #[test]
    fn parse_and_duplicate_errors() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join(MANIFEST_FILE);
        std::fs::write(&p, "{ not json").unwrap();
        assert!(matches!(
            load_manifest(&p),
            Err(Error::ManifestParse { .. })
        ));
        assert!(matches!(
            load_manifest(dir.path().join("nope.json")),
            Err(Error::MissingFile(_))
        ));

        let e = write_entry(dir.path(), "a", (2, 2), (2, 2));
        write_manifest(
            &ManifestFile {
                root: ".".into(),
                entries: vec![e.clone(), e],
            },
            &p,
        )
        .unwrap();
        assert!(matches!(load_manifest(&p), Err(Error::DuplicateImageId(_))));
    }
}
