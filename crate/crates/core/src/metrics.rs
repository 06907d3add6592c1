//! IoU, object sizes, the dataset-wide mask table and per-image occupancy.
//!
//! All per-category quantities of an image come out of one pass over the
//! paired masks ([`ClassCounts`]) instead of one scan per category.

use std::collections::BTreeMap;
use std::io::Write;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ingest::{load_label_map_at, DatasetManifest, ManifestEntry, Resolution};
use crate::model::{
    ensure_same_dims, CategoryId, CategoryTable, LabelMap, MaskRecord, OccupancyRecord,
};

/// Per-label pixel counts for a (given, pred) pair, indexed by label byte.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassCounts {
    pub given: [u64; 256],
    pub pred: [u64; 256],
    pub intersection: [u64; 256],
    pub total: u64,
}

impl ClassCounts {
    pub fn compute(given: &LabelMap, pred: &LabelMap) -> Result<Self> {
        ensure_same_dims("given vs pred mask", given.dims(), pred.dims())?;
        let mut c = ClassCounts {
            given: [0; 256],
            pred: [0; 256],
            intersection: [0; 256],
            total: given.labels().len() as u64,
        };
        for (g, p) in given.labels().iter().zip(pred.labels()) {
            let (g, p) = (g.get() as usize, p.get() as usize);
            c.given[g] += 1;
            c.pred[p] += 1;
            if g == p {
                c.intersection[g] += 1;
            }
        }
        Ok(c)
    }

    pub fn union(&self, c: CategoryId) -> u64 {
        let i = c.get() as usize;
        self.given[i] + self.pred[i] - self.intersection[i]
    }

    pub fn iou_percent(&self, c: CategoryId) -> Result<f64> {
        if c.is_ignore() {
            return Err(Error::IgnoreCategory);
        }
        let union = self.union(c);
        if union == 0 {
            return Err(Error::EmptyUnion(c.get()));
        }
        Ok(100.0 * self.intersection[c.get() as usize] as f64 / union as f64)
    }

    fn occupancy(&self, count: u64) -> f64 {
        100.0 * count as f64 / self.total as f64
    }
}

/// `100 * |given ∩ pred| / |given ∪ pred|` for category `c`.
pub fn iou_percent(given: &LabelMap, pred: &LabelMap, c: CategoryId) -> Result<f64> {
    if c.is_ignore() {
        return Err(Error::IgnoreCategory);
    }
    ensure_same_dims("iou", given.dims(), pred.dims())?;
    let (mut inter, mut union) = (0u64, 0u64);
    for (&g, &p) in given.labels().iter().zip(pred.labels()) {
        let (a, b) = (g == c, p == c);
        inter += (a && b) as u64;
        union += (a || b) as u64;
    }
    if union == 0 {
        return Err(Error::EmptyUnion(c.get()));
    }
    Ok(100.0 * inter as f64 / union as f64)
}

pub fn object_size(m: &LabelMap, c: CategoryId) -> u64 {
    m.labels().iter().filter(|&&l| l == c).count() as u64
}

/// Rows for the categories present in the given mask, in id order.
pub fn mask_records(image_id: &str, counts: &ClassCounts) -> Vec<MaskRecord> {
    CategoryId::all()
        .filter(|c| counts.given[c.get() as usize] > 0)
        .map(|c| MaskRecord {
            image_id: image_id.to_owned(),
            category: c,
            iou_percent: counts.iou_percent(c).expect("present in given"),
            size_pixels: counts.given[c.get() as usize],
        })
        .collect()
}

pub fn occupancy_records(image_id: &str, counts: &ClassCounts) -> Vec<OccupancyRecord> {
    CategoryId::all()
        .filter(|&c| counts.union(c) > 0)
        .map(|c| {
            let i = c.get() as usize;
            OccupancyRecord {
                image_id: image_id.to_owned(),
                category: c,
                given_occupancy_pct: counts.occupancy(counts.given[i]),
                pred_occupancy_pct: counts.occupancy(counts.pred[i]),
                iou_percent: counts.iou_percent(c).expect("nonempty union"),
            }
        })
        .collect()
}

/// One record per non-ignore category in given ∪ pred.
pub fn occupancy_table(
    image_id: &str,
    given: &LabelMap,
    pred: &LabelMap,
) -> Result<Vec<OccupancyRecord>> {
    Ok(occupancy_records(
        image_id,
        &ClassCounts::compute(given, pred)?,
    ))
}

/// Dataset-wide table; at most one row per `(image_id, category)`.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct MaskTable {
    pub rows: Vec<MaskRecord>,
}

pub const MASK_TABLE_HEADER: [&str; 4] = ["image_id", "category", "iou_percent", "size_pixels"];

impl MaskTable {
    pub fn from_rows(mut rows: Vec<MaskRecord>) -> Self {
        rows.sort_by(|a, b| {
            a.image_id
                .cmp(&b.image_id)
                .then(a.category.cmp(&b.category))
        });
        Self { rows }
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows_for(&self, c: CategoryId) -> impl Iterator<Item = &MaskRecord> {
        self.rows.iter().filter(move |r| r.category == c)
    }

    /// CSV with category names and IoU at 6 decimals.
    pub fn write_csv<W: Write>(&self, table: &CategoryTable, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let io = |e: csv::Error| Error::io("<csv>", std::io::Error::other(e));
        w.write_record(MASK_TABLE_HEADER).map_err(io)?;
        for r in &self.rows {
            w.write_record([
                r.image_id.as_str(),
                table.name(r.category),
                &format!("{:.6}", r.iou_percent),
                &r.size_pixels.to_string(),
            ])
            .map_err(io)?;
        }
        w.flush().map_err(|e| Error::io("<csv>", e))
    }

    pub fn to_csv_string(&self, table: &CategoryTable) -> String {
        let mut buf = Vec::new();
        self.write_csv(table, &mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// Mask table plus per-image occupancy, from a single load of every mask.
#[derive(Debug, Clone, Default)]
pub struct DatasetTables {
    pub mask_table: MaskTable,
    pub occupancy: BTreeMap<String, Vec<OccupancyRecord>>,
}

fn entry_counts(entry: &ManifestEntry, resolution: Option<Resolution>) -> Result<ClassCounts> {
    let run = || {
        let given = load_label_map_at(&entry.given_mask_path, resolution)?;
        let pred = load_label_map_at(&entry.pred_mask_path, resolution)?;
        ClassCounts::compute(&given, &pred)
    };
    run().map_err(|e| e.in_entry(&entry.image_id))
}

/// Masks are resampled to `resolution` (nearest neighbour) before counting;
/// `None` keeps each mask at its stored size.
pub fn build_dataset_tables(
    ds: &DatasetManifest,
    resolution: Option<Resolution>,
) -> Result<DatasetTables> {
    let per_image: Vec<(String, ClassCounts)> = ds
        .entries
        .par_iter()
        .map(|e| Ok((e.image_id.clone(), entry_counts(e, resolution)?)))
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut occupancy = BTreeMap::new();
    for (id, counts) in &per_image {
        rows.extend(mask_records(id, counts));
        occupancy.insert(id.clone(), occupancy_records(id, counts));
    }
    Ok(DatasetTables {
        mask_table: MaskTable::from_rows(rows),
        occupancy,
    })
}

pub fn build_mask_table(ds: &DatasetManifest, resolution: Option<Resolution>) -> Result<MaskTable> {
    let rows: Vec<Vec<MaskRecord>> = ds
        .entries
        .par_iter()
        .map(|e| Ok(mask_records(&e.image_id, &entry_counts(e, resolution)?)))
        .collect::<Result<_>>()?;
    Ok(MaskTable::from_rows(rows.into_iter().flatten().collect()))
}
