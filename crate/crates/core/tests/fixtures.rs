use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use segscope_core::analytics::{correlation_report, pearson_r, series_for_task1};
use segscope_core::ingest::{
    generate_fixtures, generate_fixtures_with, load_label_map, FixtureConfig, FixtureDescription,
    FIXTURE_FILE, NEGATIVE_CATEGORY, POSITIVE_CATEGORY,
};
use segscope_core::metrics::{build_dataset_tables, build_mask_table};
use segscope_core::{CategoryId, CategoryTable, LabelMap};
use walk::tree;

mod walk {
    use std::collections::BTreeMap;
    use std::path::{Path, PathBuf};

    /// Relative path -> file bytes for every file under `root`.
    pub fn tree(root: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
        let mut out = BTreeMap::new();
        let mut stack = vec![root.to_path_buf()];
        while let Some(dir) = stack.pop() {
            for e in std::fs::read_dir(&dir).unwrap() {
                let p = e.unwrap().path();
                if p.is_dir() {
                    stack.push(p);
                } else {
                    out.insert(
                        p.strip_prefix(root).unwrap().to_path_buf(),
                        std::fs::read(&p).unwrap(),
                    );
                }
            }
        }
        out
    }
}

fn small(
    seed: u64,
    n: usize,
    dir: &Path,
) -> (segscope_core::ingest::DatasetManifest, FixtureDescription) {
    let cfg = FixtureConfig::new(seed, n).with_size(64, 64);
    let m = generate_fixtures_with(&cfg, &CategoryTable::default(), dir).unwrap();
    let d = FixtureDescription::load(dir.join(FIXTURE_FILE)).unwrap();
    (m, d)
}

/// Per-category rescan of both masks, one full pass per category.
fn brute_rows(given: &LabelMap, pred: &LabelMap) -> Vec<(u8, f64, u64)> {
    let mut rows = Vec::new();
    for c in 0..19u8 {
        let (mut g, mut inter, mut union) = (0u64, 0u64, 0u64);
        for y in 0..given.height() {
            for x in 0..given.width() {
                let a = given.get(x, y).unwrap().get() == c;
                let b = pred.get(x, y).unwrap().get() == c;
                g += a as u64;
                inter += (a && b) as u64;
                union += (a || b) as u64;
            }
        }
        if g > 0 {
            rows.push((c, 100.0 * inter as f64 / union as f64, g));
        }
    }
    rows
}

#[test]
fn fixtures_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    small(1, 3, a.path());
    small(1, 3, b.path());
    let (ta, tb) = (tree(a.path()), tree(b.path()));
    assert!(!ta.is_empty());
    assert_eq!(ta, tb);

    let c = tempfile::tempdir().unwrap();
    small(2, 3, c.path());
    assert_ne!(tree(c.path()), ta);
}

#[test]
fn default_size_matches_working_resolution() {
    let dir = tempfile::tempdir().unwrap();
    let m = generate_fixtures(5, 1, dir.path()).unwrap();
    let g = load_label_map(&m.entries[0].given_mask_path).unwrap();
    assert_eq!(g.dims(), (1024, 512));
}

#[test]
fn mask_table_matches_brute_force_and_geometry() {
    let dir = tempfile::tempdir().unwrap();
    let (manifest, desc) = small(7, 20, dir.path());
    let table = build_mask_table(&manifest, None).unwrap();

    let mut expected = Vec::new();
    for e in &manifest.entries {
        let g = load_label_map(&e.given_mask_path).unwrap();
        let p = load_label_map(&e.pred_mask_path).unwrap();
        for (c, iou, size) in brute_rows(&g, &p) {
            expected.push((e.image_id.clone(), c, iou, size));
        }
    }
    let got: Vec<_> = table
        .rows
        .iter()
        .map(|r| {
            (
                r.image_id.clone(),
                r.category.get(),
                r.iou_percent,
                r.size_pixels,
            )
        })
        .collect();
    assert_eq!(got, expected);

    // Geometry from the generator's description.
    let by_key: BTreeMap<_, _> = table
        .rows
        .iter()
        .map(|r| ((r.image_id.as_str(), r.category.get()), r))
        .collect();
    let mut n_given = 0;
    for img in &desc.images {
        for r in img.rects.iter().filter(|r| r.in_given) {
            n_given += 1;
            let row = by_key[&(img.image_id.as_str(), r.category)];
            assert_eq!(row.size_pixels, r.area());
            assert!((row.iou_percent - r.expected_iou_percent()).abs() < 1e-9);
        }
        for r in img.rects.iter().filter(|r| !r.in_given) {
            assert!(!by_key.contains_key(&(img.image_id.as_str(), r.category)));
        }
        if img.perfect {
            assert!(table
                .rows
                .iter()
                .filter(|r| r.image_id == img.image_id)
                .all(|r| r.iou_percent == 100.0));
        }
    }
    assert_eq!(table.len(), n_given);
}

#[test]
fn occupancy_conservation_on_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let (manifest, _) = small(3, 10, dir.path());
    let tables = build_dataset_tables(&manifest, None).unwrap();
    assert_eq!(
        tables.mask_table,
        build_mask_table(&manifest, None).unwrap()
    );
    for e in &manifest.entries {
        let g = load_label_map(&e.given_mask_path).unwrap();
        let p = load_label_map(&e.pred_mask_path).unwrap();
        let n = g.labels().len() as f64;
        let ig = 100.0 * g.labels().iter().filter(|c| c.is_ignore()).count() as f64 / n;
        let ip = 100.0 * p.labels().iter().filter(|c| c.is_ignore()).count() as f64 / n;
        let recs = &tables.occupancy[&e.image_id];
        let sg: f64 = recs.iter().map(|r| r.given_occupancy_pct).sum();
        let sp: f64 = recs.iter().map(|r| r.pred_occupancy_pct).sum();
        assert!((sg + ig - 100.0).abs() < 1e-9);
        assert!((sp + ip - 100.0).abs() < 1e-9);
        let cats: BTreeSet<u8> = g
            .labels()
            .iter()
            .chain(p.labels())
            .filter(|c| !c.is_ignore())
            .map(|c| c.get())
            .collect();
        assert_eq!(
            recs.iter()
                .map(|r| r.category.get())
                .collect::<BTreeSet<_>>(),
            cats
        );
    }
}

#[test]
fn resizing_to_working_resolution_scales_sizes() {
    let dir = tempfile::tempdir().unwrap();
    let (manifest, _) = small(9, 4, dir.path());
    let native = build_mask_table(&manifest, None).unwrap();
    let doubled = build_mask_table(&manifest, Some((128, 128))).unwrap();
    assert_eq!(native.len(), doubled.len());
    for (a, b) in native.rows.iter().zip(&doubled.rows) {
        assert_eq!(b.size_pixels, 4 * a.size_pixels);
        assert!((a.iou_percent - b.iou_percent).abs() < 1e-9);
    }
}

#[test]
fn correlated_classes_are_recovered() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = FixtureConfig::new(42, 30).with_size(256, 128);
    let manifest = generate_fixtures_with(&cfg, &CategoryTable::default(), dir.path()).unwrap();
    let table = build_mask_table(&manifest, None).unwrap();
    let pos = CategoryId::new(POSITIVE_CATEGORY as u32).unwrap();
    let neg = CategoryId::new(NEGATIVE_CATEGORY as u32).unwrap();
    let rp = pearson_r(&series_for_task1(&table, Some(pos))[0].points).unwrap();
    let rn = pearson_r(&series_for_task1(&table, Some(neg))[0].points).unwrap();
    assert!(rp > 0.9, "{rp}");
    assert!(rn < -0.9, "{rn}");
    let report = correlation_report(&table);
    assert_eq!(
        report.iter().map(|r| r.n_points).sum::<usize>(),
        table.len()
    );
}
