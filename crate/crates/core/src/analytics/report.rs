use std::io::Write;

use crate::analytics::{pearson_r, series_for_task1, spearman_r};
use crate::error::{Error, Result};
use crate::metrics::MaskTable;
use crate::model::{CategoryId, CategoryTable};

/// Size/IoU correlation of one category; `None` when degenerate.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationRow {
    pub category: CategoryId,
    pub n_points: usize,
    pub pearson_r: Option<f64>,
    pub spearman_r: Option<f64>,
}

/// One row per category that has at least one mask-table row.
pub fn correlation_report(table: &MaskTable) -> Vec<CorrelationRow> {
    series_for_task1(table, None)
        .into_iter()
        .map(|s| CorrelationRow {
            category: s.category,
            n_points: s.points.len(),
            pearson_r: pearson_r(&s.points).ok(),
            spearman_r: spearman_r(&s.points).ok(),
        })
        .collect()
}

pub fn write_correlation_csv<W: Write>(
    rows: &[CorrelationRow],
    table: &CategoryTable,
    out: W,
) -> Result<()> {
    let io = |e: csv::Error| Error::io("<csv>", std::io::Error::other(e));
    let fmt = |v: Option<f64>| v.map(|r| format!("{r:.6}")).unwrap_or_default();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["category", "n_points", "pearson_r", "spearman_r"])
        .map_err(io)?;
    for r in rows {
        w.write_record([
            table.name(r.category),
            &r.n_points.to_string(),
            &fmt(r.pearson_r),
            &fmt(r.spearman_r),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::io("<csv>", e))
}
