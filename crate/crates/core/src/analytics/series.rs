use std::collections::BTreeSet;

use serde::Serialize;

use crate::metrics::MaskTable;
use crate::model::{CategoryId, OccupancyRecord};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum AxisMeaning {
    SizePixels,
    IouPercent,
    GivenOccupancy,
    PredOccupancy,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterSeries {
    pub category: CategoryId,
    pub x_meaning: AxisMeaning,
    pub y_meaning: AxisMeaning,
    pub points: Vec<(f64, f64)>,
}

impl ScatterSeries {
    fn new(category: CategoryId, x_meaning: AxisMeaning, y_meaning: AxisMeaning) -> Self {
        Self {
            category,
            x_meaning,
            y_meaning,
            points: Vec::new(),
        }
    }
}

/// Size-vs-IoU series for one category, in table order.
pub fn detail_series(table: &MaskTable, category: CategoryId) -> ScatterSeries {
    let mut s = ScatterSeries::new(category, AxisMeaning::SizePixels, AxisMeaning::IouPercent);
    s.points = table
        .rows_for(category)
        .map(|r| (r.size_pixels as f64, r.iou_percent))
        .collect();
    s
}

/// `None` gives the overview: one series per category that has rows, by id.
/// `Some(c)` gives the detail series for `c`, possibly empty.
pub fn series_for_task1(table: &MaskTable, category: Option<CategoryId>) -> Vec<ScatterSeries> {
    match category {
        Some(c) => vec![detail_series(table, c)],
        None => {
            let present: BTreeSet<CategoryId> = table.rows.iter().map(|r| r.category).collect();
            present
                .into_iter()
                .map(|c| detail_series(table, c))
                .collect()
        }
    }
}

/// The three per-image scatter plots, each as one single-point series per
/// selected category (so every point keeps its category hue).
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct Task3Groups {
    /// x = given occupancy, y = predicted occupancy.
    pub given_vs_pred: Vec<ScatterSeries>,
    /// x = given occupancy, y = IoU.
    pub iou_vs_given: Vec<ScatterSeries>,
    /// x = predicted occupancy, y = IoU.
    pub iou_vs_pred: Vec<ScatterSeries>,
}

pub fn series_for_task3(
    records: &[OccupancyRecord],
    selected: &BTreeSet<CategoryId>,
) -> Task3Groups {
    use AxisMeaning::*;
    let mut g = Task3Groups::default();
    for r in records.iter().filter(|r| selected.contains(&r.category)) {
        let push = |dst: &mut Vec<ScatterSeries>, xm, ym, pt| {
            let mut s = ScatterSeries::new(r.category, xm, ym);
            s.points.push(pt);
            dst.push(s);
        };
        push(
            &mut g.given_vs_pred,
            GivenOccupancy,
            PredOccupancy,
            (r.given_occupancy_pct, r.pred_occupancy_pct),
        );
        push(
            &mut g.iou_vs_given,
            GivenOccupancy,
            IouPercent,
            (r.given_occupancy_pct, r.iou_percent),
        );
        push(
            &mut g.iou_vs_pred,
            PredOccupancy,
            IouPercent,
            (r.pred_occupancy_pct, r.iou_percent),
        );
    }
    g
}
